//! Command-line front-end for the jordanian library: normal forms,
//! representation builders, image-algebra reports, canonical forms, and the
//! full property suite. Everything is exact; everything random is seeded.

use std::fmt;
use std::fs;
use std::io::Read as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use jordanian::checks;
use jordanian::exact::{QMat, Rat};
use jordanian::freealg::{normal_form, parse_ncpoly, NormalPoly};
use jordanian::imagealg::{describe_algebra, quiver};
use jordanian::repspace::{
    build_from_partition, build_full_block, evaluate, FullBlockParams, Partition, PartitionParams,
    Rep,
};
use jordanian::structure::{are_isomorphic, canonical_full_block, decompose, jacobian_rank};
use jordanian::Error;

#[derive(Parser)]
#[command(
    name = "jordanian",
    version,
    about = "Exact toolkit for representations of k<x,y>/(xy - yx - y^2)"
)]
struct Cli {
    /// Seed for every randomized search (printed in seeded outputs)
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a polynomial in x, y to its normal form (basis y^k x^l)
    Nf {
        /// Polynomial text, e.g. "x*y - 2*y^2", or "-" to read stdin
        input: String,
    },
    /// Build a representation from a partition and parameters
    Build {
        /// Comma-separated partition, e.g. "5" or "3,2,1"
        #[arg(long)]
        partition: String,
        /// Comma-separated eigenvalues, one per block (default all 0)
        #[arg(long)]
        lambda: Option<String>,
        /// Comma-separated Toeplitz coefficients (single-block families only)
        #[arg(long)]
        c: Option<String>,
        /// Path to a PartitionParams JSON file ("-" for stdin); overrides --lambda/--c
        #[arg(long)]
        params: Option<String>,
    },
    /// Check a representation JSON file against the defining relation
    Validate {
        /// Rep JSON path or "-"
        rep: String,
    },
    /// Evaluate a polynomial at a representation
    Eval {
        /// Polynomial text or "-"
        #[arg(long)]
        poly: String,
        /// Rep JSON path or "-"
        #[arg(long)]
        rep: String,
    },
    /// Describe the image algebra: dimension, radical filtration, quiver data
    Image {
        #[arg(long)]
        rep: String,
    },
    /// Quiver of the image algebra
    Quiver {
        #[arg(long)]
        rep: String,
    },
    /// Split a representation into direct summands
    Decompose {
        #[arg(long)]
        rep: String,
    },
    /// Canonical invariants (lambda, mu) of a full-block representation
    Canon {
        #[arg(long)]
        rep: String,
    },
    /// Decide whether two representations are conjugate
    Iso {
        #[arg(long)]
        rep1: String,
        #[arg(long)]
        rep2: String,
    },
    /// Rank of the centralizer-orbit derivative on the full-block stratum
    Jacobian {
        #[arg(long)]
        n: usize,
        /// Eigenvalue of the full-block family (default 0)
        #[arg(long)]
        lambda: Option<String>,
        /// Comma-separated Toeplitz coefficients c_1..c_{n-1} (default all 0)
        #[arg(long)]
        c: Option<String>,
        /// Comma-separated centralizer coefficients (default all 0)
        #[arg(long)]
        centralizer: Option<String>,
    },
    /// Run a named property suite, or all of them
    Check {
        /// Suite name (see --list) or "all"
        #[arg(default_value = "all")]
        suite: String,
        /// Largest matrix size the suites go up to
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        /// List available suite names and exit
        #[arg(long)]
        list: bool,
    },
}

/// exit 0 ok, 1 property failure, 2 usage/parse, 3 domain error
enum Failure {
    Property(String),
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {path}: {e}")))
    }
}

fn read_rep(path: &str) -> Result<Rep, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid Rep JSON: {e}")))
}

fn parse_rat(s: &str) -> Result<Rat, Failure> {
    Rat::from_str(s.trim()).map_err(|e| Failure::Usage(format!("bad rational '{s}': {e}")))
}

fn parse_rat_list(s: &str) -> Result<Vec<Rat>, Failure> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rat).collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Failure::Usage(format!("bad integer '{t}': {e}")))
        })
        .collect()
}

fn emit<T: Serialize + fmt::Display>(format: Format, value: &T) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).expect("serializable")),
        Format::Text => println!("{value}"),
    }
}

/// JSON-only payloads get a plain pretty-print in text mode.
fn emit_json<T: Serialize>(format: Format, value: &T) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).expect("serializable")),
        Format::Text => println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        ),
    }
}

fn matrix_text(m: &QMat) -> String {
    (0..m.rows())
        .map(|i| {
            let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            format!("[{}]", row.join(", "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Nf { input } => {
            let text = if input == "-" { read_input("-")? } else { input };
            let poly = parse_ncpoly(&text)?;
            let nf: NormalPoly = normal_form(&poly);
            emit(format, &nf);
        }
        Command::Build {
            partition,
            lambda,
            c,
            params,
        } => {
            let parts = parse_usize_list(&partition)?;
            let p = Partition::new(parts)?;
            let rep = if let Some(path) = params {
                let text = read_input(&path)?;
                let pp: PartitionParams = serde_json::from_str(&text)
                    .map_err(|e| Failure::Usage(format!("invalid params JSON: {e}")))?;
                build_from_partition(&p, &pp)?
            } else if p.block_count() == 1 {
                let n = p.n();
                let fb = FullBlockParams {
                    lambda: lambda.as_deref().map(parse_rat).transpose()?.unwrap_or(Rat::zero()),
                    c: match c.as_deref() {
                        Some(s) => parse_rat_list(s)?,
                        None => vec![Rat::zero(); n.saturating_sub(1)],
                    },
                };
                build_full_block(n, &fb)?
            } else {
                if c.is_some() {
                    return Err(Failure::Usage(
                        "--c is only for single-block partitions; use --params".into(),
                    ));
                }
                let mut pp = PartitionParams::zero(&p);
                if let Some(l) = lambda.as_deref() {
                    pp.lambda = parse_rat_list(l)?;
                    if pp.lambda.len() != p.block_count() {
                        return Err(Failure::Usage(format!(
                            "--lambda needs {} values for partition {p}",
                            p.block_count()
                        )));
                    }
                }
                build_from_partition(&p, &pp)?
            };
            emit_json(format, &rep);
        }
        Command::Validate { rep } => {
            let text = read_input(&rep)?;
            match serde_json::from_str::<Rep>(&text) {
                Ok(r) => {
                    emit_json(
                        format,
                        &json!({"valid": true, "n": r.n(), "partition": r.partition().parts()}),
                    );
                }
                Err(e) => {
                    emit_json(format, &json!({"valid": false, "reason": e.to_string()}));
                    return Err(Failure::Property(String::new()));
                }
            }
        }
        Command::Eval { poly, rep } => {
            let text = if poly == "-" { read_input("-")? } else { poly };
            let p = normal_form(&parse_ncpoly(&text)?);
            let r = read_rep(&rep)?;
            let m = evaluate(&p, &r);
            match format {
                Format::Json => emit_json(format, &m),
                Format::Text => println!("{}", matrix_text(&m)),
            }
        }
        Command::Image { rep } => {
            let r = read_rep(&rep)?;
            emit_json(format, &describe_algebra(&r)?);
        }
        Command::Quiver { rep } => {
            let r = read_rep(&rep)?;
            emit_json(format, &quiver(&r)?);
        }
        Command::Decompose { rep } => {
            let r = read_rep(&rep)?;
            emit_json(format, &decompose(&r)?);
        }
        Command::Canon { rep } => {
            let r = read_rep(&rep)?;
            emit_json(format, &canonical_full_block(&r)?);
        }
        Command::Iso { rep1, rep2 } => {
            let r1 = read_rep(&rep1)?;
            let r2 = read_rep(&rep2)?;
            let witness = are_isomorphic(&r1, &r2, cli.seed)?;
            emit_json(
                format,
                &json!({
                    "seed": cli.seed,
                    "isomorphic": witness.is_some(),
                    "witness": witness,
                }),
            );
        }
        Command::Jacobian {
            n,
            lambda,
            c,
            centralizer,
        } => {
            if n < 2 {
                return Err(Failure::Usage("--n must be at least 2".into()));
            }
            let params = FullBlockParams {
                lambda: lambda.as_deref().map(parse_rat).transpose()?.unwrap_or(Rat::zero()),
                c: match c.as_deref() {
                    Some(s) => parse_rat_list(s)?,
                    None => vec![Rat::zero(); n - 1],
                },
            };
            let cent = match centralizer.as_deref() {
                Some(s) => parse_rat_list(s)?,
                None => vec![Rat::zero(); n - 1],
            };
            let rank = jacobian_rank(n, &params, &cent)?;
            emit_json(format, &json!({"n": n, "rank": rank}));
        }
        Command::Check { suite, max_n, list } => {
            if list {
                for name in checks::SUITE_NAMES {
                    println!("{name}");
                }
                return Ok(());
            }
            let reports = if suite == "all" {
                checks::run_all(cli.seed, max_n)
            } else {
                match checks::run_suite(&suite, cli.seed, max_n) {
                    Some(r) => vec![r],
                    None => {
                        return Err(Failure::Usage(format!(
                            "unknown suite '{suite}'; try --list"
                        )))
                    }
                }
            };
            let all_passed = reports.iter().all(|r| r.passed);
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&json!({
                        "seed": cli.seed,
                        "max_n": max_n,
                        "passed": all_passed,
                        "suites": reports,
                    }))
                    .expect("serializable")
                ),
                Format::Text => {
                    println!("seed {} / max n {}", cli.seed, max_n);
                    for r in &reports {
                        println!("{} {}", if r.passed { "pass" } else { "FAIL" }, r.suite);
                        for c in &r.cases {
                            println!(
                                "  {} {} — {}",
                                if c.passed { "ok  " } else { "FAIL" },
                                c.name,
                                c.detail
                            );
                        }
                    }
                }
            }
            if !all_passed {
                return Err(Failure::Property(String::new()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
