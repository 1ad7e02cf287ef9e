//! Finite-dimensional representations of R: the canonical sequence ε_n, the
//! general partition-indexed families, validation against the defining
//! relation, evaluation of normal-form elements, faithfulness witnesses, and
//! twisting by automorphisms.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QMat, Rat};
use crate::freealg::{Automorphism, NormalPoly};

/// Weakly decreasing sequence of positive integers; the Jordan type of Y.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::DimensionMismatch("partition part must be >= 1".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::DimensionMismatch(
                "partition parts must be weakly decreasing".into(),
            ));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn block_count(&self) -> usize {
        self.parts.len()
    }

    /// Row/column offset of each block in the assembled n×n matrix.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut acc = 0;
        for &p in &self.parts {
            out.push(acc);
            acc += p;
        }
        out
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// A validated representation: a pair (X, Y) with XY − YX = Y² exactly and
/// Y nilpotent, together with the Jordan type of Y.
#[derive(Clone, PartialEq, Debug)]
pub struct Rep {
    n: usize,
    x: QMat,
    y: QMat,
    partition: Partition,
}

impl Rep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &QMat {
        &self.x
    }

    pub fn y(&self) -> &QMat {
        &self.y
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    n: usize,
    partition: Partition,
    #[serde(rename = "X")]
    x: QMat,
    #[serde(rename = "Y")]
    y: QMat,
}

impl Serialize for Rep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepJson {
            n: self.n,
            partition: self.partition.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rep {
    /// Deserialization revalidates: the relation, Y's nilpotency, and the
    /// recorded partition are all checked.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RepJson::deserialize(d)?;
        let rep = validate_rep(raw.x, raw.y).map_err(serde::de::Error::custom)?;
        if rep.n != raw.n || rep.partition != raw.partition {
            return Err(serde::de::Error::custom(
                "recorded n/partition disagree with the matrices",
            ));
        }
        Ok(rep)
    }
}

/// Checks XY − YX = Y² exactly and that Y is nilpotent; records the Jordan
/// type of Y. The first offending entry is reported on failure.
pub fn validate_rep(x: QMat, y: QMat) -> Result<Rep> {
    if !x.is_square() || x.rows() != y.rows() || !y.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "validate_rep: X is {}x{}, Y is {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let n = x.rows();
    let lhs = x.commutator(&y)?;
    let rhs = y.pow(2)?;
    for i in 0..n {
        for j in 0..n {
            if lhs.get(i, j) != rhs.get(i, j) {
                return Err(Error::RelationFails {
                    row: i,
                    col: j,
                    lhs: lhs.get(i, j).to_string(),
                    rhs: rhs.get(i, j).to_string(),
                });
            }
        }
    }
    // In characteristic zero the relation already forces this; the check is a
    // self-check on the arithmetic.
    let partition = y.nilpotent_partition().map_err(|e| match e {
        Error::NotNilpotent => Error::YNotNilpotent,
        other => other,
    })?;
    Ok(Rep { n, x, y, partition })
}

/// The superdiagonal matrix with entries (0, −1, −2, …, −(n−2)); the x-image
/// of the base representation ε_n.
pub fn epsilon_x(n: usize) -> QMat {
    QMat::from_fn(n, n, |i, j| {
        if j == i + 1 {
            Rat::from_int(-(i as i64))
        } else {
            Rat::zero()
        }
    })
}

/// The base representation ε_n: y ↦ J_n, x ↦ the superdiagonal
/// (0, −1, …, −(n−2)).
pub fn build_epsilon(n: usize) -> Rep {
    assert!(n >= 1);
    validate_rep(epsilon_x(n), QMat::jordan_block(n)).expect("epsilon_n satisfies the relation")
}

/// Parameters of the full-block family: X = λI + ε_n(x) + c₁Y + … + c_{n−1}Y^{n−1}.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FullBlockParams {
    pub lambda: Rat,
    pub c: Vec<Rat>,
}

impl FullBlockParams {
    pub fn zero(n: usize) -> Self {
        FullBlockParams {
            lambda: Rat::zero(),
            c: vec![Rat::zero(); n.saturating_sub(1)],
        }
    }
}

/// Full-block diagonal block matrix λI + ε(x) + Toeplitz(c), without the
/// validation wrapper.
fn full_block_x(n: usize, lambda: &Rat, c: &[Rat]) -> QMat {
    QMat::from_fn(n, n, |i, j| {
        if j < i {
            Rat::zero()
        } else if j == i {
            lambda.clone()
        } else {
            let d = j - i;
            let mut v = c[d - 1].clone();
            if d == 1 {
                v += &Rat::from_int(-(i as i64));
            }
            v
        }
    })
}

pub fn build_full_block(n: usize, params: &FullBlockParams) -> Result<Rep> {
    assert!(n >= 1);
    if params.c.len() != n - 1 {
        return Err(Error::ParamCountMismatch {
            expected: n - 1,
            got: params.c.len(),
        });
    }
    validate_rep(
        full_block_x(n, &params.lambda, &params.c),
        QMat::jordan_block(n),
    )
}

/// Parameters for a partition-indexed representation.
///
/// `lambda` holds one eigenvalue per block (in partition order). `toeplitz`
/// maps block coordinates "i,j" (0-based) to Toeplitz coefficients:
/// - key "i,i": the n_i − 1 coefficients c₁..c_{n_i−1} of the diagonal block,
///   as in the full-block family;
/// - key "i,j" (i ≠ j): the min(n_i, n_j) free coefficients of the
///   off-diagonal block, filling the allowed diagonals from the longest
///   upward (diagonal indices max(0, n_j − n_i) .. n_j − 1).
///
/// Missing keys mean zero blocks. The total free-parameter budget is
/// `param_count`.
#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct PartitionParams {
    pub lambda: Vec<Rat>,
    #[serde(default)]
    pub toeplitz: BTreeMap<String, Vec<Rat>>,
}

impl PartitionParams {
    pub fn zero(p: &Partition) -> Self {
        PartitionParams {
            lambda: vec![Rat::zero(); p.block_count()],
            toeplitz: BTreeMap::new(),
        }
    }

    pub fn set_block(&mut self, i: usize, j: usize, coeffs: Vec<Rat>) {
        self.toeplitz.insert(format!("{i},{j}"), coeffs);
    }
}

/// Number of free rational parameters of the family over a partition:
/// Σᵢ nᵢ + Σ_{i≠j} min(nᵢ, nⱼ).
pub fn param_count(p: &Partition) -> usize {
    let parts = p.parts();
    let mut count: usize = parts.iter().sum();
    for (i, &ni) in parts.iter().enumerate() {
        for (j, &nj) in parts.iter().enumerate() {
            if i != j {
                count += ni.min(nj);
            }
        }
    }
    count
}

/// Expected coefficient count for block (i, j) of a partition.
fn block_param_len(parts: &[usize], i: usize, j: usize) -> usize {
    if i == j {
        parts[i] - 1
    } else {
        parts[i].min(parts[j])
    }
}

/// Off-diagonal n_i×n_j block with the given free Toeplitz coefficients:
/// coeffs[t] sits on diagonal d = max(0, n_j − n_i) + t, entries below the
/// longest allowed diagonal are zero (forced by A·J_{n_j} = J_{n_i}·A).
fn off_diagonal_block(ni: usize, nj: usize, coeffs: &[Rat]) -> QMat {
    let d0 = nj.saturating_sub(ni);
    QMat::from_fn(ni, nj, |r, s| {
        if s >= r + d0 {
            let t = s - r - d0;
            if t < coeffs.len() {
                return coeffs[t].clone();
            }
        }
        Rat::zero()
    })
}

/// Assembles the blockwise representation of a partition: Y = ⊕ J_{nᵢ},
/// diagonal blocks of X are full-block matrices, off-diagonal blocks are the
/// constrained rectangular Toeplitz matrices.
pub fn build_from_partition(p: &Partition, params: &PartitionParams) -> Result<Rep> {
    let parts = p.parts();
    let b = parts.len();
    let n = p.n();
    if params.lambda.len() != b {
        return Err(Error::ParamCountMismatch {
            expected: b,
            got: params.lambda.len(),
        });
    }
    let offsets = p.offsets();

    let mut x = QMat::zeros(n, n);
    let mut y = QMat::zeros(n, n);
    for (i, &ni) in parts.iter().enumerate() {
        let block = full_block_x(
            ni,
            &params.lambda[i],
            &vec![Rat::zero(); ni.saturating_sub(1)],
        );
        paste(&mut x, &block, offsets[i], offsets[i]);
        paste(&mut y, &QMat::jordan_block(ni), offsets[i], offsets[i]);
    }
    for (key, coeffs) in &params.toeplitz {
        let (i, j) = parse_block_key(key, b)?;
        let expected = block_param_len(parts, i, j);
        if coeffs.len() != expected {
            return Err(Error::ParamCountMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        if i == j {
            let block = QMat::from_fn(parts[i], parts[i], |r, s| {
                if s > r {
                    coeffs[s - r - 1].clone()
                } else {
                    Rat::zero()
                }
            });
            add_at(&mut x, &block, offsets[i], offsets[i]);
        } else {
            let block = off_diagonal_block(parts[i], parts[j], coeffs);
            paste(&mut x, &block, offsets[i], offsets[j]);
        }
    }
    validate_rep(x, y)
}

fn parse_block_key(key: &str, blocks: usize) -> Result<(usize, usize)> {
    let parse = || -> Option<(usize, usize)> {
        let (a, b) = key.split_once(',')?;
        Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
    };
    match parse() {
        Some((i, j)) if i < blocks && j < blocks => Ok((i, j)),
        _ => Err(Error::Parse {
            pos: 0,
            msg: format!("invalid block key {key:?} for {blocks} blocks"),
        }),
    }
}

fn paste(dest: &mut QMat, block: &QMat, row: usize, col: usize) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            dest.set(row + r, col + c, block.get(r, c).clone());
        }
    }
}

fn add_at(dest: &mut QMat, block: &QMat, row: usize, col: usize) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = dest.get(row + r, col + c) + block.get(r, c);
            dest.set(row + r, col + c, v);
        }
    }
}

/// Evaluates a normal-form element: Σ coeff(k,l) · Y^k · X^l.
pub fn evaluate(p: &NormalPoly, r: &Rep) -> QMat {
    let n = r.n();
    let max_k = p.terms().keys().map(|&(k, _)| k).max().unwrap_or(0);
    let max_l = p.terms().keys().map(|&(_, l)| l).max().unwrap_or(0);
    let mut y_pows = Vec::with_capacity(max_k + 1);
    let mut x_pows = Vec::with_capacity(max_l + 1);
    y_pows.push(QMat::identity(n));
    x_pows.push(QMat::identity(n));
    for k in 1..=max_k {
        y_pows.push(y_pows[k - 1].mul(r.y()).expect("square"));
    }
    for l in 1..=max_l {
        x_pows.push(x_pows[l - 1].mul(r.x()).expect("square"));
    }
    let mut out = QMat::zeros(n, n);
    for (&(k, l), c) in p.terms() {
        let term = y_pows[k].mul(&x_pows[l]).expect("square").scale(c);
        out = out.add(&term).expect("square");
    }
    out
}

/// Closed form for ε_n(y^k x^m): the only nonzero diagonal is number k+m,
/// with entry (−1)^m (k+j)(k+j+1)⋯(k+j+m−1) in row j.
pub fn epsilon_monomial(n: usize, k: usize, m: usize) -> QMat {
    let sign = if m % 2 == 0 { 1 } else { -1 };
    QMat::from_fn(n, n, |i, j| {
        if j != i + k + m {
            return Rat::zero();
        }
        let mut v = Rat::from_int(sign);
        for t in 0..m {
            v *= &Rat::from_int((k + i + t) as i64);
        }
        v
    })
}

/// Witness that ε separates a nonzero element: the smallest n₀ ≥ max(1, 2·deg f)
/// with ε_{n₀}(f) ≠ 0, together with the recomputed nonzero flag.
///
/// At n = 2·deg f the top diagonal of ε_n has exactly deg f entries, and a
/// degree-(deg f) polynomial can vanish on all of them (f = x is the smallest
/// case: the superdiagonal of ε₂(x) is just the entry 0). One extra dimension
/// always suffices, since a nonzero polynomial of degree d cannot have d+1
/// roots; the loop is capped accordingly and the flag is true for every
/// nonzero input.
pub fn faithfulness_witness(f: &NormalPoly) -> Result<(usize, bool)> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let base = (2 * deg).max(1);
    for n0 in base..=2 * deg + 1 {
        if !evaluate(f, &build_epsilon(n0)).is_zero() {
            return Ok((n0, true));
        }
    }
    Ok((2 * deg + 1, false))
}

/// Twist by an automorphism (p, c): X ↦ cX + p(Y), Y ↦ cY. The result is
/// revalidated.
pub fn twist(r: &Rep, f: &Automorphism) -> Result<Rep> {
    let n = r.n();
    let mut py = QMat::zeros(n, n);
    let mut ypow = QMat::identity(n);
    for (k, coef) in f.p.iter().enumerate() {
        if k > 0 {
            ypow = ypow.mul(r.y())?;
        }
        py = py.add(&ypow.scale(coef))?;
    }
    let x = r.x().scale(&f.c).add(&py)?;
    let y = r.y().scale(&f.c);
    validate_rep(x, y)
}

/// True when (X, Y) is literally in the standard blockwise shape: Y = ⊕ J_{nᵢ}
/// and X's blocks have the constrained Toeplitz patterns.
pub fn is_standard_shape(r: &Rep) -> bool {
    let parts = r.partition().parts();
    let offsets = r.partition().offsets();
    let n = r.n();
    // Y must be exactly the block-diagonal Jordan matrix of the partition.
    let expected_y = QMat::from_fn(n, n, |i, j| {
        for (b, &off) in offsets.iter().enumerate() {
            if i >= off && i < off + parts[b] {
                return if j == i + 1 && j < off + parts[b] {
                    Rat::one()
                } else {
                    Rat::zero()
                };
            }
        }
        Rat::zero()
    });
    if r.y() != &expected_y {
        return false;
    }
    for (bi, &ni) in parts.iter().enumerate() {
        for (bj, &nj) in parts.iter().enumerate() {
            let (ri, cj) = (offsets[bi], offsets[bj]);
            if bi == bj {
                // upper triangular, constant diagonal, Toeplitz above except
                // the arithmetic superdiagonal
                for a in 0..ni {
                    for b in 0..ni {
                        let v = r.x().get(ri + a, cj + b);
                        if b < a && !v.is_zero() {
                            return false;
                        }
                        if b >= a {
                            let anchor = r.x().get(ri, cj + b - a);
                            let expect = if b - a == 1 {
                                anchor + &Rat::from_int(-(a as i64))
                            } else {
                                anchor.clone()
                            };
                            if *v != expect {
                                return false;
                            }
                        }
                    }
                }
            } else {
                let d0 = nj.saturating_sub(ni);
                for a in 0..ni {
                    for b in 0..nj {
                        let v = r.x().get(ri + a, cj + b);
                        if b < a + d0 {
                            if !v.is_zero() {
                                return false;
                            }
                        } else if a > 0 && *v != *r.x().get(ri, cj + b - a) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Eigenvalues of X with multiplicities. When the representation is in the
/// standard blockwise shape and the partition has pairwise distinct parts,
/// the eigenvalues are read off the diagonal-block diagonals; otherwise they
/// are recovered from the characteristic polynomial, failing if it does not
/// split over the rationals.
pub fn eigenvalues_of_x(r: &Rep) -> Result<Vec<(Rat, usize)>> {
    if r.partition().has_distinct_parts() && is_standard_shape(r) {
        let offsets = r.partition().offsets();
        let mut mult: BTreeMap<Rat, usize> = BTreeMap::new();
        for (b, &off) in offsets.iter().enumerate() {
            *mult.entry(r.x().get(off, off).clone()).or_insert(0) +=
                r.partition().parts()[b];
        }
        return Ok(mult.into_iter().collect());
    }
    let (mut roots, split) = r.x().char_poly()?.rational_roots();
    if !split {
        return Err(Error::EigenvaluesNotRational);
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::{defining_relation, normal_form, parse_ncpoly, Letter, NCPoly, Word};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn nf(s: &str) -> NormalPoly {
        normal_form(&parse_ncpoly(s).unwrap())
    }

    #[test]
    fn partition_invariants() {
        assert!(Partition::new(vec![3, 2, 2, 1]).is_ok());
        assert!(Partition::new(vec![2, 3]).is_err());
        assert!(Partition::new(vec![1, 0]).is_err());
        assert_eq!(Partition::new(vec![3, 1]).unwrap().n(), 4);
        assert_eq!(Partition::new(vec![3, 1]).unwrap().offsets(), vec![0, 3]);
    }

    #[test]
    fn validate_rep_cases() {
        // Y = 0: any X works, partition all ones
        let x = QMat::from_int_rows(&[&[1, 2], &[3, 4]]);
        let r = validate_rep(x, QMat::zeros(2, 2)).unwrap();
        assert_eq!(r.partition().parts(), &[1, 1]);

        // [I,J] = 0 != J^2
        match validate_rep(QMat::identity(3), QMat::jordan_block(3)) {
            Err(Error::RelationFails { row, col, .. }) => assert_eq!((row, col), (0, 2)),
            other => panic!("expected relation failure, got {other:?}"),
        }

        for n in 1..=12 {
            let r = build_epsilon(n);
            assert_eq!(r.partition().parts(), &[n]);
        }
    }

    #[test]
    fn epsilon_small_matrices() {
        let r = build_epsilon(2);
        assert!(r.x().is_zero());
        assert_eq!(*r.y(), QMat::jordan_block(2));

        let r = build_epsilon(3);
        assert!(r.x().get(0, 1).is_zero());
        assert_eq!(*r.x().get(1, 2), Rat::from_int(-1));
        let comm = r.x().commutator(r.y()).unwrap();
        assert_eq!(comm, r.y().pow(2).unwrap());
    }

    #[test]
    fn full_block_matches_formula() {
        // λ=1, c=(1,0) at n=3
        let params = FullBlockParams {
            lambda: Rat::one(),
            c: vec![Rat::one(), Rat::zero()],
        };
        let r = build_full_block(3, &params).unwrap();
        for i in 0..3 {
            assert_eq!(*r.x().get(i, i), Rat::one());
        }
        assert_eq!(*r.x().get(0, 1), Rat::one());
        assert_eq!(*r.x().get(1, 2), Rat::zero()); // 1 + (-1)
        assert_eq!(*r.x().get(0, 2), Rat::zero());

        // zero params reduce to epsilon
        let r0 = build_full_block(4, &FullBlockParams::zero(4)).unwrap();
        assert_eq!(r0, build_epsilon(4));

        assert!(matches!(
            build_full_block(3, &FullBlockParams::zero(4)),
            Err(Error::ParamCountMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn full_block_random_params_validate() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..=10 {
            let params = FullBlockParams {
                lambda: Rat::from_int(rng.gen_range(-3..=3)),
                c: (0..n - 1).map(|_| Rat::from_int(rng.gen_range(-3..=3))).collect(),
            };
            let r = build_full_block(n, &params).unwrap();
            assert_eq!(r.partition().parts(), &[n]);
        }
    }

    #[test]
    fn partition_builder_matches_spec_shape() {
        // partition (2,1): X = [[l1,c,a],[0,l1,0],[0,b,l2]]
        let p = Partition::new(vec![2, 1]).unwrap();
        let mut params = PartitionParams::zero(&p);
        params.lambda = vec![Rat::from_int(1), Rat::from_int(3)];
        params.set_block(0, 0, vec![Rat::from_int(5)]); // c
        params.set_block(0, 1, vec![Rat::from_int(7)]); // a
        params.set_block(1, 0, vec![Rat::from_int(9)]); // b
        let r = build_from_partition(&p, &params).unwrap();
        let expected = QMat::from_int_rows(&[&[1, 5, 7], &[0, 1, 0], &[0, 9, 3]]);
        assert_eq!(*r.x(), expected);
        assert_eq!(*r.y(), QMat::from_int_rows(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]));
    }

    #[test]
    fn partition_builder_edge_cases() {
        // single block reduces to build_full_block
        let p = Partition::new(vec![4]).unwrap();
        let mut params = PartitionParams::zero(&p);
        params.lambda = vec![Rat::from_int(2)];
        params.set_block(0, 0, vec![Rat::one(), Rat::zero(), Rat::from_int(-1)]);
        let r = build_from_partition(&p, &params).unwrap();
        let fb = build_full_block(
            4,
            &FullBlockParams {
                lambda: Rat::from_int(2),
                c: vec![Rat::one(), Rat::zero(), Rat::from_int(-1)],
            },
        )
        .unwrap();
        assert_eq!(r, fb);

        // all-ones partition: Y = 0, X arbitrary from scalar blocks
        let p = Partition::new(vec![1, 1, 1]).unwrap();
        let mut params = PartitionParams::zero(&p);
        params.lambda = vec![Rat::from_int(1), Rat::from_int(2), Rat::from_int(3)];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    params.set_block(i, j, vec![Rat::from_int((10 * i + j) as i64)]);
                }
            }
        }
        let r = build_from_partition(&p, &params).unwrap();
        assert!(r.y().is_zero());
        assert_eq!(*r.x().get(1, 0), Rat::from_int(10));

        // wrong coefficient count
        let p = Partition::new(vec![3, 2]).unwrap();
        let mut params = PartitionParams::zero(&p);
        params.set_block(0, 1, vec![Rat::one()]);
        assert!(matches!(
            build_from_partition(&p, &params),
            Err(Error::ParamCountMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn partition_builder_random_params_validate() {
        let mut rng = StdRng::seed_from_u64(11);
        let partitions = [vec![3, 2], vec![4, 2, 1], vec![2, 2, 1], vec![5, 3]];
        for parts in partitions {
            let p = Partition::new(parts).unwrap();
            for _ in 0..10 {
                let params = crate::sampling::rand_partition_params(&mut rng, &p);
                let r = build_from_partition(&p, &params).unwrap();
                assert_eq!(r.partition(), &p);
            }
        }
    }

    #[test]
    fn param_count_formula() {
        assert_eq!(param_count(&Partition::new(vec![3]).unwrap()), 3);
        // (2,1): 3 + min(2,1)*2 = 5
        assert_eq!(param_count(&Partition::new(vec![2, 1]).unwrap()), 5);
        // (1,1,1): 3 + 6 = 9 (full matrix algebra worth of scalars)
        assert_eq!(param_count(&Partition::new(vec![1, 1, 1]).unwrap()), 9);
    }

    #[test]
    fn evaluate_basics() {
        let r = build_epsilon(4);
        assert_eq!(evaluate(&nf("y"), &r), QMat::jordan_block(4));
        assert!(evaluate(&nf("x*y - y*x - y^2"), &r).is_zero());
        let one = evaluate(&nf("1"), &r);
        assert_eq!(one, QMat::identity(4));
    }

    #[test]
    fn evaluate_is_a_homomorphism() {
        // normal_form then evaluate equals the direct letterwise product
        let mut rng = StdRng::seed_from_u64(13);
        let p = Partition::new(vec![3, 2]).unwrap();
        let params = crate::sampling::rand_partition_params(&mut rng, &p);
        let r = build_from_partition(&p, &params).unwrap();
        for _ in 0..100 {
            let len = rng.gen_range(0..=6);
            let w: Word = (0..len)
                .map(|_| if rng.gen_bool(0.5) { Letter::X } else { Letter::Y })
                .collect();
            let mut direct = QMat::identity(r.n());
            for l in &w {
                direct = direct
                    .mul(match l {
                        Letter::X => r.x(),
                        Letter::Y => r.y(),
                    })
                    .unwrap();
            }
            let via_nf = evaluate(&normal_form(&NCPoly::monomial(w, Rat::one())), &r);
            assert_eq!(via_nf, direct);
        }
    }

    #[test]
    fn nilnil_property() {
        // [X,Y] = Y^2 commutes with Y and is nilpotent, for random valid reps
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let r = crate::sampling::rand_rep(&mut rng, n);
            let z = r.x().commutator(r.y()).unwrap();
            assert_eq!(z.commutator(r.y()).unwrap(), QMat::zeros(n, n));
            assert!(z.is_nilpotent().unwrap());
            assert!(r.y().is_nilpotent().unwrap());
        }
    }

    #[test]
    fn epsilon_monomial_closed_form() {
        for n in 1..=10usize {
            let r = build_epsilon(n);
            for k in 0..n {
                for m in 0..n {
                    if k + m < n {
                        let closed = epsilon_monomial(n, k, m);
                        let brute = evaluate(&NormalPoly::monomial(k, m, Rat::one()), &r);
                        assert_eq!(closed, brute, "n={n} k={k} m={m}");
                    }
                }
            }
        }
        // out-of-range diagonal is zero
        assert!(epsilon_monomial(4, 2, 2).is_zero());
        // (5,1,2): rows j=0,1 carry (1+j)(2+j) = 2, 6 with sign (+)
        let m = epsilon_monomial(5, 1, 2);
        assert_eq!(*m.get(0, 3), Rat::from_int(2));
        assert_eq!(*m.get(1, 4), Rat::from_int(6));
        // pure powers of y
        assert_eq!(epsilon_monomial(6, 3, 0), QMat::jordan_block(6).pow(3).unwrap());
    }

    #[test]
    fn faithfulness_examples() {
        assert_eq!(faithfulness_witness(&nf("y")).unwrap(), (2, true));
        assert_eq!(faithfulness_witness(&nf("x*y - 2*y^2")).unwrap(), (4, true));
        assert_eq!(faithfulness_witness(&nf("3")).unwrap(), (1, true));
        // boundary case: eps_2(x) = 0, one extra dimension separates
        assert_eq!(faithfulness_witness(&nf("x")).unwrap(), (3, true));
        assert!(matches!(
            faithfulness_witness(&NormalPoly::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn faithfulness_random_polys() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..50 {
            let mut f = NormalPoly::zero();
            while f.is_zero() {
                for _ in 0..rng.gen_range(1..=4) {
                    let k = rng.gen_range(0..=3);
                    let l = rng.gen_range(0..=2);
                    f.add_term(k, l, Rat::from_int(rng.gen_range(-4..=4)));
                }
            }
            let (_, nonzero) = faithfulness_witness(&f).unwrap();
            assert!(nonzero, "separation failed for {f}");
        }
    }

    #[test]
    fn twist_properties() {
        let mut rng = StdRng::seed_from_u64(23);
        let r = crate::sampling::rand_rep(&mut rng, 5);
        assert_eq!(twist(&r, &Automorphism::identity()).unwrap(), r);

        let f = Automorphism::new(
            vec![Rat::from_int(2), Rat::from_int(-1), Rat::from_frac(1, 2)],
            Rat::from_int(3),
        )
        .unwrap();
        let t = twist(&r, &f).unwrap();
        assert_eq!(twist(&t, &f.inverse()).unwrap(), r);

        // twisting epsilon by (p, 1) gives the full-block rep with Toeplitz p(J)
        let p = vec![Rat::from_int(4), Rat::from_int(5), Rat::from_int(6)];
        let f = Automorphism::new(p, Rat::one()).unwrap();
        let t = twist(&build_epsilon(4), &f).unwrap();
        let fb = build_full_block(
            4,
            &FullBlockParams {
                lambda: Rat::from_int(4),
                c: vec![Rat::from_int(5), Rat::from_int(6), Rat::zero()],
            },
        )
        .unwrap();
        assert_eq!(t, fb);

        // twists respect automorphism application on evaluations:
        // evaluate(apply(f, w), r) = evaluate(w, twist(r, f))
        let mut rng = StdRng::seed_from_u64(29);
        let r = crate::sampling::rand_rep(&mut rng, 4);
        let f = Automorphism::new(vec![Rat::one(), Rat::from_int(2)], Rat::from_int(2)).unwrap();
        let t = twist(&r, &f).unwrap();
        for src in ["x", "y", "x^2*y", "y*x - x*y + 1"] {
            let w = parse_ncpoly(src).unwrap();
            let lhs = evaluate(&crate::freealg::apply_automorphism(&w, &f), &r);
            let rhs = evaluate(&normal_form(&w), &t);
            assert_eq!(lhs, rhs, "twist/apply mismatch on {src}");
        }
    }

    #[test]
    fn eigenvalue_read_off_and_fallback_agree() {
        let mut rng = StdRng::seed_from_u64(31);
        let partitions = [vec![3, 1], vec![4, 2, 1], vec![2, 1], vec![5, 3, 2]];
        for parts in partitions {
            let p = Partition::new(parts).unwrap();
            let params = crate::sampling::rand_partition_params(&mut rng, &p);
            let r = build_from_partition(&p, &params).unwrap();
            assert!(is_standard_shape(&r));
            let fast = eigenvalues_of_x(&r).unwrap();
            // force the fallback by conjugating (shape destroyed, spectrum kept)
            let g = crate::sampling::rand_invertible(&mut rng, r.n());
            let x2 = r.x().conjugate(&g).unwrap();
            let y2 = r.y().conjugate(&g).unwrap();
            let r2 = validate_rep(x2, y2).unwrap();
            let slow = eigenvalues_of_x(&r2).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let r = build_epsilon(5);
        assert_eq!(eigenvalues_of_x(&r).unwrap(), vec![(Rat::zero(), 5)]);

        let p = Partition::new(vec![2, 1]).unwrap();
        let mut params = PartitionParams::zero(&p);
        params.lambda = vec![Rat::from_int(1), Rat::from_int(3)];
        params.set_block(0, 1, vec![Rat::from_int(7)]);
        params.set_block(1, 0, vec![Rat::from_int(9)]);
        let r = build_from_partition(&p, &params).unwrap();
        assert_eq!(
            eigenvalues_of_x(&r).unwrap(),
            vec![(Rat::from_int(1), 2), (Rat::from_int(3), 1)]
        );

        // companion of t^2 - 2, Y = 0: irrational spectrum
        let x = QMat::from_int_rows(&[&[0, 2], &[1, 0]]);
        let r = validate_rep(x, QMat::zeros(2, 2)).unwrap();
        assert!(matches!(
            eigenvalues_of_x(&r),
            Err(Error::EigenvaluesNotRational)
        ));
    }

    #[test]
    fn relation_invariant_under_defining_relation_eval() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..20 {
            let n = rng.gen_range(1..=5);
            let r = crate::sampling::rand_rep(&mut rng, n);
            assert!(evaluate(&normal_form(&defining_relation()), &r).is_zero());
        }
    }

    #[test]
    fn rep_json_round_trip_and_validation() {
        let mut rng = StdRng::seed_from_u64(41);
        let r = crate::sampling::rand_rep(&mut rng, 4);
        let s = serde_json::to_string(&r).unwrap();
        let back: Rep = serde_json::from_str(&s).unwrap();
        assert_eq!(r, back);

        // tampered JSON must be rejected on read
        let mut v: serde_json::Value = serde_json::from_str(&s).unwrap();
        v["X"]["entries"][0][0] = serde_json::Value::String("999".into());
        let res: std::result::Result<Rep, _> = serde_json::from_value(v);
        assert!(res.is_err() || r.y().is_zero());

        let params_json = r#"{"lambda":["1","3"],"toeplitz":{"0,1":["7"],"1,0":["9"],"0,0":["5"]}}"#;
        let params: PartitionParams = serde_json::from_str(params_json).unwrap();
        let p = Partition::new(vec![2, 1]).unwrap();
        let r = build_from_partition(&p, &params).unwrap();
        assert_eq!(*r.x().get(0, 2), Rat::from_int(7));
        let back = serde_json::to_string(&params).unwrap();
        let params2: PartitionParams = serde_json::from_str(&back).unwrap();
        assert_eq!(params, params2);
    }
}
