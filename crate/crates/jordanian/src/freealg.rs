//! The free algebra on {x, y}, its parser, the confluent rewriting engine for
//! the relation xy = yx + y^2, closed-form commutation formulas, and the
//! automorphism group of the quotient algebra R.
//!
//! The single relation is its own Gröbner basis under deglex with x > y, so
//! reduction replaces the subword xy by yx + yy until no occurrence remains.
//! Normal monomials are exactly y^k x^l; `NormalPoly` stores them as exponent
//! pairs (k, l).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    X,
    Y,
}

/// A word over {x, y}; the empty word is the unit.
pub type Word = Vec<Letter>;

/// Element of the free algebra k<x,y>: finite map word -> coefficient,
/// zero coefficients never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Rat>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::monomial(Vec::new(), Rat::one())
    }

    pub fn monomial(word: Word, coef: Rat) -> Self {
        let mut p = NCPoly::default();
        p.add_term(word, coef);
        p
    }

    pub fn x() -> Self {
        NCPoly::monomial(vec![Letter::X], Rat::one())
    }

    pub fn y() -> Self {
        NCPoly::monomial(vec![Letter::Y], Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Rat> {
        &self.terms
    }

    pub fn add_term(&mut self, word: Word, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(word);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &coef;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
        }
    }

    pub fn add(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> NCPoly {
        let mut out = NCPoly::default();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Noncommutative product: concatenates words left-to-right.
    pub fn mul(&self, other: &NCPoly) -> NCPoly {
        let mut out = NCPoly::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> NCPoly {
        let mut acc = NCPoly::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degree of the highest term, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    /// Substitute polynomials for the generators.
    pub fn substitute(&self, for_x: &NCPoly, for_y: &NCPoly) -> NCPoly {
        let mut out = NCPoly::default();
        for (w, c) in &self.terms {
            let mut prod = NCPoly::one();
            for l in w {
                prod = prod.mul(match l {
                    Letter::X => for_x,
                    Letter::Y => for_y,
                });
            }
            out = out.add(&prod.scale(c));
        }
        out
    }
}

/// Reduced element: finite map (k, l) -> coefficient of y^k x^l.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NormalPoly {
    terms: BTreeMap<(usize, usize), Rat>,
}

impl NormalPoly {
    pub fn zero() -> Self {
        NormalPoly::default()
    }

    pub fn monomial(k: usize, l: usize, coef: Rat) -> Self {
        let mut p = NormalPoly::default();
        p.add_term(k, l, coef);
        p
    }

    pub fn constant(c: Rat) -> Self {
        NormalPoly::monomial(0, 0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), Rat> {
        &self.terms
    }

    pub fn coeff(&self, k: usize, l: usize) -> Rat {
        self.terms.get(&(k, l)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, k: usize, l: usize, coef: Rat) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry((k, l)).or_insert_with(Rat::zero);
        *entry += &coef;
        if entry.is_zero() {
            self.terms.remove(&(k, l));
        }
    }

    pub fn add(&self, other: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        for (&(k, l), c) in &other.terms {
            out.add_term(k, l, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NormalPoly) -> NormalPoly {
        let mut out = self.clone();
        for (&(k, l), c) in &other.terms {
            out.add_term(k, l, -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> NormalPoly {
        let mut out = NormalPoly::default();
        for (&(k, l), v) in &self.terms {
            out.add_term(k, l, v * c);
        }
        out
    }

    /// Total degree k + l of the highest term, or None when zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|&(k, l)| k + l).max()
    }

    /// The corresponding element of the free algebra, as words y^k x^l.
    pub fn to_ncpoly(&self) -> NCPoly {
        let mut out = NCPoly::default();
        for (&(k, l), c) in &self.terms {
            let mut w = vec![Letter::Y; k];
            w.extend(vec![Letter::X; l]);
            out.add_term(w, c.clone());
        }
        out
    }

    /// Terms sorted by (k + l, k) ascending, the canonical serialization
    /// order.
    pub fn sorted_terms(&self) -> Vec<(usize, usize, Rat)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(&(k, l), c)| (k, l, c.clone()))
            .collect();
        v.sort_by_key(|&(k, l, _)| (k + l, k));
        v
    }
}

impl fmt::Display for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, l, c) in self.sorted_terms() {
            let mut mono = Vec::new();
            if k == 1 {
                mono.push("y".to_string());
            } else if k > 1 {
                mono.push(format!("y^{k}"));
            }
            if l == 1 {
                mono.push("x".to_string());
            } else if l > 1 {
                mono.push(format!("x^{l}"));
            }
            let mono = mono.join("*");
            let abs = c.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else {
                format!("{abs}*{mono}")
            };
            let negative = c < Rat::zero();
            if first {
                if negative {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if negative {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct NormalTermJson {
    k: usize,
    l: usize,
    coef: Rat,
}

#[derive(Serialize, Deserialize)]
struct NormalPolyJson {
    terms: Vec<NormalTermJson>,
}

impl Serialize for NormalPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NormalPolyJson {
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(k, l, coef)| NormalTermJson { k, l, coef })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormalPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = NormalPolyJson::deserialize(d)?;
        let mut p = NormalPoly::zero();
        for t in raw.terms {
            p.add_term(t.k, t.l, t.coef);
        }
        Ok(p)
    }
}

/// Parses the polynomial grammar:
/// expr := term (('+'|'-') term)* ;
/// term := [coef '*'] factor ('*' factor)* | coef ;
/// factor := ('x'|'y') ['^' uint] ; coef := int ['/' uint].
/// Whitespace is insignificant. A leading sign on the first term is allowed.
pub fn parse_ncpoly(text: &str) -> Result<NCPoly> {
    Parser::new(text).parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(&mut self) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -Rat::one()
            }
            Some(b'+') => {
                self.pos += 1;
                Rat::one()
            }
            Some(_) => Rat::one(),
            None => return Err(self.err("empty input")),
        };
        loop {
            let term = self.parse_term()?;
            out = out.add(&term.scale(&sign));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rat::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rat::one();
                }
                Some(c) => {
                    return Err(self.err(&format!("expected '+' or '-', found '{}'", c as char)))
                }
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<NCPoly> {
        let mut coef = Rat::one();
        let mut word: Word = Vec::new();

        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                coef = self.parse_coef()?;
                match self.peek() {
                    Some(b'*') => {
                        self.pos += 1;
                    }
                    // bare numeric term like "1" or "-1/2"
                    _ => return Ok(NCPoly::monomial(Vec::new(), coef)),
                }
            }
            Some(_) => {}
            None => return Err(self.err("expected term")),
        }

        loop {
            let (letter, exp) = self.parse_factor()?;
            for _ in 0..exp {
                word.push(letter);
            }
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(NCPoly::monomial(word, coef))
    }

    fn parse_factor(&mut self) -> Result<(Letter, usize)> {
        let letter = match self.peek() {
            Some(b'x') => Letter::X,
            Some(b'y') => Letter::Y,
            Some(c) => {
                return Err(self.err(&format!("expected 'x' or 'y', found '{}'", c as char)))
            }
            None => return Err(self.err("expected 'x' or 'y'")),
        };
        self.pos += 1;
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.parse_uint()?
        } else {
            1
        };
        Ok((letter, exp))
    }

    fn parse_uint(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected unsigned integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer overflow"))
    }

    fn parse_coef(&mut self) -> Result<Rat> {
        let num = self.parse_uint()? as i64;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.parse_uint()? as i64;
            if den == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(Rat::from_frac(num, den))
        } else {
            Ok(Rat::from_int(num))
        }
    }
}

/// Positions (indices) of all occurrences of the subword xy.
fn xy_sites(word: &Word) -> Vec<usize> {
    word.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] == Letter::X && w[1] == Letter::Y)
        .map(|(i, _)| i)
        .collect()
}

/// Rewrites to the unique normal form, replacing each subword xy by yx + yy.
/// The rewrite site is chosen by `pick` (index into the occurrence list);
/// confluence means the result does not depend on this choice.
pub fn normal_form_with(p: &NCPoly, mut pick: impl FnMut(usize) -> usize) -> NormalPoly {
    let mut out = NormalPoly::zero();
    let mut work: Vec<(Word, Rat)> = p.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((word, coef)) = work.pop() {
        let sites = xy_sites(&word);
        if sites.is_empty() {
            let k = word.iter().filter(|&&l| l == Letter::Y).count();
            let l = word.len() - k;
            out.add_term(k, l, coef);
            continue;
        }
        let i = sites[pick(sites.len()) % sites.len()];
        // u x y v -> u y x v + u y y v
        let mut w1 = word.clone();
        w1[i] = Letter::Y;
        w1[i + 1] = Letter::X;
        let mut w2 = word;
        w2[i] = Letter::Y;
        w2[i + 1] = Letter::Y;
        work.push((w1, coef.clone()));
        work.push((w2, coef));
    }
    out
}

/// Unique normal form of a free-algebra element (leftmost rewrite site).
pub fn normal_form(p: &NCPoly) -> NormalPoly {
    normal_form_with(p, |_| 0)
}

/// Coefficients (alpha_{1,n}, ..., alpha_{n+1,n}) of the expansion of x^n y
/// over the normal basis: alpha_{k,n} = n!/(n-k+1)!.
pub fn alpha_coeffs(n: usize) -> Vec<Rat> {
    assert!(n >= 1);
    // alpha_{k,n} = n (n-1) ... (n-k+2), a falling product of k-1 factors
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Rat::one();
    out.push(acc.clone()); // k = 1
    for k in 2..=n + 1 {
        acc *= &Rat::from_int((n as i64) - (k as i64) + 2);
        out.push(acc.clone());
    }
    out
}

/// Normal form of x * (y^k x^l): y^k x^{l+1} + k y^{k+1} x^l.
fn x_times_normal(p: &NormalPoly) -> NormalPoly {
    let mut out = NormalPoly::zero();
    for (&(k, l), c) in &p.terms {
        out.add_term(k, l + 1, c.clone());
        out.add_term(k + 1, l, c * &Rat::from_int(k as i64));
    }
    out
}

/// Product of two normal-form elements reduced by the closed commutation
/// formula x y^k = y^k x + k y^{k+1}, without generic word rewriting.
pub fn multiply_normal(a: &NormalPoly, b: &NormalPoly) -> NormalPoly {
    let mut out = NormalPoly::zero();
    for (&(k1, l1), c1) in &a.terms {
        for (&(k2, l2), c2) in &b.terms {
            // y^k1 (x^l1 y^k2) x^l2
            let mut mid = NormalPoly::monomial(k2, 0, Rat::one());
            for _ in 0..l1 {
                mid = x_times_normal(&mid);
            }
            for (&(k, l), c) in &mid.terms {
                out.add_term(k1 + k, l + l2, &(c1 * c2) * c);
            }
        }
    }
    out
}

/// Element (p(y), c) of Aut R: x -> c x + p(y), y -> c y, with c != 0.
/// Constant p is allowed; the shift x -> x + lambda is the case
/// (p = lambda, c = 1).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Automorphism {
    /// Coefficients of p in y, ascending degree; no trailing zeros.
    pub p: Vec<Rat>,
    pub c: Rat,
}

fn trim_poly(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Rat::is_zero) {
        p.pop();
    }
    p
}

/// Evaluate a univariate polynomial (ascending coefficients) at a scalar.
fn poly_eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

impl Automorphism {
    pub fn new(p: Vec<Rat>, c: Rat) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroParameter);
        }
        Ok(Automorphism {
            p: trim_poly(p),
            c,
        })
    }

    pub fn identity() -> Self {
        Automorphism {
            p: Vec::new(),
            c: Rat::one(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_empty() && self.c.is_one()
    }

    /// The shift x -> x + lambda, y -> y: the automorphism (lambda, 1).
    pub fn shift(lambda: Rat) -> Self {
        Automorphism {
            p: trim_poly(vec![lambda]),
            c: Rat::one(),
        }
    }

    /// p as an element of the free algebra (a polynomial in y).
    pub fn p_of_y(&self) -> NCPoly {
        let mut out = NCPoly::zero();
        for (k, c) in self.p.iter().enumerate() {
            out.add_term(vec![Letter::Y; k], c.clone());
        }
        out
    }

    /// Composition f∘g, applying g first:
    /// (p1, c1)(p2, c2) = (c2 p1(y) + p2(c1 y), c1 c2).
    pub fn compose(&self, g: &Automorphism) -> Automorphism {
        let (p1, c1) = (&self.p, &self.c);
        let (p2, c2) = (&g.p, &g.c);
        let deg = p1.len().max(p2.len());
        let mut p = vec![Rat::zero(); deg];
        for (k, a) in p1.iter().enumerate() {
            p[k] += &(c2 * a);
        }
        // p2(c1 y): coefficient of y^k picks up c1^k
        for (k, a) in p2.iter().enumerate() {
            p[k] += &(a * &c1.pow(k as u32));
        }
        Automorphism {
            p: trim_poly(p),
            c: c1 * c2,
        }
    }

    /// Inverse: (q, 1/c) with q(y) = -p(y/c)/c.
    pub fn inverse(&self) -> Automorphism {
        let cinv = self.c.recip();
        let q: Vec<Rat> = self
            .p
            .iter()
            .enumerate()
            .map(|(k, a)| -&(&(a * &cinv) * &cinv.pow(k as u32)))
            .collect();
        Automorphism {
            p: trim_poly(q),
            c: cinv,
        }
    }

    /// p evaluated at a scalar (used when twisting representations is not
    /// available and the constant term matters).
    pub fn p_eval(&self, x: &Rat) -> Rat {
        poly_eval(&self.p, x)
    }
}

/// Substitute x -> c x + p(y), y -> c y and reduce to normal form.
pub fn apply_automorphism(poly: &NCPoly, f: &Automorphism) -> NormalPoly {
    let for_x = NCPoly::x().scale(&f.c).add(&f.p_of_y());
    let for_y = NCPoly::y().scale(&f.c);
    normal_form(&poly.substitute(&for_x, &for_y))
}

/// Substitute x -> x + lambda, y -> y and reduce: the shift automorphism.
pub fn shift_x(poly: &NCPoly, lambda: &Rat) -> NormalPoly {
    apply_automorphism(poly, &Automorphism::shift(lambda.clone()))
}

/// The defining relation xy - yx - y^2 as a free-algebra element.
pub fn defining_relation() -> NCPoly {
    let xy = NCPoly::x().mul(&NCPoly::y());
    let yx = NCPoly::y().mul(&NCPoly::x());
    let yy = NCPoly::y().mul(&NCPoly::y());
    xy.sub(&yx).sub(&yy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn nf_str(s: &str) -> String {
        normal_form(&parse_ncpoly(s).unwrap()).to_string()
    }

    #[test]
    fn parse_examples() {
        let p = parse_ncpoly("x*y - y*x - y^2").unwrap();
        assert_eq!(p.terms().len(), 3);
        assert_eq!(p, defining_relation());

        let one = parse_ncpoly("1").unwrap();
        assert_eq!(one, NCPoly::one());

        let p = parse_ncpoly("2*x*y*x - 1/2*y").unwrap();
        assert_eq!(
            p.terms().get(&vec![Letter::X, Letter::Y, Letter::X]),
            Some(&Rat::from_int(2))
        );
        assert_eq!(p.terms().get(&vec![Letter::Y]), Some(&Rat::from_frac(-1, 2)));
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_ncpoly("x*z") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_ncpoly("").is_err());
        assert!(parse_ncpoly("x**y").is_err());
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(nf_str("x*y"), "y*x + y^2");
        assert_eq!(nf_str("x*y^3"), "y^3*x + 3*y^4");
        assert_eq!(nf_str("x^2*y"), "y*x^2 + 2*y^2*x + 2*y^3");
        assert_eq!(nf_str("x*y - y*x - y^2"), "0");
    }

    #[test]
    fn alpha_coeffs_values_and_recurrence() {
        assert_eq!(alpha_coeffs(1), vec![Rat::one(), Rat::one()]);
        assert_eq!(
            alpha_coeffs(2),
            vec![Rat::from_int(1), Rat::from_int(2), Rat::from_int(2)]
        );
        assert_eq!(
            alpha_coeffs(3),
            vec![
                Rat::from_int(1),
                Rat::from_int(3),
                Rat::from_int(6),
                Rat::from_int(6)
            ]
        );
        // alpha_{k,n+1} = alpha_{k,n} + (k-1) alpha_{k-1,n}, alpha_{0,n} = 0
        for n in 1..=8usize {
            let a = alpha_coeffs(n);
            let b = alpha_coeffs(n + 1);
            for k in 1..=n + 1 {
                let prev = if k >= 2 { a[k - 2].clone() } else { Rat::zero() };
                assert_eq!(
                    b[k - 1],
                    &a[k - 1] + &(&prev * &Rat::from_int(k as i64 - 1)),
                    "recurrence fails at k={k}, n={n}"
                );
            }
        }
    }

    #[test]
    fn alpha_coeffs_match_brute_force() {
        for n in 1..=6usize {
            let mut word = vec![Letter::X; n];
            word.push(Letter::Y);
            let nf = normal_form(&NCPoly::monomial(word, Rat::one()));
            let alphas = alpha_coeffs(n);
            let mut expected = NormalPoly::zero();
            for (idx, a) in alphas.iter().enumerate() {
                let k = idx + 1;
                expected.add_term(k, n + 1 - k, a.clone());
            }
            assert_eq!(nf, expected, "x^{n} y expansion");
        }
    }

    #[test]
    fn confluence_under_random_strategies() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..200 {
            let nterms = rng.gen_range(1..=4);
            let mut p = NCPoly::zero();
            for _ in 0..nterms {
                let len = rng.gen_range(0..=6);
                let w: Word = (0..len)
                    .map(|_| if rng.gen_bool(0.5) { Letter::X } else { Letter::Y })
                    .collect();
                p.add_term(w, Rat::from_int(rng.gen_range(-3..=3)));
            }
            let reference = normal_form(&p);
            let mut rng2 = StdRng::seed_from_u64(rng.gen());
            let randomized = normal_form_with(&p, |n| rng2.gen_range(0..n.max(1)));
            assert_eq!(reference, randomized);
        }
    }

    #[test]
    fn normal_monomials_are_fixed_points() {
        for k in 0..4 {
            for l in 0..4 {
                let np = NormalPoly::monomial(k, l, Rat::from_frac(3, 7));
                assert_eq!(normal_form(&np.to_ncpoly()), np);
            }
        }
    }

    #[test]
    fn multiply_normal_agrees_with_rewriting() {
        let mut rng = StdRng::seed_from_u64(31);
        let rand_np = |rng: &mut StdRng| {
            let mut p = NormalPoly::zero();
            for _ in 0..rng.gen_range(1..=3) {
                let k = rng.gen_range(0..=3);
                let l = rng.gen_range(0..=2);
                p.add_term(k, l, Rat::from_int(rng.gen_range(-3..=3)));
            }
            p
        };
        for _ in 0..200 {
            let a = rand_np(&mut rng);
            let b = rand_np(&mut rng);
            let closed = multiply_normal(&a, &b);
            let generic = normal_form(&a.to_ncpoly().mul(&b.to_ncpoly()));
            assert_eq!(closed, generic);
        }
        // x * y^3 via the closed route
        let x = NormalPoly::monomial(0, 1, Rat::one());
        let y3 = NormalPoly::monomial(3, 0, Rat::one());
        let mut expected = NormalPoly::monomial(3, 1, Rat::one());
        expected.add_term(4, 0, Rat::from_int(3));
        assert_eq!(multiply_normal(&x, &y3), expected);
        // (yx)(yx) against the generic engine
        let yx = NormalPoly::monomial(1, 1, Rat::one());
        assert_eq!(
            multiply_normal(&yx, &yx),
            normal_form(&parse_ncpoly("y*x*y*x").unwrap())
        );
    }

    fn rand_aut(rng: &mut StdRng) -> Automorphism {
        let deg = rng.gen_range(0..=3);
        let p: Vec<Rat> = (0..deg).map(|_| Rat::from_int(rng.gen_range(-3..=3))).collect();
        let mut c = Rat::from_int(rng.gen_range(-3..=3));
        if c.is_zero() {
            c = Rat::one();
        }
        Automorphism::new(p, c).unwrap()
    }

    #[test]
    fn composition_formula_pinned() {
        // (y,2)∘(y^2,3) = (3y + 4y^2, 6): c2*p1(y) + p2(c1*y) with c1=2
        let f = Automorphism::new(vec![Rat::zero(), Rat::one()], Rat::from_int(2)).unwrap();
        let g = Automorphism::new(
            vec![Rat::zero(), Rat::zero(), Rat::one()],
            Rat::from_int(3),
        )
        .unwrap();
        let fg = f.compose(&g);
        assert_eq!(
            fg,
            Automorphism::new(
                vec![Rat::zero(), Rat::from_int(3), Rat::from_int(4)],
                Rat::from_int(6)
            )
            .unwrap()
        );
        // identity laws
        let id = Automorphism::identity();
        assert_eq!(id.compose(&f), f);
        assert_eq!(f.compose(&id), f);
    }

    #[test]
    fn group_laws() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..50 {
            let f = rand_aut(&mut rng);
            let g = rand_aut(&mut rng);
            let h = rand_aut(&mut rng);
            assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
            assert!(f.compose(&f.inverse()).is_identity());
            assert!(f.inverse().compose(&f).is_identity());
        }
    }

    #[test]
    fn automorphisms_preserve_the_relation() {
        let mut rng = StdRng::seed_from_u64(43);
        let rel = defining_relation();
        for _ in 0..30 {
            let f = rand_aut(&mut rng);
            assert!(apply_automorphism(&rel, &f).is_zero());
        }
        // sign flip: f = (0,-1) on xy gives (-x)(-y) = xy -> yx + y^2
        let f = Automorphism::new(vec![], Rat::from_int(-1)).unwrap();
        let xy = NCPoly::x().mul(&NCPoly::y());
        let mut expected = NormalPoly::monomial(1, 1, Rat::one());
        expected.add_term(2, 0, Rat::one());
        assert_eq!(apply_automorphism(&xy, &f), expected);
    }

    #[test]
    fn application_is_an_action() {
        // apply(f∘g) = apply f after apply g: g substitutes first
        let mut rng = StdRng::seed_from_u64(47);
        for _ in 0..30 {
            let f = rand_aut(&mut rng);
            let g = rand_aut(&mut rng);
            let p = parse_ncpoly("x^2*y - 2*y*x + 1").unwrap();
            let via_compose = apply_automorphism(&p, &f.compose(&g));
            let step = apply_automorphism(&p, &g);
            let via_steps = apply_automorphism(&step.to_ncpoly(), &f);
            assert_eq!(via_compose, via_steps);
        }
    }

    #[test]
    fn shift_examples() {
        let lambda = Rat::from_int(1);
        let x2 = parse_ncpoly("x^2").unwrap();
        let shifted = shift_x(&x2, &lambda);
        // x^2 + 2x + 1
        let mut expected = NormalPoly::monomial(0, 2, Rat::one());
        expected.add_term(0, 1, Rat::from_int(2));
        expected.add_term(0, 0, Rat::one());
        assert_eq!(shifted, expected);

        assert!(shift_x(&defining_relation(), &Rat::from_frac(3, 2)).is_zero());

        let x = NCPoly::x();
        let mut expected = NormalPoly::monomial(0, 1, Rat::one());
        expected.add_term(0, 0, Rat::from_frac(3, 2));
        assert_eq!(shift_x(&x, &Rat::from_frac(3, 2)), expected);
    }

    #[test]
    fn display_and_json_round_trip() {
        let p = normal_form(&parse_ncpoly("x^2*y").unwrap());
        assert_eq!(p.to_string(), "y*x^2 + 2*y^2*x + 2*y^3");
        let s = serde_json::to_string(&p).unwrap();
        let back: NormalPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
    }
}
