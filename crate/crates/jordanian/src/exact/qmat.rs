//! Dense exact matrices over the rationals.
//!
//! Everything downstream (representations, image algebras, canonical forms)
//! runs on `QMat`. All operations are exact: Gaussian elimination with
//! rational pivoting, Faddeev-LeVerrier characteristic polynomials, rational
//! root enumeration for eigenvalues. No entry is ever rounded.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::repspace::Partition;

/// Row-major dense matrix of `Rat`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMat {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Single nilpotent Jordan block: 1s on the superdiagonal.
    pub fn jordan_block(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            m.set(i, i + 1, Rat::one());
        }
        m
    }

    pub fn diagonal(d: &[Rat]) -> Self {
        let mut m = QMat::zeros(d.len(), d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMat {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
        }
        Ok(QMat {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience for tests: integer entries.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_int(v)).collect())
                .collect(),
        )
        .expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    /// Flattened row-major entries; coordinates for span computations.
    pub fn flatten(&self) -> &[Rat] {
        &self.entries
    }

    pub fn trace(&self) -> Rat {
        let mut t = Rat::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    fn check_same_shape(&self, other: &QMat) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &QMat) -> Result<QMat> {
        self.check_same_shape(other)?;
        Ok(QMat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &QMat) -> Result<QMat> {
        self.check_same_shape(other)?;
        Ok(QMat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> QMat {
        self.scale(&Rat::from_int(-1))
    }

    pub fn scale(&self, c: &Rat) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &QMat) -> Result<QMat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut exp: usize) -> Result<QMat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("pow of non-square matrix".into()));
        }
        let mut result = QMat::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// xy - yx, exact.
    pub fn commutator(&self, other: &QMat) -> Result<QMat> {
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(Error::DimensionMismatch(
                "commutator needs square matrices of equal size".into(),
            ));
        }
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Reduced row echelon form. Returns (rref, pivot columns).
    pub(crate) fn rref(&self) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let mut a: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for j in c..self.cols {
                a[r][j] = &a[r][j] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in c..self.cols {
                        a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of { v : self * v = 0 }, each as a column vector of length cols.
    pub fn nullspace_basis(&self) -> Vec<Vec<Rat>> {
        let (a, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (col, &pr) in pivot_set.iter().enumerate() {
                if let Some(row) = pr {
                    v[col] = -&a[row][free];
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<QMat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row = self.entries[i * n..(i + 1) * n].to_vec();
                let mut aug = vec![Rat::zero(); n];
                aug[i] = Rat::one();
                row.extend(aug);
                row
            })
            .collect();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Err(Error::Singular);
            };
            a.swap(c, p);
            let inv = a[c][c].recip();
            for j in 0..2 * n {
                a[c][j] = &a[c][j] * &inv;
            }
            for i in 0..n {
                if i != c && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for j in 0..2 * n {
                        a[i][j] = &a[i][j] - &(&f * &a[c][j]);
                    }
                }
            }
        }
        Ok(QMat::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }

    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("det of non-square".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != c {
                a.swap(c, p);
                det = -det;
            }
            det = &det * &a[c][c];
            let inv = a[c][c].recip();
            for i in c + 1..n {
                if !a[i][c].is_zero() {
                    let f = &a[i][c] * &inv;
                    for j in c..n {
                        a[i][j] = &a[i][j] - &(&f * &a[c][j]);
                    }
                }
            }
        }
        Ok(det)
    }

    /// g * self * g^-1.
    pub fn conjugate(&self, g: &QMat) -> Result<QMat> {
        let ginv = g.inverse()?;
        g.mul(self)?.mul(&ginv)
    }

    /// Checks m^n = 0 where n is the size, by at most ceil(log2 n) squarings.
    pub fn is_nilpotent(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "nilpotency of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(true);
        }
        let mut p = self.clone();
        let mut e = 1usize;
        while e < n {
            if p.is_zero() {
                return Ok(true);
            }
            p = p.mul(&p)?;
            e *= 2;
        }
        Ok(p.is_zero())
    }

    /// Jordan type of a nilpotent matrix, from the rank sequence:
    /// #blocks of size >= s equals rank(m^{s-1}) - rank(m^s).
    pub fn nilpotent_partition(&self) -> Result<Partition> {
        if !self.is_nilpotent()? {
            return Err(Error::NotNilpotent);
        }
        let n = self.rows;
        let mut ranks = vec![n];
        let mut p = QMat::identity(n);
        for _ in 1..=n {
            p = p.mul(self)?;
            let r = p.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
        }
        while ranks.len() < n + 2 {
            ranks.push(0);
        }
        let mut parts = Vec::new();
        for s in (1..=n).rev() {
            let exactly_s = (ranks[s - 1] - ranks[s]) as i64 - (ranks[s] - ranks[s + 1]) as i64;
            for _ in 0..exactly_s {
                parts.push(s);
            }
        }
        Partition::new(parts)
    }

    /// Exact characteristic polynomial det(tI - m) by Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Result<CharPoly> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "char_poly of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        if n == 0 {
            return Ok(CharPoly { coeffs });
        }
        // am = A * M_k, starting with M_1 = I
        let mut am = self.clone();
        for k in 1..=n {
            let c = &(-am.trace()) * &Rat::from_frac(1, k as i64);
            coeffs[n - k] = c.clone();
            if k < n {
                let mut next = am.clone();
                for i in 0..n {
                    let v = next.get(i, i) + &c;
                    next.set(i, i, v);
                }
                am = self.mul(&next)?;
            }
        }
        Ok(CharPoly { coeffs })
    }

    pub fn rational_eigenvalues(&self) -> Result<(Vec<(Rat, usize)>, bool)> {
        let cp = self.char_poly()?;
        Ok(cp.rational_roots())
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Monic characteristic polynomial; `coeffs[i]` is the coefficient of t^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<Rat>,
}

impl CharPoly {
    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// t^n, the characteristic polynomial of a nilpotent matrix.
    pub fn is_power_of_t(&self) -> bool {
        self.coeffs[..self.coeffs.len() - 1].iter().all(Rat::is_zero)
    }

    /// All rational roots with multiplicities, via rational-root enumeration
    /// on the primitive integer polynomial. The flag is true iff the
    /// multiplicities sum to the degree (the polynomial splits over Q).
    pub fn rational_roots(&self) -> (Vec<(Rat, usize)>, bool) {
        let n = self.degree();
        if n == 0 {
            return (Vec::new(), true);
        }
        // Clear denominators, make primitive.
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();

        let mut roots = Vec::new();

        // Root 0: trailing zero coefficients.
        let t = ints.iter().take_while(|c| c.is_zero()).count();
        let mut work: Vec<Rat> = self.coeffs.clone();
        if t > 0 {
            let mut m = 0;
            while poly_root_multiplicity_step(&mut work, &Rat::zero()) {
                m += 1;
            }
            debug_assert_eq!(m, t);
            roots.push((Rat::zero(), t));
        }
        let deflated: Vec<BigInt> = ints[t..].to_vec();
        if deflated.len() > 1 {
            let a0 = deflated[0].abs();
            let an = deflated[deflated.len() - 1].abs();
            let ps = divisors(&a0);
            let qs = divisors(&an);
            let mut candidates = Vec::new();
            for p in &ps {
                for q in &qs {
                    if p.gcd(q).is_one() {
                        candidates.push(Rat::from_big(p.clone(), q.clone()));
                        candidates.push(Rat::from_big(-p.clone(), q.clone()));
                    }
                }
            }
            candidates.sort();
            candidates.dedup();
            for cand in candidates {
                let mut m = 0;
                while poly_root_multiplicity_step(&mut work, &cand) {
                    m += 1;
                }
                if m > 0 {
                    roots.push((cand, m));
                }
            }
        }
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, total == n)
    }
}

impl FromStr for QMat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: 0,
            msg: format!("invalid QMat JSON: {e}"),
        })
    }
}

/// If r is a root of the polynomial given by `coeffs` (index = power),
/// divides by (t - r) in place and returns true.
fn poly_root_multiplicity_step(coeffs: &mut Vec<Rat>, r: &Rat) -> bool {
    if coeffs.len() < 2 {
        return false;
    }
    // Synthetic division.
    let mut quotient = vec![Rat::zero(); coeffs.len() - 1];
    let mut carry = Rat::zero();
    for i in (0..coeffs.len()).rev() {
        let v = &coeffs[i] + &(&carry * r);
        if i == 0 {
            if !v.is_zero() {
                return false;
            }
        } else {
            quotient[i - 1] = v.clone();
            carry = v;
        }
    }
    *coeffs = quotient;
    true
}

/// Positive divisors of |n| by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![];
    }
    if let Some(small) = n.to_u128() {
        let mut out = Vec::new();
        let mut i: u128 = 1;
        while i * i <= small {
            if small % i == 0 {
                out.push(BigInt::from(i));
                if i != small / i {
                    out.push(BigInt::from(small / i));
                }
            }
            i += 1;
        }
        out.sort();
        out
    } else {
        // Outside u128 range; trial-divide with BigInt (slow, desk scale only).
        let mut out = Vec::new();
        let mut i = BigInt::one();
        while &i * &i <= n {
            if (&n % &i).is_zero() {
                out.push(i.clone());
                let other = &n / &i;
                if other != i {
                    out.push(other);
                }
            }
            i += 1;
        }
        out.sort();
        out
    }
}

// JSON form: {"rows": n, "cols": m, "entries": [["0","1","-3/2"],...]}
#[derive(Serialize, Deserialize)]
struct QMatJson {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rat>>,
}

impl Serialize for QMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        QMatJson {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QMatJson::deserialize(d)?;
        if raw.entries.len() != raw.rows || raw.entries.iter().any(|r| r.len() != raw.cols) {
            return Err(D::Error::custom("entries shape does not match rows x cols"));
        }
        Ok(QMat {
            rows: raw.rows,
            cols: raw.cols,
            entries: raw.entries.into_iter().flatten().collect(),
        })
    }
}
