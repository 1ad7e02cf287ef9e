//! The image algebra A = ρ(R) ⊆ M_n of a representation: linear basis and
//! dimension, Jacobson radical via the characteristic-zero trace form,
//! idempotents, quiver, two-sided ideal closures, and the dimension bound.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QMat, Rat};
use crate::repspace::{build_epsilon, Rep};
use crate::structure::generalized_eigenspaces;

/// A linear subspace of M_n, stored as a reduced-echelon basis over the
/// n²-dimensional flattening. Equal subspaces have identical bases, so span
/// equality is plain equality.
#[derive(Clone, PartialEq, Debug)]
pub struct MatSpan {
    n: usize,
    basis: Vec<QMat>,
    pivots: Vec<usize>,
}

impl MatSpan {
    pub fn new(n: usize) -> Self {
        MatSpan {
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_mats<'a>(n: usize, mats: impl IntoIterator<Item = &'a QMat>) -> Self {
        let mut s = MatSpan::new(n);
        for m in mats {
            s.insert(m);
        }
        s
    }

    pub fn ambient_n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QMat] {
        &self.basis
    }

    /// Reduce m against the current basis; returns the remainder.
    fn reduce(&self, m: &QMat) -> QMat {
        let mut v = m.clone();
        for (row, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = v.flatten()[piv].clone();
            if !c.is_zero() {
                v = v.sub(&row.scale(&c)).expect("same ambient size");
            }
        }
        v
    }

    pub fn contains(&self, m: &QMat) -> bool {
        self.reduce(m).is_zero()
    }

    /// Inserts a matrix, keeping the basis in reduced echelon form.
    /// Returns true when the span grew.
    pub fn insert(&mut self, m: &QMat) -> bool {
        assert_eq!((m.rows(), m.cols()), (self.n, self.n), "ambient mismatch");
        let v = self.reduce(m);
        let piv = match v.flatten().iter().position(|e| !e.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let lead = v.flatten()[piv].clone();
        let v = v.scale(&lead.recip());
        // clear the new pivot column from existing rows
        for row in self.basis.iter_mut() {
            let c = row.flatten()[piv].clone();
            if !c.is_zero() {
                *row = row.sub(&v.scale(&c)).expect("same ambient size");
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.basis.insert(at, v);
        true
    }

    /// Exact span equality (bases are canonical).
    pub fn same_span(&self, other: &MatSpan) -> bool {
        self.n == other.n && self.basis == other.basis
    }

    /// True iff the span is closed under matrix multiplication.
    pub fn is_product_closed(&self) -> bool {
        for a in &self.basis {
            for b in &self.basis {
                if !self.contains(&a.mul(b).expect("square")) {
                    return false;
                }
            }
        }
        true
    }
}

/// Span of all pairwise products of two subspaces.
pub fn span_product(a: &MatSpan, b: &MatSpan) -> MatSpan {
    let mut out = MatSpan::new(a.n);
    for x in a.basis() {
        for y in b.basis() {
            out.insert(&x.mul(y).expect("square"));
        }
    }
    out
}

/// Echelonized basis of the unital image algebra of a representation:
/// span of {Y^k X^l : 0 ≤ k < nil-degree(Y), 0 ≤ l < n}. Higher powers of X
/// reduce by Cayley–Hamilton, higher powers of Y vanish, and the mixed
/// monomials y^k x^l span R, so this is all of ρ(R).
pub fn image_algebra_basis(r: &Rep) -> MatSpan {
    let n = r.n();
    let nil_deg = r.partition().parts().first().copied().unwrap_or(0);
    let mut span = MatSpan::new(n);
    let mut ypow = QMat::identity(n);
    for _k in 0..nil_deg.max(1) {
        let mut m = ypow.clone();
        for _l in 0..n {
            span.insert(&m);
            m = m.mul(r.x()).expect("square");
        }
        ypow = ypow.mul(r.y()).expect("square");
    }
    span
}

/// The Gerstenhaber-type bound on dim ρ(R): n(n+2)/4 for even n and
/// (n+1)²/4 for odd n.
pub fn dimension_bound(n: usize) -> usize {
    assert!(n >= 1);
    if n % 2 == 0 {
        n * (n + 2) / 4
    } else {
        (n + 1) * (n + 1) / 4
    }
}

/// Jacobson radical of a (verified) matrix algebra via the trace form:
/// J = {a ∈ A : tr(ab) = 0 for all b ∈ A}, valid in characteristic zero.
/// Every radical basis element is cross-checked nilpotent.
pub fn radical_basis(a: &MatSpan) -> Result<MatSpan> {
    if !a.is_product_closed() {
        return Err(Error::NotAnAlgebra);
    }
    let d = a.dim();
    let gram = QMat::from_fn(d, d, |i, j| {
        a.basis()[i].mul(&a.basis()[j]).expect("square").trace()
    });
    let mut rad = MatSpan::new(a.ambient_n());
    for coords in gram.nullspace_basis() {
        let mut m = QMat::zeros(a.ambient_n(), a.ambient_n());
        for (c, b) in coords.iter().zip(a.basis()) {
            m = m.add(&b.scale(c)).expect("square");
        }
        if !m.is_nilpotent()? {
            return Err(Error::InvarianceFailure(
                "trace-form radical element is not nilpotent".into(),
            ));
        }
        rad.insert(&m);
    }
    Ok(rad)
}

/// Dimensions of J, J², … down to and including the first zero power.
pub fn radical_power_dims(a: &MatSpan) -> Result<Vec<usize>> {
    let rad = radical_basis(a)?;
    let mut dims = vec![rad.dim()];
    let mut power = rad.clone();
    while power.dim() > 0 {
        power = span_product(&power, &rad);
        dims.push(power.dim());
    }
    Ok(dims)
}

/// Complete system of orthogonal idempotents of A, one per distinct rational
/// eigenvalue of X (in ascending eigenvalue order): the spectral projectors
/// onto the generalized eigenspaces. Each projector is a polynomial in X and
/// hence lies in A; unlike first-order interpolation formulas this
/// construction is exactly idempotent, not merely idempotent mod J.
pub fn idempotents(r: &Rep) -> Result<Vec<QMat>> {
    let n = r.n();
    let spaces = generalized_eigenspaces(r.x())?;
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut ranges = Vec::with_capacity(spaces.len());
    for (_, basis) in &spaces {
        let start = cols.len();
        cols.extend(basis.iter().cloned());
        ranges.push(start..cols.len());
    }
    let h = QMat::from_fn(n, n, |i, j| cols[j][i].clone());
    let hinv = h.inverse()?;
    let mut out = Vec::with_capacity(spaces.len());
    for range in ranges {
        let indicator = QMat::from_fn(n, n, |i, j| {
            if i == j && range.contains(&i) {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        out.push(h.mul(&indicator)?.mul(&hinv)?);
    }
    Ok(out)
}

/// Number of distinct eigenvalues of X; equals dim A − dim J(A).
pub fn semisimple_rank(r: &Rep) -> Result<usize> {
    let (roots, split) = r.x().char_poly()?.rational_roots();
    if !split {
        return Err(Error::EigenvaluesNotRational);
    }
    Ok(roots.len())
}

/// The quiver of the basic algebra A: one vertex per distinct eigenvalue of
/// X, and dim eᵢ(J/J²)eⱼ arrows from vertex i to vertex j.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct QuiverDesc {
    pub vertices: Vec<Rat>,
    pub arrows: Vec<Vec<usize>>,
}

pub fn quiver(r: &Rep) -> Result<QuiverDesc> {
    let a = image_algebra_basis(r);
    let rad = radical_basis(&a)?;
    let rad2 = span_product(&rad, &rad);
    let es = idempotents(r)?;
    let vertices: Vec<Rat> = generalized_eigenspaces(r.x())?
        .into_iter()
        .map(|(l, _)| l)
        .collect();
    let k = es.len();
    let mut arrows = vec![vec![0usize; k]; k];
    for (i, ei) in es.iter().enumerate() {
        for (j, ej) in es.iter().enumerate() {
            let mut span = rad2.clone();
            let mut count = 0;
            for b in rad.basis() {
                if span.insert(&ei.mul(b)?.mul(ej)?) {
                    count += 1;
                }
            }
            arrows[i][j] = count;
        }
    }
    Ok(QuiverDesc { vertices, arrows })
}

/// Two-sided ideal of A generated by `gens`: fixed-point closure under
/// left/right multiplication by the algebra basis.
pub fn ideal_closure(a: &MatSpan, gens: &[QMat]) -> Result<MatSpan> {
    let mut ideal = MatSpan::new(a.ambient_n());
    for g in gens {
        if !a.contains(g) {
            return Err(Error::GensNotInAlgebra);
        }
        ideal.insert(g);
    }
    let cap = a.ambient_n() * a.ambient_n() + 1;
    for _ in 0..cap {
        let mut grew = false;
        let current: Vec<QMat> = ideal.basis().to_vec();
        for g in &current {
            for b in a.basis() {
                grew |= ideal.insert(&b.mul(g)?);
                grew |= ideal.insert(&g.mul(b)?);
            }
        }
        if !grew {
            return Ok(ideal);
        }
    }
    Err(Error::InvarianceFailure(
        "ideal closure did not stabilize".into(),
    ))
}

pub fn codimension(a: &MatSpan, ideal: &MatSpan) -> usize {
    a.dim() - ideal.dim()
}

/// The common image algebra of all full-block representations of dimension n
/// (it is independent of the parameters): computed from ε_n.
pub fn full_block_image_canonical(n: usize) -> MatSpan {
    image_algebra_basis(&build_epsilon(n))
}

/// Summary of A: dimension, radical power dimensions, and the quiver.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AlgebraDesc {
    pub dim: usize,
    pub radical_dims: Vec<usize>,
    pub vertices: Vec<Rat>,
    pub arrows: Vec<Vec<usize>>,
}

impl AlgebraDesc {
    pub fn semisimple_rank(&self) -> usize {
        self.vertices.len()
    }
}

pub fn describe_algebra(r: &Rep) -> Result<AlgebraDesc> {
    let a = image_algebra_basis(r);
    let radical_dims = radical_power_dims(&a)?;
    let q = quiver(r)?;
    Ok(AlgebraDesc {
        dim: a.dim(),
        radical_dims,
        vertices: q.vertices,
        arrows: q.arrows,
    })
}

/// Dimension contributed by each matrix diagonal d (entries (i, i+d)) of a
/// span: rank of the basis projected to that diagonal. For images of ε_n the
/// per-diagonal contributions sum to the total dimension.
pub fn diagonal_contributions(span: &MatSpan) -> Vec<usize> {
    let n = span.ambient_n();
    let mut out = Vec::with_capacity(n);
    for d in 0..n {
        // embed each projected diagonal back into a matrix and echelonize
        let mut proj = MatSpan::new(n);
        for b in span.basis() {
            let m = QMat::from_fn(n, n, |i, j| {
                if j == i + d {
                    b.get(i, j).clone()
                } else {
                    Rat::zero()
                }
            });
            proj.insert(&m);
        }
        out.push(proj.dim());
    }
    out
}

/// Multiset of (eigenvalue, multiplicity) keyed for quick comparisons.
pub(crate) fn eigenvalue_multiset(x: &QMat) -> Result<BTreeMap<Rat, usize>> {
    let (roots, split) = x.char_poly()?.rational_roots();
    if !split {
        return Err(Error::EigenvaluesNotRational);
    }
    Ok(roots.into_iter().collect())
}
