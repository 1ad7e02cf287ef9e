//! Module-theoretic structure: generalized-eigenspace decomposition,
//! indecomposability via endomorphism locality, simultaneous
//! triangularization, canonical pairs on the full-block stratum, Jacobian
//! rank of the normalization map, isomorphism testing, auto-equivalence, and
//! the one-parameter hook family.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QMat, Rat};
use crate::freealg::Automorphism;
use crate::imagealg::{eigenvalue_multiset, radical_basis, MatSpan};
use crate::repspace::{
    build_from_partition, build_full_block, twist, validate_rep, FullBlockParams,
    Partition, PartitionParams, Rep,
};

/// Bases of the generalized eigenspaces ker (X − λI)ⁿ, one per distinct
/// rational eigenvalue, sorted by eigenvalue. Errors when the characteristic
/// polynomial does not split over the rationals.
pub fn generalized_eigenspaces(x: &QMat) -> Result<Vec<(Rat, Vec<Vec<Rat>>)>> {
    let n = x.rows();
    let (mut roots, split) = x.char_poly()?.rational_roots();
    if !split {
        return Err(Error::EigenvaluesNotRational);
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::with_capacity(roots.len());
    let mut total = 0;
    for (lambda, mult) in roots {
        let shifted = x.sub(&QMat::identity(n).scale(&lambda))?;
        let basis = shifted.pow(n)?.nullspace_basis();
        if basis.len() != mult {
            return Err(Error::InvarianceFailure(
                "generalized eigenspace dimension disagrees with multiplicity".into(),
            ));
        }
        total += basis.len();
        out.push((lambda, basis));
    }
    if total != n {
        return Err(Error::InvarianceFailure(
            "generalized eigenspaces do not fill the space".into(),
        ));
    }
    Ok(out)
}

/// One direct summand of a decomposition: the eigenvalue, an ambient basis of
/// the summand, and the restricted representation in that basis.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Summand {
    pub eigenvalue: Rat,
    pub basis: Vec<Vec<Rat>>,
    pub rep: Rep,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
}

/// Splits a representation into the direct sum of the generalized
/// eigenspaces of X, each verified invariant under Y.
pub fn decompose(r: &Rep) -> Result<Decomposition> {
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
    let xt = hinv.mul(r.x())?.mul(&h)?;
    let yt = hinv.mul(r.y())?.mul(&h)?;
    // both transformed matrices must be block diagonal (Y-invariance of the
    // eigenspaces is a theorem, so any violation is an internal error)
    for m in [&xt, &yt] {
        for (bi, ri) in ranges.iter().enumerate() {
            for (bj, rj) in ranges.iter().enumerate() {
                if bi == bj {
                    continue;
                }
                for i in ri.clone() {
                    for j in rj.clone() {
                        if !m.get(i, j).is_zero() {
                            return Err(Error::InvarianceFailure(
                                "eigenspace not invariant".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut summands = Vec::with_capacity(spaces.len());
    for ((lambda, basis), range) in spaces.into_iter().zip(ranges) {
        let d = range.len();
        let sub = |m: &QMat| {
            QMat::from_fn(d, d, |i, j| m.get(range.start + i, range.start + j).clone())
        };
        let rep = validate_rep(sub(&xt), sub(&yt))?;
        summands.push(Summand {
            eigenvalue: lambda,
            basis,
            rep,
        });
    }
    Ok(Decomposition { summands })
}

/// Solution space of {gX = Xg, gY = Yg}: the endomorphism algebra of the
/// module, as a matrix span (it contains the identity and is closed under
/// products).
pub fn endomorphism_algebra(r: &Rep) -> MatSpan {
    let sols = intertwiner_space(r, r);
    MatSpan::from_mats(r.n(), sols.iter())
}

/// Basis of {g : g X₁ = X₂ g and g Y₁ = Y₂ g} (maps r1 → r2).
fn intertwiner_space(r1: &Rep, r2: &Rep) -> Vec<QMat> {
    let n = r1.n();
    assert_eq!(n, r2.n());
    // rows: entries of gX1 − X2g and gY1 − Y2g; columns: entries g_{ab}
    let constraints = |m1: &QMat, m2: &QMat, rows: &mut Vec<Vec<Rat>>| {
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![Rat::zero(); n * n];
                for b in 0..n {
                    row[i * n + b] += m1.get(b, j); // g_{ib} X1_{bj}
                }
                for a in 0..n {
                    row[a * n + j] -= m2.get(i, a); // X2_{ia} g_{aj}
                }
                rows.push(row);
            }
        }
    };
    let mut rows = Vec::with_capacity(2 * n * n);
    constraints(r1.x(), r2.x(), &mut rows);
    constraints(r1.y(), r2.y(), &mut rows);
    let sys = QMat::from_fn(rows.len(), n * n, |i, j| rows[i][j].clone());
    sys.nullspace_basis()
        .into_iter()
        .map(|v| QMat::from_fn(n, n, |i, j| v[i * n + j].clone()))
        .collect()
}

/// Locality test on the endomorphism algebra: the module is indecomposable
/// iff dim End − dim rad(End) = 1.
pub fn is_indecomposable(r: &Rep) -> Result<bool> {
    // locality is checked against the rational-split path
    let _ = eigenvalue_multiset(r.x())?;
    let end = endomorphism_algebra(r);
    let rad = radical_basis(&end)?;
    Ok(end.dim() - rad.dim() == 1)
}

/// Irreducible modules are exactly the one-dimensional ones: any larger
/// module has the common eigenvector as a proper submodule.
pub fn is_irreducible(r: &Rep) -> Result<bool> {
    let _ = eigenvalue_multiset(r.x())?;
    Ok(r.n() == 1)
}

/// A common eigenvector: v ≠ 0 with Yv = 0 and Xv = λv, found inside ker Y
/// (which is X-invariant by the relation).
pub fn common_eigenvector(r: &Rep) -> Result<Vec<Rat>> {
    common_eigenvector_raw(r.x(), r.y())
}

fn common_eigenvector_raw(x: &QMat, y: &QMat) -> Result<Vec<Rat>> {
    let n = x.rows();
    let kernel = y.nullspace_basis();
    let d = kernel.len();
    if d == 0 {
        return Err(Error::InvarianceFailure("ker Y is trivial".into()));
    }
    let k = QMat::from_fn(n, d, |i, j| kernel[j][i].clone());
    // X maps ker Y into itself; express the restriction in the kernel basis
    // by solving K·M = X·K column by column.
    let xk = x.mul(&k)?;
    let mut m_cols = Vec::with_capacity(d);
    for j in 0..d {
        let col = solve_in_span(&k, &(0..n).map(|i| xk.get(i, j).clone()).collect::<Vec<_>>())
            .ok_or_else(|| Error::InvarianceFailure("ker Y is not X-invariant".into()))?;
        m_cols.push(col);
    }
    let m = QMat::from_fn(d, d, |i, j| m_cols[j][i].clone());
    let (roots, split) = m.char_poly()?.rational_roots();
    if !split && roots.is_empty() {
        return Err(Error::EigenvaluesNotRational);
    }
    let lambda = roots[0].0.clone();
    let shifted = m.sub(&QMat::identity(d).scale(&lambda))?;
    let null = shifted.nullspace_basis();
    let c = &null[0];
    let mut v = vec![Rat::zero(); n];
    for (cj, kj) in c.iter().zip(&kernel) {
        for i in 0..n {
            v[i] += &(cj * &kj[i]);
        }
    }
    Ok(v)
}

/// Solve K·t = b exactly; None when b is outside the column span.
fn solve_in_span(k: &QMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let (n, d) = (k.rows(), k.cols());
    let aug = QMat::from_fn(n, d + 1, |i, j| {
        if j < d {
            k.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (rows, pivots) = aug.rref();
    if pivots.contains(&d) {
        return None; // inconsistent
    }
    let mut t = vec![Rat::zero(); d];
    for (r, &p) in pivots.iter().enumerate() {
        t[p] = rows[r][d].clone();
    }
    Some(t)
}

/// Invertible g with gXg⁻¹ and gYg⁻¹ both upper triangular, built by
/// repeatedly splitting off a common eigenvector.
pub fn simultaneous_triangularize(r: &Rep) -> Result<QMat> {
    let h = triangularizing_basis(r.x(), r.y())?;
    h.inverse()
}

fn triangularizing_basis(x: &QMat, y: &QMat) -> Result<QMat> {
    let n = x.rows();
    if n <= 1 {
        return Ok(QMat::identity(n));
    }
    let v = common_eigenvector_raw(x, y)?;
    let h1 = complete_to_basis(&v);
    let h1inv = h1.inverse()?;
    let x1 = h1inv.mul(x)?.mul(&h1)?;
    let y1 = h1inv.mul(y)?.mul(&h1)?;
    let trailing = |m: &QMat| QMat::from_fn(n - 1, n - 1, |i, j| m.get(i + 1, j + 1).clone());
    let h2t = triangularizing_basis(&trailing(&x1), &trailing(&y1))?;
    let h2 = QMat::from_fn(n, n, |i, j| {
        if i == 0 || j == 0 {
            if i == j { Rat::one() } else { Rat::zero() }
        } else {
            h2t.get(i - 1, j - 1).clone()
        }
    });
    h1.mul(&h2)
}

/// Extend a nonzero vector to an invertible matrix whose first column it is,
/// filling with standard basis vectors.
fn complete_to_basis(v: &[Rat]) -> QMat {
    let n = v.len();
    let mut cols: Vec<Vec<Rat>> = vec![v.to_vec()];
    for i in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        cols.push(e.clone());
        let m = QMat::from_fn(n, cols.len(), |r, c| cols[c][r].clone());
        if m.rank() < cols.len() {
            cols.pop();
        }
    }
    QMat::from_fn(n, n, |i, j| cols[j][i].clone())
}

/// The canonical representative of an orbit on the full-block stratum:
/// X = λI + ε(x) + μY, Y = J_n.
pub fn canonical_rep(n: usize, lambda: &Rat, mu: &Rat) -> Rep {
    let mut c = vec![Rat::zero(); n.saturating_sub(1)];
    if n >= 2 {
        c[0] = mu.clone();
    }
    build_full_block(
        n,
        &FullBlockParams {
            lambda: lambda.clone(),
            c,
        },
    )
    .expect("canonical parameters validate")
}

/// Canonical invariants of a full-block pair and the conjugator realizing
/// them: conjugator · X · conjugator⁻¹ = λI + ε(x) + μJ.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CanonicalPair {
    pub lambda: Rat,
    pub mu: Rat,
    pub conjugator: QMat,
}

/// Brings a rank(Y) = n−1 pair to its canonical form P_{λ,μ}: first a Jordan
/// basis turns Y into J_n, then centralizer conjugations I + αJ^i
/// (i = 1..n−2, ascending) kill the Toeplitz coefficients of Y², …, Y^{n−1}
/// in X, using [X, J^i] = i·J^{i+1} on the stratum.
pub fn canonical_full_block(r: &Rep) -> Result<CanonicalPair> {
    let n = r.n();
    if n == 0 || r.y().rank() != n - 1 {
        return Err(Error::NotFullBlock);
    }
    // Jordan chain: v with Y^{n-1} v != 0, columns [Y^{n-1}v, ..., Yv, v]
    let ytop = r.y().pow(n - 1)?;
    let j0 = (0..n)
        .find(|&j| (0..n).any(|i| !ytop.get(i, j).is_zero()))
        .ok_or(Error::NotFullBlock)?;
    let mut chain = Vec::with_capacity(n);
    let mut v = QMat::from_fn(n, 1, |i, _| {
        if i == j0 { Rat::one() } else { Rat::zero() }
    });
    chain.push(v.clone());
    for _ in 1..n {
        v = r.y().mul(&v)?;
        chain.push(v.clone());
    }
    chain.reverse();
    let h = QMat::from_fn(n, n, |i, j| chain[j].get(i, 0).clone());
    let mut g = h.inverse()?;
    let jn = QMat::jordan_block(n);
    if r.y().conjugate(&g)? != jn {
        return Err(Error::InvarianceFailure("Jordan basis failed".into()));
    }
    let mut x = r.x().conjugate(&g)?;
    // kill the coefficients of J^2..J^{n-1} from below
    for i in 1..=n.saturating_sub(2) {
        let c = x.get(0, i + 1).clone();
        if c.is_zero() {
            continue;
        }
        let alpha = &c / &Rat::from_int(i as i64);
        let cmat = QMat::identity(n).add(&jn.pow(i)?.scale(&alpha))?;
        x = x.conjugate(&cmat)?;
        g = cmat.mul(&g)?;
    }
    let lambda = x.get(0, 0).clone();
    let mu = if n >= 2 { x.get(0, 1).clone() } else { Rat::zero() };
    let expected = canonical_rep(n, &lambda, &mu);
    if &x != expected.x() {
        return Err(Error::InvarianceFailure(
            "normalized X left the canonical affine line".into(),
        ));
    }
    Ok(CanonicalPair {
        lambda,
        mu,
        conjugator: g,
    })
}

/// Exact rank of the derivative of the centralizer-orbit map at the point
/// C = I + α₁J + … + α_{n−1}J^{n−1}: directions Δ = J^k are sent to the
/// derivative of t ↦ (C+tΔ)⁻¹X(C+tΔ). Always n−2 on the full-block stratum.
pub fn jacobian_rank(n: usize, params: &FullBlockParams, centralizer: &[Rat]) -> Result<usize> {
    assert!(n >= 2);
    if centralizer.len() != n - 1 {
        return Err(Error::ParamCountMismatch {
            expected: n - 1,
            got: centralizer.len(),
        });
    }
    let rep = build_full_block(n, params)?;
    let x = rep.x();
    let jn = QMat::jordan_block(n);
    let mut c = QMat::identity(n);
    for (k, a) in centralizer.iter().enumerate() {
        c = c.add(&jn.pow(k + 1)?.scale(a))?;
    }
    let cinv = c.inverse()?;
    let phi = cinv.mul(x)?.mul(&c)?;
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n - 1);
    for k in 1..n {
        let delta = jn.pow(k)?;
        // d/dt (C+tΔ)^{-1} X (C+tΔ) at t=0 = −C⁻¹ Δ φ(C) + C⁻¹ X Δ
        let d = cinv
            .mul(&x.mul(&delta)?)?
            .sub(&cinv.mul(&delta)?.mul(&phi)?)?;
        cols.push(d.flatten().to_vec());
    }
    let m = QMat::from_fn(n * n, cols.len(), |i, j| cols[j][i].clone());
    Ok(m.rank())
}

/// Deterministic-where-possible isomorphism test. Returns a conjugating
/// witness g (gX₁g⁻¹ = X₂, gY₁g⁻¹ = Y₂) when the modules are isomorphic,
/// None when provably not, and Inconclusive only when the intertwiner space
/// is too large for the exact grid search and the seeded random search fails.
pub fn are_isomorphic(r1: &Rep, r2: &Rep, seed: u64) -> Result<Option<QMat>> {
    if r1.n() != r2.n() {
        return Ok(None);
    }
    let n = r1.n();
    if r1.partition() != r2.partition() {
        return Ok(None);
    }
    if let (Ok(e1), Ok(e2)) = (eigenvalue_multiset(r1.x()), eigenvalue_multiset(r2.x())) {
        if e1 != e2 {
            return Ok(None);
        }
    }
    let basis = intertwiner_space(r1, r2);
    let s = basis.len();
    if s == 0 {
        return Ok(None);
    }
    let combine = |t: &[Rat]| {
        let mut g = QMat::zeros(n, n);
        for (c, b) in t.iter().zip(&basis) {
            g = g.add(&b.scale(c)).expect("square");
        }
        g
    };
    let is_witness = |g: &QMat| -> bool {
        g.mul(r1.x()).unwrap() == r2.x().mul(g).unwrap()
            && g.mul(r1.y()).unwrap() == r2.y().mul(g).unwrap()
    };
    // det(Σ tᵢBᵢ) has degree ≤ n in each tᵢ, so vanishing on the full grid
    // {0..n}^s proves it is identically zero — an exact decision.
    let grid_points = (n as u128 + 1).checked_pow(s as u32);
    if let Some(p) = grid_points.filter(|&p| p <= 20_000) {
        let mut t = vec![Rat::zero(); s];
        for idx in 1..p {
            let mut rem = idx;
            for ti in t.iter_mut() {
                *ti = Rat::from_int((rem % (n as u128 + 1)) as i64);
                rem /= n as u128 + 1;
            }
            let g = combine(&t);
            if g.rank() == n {
                debug_assert!(is_witness(&g));
                return Ok(Some(g));
            }
        }
        return Ok(None);
    }
    // fall back to a seeded random search
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = 200;
    for _ in 0..trials {
        let t: Vec<Rat> = (0..s)
            .map(|_| Rat::from_int(rng.gen_range(-3..=3)))
            .collect();
        let g = combine(&t);
        if g.rank() == n {
            debug_assert!(is_witness(&g));
            return Ok(Some(g));
        }
    }
    Err(Error::Inconclusive { trials })
}

/// On the full-block stratum every pair is auto-equivalent to every other:
/// returns the witness automorphism f = (p, 1) and conjugator g with
/// g · twist(r1, f) · g⁻¹ = r2 exactly.
pub fn auto_equivalent_full_block(r1: &Rep, r2: &Rep) -> Result<(bool, Automorphism, QMat)> {
    if r1.n() != r2.n() {
        return Err(Error::DimensionMismatch(format!(
            "auto-equivalence of sizes {} and {}",
            r1.n(),
            r2.n()
        )));
    }
    let c1 = canonical_full_block(r1)?;
    let c2 = canonical_full_block(r2)?;
    let p = vec![&c2.lambda - &c1.lambda, &c2.mu - &c1.mu];
    let f = Automorphism::new(p, Rat::one())?;
    let g = c2.conjugator.inverse()?.mul(&c1.conjugator)?;
    let twisted = twist(r1, &f)?;
    let ok = twisted.x().conjugate(&g)? == *r2.x() && twisted.y().conjugate(&g)? == *r2.y();
    if !ok {
        return Err(Error::InvarianceFailure(
            "auto-equivalence witness failed verification".into(),
        ));
    }
    Ok((true, f, g))
}

/// The one-parameter family on the (n−1,1) stratum: both eigenvalues zero,
/// the upper coupling slot normalized to 1 and the lower carrying α. The
/// product of the two coupling entries is invariant under any isomorphism
/// fixing this Y, so distinct α give non-isomorphic modules. (Putting α and
/// α⁻¹ on the two slots would make that product constant and collapse the
/// family to a single orbit.)
pub fn hook_family(n: usize, alpha: &Rat) -> Result<Rep> {
    assert!(n >= 3);
    if alpha.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let p = Partition::new(vec![n - 1, 1])?;
    let mut params = PartitionParams::zero(&p);
    params.set_block(0, 1, vec![Rat::one()]);
    params.set_block(1, 0, vec![alpha.clone()]);
    build_from_partition(&p, &params)
}

/// All shapes (up to sampled parameters) of candidate extensions of S_b by
/// S_a at n = 2: X upper triangular with diagonal (a, b), Y strictly upper,
/// subject to the relation (which forces (a−b)·y₁₂ = 0).
pub fn extension_candidates(a: &Rat, b: &Rat) -> Vec<Rep> {
    let mut out = Vec::new();
    for s in [-1i64, 0, 1, 2] {
        for t in [-1i64, 0, 1, 2] {
            let t_rat = Rat::from_int(t);
            if !(&(a - b) * &t_rat).is_zero() {
                continue; // violates the relation
            }
            let x = QMat::from_fn(2, 2, |i, j| match (i, j) {
                (0, 0) => a.clone(),
                (1, 1) => b.clone(),
                (0, 1) => Rat::from_int(s),
                _ => Rat::zero(),
            });
            let y = QMat::from_fn(2, 2, |i, j| {
                if (i, j) == (0, 1) {
                    t_rat.clone()
                } else {
                    Rat::zero()
                }
            });
            out.push(validate_rep(x, y).expect("constraint enforced"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repspace::build_epsilon;
    use crate::sampling;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn is_upper_triangular(m: &QMat) -> bool {
        (0..m.rows()).all(|i| (0..i).all(|j| m.get(i, j).is_zero()))
    }

    fn conjugated(r: &Rep, g: &QMat) -> Rep {
        validate_rep(r.x().conjugate(g).unwrap(), r.y().conjugate(g).unwrap()).unwrap()
    }

    fn block_diag(r1: &Rep, r2: &Rep) -> Rep {
        let (n1, n2) = (r1.n(), r2.n());
        let emb = |a: &QMat, b: &QMat| {
            QMat::from_fn(n1 + n2, n1 + n2, |i, j| {
                if i < n1 && j < n1 {
                    a.get(i, j).clone()
                } else if i >= n1 && j >= n1 {
                    b.get(i - n1, j - n1).clone()
                } else {
                    Rat::zero()
                }
            })
        };
        validate_rep(emb(r1.x(), r2.x()), emb(r1.y(), r2.y())).unwrap()
    }

    #[test]
    fn generalized_eigenspace_examples() {
        let x = QMat::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let spaces = generalized_eigenspaces(&x).unwrap();
        assert_eq!(spaces.len(), 2);
        assert_eq!(spaces[0].0, Rat::from_int(1));
        assert_eq!(spaces[0].1.len(), 2);
        assert_eq!(spaces[1].1.len(), 1);

        let spaces = generalized_eigenspaces(&QMat::jordan_block(3)).unwrap();
        assert_eq!(spaces.len(), 1);
        assert_eq!(spaces[0].0, Rat::zero());
        assert_eq!(spaces[0].1.len(), 3);

        let comp = QMat::from_int_rows(&[&[0, 2], &[1, 0]]);
        assert!(matches!(
            generalized_eigenspaces(&comp),
            Err(Error::EigenvaluesNotRational)
        ));
    }

    #[test]
    fn decompose_examples() {
        let x = QMat::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        let r = validate_rep(x, QMat::zeros(3, 3)).unwrap();
        assert_eq!(decompose(&r).unwrap().summands.len(), 3);

        assert_eq!(decompose(&build_epsilon(4)).unwrap().summands.len(), 1);

        // sum of full blocks with distinct eigenvalues splits back apart,
        // even after conjugating: the Ext^1-vanishing witness
        let mut rng = StdRng::seed_from_u64(83);
        let p0 = canonical_rep(3, &Rat::zero(), &Rat::one());
        let p1 = canonical_rep(2, &Rat::one(), &Rat::from_int(2));
        let sum = block_diag(&p0, &p1);
        let g = sampling::rand_invertible(&mut rng, 5);
        let dec = decompose(&conjugated(&sum, &g)).unwrap();
        assert_eq!(dec.summands.len(), 2);
        let mut dims: Vec<usize> = dec.summands.iter().map(|s| s.rep.n()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![2, 3]);
        for s in &dec.summands {
            assert_eq!(s.basis.len(), s.rep.n());
        }
    }

    #[test]
    fn indecomposability_and_endomorphisms() {
        let one = validate_rep(
            QMat::from_int_rows(&[&[5]]),
            QMat::zeros(1, 1),
        )
        .unwrap();
        assert!(is_indecomposable(&one).unwrap());
        assert_eq!(endomorphism_algebra(&one).dim(), 1);

        for n in 2..=6 {
            assert!(is_indecomposable(&build_epsilon(n)).unwrap(), "eps_{n}");
        }

        let sum = block_diag(&build_epsilon(2), &build_epsilon(3));
        assert!(!is_indecomposable(&sum).unwrap());

        // a single eigenvalue is necessary for indecomposability
        let mut rng = StdRng::seed_from_u64(89);
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let r = sampling::rand_rep(&mut rng, n);
            if !r.x().rational_eigenvalues().unwrap().1 {
                continue;
            }
            let k = decompose(&r).unwrap().summands.len();
            if is_indecomposable(&r).unwrap() {
                assert_eq!(k, 1);
            }
        }
    }

    #[test]
    fn irreducibility_and_common_eigenvectors() {
        let one = validate_rep(QMat::from_int_rows(&[&[3]]), QMat::zeros(1, 1)).unwrap();
        assert!(is_irreducible(&one).unwrap());
        assert!(!is_irreducible(&build_epsilon(2)).unwrap());

        let r = build_epsilon(4);
        let v = common_eigenvector(&r).unwrap();
        // v spans ker Y ∩ ker X here: the first coordinate direction
        assert!(!v[0].is_zero());
        assert!(v[1..].iter().all(Rat::is_zero));

        let mut rng = StdRng::seed_from_u64(97);
        for _ in 0..30 {
            let n = rng.gen_range(1..=6);
            let r = sampling::rand_rep(&mut rng, n);
            if !r.x().rational_eigenvalues().unwrap().1 {
                continue;
            }
            let v = common_eigenvector(&r).unwrap();
            assert!(v.iter().any(|c| !c.is_zero()));
            let vm = QMat::from_fn(n, 1, |i, _| v[i].clone());
            assert!(r.y().mul(&vm).unwrap().is_zero());
            let xv = r.x().mul(&vm).unwrap();
            // Xv must be proportional to v
            let stacked = QMat::from_fn(n, 2, |i, j| {
                if j == 0 { v[i].clone() } else { xv.get(i, 0).clone() }
            });
            assert_eq!(stacked.rank(), 1);
        }
    }

    #[test]
    fn triangularization() {
        let mut rng = StdRng::seed_from_u64(101);
        let r = conjugated(&build_epsilon(4), &sampling::rand_invertible(&mut rng, 4));
        let g = simultaneous_triangularize(&r).unwrap();
        assert!(is_upper_triangular(&r.x().conjugate(&g).unwrap()));
        assert!(is_upper_triangular(&r.y().conjugate(&g).unwrap()));

        for _ in 0..15 {
            let n = rng.gen_range(1..=6);
            let r = sampling::rand_rep(&mut rng, n);
            if !r.x().rational_eigenvalues().unwrap().1 {
                continue; // simultaneous triangularization needs a split spectrum
            }
            let g = simultaneous_triangularize(&r).unwrap();
            assert!(is_upper_triangular(&r.x().conjugate(&g).unwrap()));
            assert!(is_upper_triangular(&r.y().conjugate(&g).unwrap()));
        }
    }

    #[test]
    fn canonical_form_recovers_invariants() {
        // epsilon_n is already canonical with (0,0)
        for n in 2..=6 {
            let c = canonical_full_block(&build_epsilon(n)).unwrap();
            assert_eq!((c.lambda, c.mu), (Rat::zero(), Rat::zero()));
        }

        let mut rng = StdRng::seed_from_u64(103);
        for n in 3..=6 {
            for _ in 0..10 {
                let lambda = sampling::rand_rat(&mut rng, -3, 3);
                let c1 = sampling::rand_rat(&mut rng, -3, 3);
                let mut c = vec![c1.clone()];
                c.extend((1..n - 1).map(|_| sampling::rand_rat(&mut rng, -3, 3)));
                let r = build_full_block(n, &FullBlockParams { lambda: lambda.clone(), c }).unwrap();
                let g = sampling::rand_invertible(&mut rng, n);
                let pair = canonical_full_block(&conjugated(&r, &g)).unwrap();
                assert_eq!(pair.lambda, lambda);
                assert_eq!(pair.mu, c1);
            }
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_conjugator_works() {
        let mut rng = StdRng::seed_from_u64(107);
        let r = conjugated(
            &canonical_rep(5, &Rat::from_int(2), &Rat::from_frac(1, 3)),
            &sampling::rand_invertible(&mut rng, 5),
        );
        let pair = canonical_full_block(&r).unwrap();
        let canon = canonical_rep(5, &pair.lambda, &pair.mu);
        assert_eq!(r.x().conjugate(&pair.conjugator).unwrap(), *canon.x());
        assert_eq!(r.y().conjugate(&pair.conjugator).unwrap(), *canon.y());

        let again = canonical_full_block(&canon).unwrap();
        assert_eq!((again.lambda, again.mu), (pair.lambda, pair.mu));

        // non-full-block input is rejected
        assert!(matches!(
            canonical_full_block(&validate_rep(QMat::zeros(3, 3), QMat::zeros(3, 3)).unwrap()),
            Err(Error::NotFullBlock)
        ));
    }

    #[test]
    fn jacobian_rank_is_n_minus_2() {
        let mut rng = StdRng::seed_from_u64(109);
        for n in 2..=8 {
            for _ in 0..5 {
                let params = FullBlockParams {
                    lambda: sampling::rand_rat(&mut rng, -3, 3),
                    c: (0..n - 1).map(|_| sampling::rand_rat(&mut rng, -3, 3)).collect(),
                };
                let cent: Vec<Rat> =
                    (0..n - 1).map(|_| sampling::rand_rat(&mut rng, -3, 3)).collect();
                assert_eq!(jacobian_rank(n, &params, &cent).unwrap(), n - 2, "n={n}");
            }
        }
    }

    #[test]
    fn isomorphism_testing() {
        let mut rng = StdRng::seed_from_u64(113);
        let n = 5;
        let p00 = canonical_rep(n, &Rat::zero(), &Rat::zero());

        // conjugates are isomorphic, with a verified witness
        let g = sampling::rand_invertible(&mut rng, n);
        let rc = conjugated(&p00, &g);
        let w = are_isomorphic(&p00, &rc, 42).unwrap().expect("isomorphic");
        assert_eq!(w.mul(p00.x()).unwrap(), rc.x().mul(&w).unwrap());
        assert_eq!(w.mul(p00.y()).unwrap(), rc.y().mul(&w).unwrap());
        assert_eq!(w.rank(), n);

        // distinct canonical pairs are not isomorphic
        let p10 = canonical_rep(n, &Rat::one(), &Rat::zero());
        let p01 = canonical_rep(n, &Rat::zero(), &Rat::one());
        assert!(are_isomorphic(&p00, &p10, 42).unwrap().is_none());
        assert!(are_isomorphic(&p00, &p01, 42).unwrap().is_none());

        // different Jordan types are never isomorphic
        let other = sampling::rand_standard_rep(&mut rng, n);
        if other.partition() != p00.partition() {
            assert!(are_isomorphic(&p00, &other, 42).unwrap().is_none());
        }
    }

    #[test]
    fn auto_equivalence_on_the_stratum() {
        let (ok, f, g) = auto_equivalent_full_block(&build_epsilon(4), &build_epsilon(4)).unwrap();
        assert!(ok);
        assert!(f.is_identity());
        // g may be any self-conjugation of epsilon_4; verified inside the call
        assert_eq!(g.rank(), 4);

        let mut rng = StdRng::seed_from_u64(127);
        for n in 3..=5 {
            let params = FullBlockParams {
                lambda: sampling::rand_rat(&mut rng, -3, 3),
                c: (0..n - 1).map(|_| sampling::rand_rat(&mut rng, -3, 3)).collect(),
            };
            let r = conjugated(
                &build_full_block(n, &params).unwrap(),
                &sampling::rand_invertible(&mut rng, n),
            );
            let (ok, f, _) = auto_equivalent_full_block(&r, &build_epsilon(n)).unwrap();
            assert!(ok);
            assert_eq!(f.c, Rat::one());
        }
    }

    #[test]
    fn hook_family_properties() {
        let r = hook_family(4, &Rat::from_int(2)).unwrap();
        assert_eq!(r.partition().parts(), &[3, 1]);
        assert_eq!(*r.x().get(0, 3), Rat::one());
        assert_eq!(*r.x().get(3, 2), Rat::from_int(2));
        assert!(r.x().is_nilpotent().unwrap());

        assert!(matches!(
            hook_family(4, &Rat::zero()),
            Err(Error::ZeroParameter)
        ));

        // one-parameter separation
        let pairs = [(1, 2), (1, -1), (2, 3), (-2, 5)];
        for n in [4, 5] {
            for (a, b) in pairs {
                let ra = hook_family(n, &Rat::from_int(a)).unwrap();
                let rb = hook_family(n, &Rat::from_int(b)).unwrap();
                assert!(
                    are_isomorphic(&ra, &rb, 42).unwrap().is_none(),
                    "hook({n},{a}) vs hook({n},{b})"
                );
                assert!(are_isomorphic(&ra, &ra, 42).unwrap().is_some());
            }
        }

        // indecomposable, single summand
        assert!(is_indecomposable(&hook_family(4, &Rat::from_int(2)).unwrap()).unwrap());
        assert_eq!(
            decompose(&hook_family(5, &Rat::from_int(3)).unwrap())
                .unwrap()
                .summands
                .len(),
            1
        );
    }

    #[test]
    fn extension_candidates_all_decompose() {
        for (a, b) in [(0, 1), (2, -1), (1, 3)] {
            let (a, b) = (Rat::from_int(a), Rat::from_int(b));
            for r in extension_candidates(&a, &b) {
                let dec = decompose(&r).unwrap();
                assert_eq!(dec.summands.len(), 2, "a={a}, b={b}");
            }
        }
        // equal eigenvalues do admit non-split candidates
        let same = extension_candidates(&Rat::one(), &Rat::one());
        assert!(same
            .iter()
            .any(|r| decompose(r).unwrap().summands.len() == 1));
    }

    #[test]
    fn full_block_stratum_has_no_decomposables() {
        let mut rng = StdRng::seed_from_u64(131);
        for n in 2..=6 {
            for _ in 0..5 {
                let params = FullBlockParams {
                    lambda: sampling::rand_rat(&mut rng, -3, 3),
                    c: (0..n - 1).map(|_| sampling::rand_rat(&mut rng, -3, 3)).collect(),
                };
                let r = build_full_block(n, &params).unwrap();
                assert!(is_indecomposable(&r).unwrap());
            }
        }
    }

    #[test]
    fn canonical_pair_json() {
        let pair = canonical_full_block(&canonical_rep(3, &Rat::one(), &Rat::from_frac(1, 2)))
            .unwrap();
        let s = serde_json::to_string(&pair).unwrap();
        let back: CanonicalPair = serde_json::from_str(&s).unwrap();
        assert_eq!(pair, back);

        let dec = decompose(&build_epsilon(3)).unwrap();
        let s = serde_json::to_string(&dec).unwrap();
        let back: Decomposition = serde_json::from_str(&s).unwrap();
        assert_eq!(dec, back);
    }
}
