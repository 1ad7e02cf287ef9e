//! Seeded random generators for exact objects: small rationals, invertible
//! matrices, partitions, and valid representations. Shared by the property
//! tests and the verification suites, so results are reproducible from a
//! single seed.

use rand::Rng;

use crate::exact::{QMat, Rat};
use crate::repspace::{build_from_partition, validate_rep, Partition, PartitionParams, Rep};

pub fn rand_rat(rng: &mut impl Rng, lo: i64, hi: i64) -> Rat {
    Rat::from_int(rng.gen_range(lo..=hi))
}

/// Random invertible matrix with small integer entries: unit lower triangular
/// times unit upper triangular, so the determinant is exactly 1.
pub fn rand_invertible(rng: &mut impl Rng, n: usize) -> QMat {
    let mut l = QMat::identity(n);
    let mut u = QMat::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i > j {
                l.set(i, j, rand_rat(rng, -2, 2));
            } else if i < j {
                u.set(i, j, rand_rat(rng, -2, 2));
            }
        }
    }
    l.mul(&u).expect("square")
}

/// Uniform-ish random partition of n: parts are drawn greedily then sorted.
pub fn rand_partition(rng: &mut impl Rng, n: usize) -> Partition {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Partition::new(parts).expect("sorted positive parts")
}

/// Random parameter set for a partition with every block present.
pub fn rand_partition_params(rng: &mut impl Rng, p: &Partition) -> PartitionParams {
    let parts = p.parts();
    let mut params = PartitionParams::zero(p);
    for l in params.lambda.iter_mut() {
        *l = rand_rat(rng, -3, 3);
    }
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            let len = if i == j {
                parts[i] - 1
            } else {
                parts[i].min(parts[j])
            };
            let coeffs: Vec<Rat> = (0..len).map(|_| rand_rat(rng, -3, 3)).collect();
            if !coeffs.is_empty() {
                params.set_block(i, j, coeffs);
            }
        }
    }
    params
}

/// Random valid representation of dimension n in standard blockwise shape.
pub fn rand_standard_rep(rng: &mut impl Rng, n: usize) -> Rep {
    let p = rand_partition(rng, n);
    let params = rand_partition_params(rng, &p);
    build_from_partition(&p, &params).expect("builder output validates")
}

/// Random valid representation of dimension n, conjugated out of the standard
/// shape by a random change of basis.
pub fn rand_rep(rng: &mut impl Rng, n: usize) -> Rep {
    let r = rand_standard_rep(rng, n);
    let g = rand_invertible(rng, n);
    let x = r.x().conjugate(&g).expect("invertible");
    let y = r.y().conjugate(&g).expect("invertible");
    validate_rep(x, y).expect("relation is conjugation-invariant")
}
