//! Exact rational vectors and small polyhedral primitives.
//!
//! The one workhorse is [`orthant_section_rays`]: a generating set of rays for
//! a cone of the form {x >= 0 : Ax = 0}, computed by the double-description
//! sweep. Farkas-style feasibility questions (cone membership, implicit
//! equalities of H-polyhedra) reduce to it by homogenization. No floating
//! point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q_from_i64(x: i64) -> Q {
    BigRational::from_integer(BigInt::from(x))
}

pub fn qvec_from_i64(v: &[i64]) -> QVec {
    v.iter().map(|&x| q_from_i64(x)).collect()
}

pub fn qvec_zero(n: usize) -> QVec {
    vec![Q::zero(); n]
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_qi(a: &[Q], b: &[i64]) -> Q {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, &y)| x * q_from_i64(y)).sum()
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Q], c: &Q) -> QVec {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Scale a nonzero rational vector to primitive integer form, preserving the
/// direction (ray normalization).
pub fn primitive_ray(v: &[Q]) -> Vec<i64> {
    assert!(!is_zero_vec(v), "zero vector has no direction");
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    ints.iter()
        .map(|x| {
            let r = x / &gcd;
            i64::try_from(&r).expect("primitive ray fits i64")
        })
        .collect()
}

/// Primitive integer normal of a line/hyperplane: sign-normalized so the
/// first nonzero entry is positive.
pub fn primitive_normal(v: &[i64]) -> Vec<i64> {
    let mut g: i64 = 0;
    for &x in v {
        g = g.gcd(&x);
    }
    assert!(g != 0, "zero normal");
    let mut out: Vec<i64> = v.iter().map(|&x| x / g).collect();
    if let Some(first) = out.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in &mut out {
                *x = -*x;
            }
        }
    }
    out
}

/// Generating rays of {x in Q^dim : x >= 0, a.x = 0 for every row a}.
///
/// Double-description sweep starting from the coordinate rays. The output
/// generates the cone; it is deduplicated but may include non-extreme rays,
/// which is harmless for the membership and feasibility uses in this crate.
pub fn orthant_section_rays(rows: &[QVec], dim: usize) -> Vec<QVec> {
    let mut rays: Vec<QVec> = (0..dim)
        .map(|i| {
            let mut e = qvec_zero(dim);
            e[i] = Q::one();
            e
        })
        .collect();
    for a in rows {
        let mut zero: Vec<QVec> = Vec::new();
        let mut pos: Vec<(QVec, Q)> = Vec::new();
        let mut neg: Vec<(QVec, Q)> = Vec::new();
        for r in rays {
            let v = dot(a, &r);
            if v.is_zero() {
                zero.push(r);
            } else if v.is_positive() {
                pos.push((r, v));
            } else {
                neg.push((r, v));
            }
        }
        let mut next = zero;
        for (p, vp) in &pos {
            for (n, vn) in &neg {
                // vp * n - vn * p lies on the hyperplane (vn < 0 so this is a
                // nonnegative combination)
                let cand: QVec = p
                    .iter()
                    .zip(n)
                    .map(|(pc, nc)| nc * vp - pc * vn)
                    .collect();
                if !is_zero_vec(&cand) {
                    next.push(cand);
                }
            }
        }
        // dedupe by primitive direction
        let mut seen = std::collections::BTreeSet::new();
        let mut deduped = Vec::new();
        for r in next {
            if is_zero_vec(&r) {
                continue;
            }
            let key = primitive_ray(&r);
            if seen.insert(key.clone()) {
                deduped.push(qvec_from_i64(&key));
            }
        }
        rays = deduped;
    }
    rays
}

/// Is b a nonnegative combination of the given generators? Exact Farkas test
/// by homogenization: rays of {(lambda, t) >= 0 : G lambda - t b = 0} with a
/// positive t-coordinate witness feasibility.
pub fn in_cone_hull(generators: &[Vec<i64>], b: &[Q]) -> bool {
    if is_zero_vec(b) {
        return true;
    }
    if generators.is_empty() {
        return false;
    }
    let dim = b.len();
    let k = generators.len();
    let rows: Vec<QVec> = (0..dim)
        .map(|c| {
            let mut row: QVec = generators.iter().map(|g| q_from_i64(g[c])).collect();
            row.push(-b[c].clone());
            row
        })
        .collect();
    let rays = orthant_section_rays(&rows, k + 1);
    rays.iter().any(|r| r[k].is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_forms() {
        let v = vec![q_from_i64(2) / q_from_i64(3), q_from_i64(-4) / q_from_i64(3)];
        assert_eq!(primitive_ray(&v), vec![1, -2]);
        assert_eq!(primitive_normal(&[-2, 4]), vec![1, -2]);
    }

    #[test]
    fn rays_of_plane_section() {
        // {x >= 0 in R^3 : x1 - x2 = 0}: rays (1,1,0) and (0,0,1)
        let rows = vec![qvec_from_i64(&[1, -1, 0])];
        let rays = orthant_section_rays(&rows, 3);
        let prims: std::collections::BTreeSet<Vec<i64>> =
            rays.iter().map(|r| primitive_ray(r)).collect();
        assert!(prims.contains(&vec![1, 1, 0]));
        assert!(prims.contains(&vec![0, 0, 1]));
    }

    #[test]
    fn cone_membership() {
        let gens = vec![vec![1, 0], vec![1, 1]];
        assert!(in_cone_hull(&gens, &qvec_from_i64(&[3, 1])));
        assert!(in_cone_hull(&gens, &qvec_from_i64(&[1, 1])));
        assert!(!in_cone_hull(&gens, &qvec_from_i64(&[0, 1])));
        assert!(!in_cone_hull(&gens, &qvec_from_i64(&[-1, 0])));
        assert!(in_cone_hull(&gens, &qvec_zero(2)));
    }
}
