//! g-vectors, G- and C-matrices, cones of tau-rigid pairs, fan consistency.
//!
//! All cone arithmetic is exact rational. Cones of tau-rigid pairs have
//! linearly independent generators, so membership is a linear solve plus sign
//! checks; pairwise intersections for the fan property go through the
//! double-description primitive in [`crate::geom`].

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::catalog::Catalog;
use crate::error::{Result, TaufanError};
use crate::field::Field;
use crate::geom::{dot_qi, orthant_section_rays, primitive_ray, q_from_i64, qvec_from_i64, Q, QVec};
use crate::linalg::Matrix;
use crate::rep::{hom_dim, Representation};
use crate::tau::{MutationGraph, PairKey, TauPair};

pub use crate::rep::g_vector;

/// Integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMatrix {
    pub rows: Vec<Vec<i64>>,
}

impl IMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> IMatrix {
        let n = cols.first().map_or(0, |c| c.len());
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        IMatrix { rows }
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.rows[0].len()).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> IMatrix {
        IMatrix::from_columns(&self.rows.clone())
    }

    pub fn det(&self) -> i64 {
        let n = self.n();
        match n {
            0 => 1,
            1 => self.rows[0][0],
            _ => (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = self.rows[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|&(c, _)| c != j)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * self.rows[0][j] * IMatrix { rows: minor }.det()
                })
                .sum(),
        }
    }

    /// Exact inverse; None when not invertible over Q, Err-free integrality
    /// is the caller's concern.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<Q>>> {
        let q = crate::field::Rationals;
        let m = Matrix::from_int_rows(q, &self.rows);
        let inv = m.inverse()?;
        Some(
            (0..inv.nrows())
                .map(|i| (0..inv.ncols()).map(|j| inv.get(i, j).clone()).collect())
                .collect(),
        )
    }

    pub fn mul(&self, other: &IMatrix) -> IMatrix {
        let n = self.n();
        let k = other.rows[0].len();
        let rows = (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| (0..other.n()).map(|l| self.rows[i][l] * other.rows[l][j]).sum())
                    .collect()
            })
            .collect();
        IMatrix { rows }
    }

    pub fn display(&self) -> String {
        let body = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|v| v.to_string()).join(",")))
            .join(",");
        format!("[{body}]")
    }
}

/// G-matrix of a pair: T summands' g-vectors as columns, then negated
/// canonical vectors for the P summands, in the pair's summand order.
pub fn g_matrix<F: Field>(pair: &TauPair<F>) -> Result<IMatrix> {
    let n = pair.algebra.vertex_count();
    if pair.rank() != n {
        return Err(TaufanError::NotTauTilting(format!(
            "G-matrix needs n = {n} summands, pair has {}",
            pair.rank()
        )));
    }
    let g = IMatrix::from_columns(&pair.signed_gvectors());
    let d = g.det();
    if d != 1 && d != -1 {
        return Err(TaufanError::inconsistency(
            "unimodularity",
            format!("det G = {d} for pair {:?}", pair.key()),
        ));
    }
    Ok(g)
}

/// C-matrix: the inverse transpose of the G-matrix, exact over the integers.
pub fn c_matrix<F: Field>(pair: &TauPair<F>) -> Result<IMatrix> {
    let g = g_matrix(pair)?;
    c_matrix_of(&g)
}

pub fn c_matrix_of(g: &IMatrix) -> Result<IMatrix> {
    let gt = g.transpose();
    let inv = gt.inverse_rational().ok_or_else(|| {
        TaufanError::inconsistency("c-matrix", "G^T not invertible".to_string())
    })?;
    let rows = inv
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(i64::try_from(x.numer()).map_err(|_| {
                            TaufanError::inconsistency("c-matrix", "entry overflows i64")
                        })?)
                    } else {
                        Err(TaufanError::inconsistency(
                            "c-matrix",
                            "inverse transpose is not integral",
                        ))
                    }
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IMatrix { rows })
}

// ---------------------------------------------------------------------------
// Cones
// ---------------------------------------------------------------------------

/// A rational simplicial cone spanned by signed g-vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<Vec<i64>>,
    pub ambient_dim: usize,
}

impl Cone {
    pub fn of_key(key: &PairKey, ambient_dim: usize) -> Cone {
        Cone { generators: key.clone(), ambient_dim }
    }

    pub fn dim(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        let q = crate::field::Rationals;
        Matrix::from_int_rows(q, &self.generators).rank()
    }

    /// Exact membership. Generators of tau-rigid cones are linearly
    /// independent, so the coordinates are unique; `strict` asks for the
    /// relative interior (all coordinates positive).
    pub fn contains(&self, v: &[Q], strict: bool) -> bool {
        if self.generators.is_empty() {
            return v.iter().all(|x| x.is_zero());
        }
        let q = crate::field::Rationals;
        let cols: Vec<Vec<i64>> = self.generators.clone();
        let mat = Matrix::from_int_rows(q, &cols).transpose();
        match mat.solve(v) {
            None => false,
            Some(alpha) => {
                if strict {
                    alpha.iter().all(|a| a.is_positive())
                } else {
                    alpha.iter().all(|a| !a.is_negative())
                }
            }
        }
    }

    /// Deterministic relative-interior sample: the generator average.
    pub fn interior_sample(&self) -> QVec {
        if self.generators.is_empty() {
            return vec![];
        }
        let n = self.ambient_dim;
        let mut acc = vec![Q::from_integer(0.into()); n];
        for g in &self.generators {
            for (i, &x) in g.iter().enumerate() {
                acc[i] += q_from_i64(x);
            }
        }
        let k = q_from_i64(self.generators.len() as i64);
        acc.into_iter().map(|x| x / &k).collect()
    }

    /// Generating rays of the intersection with another cone, as primitive
    /// integer directions (deduplicated; may include non-extreme rays).
    pub fn intersection_rays(&self, other: &Cone) -> Vec<Vec<i64>> {
        let dim = self.ambient_dim;
        let k1 = self.generators.len();
        let k2 = other.generators.len();
        if k1 == 0 || k2 == 0 {
            return vec![];
        }
        // {(alpha, beta) >= 0 : G1 alpha - G2 beta = 0}
        let rows: Vec<QVec> = (0..dim)
            .map(|c| {
                let mut row: QVec = Vec::with_capacity(k1 + k2);
                for g in &self.generators {
                    row.push(q_from_i64(g[c]));
                }
                for h in &other.generators {
                    row.push(-q_from_i64(h[c]));
                }
                row
            })
            .collect();
        let rays = orthant_section_rays(&rows, k1 + k2);
        let mut out: Vec<Vec<i64>> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for r in rays {
            // image under G1
            let mut img = vec![Q::from_integer(0.into()); dim];
            for (j, g) in self.generators.iter().enumerate() {
                for (c, &x) in g.iter().enumerate() {
                    img[c] += &r[j] * q_from_i64(x);
                }
            }
            if img.iter().all(|x| x.is_zero()) {
                continue;
            }
            let prim = primitive_ray(&img);
            if seen.insert(prim.clone()) {
                out.push(prim);
            }
        }
        out.sort();
        out
    }
}

pub fn cone_of_pair<F: Field>(pair: &TauPair<F>) -> Cone {
    Cone { generators: pair.signed_gvectors(), ambient_dim: pair.algebra.vertex_count() }
}

// ---------------------------------------------------------------------------
// Fan consistency
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FanViolation {
    pub node_a: usize,
    pub node_b: usize,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct FanReport {
    pub pairs_checked: usize,
    pub violations: Vec<FanViolation>,
}

/// The fan property: for every two nodes, the intersection of their cones is
/// the cone of their maximal common sub-pair (matched through g-vectors).
pub fn fan_check<F: Field>(graph: &MutationGraph<F>) -> FanReport {
    let n = graph
        .nodes
        .first()
        .map_or(0, |p| p.algebra.vertex_count());
    let keys: Vec<PairKey> = graph.nodes.iter().map(|p| p.key()).collect();
    let indices: Vec<(usize, usize)> = (0..graph.nodes.len())
        .tuple_combinations()
        .collect();
    let violations: Vec<FanViolation> = indices
        .par_iter()
        .filter_map(|&(i, j)| {
            let ci = Cone::of_key(&keys[i], n);
            let cj = Cone::of_key(&keys[j], n);
            // maximal common sub-pair: shared signed g-vectors (multiset)
            let mut shared: Vec<Vec<i64>> = Vec::new();
            let mut rest = keys[j].clone();
            for g in &keys[i] {
                if let Some(pos) = rest.iter().position(|h| h == g) {
                    rest.remove(pos);
                    shared.push(g.clone());
                }
            }
            let expected = Cone { generators: shared.clone(), ambient_dim: n };
            // expected cone inside both
            for g in &shared {
                let gq = qvec_from_i64(g);
                if !ci.contains(&gq, false) || !cj.contains(&gq, false) {
                    return Some(FanViolation {
                        node_a: i,
                        node_b: j,
                        detail: format!("shared generator {g:?} escapes a cone"),
                    });
                }
            }
            // intersection inside expected
            for ray in ci.intersection_rays(&cj) {
                let rq = qvec_from_i64(&ray);
                if !expected.contains(&rq, false) {
                    return Some(FanViolation {
                        node_a: i,
                        node_b: j,
                        detail: format!(
                            "intersection ray {ray:?} not in the common sub-pair cone"
                        ),
                    });
                }
            }
            None
        })
        .collect();
    FanReport { pairs_checked: indices.len(), violations }
}

// ---------------------------------------------------------------------------
// Brick matrix and semibricks
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BrickMatrixReport {
    /// Diagonal signs delta_i, in the pair's summand order.
    pub signs: Vec<i64>,
    pub product: IMatrix,
}

/// Check that G^T (bdim B_1 | ... | bdim B_n) is diagonal with entries in
/// {-1, +1} and return the signs.
pub fn brick_matrix_check<F: Field>(
    pair: &TauPair<F>,
    bricks: &[Representation<F>],
) -> Result<BrickMatrixReport> {
    let n = pair.algebra.vertex_count();
    if bricks.len() != n {
        return Err(TaufanError::InvalidArgument(format!(
            "expected {n} facet bricks, got {}",
            bricks.len()
        )));
    }
    let g = g_matrix(pair)?;
    let b = IMatrix::from_columns(
        &bricks.iter().map(|m| m.dim_vector()).collect::<Vec<_>>(),
    );
    let prod = g.transpose().mul(&b);
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            let v = prod.rows[i][j];
            if i == j {
                if v != 1 && v != -1 {
                    return Err(TaufanError::inconsistency(
                        "brick matrix",
                        format!("diagonal entry {v} not in {{-1, +1}}"),
                    ));
                }
                signs.push(v);
            } else if v != 0 {
                return Err(TaufanError::inconsistency(
                    "brick matrix",
                    format!("offdiagonal entry ({i},{j}) = {v}"),
                ));
            }
        }
    }
    Ok(BrickMatrixReport { signs, product: prod })
}

/// Sign-coherence of a C-matrix: every column entrywise >= 0 or <= 0.
pub fn is_sign_coherent(c: &IMatrix) -> bool {
    c.columns()
        .iter()
        .all(|col| col.iter().all(|&x| x >= 0) || col.iter().all(|&x| x <= 0))
}

#[derive(Clone, Debug)]
pub struct SemibrickSplit {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

/// Split facet bricks by sign and verify Hom-vanishing inside each part.
/// Indices refer to positions in the brick list (= summand positions).
pub fn semibrick_split<F: Field>(
    bricks: &[Representation<F>],
    signs: &[i64],
) -> Result<SemibrickSplit> {
    let positive: Vec<usize> =
        (0..bricks.len()).filter(|&i| signs[i] > 0).collect();
    let negative: Vec<usize> =
        (0..bricks.len()).filter(|&i| signs[i] < 0).collect();
    for set in [&positive, &negative] {
        for &i in set.iter() {
            for &j in set.iter() {
                if i != j && hom_dim(&bricks[i], &bricks[j]) != 0 {
                    return Err(TaufanError::inconsistency(
                        "semibrick",
                        format!("Hom between bricks {i} and {j} does not vanish"),
                    ));
                }
            }
        }
    }
    Ok(SemibrickSplit { positive, negative })
}

/// AR pairing: <g^M, bdim N> = dim Hom(M, N) - dim Hom(N, tau M),
/// checked over a whole catalog.
pub fn ar_pairing_check<F: Field>(catalog: &Catalog<F>, _budget: &Budget) -> Result<usize> {
    let sym = catalog.algebra.symmetrizer();
    let mut checked = 0;
    for i in catalog.ids() {
        let m = catalog.rep(i);
        let gm = g_vector(m);
        let tau_m = crate::rep::ar_translate(m);
        for j in catalog.ids() {
            let nrep = catalog.rep(j);
            let lhs: i64 = gm
                .iter()
                .zip(nrep.dim_vector())
                .zip(sym)
                .map(|((&g, d), &s)| g * d * s as i64)
                .sum();
            let rhs = hom_dim(m, nrep) as i64 - hom_dim(nrep, &tau_m) as i64;
            if lhs != rhs {
                return Err(TaufanError::inconsistency(
                    "AR pairing",
                    format!(
                        "<g^{}, bdim {}> = {lhs} but hom difference is {rhs}",
                        catalog.name(i),
                        catalog.name(j)
                    ),
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// <v, w> = v^T D_A w with the algebra's symmetrizer.
pub fn pairing(sym: &[u64], v: &[Q], d: &[i64]) -> Result<Q> {
    if v.len() != d.len() || v.len() != sym.len() {
        return Err(TaufanError::DimensionMismatch("pairing operands".into()));
    }
    let weighted: Vec<i64> = d.iter().zip(sym).map(|(&x, &s)| x * s as i64).collect();
    Ok(dot_qi(v, &weighted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::rep::{projective, simple};
    use crate::tau::{mutation_graph, GraphOptions, MutationCtx};

    #[test]
    fn a2_g_and_c_matrices() {
        let alg = a2_f2();
        let b = Budget::default();
        let start = TauPair::initial(&alg).unwrap();
        let g = g_matrix(&start).unwrap();
        assert_eq!(g, IMatrix { rows: vec![vec![1, 0], vec![0, 1]] });
        let c = c_matrix(&start).unwrap();
        assert_eq!(c, IMatrix { rows: vec![vec![1, 0], vec![0, 1]] });
        let _ = b;
        // (0, A): G = -I, C = -I
        let bottom = TauPair::new(alg.clone(), vec![], vec![0, 1]);
        let g = g_matrix(&bottom).unwrap();
        assert_eq!(g, IMatrix { rows: vec![vec![-1, 0], vec![0, -1]] });
        let c = c_matrix(&bottom).unwrap();
        assert_eq!(c.rows, vec![vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn cycle3_table_entry_c5() {
        // pair (S3 + P2, P1): G columns g^{S3}, g^{P2}, -g^{P1}
        let alg = cycle3_f2();
        let s3 = simple(&alg, 2).unwrap();
        let p2 = projective(&alg, 1).unwrap();
        let pair = TauPair::new(alg.clone(), vec![s3, p2], vec![0]);
        let g = g_matrix(&pair).unwrap();
        // canonical order sorts T by g-vector: (-1,0,1) < (0,1,0)
        assert_eq!(
            g,
            IMatrix { rows: vec![vec![-1, 0, -1], vec![0, 1, 0], vec![1, 0, 0]] }
        );
        let c = c_matrix(&pair).unwrap();
        // columns are signed brick dimension vectors: S3, S2, -P3
        assert_eq!(c.rows, vec![vec![0, 0, -1], vec![0, 1, 0], vec![1, 0, -1]]);
        assert!(is_sign_coherent(&c));
    }

    #[test]
    fn a2_cones() {
        let alg = a2_f2();
        let s2 = simple(&alg, 1).unwrap();
        let p1 = projective(&alg, 0).unwrap();
        // (S2 + P1, 0): the first quadrant
        let pair = TauPair::new(alg.clone(), vec![s2.clone(), p1.clone()], vec![]);
        let cone = cone_of_pair(&pair);
        assert!(cone.contains(&qvec_from_i64(&[1, 1]), true));
        assert!(!cone.contains(&qvec_from_i64(&[0, 1]), true));
        assert!(cone.contains(&qvec_from_i64(&[0, 1]), false));
        assert!(cone.contains(&qvec_from_i64(&[0, 0]), false));
        // (S1, P2): wedge below the ray (1,-1)
        let s1 = simple(&alg, 0).unwrap();
        let pair = TauPair::new(alg.clone(), vec![s1], vec![1]);
        let cone = cone_of_pair(&pair);
        assert!(cone.contains(&qvec_from_i64(&[1, -2]), true));
        assert!(!cone.contains(&qvec_from_i64(&[1, 1]), false));
        assert!(!cone.contains(&qvec_from_i64(&[2, -1]), false));
        assert!(cone.contains(&qvec_from_i64(&[1, -1]), false));
        assert!(!cone.contains(&qvec_from_i64(&[1, -1]), true));
    }

    #[test]
    fn a2_fan_property() {
        let alg = a2_f2();
        let b = Budget::default();
        let mut ctx = MutationCtx::new(&alg, &b);
        let graph = mutation_graph(&alg, &GraphOptions::default(), &mut ctx).unwrap();
        let report = fan_check(&graph);
        assert_eq!(report.pairs_checked, 10);
        assert!(report.violations.is_empty());
        // explicit case from the plan: cones of (S2+P1,0) and (S1+P1,0)
        // intersect in the ray through (1,0)
        let c1 = Cone { generators: vec![vec![0, 1], vec![1, 0]], ambient_dim: 2 };
        let c2 = Cone { generators: vec![vec![1, -1], vec![1, 0]], ambient_dim: 2 };
        assert_eq!(c1.intersection_rays(&c2), vec![vec![1, 0]]);
    }

    #[test]
    fn a2_ar_pairing() {
        let alg = a2_f2();
        let b = Budget::default();
        let cat = Catalog::enumerate(&alg, &[1, 1], &b).unwrap();
        let checked = ar_pairing_check(&cat, &b).unwrap();
        assert_eq!(checked, 9);
    }

    #[test]
    fn brick_matrix_identity_case() {
        let alg = a2_f2();
        let start = TauPair::initial(&alg).unwrap();
        // Facet bricks of (A, 0) are the simples, ordered to match summands.
        // Canonical summand order sorts by g-vector: P2 (g = (0,1)) before
        // P1 (g = (1,0)); deleting P2 leaves the ray through g^{P1} whose
        // stable module is S2, and deleting P1 leaves the ray with brick S1.
        let s1 = simple(&alg, 0).unwrap();
        let s2 = simple(&alg, 1).unwrap();
        let report = brick_matrix_check(&start, &[s2.clone(), s1.clone()]).unwrap();
        assert_eq!(report.signs, vec![1, 1]);
        let split = semibrick_split(&[s2, s1], &report.signs).unwrap();
        assert_eq!(split.positive.len(), 2);
        assert!(split.negative.is_empty());
    }
}
