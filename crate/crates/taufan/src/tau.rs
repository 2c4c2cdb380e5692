//! tau-tilting pairs, torsion classes, mutation, and the exchange graph.
//!
//! Mutation is computed constructively through exchange approximations
//! (cokernel of a minimal left approximation, kernel of a minimal right
//! approximation, or a support change), but every candidate completion is
//! verified a posteriori against the definition: the result must be a
//! tau-tilting pair sharing exactly n-1 indecomposable summands with the
//! input and distinct from it. When no constructive candidate verifies, a
//! completion search over a candidate pool (seen summands, projectives,
//! injectives, an optional catalog) takes over. Finding two distinct valid
//! completions is reported as an internal inconsistency, never resolved
//! silently.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::algebra::BoundQuiverAlgebra;
use crate::budget::Budget;
use crate::catalog::Catalog;
use crate::error::{Result, TaufanError};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::rep::{
    ar_translate, decompose, ext1_dim, g_vector, hom_basis, hom_dim, injective, is_isomorphic,
    projective, subrep_from_tuple, submodule_subspaces, IsoResult, Morphism, Representation,
};

/// Canonical identity of a pair: the sorted multiset of signed g-vectors
/// (positive for T summands, negative for P summands).
pub type PairKey = Vec<Vec<i64>>;

#[derive(Clone, Debug)]
pub struct TauPair<F: Field> {
    pub algebra: Arc<BoundQuiverAlgebra<F>>,
    pub t_summands: Vec<Representation<F>>,
    pub t_gvectors: Vec<Vec<i64>>,
    /// P summands are indecomposable projectives, stored by vertex.
    pub p_vertices: Vec<usize>,
}

impl<F: Field> TauPair<F> {
    /// Build a pair, sorting summands canonically (T by g-vector, P by vertex).
    pub fn new(
        algebra: Arc<BoundQuiverAlgebra<F>>,
        t_summands: Vec<Representation<F>>,
        mut p_vertices: Vec<usize>,
    ) -> Self {
        let mut paired: Vec<(Vec<i64>, Representation<F>)> =
            t_summands.into_iter().map(|m| (g_vector(&m), m)).collect();
        paired.sort_by(|a, b| a.0.cmp(&b.0));
        p_vertices.sort_unstable();
        let t_gvectors = paired.iter().map(|(g, _)| g.clone()).collect();
        let t_summands = paired.into_iter().map(|(_, m)| m).collect();
        TauPair { algebra, t_summands, t_gvectors, p_vertices }
    }

    pub fn initial(algebra: &Arc<BoundQuiverAlgebra<F>>) -> Result<Self> {
        let t: Vec<Representation<F>> = (0..algebra.vertex_count())
            .map(|i| projective(algebra, i))
            .collect::<Result<_>>()?;
        Ok(TauPair::new(algebra.clone(), t, vec![]))
    }

    pub fn rank(&self) -> usize {
        self.t_summands.len() + self.p_vertices.len()
    }

    /// Signed g-vectors in summand order: T columns then negated P columns.
    pub fn signed_gvectors(&self) -> Vec<Vec<i64>> {
        let n = self.algebra.vertex_count();
        let mut out = self.t_gvectors.clone();
        for &v in &self.p_vertices {
            let mut e = vec![0i64; n];
            e[v] = -1;
            out.push(e);
        }
        out
    }

    pub fn key(&self) -> PairKey {
        let mut k = self.signed_gvectors();
        k.sort();
        k
    }

    pub fn p_reps(&self) -> Result<Vec<Representation<F>>> {
        self.p_vertices.iter().map(|&v| projective(&self.algebra, v)).collect()
    }

    pub fn display(&self, catalog: Option<&Catalog<F>>, budget: &Budget) -> String {
        let name_of = |m: &Representation<F>| -> String {
            if let Some(cat) = catalog {
                if let Some(id) = cat.find(m, budget) {
                    return cat.name(id).to_string();
                }
            }
            format!("[{}]", m.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
        };
        let t_part = if self.t_summands.is_empty() {
            "0".to_string()
        } else {
            self.t_summands.iter().map(|m| name_of(m)).collect::<Vec<_>>().join(",")
        };
        let p_part = if self.p_vertices.is_empty() {
            "0".to_string()
        } else {
            self.p_vertices.iter().map(|v| format!("P{}", v + 1)).collect::<Vec<_>>().join(",")
        };
        format!("(T: {t_part} | P: {p_part})")
    }
}

/// Hom(T, tau T) = 0 for a (possibly decomposable) module given by summands.
pub fn is_tau_rigid_summands<F: Field>(summands: &[Representation<F>]) -> bool {
    let taus: Vec<Representation<F>> = summands.iter().map(ar_translate).collect();
    for t in summands {
        for tau in &taus {
            if !tau.is_zero() && hom_dim(t, tau) != 0 {
                return false;
            }
        }
    }
    true
}

pub fn is_tau_rigid<F: Field>(module: &Representation<F>) -> bool {
    let tau = ar_translate(module);
    tau.is_zero() || hom_dim(module, &tau) == 0
}

/// Full pair rigidity: T tau-rigid, Hom(P, T) = 0, summands pairwise
/// non-isomorphic. A rigid pair violating the Skowronski bound |T|+|P| <= n
/// is an internal inconsistency.
pub fn is_tau_rigid_pair<F: Field>(pair: &TauPair<F>, budget: &Budget) -> Result<bool> {
    // pairwise distinct summands via g-vector uniqueness plus witness
    for i in 0..pair.t_summands.len() {
        for j in (i + 1)..pair.t_summands.len() {
            if pair.t_gvectors[i] == pair.t_gvectors[j]
                && matches!(
                    is_isomorphic(&pair.t_summands[i], &pair.t_summands[j], budget),
                    IsoResult::Isomorphic
                )
            {
                return Ok(false);
            }
        }
    }
    let mut pv = pair.p_vertices.clone();
    pv.dedup();
    if pv.len() != pair.p_vertices.len() {
        return Ok(false);
    }
    if !is_tau_rigid_summands(&pair.t_summands) {
        return Ok(false);
    }
    for p in pair.p_reps()? {
        for t in &pair.t_summands {
            if hom_dim(&p, t) != 0 {
                return Ok(false);
            }
        }
    }
    let n = pair.algebra.vertex_count();
    if pair.rank() > n {
        return Err(TaufanError::inconsistency(
            "Skowronski bound",
            format!("tau-rigid pair with {} summands over an algebra of rank {n}", pair.rank()),
        ));
    }
    Ok(true)
}

pub fn is_tau_tilting_pair<F: Field>(pair: &TauPair<F>, budget: &Budget) -> Result<bool> {
    Ok(pair.rank() == pair.algebra.vertex_count() && is_tau_rigid_pair(pair, budget)?)
}

// ---------------------------------------------------------------------------
// Torsion classes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionClass {
    pub member_ids: BTreeSet<usize>,
    pub generator_key: Option<PairKey>,
}

/// Per-vertex column bases of the trace of add(T) in M.
pub fn trace_subspaces<F: Field>(
    t_summands: &[Representation<F>],
    m: &Representation<F>,
) -> Vec<Matrix<F>> {
    let f = m.algebra.field.clone();
    let n = m.algebra.vertex_count();
    let mut stacked: Vec<Matrix<F>> =
        (0..n).map(|v| Matrix::zero(f.clone(), m.dims[v], 0)).collect();
    for t in t_summands {
        for phi in hom_basis(t, m) {
            for v in 0..n {
                stacked[v] = stacked[v].hstack(&phi.blocks[v]);
            }
        }
    }
    stacked.into_iter().map(|s| s.column_space_basis()).collect()
}

/// Is X generated by T, i.e. does some T^p surject onto X?
pub fn in_fac<F: Field>(t_summands: &[Representation<F>], x: &Representation<F>) -> bool {
    let tr = trace_subspaces(t_summands, x);
    tr.iter().zip(&x.dims).all(|(b, &d)| b.ncols() == d)
}

/// Fac T as a torsion class on the catalog; requires T tau-rigid.
pub fn fac<F: Field>(
    t_summands: &[Representation<F>],
    catalog: &Catalog<F>,
) -> Result<TorsionClass> {
    if !is_tau_rigid_summands(t_summands) {
        return Err(TaufanError::NotTauRigid(
            "Fac T is a torsion class only for tau-rigid T".into(),
        ));
    }
    let member_ids = catalog
        .ids()
        .filter(|&id| in_fac(t_summands, catalog.rep(id)))
        .collect();
    Ok(TorsionClass { member_ids, generator_key: None })
}

/// The canonical sequence 0 -> tM -> M -> fM -> 0 for the torsion pair
/// (Fac T, T-perp): tM is the trace of T in M.
pub struct CanonicalSequence<F: Field> {
    pub torsion: Representation<F>,
    pub inclusion: Morphism<F>,
    pub torsion_free: Representation<F>,
    pub projection: Morphism<F>,
}

pub fn torsion_submodule<F: Field>(
    t_summands: &[Representation<F>],
    m: &Representation<F>,
) -> Result<CanonicalSequence<F>> {
    if !is_tau_rigid_summands(t_summands) {
        return Err(TaufanError::NotTauRigid("trace torsion part needs tau-rigid T".into()));
    }
    let tuple = trace_subspaces(t_summands, m);
    let (torsion, inclusion) = subrep_from_tuple(m, &tuple);
    let (torsion_free, projection) = inclusion.cokernel();
    for t in t_summands {
        if hom_dim(t, &torsion_free) != 0 {
            return Err(TaufanError::inconsistency(
                "canonical sequence",
                "M/tM admits a nonzero map from T".to_string(),
            ));
        }
    }
    Ok(CanonicalSequence { torsion, inclusion, torsion_free, projection })
}

/// Indecomposable summand ids of a (possibly decomposable) module, or None if
/// some summand is not in the catalog.
fn summand_ids<F: Field>(
    m: &Representation<F>,
    catalog: &Catalog<F>,
    budget: &Budget,
) -> Option<BTreeSet<usize>> {
    if m.is_zero() {
        return Some(BTreeSet::new());
    }
    let mut ids = BTreeSet::new();
    for part in decompose(m, budget) {
        ids.insert(catalog.find(&part, budget)?);
    }
    Some(ids)
}

/// Filt(Fac M): the minimal torsion class containing M, computed as the
/// extension closure of the Fac members inside the catalog.
pub fn filt_fac<F: Field>(
    m: &Representation<F>,
    catalog: &Catalog<F>,
    budget: &Budget,
) -> Result<TorsionClass> {
    let gens = [m.clone()];
    let mut members: BTreeSet<usize> = catalog
        .ids()
        .filter(|&id| in_fac(&gens, catalog.rep(id)))
        .collect();
    // extension closure: X joins if some submodule U with quotient X/U has
    // all summands of both inside the current set
    loop {
        let mut grew = false;
        for id in catalog.ids() {
            if members.contains(&id) {
                continue;
            }
            let x = catalog.rep(id);
            let tuples = submodule_subspaces(x, budget)?;
            'tuples: for tuple in &tuples {
                let (sub, incl) = subrep_from_tuple(x, tuple);
                if sub.is_zero() || sub.total_dim() == x.total_dim() {
                    continue;
                }
                let Some(sub_ids) = summand_ids(&sub, catalog, budget) else {
                    return Err(TaufanError::budget(
                        "filt_fac",
                        "extension closure escapes the catalog bound".to_string(),
                    ));
                };
                if !sub_ids.iter().all(|i| members.contains(i)) {
                    continue 'tuples;
                }
                let (quot, _) = incl.cokernel();
                let Some(q_ids) = summand_ids(&quot, catalog, budget) else {
                    return Err(TaufanError::budget(
                        "filt_fac",
                        "extension closure escapes the catalog bound".to_string(),
                    ));
                };
                if q_ids.iter().all(|i| members.contains(i)) {
                    members.insert(id);
                    grew = true;
                    break 'tuples;
                }
            }
        }
        if !grew {
            break;
        }
    }
    verify_torsion_class(&members, catalog, budget)?;
    Ok(TorsionClass { member_ids: members, generator_key: None })
}

/// Check closure under quotients and extensions within the catalog.
pub fn verify_torsion_class<F: Field>(
    members: &BTreeSet<usize>,
    catalog: &Catalog<F>,
    budget: &Budget,
) -> Result<()> {
    // quotients
    for &id in members {
        let x = catalog.rep(id);
        for tuple in submodule_subspaces(x, budget)? {
            let (_, incl) = subrep_from_tuple(x, &tuple);
            let (quot, _) = incl.cokernel();
            let Some(q_ids) = summand_ids(&quot, catalog, budget) else {
                return Err(TaufanError::budget("torsion class check", "quotient outside catalog"));
            };
            if !q_ids.iter().all(|i| members.contains(i)) {
                return Err(TaufanError::inconsistency(
                    "torsion class",
                    format!("members not closed under quotients at {}", catalog.name(id)),
                ));
            }
        }
    }
    // extensions within the catalog
    for id in catalog.ids() {
        if members.contains(&id) {
            continue;
        }
        let x = catalog.rep(id);
        for tuple in submodule_subspaces(x, budget)? {
            let (sub, incl) = subrep_from_tuple(x, &tuple);
            if sub.is_zero() || sub.total_dim() == x.total_dim() {
                continue;
            }
            let (Some(s_ids), quot) = (summand_ids(&sub, catalog, budget), incl.cokernel().0)
            else {
                continue;
            };
            let Some(q_ids) = summand_ids(&quot, catalog, budget) else { continue };
            if s_ids.iter().all(|i| members.contains(i))
                && q_ids.iter().all(|i| members.contains(i))
            {
                return Err(TaufanError::inconsistency(
                    "torsion class",
                    format!("members not closed under extensions: {} escapes", catalog.name(id)),
                ));
            }
        }
    }
    Ok(())
}

/// Ext-projective members: X in the class with Ext^1(X, class) = 0.
pub fn ext_projectives<F: Field>(
    members: &BTreeSet<usize>,
    catalog: &Catalog<F>,
) -> Vec<usize> {
    members
        .iter()
        .copied()
        .filter(|&x| {
            members
                .iter()
                .all(|&y| ext1_dim(catalog.rep(x), catalog.rep(y)) == 0)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Approximations
// ---------------------------------------------------------------------------

/// A chosen approximation target in add(U): summand reps with multiplicity.
#[derive(Clone, Debug)]
pub struct AddApprox<F: Field> {
    /// (summand index into the U-list, which hom-basis element)
    pub copies: Vec<(usize, usize)>,
    pub target: Representation<F>,
    pub map: Morphism<F>,
}

fn assemble_left_map<F: Field>(
    x: &Representation<F>,
    u_list: &[Representation<F>],
    homs: &[Vec<Morphism<F>>],
    copies: &[(usize, usize)],
) -> AddApprox<F> {
    let alg = &x.algebra;
    let f = alg.field.clone();
    let n = alg.vertex_count();
    let mut target = Representation::zero(alg.clone());
    for &(j, _) in copies {
        target = target.direct_sum(&u_list[j]);
    }
    let mut blocks: Vec<Matrix<F>> =
        (0..n).map(|v| Matrix::zero(f.clone(), 0, x.dims[v])).collect();
    for &(j, k) in copies {
        for v in 0..n {
            blocks[v] = blocks[v].vstack(&homs[j][k].blocks[v]);
        }
    }
    let map = Morphism { source: x.clone(), target: target.clone(), blocks };
    debug_assert!(map.is_valid());
    AddApprox { copies: copies.to_vec(), target, map }
}

/// Does every map X -> U_j factor through f: X -> W?
fn left_approximates<F: Field>(
    f_map: &Morphism<F>,
    u_list: &[Representation<F>],
    homs: &[Vec<Morphism<F>>],
) -> bool {
    let w = &f_map.target;
    for (j, hom_j) in homs.iter().enumerate() {
        if hom_j.is_empty() {
            continue;
        }
        let w_to_u = hom_basis(w, &u_list[j]);
        for phi in hom_j {
            // phi = sum c_k (psi_k o f): linear system in c
            if !factors_through(phi, &w_to_u, f_map) {
                return false;
            }
        }
    }
    true
}

/// Solve phi = (sum c_k psi_k) o pre for the coefficients c.
fn factors_through<F: Field>(
    phi: &Morphism<F>,
    psis: &[Morphism<F>],
    pre: &Morphism<F>,
) -> bool {
    let f = phi.source.algebra.field.clone();
    let comps: Vec<Morphism<F>> = psis.iter().map(|psi| psi.compose(pre)).collect();
    // flatten blocks into long vectors
    let flat = |m: &Morphism<F>| -> Vec<F::Elem> {
        m.blocks.iter().flat_map(|b| b.entries().to_vec()).collect()
    };
    let cols: Vec<Vec<F::Elem>> = comps.iter().map(|c| flat(c)).collect();
    let target = flat(phi);
    if cols.is_empty() {
        return target.iter().all(|x| f.is_zero(x));
    }
    let rows = target.len();
    let a = Matrix::from_fn(f.clone(), rows, cols.len(), |i, j| cols[j][i].clone());
    a.solve(&target).is_some()
}

/// Minimal left add(U)-approximation of X. Starts from the universal map into
/// one copy of U_j per hom-basis element and drops copies while the
/// factorization property survives.
pub fn left_approximation<F: Field>(
    x: &Representation<F>,
    u_list: &[Representation<F>],
) -> AddApprox<F> {
    let homs: Vec<Vec<Morphism<F>>> = u_list.iter().map(|u| hom_basis(x, u)).collect();
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for (j, h) in homs.iter().enumerate() {
        for k in 0..h.len() {
            copies.push((j, k));
        }
    }
    let mut best = assemble_left_map(x, u_list, &homs, &copies);
    loop {
        let mut improved = false;
        for drop in 0..best.copies.len() {
            let mut trial: Vec<(usize, usize)> = best.copies.clone();
            trial.remove(drop);
            let cand = assemble_left_map(x, u_list, &homs, &trial);
            if left_approximates(&cand.map, u_list, &homs) {
                best = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            return best;
        }
    }
}

fn assemble_right_map<F: Field>(
    u_list: &[Representation<F>],
    x: &Representation<F>,
    homs: &[Vec<Morphism<F>>],
    copies: &[(usize, usize)],
) -> AddApprox<F> {
    let alg = &x.algebra;
    let f = alg.field.clone();
    let n = alg.vertex_count();
    let mut source = Representation::zero(alg.clone());
    for &(j, _) in copies {
        source = source.direct_sum(&u_list[j]);
    }
    let mut blocks: Vec<Matrix<F>> =
        (0..n).map(|v| Matrix::zero(f.clone(), x.dims[v], 0)).collect();
    for &(j, k) in copies {
        for v in 0..n {
            blocks[v] = blocks[v].hstack(&homs[j][k].blocks[v]);
        }
    }
    let map = Morphism { source: source.clone(), target: x.clone(), blocks };
    debug_assert!(map.is_valid());
    AddApprox { copies: copies.to_vec(), target: source, map }
}

fn right_approximates<F: Field>(
    g_map: &Morphism<F>,
    u_list: &[Representation<F>],
    homs: &[Vec<Morphism<F>>],
) -> bool {
    let w = &g_map.source;
    for (j, hom_j) in homs.iter().enumerate() {
        if hom_j.is_empty() {
            continue;
        }
        let u_to_w = hom_basis(&u_list[j], w);
        for phi in hom_j {
            // phi = g o (sum c_k h_k): compose on the other side
            let comps: Vec<Morphism<F>> = u_to_w.iter().map(|h| g_map.compose(h)).collect();
            let f = phi.source.algebra.field.clone();
            let flat = |m: &Morphism<F>| -> Vec<F::Elem> {
                m.blocks.iter().flat_map(|b| b.entries().to_vec()).collect()
            };
            let cols: Vec<Vec<F::Elem>> = comps.iter().map(|c| flat(c)).collect();
            let target = flat(phi);
            if cols.is_empty() {
                if target.iter().all(|e| f.is_zero(e)) {
                    continue;
                }
                return false;
            }
            let rows = target.len();
            let a = Matrix::from_fn(f.clone(), rows, cols.len(), |i, j2| cols[j2][i].clone());
            if a.solve(&target).is_none() {
                return false;
            }
        }
    }
    true
}

/// Minimal right add(U)-approximation of X.
pub fn right_approximation<F: Field>(
    u_list: &[Representation<F>],
    x: &Representation<F>,
) -> AddApprox<F> {
    let homs: Vec<Vec<Morphism<F>>> = u_list.iter().map(|u| hom_basis(u, x)).collect();
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for (j, h) in homs.iter().enumerate() {
        for k in 0..h.len() {
            copies.push((j, k));
        }
    }
    let mut best = assemble_right_map(u_list, x, &homs, &copies);
    loop {
        let mut improved = false;
        for drop in 0..best.copies.len() {
            let mut trial = best.copies.clone();
            trial.remove(drop);
            let cand = assemble_right_map(u_list, x, &homs, &trial);
            if right_approximates(&cand.map, u_list, &homs) {
                best = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            return best;
        }
    }
}

// ---------------------------------------------------------------------------
// Mutation
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandRef {
    T(usize),
    P(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationDirection {
    /// Fac(new T) is strictly contained in Fac(old T).
    Left,
    Right,
}

pub struct MutationCtx<'a, F: Field> {
    pub budget: &'a Budget,
    /// Extra candidate summands for completion search.
    pub pool: Vec<Representation<F>>,
    pub catalog: Option<&'a Catalog<F>>,
}

impl<'a, F: Field> MutationCtx<'a, F> {
    pub fn new(algebra: &Arc<BoundQuiverAlgebra<F>>, budget: &'a Budget) -> Self {
        let n = algebra.vertex_count();
        let mut pool = Vec::new();
        for i in 0..n {
            pool.push(projective(algebra, i).unwrap());
            pool.push(injective(algebra, i).unwrap());
        }
        MutationCtx { budget, pool, catalog: None }
    }
}

fn almost_pair<F: Field>(pair: &TauPair<F>, sel: SummandRef) -> (Vec<Representation<F>>, Vec<usize>) {
    let mut t = pair.t_summands.clone();
    let mut p = pair.p_vertices.clone();
    match sel {
        SummandRef::T(i) => {
            t.remove(i);
        }
        SummandRef::P(i) => {
            p.remove(i);
        }
    }
    (t, p)
}

/// Verify a candidate completion: tau-tilting, distinct from the input, and
/// sharing exactly the almost-pair's summands.
fn verify_completion<F: Field>(
    cand: &TauPair<F>,
    original: &TauPair<F>,
    facet: &PairKey,
    budget: &Budget,
) -> Result<bool> {
    if cand.key() == original.key() {
        return Ok(false);
    }
    let n = cand.algebra.vertex_count();
    if cand.rank() != n {
        return Ok(false);
    }
    // the candidate must contain the facet's signed g-vectors
    let ck = cand.key();
    let mut remaining = ck.clone();
    for g in facet {
        match remaining.iter().position(|h| h == g) {
            Some(idx) => {
                remaining.remove(idx);
            }
            None => return Ok(false),
        }
    }
    if remaining.len() != 1 {
        return Ok(false);
    }
    is_tau_tilting_pair(cand, budget)
}

/// The unique other completion of pair-minus-selected-summand.
pub fn mutate<F: Field>(
    pair: &TauPair<F>,
    sel: SummandRef,
    ctx: &MutationCtx<'_, F>,
) -> Result<(TauPair<F>, MutationDirection)> {
    let alg = pair.algebra.clone();
    let budget = ctx.budget;
    let n = alg.vertex_count();
    if pair.rank() != n {
        return Err(TaufanError::NotTauTilting("mutation needs a tau-tilting pair".into()));
    }
    let (rem_t, rem_p) = almost_pair(pair, sel);
    let facet: PairKey = {
        let almost = TauPair::new(alg.clone(), rem_t.clone(), rem_p.clone());
        almost.key()
    };

    let mut candidates: Vec<TauPair<F>> = Vec::new();
    let push_module = |candidates: &mut Vec<TauPair<F>>, z: &Representation<F>| {
        let mut t = rem_t.clone();
        t.push(z.clone());
        candidates.push(TauPair::new(alg.clone(), t, rem_p.clone()));
    };

    match sel {
        SummandRef::T(i) => {
            let x = &pair.t_summands[i];
            // (a) cokernel of the minimal left add(T/X)-approximation
            let appr = left_approximation(x, &rem_t);
            let (coker, _) = appr.map.cokernel();
            if !coker.is_zero() {
                for z in decompose(&coker, budget) {
                    push_module(&mut candidates, &z);
                }
            }
            // (b) support change: a projective joins P
            for v in 0..n {
                if !rem_p.contains(&v) {
                    let mut p = rem_p.clone();
                    p.push(v);
                    candidates.push(TauPair::new(alg.clone(), rem_t.clone(), p));
                }
            }
            // (c) kernel of the minimal right add(T/X)-approximation
            if !rem_t.is_empty() {
                let appr = right_approximation(&rem_t, x);
                let (ker, _) = appr.map.kernel();
                if !ker.is_zero() {
                    for z in decompose(&ker, budget) {
                        push_module(&mut candidates, &z);
                    }
                }
            }
        }
        SummandRef::P(_) => {}
    }
    // pool and catalog candidates (needed for deletions from P and as the
    // general fallback)
    for z in &ctx.pool {
        if !z.is_zero() {
            push_module(&mut candidates, z);
        }
    }
    if let Some(cat) = ctx.catalog {
        for id in cat.ids() {
            push_module(&mut candidates, cat.rep(id));
        }
    }

    // verify, deduplicating by key
    let mut valid: BTreeMap<PairKey, TauPair<F>> = BTreeMap::new();
    for cand in candidates {
        let k = cand.key();
        if valid.contains_key(&k) {
            continue;
        }
        if verify_completion(&cand, pair, &facet, budget)? {
            valid.insert(k, cand);
        }
    }
    match valid.len() {
        0 => Err(TaufanError::inconclusive(
            "mutation",
            format!("no completion found for facet of {}", pair.display(None, budget)),
        )),
        1 => {
            let new_pair = valid.into_values().next().unwrap();
            // direction: left iff Fac(new T) is contained in Fac(old T)
            let new_in_old = new_pair
                .t_summands
                .iter()
                .all(|z| in_fac(&pair.t_summands, z));
            let old_in_new = pair
                .t_summands
                .iter()
                .all(|z| in_fac(&new_pair.t_summands, z));
            let dir = match (new_in_old, old_in_new) {
                (true, false) => MutationDirection::Left,
                (false, true) => MutationDirection::Right,
                _ => {
                    return Err(TaufanError::inconsistency(
                        "mutation direction",
                        "Fac classes of the two completions are not strictly comparable",
                    ))
                }
            };
            Ok((new_pair, dir))
        }
        k => Err(TaufanError::inconsistency(
            "two-completion theorem",
            format!("{k} distinct completions verified beyond the original pair"),
        )),
    }
}

// ---------------------------------------------------------------------------
// Mutation graph
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct Edge {
    pub upper: usize,
    pub lower: usize,
    pub facet: PairKey,
    /// The summand of the upper node not shared with the lower node.
    pub exchanged_gvector_upper: Vec<i64>,
    pub exchanged_gvector_lower: Vec<i64>,
    /// Brick label id into the catalog, filled by the stability layer.
    pub brick_label: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphStatus {
    Complete,
    CapExceeded,
}

#[derive(Clone, Debug)]
pub struct MutationGraph<F: Field> {
    pub nodes: Vec<TauPair<F>>,
    pub edges: Vec<Edge>,
    pub status: GraphStatus,
    /// Mutations abandoned because no completion could be constructed within
    /// budget (soft failures; empty on complete runs).
    pub unresolved: Vec<(usize, PairKey)>,
}

impl<F: Field> MutationGraph<F> {
    pub fn node_by_key(&self, key: &PairKey) -> Option<usize> {
        self.nodes.iter().position(|p| p.key() == *key)
    }

    pub fn incident_edges(&self, node: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].upper == node || self.edges[e].lower == node)
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.status == GraphStatus::Complete && self.unresolved.is_empty()
    }
}

pub struct GraphOptions {
    pub max_nodes: usize,
    pub max_depth: usize,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions { max_nodes: 512, max_depth: 64 }
    }
}

/// Breadth-first exploration of the exchange graph from (A, 0).
pub fn mutation_graph<F: Field>(
    algebra: &Arc<BoundQuiverAlgebra<F>>,
    opts: &GraphOptions,
    ctx: &mut MutationCtx<'_, F>,
) -> Result<MutationGraph<F>> {
    let start = TauPair::initial(algebra)?;
    let mut nodes: Vec<TauPair<F>> = vec![start.clone()];
    let mut node_of_key: HashMap<PairKey, usize> = HashMap::new();
    node_of_key.insert(start.key(), 0);
    let mut edges: Vec<Edge> = Vec::new();
    let mut facet_seen: BTreeSet<PairKey> = BTreeSet::new();
    let mut unresolved: Vec<(usize, PairKey)> = Vec::new();
    let mut queue: std::collections::VecDeque<(usize, usize)> = [(0usize, 0usize)].into();
    let mut status = GraphStatus::Complete;

    // seed the pool with the initial summands
    for t in &start.t_summands {
        ctx.pool.push(t.clone());
    }

    while let Some((cur, depth)) = queue.pop_front() {
        if depth >= opts.max_depth {
            status = GraphStatus::CapExceeded;
            continue;
        }
        let selectors: Vec<SummandRef> = (0..nodes[cur].t_summands.len())
            .map(SummandRef::T)
            .chain((0..nodes[cur].p_vertices.len()).map(SummandRef::P))
            .collect();
        for sel in selectors {
            let (rt, rp) = almost_pair(&nodes[cur], sel);
            let facet = TauPair::new(algebra.clone(), rt, rp).key();
            if facet_seen.contains(&facet) {
                continue;
            }
            let current_snapshot = nodes[cur].clone();
            match mutate(&current_snapshot, sel, ctx) {
                Ok((new_pair, dir)) => {
                    facet_seen.insert(facet.clone());
                    let key = new_pair.key();
                    let target = match node_of_key.get(&key) {
                        Some(&idx) => idx,
                        None => {
                            if nodes.len() >= opts.max_nodes {
                                status = GraphStatus::CapExceeded;
                                continue;
                            }
                            for t in &new_pair.t_summands {
                                ctx.pool.push(t.clone());
                            }
                            nodes.push(new_pair.clone());
                            let idx = nodes.len() - 1;
                            node_of_key.insert(key.clone(), idx);
                            queue.push_back((idx, depth + 1));
                            idx
                        }
                    };
                    let (upper, lower) = match dir {
                        MutationDirection::Left => (cur, target),
                        MutationDirection::Right => (target, cur),
                    };
                    let ex_upper = exchanged_gvector(&nodes[upper].key(), &facet);
                    let ex_lower = exchanged_gvector(&nodes[lower].key(), &facet);
                    edges.push(Edge {
                        upper,
                        lower,
                        facet: facet.clone(),
                        exchanged_gvector_upper: ex_upper,
                        exchanged_gvector_lower: ex_lower,
                        brick_label: None,
                    });
                }
                Err(TaufanError::Inconclusive { .. }) => {
                    unresolved.push((cur, facet.clone()));
                    status = GraphStatus::CapExceeded;
                }
                Err(e) => return Err(e),
            }
        }
    }

    let graph = MutationGraph { nodes, edges, status, unresolved };
    if graph.status == GraphStatus::Complete {
        // every node carries exactly n incident edges in a closed graph
        let n = algebra.vertex_count();
        for (i, _) in graph.nodes.iter().enumerate() {
            let deg = graph.incident_edges(i).len();
            if deg != n {
                return Err(TaufanError::inconsistency(
                    "mutation graph",
                    format!("node {i} has degree {deg}, expected {n}"),
                ));
            }
        }
    }
    Ok(graph)
}

/// The one signed g-vector of the node key not contained in the facet.
fn exchanged_gvector(node_key: &PairKey, facet: &PairKey) -> Vec<i64> {
    let mut remaining = node_key.clone();
    for g in facet {
        if let Some(idx) = remaining.iter().position(|h| h == g) {
            remaining.remove(idx);
        }
    }
    assert_eq!(remaining.len(), 1, "facet must match all but one summand");
    remaining.pop().unwrap()
}

// ---------------------------------------------------------------------------
// Hasse poset
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct HassePoset {
    /// (upper node, lower node, edge index)
    pub covers: Vec<(usize, usize, usize)>,
    pub top: usize,
    pub bottom: usize,
}

pub fn hasse<F: Field>(graph: &MutationGraph<F>) -> Result<HassePoset> {
    if graph.status != GraphStatus::Complete {
        return Err(TaufanError::budget("hasse", "mutation graph incomplete"));
    }
    let covers: Vec<(usize, usize, usize)> = graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.upper, e.lower, i))
        .collect();
    let mut has_upper = vec![false; graph.nodes.len()];
    let mut has_lower = vec![false; graph.nodes.len()];
    for &(u, l, _) in &covers {
        has_upper[l] = true;
        has_lower[u] = true;
    }
    let tops: Vec<usize> = (0..graph.nodes.len()).filter(|&i| !has_upper[i]).collect();
    let bottoms: Vec<usize> = (0..graph.nodes.len()).filter(|&i| !has_lower[i]).collect();
    if tops.len() != 1 || bottoms.len() != 1 {
        return Err(TaufanError::inconsistency(
            "hasse poset",
            format!("expected unique top and bottom, found {} and {}", tops.len(), bottoms.len()),
        ));
    }
    Ok(HassePoset { covers, top: tops[0], bottom: bottoms[0] })
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Exhaustively enumerate all tau-tilting pairs supported on the catalog.
/// Independent of the mutation machinery; used to cross-validate graphs.
pub fn exhaustive_tau_tilting_pairs<F: Field>(
    catalog: &Catalog<F>,
    budget: &Budget,
) -> Result<Vec<TauPair<F>>> {
    let alg = catalog.algebra.clone();
    let n = alg.vertex_count();
    let rigid_ids: Vec<usize> = catalog
        .ids()
        .filter(|&id| is_tau_rigid(catalog.rep(id)))
        .collect();
    let mut out: Vec<TauPair<F>> = Vec::new();
    let mut seen: BTreeSet<PairKey> = BTreeSet::new();
    let t_subsets = subsets_up_to(&rigid_ids, n);
    for ts in &t_subsets {
        let t_reps: Vec<Representation<F>> =
            ts.iter().map(|&id| catalog.rep(id).clone()).collect();
        let p_room = n - ts.len();
        for ps in subsets_up_to(&(0..n).collect::<Vec<_>>(), p_room) {
            if ts.len() + ps.len() != n {
                continue;
            }
            let pair = TauPair::new(alg.clone(), t_reps.clone(), ps.clone());
            if seen.contains(&pair.key()) {
                continue;
            }
            if is_tau_tilting_pair(&pair, budget)? {
                seen.insert(pair.key());
                out.push(pair);
            }
        }
    }
    out.sort_by_key(|p| p.key());
    Ok(out)
}

fn subsets_up_to(items: &[usize], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &x in items {
        let mut grown: Vec<Vec<usize>> = out
            .iter()
            .filter(|s| s.len() < max_len)
            .map(|s| {
                let mut t = s.clone();
                t.push(x);
                t
            })
            .collect();
        out.append(&mut grown);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;
    use crate::rep::simple;

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn a2_rigidity() {
        let alg = a2_f2();
        let p1 = projective(&alg, 0).unwrap();
        let s1 = simple(&alg, 0).unwrap();
        let s2 = simple(&alg, 1).unwrap();
        assert!(is_tau_rigid(&p1));
        assert!(is_tau_rigid_summands(&[p1.clone(), s1.clone()]));
        assert!(!is_tau_rigid_summands(&[s1.clone(), s2.clone()]));
        // (S2, P1) is tau-tilting; (P1, 0) is rigid but not tilting
        let pair = TauPair::new(alg.clone(), vec![s2.clone()], vec![0]);
        assert!(is_tau_tilting_pair(&pair, &budget()).unwrap());
        let pair = TauPair::new(alg.clone(), vec![p1.clone()], vec![]);
        assert!(is_tau_rigid_pair(&pair, &budget()).unwrap());
        assert!(!is_tau_tilting_pair(&pair, &budget()).unwrap());
        // (A, 0)
        let pair = TauPair::initial(&alg).unwrap();
        assert!(is_tau_tilting_pair(&pair, &budget()).unwrap());
    }

    #[test]
    fn a2_fac_classes() {
        let alg = a2_f2();
        let cat = Catalog::enumerate(&alg, &[1, 1], &budget()).unwrap();
        let p1 = projective(&alg, 0).unwrap();
        let s2 = simple(&alg, 1).unwrap();
        let tc = fac(&[p1.clone()], &cat).unwrap();
        let names: BTreeSet<&str> = tc.member_ids.iter().map(|&i| cat.name(i)).collect();
        assert_eq!(names, ["P1", "S1"].into_iter().collect());
        let tc = fac(&[], &cat).unwrap();
        assert!(tc.member_ids.is_empty());
        let tc = fac(&[s2.clone(), p1.clone()], &cat).unwrap();
        assert_eq!(tc.member_ids.len(), 3); // all of mod A
        // not tau-rigid: error
        let s1 = simple(&alg, 0).unwrap();
        assert!(fac(&[s1, s2], &cat).is_err());
    }

    #[test]
    fn a2_trace_torsion() {
        let alg = a2_f2();
        let p1 = projective(&alg, 0).unwrap();
        let s2 = simple(&alg, 1).unwrap();
        // class = Fac(P1), M = S2: trace is zero
        let seq = torsion_submodule(&[p1.clone()], &s2).unwrap();
        assert!(seq.torsion.is_zero());
        // class = Fac(S2), M = P1: trace is the socle S2
        let seq = torsion_submodule(&[s2.clone()], &p1).unwrap();
        assert_eq!(seq.torsion.dims, vec![0, 1]);
        assert_eq!(seq.torsion_free.dims, vec![1, 0]);
        // M in the class: trace is everything
        let seq = torsion_submodule(&[p1.clone()], &p1).unwrap();
        assert_eq!(seq.torsion.dims, p1.dims);
    }

    #[test]
    fn a2_filt_fac() {
        let alg = a2_f2();
        let cat = Catalog::enumerate(&alg, &[1, 1], &budget()).unwrap();
        let s1 = simple(&alg, 0).unwrap();
        let s2 = simple(&alg, 1).unwrap();
        // Filt(Fac(S1 + S2)) = mod A
        let tc = filt_fac(&s1.direct_sum(&s2), &cat, &budget()).unwrap();
        assert_eq!(tc.member_ids.len(), 3);
        // Filt(Fac(P1)) = {P1, S1} is already closed
        let p1 = projective(&alg, 0).unwrap();
        let tc = filt_fac(&p1, &cat, &budget()).unwrap();
        let names: BTreeSet<&str> = tc.member_ids.iter().map(|&i| cat.name(i)).collect();
        assert_eq!(names, ["P1", "S1"].into_iter().collect());
        // Filt(Fac(0)) is empty
        let z = Representation::zero(alg.clone());
        assert!(filt_fac(&z, &cat, &budget()).unwrap().member_ids.is_empty());
    }

    #[test]
    fn a2_approximations() {
        let alg = a2_f2();
        let p1 = projective(&alg, 0).unwrap();
        let s1 = simple(&alg, 0).unwrap();
        let s2 = simple(&alg, 1).unwrap();
        // X in add U: identity-like approximation
        let appr = left_approximation(&p1, &[p1.clone()]);
        assert_eq!(appr.target.dims, p1.dims);
        // S2 -> P1 is the minimal left approximation
        let appr = left_approximation(&s2, &[p1.clone()]);
        assert_eq!(appr.target.dims, vec![1, 1]);
        let (coker, _) = appr.map.cokernel();
        assert_eq!(coker.dims, vec![1, 0]);
        // P1 ->> S1
        let appr = left_approximation(&p1, &[s1.clone()]);
        assert_eq!(appr.target.dims, vec![1, 0]);
    }

    #[test]
    fn a2_mutation_from_initial() {
        let alg = a2_f2();
        let b = budget();
        let mut ctx = MutationCtx::new(&alg, &b);
        let start = TauPair::initial(&alg).unwrap();
        for t in &start.t_summands {
            ctx.pool.push(t.clone());
        }
        // deleting P(2) = S(2): completion (S1 + P1, 0)
        let p2_pos = start
            .t_summands
            .iter()
            .position(|m| m.dims == vec![0, 1])
            .unwrap();
        let (m1, dir) = mutate(&start, SummandRef::T(p2_pos), &ctx).unwrap();
        assert_eq!(dir, MutationDirection::Left);
        let dims: BTreeSet<Vec<usize>> =
            m1.t_summands.iter().map(|m| m.dims.clone()).collect();
        assert!(dims.contains(&vec![1, 0]));
        assert!(dims.contains(&vec![1, 1]));
        // deleting P(1): completion (S2, P1)
        let p1_pos = start
            .t_summands
            .iter()
            .position(|m| m.dims == vec![1, 1])
            .unwrap();
        let (m2, dir) = mutate(&start, SummandRef::T(p1_pos), &ctx).unwrap();
        assert_eq!(dir, MutationDirection::Left);
        assert_eq!(m2.t_summands.len(), 1);
        assert_eq!(m2.t_summands[0].dims, vec![0, 1]);
        assert_eq!(m2.p_vertices, vec![0]);
        // involution: mutating back returns the original
        let back_pos = m2.t_summands.iter().position(|m| m.dims == vec![0, 1]).unwrap();
        let _ = back_pos;
        let (back, dir) = mutate(&m2, SummandRef::P(0), &ctx).unwrap();
        assert_eq!(dir, MutationDirection::Right);
        assert_eq!(back.key(), start.key());
    }

    #[test]
    fn a2_graph_and_oracle() {
        let alg = a2_f2();
        let b = budget();
        let mut ctx = MutationCtx::new(&alg, &b);
        let graph = mutation_graph(&alg, &GraphOptions::default(), &mut ctx).unwrap();
        assert_eq!(graph.nodes.len(), 5);
        assert_eq!(graph.status, GraphStatus::Complete);
        assert_eq!(graph.edges.len(), 5);
        // oracle agreement
        let cat = Catalog::enumerate(&alg, &[1, 1], &b).unwrap();
        let oracle = exhaustive_tau_tilting_pairs(&cat, &b).unwrap();
        assert_eq!(oracle.len(), 5);
        let graph_keys: BTreeSet<PairKey> = graph.nodes.iter().map(|p| p.key()).collect();
        let oracle_keys: BTreeSet<PairKey> = oracle.iter().map(|p| p.key()).collect();
        assert_eq!(graph_keys, oracle_keys);
        // hasse: unique top (A,0) and bottom (0,A)
        let poset = hasse(&graph).unwrap();
        assert_eq!(graph.nodes[poset.top].p_vertices.len(), 0);
        assert_eq!(graph.nodes[poset.bottom].t_summands.len(), 0);
    }

    #[test]
    fn cycle3_graph_has_14_nodes() {
        let alg = cycle3_f2();
        let b = budget();
        let mut ctx = MutationCtx::new(&alg, &b);
        let graph = mutation_graph(&alg, &GraphOptions::default(), &mut ctx).unwrap();
        assert_eq!(graph.nodes.len(), 14);
        assert_eq!(graph.status, GraphStatus::Complete);
        // 14 nodes, each of degree 3: 21 edges
        assert_eq!(graph.edges.len(), 21);
        let cat = Catalog::enumerate(&alg, &[1, 1, 1], &b).unwrap();
        let oracle = exhaustive_tau_tilting_pairs(&cat, &b).unwrap();
        assert_eq!(oracle.len(), 14);
    }

    #[test]
    fn kronecker_graph_hits_cap() {
        let alg = kronecker_f2();
        let b = budget();
        let mut ctx = MutationCtx::new(&alg, &b);
        let opts = GraphOptions { max_nodes: 12, max_depth: 64 };
        let graph = mutation_graph(&alg, &opts, &mut ctx).unwrap();
        assert_eq!(graph.status, GraphStatus::CapExceeded);
        assert!(graph.nodes.len() >= 10);
    }

    #[test]
    fn a2_ext_projectives() {
        let alg = a2_f2();
        let b = budget();
        let cat = Catalog::enumerate(&alg, &[1, 1], &b).unwrap();
        // P(mod A) = A
        let all: BTreeSet<usize> = cat.ids().collect();
        let ep = ext_projectives(&all, &cat);
        let names: BTreeSet<&str> = ep.iter().map(|&i| cat.name(i)).collect();
        assert_eq!(names, ["P1", "S2"].into_iter().collect());
        // P({P1, S1}) = P1 + S1
        let p1 = cat.find_by_name("P1").unwrap();
        let s1 = cat.find_by_name("S1").unwrap();
        let class: BTreeSet<usize> = [p1, s1].into_iter().collect();
        let ep = ext_projectives(&class, &cat);
        let names: BTreeSet<&str> = ep.iter().map(|&i| cat.name(i)).collect();
        assert_eq!(names, ["P1", "S1"].into_iter().collect());
    }
}
