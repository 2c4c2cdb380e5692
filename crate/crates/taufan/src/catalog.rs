//! Indecomposable catalogs: the desk-scale oracle for mod A.
//!
//! Two construction modes. `enumerate` walks every arrow-map tuple for every
//! dimension vector under the bound (prime fields only) and classifies the
//! indecomposables up to isomorphism; it is exhaustive and slow, which is the
//! point. `assemble_base` collects simples, projectives, injectives and their
//! tau-orbits, which is enough to cover mod A for the representation-finite
//! algebras treated here and works over any field.
//!
//! Classification never resolves ties by fingerprint alone: candidates with
//! equal fingerprints go through the explicit isomorphism witness search.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::algebra::BoundQuiverAlgebra;
use crate::budget::Budget;
use crate::error::{Result, TaufanError};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::rep::{
    ar_translate, ar_translate_inverse, hom_dim, injective, is_indecomposable, is_isomorphic,
    projective, simple, IsoResult, Representation,
};

/// (dim vector, dim End, Hom dims from simples, Hom dims to simples)
pub type Fingerprint = (Vec<usize>, usize, Vec<usize>, Vec<usize>);

#[derive(Clone, Debug)]
pub struct CatalogEntry<F: Field> {
    pub rep: Representation<F>,
    pub name: String,
    pub fingerprint: Fingerprint,
}

#[derive(Clone, Debug)]
pub struct Catalog<F: Field> {
    pub algebra: Arc<BoundQuiverAlgebra<F>>,
    pub entries: Vec<CatalogEntry<F>>,
    pub dim_bound: Vec<usize>,
}

pub fn fingerprint<F: Field>(m: &Representation<F>) -> Fingerprint {
    let n = m.algebra.vertex_count();
    let end = hom_dim(m, m);
    let from_s: Vec<usize> = (0..n)
        .map(|i| hom_dim(&simple(&m.algebra, i).unwrap(), m))
        .collect();
    let to_s: Vec<usize> = (0..n)
        .map(|i| hom_dim(m, &simple(&m.algebra, i).unwrap()))
        .collect();
    (m.dims.clone(), end, from_s, to_s)
}

impl<F: Field> Catalog<F> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rep(&self, id: usize) -> &Representation<F> {
        &self.entries[id].rep
    }

    pub fn name(&self, id: usize) -> &str {
        &self.entries[id].name
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> {
        0..self.entries.len()
    }

    /// Locate a representation up to isomorphism.
    pub fn find(&self, m: &Representation<F>, budget: &Budget) -> Option<usize> {
        let fp = fingerprint(m);
        for (id, e) in self.entries.iter().enumerate() {
            if e.fingerprint != fp {
                continue;
            }
            match is_isomorphic(m, &e.rep, budget) {
                IsoResult::Isomorphic => return Some(id),
                IsoResult::NotIsomorphic => continue,
                IsoResult::Inconclusive => continue,
            }
        }
        None
    }

    pub fn find_by_name(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.name == name)
    }

    fn push(&mut self, rep: Representation<F>, budget: &Budget) -> bool {
        if self.find(&rep, budget).is_some() {
            return false;
        }
        let fingerprint = fingerprint(&rep);
        self.entries.push(CatalogEntry { rep, name: String::new(), fingerprint });
        true
    }

    /// Assign names: S(i) for simples, then P(i)/I(i), then dim-vector names.
    fn assign_names(&mut self, budget: &Budget) {
        let alg = self.algebra.clone();
        let n = alg.vertex_count();
        let projs: Vec<Representation<F>> =
            (0..n).map(|i| projective(&alg, i).unwrap()).collect();
        let injs: Vec<Representation<F>> =
            (0..n).map(|i| injective(&alg, i).unwrap()).collect();
        let mut used: BTreeSet<String> = BTreeSet::new();
        for e in self.entries.iter_mut() {
            let mut name = None;
            if e.rep.total_dim() == 1 {
                let i = e.rep.dims.iter().position(|&d| d == 1).unwrap();
                name = Some(format!("S{}", i + 1));
            }
            if name.is_none() {
                for (i, p) in projs.iter().enumerate() {
                    if e.rep.dims == p.dims
                        && matches!(is_isomorphic(&e.rep, p, budget), IsoResult::Isomorphic)
                    {
                        name = Some(format!("P{}", i + 1));
                        break;
                    }
                }
            }
            if name.is_none() {
                for (i, inj) in injs.iter().enumerate() {
                    if e.rep.dims == inj.dims
                        && matches!(is_isomorphic(&e.rep, inj, budget), IsoResult::Isomorphic)
                    {
                        name = Some(format!("I{}", i + 1));
                        break;
                    }
                }
            }
            let base = name.unwrap_or_else(|| {
                format!(
                    "X[{}]",
                    e.rep.dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
                )
            });
            let mut candidate = base.clone();
            let mut k = 1;
            while used.contains(&candidate) {
                k += 1;
                candidate = format!("{base}#{k}");
            }
            used.insert(candidate.clone());
            e.name = candidate;
        }
    }

    /// Exhaustive enumeration of indecomposables with dims <= bound
    /// (componentwise), over a prime field, within budget.
    pub fn enumerate(
        algebra: &Arc<BoundQuiverAlgebra<F>>,
        dim_bound: &[usize],
        budget: &Budget,
    ) -> Result<Catalog<F>> {
        let field = algebra.field.clone();
        let elems = field
            .enumerate()
            .ok_or_else(|| TaufanError::RationalsUnsupported("indecomposable enumeration".into()))?;
        if let crate::field::FieldSpec::Prime(p) = field.spec() {
            if p > budget.max_prime {
                return Err(TaufanError::budget(
                    "indecomposable enumeration",
                    format!("field size {p} exceeds cap {}", budget.max_prime),
                ));
            }
        }
        let n = algebra.vertex_count();
        assert_eq!(dim_bound.len(), n);
        let mut cat = Catalog {
            algebra: algebra.clone(),
            entries: vec![],
            dim_bound: dim_bound.to_vec(),
        };
        // walk dimension vectors in lexicographic order, ascending total first
        let mut dim_vectors: Vec<Vec<usize>> = Vec::new();
        let mut cur = vec![0usize; n];
        loop {
            if cur.iter().any(|&d| d > 0) && cur.iter().sum::<usize>() <= budget.max_total_dim {
                dim_vectors.push(cur.clone());
            }
            let mut carry = 0;
            while carry < n {
                cur[carry] += 1;
                if cur[carry] <= dim_bound[carry] {
                    break;
                }
                cur[carry] = 0;
                carry += 1;
            }
            if carry == n {
                break;
            }
        }
        dim_vectors.sort_by_key(|d| (d.iter().sum::<usize>(), d.clone()));

        let q = &algebra.quiver;
        for dims in dim_vectors {
            let entries_per_arrow: Vec<usize> =
                q.arrows.iter().map(|a| dims[a.target] * dims[a.source]).collect();
            let total_entries: usize = entries_per_arrow.iter().sum();
            let tuple_count = (elems.len() as u64)
                .checked_pow(total_entries as u32)
                .unwrap_or(u64::MAX);
            if tuple_count > budget.max_tuples {
                return Err(TaufanError::budget(
                    "indecomposable enumeration",
                    format!(
                        "{tuple_count} arrow-map tuples for dimension vector {dims:?} exceed cap {}",
                        budget.max_tuples
                    ),
                ));
            }
            let mut assign = vec![0usize; total_entries];
            loop {
                // build the candidate maps
                let mut maps = Vec::with_capacity(q.arrows.len());
                let mut off = 0;
                for (ai, a) in q.arrows.iter().enumerate() {
                    let (r, c) = (dims[a.target], dims[a.source]);
                    let m = Matrix::from_fn(field.clone(), r, c, |i, j| {
                        elems[assign[off + i * c + j]].clone()
                    });
                    off += entries_per_arrow[ai];
                    maps.push(m);
                }
                let rep = Representation { algebra: algebra.clone(), dims: dims.clone(), maps };
                if rep.validate().is_ok() && is_indecomposable(&rep, budget) {
                    cat.push(rep, budget);
                }
                let mut carry = 0;
                while carry < total_entries {
                    assign[carry] += 1;
                    if assign[carry] < elems.len() {
                        break;
                    }
                    assign[carry] = 0;
                    carry += 1;
                }
                if carry == total_entries {
                    break;
                }
            }
        }
        cat.assign_names(budget);
        Ok(cat)
    }

    /// Simples, projectives, injectives, and their tau-orbits up to depth.
    /// Field-agnostic; sufficient for representation-finite inputs and for
    /// the preprojective/preinjective components at bounded depth.
    pub fn assemble_base(
        algebra: &Arc<BoundQuiverAlgebra<F>>,
        tau_depth: usize,
        budget: &Budget,
    ) -> Result<Catalog<F>> {
        let n = algebra.vertex_count();
        let mut cat =
            Catalog { algebra: algebra.clone(), entries: vec![], dim_bound: vec![] };
        let mut frontier: Vec<Representation<F>> = Vec::new();
        for i in 0..n {
            frontier.push(simple(algebra, i)?);
            frontier.push(projective(algebra, i)?);
            frontier.push(injective(algebra, i)?);
        }
        for rep in &frontier {
            cat.push(rep.clone(), budget);
        }
        for _ in 0..tau_depth {
            let mut next = Vec::new();
            for rep in &frontier {
                for image in [ar_translate(rep), ar_translate_inverse(rep)?] {
                    if !image.is_zero() && cat.push(image.clone(), budget) {
                        next.push(image);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        // deterministic order: by total dim, then dim vector
        cat.entries.sort_by_key(|e| (e.rep.total_dim(), e.rep.dims.clone()));
        let bound: Vec<usize> = (0..n)
            .map(|v| cat.entries.iter().map(|e| e.rep.dims[v]).max().unwrap_or(0))
            .collect();
        cat.dim_bound = bound;
        cat.assign_names(budget);
        Ok(cat)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fixtures::*;

    #[test]
    fn a2_catalog() {
        let alg = a2_f2();
        let cat = Catalog::enumerate(&alg, &[1, 1], &Budget::default()).unwrap();
        assert_eq!(cat.len(), 3);
        let names: BTreeSet<&str> = cat.entries.iter().map(|e| e.name.as_str()).collect();
        assert!(names.contains("S1"));
        assert!(names.contains("S2"));
        assert!(names.contains("P1"));
    }

    #[test]
    fn cycle3_catalog() {
        let alg = cycle3_f2();
        let cat = Catalog::enumerate(&alg, &[1, 1, 1], &Budget::default()).unwrap();
        assert_eq!(cat.len(), 6);
        // base assembly agrees with exhaustive enumeration here
        let base = Catalog::assemble_base(&alg, 8, &Budget::default()).unwrap();
        assert_eq!(base.len(), 6);
        for e in &base.entries {
            assert!(cat.find(&e.rep, &Budget::default()).is_some());
        }
    }

    #[test]
    fn kronecker_catalog_bound_1_1() {
        let alg = kronecker_f2();
        let cat = Catalog::enumerate(&alg, &[1, 1], &Budget::default()).unwrap();
        // S(1), S(2), and p+1 = 3 modules of dims (1,1) over F_2
        assert_eq!(cat.len(), 5);
        let dim11 = cat.entries.iter().filter(|e| e.rep.dims == vec![1, 1]).count();
        assert_eq!(dim11, 3);
    }

    #[test]
    fn kronecker_base_catalog_has_preprojectives() {
        let alg = kronecker_f2();
        let mut budget = Budget::default();
        budget.max_total_dim = 16;
        let cat = Catalog::assemble_base(&alg, 2, &budget).unwrap();
        let dims: BTreeSet<Vec<usize>> =
            cat.entries.iter().map(|e| e.rep.dims.clone()).collect();
        assert!(dims.contains(&vec![2, 3])); // tau^{-1} S(2)
        assert!(dims.contains(&vec![3, 2])); // tau S(1)
    }

    #[test]
    fn rationals_enumeration_rejected() {
        let alg = a2_q();
        match Catalog::enumerate(&alg, &[1, 1], &Budget::default()) {
            Err(TaufanError::RationalsUnsupported(_)) => {}
            other => panic!("expected RationalsUnsupported, got {other:?}"),
        }
        // but base assembly works over Q
        let base = Catalog::assemble_base(&alg, 4, &Budget::default()).unwrap();
        assert_eq!(base.len(), 3);
    }
}
