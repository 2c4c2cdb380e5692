//! Bound quiver algebras: parsing, validation, path bases.
//!
//! An algebra is presented as a quiver with admissible relations over Q or
//! F_p. Construction enumerates all paths up to the nil bound N, closes the
//! relation ideal under left/right arrow multiplication inside each
//! (source, target) block, row-reduces, and reads off a path basis together
//! with a rewriting table. Everything is validated: relations must be
//! K-combinations of parallel paths of length >= 2, and every path of length
//! N must vanish modulo the ideal (otherwise the input is rejected as an
//! unbounded path algebra).
//!
//! Paths compose left to right: `a*b` means first `a`, then `b`, matching the
//! right-module convention used throughout.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Result, TaufanError};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::linalg::Matrix;

/// Hard cap on the number of enumerated paths; prevents runaway inputs.
const MAX_PATHS: usize = 500_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    /// 0-based vertex indices.
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn arrow_by_label(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }
}

/// A path: a composable arrow sequence, or a trivial path e_v.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }
    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm<F: Field> {
    pub coeff: F::Elem,
    pub arrows: Vec<usize>,
}

/// A K-combination of parallel paths of length >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<F: Field> {
    pub terms: Vec<RelationTerm<F>>,
}

pub type PathId = usize;

/// A residue expressed in the path basis: (basis position, coefficient).
pub type Residue<F> = Vec<(usize, <F as Field>::Elem)>;

#[derive(Clone, Debug)]
pub struct BoundQuiverAlgebra<F: Field> {
    pub field: F,
    pub quiver: Quiver,
    pub relations: Vec<Relation<F>>,
    pub nil_bound: usize,
    paths: Vec<Path>,
    path_index: HashMap<Path, PathId>,
    /// Basis of A = KQ/I as residue-paths, in length-lex order.
    basis: Vec<PathId>,
    basis_pos: HashMap<PathId, usize>,
    /// Residue of every enumerated path in the basis.
    reduction: Vec<Residue<F>>,
    /// Diagonal of D_A: dim_K End(S(i)), computed from the intertwining system.
    symmetrizer: Vec<u64>,
}

impl<F: Field> PartialEq for BoundQuiverAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.quiver == other.quiver
            && self.relations == other.relations
            && self.nil_bound == other.nil_bound
    }
}

impl<F: Field> Eq for BoundQuiverAlgebra<F> {}

impl<F: Field> BoundQuiverAlgebra<F> {
    pub fn new(
        field: F,
        quiver: Quiver,
        relations: Vec<Relation<F>>,
        nil_bound: Option<usize>,
    ) -> Result<Self> {
        validate_quiver(&quiver)?;
        let nil_bound =
            nil_bound.unwrap_or(quiver.arrows.len() * quiver.vertex_count + 1).max(2);
        for rel in &relations {
            validate_relation(&field, &quiver, rel)?;
        }
        let (paths, path_index) = enumerate_paths(&quiver, nil_bound)?;
        let (basis, reduction) =
            reduce_ideal(&field, &quiver, &relations, &paths, &path_index, nil_bound)?;
        let basis_pos = basis.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut alg = BoundQuiverAlgebra {
            field,
            quiver,
            relations,
            nil_bound,
            paths,
            path_index,
            basis,
            basis_pos,
            reduction,
            symmetrizer: vec![],
        };
        alg.symmetrizer = compute_symmetrizer(&alg);
        Ok(alg)
    }

    pub fn vertex_count(&self) -> usize {
        self.quiver.vertex_count
    }

    /// K-dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_path(&self, k: usize) -> &Path {
        &self.paths[self.basis[k]]
    }

    pub fn basis_paths(&self) -> impl Iterator<Item = &Path> {
        self.basis.iter().map(|&p| &self.paths[p])
    }

    /// Basis position of a path that survives reduction, if any.
    pub fn basis_index_of_path(&self, p: &Path) -> Option<usize> {
        let id = self.path_index.get(p)?;
        self.basis_pos.get(id).copied()
    }

    pub fn path_display(&self, p: &Path) -> String {
        if p.is_trivial() {
            format!("e{}", p.source + 1)
        } else {
            p.arrows
                .iter()
                .map(|&a| self.quiver.arrows[a].label.as_str())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Diagonal of the symmetrizer matrix D_A.
    pub fn symmetrizer(&self) -> &[u64] {
        &self.symmetrizer
    }

    /// Residue of (basis path k) * (arrow a), if composable.
    pub fn basis_times_arrow(&self, k: usize, arrow: usize) -> Option<&Residue<F>> {
        let p = self.basis_path(k);
        if p.target != self.quiver.arrows[arrow].source {
            return None;
        }
        let mut arrows = p.arrows.clone();
        arrows.push(arrow);
        let comp = Path { source: p.source, target: self.quiver.arrows[arrow].target, arrows };
        let id = self.path_index.get(&comp).expect("composite path enumerated");
        Some(&self.reduction[*id])
    }

    /// Residue of (arrow a) * (basis path k), if composable.
    pub fn arrow_times_basis(&self, arrow: usize, k: usize) -> Option<&Residue<F>> {
        let p = self.basis_path(k);
        if self.quiver.arrows[arrow].target != p.source {
            return None;
        }
        let mut arrows = vec![arrow];
        arrows.extend_from_slice(&p.arrows);
        let comp = Path { source: self.quiver.arrows[arrow].source, target: p.target, arrows };
        let id = self.path_index.get(&comp).expect("composite path enumerated");
        Some(&self.reduction[*id])
    }

    /// Basis positions of residue-paths with the given source vertex.
    pub fn basis_from(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&k| self.basis_path(k).source == v).collect()
    }

    /// Basis positions of residue-paths with the given target vertex.
    pub fn basis_into(&self, v: usize) -> Vec<usize> {
        (0..self.basis.len()).filter(|&k| self.basis_path(k).target == v).collect()
    }

    /// Canonical file-format serialization; reparsing yields an equal algebra.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "field {}", self.field.spec()).unwrap();
        writeln!(out, "vertices {}", self.quiver.vertex_count).unwrap();
        for a in &self.quiver.arrows {
            writeln!(out, "arrow {} {} {}", a.label, a.source + 1, a.target + 1).unwrap();
        }
        for rel in &self.relations {
            let mut line = String::from("relation ");
            for (i, t) in rel.terms.iter().enumerate() {
                let coeff = self.field.display(&t.coeff);
                let path = t
                    .arrows
                    .iter()
                    .map(|&a| self.quiver.arrows[a].label.as_str())
                    .collect::<Vec<_>>()
                    .join("*");
                if i > 0 {
                    line.push_str(" + ");
                }
                if self.field.is_one(&t.coeff) {
                    line.push_str(&path);
                } else {
                    write!(line, "{coeff}*{path}").unwrap();
                }
            }
            writeln!(out, "{line}").unwrap();
        }
        writeln!(out, "nilbound {}", self.nil_bound).unwrap();
        out
    }
}

fn validate_quiver(q: &Quiver) -> Result<()> {
    if q.vertex_count == 0 {
        return Err(TaufanError::InvalidArgument("vertex count must be positive".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for a in &q.arrows {
        if !seen.insert(a.label.clone()) {
            return Err(TaufanError::InvalidArgument(format!("duplicate arrow label `{}`", a.label)));
        }
        if a.source >= q.vertex_count || a.target >= q.vertex_count {
            return Err(TaufanError::InvalidArgument(format!(
                "arrow `{}` endpoint out of range 1..{}",
                a.label, q.vertex_count
            )));
        }
    }
    Ok(())
}

fn validate_relation<F: Field>(field: &F, q: &Quiver, rel: &Relation<F>) -> Result<()> {
    if rel.terms.is_empty() {
        return Err(TaufanError::NotAdmissible("empty relation".into()));
    }
    let mut st: Option<(usize, usize)> = None;
    for t in &rel.terms {
        if field.is_zero(&t.coeff) {
            return Err(TaufanError::NotAdmissible("zero coefficient in relation term".into()));
        }
        if t.arrows.len() < 2 {
            return Err(TaufanError::NotAdmissible(
                "relation term of length < 2 (ideal must be contained in rad^2)".into(),
            ));
        }
        for w in t.arrows.windows(2) {
            if q.arrows[w[0]].target != q.arrows[w[1]].source {
                return Err(TaufanError::NotAdmissible(format!(
                    "non-composable path {}*{}",
                    q.arrows[w[0]].label, q.arrows[w[1]].label
                )));
            }
        }
        let s = q.arrows[t.arrows[0]].source;
        let e = q.arrows[*t.arrows.last().unwrap()].target;
        match st {
            None => st = Some((s, e)),
            Some(prev) if prev != (s, e) => {
                return Err(TaufanError::NotAdmissible(
                    "relation terms do not share source and target".into(),
                ))
            }
            _ => {}
        }
    }
    Ok(())
}

/// All paths of length <= bound in canonical (length, label-lex) order.
fn enumerate_paths(q: &Quiver, bound: usize) -> Result<(Vec<Path>, HashMap<Path, PathId>)> {
    // Rank arrows by label so path order is label-lexicographic.
    let mut order: Vec<usize> = (0..q.arrows.len()).collect();
    order.sort_by(|&a, &b| q.arrows[a].label.cmp(&q.arrows[b].label));
    let mut rank = vec![0usize; q.arrows.len()];
    for (r, &a) in order.iter().enumerate() {
        rank[a] = r;
    }

    let mut paths: Vec<Path> = Vec::new();
    for v in 0..q.vertex_count {
        paths.push(Path { source: v, target: v, arrows: vec![] });
    }
    let mut frontier: Vec<Path> = paths.clone();
    for _len in 1..=bound {
        let mut next: Vec<Path> = Vec::new();
        for p in &frontier {
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == p.target {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { source: p.source, target: a.target, arrows });
                }
            }
        }
        next.sort_by(|x, y| {
            let kx: Vec<usize> = x.arrows.iter().map(|&a| rank[a]).collect();
            let ky: Vec<usize> = y.arrows.iter().map(|&a| rank[a]).collect();
            kx.cmp(&ky)
        });
        paths.extend(next.iter().cloned());
        if paths.len() > MAX_PATHS {
            return Err(TaufanError::budget(
                "path enumeration",
                format!("more than {MAX_PATHS} paths up to length {bound}"),
            ));
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let index: HashMap<Path, PathId> =
        paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok((paths, index))
}

/// Close the relation ideal under arrow multiplication, row-reduce per
/// (source, target) block, and produce the basis plus the rewriting table.
fn reduce_ideal<F: Field>(
    field: &F,
    q: &Quiver,
    relations: &[Relation<F>],
    paths: &[Path],
    path_index: &HashMap<Path, PathId>,
    bound: usize,
) -> Result<(Vec<PathId>, Vec<Residue<F>>)> {
    // Columns of each block: paths of length >= 2 for that (source, target),
    // ordered by DESCENDING canonical order so pivots land on long paths and
    // residues are supported on short ones.
    let mut block_cols: HashMap<(usize, usize), Vec<PathId>> = HashMap::new();
    for (id, p) in paths.iter().enumerate() {
        if p.len() >= 2 {
            block_cols.entry((p.source, p.target)).or_default().push(id);
        }
    }
    for cols in block_cols.values_mut() {
        cols.sort();
        cols.reverse(); // path ids ascend with canonical order
    }
    let col_pos: HashMap<(usize, usize), HashMap<PathId, usize>> = block_cols
        .iter()
        .map(|(&k, cols)| (k, cols.iter().enumerate().map(|(i, &c)| (c, i)).collect()))
        .collect();

    // Sparse row per ideal element, within its block.
    type Row<F> = Vec<(usize, <F as Field>::Elem)>; // (col position, coeff), sorted by col
    struct BlockRed<F: Field> {
        rows: Vec<Row<F>>,            // reduced rows, each with leading col unique
        lead: HashMap<usize, usize>,  // leading col -> row index
    }

    fn reduce_row<F: Field>(field: &F, block: &BlockRed<F>, mut row: Row<F>) -> Row<F> {
        loop {
            row.retain(|(_, c)| !field.is_zero(c));
            row.sort_by_key(|&(p, _)| p);
            let Some(&(lead_col, ref lead_coeff)) = row.first() else { return row };
            let Some(&ri) = block.lead.get(&lead_col) else { return row };
            let pivot_row = &block.rows[ri];
            let factor = lead_coeff.clone();
            // row -= factor * pivot_row (pivot row is normalized to lead coeff 1)
            let mut merged: HashMap<usize, F::Elem> = row.into_iter().collect();
            for (c, v) in pivot_row {
                let cur = merged.remove(c).unwrap_or_else(|| field.zero());
                let nv = field.sub(&cur, &field.mul(&factor, v));
                if !field.is_zero(&nv) {
                    merged.insert(*c, nv);
                }
            }
            row = merged.into_iter().collect();
        }
    }

    let mut blocks: HashMap<(usize, usize), BlockRed<F>> = HashMap::new();
    for key in block_cols.keys() {
        blocks.insert(*key, BlockRed { rows: vec![], lead: HashMap::new() });
    }

    // Worklist of ideal elements as (block key, row).
    let mut work: Vec<((usize, usize), Row<F>)> = Vec::new();
    for rel in relations {
        let s = q.arrows[rel.terms[0].arrows[0]].source;
        let t = q.arrows[*rel.terms[0].arrows.last().unwrap()].target;
        let pos = &col_pos[&(s, t)];
        let mut row: Row<F> = Vec::new();
        for term in &rel.terms {
            let p = Path { source: s, target: t, arrows: term.arrows.clone() };
            let id = path_index.get(&p).ok_or_else(|| {
                TaufanError::NotAdmissible(format!("relation path longer than nilbound {bound}"))
            })?;
            row.push((pos[id], term.coeff.clone()));
        }
        work.push(((s, t), row));
    }

    while let Some(((s, t), row)) = work.pop() {
        let block = blocks.get_mut(&(s, t)).unwrap();
        let row = reduce_row(field, block, row);
        if row.is_empty() {
            continue;
        }
        // Normalize the leading coefficient to 1 and back-substitute.
        let (lead_col, lead_coeff) = row[0].clone();
        let inv = field.inv(&lead_coeff).unwrap();
        let norm: Row<F> = row.iter().map(|(c, v)| (*c, field.mul(v, &inv))).collect();
        for existing in blocks.get_mut(&(s, t)).unwrap().rows.iter_mut() {
            if let Some(k) = existing.iter().position(|&(c, _)| c == lead_col) {
                let factor = existing[k].1.clone();
                let mut merged: HashMap<usize, F::Elem> =
                    existing.clone().into_iter().collect();
                for (c, v) in &norm {
                    let cur = merged.remove(c).unwrap_or_else(|| field.zero());
                    let nv = field.sub(&cur, &field.mul(&factor, v));
                    if !field.is_zero(&nv) {
                        merged.insert(*c, nv);
                    }
                }
                let mut merged: Row<F> = merged.into_iter().collect();
                merged.sort_by_key(|&(p, _)| p);
                *existing = merged;
            }
        }
        {
            let block = blocks.get_mut(&(s, t)).unwrap();
            block.rows.push(norm.clone());
            block.lead.insert(lead_col, block.rows.len() - 1);
        }

        // Close under arrow multiplication: the new element times each arrow,
        // left and right, truncating products beyond the nil bound.
        let cols = &block_cols[&(s, t)];
        for (ai, a) in q.arrows.iter().enumerate() {
            // right multiply: paths s->t, arrow t->u
            if a.source == t {
                let u = a.target;
                if let Some(pos_u) = col_pos.get(&(s, u)) {
                    let mut new_row: Row<F> = Vec::new();
                    for (cp, v) in &norm {
                        let p = &paths[cols[*cp]];
                        if p.len() + 1 > bound {
                            continue;
                        }
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        let comp = Path { source: s, target: u, arrows };
                        let id = path_index[&comp];
                        new_row.push((pos_u[&id], v.clone()));
                    }
                    if !new_row.is_empty() {
                        work.push(((s, u), new_row));
                    }
                }
            }
            // left multiply: arrow u->s, paths s->t
            if a.target == s {
                let u = a.source;
                if let Some(pos_u) = col_pos.get(&(u, t)) {
                    let mut new_row: Row<F> = Vec::new();
                    for (cp, v) in &norm {
                        let p = &paths[cols[*cp]];
                        if p.len() + 1 > bound {
                            continue;
                        }
                        let mut arrows = vec![ai];
                        arrows.extend_from_slice(&p.arrows);
                        let comp = Path { source: u, target: t, arrows };
                        let id = path_index[&comp];
                        new_row.push((pos_u[&id], v.clone()));
                    }
                    if !new_row.is_empty() {
                        work.push(((u, t), new_row));
                    }
                }
            }
        }
    }

    // Pivot paths are reducible; everything else is basis.
    let mut pivot_of: HashMap<PathId, ((usize, usize), usize)> = HashMap::new();
    for (&key, block) in &blocks {
        for (&lead_col, &ri) in &block.lead {
            pivot_of.insert(block_cols[&key][lead_col], (key, ri));
        }
    }
    let basis: Vec<PathId> = (0..paths.len()).filter(|id| !pivot_of.contains_key(id)).collect();
    let basis_pos: HashMap<PathId, usize> =
        basis.iter().enumerate().map(|(k, &p)| (p, k)).collect();

    // Boundedness: every path of length == bound must reduce to zero.
    for (id, p) in paths.iter().enumerate() {
        if p.len() == bound {
            match pivot_of.get(&id) {
                None => return Err(TaufanError::Unbounded { bound }),
                Some((key, ri)) => {
                    let row = &blocks[key].rows[*ri];
                    if row.len() > 1 {
                        return Err(TaufanError::Unbounded { bound });
                    }
                }
            }
        }
    }

    // Rewriting table: basis paths map to themselves; pivot paths to minus
    // the tail of their reduced row.
    let one = field.one();
    let mut reduction: Vec<Residue<F>> = Vec::with_capacity(paths.len());
    for id in 0..paths.len() {
        match pivot_of.get(&id) {
            None => reduction.push(vec![(basis_pos[&id], one.clone())]),
            Some((key, ri)) => {
                let row = &blocks[key].rows[*ri];
                let cols = &block_cols[key];
                let mut res: Residue<F> = Vec::new();
                for (cp, v) in row.iter().skip(1) {
                    let pid = cols[*cp];
                    res.push((basis_pos[&pid], field.neg(v)));
                }
                res.sort_by_key(|&(b, _)| b);
                reduction.push(res);
            }
        }
    }

    Ok((basis, reduction))
}

/// dim End(S(i)) for each vertex, by solving the intertwining system of the
/// simple representation at i. For bound quiver algebras every entry is 1.
fn compute_symmetrizer<F: Field>(alg: &BoundQuiverAlgebra<F>) -> Vec<u64> {
    let n = alg.vertex_count();
    (0..n)
        .map(|i| {
            let dims: Vec<usize> = (0..n).map(|v| usize::from(v == i)).collect();
            let maps: Vec<Matrix<F>> = alg
                .quiver
                .arrows
                .iter()
                .map(|a| Matrix::zero(alg.field.clone(), dims[a.target], dims[a.source]))
                .collect();
            crate::rep::intertwiner_dim(&alg.field, &alg.quiver, &dims, &maps, &dims, &maps) as u64
        })
        .collect()
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// An algebra file parsed up to field dispatch.
#[derive(Debug, Clone)]
pub struct AlgebraFile {
    pub field: FieldSpec,
    pub vertex_count: usize,
    pub arrows: Vec<Arrow>,
    /// Relations with rational coefficients, embedded into the field later.
    pub relations: Vec<Vec<(i64, i64, Vec<String>)>>, // (num, den, labels)
    pub nil_bound: Option<usize>,
}

/// Either of the two supported algebra instantiations.
#[derive(Debug, Clone)]
pub enum AnyAlgebra {
    Rat(Arc<BoundQuiverAlgebra<Rationals>>),
    Fp(Arc<BoundQuiverAlgebra<PrimeField>>),
}

impl AnyAlgebra {
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyAlgebra::Rat(_) => FieldSpec::Rationals,
            AnyAlgebra::Fp(a) => a.field.spec(),
        }
    }
    pub fn dim(&self) -> usize {
        match self {
            AnyAlgebra::Rat(a) => a.dim(),
            AnyAlgebra::Fp(a) => a.dim(),
        }
    }
    pub fn vertex_count(&self) -> usize {
        match self {
            AnyAlgebra::Rat(a) => a.vertex_count(),
            AnyAlgebra::Fp(a) => a.vertex_count(),
        }
    }
}

pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    let mut field = FieldSpec::Prime(2);
    let mut vertex_count: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut relations: Vec<Vec<(i64, i64, Vec<String>)>> = Vec::new();
    let mut nil_bound: Option<usize> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let mut parts = line.split_whitespace();
        let kw = parts.next().unwrap();
        match kw {
            "field" => {
                let s = parts
                    .next()
                    .ok_or_else(|| TaufanError::parse(lineno, 1, "missing field spec"))?;
                field = FieldSpec::parse(s)
                    .map_err(|_| TaufanError::parse(lineno, 7, format!("bad field spec `{s}`")))?;
            }
            "vertices" => {
                let s = parts
                    .next()
                    .ok_or_else(|| TaufanError::parse(lineno, 1, "missing vertex count"))?;
                let n: usize = s
                    .parse()
                    .map_err(|_| TaufanError::parse(lineno, 10, format!("bad vertex count `{s}`")))?;
                if n == 0 {
                    return Err(TaufanError::parse(lineno, 10, "vertex count must be positive"));
                }
                vertex_count = Some(n);
            }
            "arrow" => {
                let label = parts
                    .next()
                    .ok_or_else(|| TaufanError::parse(lineno, 7, "missing arrow label"))?
                    .to_string();
                let src: usize = parse_vertex(parts.next(), lineno)?;
                let tgt: usize = parse_vertex(parts.next(), lineno)?;
                arrows.push(Arrow { label, source: src - 1, target: tgt - 1 });
            }
            "relation" => {
                let expr = line["relation".len()..].trim();
                relations.push(parse_relation_expr(expr, lineno)?);
            }
            "nilbound" => {
                let s = parts
                    .next()
                    .ok_or_else(|| TaufanError::parse(lineno, 1, "missing nilbound value"))?;
                let n: usize = s
                    .parse()
                    .map_err(|_| TaufanError::parse(lineno, 10, format!("bad nilbound `{s}`")))?;
                nil_bound = Some(n);
            }
            other => {
                return Err(TaufanError::parse(lineno, 1, format!("unknown directive `{other}`")));
            }
        }
    }

    let vertex_count = vertex_count
        .ok_or_else(|| TaufanError::parse(0, 0, "missing `vertices` directive"))?;
    Ok(AlgebraFile { field, vertex_count, arrows, relations, nil_bound })
}

fn parse_vertex(tok: Option<&str>, lineno: usize) -> Result<usize> {
    let s = tok.ok_or_else(|| TaufanError::parse(lineno, 1, "missing vertex index"))?;
    let v: usize =
        s.parse().map_err(|_| TaufanError::parse(lineno, 1, format!("bad vertex index `{s}`")))?;
    if v == 0 {
        return Err(TaufanError::parse(lineno, 1, "vertex indices are 1-based"));
    }
    Ok(v)
}

/// Parse `term (+|-) term ...` where term = `[coeff*]label*label[*label...]`.
fn parse_relation_expr(expr: &str, lineno: usize) -> Result<Vec<(i64, i64, Vec<String>)>> {
    if expr.is_empty() {
        return Err(TaufanError::parse(lineno, 1, "empty relation"));
    }
    let mut terms: Vec<(i64, i64, Vec<String>)> = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    let flush = |sign: i64, text: &str, terms: &mut Vec<(i64, i64, Vec<String>)>| -> Result<()> {
        let text = text.trim();
        if text.is_empty() {
            return Err(TaufanError::parse(lineno, 1, "empty relation term"));
        }
        let segs: Vec<&str> = text.split('*').map(str::trim).collect();
        let (num, den, start) = match parse_coeff(segs[0]) {
            Some((n, d)) => (n, d, 1),
            None => (1, 1, 0),
        };
        let labels: Vec<String> = segs[start..].iter().map(|s| s.to_string()).collect();
        if labels.is_empty() || labels.iter().any(|l| l.is_empty()) {
            return Err(TaufanError::parse(lineno, 1, format!("malformed term `{text}`")));
        }
        terms.push((sign * num, den, labels));
        Ok(())
    };
    for ch in expr.chars() {
        match ch {
            '+' | '-' if !current.trim().is_empty() => {
                flush(sign, &current, &mut terms)?;
                current.clear();
                sign = if ch == '+' { 1 } else { -1 };
            }
            '-' => {
                // leading minus of the very first term
                sign = -sign;
            }
            '+' => {}
            _ => current.push(ch),
        }
    }
    flush(sign, &current, &mut terms)?;
    Ok(terms)
}

fn parse_coeff(s: &str) -> Option<(i64, i64)> {
    if let Ok(n) = s.parse::<i64>() {
        return Some((n, 1));
    }
    if let Some((a, b)) = s.split_once('/') {
        if let (Ok(n), Ok(d)) = (a.parse::<i64>(), b.parse::<i64>()) {
            return Some((n, d));
        }
    }
    None
}

fn build_relations<F: Field>(
    field: &F,
    quiver: &Quiver,
    file_rels: &[Vec<(i64, i64, Vec<String>)>],
) -> Result<Vec<Relation<F>>> {
    file_rels
        .iter()
        .map(|terms| {
            let terms = terms
                .iter()
                .map(|(num, den, labels)| {
                    let coeff = field.from_ratio(*num, *den)?;
                    let arrows = labels
                        .iter()
                        .map(|l| {
                            quiver.arrow_by_label(l).ok_or_else(|| {
                                TaufanError::parse(0, 0, format!("unknown arrow label `{l}`"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(RelationTerm { coeff, arrows })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Relation { terms })
        })
        .collect()
}

/// Parse an algebra file and construct the algebra over its declared field.
pub fn parse_algebra(text: &str) -> Result<AnyAlgebra> {
    let file = parse_algebra_file(text)?;
    let quiver = Quiver { vertex_count: file.vertex_count, arrows: file.arrows.clone() };
    match file.field {
        FieldSpec::Rationals => {
            let field = Rationals;
            let rels = build_relations(&field, &quiver, &file.relations)?;
            let alg = BoundQuiverAlgebra::new(field, quiver, rels, file.nil_bound)?;
            Ok(AnyAlgebra::Rat(Arc::new(alg)))
        }
        FieldSpec::Prime(p) => {
            let field = PrimeField::new(p)?;
            let rels = build_relations(&field, &quiver, &file.relations)?;
            let alg = BoundQuiverAlgebra::new(field, quiver, rels, file.nil_bound)?;
            Ok(AnyAlgebra::Fp(Arc::new(alg)))
        }
    }
}

/// Reconstruct the same algebra over a chosen field (used when re-evaluating
/// rational inputs over prime fields for enumeration work).
pub fn reinterpret<F: Field, G: Field>(
    alg: &BoundQuiverAlgebra<F>,
    field: G,
) -> Result<BoundQuiverAlgebra<G>> {
    let rels = alg
        .relations
        .iter()
        .map(|r| {
            let terms = r
                .terms
                .iter()
                .map(|t| {
                    // Coefficients pass through the canonical serialization,
                    // so only small integers/fractions are supported here.
                    let disp = alg.field.display(&t.coeff);
                    let (num, den) = parse_coeff(&disp).ok_or_else(|| {
                        TaufanError::InvalidArgument(format!("coefficient {disp} not transferable"))
                    })?;
                    Ok(RelationTerm { coeff: field.from_ratio(num, den)?, arrows: t.arrows.clone() })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Relation { terms })
        })
        .collect::<Result<Vec<_>>>()?;
    BoundQuiverAlgebra::new(field, alg.quiver.clone(), rels, Some(alg.nil_bound))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const A2: &str = "\
# A2: 1 -> 2
field f2
vertices 2
arrow a 1 2
";

    pub const KRONECKER: &str = "\
field f2
vertices 2
arrow a 1 2
arrow b 1 2
";

    pub const CYCLE3: &str = "\
# 3-cycle modulo rad^2
field f2
vertices 3
arrow a 1 2
arrow b 2 3
arrow c 3 1
relation a*b
relation b*c
relation c*a
";

    pub fn a2_f2() -> Arc<BoundQuiverAlgebra<PrimeField>> {
        match parse_algebra(A2).unwrap() {
            AnyAlgebra::Fp(a) => a,
            _ => unreachable!(),
        }
    }
    pub fn kronecker_f2() -> Arc<BoundQuiverAlgebra<PrimeField>> {
        match parse_algebra(KRONECKER).unwrap() {
            AnyAlgebra::Fp(a) => a,
            _ => unreachable!(),
        }
    }
    pub fn cycle3_f2() -> Arc<BoundQuiverAlgebra<PrimeField>> {
        match parse_algebra(CYCLE3).unwrap() {
            AnyAlgebra::Fp(a) => a,
            _ => unreachable!(),
        }
    }
    pub fn a2_q() -> Arc<BoundQuiverAlgebra<Rationals>> {
        match parse_algebra(&A2.replace("field f2", "field q")).unwrap() {
            AnyAlgebra::Rat(a) => a,
            _ => unreachable!(),
        }
    }
    pub fn cycle3_q() -> Arc<BoundQuiverAlgebra<Rationals>> {
        match parse_algebra(&CYCLE3.replace("field f2", "field q")).unwrap() {
            AnyAlgebra::Rat(a) => a,
            _ => unreachable!(),
        }
    }
    pub fn kronecker_q() -> Arc<BoundQuiverAlgebra<Rationals>> {
        match parse_algebra(&KRONECKER.replace("field f2", "field q")).unwrap() {
            AnyAlgebra::Rat(a) => a,
            _ => unreachable!(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn a2_path_basis() {
        let alg = a2_f2();
        assert_eq!(alg.dim(), 3);
        let names: Vec<String> = alg.basis_paths().map(|p| alg.path_display(p)).collect();
        assert_eq!(names, vec!["e1", "e2", "a"]);
        assert_eq!(alg.symmetrizer(), &[1, 1]);
    }

    #[test]
    fn kronecker_path_basis() {
        let alg = kronecker_f2();
        assert_eq!(alg.dim(), 4);
        let names: Vec<String> = alg.basis_paths().map(|p| alg.path_display(p)).collect();
        assert_eq!(names, vec!["e1", "e2", "a", "b"]);
        assert_eq!(alg.symmetrizer(), &[1, 1]);
    }

    #[test]
    fn cycle3_path_basis() {
        let alg = cycle3_f2();
        assert_eq!(alg.dim(), 6);
        assert!(alg.basis_paths().all(|p| p.len() <= 1));
        assert_eq!(alg.symmetrizer(), &[1, 1, 1]);
    }

    #[test]
    fn cycle3_without_relations_is_unbounded() {
        let text = "field f2\nvertices 3\narrow a 1 2\narrow b 2 3\narrow c 3 1\n";
        match parse_algebra(text) {
            Err(TaufanError::Unbounded { .. }) => {}
            other => panic!("expected Unbounded, got {other:?}"),
        }
    }

    #[test]
    fn length_one_relation_rejected() {
        let text = "field f2\nvertices 2\narrow a 1 2\nrelation a\n";
        let file = parse_algebra_file(text).unwrap();
        assert_eq!(file.relations.len(), 1);
        match parse_algebra(text) {
            Err(TaufanError::NotAdmissible(_)) => {}
            other => panic!("expected NotAdmissible, got {other:?}"),
        }
    }

    #[test]
    fn commutative_square_over_q() {
        // 1 -> 2 -> 4 and 1 -> 3 -> 4 with a*c = b*d
        let text = "\
field q
vertices 4
arrow a 1 2
arrow b 1 3
arrow c 2 4
arrow d 3 4
relation a*c - b*d
";
        let alg = match parse_algebra(text).unwrap() {
            AnyAlgebra::Rat(a) => a,
            _ => unreachable!(),
        };
        // basis: e1..e4, a, b, c, d, and one surviving length-2 path
        assert_eq!(alg.dim(), 9);
    }

    #[test]
    fn serialization_round_trips() {
        for text in [A2, KRONECKER, CYCLE3] {
            let alg = parse_algebra(text).unwrap();
            let ser = match &alg {
                AnyAlgebra::Fp(a) => a.serialize(),
                AnyAlgebra::Rat(a) => a.serialize(),
            };
            let alg2 = parse_algebra(&ser).unwrap();
            match (&alg, &alg2) {
                (AnyAlgebra::Fp(a), AnyAlgebra::Fp(b)) => assert_eq!(**a, **b),
                (AnyAlgebra::Rat(a), AnyAlgebra::Rat(b)) => assert_eq!(**a, **b),
                _ => panic!("field changed in round trip"),
            }
        }
    }

    #[test]
    fn relation_expr_parsing() {
        let terms = parse_relation_expr("2*a*b - c*d + 1/3*e*f", 1).unwrap();
        assert_eq!(
            terms,
            vec![
                (2, 1, vec!["a".into(), "b".into()]),
                (-1, 1, vec!["c".into(), "d".into()]),
                (1, 3, vec!["e".into(), "f".into()]),
            ]
        );
        let neg = parse_relation_expr("-a*b", 1).unwrap();
        assert_eq!(neg, vec![(-1, 1, vec!["a".into(), "b".into()])]);
    }
}
