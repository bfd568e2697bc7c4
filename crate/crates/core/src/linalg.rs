//! Based linear algebra over [`Scalar`]: sparse vectors, incremental row
//! echelon forms, solving, kernels and quotient spaces.
//!
//! Pivots are always the smallest index carrying a nonzero entry, and rows are
//! kept fully reduced, so every derived basis is reproducible.

use std::collections::{BTreeMap, HashMap};

use crate::error::{input, Error, Result};
use crate::scalar::Scalar;

pub type SVec = BTreeMap<usize, Scalar>;

pub fn unit(i: usize) -> SVec {
    let mut v = SVec::new();
    v.insert(i, Scalar::one());
    v
}

pub fn axpy(dst: &mut SVec, coef: &Scalar, src: &SVec) {
    if coef.is_zero() {
        return;
    }
    for (k, x) in src {
        let term = coef * x;
        add_entry(dst, *k, &term);
    }
}

pub fn add_entry(dst: &mut SVec, k: usize, x: &Scalar) {
    if x.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match dst.entry(k) {
        Entry::Vacant(e) => {
            e.insert(x.clone());
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scaled(v: &SVec, c: &Scalar) -> SVec {
    if c.is_zero() {
        return SVec::new();
    }
    v.iter().map(|(k, x)| (*k, c * x)).collect()
}

pub fn sub(a: &SVec, b: &SVec) -> SVec {
    let mut out = a.clone();
    axpy(&mut out, &Scalar::from_int(-1), b);
    out
}

pub fn conj_vec(v: &SVec) -> SVec {
    v.iter().map(|(k, x)| (*k, x.conj())).collect()
}

/// A named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedSpace {
    labels: Vec<String>,
}

impl BasedSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(input(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(BasedSpace { labels })
    }

    pub fn anonymous(dim: usize, prefix: &str) -> Self {
        BasedSpace { labels: (0..dim).map(|i| format!("{prefix}{i}")).collect() }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Matrix stored by sparse columns. With `antilinear` set, scalars are
/// conjugated before the matrix acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub dom: usize,
    pub cod: usize,
    pub cols: Vec<SVec>,
    pub antilinear: bool,
}

impl LinearMap {
    pub fn new(dom: usize, cod: usize, cols: Vec<SVec>) -> Result<Self> {
        if cols.len() != dom {
            return Err(input(format!("map has {} columns, expected {dom}", cols.len())));
        }
        if let Some((j, k)) = cols.iter().enumerate().find_map(|(j, c)| c.keys().find(|&&k| k >= cod).map(|k| (j, *k))) {
            return Err(input(format!("column {j} has entry at row {k} outside codomain of dimension {cod}")));
        }
        Ok(LinearMap { dom, cod, cols, antilinear: false })
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap { dom: dim, cod: dim, cols: (0..dim).map(unit).collect(), antilinear: false }
    }

    pub fn zero(dom: usize, cod: usize) -> Self {
        LinearMap { dom, cod, cols: vec![SVec::new(); dom], antilinear: false }
    }

    pub fn antilinear(mut self) -> Self {
        self.antilinear = true;
        self
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut out = SVec::new();
        for (j, x) in v {
            let c = if self.antilinear { x.conj() } else { x.clone() };
            axpy(&mut out, &c, &self.cols[*j]);
        }
        out
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.cod != self.dom {
            return Err(input(format!("cannot compose: inner codomain {} vs outer domain {}", inner.cod, self.dom)));
        }
        let cols = inner.cols.iter().map(|c| self.apply(c)).collect();
        Ok(LinearMap { dom: inner.dom, cod: self.cod, cols, antilinear: self.antilinear ^ inner.antilinear })
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new();
        for c in &self.cols {
            e.insert(c.clone());
        }
        e.rank()
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.cols.iter().enumerate().all(|(j, c)| *c == unit(j))
    }

    /// Kernel basis in reduced row echelon form.
    pub fn kernel(&self) -> Vec<SVec> {
        kernel_of_columns(&self.cols)
    }

    pub fn entry(&self, row: usize, col: usize) -> Scalar {
        self.cols[col].get(&row).cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
struct Row {
    v: SVec,
    combo: SVec,
}

/// Incrementally built reduced row echelon form. Each row optionally records
/// which combination of inserted vectors produced it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    by_pivot: BTreeMap<usize, usize>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_pivot.keys().copied()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.by_pivot.contains_key(&i)
    }

    /// Rows in pivot order.
    pub fn basis(&self) -> Vec<SVec> {
        self.by_pivot.values().map(|&r| self.rows[r].v.clone()).collect()
    }

    /// Reduce `v` against the rows; returns the residual and the combination of
    /// inserted vectors that was subtracted.
    pub fn reduce(&self, v: &SVec) -> (SVec, SVec) {
        let mut res = v.clone();
        let mut combo = SVec::new();
        let hits: Vec<(usize, Scalar)> =
            res.iter().filter(|(k, _)| self.by_pivot.contains_key(k)).map(|(k, x)| (*k, x.clone())).collect();
        for (p, coef) in hits {
            let row = &self.rows[self.by_pivot[&p]];
            let neg = -&coef;
            axpy(&mut res, &neg, &row.v);
            axpy(&mut combo, &coef, &row.combo);
        }
        (res, combo)
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Insert a vector; returns its new pivot, or `None` when dependent.
    pub fn insert(&mut self, v: SVec) -> Option<usize> {
        let id = self.inserted;
        self.inserted += 1;
        self.insert_tracked(v, unit(id)).ok()
    }

    /// Insert with an explicit tracking combination. On dependence, returns
    /// `Err(combination)` expressing `v` through earlier tracked vectors
    /// minus its own tracking vector (so the result is a relation).
    pub fn insert_tracked(&mut self, v: SVec, track: SVec) -> std::result::Result<usize, SVec> {
        let (mut res, combo) = self.reduce(&v);
        let mut own = track;
        axpy(&mut own, &Scalar::from_int(-1), &combo);
        let Some((&p, lead)) = res.iter().next() else {
            return Err(own);
        };
        let inv = lead.inv().expect("nonzero pivot");
        res = scaled(&res, &inv);
        own = scaled(&own, &inv);
        // keep rows fully reduced at the new pivot
        for r in self.rows.iter_mut() {
            if let Some(c) = r.v.get(&p).cloned() {
                let neg = -&c;
                axpy(&mut r.v, &neg, &res);
                axpy(&mut r.combo, &neg, &own);
            }
        }
        self.by_pivot.insert(p, self.rows.len());
        self.rows.push(Row { v: res, combo: own });
        Ok(p)
    }
}

/// Kernel of the linear map with the given columns, in RREF.
pub fn kernel_of_columns(cols: &[SVec]) -> Vec<SVec> {
    let mut e = Echelon::new();
    let mut rels = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        if let Err(rel) = e.insert_tracked(c.clone(), unit(j)) {
            rels.push(rel);
        }
    }
    let mut k = Echelon::new();
    for r in rels {
        k.insert(r);
    }
    k.basis()
}

/// Span of vectors in RREF.
pub fn span_basis(vs: impl IntoIterator<Item = SVec>) -> Vec<SVec> {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.basis()
}

pub fn span_rank(vs: impl IntoIterator<Item = SVec>) -> usize {
    let mut e = Echelon::new();
    for v in vs {
        e.insert(v);
    }
    e.rank()
}

/// Whether two families span the same subspace.
pub fn same_span(a: &[SVec], b: &[SVec]) -> bool {
    let ra = span_rank(a.iter().cloned());
    let rb = span_rank(b.iter().cloned());
    ra == rb && span_rank(a.iter().chain(b.iter()).cloned()) == ra
}

/// Solve `map(x) = target`. Among all solutions, the one supported on the
/// earliest independent columns is returned.
pub fn solve_linear(map: &LinearMap, target: &SVec) -> Result<SVec> {
    if let Some(k) = target.keys().find(|&&k| k >= map.cod) {
        return Err(input(format!("target entry {k} outside codomain of dimension {}", map.cod)));
    }
    let solver = Solver::new(map);
    solver.solve(target)
}

/// Reusable factorisation for repeated solves against one map.
#[derive(Clone, Debug)]
pub struct Solver {
    ech: Echelon,
    antilinear: bool,
    dom: usize,
}

impl Solver {
    pub fn new(map: &LinearMap) -> Self {
        let mut ech = Echelon::new();
        for (j, c) in map.cols.iter().enumerate() {
            let _ = ech.insert_tracked(c.clone(), unit(j));
        }
        Solver { ech, antilinear: map.antilinear, dom: map.dom }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn is_bijective(&self, cod: usize) -> bool {
        self.dom == cod && self.rank() == cod
    }

    pub fn solve(&self, target: &SVec) -> Result<SVec> {
        let (res, combo) = self.ech.reduce(target);
        if !res.is_empty() {
            return Err(Error::NoSolution);
        }
        Ok(if self.antilinear { conj_vec(&combo) } else { combo })
    }
}

/// Quotient of an ambient space by the span of relation vectors. The
/// quotient basis consists of the ambient basis vectors that are not pivots.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    ambient_dim: usize,
    relations: Echelon,
    basis: Vec<usize>,
    index: HashMap<usize, usize>,
}

pub fn quotient_by(ambient_dim: usize, relations: impl IntoIterator<Item = SVec>) -> Result<QuotientSpace> {
    let mut ech = Echelon::new();
    for r in relations {
        if let Some(k) = r.keys().find(|&&k| k >= ambient_dim) {
            return Err(input(format!("relation entry {k} outside ambient dimension {ambient_dim}")));
        }
        ech.insert(r);
    }
    Ok(QuotientSpace::from_echelon(ambient_dim, ech))
}

impl QuotientSpace {
    pub fn from_echelon(ambient_dim: usize, relations: Echelon) -> Self {
        let basis: Vec<usize> = (0..ambient_dim).filter(|i| !relations.is_pivot(*i)).collect();
        let index = basis.iter().enumerate().map(|(q, &a)| (a, q)).collect();
        QuotientSpace { ambient_dim, relations, basis, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Ambient index representing each quotient basis element.
    pub fn representatives(&self) -> &[usize] {
        &self.basis
    }

    pub fn relation_basis(&self) -> Vec<SVec> {
        self.relations.basis()
    }

    pub fn project(&self, v: &SVec) -> SVec {
        let (res, _) = self.relations.reduce(v);
        res.into_iter().map(|(k, x)| (self.index[&k], x)).collect()
    }

    pub fn section_of(&self, q: &SVec) -> SVec {
        q.iter().map(|(k, x)| (self.basis[*k], x.clone())).collect()
    }

    pub fn projection(&self) -> LinearMap {
        let cols = (0..self.ambient_dim).map(|i| self.project(&unit(i))).collect();
        LinearMap { dom: self.ambient_dim, cod: self.dim(), cols, antilinear: false }
    }

    pub fn section(&self) -> LinearMap {
        let cols = self.basis.iter().map(|&a| unit(a)).collect();
        LinearMap { dom: self.dim(), cod: self.ambient_dim, cols, antilinear: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SVec {
        entries.iter().map(|&(k, x)| (k, Scalar::from_int(x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    #[test]
    fn solve_identity() {
        let id = LinearMap::identity(3);
        assert_eq!(solve_linear(&id, &unit(0)).unwrap(), unit(0));
    }

    #[test]
    fn solve_underdetermined_picks_first_pivot() {
        let m = LinearMap::new(2, 1, vec![v(&[(0, 1)]), v(&[(0, 1)])]).unwrap();
        assert_eq!(solve_linear(&m, &v(&[(0, 2)])).unwrap(), v(&[(0, 2)]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = LinearMap::new(2, 2, vec![v(&[(0, 1), (1, 1)]), v(&[(0, 1), (1, 1)])]).unwrap();
        assert_eq!(solve_linear(&m, &v(&[(0, 1)])), Err(Error::NoSolution));
        assert!(solve_linear(&m, &v(&[(5, 1)])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_by(2, vec![v(&[(0, 1), (1, -1)])]).unwrap();
        assert_eq!(q.dim(), 1);
        let q0 = quotient_by(3, Vec::new()).unwrap();
        assert!(q0.projection().is_identity());
        // middle-linearity over span{1} is vacuous: b*1 (x) q - b (x) 1*q = 0
        let q4 = quotient_by(4, vec![SVec::new(); 4]).unwrap();
        assert_eq!(q4.dim(), 4);
    }

    #[test]
    fn quotient_invariants() {
        let rels = vec![v(&[(0, 1), (2, -1)]), v(&[(1, 2), (3, 1)]), v(&[(0, 1), (1, 2), (2, -1), (3, 1)])];
        let q = quotient_by(5, rels.clone()).unwrap();
        assert_eq!(q.dim(), 3);
        let p = q.projection();
        assert!(p.compose(&q.section()).unwrap().is_identity());
        let ker = p.kernel();
        assert!(same_span(&ker, &rels));
    }

    #[test]
    fn kernel_basic() {
        let m = LinearMap::new(3, 1, vec![v(&[(0, 1)]), v(&[(0, 1)]), v(&[(0, 2)])]).unwrap();
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for kv in &k {
            assert!(m.apply(kv).is_empty());
        }
    }

    #[test]
    fn compose_checks_dims() {
        let a = LinearMap::identity(2);
        let b = LinearMap::identity(3);
        assert!(a.compose(&b).is_err());
    }
}
