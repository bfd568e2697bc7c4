//! Finite-dimensional Hopf *-algebras by structure constants: validation,
//! Haar integral, adjoint coaction, and the group-table presets.

use crate::algebra::Algebra;
use crate::error::{input, Error, Result};
use crate::linalg::{kernel_of_columns, unit, BasedSpace, LinearMap, SVec, Solver};
use crate::report::{ValidationReport, Witness};
use crate::scalar::Scalar;
use crate::tensor::{key, sign, Tensor};

/// Irreducible corepresentation, described by its dimension and character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Irrep {
    pub name: String,
    pub dim: usize,
    pub character: SVec,
}

#[derive(Clone, Debug)]
pub struct Hopf {
    pub alg: Algebra,
    /// Two-slot coproduct of each basis element.
    pub coprod: Vec<Tensor>,
    pub counit: Vec<Scalar>,
    pub antipode: LinearMap,
    pub antipode_inv: LinearMap,
    pub haar: Option<Vec<Scalar>>,
    pub irreps: Option<Vec<Irrep>>,
    /// For truncated graded algebras: tensors above this total degree vanish.
    pub top_degree: Option<u8>,
}

impl Hopf {
    /// Assemble and validate. The antipode inverse and the Haar integral
    /// are computed here.
    pub fn build(alg: Algebra, coprod: Vec<Tensor>, counit: Vec<Scalar>, antipode: LinearMap) -> Result<Self> {
        Self::build_inner(alg, coprod, counit, antipode, None)
    }

    /// A graded algebra truncated above degree `top`: the axioms are read
    /// modulo tensors of total degree above `top`.
    pub fn build_truncated(alg: Algebra, coprod: Vec<Tensor>, counit: Vec<Scalar>, antipode: LinearMap, top: u8) -> Result<Self> {
        Self::build_inner(alg, coprod, counit, antipode, Some(top))
    }

    fn build_inner(alg: Algebra, coprod: Vec<Tensor>, counit: Vec<Scalar>, antipode: LinearMap, top_degree: Option<u8>) -> Result<Self> {
        let d = alg.dim();
        if coprod.len() != d || counit.len() != d || antipode.dom != d || antipode.cod != d {
            return Err(input("Hopf structure maps have the wrong shape"));
        }
        if coprod.iter().flat_map(|t| t.iter()).any(|(k, _)| k.len() != 2 || k.iter().any(|&i| i as usize >= d)) {
            return Err(input("coproduct entry out of range"));
        }
        let mut h = Hopf {
            alg,
            coprod,
            counit,
            antipode_inv: LinearMap::identity(d),
            antipode,
            haar: None,
            irreps: None,
            top_degree,
        };
        let rep = h.validate_axioms();
        if let Some(r) = rep.failures().next() {
            let w = r.witness.as_ref().map(|w| format!(" at {}: {} != {}", w.at, w.lhs, w.rhs)).unwrap_or_default();
            return Err(Error::InvalidHopf(format!("{} fails{w}", r.paper_label)));
        }
        let solver = Solver::new(&h.antipode);
        if !solver.is_bijective(d) {
            return Err(Error::InvalidHopf("antipode is singular".into()));
        }
        let cols = (0..d).map(|i| solver.solve(&unit(i)).expect("bijective")).collect();
        h.antipode_inv = LinearMap::new(d, d, cols)?;
        if !h.alg.is_graded() {
            h.haar = Some(h.compute_haar()?);
        }
        Ok(h)
    }

    pub fn with_irreps(mut self, irreps: Vec<Irrep>) -> Self {
        self.irreps = Some(irreps);
        self
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn deg(&self, i: u32) -> u8 {
        self.alg.deg[i as usize]
    }

    pub fn label(&self, i: usize) -> &str {
        self.alg.space.label(i)
    }

    pub fn coproduct(&self, a: &SVec) -> Tensor {
        let mut out = Tensor::zero();
        for (i, x) in a {
            out.add_scaled(&self.coprod[*i], x);
        }
        out
    }

    pub fn eps(&self, a: &SVec) -> Scalar {
        let mut s = Scalar::zero();
        for (i, x) in a {
            s += &(x * &self.counit[*i]);
        }
        s
    }

    pub fn kappa(&self, a: &SVec) -> SVec {
        self.antipode.apply(a)
    }

    pub fn kappa_inv(&self, a: &SVec) -> SVec {
        self.antipode_inv.apply(a)
    }

    pub fn haar_of(&self, a: &SVec) -> Scalar {
        let h = self.haar.as_ref().expect("Haar integral available");
        let mut s = Scalar::zero();
        for (i, x) in a {
            s += &(x * &h[*i]);
        }
        s
    }

    /// Product in the graded tensor square.
    pub fn mul2(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (ka, x) in a.iter() {
            for (kb, y) in b.iter() {
                let s = sign(self.deg(ka[1]) % 2 == 1 && self.deg(kb[0]) % 2 == 1);
                let c = &s * &(x * y);
                for (p, cp) in self.alg.mul_basis(ka[0] as usize, kb[0] as usize) {
                    for (q, cq) in self.alg.mul_basis(ka[1] as usize, kb[1] as usize) {
                        if self.top_degree.is_some_and(|top| self.alg.deg[*p] + self.alg.deg[*q] > top) {
                            continue;
                        }
                        out.add_term(key(&[*p as u32, *q as u32]), &c * &(cp * cq));
                    }
                }
            }
        }
        out
    }

    /// Apply a linear map to one slot of a tensor (no Koszul signs; use only
    /// with even maps).
    fn slot_map(t: &Tensor, pos: usize, f: impl Fn(u32) -> Tensor) -> Tensor {
        t.flat_map(|k, x, out| {
            let img = f(k[pos]);
            for (ik, y) in img.iter() {
                let mut nk = crate::tensor::Key::new();
                nk.extend_from_slice(&k[..pos]);
                nk.extend_from_slice(ik);
                nk.extend_from_slice(&k[pos + 1..]);
                out.add_term(nk, x * y);
            }
        })
    }

    fn show(&self, v: &SVec) -> String {
        crate::algebra::show_vec(v, &self.alg.space)
    }

    fn validate_axioms(&self) -> ValidationReport {
        let d = self.dim();
        let mut rep = self.alg.validate("hopf.algebra");
        let labels = |i: usize| self.label(i).to_string();

        let coassoc = crate::report::first_mismatch((0..d).map(|i| {
            let c = &self.coprod[i];
            let l = Self::slot_map(c, 0, |j| self.coprod[j as usize].clone());
            let r = Self::slot_map(c, 1, |j| self.coprod[j as usize].clone());
            (labels(i), l, r)
        }));
        rep.record("hopf.coassociativity", "coassociativity", coassoc);

        let counit = crate::report::first_mismatch((0..d).flat_map(|i| {
            let c = &self.coprod[i];
            let mut l = SVec::new();
            let mut r = SVec::new();
            for (k, x) in c.iter() {
                crate::linalg::add_entry(&mut l, k[1] as usize, &(x * &self.counit[k[0] as usize]));
                crate::linalg::add_entry(&mut r, k[0] as usize, &(x * &self.counit[k[1] as usize]));
            }
            let e = Tensor::from_svec(&unit(i));
            [(format!("{} left", labels(i)), Tensor::from_svec(&l), e.clone()), (format!("{} right", labels(i)), Tensor::from_svec(&r), e)]
        }));
        rep.record("hopf.counit", "counit", counit);

        let mut mult = None;
        'o: for i in 0..d {
            for j in 0..d {
                let l = self.coproduct(self.alg.mul_basis(i, j));
                let r = self.mul2(&self.coprod[i], &self.coprod[j]);
                if l != r {
                    mult = Some(Witness::new(format!("({},{})", labels(i), labels(j)), l, r));
                    break 'o;
                }
            }
        }
        rep.record("hopf.coproduct-multiplicative", "coproduct-multiplicative", mult);
        let one = self.alg.one();
        let unit_w = {
            let l = self.coproduct(&one);
            let r = Tensor::from_svec(&one).kron(&Tensor::from_svec(&one));
            (l != r).then(|| Witness::new("1", l, r))
        };
        rep.record("hopf.coproduct-unital", "coproduct-unital", unit_w);
        let starw = crate::report::first_mismatch((0..d).map(|i| {
            let l = self.coproduct(&self.alg.star_of(&unit(i)));
            let r = self.coprod[i].flat_map(|k, x, out| {
                let a = self.alg.star_of(&unit(k[0] as usize));
                let b = self.alg.star_of(&unit(k[1] as usize));
                for (p, cp) in &a {
                    for (q, cq) in &b {
                        out.add_term(key(&[*p as u32, *q as u32]), &x.conj() * &(cp * cq));
                    }
                }
            });
            (labels(i), l, r)
        }));
        rep.record("hopf.coproduct-star", "coproduct-star", starw);

        let mut epsw = None;
        'o2: for i in 0..d {
            for j in 0..d {
                let l = self.eps(self.alg.mul_basis(i, j));
                let r = &self.counit[i] * &self.counit[j];
                if l != r {
                    epsw = Some(Witness::new(format!("({},{})", labels(i), labels(j)), l, r));
                    break 'o2;
                }
            }
        }
        if epsw.is_none() && !self.eps(&one).is_one() {
            epsw = Some(Witness::new("1", self.eps(&one), Scalar::one()));
        }
        if epsw.is_none() {
            epsw = (0..d).find_map(|i| {
                let l = self.eps(&self.alg.star_of(&unit(i)));
                let r = self.counit[i].conj();
                (l != r).then(|| Witness::new(format!("{}*", labels(i)), l, r))
            });
        }
        if epsw.is_none() {
            epsw = (0..d).find_map(|i| {
                (self.alg.deg[i] > 0 && !self.counit[i].is_zero())
                    .then(|| Witness::new(labels(i), self.counit[i].clone(), Scalar::zero()))
            });
        }
        rep.record("hopf.counit-character", "counit-character", epsw);

        let antip = (0..d).find_map(|i| {
            let expect: SVec = self.alg.unit.iter().map(|(k, x)| (*k, x * &self.counit[i])).filter(|(_, x)| !x.is_zero()).collect();
            let mut l = SVec::new();
            let mut r = SVec::new();
            for (k, x) in self.coprod[i].iter() {
                let a = unit(k[0] as usize);
                let b = unit(k[1] as usize);
                crate::linalg::axpy(&mut l, x, &self.alg.mul(&self.kappa(&a), &b));
                crate::linalg::axpy(&mut r, x, &self.alg.mul(&a, &self.kappa(&b)));
            }
            if l != expect {
                Some(Witness::new(format!("m(κ⊗id)φ({})", labels(i)), self.show(&l), self.show(&expect)))
            } else if r != expect {
                Some(Witness::new(format!("m(id⊗κ)φ({})", labels(i)), self.show(&r), self.show(&expect)))
            } else {
                None
            }
        });
        rep.record("hopf.antipode", "antipode", antip);

        let kstar = (0..d).find_map(|i| {
            let e = unit(i);
            let v = self.kappa(&self.alg.star_of(&self.kappa(&self.alg.star_of(&e))));
            (v != e).then(|| Witness::new(labels(i), self.show(&v), self.show(&e)))
        });
        rep.record("hopf.antipode-star", "antipode-star", kstar);
        rep
    }

    /// Axioms plus antipode invertibility and Haar invariance.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let mut rep = self.validate_axioms();
        let inv = (0..d).find_map(|i| {
            let v = self.kappa_inv(&self.kappa(&unit(i)));
            (v != unit(i)).then(|| Witness::new(self.label(i), self.show(&v), self.label(i)))
        });
        rep.record("hopf.antipode-inverse", "antipode-inverse", inv);
        if let Some(h) = &self.haar {
            let one = self.alg.one();
            let mut w = (!self.haar_of(&one).is_one()).then(|| Witness::new("h(1)", self.haar_of(&one), Scalar::one()));
            if w.is_none() {
                w = (0..d).find_map(|i| {
                    let mut l = SVec::new();
                    let mut r = SVec::new();
                    for (k, x) in self.coprod[i].iter() {
                        crate::linalg::add_entry(&mut l, k[0] as usize, &(x * &h[k[1] as usize]));
                        crate::linalg::add_entry(&mut r, k[1] as usize, &(x * &h[k[0] as usize]));
                    }
                    let expect: SVec = one.iter().map(|(k, x)| (*k, x * &h[i])).filter(|(_, x)| !x.is_zero()).collect();
                    (l != expect || r != expect).then(|| Witness::new(self.label(i), self.show(&l), self.show(&expect)))
                });
            }
            rep.record("hopf.haar-invariance", "haar", w);
        }
        rep
    }

    /// Solve left and right invariance; the solution space must be a line.
    pub fn compute_haar(&self) -> Result<Vec<Scalar>> {
        let d = self.dim();
        // unknowns h_0..h_{d-1}; one equation per (a, slot k, side)
        let mut rows: Vec<SVec> = Vec::new();
        for a in 0..d {
            for side in 0..2 {
                let mut eq = vec![SVec::new(); d];
                for (k, x) in self.coprod[a].iter() {
                    let (keep, integrate) = if side == 0 { (k[0], k[1]) } else { (k[1], k[0]) };
                    crate::linalg::add_entry(&mut eq[keep as usize], integrate as usize, x);
                }
                for (k, x) in &self.alg.unit {
                    crate::linalg::add_entry(&mut eq[*k], a, &-x);
                }
                rows.extend(eq.into_iter().filter(|r| !r.is_empty()));
            }
        }
        // columns of the system matrix, for the kernel computation
        let mut cols = vec![SVec::new(); d];
        for (r, row) in rows.iter().enumerate() {
            for (j, x) in row {
                cols[*j].insert(r, x.clone());
            }
        }
        let ker = kernel_of_columns(&cols);
        match ker.len() {
            0 => return Err(Error::NoHaar),
            1 => {}
            n => return Err(Error::NonUniqueHaar(n)),
        }
        let v = &ker[0];
        let mut norm = Scalar::zero();
        for (k, x) in &self.alg.unit {
            norm += &(x * &v.get(k).cloned().unwrap_or_default());
        }
        let inv = norm.inv().ok_or(Error::NoHaar)?;
        Ok((0..d).map(|i| &v.get(&i).cloned().unwrap_or_default() * &inv).collect())
    }

    /// `ad(a) = a⁽²⁾ ⊗ κ(a⁽¹⁾) a⁽³⁾`.
    pub fn adjoint(&self, i: usize) -> Tensor {
        let c = &self.coprod[i];
        let triple = Self::slot_map(c, 1, |j| self.coprod[j as usize].clone());
        triple.flat_map(|k, x, out| {
            let prod = self.alg.mul(&self.kappa(&unit(k[0] as usize)), &unit(k[2] as usize));
            for (p, cp) in &prod {
                out.add_term(key(&[k[1], *p as u32]), x * cp);
            }
        })
    }

    pub fn adjoint_of(&self, a: &SVec) -> Tensor {
        let mut out = Tensor::zero();
        for (i, x) in a {
            out.add_scaled(&self.adjoint(*i), x);
        }
        out
    }

    /// `(ad ⊗ id) ad = (id ⊗ φ) ad` on basis elements.
    pub fn adjoint_is_coaction(&self) -> Option<Witness> {
        crate::report::first_mismatch((0..self.dim()).map(|i| {
            let ad = self.adjoint(i);
            let l = Self::slot_map(&ad, 0, |j| self.adjoint(j as usize));
            let r = Self::slot_map(&ad, 1, |j| self.coprod[j as usize].clone());
            (self.label(i).to_string(), l, r)
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub names: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(input("group table has the wrong shape"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| input("group table has no identity"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(input(format!("group table is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| mul[g][h] == identity && mul[h][g] == identity))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| input("group table has an element without inverse"))?;
        Ok(GroupTable { names, mul, identity, inverse })
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable::new(names, mul).expect("cyclic group")
    }

    /// Permutations of three letters in lexicographic order of their images.
    pub fn s3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let names = ["e", "s12", "s01", "c012", "c021", "s02"].iter().map(|s| s.to_string()).collect();
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
        // (pq)(x) = p(q(x))
        let mul = perms.iter().map(|p| perms.iter().map(|q| idx([p[q[0]], p[q[1]], p[q[2]]])).collect()).collect();
        GroupTable::new(names, mul).expect("S3")
    }

    pub fn trivial() -> Self {
        GroupTable::cyclic(1)
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "Z1" | "trivial" => Ok(Self::trivial()),
            "Z2" => Ok(Self::cyclic(2)),
            "Z3" => Ok(Self::cyclic(3)),
            "S3" => Ok(Self::s3()),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    /// Order of an element.
    fn order_of(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul[x][g];
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Direct product of `n` copies (the group of maps from an `n`-point set).
    pub fn power(&self, n: usize) -> Self {
        let g = self.order();
        let size = g.pow(n as u32);
        let digits = |mut x: usize| -> Vec<usize> {
            (0..n).map(|_| {
                let d = x % g;
                x /= g;
                d
            }).collect()
        };
        let names = (0..size).map(|x| digits(x).iter().map(|&d| self.names[d].as_str()).collect::<Vec<_>>().join(",")).collect();
        let mul = (0..size)
            .map(|a| {
                let da = digits(a);
                (0..size)
                    .map(|b| digits(b).iter().zip(&da).rev().fold(0, |acc, (&y, &x)| acc * g + self.mul[x][y]))
                    .collect()
            })
            .collect();
        GroupTable::new(names, mul).expect("direct product")
    }

    /// Brute-force isomorphism search by backtracking over images.
    pub fn isomorphic_to(&self, other: &GroupTable) -> bool {
        let n = self.order();
        if n != other.order() {
            return false;
        }
        let orders = |t: &GroupTable| -> Vec<usize> {
            let mut v: Vec<usize> = (0..t.order()).map(|g| t.order_of(g)).collect();
            v.sort();
            v
        };
        if orders(self) != orders(other) {
            return false;
        }
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        self.extend_iso(other, 0, &mut image, &mut used)
    }

    fn extend_iso(&self, other: &GroupTable, g: usize, image: &mut [usize], used: &mut [bool]) -> bool {
        let n = self.order();
        if g == n {
            return true;
        }
        for h in 0..n {
            if used[h] || self.order_of(g) != other.order_of(h) {
                continue;
            }
            image[g] = h;
            let consistent = (0..=g).all(|a| {
                [(a, g), (g, a)].iter().all(|&(x, y)| {
                    let p = self.mul[x][y];
                    p > g || image[p] == other.mul[image[x]][image[y]]
                })
            });
            if consistent {
                used[h] = true;
                if self.extend_iso(other, g + 1, image, used) {
                    return true;
                }
                used[h] = false;
            }
        }
        image[g] = usize::MAX;
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopfKind {
    FunctionAlgebra,
    GroupAlgebra,
}

/// Character table for the shipped groups, as functions on group elements.
/// Cyclic groups use powers of a primitive root of unity of their order.
fn group_characters(t: &GroupTable) -> Option<Vec<(String, usize, Vec<Scalar>)>> {
    let n = t.order();
    if t.is_abelian() {
        // cyclic presets only: find a generator
        let gen = (0..n).find(|&g| t.order_of(g) == n)?;
        let mut power = vec![0usize; n];
        let mut x = t.identity;
        for k in 0..n {
            power[x] = k;
            x = t.mul[x][gen];
        }
        return Some(
            (0..n)
                .map(|j| {
                    let chi = (0..n).map(|g| Scalar::root_of_unity(n as u32, (j * power[g]) as i64)).collect();
                    (if j == 0 { "triv".to_string() } else { format!("chi{j}") }, 1, chi)
                })
                .collect(),
        );
    }
    if n == 6 {
        let ord: Vec<usize> = (0..n).map(|g| t.order_of(g)).collect();
        let sgn = ord.iter().map(|&o| Scalar::from_int(if o == 2 { -1 } else { 1 })).collect();
        let std = ord.iter().map(|&o| Scalar::from_int(match o { 1 => 2, 2 => 0, _ => -1 })).collect();
        return Some(vec![
            ("triv".into(), 1, vec![Scalar::one(); n]),
            ("sign".into(), 1, sgn),
            ("standard".into(), 2, std),
        ]);
    }
    None
}

pub fn gen_from_group_table(t: &GroupTable, kind: HopfKind) -> Result<Hopf> {
    let n = t.order();
    let d = n;
    let mut mult = vec![SVec::new(); d * d];
    let mut coprod = vec![Tensor::zero(); d];
    let mut counit = vec![Scalar::zero(); d];
    let mut kappa = vec![SVec::new(); d];
    let mut star = vec![SVec::new(); d];
    let unit_v: SVec;
    let labels: Vec<String>;
    match kind {
        HopfKind::FunctionAlgebra => {
            labels = t.names.iter().map(|g| format!("d_{g}")).collect();
            for g in 0..n {
                mult[g * d + g] = unit(g);
                star[g] = unit(g);
                kappa[g] = unit(t.inverse[g]);
                counit[g] = if g == t.identity { Scalar::one() } else { Scalar::zero() };
            }
            for x in 0..n {
                for y in 0..n {
                    coprod[t.mul[x][y]].add_term(key(&[x as u32, y as u32]), Scalar::one());
                }
            }
            unit_v = (0..n).map(|g| (g, Scalar::one())).collect();
        }
        HopfKind::GroupAlgebra => {
            labels = t.names.clone();
            for g in 0..n {
                for h in 0..n {
                    mult[g * d + h] = unit(t.mul[g][h]);
                }
                star[g] = unit(t.inverse[g]);
                kappa[g] = unit(t.inverse[g]);
                counit[g] = Scalar::one();
                coprod[g] = Tensor::pure(&[g as u32, g as u32]);
            }
            unit_v = unit(t.identity);
        }
    }
    let space = BasedSpace::new(labels)?;
    let star = LinearMap::new(d, d, star)?.antilinear();
    let alg = Algebra::ungraded(space, mult, unit_v, star)?;
    let h = Hopf::build(alg, coprod, counit, LinearMap::new(d, d, kappa)?)?;
    let irreps = match kind {
        HopfKind::FunctionAlgebra => group_characters(t).map(|chars| {
            chars
                .into_iter()
                .map(|(name, dim, chi)| Irrep {
                    name,
                    dim,
                    character: chi.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect(),
                })
                .collect()
        }),
        HopfKind::GroupAlgebra => {
            Some((0..n).map(|g| Irrep { name: t.names[g].clone(), dim: 1, character: unit(g) }).collect())
        }
    };
    Ok(match irreps {
        Some(ir) => h.with_irreps(ir),
        None => h,
    })
}

/// Preset by name: `C(Z2)`-style function algebras are `fun`, group
/// algebras are `alg`.
pub fn preset(group: &str, kind: HopfKind) -> Result<Hopf> {
    gen_from_group_table(&GroupTable::preset(group)?, kind)
}

/// Conductor needed to write the preset's characters.
pub fn preset_conductor(group: &str) -> u32 {
    match group {
        "Z3" | "S3" => 3,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fun(g: &str) -> Hopf {
        preset(g, HopfKind::FunctionAlgebra).unwrap()
    }
    fn alg(g: &str) -> Hopf {
        preset(g, HopfKind::GroupAlgebra).unwrap()
    }

    #[test]
    fn presets_validate() {
        for h in [fun("Z1"), fun("Z2"), fun("Z3"), fun("S3"), alg("Z1"), alg("Z2"), alg("Z3"), alg("S3")] {
            let rep = h.validate();
            assert!(rep.all_pass(), "{}", rep.to_text());
            assert!(h.adjoint_is_coaction().is_none());
            // κ² = id for commutative or cocommutative presets
            assert!(h.antipode.compose(&h.antipode).unwrap().is_identity());
        }
    }

    #[test]
    fn haar_matches_oracles() {
        // group average on function algebras
        for g in ["Z2", "Z3", "S3"] {
            let h = fun(g);
            let n = h.dim() as i64;
            assert!(h.haar.as_ref().unwrap().iter().all(|x| *x == Scalar::from_frac(1, n)));
        }
        // identity coefficient on group algebras
        for g in ["Z2", "S3"] {
            let h = alg(g);
            let t = GroupTable::preset(g).unwrap();
            for (i, x) in h.haar.as_ref().unwrap().iter().enumerate() {
                assert_eq!(*x, if i == t.identity { Scalar::one() } else { Scalar::zero() });
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let h = fun("Z2");
        // ad(δ_g) = δ_g ⊗ 1
        let ad = h.adjoint(1);
        let mut expect = Tensor::zero();
        expect.add_term(key(&[1, 0]), Scalar::one());
        expect.add_term(key(&[1, 1]), Scalar::one());
        assert_eq!(ad, expect);
        for h in [fun("S3"), alg("S3")] {
            let ad1 = h.adjoint_of(&h.alg.one());
            assert_eq!(ad1, Tensor::from_svec(&h.alg.one()).kron(&Tensor::from_svec(&h.alg.one())));
        }
        // group algebra: ad(g) = g ⊗ 1
        let h = alg("S3");
        for g in 0..6 {
            assert_eq!(h.adjoint(g), Tensor::pure(&[g as u32, 0]));
        }
    }

    #[test]
    fn commutativity() {
        assert!(fun("S3").alg.is_commutative());
        let w = alg("S3").alg.commutativity_witness().unwrap();
        let t = GroupTable::s3();
        assert_ne!(t.mul[w.0][w.1], t.mul[w.1][w.0]);
        assert_eq!(alg("Z1").dim(), 1);
        assert_eq!(fun("Z1").dim(), 1);
    }

    #[test]
    fn broken_antipode_rejected() {
        let h = fun("Z2");
        let r = Hopf::build(h.alg.clone(), h.coprod.clone(), h.counit.clone(), LinearMap::zero(2, 2));
        match r {
            Err(Error::InvalidHopf(msg)) => assert!(msg.contains("antipode"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn s3_irreps_are_orthonormal() {
        let h = fun("S3");
        let irreps = h.irreps.clone().unwrap();
        let dims: Vec<usize> = irreps.iter().map(|i| i.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        for a in &irreps {
            for b in &irreps {
                // h(conj(χ_a) χ_b) = δ_ab
                let conj_a: SVec = a.character.iter().map(|(k, x)| (*k, x.conj())).collect();
                let v = h.haar_of(&h.alg.mul(&conj_a, &b.character));
                assert_eq!(v, if a.name == b.name { Scalar::one() } else { Scalar::zero() });
            }
        }
    }

    #[test]
    fn invalid_tables() {
        assert!(GroupTable::new(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(matches!(GroupTable::preset("Q8"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn group_isomorphism() {
        let z2 = GroupTable::cyclic(2);
        let v4 = z2.power(2);
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        assert!(!v4.isomorphic_to(&GroupTable::cyclic(4)));
        assert!(!GroupTable::cyclic(6).isomorphic_to(&GroupTable::s3()));
        assert!(GroupTable::s3().isomorphic_to(&GroupTable::s3()));
        // relabelled Z3
        let t = GroupTable::new(
            vec!["x".into(), "e".into(), "y".into()],
            vec![vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]],
        )
        .unwrap();
        assert!(t.isomorphic_to(&GroupTable::cyclic(3)));
    }
}
