//! Finite-dimensional graded *-algebras given by structure constants.
//! Ungraded algebras are the special case with every degree zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{input, Error, Result};
use crate::linalg::{add_entry, axpy, conj_vec, BasedSpace, Echelon, LinearMap, SVec};
use crate::report::{ValidationReport, Witness};
use crate::scalar::Scalar;
use crate::tensor::sign;

#[derive(Clone, Debug)]
pub struct Algebra {
    pub space: BasedSpace,
    pub deg: Vec<u8>,
    mult: Vec<SVec>,
    pub unit: SVec,
    /// Antilinear involution, `(ab)* = (−1)^{∂a∂b} b*a*`.
    pub star: LinearMap,
    /// Optional differential of degree one.
    pub diff: Option<LinearMap>,
}

impl Algebra {
    /// `mult[i * dim + j]` is the product of basis elements `i` and `j`.
    pub fn new(space: BasedSpace, deg: Vec<u8>, mult: Vec<SVec>, unit: SVec, star: LinearMap) -> Result<Self> {
        let d = space.dim();
        if deg.len() != d {
            return Err(input(format!("{} degrees for a basis of {d} elements", deg.len())));
        }
        if mult.len() != d * d {
            return Err(input(format!("multiplication table has {} entries, expected {}", mult.len(), d * d)));
        }
        for (ij, v) in mult.iter().enumerate() {
            if let Some(k) = v.keys().find(|&&k| k >= d) {
                return Err(input(format!("product of {} and {} has index {k} out of range", ij / d, ij % d)));
            }
        }
        if unit.keys().any(|&k| k >= d) {
            return Err(input("unit has index out of range"));
        }
        if star.dom != d || star.cod != d {
            return Err(input("star has the wrong shape"));
        }
        let star = if star.antilinear { star } else { star.antilinear() };
        Ok(Algebra { space, deg, mult, unit, star, diff: None })
    }

    pub fn with_diff(mut self, d: LinearMap) -> Result<Self> {
        if d.dom != self.dim() || d.cod != self.dim() {
            return Err(input("differential has the wrong shape"));
        }
        self.diff = Some(d);
        Ok(self)
    }

    pub fn ungraded(space: BasedSpace, mult: Vec<SVec>, unit: SVec, star: LinearMap) -> Result<Self> {
        let d = space.dim();
        Self::new(space, vec![0; d], mult, unit, star)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SVec {
        &self.mult[i * self.dim() + j]
    }

    pub fn mul(&self, a: &SVec, b: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, x) in a {
            for (j, y) in b {
                axpy(&mut out, &(x * y), self.mul_basis(*i, *j));
            }
        }
        out
    }

    pub fn star_of(&self, a: &SVec) -> SVec {
        self.star.apply(a)
    }

    pub fn d_of(&self, a: &SVec) -> SVec {
        self.diff.as_ref().map(|d| d.apply(a)).unwrap_or_default()
    }

    pub fn one(&self) -> SVec {
        self.unit.clone()
    }

    pub fn is_graded(&self) -> bool {
        self.deg.iter().any(|&g| g > 0)
    }

    pub fn max_degree(&self) -> u8 {
        self.deg.iter().copied().max().unwrap_or(0)
    }

    /// Homogeneous degree of a vector, if it has one.
    pub fn degree_of(&self, a: &SVec) -> Option<u8> {
        let mut it = a.keys().map(|&k| self.deg[k]);
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    /// Pairs of basis indices that fail to (graded-)commute.
    pub fn commutativity_witness(&self) -> Option<(usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in i + 1..d {
                let s = sign(self.deg[i] % 2 == 1 && self.deg[j] % 2 == 1);
                let lhs = self.mul_basis(i, j);
                let rhs: SVec = self.mul_basis(j, i).iter().map(|(k, x)| (*k, &s * x)).collect();
                if *lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    fn show(&self, v: &SVec) -> String {
        show_vec(v, &self.space)
    }

    /// Associativity, unit laws, and the star axioms on all basis elements.
    pub fn validate(&self, prefix: &str) -> ValidationReport {
        let d = self.dim();
        let mut rep = ValidationReport::new();
        let mut assoc = None;
        'outer: for i in 0..d {
            for j in 0..d {
                let ij = self.mul_basis(i, j);
                for k in 0..d {
                    let l = self.mul(ij, &crate::linalg::unit(k));
                    let r = self.mul(&crate::linalg::unit(i), self.mul_basis(j, k));
                    if l != r {
                        assoc = Some(Witness::new(
                            format!("({},{},{})", self.space.label(i), self.space.label(j), self.space.label(k)),
                            self.show(&l),
                            self.show(&r),
                        ));
                        break 'outer;
                    }
                }
            }
        }
        rep.record(&format!("{prefix}.associativity"), "associativity", assoc);
        let unit_fail = (0..d).find_map(|i| {
            let e = crate::linalg::unit(i);
            let l = self.mul(&self.unit, &e);
            let r = self.mul(&e, &self.unit);
            (l != e || r != e).then(|| Witness::new(self.space.label(i), self.show(&l), self.show(&r)))
        });
        rep.record(&format!("{prefix}.unit"), "unit", unit_fail);
        let invol = (0..d).find_map(|i| {
            let e = crate::linalg::unit(i);
            let back = self.star_of(&self.star_of(&e));
            (back != e).then(|| Witness::new(self.space.label(i), self.show(&back), self.show(&e)))
        });
        rep.record(&format!("{prefix}.star-involutive"), "star-involutive", invol);
        let mut anti = None;
        'o2: for i in 0..d {
            for j in 0..d {
                let l = self.star_of(self.mul_basis(i, j));
                let s = sign(self.deg[i] % 2 == 1 && self.deg[j] % 2 == 1);
                let r0 = self.mul(&self.star_of(&crate::linalg::unit(j)), &self.star_of(&crate::linalg::unit(i)));
                let r: SVec = r0.iter().map(|(k, x)| (*k, &s * x)).collect();
                if l != r {
                    anti = Some(Witness::new(
                        format!("({},{})", self.space.label(i), self.space.label(j)),
                        self.show(&l),
                        self.show(&r),
                    ));
                    break 'o2;
                }
            }
        }
        rep.record(&format!("{prefix}.star-antimultiplicative"), "star-antimultiplicative", anti);
        rep
    }

    /// Restriction to the basis elements `keep`, dropping every component
    /// outside them. This is the quotient algebra when the dropped elements
    /// span an ideal stable under the star and the differential.
    pub fn truncate(&self, keep: &[usize]) -> Algebra {
        let pos: std::collections::HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let map = |v: &SVec| -> SVec { v.iter().filter_map(|(k, c)| pos.get(k).map(|&i| (i, c.clone()))).collect() };
        let n = keep.len();
        let mut mult = Vec::with_capacity(n * n);
        for &i in keep {
            for &j in keep {
                mult.push(map(self.mul_basis(i, j)));
            }
        }
        let star = LinearMap { dom: n, cod: n, cols: keep.iter().map(|&i| map(&self.star.cols[i])).collect(), antilinear: true };
        let diff = self.diff.as_ref().map(|d| LinearMap { dom: n, cod: n, cols: keep.iter().map(|&i| map(&d.cols[i])).collect(), antilinear: false });
        let labels = keep.iter().map(|&i| self.space.label(i).to_string()).collect();
        Algebra {
            space: BasedSpace::new(labels).expect("unique labels"),
            deg: keep.iter().map(|&i| self.deg[i]).collect(),
            mult,
            unit: map(&self.unit),
            star,
            diff,
        }
    }

    /// Tensor product algebra with Koszul signs, basis `(i, j) ↦ i * dim(other) + j`.
    pub fn graded_tensor(&self, other: &Algebra) -> Algebra {
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let labels = (0..da)
            .flat_map(|i| (0..db).map(move |j| (i, j)))
            .map(|(i, j)| format!("{}|{}", self.space.label(i), other.space.label(j)))
            .collect();
        let deg = (0..d).map(|p| self.deg[p / db] + other.deg[p % db]).collect();
        let mut mult = vec![SVec::new(); d * d];
        for p in 0..d {
            let (a, b) = (p / db, p % db);
            for q in 0..d {
                let (c, e) = (q / db, q % db);
                let s = sign(other.deg[b] % 2 == 1 && self.deg[c] % 2 == 1);
                let mut v = SVec::new();
                for (x, cx) in self.mul_basis(a, c) {
                    for (y, cy) in other.mul_basis(b, e) {
                        add_entry(&mut v, x * db + y, &(&s * &(cx * cy)));
                    }
                }
                mult[p * d + q] = v;
            }
        }
        let mut unit = SVec::new();
        for (x, cx) in &self.unit {
            for (y, cy) in &other.unit {
                add_entry(&mut unit, x * db + y, &(cx * cy));
            }
        }
        let cols = (0..d)
            .map(|p| {
                let (a, b) = (p / db, p % db);
                let mut v = SVec::new();
                for (x, cx) in &self.star.cols[a] {
                    for (y, cy) in &other.star.cols[b] {
                        add_entry(&mut v, x * db + y, &(cx * cy));
                    }
                }
                v
            })
            .collect();
        let star = LinearMap { dom: d, cod: d, cols, antilinear: true };
        Algebra { space: BasedSpace::new(labels).expect("unique labels"), deg, mult, unit, star, diff: None }
    }
}

/// A point of a commutative split semisimple algebra: its minimal idempotent
/// and the character values on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub idempotent: SVec,
    pub values: Vec<Scalar>,
}

impl Algebra {
    /// Points of a commutative algebra whose characters take values that are
    /// rational or roots of unity, found
    /// by repeatedly splitting idempotents along minimal polynomials of the
    /// basis elements.
    pub fn points(&self) -> Result<Vec<Point>> {
        if let Some((i, j)) = self.commutativity_witness() {
            return Err(Error::NotCommutative(format!("{} and {} do not commute", self.space.label(i), self.space.label(j))));
        }
        let mut blocks = vec![self.one()];
        for i in 0..self.dim() {
            let a = crate::linalg::unit(i);
            let mut next = Vec::new();
            for e in blocks {
                let poly = self.min_poly(&a, &e);
                let roots = split_roots(&poly);
                if roots.len() + 1 != poly.len() {
                    return Err(input(format!(
                        "{} is not diagonalisable with rational or root-of-unity eigenvalues",
                        self.space.label(i)
                    )));
                }
                if roots.len() == 1 {
                    next.push(e);
                    continue;
                }
                for (j, lj) in roots.iter().enumerate() {
                    let mut f = e.clone();
                    for (k, lk) in roots.iter().enumerate() {
                        if k == j {
                            continue;
                        }
                        // f ← f (a − λ_k) / (λ_j − λ_k)
                        let mut g = self.mul(&a, &f);
                        axpy(&mut g, &-lk, &f);
                        let c = (lj - lk).inv().expect("distinct roots");
                        f = g.iter().map(|(x, y)| (*x, y * &c)).collect();
                    }
                    next.push(f);
                }
            }
            blocks = next;
        }
        let points: Vec<Point> = blocks
            .into_iter()
            .map(|e| {
                let (&p, lead) = e.iter().next().expect("nonzero idempotent");
                let lead_inv = lead.inv().expect("nonzero");
                let values = (0..self.dim())
                    .map(|i| {
                        let ae = self.mul(&crate::linalg::unit(i), &e);
                        scalar_of(&ae, p) * &lead_inv
                    })
                    .collect();
                Point { idempotent: e, values }
            })
            .collect();
        if points.len() != self.dim() {
            return Err(input(format!("algebra of dimension {} has {} points; it is not semisimple", self.dim(), points.len())));
        }
        for pt in &points {
            for i in 0..self.dim() {
                let ae = self.mul(&crate::linalg::unit(i), &pt.idempotent);
                if ae != crate::linalg::scaled(&pt.idempotent, &pt.values[i]) {
                    return Err(input("algebra is not semisimple"));
                }
            }
        }
        Ok(points)
    }

    /// Monic minimal polynomial of `a` acting on `e·A`, from the first
    /// dependence in `e, ae, a²e, …` (coefficients, constant first).
    fn min_poly(&self, a: &SVec, e: &SVec) -> Vec<Scalar> {
        let mut ech = Echelon::new();
        let mut v = e.clone();
        for m in 0.. {
            match ech.insert_tracked(v.clone(), crate::linalg::unit(m)) {
                Ok(_) => v = self.mul(a, &v),
                Err(rel) => {
                    let lead = scalar_of(&rel, m).inv().expect("relation involves the newest power");
                    return (0..=m).map(|k| scalar_of(&rel, k) * &lead).collect();
                }
            }
        }
        unreachable!()
    }
}

/// Distinct roots of a polynomial (constant term first) that are rational
/// or roots of unity, together with a last root left over after dividing
/// those out. Rational roots come first, then `ζ_m^k` by `(m, k)`.
pub fn split_roots(poly: &[Scalar]) -> Vec<Scalar> {
    let mut roots = rational_roots(poly).unwrap_or_default();
    let deg = poly.len().saturating_sub(1);
    let eval = |x: &Scalar| poly.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c);
    // roots of unity of a rational polynomial have φ(m) ≤ deg, so m ≤ 2 deg²;
    // otherwise allow the roots of unity of the coefficient field
    let field = poly.iter().map(Scalar::conductor).fold(1, num_integer::lcm) as usize;
    let bound = (2 * deg * deg).max(2 * field).max(2);
    for m in 1..=bound as u32 {
        if roots.len() == deg {
            break;
        }
        if crate::scalar::euler_phi(m) > deg && (2 * field) % m as usize != 0 {
            continue;
        }
        for k in (0..m as i64).filter(|&k| num_integer::gcd(k, m as i64) == 1) {
            let z = Scalar::root_of_unity(m, k);
            if !roots.contains(&z) && eval(&z).is_zero() {
                roots.push(z);
            }
        }
    }
    if roots.len() + 1 == deg {
        // deflate: the quotient is linear
        let mut q = poly.to_vec();
        for r in &roots {
            let mut out = vec![Scalar::zero(); q.len() - 1];
            let mut carry = Scalar::zero();
            for i in (1..q.len()).rev() {
                carry = &(&carry * r) + &q[i];
                out[i - 1] = carry.clone();
            }
            q = out;
        }
        let root = -(&q[0] * &q[1].inv().expect("monic"));
        if !roots.contains(&root) {
            roots.push(root);
        }
    }
    roots
}

/// Distinct rational roots of a polynomial with rational coefficients
/// (constant term first); `None` if a coefficient is irrational.
pub fn rational_roots(poly: &[Scalar]) -> Option<Vec<Scalar>> {
    let coeffs: Vec<BigRational> = poly.iter().map(|c| c.as_rational()).collect::<Option<_>>()?;
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    while ints.last().is_some_and(|c| c.is_zero()) {
        ints.pop();
    }
    let mut roots = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        if roots.is_empty() {
            roots.push(BigRational::zero());
        }
        ints.remove(0);
    }
    if ints.len() > 1 {
        let eval = |x: &BigRational| {
            ints.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
        };
        for p in divisors(&ints[0]) {
            for q in divisors(ints.last().expect("nonempty")) {
                for s in [1, -1] {
                    let x = BigRational::new(BigInt::from(s) * &p, q.clone());
                    if eval(&x).is_zero() && !roots.contains(&x) {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots.into_iter().map(Scalar::from_rational).collect())
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

pub fn show_vec(v: &SVec, space: &BasedSpace) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|(k, x)| format!("({x})*{}", space.label(*k))).collect::<Vec<_>>().join(" + ")
}

/// Complex conjugate of the coordinates (not the algebra star).
pub fn conj(v: &SVec) -> SVec {
    conj_vec(v)
}

pub fn scalar_of(v: &SVec, i: usize) -> Scalar {
    v.get(&i).cloned().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{preset, HopfKind};

    #[test]
    fn roots() {
        // (x − 1)(x + 1/2) x = x³ − x²/2 − x/2
        let p = [Scalar::zero(), Scalar::from_frac(-1, 2), Scalar::from_frac(-1, 2), Scalar::one()];
        let r = rational_roots(&p).unwrap();
        assert_eq!(r, vec![Scalar::from_frac(-1, 2), Scalar::zero(), Scalar::one()]);
        // x² + 1 has no rational roots
        assert!(rational_roots(&[Scalar::one(), Scalar::zero(), Scalar::one()]).unwrap().is_empty());
    }

    #[test]
    fn points_of_function_algebra() {
        let h = preset("S3", HopfKind::FunctionAlgebra).unwrap();
        let pts = h.alg.points().unwrap();
        assert_eq!(pts.len(), 6);
        for p in &pts {
            // each point is a delta function
            assert_eq!(p.idempotent.len(), 1);
            assert_eq!(p.values.iter().filter(|v| v.is_one()).count(), 1);
        }
    }

    #[test]
    fn points_of_group_algebra_z2() {
        // ℂ[Z2] ≅ ℂ², idempotents (e ± g)/2
        let h = preset("Z2", HopfKind::GroupAlgebra).unwrap();
        let pts = h.alg.points().unwrap();
        assert_eq!(pts.len(), 2);
        let half = Scalar::from_frac(1, 2);
        let mut found: Vec<SVec> = pts.iter().map(|p| p.idempotent.clone()).collect();
        found.sort_by_key(|v| format!("{v:?}"));
        let mut want = vec![
            SVec::from([(0, half.clone()), (1, half.clone())]),
            SVec::from([(0, half.clone()), (1, -&half)]),
        ];
        want.sort_by_key(|v| format!("{v:?}"));
        assert_eq!(found, want);
        assert!(preset("S3", HopfKind::GroupAlgebra).unwrap().alg.points().is_err());
    }

    #[test]
    fn split_roots_finds_roots_of_unity() {
        // x³ − 1 and x² + x + 1 over Q(ζ₃); x² − 2 does not split
        let p = |cs: &[i64]| cs.iter().map(|&c| Scalar::from_int(c)).collect::<Vec<_>>();
        let r = split_roots(&p(&[-1, 0, 0, 1]));
        assert_eq!(r, vec![Scalar::one(), Scalar::root_of_unity(3, 1), Scalar::root_of_unity(3, 2)]);
        assert_eq!(split_roots(&p(&[1, 1, 1])).len(), 2);
        assert!(split_roots(&p(&[-2, 0, 1])).is_empty());
        assert_eq!(split_roots(&p(&[0, 1])), vec![Scalar::zero()]);
        // x − ζ₃ and x² + 3, whose roots ±(1 + 2ζ₃) are not roots of unity
        let z = Scalar::root_of_unity(3, 1);
        assert_eq!(split_roots(&[-z.clone(), Scalar::one()]), vec![z.clone()]);
        let s = &Scalar::one() + &(&z + &z);
        let r = split_roots(&[s.clone(), Scalar::one()]);
        assert_eq!(r, vec![-s.clone()]);
    }
}
