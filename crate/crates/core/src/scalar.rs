//! Exact elements of cyclotomic fields `Q(z)`, `z` a primitive n-th root of unity.
//!
//! A value is stored as rational coefficients of `1, z, ..., z^(phi(n)-1)`
//! after reduction modulo the n-th cyclotomic polynomial. Purely rational
//! values always carry conductor 1, so mixing a rational with an element of
//! any field is free. Two non-rational values of different conductors are
//! embedded into the field of the least common multiple.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Scalar {
    n: u32,
    c: Vec<BigRational>,
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by all proper divisor polynomials
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &den);
        }
    }
    let p = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(n, p.clone());
    p
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let coef = rem[i + dd] / lead;
        q[i] = coef;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= coef * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

fn gcd(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { n: 1, c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            Scalar { n: 1, c: vec![r] }
        }
    }

    /// `z^k` in the field of conductor `n`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let n = n.max(1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut c = vec![BigRational::zero(); n as usize];
        c[e] = BigRational::one();
        Self::reduce_full(n, c)
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.c
    }

    /// Reduce a length-`n` (or shorter) coefficient vector modulo the cyclotomic polynomial.
    fn reduce_full(n: u32, mut c: Vec<BigRational>) -> Self {
        if n == 1 {
            let s: BigRational = c.into_iter().fold(BigRational::zero(), |a, b| a + b);
            return Self::from_rational(s);
        }
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        // reduce powers >= n first using z^n = 1
        if c.len() > n as usize {
            let extra: Vec<BigRational> = c.drain(n as usize..).collect();
            for (i, v) in extra.into_iter().enumerate() {
                let idx = (n as usize + i) % n as usize;
                c[idx] += v;
            }
        }
        // long division by the monic cyclotomic polynomial
        for i in (deg..c.len()).rev() {
            if c[i].is_zero() {
                continue;
            }
            let coef = c[i].clone();
            for (j, &pj) in phi.iter().enumerate() {
                if pj != 0 {
                    c[i - deg + j] -= &coef * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        c.truncate(deg);
        while c.last().map_or(false, |v| v.is_zero()) {
            c.pop();
        }
        if c.len() <= 1 {
            Scalar { n: 1, c }
        } else {
            Scalar { n, c }
        }
    }

    fn embed(&self, m: u32) -> Vec<BigRational> {
        // coefficients as a length-m vector in powers of a primitive m-th root
        if self.n == 1 || self.c.len() <= 1 {
            let mut v = vec![BigRational::zero(); m as usize];
            if let Some(r) = self.c.first() {
                v[0] = r.clone();
            }
            return v;
        }
        let step = (m / self.n) as usize;
        let mut v = vec![BigRational::zero(); m as usize];
        for (k, ck) in self.c.iter().enumerate() {
            v[(k * step) % m as usize] += ck;
        }
        v
    }

    fn common(&self, other: &Scalar) -> u32 {
        match (self.n, other.n) {
            (1, b) => b,
            (a, 1) => a,
            (a, b) if a == b => a,
            (a, b) => a / gcd(a, b) * b,
        }
    }

    pub fn conj(&self) -> Scalar {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n as usize;
        let mut v = vec![BigRational::zero(); n];
        for (k, ck) in self.c.iter().enumerate() {
            v[(n - k) % n] += ck;
        }
        Self::reduce_full(self.n, v)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.n == 1 {
            return Some(Self::from_rational(self.c[0].recip()));
        }
        // solve (self * x) = 1 via the multiplication matrix over Q
        let n = self.n;
        let deg = euler_phi(n);
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(deg);
        for j in 0..deg {
            let p = self * &Scalar::root_of_unity(n, j as i64);
            let mut col = p.embed_basis(n, deg);
            col.resize(deg, BigRational::zero());
            cols.push(col);
        }
        let mut rhs = vec![BigRational::zero(); deg];
        rhs[0] = BigRational::one();
        let x = solve_dense_rational(cols, rhs)?;
        let mut v = x;
        v.resize(n as usize, BigRational::zero());
        Some(Self::reduce_full(n, v))
    }

    fn embed_basis(&self, n: u32, deg: usize) -> Vec<BigRational> {
        if self.n == 1 {
            let mut v = vec![BigRational::zero(); deg];
            if let Some(r) = self.c.first() {
                v[0] = r.clone();
            }
            v
        } else {
            debug_assert_eq!(self.n, n);
            let mut v = self.c.clone();
            v.resize(deg, BigRational::zero());
            v
        }
    }

    /// Parse the scalar literal grammar: `term ("+" term)*`, where a term is
    /// `rational`, `rational*z^int` or `z^int`. A `-` between terms is accepted
    /// as shorthand for `+-`.
    pub fn parse(text: &str, conductor: u32) -> Result<Scalar> {
        let bad = || Error::BadScalarLiteral(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            let prev = bytes[i - 1];
            if bytes[i] == b'+' {
                terms.push(&s[start..i]);
                start = i + 1;
            } else if bytes[i] == b'-' && prev != b'+' && prev != b'^' && prev != b'*' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut acc = Scalar::zero();
        for t in terms {
            if t.is_empty() {
                return Err(bad());
            }
            let (coef, power) = if let Some(pos) = t.find("z^") {
                let head = &t[..pos];
                let exp: i64 = t[pos + 2..].parse().map_err(|_| bad())?;
                let coef = if head.is_empty() {
                    BigRational::one()
                } else if head == "-" {
                    -BigRational::one()
                } else {
                    let h = head.strip_suffix('*').ok_or_else(bad)?;
                    parse_rational(h).ok_or_else(bad)?
                };
                (coef, Some(exp))
            } else {
                (parse_rational(t).ok_or_else(bad)?, None)
            };
            let term = match power {
                None => Scalar::from_rational(coef),
                Some(k) => &Scalar::from_rational(coef) * &Scalar::root_of_unity(conductor.max(1), k),
            };
            acc += &term;
        }
        Ok(acc)
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let ok_int = |t: &str, allow_sign: bool| {
        let t2 = if allow_sign { t.strip_prefix('-').unwrap_or(t) } else { t };
        !t2.is_empty() && t2.bytes().all(|b| b.is_ascii_digit())
    };
    if !ok_int(num, true) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = match den {
        Some(d) => {
            if !ok_int(d, false) {
                return None;
            }
            d.parse().ok()?
        }
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

fn solve_dense_rational(cols: Vec<Vec<BigRational>>, rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    let m = cols.len();
    // row-major augmented matrix
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..m).map(|j| cols[j][i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..n).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][col].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=m {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[m].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); m];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][m].clone();
    }
    Some(x)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.n == other.n {
            return self.c == other.c;
        }
        if self.is_rational() && other.is_rational() {
            return self.c == other.c;
        }
        (self - other).is_zero()
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.n == 1 && rhs.n == 1 {
            return Scalar::from_rational(&self.c[0] + &rhs.c[0]);
        }
        if self.n == rhs.n {
            let len = self.c.len().max(rhs.c.len());
            let mut c = Vec::with_capacity(len);
            for i in 0..len {
                match (self.c.get(i), rhs.c.get(i)) {
                    (Some(a), Some(b)) => c.push(a + b),
                    (Some(a), None) => c.push(a.clone()),
                    (None, Some(b)) => c.push(b.clone()),
                    (None, None) => unreachable!(),
                }
            }
            while c.last().map_or(false, |v| v.is_zero()) {
                c.pop();
            }
            return if c.len() <= 1 { Scalar { n: 1, c } } else { Scalar { n: self.n, c } };
        }
        let m = self.common(rhs);
        let mut a = self.embed(m);
        for (x, y) in a.iter_mut().zip(rhs.embed(m)) {
            *x += y;
        }
        Scalar::reduce_full(m, a)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.n == 1 && rhs.n == 1 {
            return Scalar::from_rational(&self.c[0] * &rhs.c[0]);
        }
        if self.n == 1 || rhs.n == 1 {
            let (r, v) = if self.n == 1 { (&self.c[0], rhs) } else { (&rhs.c[0], self) };
            return Scalar { n: v.n, c: v.c.iter().map(|x| x * r).collect() };
        }
        let m = self.common(rhs);
        let (a, b) = if self.n == m && rhs.n == m {
            (self.c.clone(), rhs.c.clone())
        } else {
            (self.embed(m), rhs.embed(m))
        };
        let mu = m as usize;
        let mut out = vec![BigRational::zero(); mu];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[(i + j) % mu] += x * y;
            }
        }
        Scalar::reduce_full(m, out)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { n: self.n, c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                (&self).$f(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.is_zero() {
            return;
        }
        if self.n == 1 && rhs.n == 1 && !self.is_zero() {
            self.c[0] += &rhs.c[0];
            if self.c[0].is_zero() {
                self.c.clear();
            }
            return;
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self += &(-rhs);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, ck) in self.c.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let r = if ck.denom().is_one() { ck.numer().to_string() } else { format!("{}/{}", ck.numer(), ck.denom()) };
            match k {
                0 => write!(f, "{r}")?,
                _ if ck.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{r}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl Scalar {
    pub fn is_negative_rational(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_of_unity_reduce() {
        let z = Scalar::root_of_unity(3, 1);
        let z2 = &z * &z;
        // 1 + z + z^2 = 0
        assert!((&(&Scalar::one() + &z) + &z2).is_zero());
        assert_eq!(&z2 * &z, Scalar::one());
        let i = Scalar::root_of_unity(4, 1);
        assert_eq!(&i * &i, Scalar::from_int(-1));
        assert!((&i * &i).is_rational());
    }

    #[test]
    fn conjugation_and_inverse() {
        let z = Scalar::root_of_unity(3, 1);
        assert_eq!(z.conj(), Scalar::root_of_unity(3, 2));
        let a = Scalar::parse("1/2+2*z^1", 3).unwrap();
        let inv = a.inv().unwrap();
        assert_eq!(&a * &inv, Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn parsing() {
        assert_eq!(Scalar::parse("1/2", 1).unwrap(), Scalar::from_frac(1, 2));
        let s = Scalar::parse("-1/3*z^2+1", 3).unwrap();
        assert_eq!(Scalar::parse(&s.to_string(), 3).unwrap(), s);
        assert!(matches!(Scalar::parse("1/0", 1), Err(Error::BadScalarLiteral(_))));
        assert!(Scalar::parse("", 1).is_err());
        assert!(Scalar::parse("abc", 1).is_err());
        assert_eq!(Scalar::parse("z^3", 3).unwrap(), Scalar::one());
        assert_eq!(Scalar::parse("2-1", 1).unwrap(), Scalar::one());
    }

    #[test]
    fn mixed_conductors_embed() {
        let a = Scalar::root_of_unity(3, 1);
        let b = Scalar::root_of_unity(4, 1);
        let p = &a * &b;
        assert_eq!(p.conductor(), 12);
        assert_eq!(&p * &p.conj(), Scalar::one());
    }

    fn small_scalar(n: u32) -> impl Strategy<Value = Scalar> {
        prop::collection::vec((-4i64..5, 1i64..4), 1..4).prop_map(move |v| {
            v.iter().enumerate().fold(Scalar::zero(), |acc, (k, &(a, b))| {
                acc + &Scalar::from_frac(a, b) * &Scalar::root_of_unity(n, k as i64)
            })
        })
    }

    proptest! {
        #[test]
        fn field_laws(a in small_scalar(12), b in small_scalar(12), c in small_scalar(12)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
            if let Some(ai) = a.inv() {
                prop_assert_eq!(&a * &ai, Scalar::one());
            }
        }

        #[test]
        fn display_roundtrip(a in small_scalar(6)) {
            prop_assert_eq!(Scalar::parse(&a.to_string(), 6).unwrap(), a);
        }
    }
}
