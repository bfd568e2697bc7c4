//! Sparse elements of tensor products of based spaces. A key lists one basis
//! index per tensor slot; what each slot means is up to the caller.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use smallvec::SmallVec;

use crate::error::{input, Result};
use crate::linalg::SVec;
use crate::scalar::Scalar;

pub type Key = SmallVec<[u32; 8]>;

pub fn key(ix: &[u32]) -> Key {
    Key::from_slice(ix)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor {
    terms: BTreeMap<Key, Scalar>,
}

impl Tensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pure(ix: &[u32]) -> Self {
        let mut t = Self::zero();
        t.add_term(key(ix), Scalar::one());
        t
    }

    pub fn from_svec(v: &SVec) -> Self {
        let mut t = Self::zero();
        for (i, x) in v {
            t.add_term(key(&[*i as u32]), x.clone());
        }
        t
    }

    /// Entries of a one-slot tensor as a vector.
    pub fn to_svec(&self) -> SVec {
        self.terms.iter().map(|(k, x)| (k[0] as usize, x.clone())).collect()
    }

    pub fn add_term(&mut self, k: Key, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Tensor, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            self.add_term(k.clone(), c * x);
        }
    }

    pub fn add(&mut self, other: &Tensor) {
        self.add_scaled(other, &Scalar::one());
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        let mut out = self.clone();
        out.add_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scaled(&self, c: &Scalar) -> Tensor {
        let mut out = Tensor::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn conj(&self) -> Tensor {
        Tensor { terms: self.terms.iter().map(|(k, x)| (k.clone(), x.conj())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: &[u32]) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    /// Build a new tensor term by term.
    pub fn flat_map(&self, mut f: impl FnMut(&Key, &Scalar, &mut Tensor)) -> Tensor {
        let mut out = Tensor::zero();
        for (k, x) in &self.terms {
            f(k, x, &mut out);
        }
        out
    }

    /// Concatenation of slots, `self ⊗ other`.
    pub fn kron(&self, other: &Tensor) -> Tensor {
        let mut out = Tensor::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut k = a.clone();
                k.extend_from_slice(b);
                out.add_term(k, x * y);
            }
        }
        out
    }

    /// Number of slots, if all keys agree.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.len());
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, x)| {
                let ix: Vec<String> = k.iter().map(|i| i.to_string()).collect();
                format!("({x})[{}]", ix.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn sign(odd: bool) -> Scalar {
    if odd {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

/// The graded flip `u ⊗ w ↦ (−1)^{∂u∂w} w ⊗ u` on two-slot elements.
pub fn graded_twist(x: &Tensor, deg_left: impl Fn(u32) -> Option<u8>, deg_right: impl Fn(u32) -> Option<u8>) -> Result<Tensor> {
    let mut out = Tensor::zero();
    for (k, c) in x.iter() {
        if k.len() != 2 {
            return Err(input("graded twist needs two-slot elements"));
        }
        let (Some(a), Some(b)) = (deg_left(k[0]), deg_right(k[1])) else {
            return Err(input("graded twist needs degrees on both factors"));
        };
        out.add_term(key(&[k[1], k[0]]), &sign(a % 2 == 1 && b % 2 == 1) * c);
    }
    Ok(out)
}

/// An ordered list of keys with a reverse index, for moving between tensors
/// and coordinate vectors.
#[derive(Clone, Debug, Default)]
pub struct KeyBasis {
    pub keys: Vec<Key>,
    idx: HashMap<Key, usize>,
}

impl KeyBasis {
    pub fn new(keys: Vec<Key>) -> Self {
        let idx = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        KeyBasis { keys, idx }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index(&self, k: &[u32]) -> Option<usize> {
        self.idx.get(k).copied()
    }

    /// Index of `k`, appending it when new.
    pub fn intern(&mut self, k: &Key) -> usize {
        if let Some(&i) = self.idx.get(k) {
            return i;
        }
        self.keys.push(k.clone());
        self.idx.insert(k.clone(), self.keys.len() - 1);
        self.keys.len() - 1
    }

    /// Coordinates of a tensor supported on the basis. Panics on a foreign key.
    pub fn vec(&self, t: &Tensor) -> SVec {
        t.iter().map(|(k, c)| (self.idx[k], c.clone())).collect()
    }

    /// Coordinates, extending the basis by unseen keys.
    pub fn vec_interning(&mut self, t: &Tensor) -> SVec {
        t.iter().map(|(k, c)| (self.intern(k), c.clone())).collect()
    }

    pub fn tensor(&self, v: &SVec) -> Tensor {
        let mut out = Tensor::zero();
        for (i, c) in v {
            out.add_term(self.keys[*i].clone(), c.clone());
        }
        out
    }

    /// Kernel of a linear map given on the basis keys, whatever its codomain.
    pub fn kernel(&self, f: impl Fn(&Tensor) -> Tensor) -> Vec<Tensor> {
        let mut cod = KeyBasis::default();
        let cols: Vec<SVec> = self.keys.iter().map(|k| cod.vec_interning(&f(&Tensor::pure(k)))).collect();
        crate::linalg::kernel_of_columns(&cols).iter().map(|v| self.tensor(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degs(i: u32) -> Option<u8> {
        Some(i as u8 % 3)
    }

    #[test]
    fn twist_signs() {
        let even = graded_twist(&Tensor::pure(&[0, 3]), degs, degs).unwrap();
        assert_eq!(even, Tensor::pure(&[3, 0]));
        let odd = graded_twist(&Tensor::pure(&[1, 4]), degs, degs).unwrap();
        assert_eq!(odd, Tensor::pure(&[4, 1]).scaled(&Scalar::from_int(-1)));
        assert!(graded_twist(&Tensor::pure(&[1]), degs, degs).is_err());
        assert!(graded_twist(&Tensor::pure(&[1, 2]), |_| None, degs).is_err());
    }

    #[test]
    fn twist_is_involutive() {
        for a in 0..6 {
            for b in 0..6 {
                let x = Tensor::pure(&[a, b]);
                let y = graded_twist(&x, degs, degs).unwrap();
                assert_eq!(graded_twist(&y, degs, degs).unwrap(), x);
            }
        }
    }

    #[test]
    fn terms_cancel() {
        let mut t = Tensor::pure(&[1, 2]);
        t.add_term(key(&[1, 2]), Scalar::from_int(-1));
        assert!(t.is_zero());
    }
}
