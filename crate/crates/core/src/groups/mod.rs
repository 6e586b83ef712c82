//! The abstract group interface, free-group words and the concrete groups
//! used by every other module.
//!
//! Elements are always stored in a canonical form, so structural equality on
//! `Group::Elem` coincides with equality in the group. The byte key returned
//! by [`Group::canonical_key`] is a deterministic serialization of that
//! canonical form and is used for reproducible ordering of output.

mod concrete;
mod word;

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub use concrete::{
    CayleyTable, CayleyTableSpec, Cyclic, DirectProduct, FreeAbelian, FreeAbelianElement, Integers, Permutation,
    Symmetric,
};
pub use word::{Letter, Word};

/// Bound satisfied by every element type.
pub trait Element: Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned {}

impl<T> Element for T where T: Clone + Eq + Ord + Hash + Debug + Serialize + DeserializeOwned {}

pub trait Group {
    type Elem: Element;

    fn identity(&self) -> Self::Elem;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Appends the canonical byte serialization of `a` to `out`.
    fn write_key(&self, a: &Self::Elem, out: &mut Vec<u8>);

    /// Short human-readable name, used in diagnostics.
    fn name(&self) -> String;

    /// Membership test for values constructed outside the group's own
    /// operations.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn canonical_key(&self, a: &Self::Elem) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_key(a, &mut out);
        out
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn checked_mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::GroupMismatch(self.name()));
        }
        Ok(self.mul(a, b))
    }

    fn pow(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(&ab, &self.inv(a));
        self.mul(&ab_ai, &self.inv(b))
    }

    /// `a b a⁻¹`.
    fn conjugate(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(a, b), &self.inv(a))
    }

    fn product<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }
}

/// Sign-magnitude little-endian encoding of a signed integer: one sign byte
/// followed by the 8-byte magnitude.
pub fn put_int(out: &mut Vec<u8>, v: i64) {
    out.push(u8::from(v < 0));
    out.extend_from_slice(&v.unsigned_abs().to_le_bytes());
}

pub fn put_uint(out: &mut Vec<u8>, v: u64) {
    out.push(0);
    out.extend_from_slice(&v.to_le_bytes());
}

/// Image of `w` under the homomorphism from the free group determined by
/// `assignment`.
pub fn evaluate_word<G: Group>(
    group: &G,
    assignment: &BTreeMap<usize, G::Elem>,
    w: &Word,
) -> Result<G::Elem> {
    let mut acc = group.identity();
    for letter in w.letters() {
        let image = assignment
            .get(&letter.gen)
            .ok_or(Error::UnassignedGenerator(letter.gen))?;
        acc = if letter.sign > 0 {
            group.mul(&acc, image)
        } else {
            group.mul(&acc, &group.inv(image))
        };
    }
    Ok(acc)
}
