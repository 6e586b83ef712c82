//! Exact arithmetic in the integral group ring `ℤH`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Element, Group};

/// A finite `ℤ`-linear combination of group elements. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupRingElement<E: Element> {
    terms: BTreeMap<E, BigInt>,
}

impl<E: Element> Default for GroupRingElement<E> {
    fn default() -> Self {
        GroupRingElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<E: Element> GroupRingElement<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(e: E, k: impl Into<BigInt>) -> Self {
        let mut out = Self::zero();
        out.add_term(e, k.into());
        out
    }

    pub fn from_terms<I, K>(terms: I) -> Self
    where
        I: IntoIterator<Item = (E, K)>,
        K: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, k) in terms {
            out.add_term(e, k.into());
        }
        out
    }

    /// `h - 1`.
    pub fn augmentation_generator<G: Group<Elem = E>>(group: &G, h: &E) -> Self {
        Self::from_terms([(h.clone(), 1), (group.identity(), -1)])
    }

    pub fn add_term(&mut self, e: E, k: BigInt) {
        if k.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(k);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += k;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &E) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&E, &BigInt)> {
        self.terms.iter()
    }

    /// Number of distinct group elements in the support.
    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, k) in &other.terms {
            out.add_term(e.clone(), k.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            terms: self.terms.iter().map(|(e, k)| (e.clone(), -k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        GroupRingElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Convolution product `Σ k_a k_b (ab)`.
    pub fn mul<G: Group<Elem = E>>(&self, other: &Self, group: &G) -> Self {
        let mut out = Self::zero();
        for (a, ka) in &self.terms {
            for (b, kb) in &other.terms {
                out.add_term(group.mul(a, b), ka * kb);
            }
        }
        out
    }

    /// `g · self`.
    pub fn left_mul_elem<G: Group<Elem = E>>(&self, g: &E, group: &G) -> Self {
        GroupRingElement {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (group.mul(g, e), k.clone()))
                .collect(),
        }
    }

    /// `self · g`.
    pub fn right_mul_elem<G: Group<Elem = E>>(&self, g: &E, group: &G) -> Self {
        GroupRingElement {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (group.mul(e, g), k.clone()))
                .collect(),
        }
    }

    /// `‖t‖ = Σ |k_h|`.
    pub fn norm(&self) -> BigUint {
        self.terms.values().map(|k| k.magnitude().clone()).sum()
    }

    /// Exact division of every coefficient by `d`, if possible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut terms = BTreeMap::new();
        for (e, k) in &self.terms {
            if !(k % d).is_zero() {
                return None;
            }
            terms.insert(e.clone(), k / d);
        }
        Some(GroupRingElement { terms })
    }

    /// Terms sorted by the canonical key of their group element.
    pub fn sorted_terms<G: Group<Elem = E>>(&self, group: &G) -> Vec<(&E, &BigInt)> {
        let mut v: Vec<(Vec<u8>, (&E, &BigInt))> = self
            .terms
            .iter()
            .map(|(e, k)| (group.canonical_key(e), (e, k)))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v.into_iter().map(|(_, t)| t).collect()
    }

    /// Human-readable sum in canonical term order; identity terms print as
    /// their bare coefficient.
    pub fn render_with<G: Group<Elem = E>>(&self, group: &G, name: impl Fn(&E) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (e, k)) in self.sorted_terms(group).into_iter().enumerate() {
            match (n, k.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = k.magnitude();
            let one = *mag == BigUint::from(1u8);
            match (group.is_identity(e), one) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, true) => out.push_str(&name(e)),
                (false, false) => out.push_str(&format!("{mag}{}", name(e))),
            }
        }
        out
    }

    /// `{"terms": [{"elem": …, "coef": k}, …]}` sorted by canonical key.
    pub fn to_json<G: Group<Elem = E>>(&self, group: &G) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms(group)
            .into_iter()
            .map(|(e, k)| {
                json!({
                    "elem": serde_json::to_value(e).expect("element serializes"),
                    "coef": coef_to_json(k),
                })
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json<G: Group<Elem = E>>(value: &Value, group: &G) -> Result<Self> {
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `terms` array".into()))?;
        let mut out = Self::zero();
        for t in terms {
            let elem: E = serde_json::from_value(
                t.get("elem")
                    .cloned()
                    .ok_or_else(|| Error::Parse("term without `elem`".into()))?,
            )
            .map_err(|e| Error::Parse(e.to_string()))?;
            if !group.contains(&elem) {
                return Err(Error::GroupMismatch(group.name()));
            }
            let coef = t
                .get("coef")
                .ok_or_else(|| Error::Parse("term without `coef`".into()))
                .and_then(coef_from_json)?;
            out.add_term(elem, coef);
        }
        Ok(out)
    }
}

fn coef_to_json(k: &BigInt) -> Value {
    match i64::try_from(k) {
        Ok(v) => json!(v),
        Err(_) => json!(k.to_string()),
    }
}

fn coef_from_json(v: &Value) -> Result<BigInt> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    v.as_str()
        .and_then(|s| s.parse::<BigInt>().ok())
        .ok_or_else(|| Error::Parse(format!("bad coefficient {v}")))
}

/// `ℤH` bound to a concrete group, with membership-checked operations.
#[derive(Debug, Clone)]
pub struct GroupRing<G: Group> {
    group: G,
}

impl<G: Group> GroupRing<G> {
    pub fn new(group: G) -> Self {
        GroupRing { group }
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn one(&self) -> GroupRingElement<G::Elem> {
        GroupRingElement::monomial(self.group.identity(), 1)
    }

    fn check(&self, u: &GroupRingElement<G::Elem>) -> Result<()> {
        if u.terms.keys().all(|e| self.group.contains(e)) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(self.group.name()))
        }
    }

    pub fn add(
        &self,
        u: &GroupRingElement<G::Elem>,
        v: &GroupRingElement<G::Elem>,
    ) -> Result<GroupRingElement<G::Elem>> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.add(v))
    }

    pub fn mul(
        &self,
        u: &GroupRingElement<G::Elem>,
        v: &GroupRingElement<G::Elem>,
    ) -> Result<GroupRingElement<G::Elem>> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.mul(v, &self.group))
    }

    pub fn display(&self, u: &GroupRingElement<G::Elem>) -> String {
        RingDisplay {
            group: &self.group,
            elem: u,
        }
        .to_string()
    }
}

struct RingDisplay<'a, G: Group> {
    group: &'a G,
    elem: &'a GroupRingElement<G::Elem>,
}

impl<G: Group> fmt::Display for RingDisplay<'_, G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.elem.render_with(self.group, |e| {
            format!("[{}]", serde_json::to_string(e).unwrap_or_default())
        });
        f.write_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Cyclic, FreeAbelian, FreeAbelianElement, Integers};
    use proptest::prelude::*;

    type Z2 = FreeAbelianElement;

    fn h(a: i64, b: i64) -> Z2 {
        FreeAbelianElement::from_pairs([(0, a), (1, b)])
    }

    #[test]
    fn addition_examples() {
        let x = GroupRingElement::monomial(h(1, 0), 1);
        assert!(x.add(&x.neg()).is_zero());
        assert_eq!(GroupRingElement::zero().add(&x), x);
        let u = GroupRingElement::from_terms([(h(1, 0), 1), (h(0, 1), 1)]);
        let v = GroupRingElement::from_terms([(h(1, 0), 1), (h(0, 1), -1)]);
        assert_eq!(u.add(&v), GroupRingElement::monomial(h(1, 0), 2));
    }

    #[test]
    fn multiplication_examples() {
        let z = Integers;
        let u = GroupRingElement::from_terms([(3i64, 2), (-1, 5)]);
        assert_eq!(u.mul(&GroupRingElement::monomial(0, 1), &z), u);
        let hm1 = GroupRingElement::from_terms([(1i64, 1), (0, -1)]);
        let hp1 = GroupRingElement::from_terms([(1i64, 1), (0, 1)]);
        assert_eq!(
            hm1.mul(&hp1, &z),
            GroupRingElement::from_terms([(2i64, 1), (0, -1)])
        );
    }

    #[test]
    fn worked_example_ring_identity() {
        let g = FreeAbelian::new(2);
        let t1 = GroupRingElement::from_terms([(h(1, 1), 1), (h(-3, -1), 1), (h(-3, 0), -1), (h(0, 0), 1)]);
        let t2 = GroupRingElement::from_terms([(h(2, 1), 1), (h(1, 0), 1), (h(-2, -1), 1), (h(-3, -1), -1)]);
        let lhs = t1
            .mul(&GroupRingElement::augmentation_generator(&g, &h(1, 0)), &g)
            .add(&t2.mul(&GroupRingElement::augmentation_generator(&g, &h(0, 1)), &g));
        assert_eq!(lhs, GroupRingElement::augmentation_generator(&g, &h(2, 2)));
        assert_eq!(t1.norm(), BigUint::from(4u8));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(GroupRingElement::<Z2>::zero().norm(), BigUint::zero());
        let d = GroupRingElement::from_terms([(h(1, 0), 1), (h(0, 1), -1)]);
        assert_eq!(d.norm(), BigUint::from(2u8));
    }

    #[test]
    fn checked_ring_rejects_foreign_elements() {
        let r = GroupRing::new(Cyclic::new(5));
        let ok = GroupRingElement::monomial(3u64, 1);
        let bad = GroupRingElement::monomial(9u64, 1);
        assert!(r.add(&ok, &ok).is_ok());
        assert!(matches!(r.mul(&ok, &bad), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn json_is_sorted_by_key_and_round_trips() {
        let g = FreeAbelian::new(2);
        let u = GroupRingElement::from_terms([(h(-1, 0), 3), (h(0, 0), -2), (h(2, 1), 1)]);
        let j = u.to_json(&g);
        let keys: Vec<Vec<u8>> = j["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| g.canonical_key(&serde_json::from_value(t["elem"].clone()).unwrap()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(GroupRingElement::from_json(&j, &g).unwrap(), u);
    }

    #[test]
    fn large_coefficients_survive() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let u = GroupRingElement::monomial(1i64, big.clone());
        let sq = u.mul(&u, &Integers);
        assert_eq!(sq.coefficient(&2), &big * &big);
        let j = sq.to_json(&Integers);
        assert_eq!(GroupRingElement::from_json(&j, &Integers).unwrap(), sq);
    }

    fn arb_elem() -> impl Strategy<Value = GroupRingElement<u64>> {
        prop::collection::vec((0u64..5, -4i64..=4), 0..=5).prop_map(GroupRingElement::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(u in arb_elem(), v in arb_elem(), w in arb_elem()) {
            let g = Cyclic::new(5);
            prop_assert_eq!(u.add(&v), v.add(&u));
            prop_assert_eq!(u.mul(&v.add(&w), &g), u.mul(&v, &g).add(&u.mul(&w, &g)));
            prop_assert_eq!(u.mul(&v, &g).mul(&w, &g), u.mul(&v.mul(&w, &g), &g));
        }

        #[test]
        fn norm_inequalities(u in arb_elem(), v in arb_elem(), x in 0u64..5) {
            let g = Cyclic::new(5);
            prop_assert!(u.add(&v).norm() <= u.norm() + v.norm());
            prop_assert!(u.mul(&v, &g).norm() <= u.norm() * v.norm());
            prop_assert_eq!(u.norm().is_zero(), u.is_zero());
            prop_assert_eq!(u.left_mul_elem(&x, &g).norm(), u.norm());
            prop_assert_eq!(u.right_mul_elem(&x, &g).norm(), u.norm());
        }
    }
}
