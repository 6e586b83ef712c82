//! Restricted wreath products `A ≀ B`, the eventually-constant fragment of
//! the unrestricted product `V W̄r ℤ`, and the lamplighter group `ℤ ≀ ℤ`.
//!
//! Every product here uses the right action `(b∘f)(x) = f(xb)` on base
//! functions, so that `b f b⁻¹ = b∘f` and
//! `(f₁, b₁)(f₂, b₂) = (f₁ · (b₁∘f₂), b₁b₂)`.

mod lamplighter;
mod step;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::groups::{put_uint, Element, Group};

pub use lamplighter::{lamplighter_eq_solve, square_root, Lamplighter, LamplighterElement};
pub use step::{wreath_conj_power, StepElement, StepGroup};

/// An element `f b` of `A ≀ B`: a finitely supported base function and a
/// top element. The base never stores identity values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(bound(serialize = "AE: Serialize, BE: Serialize"))]
#[serde(bound(deserialize = "AE: Deserialize<'de>, BE: Deserialize<'de> + Ord"))]
pub struct WreathElement<AE, BE> {
    #[serde(with = "pairs")]
    pub base: BTreeMap<BE, AE>,
    pub top: BE,
}

impl<AE: Element, BE: Element> WreathElement<AE, BE> {
    pub fn value_at<A: Group<Elem = AE>>(&self, a: &A, x: &BE) -> AE {
        self.base.get(x).cloned().unwrap_or_else(|| a.identity())
    }

    pub fn support(&self) -> impl Iterator<Item = &BE> {
        self.base.keys()
    }
}

pub(crate) mod pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<K, V, S>(map: &BTreeMap<K, V>, s: S) -> Result<S::Ok, S::Error>
    where
        K: Serialize,
        V: Serialize,
        S: Serializer,
    {
        s.collect_seq(map.iter())
    }

    pub fn deserialize<'de, K, V, D>(d: D) -> Result<BTreeMap<K, V>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        V: Deserialize<'de>,
        D: Deserializer<'de>,
    {
        let v: Vec<(K, V)> = Vec::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WreathProduct<A, B> {
    pub base_group: A,
    pub top_group: B,
}

impl<A: Group, B: Group> WreathProduct<A, B> {
    pub fn new(base_group: A, top_group: B) -> Self {
        WreathProduct {
            base_group,
            top_group,
        }
    }

    /// The element of the copy `A(1)`: value `a` at `1`, top `1`.
    pub fn lift_base(&self, a: A::Elem) -> WreathElement<A::Elem, B::Elem> {
        self.from_base(BTreeMap::from([(self.top_group.identity(), a)]))
    }

    pub fn lift_top(&self, b: B::Elem) -> WreathElement<A::Elem, B::Elem> {
        WreathElement {
            base: BTreeMap::new(),
            top: b,
        }
    }

    /// `a b` with `a ∈ A(1)`.
    pub fn base_then_top(&self, a: A::Elem, b: B::Elem) -> WreathElement<A::Elem, B::Elem> {
        let mut e = self.lift_base(a);
        e.top = b;
        e
    }

    /// Base-only element from an arbitrary finite map; identity values are
    /// dropped.
    pub fn from_base(&self, mut base: BTreeMap<B::Elem, A::Elem>) -> WreathElement<A::Elem, B::Elem> {
        base.retain(|_, v| !self.base_group.is_identity(v));
        WreathElement {
            base,
            top: self.top_group.identity(),
        }
    }

    /// `b∘f`, i.e. `x ↦ f(xb)`.
    pub fn act(&self, b: &B::Elem, f: &BTreeMap<B::Elem, A::Elem>) -> BTreeMap<B::Elem, A::Elem> {
        let bi = self.top_group.inv(b);
        f.iter()
            .map(|(y, v)| (self.top_group.mul(y, &bi), v.clone()))
            .collect()
    }
}

impl<A: Group, B: Group> Group for WreathProduct<A, B> {
    type Elem = WreathElement<A::Elem, B::Elem>;

    fn identity(&self) -> Self::Elem {
        WreathElement {
            base: BTreeMap::new(),
            top: self.top_group.identity(),
        }
    }

    fn mul(&self, u: &Self::Elem, v: &Self::Elem) -> Self::Elem {
        let mut base = u.base.clone();
        let bi = self.top_group.inv(&u.top);
        for (y, value) in &v.base {
            let x = self.top_group.mul(y, &bi);
            match base.get(&x) {
                Some(cur) => {
                    let p = self.base_group.mul(cur, value);
                    if self.base_group.is_identity(&p) {
                        base.remove(&x);
                    } else {
                        base.insert(x, p);
                    }
                }
                None => {
                    base.insert(x, value.clone());
                }
            }
        }
        WreathElement {
            base,
            top: self.top_group.mul(&u.top, &v.top),
        }
    }

    fn inv(&self, u: &Self::Elem) -> Self::Elem {
        let base = u
            .base
            .iter()
            .map(|(x, v)| (self.top_group.mul(x, &u.top), self.base_group.inv(v)))
            .collect();
        WreathElement {
            base,
            top: self.top_group.inv(&u.top),
        }
    }

    fn write_key(&self, u: &Self::Elem, out: &mut Vec<u8>) {
        put_uint(out, u.base.len() as u64);
        for (x, v) in &u.base {
            self.top_group.write_key(x, out);
            self.base_group.write_key(v, out);
        }
        self.top_group.write_key(&u.top, out);
    }

    fn name(&self) -> String {
        format!("({}) wr ({})", self.base_group.name(), self.top_group.name())
    }

    fn contains(&self, u: &Self::Elem) -> bool {
        self.top_group.contains(&u.top)
            && u.base.iter().all(|(x, v)| {
                self.top_group.contains(x)
                    && self.base_group.contains(v)
                    && !self.base_group.is_identity(v)
            })
    }
}
