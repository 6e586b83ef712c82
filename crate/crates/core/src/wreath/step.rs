use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::groups::{put_int, put_uint, Element, Group};

/// An element of `V W̄r ℤ` whose base function `ℤ → V` is eventually
/// constant in both directions.
///
/// The function takes the value `left` for `n < start`, `values[n - start]`
/// on the window, and `right` from `start + values.len()` on. The window is
/// kept minimal; when `left ≠ right` it is never empty, so it pins down
/// where the switch happens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepElement<VE> {
    left: VE,
    right: VE,
    start: i64,
    values: Vec<VE>,
    shift: i64,
}

impl<VE: Element> StepElement<VE> {
    /// Builds an element from limits and an explicit window, canonicalizing.
    /// An empty window with distinct limits switches between `start - 1`
    /// and `start`.
    pub fn new(left: VE, right: VE, start: i64, values: Vec<VE>, shift: i64) -> Self {
        let (start, values) = canonical_window(&left, &right, start, values);
        StepElement {
            left,
            right,
            start,
            values,
            shift,
        }
    }

    /// The base function with value `left` for `n < boundary` and `right`
    /// for `n ≥ boundary`, with zero shift.
    pub fn step(left: VE, right: VE, boundary: i64) -> Self {
        StepElement::new(left, right, boundary, Vec::new(), 0)
    }

    /// Function with a single non-identity value `v` at `n`.
    pub fn point(identity: VE, n: i64, v: VE) -> Self {
        StepElement::new(identity.clone(), identity, n, vec![v], 0)
    }

    pub fn eval(&self, n: i64) -> &VE {
        if n < self.start {
            &self.left
        } else if n >= self.start + self.values.len() as i64 {
            &self.right
        } else {
            &self.values[(n - self.start) as usize]
        }
    }

    pub fn left_limit(&self) -> &VE {
        &self.left
    }

    pub fn right_limit(&self) -> &VE {
        &self.right
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Window positions `start..start+len` together with their values.
    pub fn exceptions(&self) -> impl Iterator<Item = (i64, &VE)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start + i as i64, v))
    }

    /// The half-open window `[start, end)` outside which the function is
    /// constant on each side.
    pub fn window(&self) -> (i64, i64) {
        (self.start, self.start + self.values.len() as i64)
    }

    pub fn is_base(&self) -> bool {
        self.shift == 0
    }
}

fn canonical_window<VE: Element>(left: &VE, right: &VE, start: i64, values: Vec<VE>) -> (i64, Vec<VE>) {
    let len = values.len() as i64;
    let val = |n: i64| -> &VE {
        if n < start {
            left
        } else if n >= start + len {
            right
        } else {
            &values[(n - start) as usize]
        }
    };
    let (lo, hi) = if left == right {
        let p = (start..start + len).find(|&n| val(n) != left);
        let q = (start..start + len).rev().find(|&n| val(n) != right);
        match (p, q) {
            (Some(p), Some(q)) => (p, q),
            _ => return (0, Vec::new()),
        }
    } else if len == 0 {
        // Caller-specified switch between `start - 1` and `start`.
        (start - 1, start - 1)
    } else {
        let q = (start - 1..start + len)
            .rev()
            .find(|&n| val(n) != right)
            .expect("window edge takes the left value");
        let p = (start..=start + len)
            .find(|&n| val(n) != left)
            .expect("window edge takes the right value");
        (p.min(q), q)
    };
    let out = (lo..=hi).map(|n| val(n).clone()).collect();
    (lo, out)
}

/// `t^α f t^{-α}`: the base function `n ↦ f(n + α)`, shift unchanged.
pub fn wreath_conj_power<VE: Element>(alpha: i64, f: &StepElement<VE>) -> StepElement<VE> {
    StepElement::new(f.left.clone(), f.right.clone(), f.start - alpha, f.values.clone(), f.shift)
}

/// The group of eventually-constant elements of `V W̄r ℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepGroup<V> {
    pub value_group: V,
}

impl<V: Group> StepGroup<V> {
    pub fn new(value_group: V) -> Self {
        StepGroup { value_group }
    }

    /// The generator `t` of the top group `ℤ`.
    pub fn shift_generator(&self) -> StepElement<V::Elem> {
        let id = self.value_group.identity();
        StepElement::new(id.clone(), id, 0, Vec::new(), 1)
    }

    /// `n ↦ 1` for `n ≤ 0` and `n ↦ v` for `n > 0`.
    pub fn positive_ray(&self, v: V::Elem) -> StepElement<V::Elem> {
        StepElement::step(self.value_group.identity(), v, 1)
    }

    /// Function with the single value `v` at `0`.
    pub fn at_zero(&self, v: V::Elem) -> StepElement<V::Elem> {
        StepElement::point(self.value_group.identity(), 0, v)
    }
}

impl<V: Group> Group for StepGroup<V> {
    type Elem = StepElement<V::Elem>;

    fn identity(&self) -> Self::Elem {
        let id = self.value_group.identity();
        StepElement::new(id.clone(), id, 0, Vec::new(), 0)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let g = &self.value_group;
        let (a0, a1) = a.window();
        let (b0, b1) = b.window();
        let lo = a0.min(b0 - a.shift);
        let hi = a1.max(b1 - a.shift);
        let values = (lo..hi)
            .map(|n| g.mul(a.eval(n), b.eval(n + a.shift)))
            .collect();
        StepElement::new(
            g.mul(&a.left, &b.left),
            g.mul(&a.right, &b.right),
            lo,
            values,
            a.shift + b.shift,
        )
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let g = &self.value_group;
        StepElement::new(
            g.inv(&a.left),
            g.inv(&a.right),
            a.start + a.shift,
            a.values.iter().map(|v| g.inv(v)).collect(),
            -a.shift,
        )
    }

    fn write_key(&self, a: &Self::Elem, out: &mut Vec<u8>) {
        self.value_group.write_key(&a.left, out);
        self.value_group.write_key(&a.right, out);
        put_int(out, a.start);
        put_uint(out, a.values.len() as u64);
        for v in &a.values {
            self.value_group.write_key(v, out);
        }
        put_int(out, a.shift);
    }

    fn name(&self) -> String {
        format!("({}) Wr Z", self.value_group.name())
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        let g = &self.value_group;
        g.contains(&a.left) && g.contains(&a.right) && a.values.iter().all(|v| g.contains(v))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "VE: Serialize", deserialize = "VE: Deserialize<'de>"))]
struct RawStep<VE> {
    left: VE,
    right: VE,
    exc: BTreeMap<i64, VE>,
    shift: i64,
}

impl<VE: Element> Serialize for StepElement<VE> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawStep {
            left: self.left.clone(),
            right: self.right.clone(),
            exc: self.exceptions().map(|(n, v)| (n, v.clone())).collect(),
            shift: self.shift,
        }
        .serialize(s)
    }
}

impl<'de, VE: Element> Deserialize<'de> for StepElement<VE> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: RawStep<VE> = RawStep::deserialize(d)?;
        let start = raw.exc.keys().next().copied().unwrap_or(0);
        let contiguous = raw
            .exc
            .keys()
            .enumerate()
            .all(|(i, &n)| n == start + i as i64);
        if !contiguous {
            return Err(D::Error::custom("`exc` must cover a contiguous window"));
        }
        if raw.exc.is_empty() && raw.left != raw.right {
            return Err(D::Error::custom("distinct limits need a nonempty `exc` window"));
        }
        let values = raw.exc.into_values().collect();
        Ok(StepElement::new(raw.left, raw.right, start, values, raw.shift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Integers;
    use proptest::prelude::*;

    fn k() -> StepGroup<Integers> {
        StepGroup::new(Integers)
    }

    fn arb_step() -> impl Strategy<Value = StepElement<i64>> {
        (
            -2i64..=2,
            -2i64..=2,
            -4i64..=4,
            prop::collection::vec(-2i64..=2, 0..5),
            -3i64..=3,
        )
            .prop_map(|(l, r, start, values, shift)| StepElement::new(l, r, start, values, shift))
    }

    #[test]
    fn canonical_forms_are_unique() {
        // Same step function, described with different windows.
        let a = StepElement::new(0i64, 5, -2, vec![0, 0, 0, 5, 5], 0);
        let b = StepElement::step(0i64, 5, 1);
        assert_eq!(a, b);
        assert_eq!(b.window(), (0, 1));
        assert_eq!(*b.eval(0), 0);
        assert_eq!(*b.eval(1), 5);
        let c = StepElement::new(3i64, 3, 7, vec![3, 3], 2);
        assert_eq!(c.window(), (0, 0));
    }

    #[test]
    fn shift_commutator_is_a_point() {
        let g = k();
        let f = g.positive_ray(4);
        let t = g.shift_generator();
        let c = g.commutator(&t, &f);
        assert_eq!(c, g.at_zero(4));
    }

    #[test]
    fn conj_power_examples() {
        let g = k();
        let f = g.positive_ray(7);
        assert_eq!(wreath_conj_power(0, &f), f);
        for alpha in -4..=4 {
            let shifted = wreath_conj_power(alpha, &f);
            assert_eq!(*shifted.eval(0), if alpha > 0 { 7 } else { 0 });
            let t = g.shift_generator();
            let direct = g.mul(&g.mul(&g.pow(&t, alpha), &f), &g.pow(&t, -alpha));
            assert_eq!(shifted, direct);
        }
        let twice = wreath_conj_power(2, &wreath_conj_power(-5, &f));
        assert_eq!(twice, wreath_conj_power(-3, &f));
    }

    #[test]
    fn json_shape_and_rejections() {
        let f = k().positive_ray(2);
        let j = serde_json::to_value(&f).unwrap();
        assert_eq!(j, serde_json::json!({"left": 0, "right": 2, "exc": {"0": 0}, "shift": 0}));
        let back: StepElement<i64> = serde_json::from_value(j).unwrap();
        assert_eq!(back, f);
        let gap = serde_json::json!({"left": 0, "right": 0, "exc": {"0": 1, "2": 1}, "shift": 0});
        assert!(serde_json::from_value::<StepElement<i64>>(gap).is_err());
        let ambiguous = serde_json::json!({"left": 0, "right": 1, "exc": {}, "shift": 0});
        assert!(serde_json::from_value::<StepElement<i64>>(ambiguous).is_err());
    }

    proptest! {
        #[test]
        fn pointwise_product(a in arb_step(), b in arb_step()) {
            let g = k();
            let p = g.mul(&a, &b);
            for n in -10..=10 {
                prop_assert_eq!(*p.eval(n), a.eval(n) + b.eval(n + a.shift()));
            }
            prop_assert_eq!(p.shift(), a.shift() + b.shift());
        }

        #[test]
        fn group_laws(a in arb_step(), b in arb_step(), c in arb_step()) {
            let g = k();
            prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
            prop_assert_eq!(g.mul(&a, &g.inv(&a)), g.identity());
            prop_assert_eq!(g.mul(&g.inv(&a), &a), g.identity());
            let t = g.shift_generator();
            let conj = g.conjugate(&t, &a);
            for n in -10..=10 {
                prop_assert_eq!(conj.eval(n), a.eval(n + 1));
            }
        }

        #[test]
        fn json_round_trip(a in arb_step()) {
            let s = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<StepElement<i64>>(&s).unwrap(), a);
        }
    }
}
