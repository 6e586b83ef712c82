use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::WreathElement;
use crate::groups::{put_int, put_uint, Group};

/// An element of `M = ℤ≀ℤ`: finitely many lit lamps and a cursor shift.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "RawLamps")]
pub struct LamplighterElement {
    pub lamps: BTreeMap<i64, i64>,
    pub shift: i64,
}

#[derive(Deserialize)]
struct RawLamps {
    lamps: BTreeMap<i64, i64>,
    shift: i64,
}

impl From<RawLamps> for LamplighterElement {
    fn from(raw: RawLamps) -> Self {
        LamplighterElement::new(raw.lamps, raw.shift)
    }
}

impl LamplighterElement {
    pub fn new(mut lamps: BTreeMap<i64, i64>, shift: i64) -> Self {
        lamps.retain(|_, k| *k != 0);
        LamplighterElement { lamps, shift }
    }

    pub fn lamp(&self, n: i64) -> i64 {
        self.lamps.get(&n).copied().unwrap_or(0)
    }
}

impl From<LamplighterElement> for WreathElement<i64, i64> {
    fn from(e: LamplighterElement) -> Self {
        WreathElement {
            base: e.lamps,
            top: e.shift,
        }
    }
}

impl From<WreathElement<i64, i64>> for LamplighterElement {
    fn from(e: WreathElement<i64, i64>) -> Self {
        LamplighterElement::new(e.base, e.top)
    }
}

/// `ℤ≀ℤ` with the right-action product
/// `(f₁, s₁)(f₂, s₂) = (x ↦ f₁(x) + f₂(x + s₁), s₁ + s₂)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Lamplighter;

impl Lamplighter {
    /// `x₀`: one lamp at `0`, no shift.
    pub fn x0(&self) -> LamplighterElement {
        LamplighterElement::new(BTreeMap::from([(0, 1)]), 0)
    }

    /// `y₀`: the unit shift.
    pub fn y0(&self) -> LamplighterElement {
        LamplighterElement::new(BTreeMap::new(), 1)
    }

    /// The standard generating set `S = {x₀, y₀}`.
    pub fn generators(&self) -> Vec<LamplighterElement> {
        vec![self.x0(), self.y0()]
    }
}

impl Group for Lamplighter {
    type Elem = LamplighterElement;

    fn identity(&self) -> LamplighterElement {
        LamplighterElement::default()
    }

    fn mul(&self, a: &LamplighterElement, b: &LamplighterElement) -> LamplighterElement {
        let mut lamps = a.lamps.clone();
        for (&y, &k) in &b.lamps {
            let e = lamps.entry(y - a.shift).or_insert(0);
            *e += k;
            if *e == 0 {
                lamps.remove(&(y - a.shift));
            }
        }
        LamplighterElement {
            lamps,
            shift: a.shift + b.shift,
        }
    }

    fn inv(&self, a: &LamplighterElement) -> LamplighterElement {
        LamplighterElement {
            lamps: a.lamps.iter().map(|(&x, &k)| (x + a.shift, -k)).collect(),
            shift: -a.shift,
        }
    }

    fn write_key(&self, a: &LamplighterElement, out: &mut Vec<u8>) {
        put_uint(out, a.lamps.len() as u64);
        for (&x, &k) in &a.lamps {
            put_int(out, x);
            put_int(out, k);
        }
        put_int(out, a.shift);
    }

    fn name(&self) -> String {
        "Z wr Z".to_string()
    }

    fn contains(&self, a: &LamplighterElement) -> bool {
        a.lamps.values().all(|&k| k != 0)
    }
}

/// Divides a Laurent polynomial by `1 + X^k` (`k > 0`), if exact.
fn divide_one_plus(w: &BTreeMap<i64, i64>, k: i64) -> Option<BTreeMap<i64, i64>> {
    let (Some((&lo, _)), Some((&hi, _))) = (w.first_key_value(), w.last_key_value()) else {
        return Some(BTreeMap::new());
    };
    let deg = (hi - lo) as usize;
    let k = k as usize;
    let mut c: Vec<i64> = (lo..=hi).map(|n| w.get(&n).copied().unwrap_or(0)).collect();
    let mut q = BTreeMap::new();
    if deg >= k {
        for i in 0..=deg - k {
            let qi = c[i];
            if qi != 0 {
                c[i] = 0;
                c[i + k] -= qi;
                q.insert(lo + i as i64, qi);
            }
        }
    }
    c.iter().all(|&r| r == 0).then_some(q)
}

/// The unique `y ∈ M` with `y² = a`, if any.
///
/// With `a = (W, 2m)` and `y = (V, m)` the equation reads
/// `(1 + X^{-m})·V = W` in `ℤ[X, X⁻¹]`, which has at most one solution.
pub fn square_root(a: &LamplighterElement) -> Option<LamplighterElement> {
    if a.shift % 2 != 0 {
        return None;
    }
    let m = a.shift / 2;
    let v = match m.cmp(&0) {
        std::cmp::Ordering::Equal => {
            if a.lamps.values().any(|k| k % 2 != 0) {
                return None;
            }
            a.lamps.iter().map(|(&n, &k)| (n, k / 2)).collect()
        }
        std::cmp::Ordering::Greater => {
            let shifted: BTreeMap<i64, i64> = a.lamps.iter().map(|(&n, &k)| (n + m, k)).collect();
            divide_one_plus(&shifted, m)?
        }
        std::cmp::Ordering::Less => divide_one_plus(&a.lamps, -m)?,
    };
    let y = LamplighterElement::new(v, m);
    debug_assert_eq!(&Lamplighter.mul(&y, &y), a);
    Some(y)
}

/// The unique solution `x = w v⁻¹ u` of `x u⁻¹ v w⁻¹ = 1`.
pub fn lamplighter_eq_solve(
    u: &LamplighterElement,
    v: &LamplighterElement,
    w: &LamplighterElement,
) -> LamplighterElement {
    let m = Lamplighter;
    m.mul(&m.mul(w, &m.inv(v)), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::WreathProduct;
    use crate::groups::Integers;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(lamps: &[(i64, i64)], shift: i64) -> LamplighterElement {
        LamplighterElement::new(lamps.iter().copied().collect(), shift)
    }

    fn random_word_element(rng: &mut ChaCha8Rng, len: usize) -> LamplighterElement {
        let m = Lamplighter;
        let gens = [m.x0(), m.y0(), m.inv(&m.x0()), m.inv(&m.y0())];
        (0..len).fold(m.identity(), |acc, _| m.mul(&acc, &gens[rng.gen_range(0..4)]))
    }

    fn arb_el() -> impl Strategy<Value = LamplighterElement> {
        (prop::collection::btree_map(-4i64..=4, -3i64..=3, 0..5), -4i64..=4)
            .prop_map(|(l, s)| LamplighterElement::new(l, s))
    }

    #[test]
    fn generator_cursor_convention() {
        let m = Lamplighter;
        // Multiplying by x₀ with the cursor at p lights the lamp at -p.
        let p = m.mul(&m.pow(&m.y0(), 3), &m.x0());
        assert_eq!(p, el(&[(-3, 1)], 3));
    }

    #[test]
    fn square_root_examples() {
        let m = Lamplighter;
        assert_eq!(square_root(&m.identity()), Some(m.identity()));
        let a = el(&[(0, 1), (1, 1)], 2);
        let y = square_root(&a).unwrap();
        assert_eq!(y, el(&[(1, 1)], 1));
        assert_eq!(m.mul(&y, &y), a);
        assert_eq!(square_root(&el(&[(0, 1)], 1)), None);
        assert_eq!(square_root(&el(&[(0, 1)], 0)), None);
        assert_eq!(square_root(&el(&[(0, 2)], 0)), Some(el(&[(0, 1)], 0)));
        assert_eq!(square_root(&el(&[(0, 1)], 2)), None);
    }

    #[test]
    fn no_root_of_odd_shift_in_a_box() {
        let m = Lamplighter;
        let target = el(&[(0, 1)], 1);
        for shift in 0..=1 {
            for code in 0..5i64.pow(5) {
                let mut c = code;
                let mut lamps = BTreeMap::new();
                for n in -2..=2 {
                    lamps.insert(n, c % 5 - 2);
                    c /= 5;
                }
                let y = LamplighterElement::new(lamps, shift);
                assert_ne!(m.mul(&y, &y), target);
            }
        }
    }

    #[test]
    fn roots_of_squares_recover_the_element() {
        let m = Lamplighter;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let len = rng.gen_range(0..=6);
            let y = random_word_element(&mut rng, len);
            assert_eq!(square_root(&m.mul(&y, &y)), Some(y));
        }
    }

    #[test]
    fn eq_solve_examples() {
        let m = Lamplighter;
        let one = m.identity();
        assert_eq!(lamplighter_eq_solve(&one, &one, &one), one);
        let w = el(&[(2, -1)], 3);
        let u = el(&[(0, 1)], -1);
        assert_eq!(lamplighter_eq_solve(&u, &u, &w), w);
    }

    #[test]
    fn json_shape() {
        let e = el(&[(-1, 2), (3, -1)], 4);
        let j = serde_json::to_value(&e).unwrap();
        assert_eq!(j, serde_json::json!({"lamps": {"-1": 2, "3": -1}, "shift": 4}));
        let back: LamplighterElement =
            serde_json::from_value(serde_json::json!({"lamps": {"0": 0, "3": -1}, "shift": 1})).unwrap();
        assert_eq!(back, el(&[(3, -1)], 1));
    }

    proptest! {
        #[test]
        fn agrees_with_generic_wreath(a in arb_el(), b in arb_el()) {
            let w = WreathProduct::new(Integers, Integers);
            let m = Lamplighter;
            let generic = w.mul(&a.clone().into(), &b.clone().into());
            prop_assert_eq!(LamplighterElement::from(generic), m.mul(&a, &b));
            prop_assert_eq!(LamplighterElement::from(w.inv(&a.clone().into())), m.inv(&a));
        }

        #[test]
        fn eq_solve_substitutes_back(u in arb_el(), v in arb_el(), w in arb_el()) {
            let m = Lamplighter;
            let x = lamplighter_eq_solve(&u, &v, &w);
            let check = m.mul(&m.mul(&m.mul(&x, &m.inv(&u)), &v), &m.inv(&w));
            prop_assert!(m.is_identity(&check));
        }

        #[test]
        fn any_root_squares_back(a in arb_el()) {
            let m = Lamplighter;
            if let Some(y) = square_root(&a) {
                prop_assert_eq!(m.mul(&y, &y), a);
            }
        }

        #[test]
        fn json_round_trip(a in arb_el()) {
            let s = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<LamplighterElement>(&s).unwrap(), a);
        }
    }
}
