//! Parallelograms `u₁u₂⁻¹u₃u₄⁻¹ = 1`, the translate criteria, and a greedy
//! parallelogram-free subset of `ℤ≀ℤ` of exponential growth.

use std::collections::{HashMap, HashSet};

use log::{debug, info};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::Group;
use crate::metrics::{lamplighter_length, Ball};
use crate::wreath::{square_root, Lamplighter, LamplighterElement};

/// A parallelogram `(u₁, u₂, u₃, u₄)` in `set`, found by solving
/// `u₄ = u₁u₂⁻¹u₃` for every admissible triple.
pub fn find_parallelogram<G: Group>(group: &G, set: &[G::Elem]) -> Option<[G::Elem; 4]> {
    let members: HashSet<&G::Elem> = set.iter().collect();
    let uniq: Vec<&G::Elem> = {
        let mut seen = HashSet::new();
        set.iter().filter(|e| seen.insert(*e)).collect()
    };
    for &u1 in &uniq {
        for &u2 in &uniq {
            if u1 == u2 {
                continue;
            }
            let q = group.mul(u1, &group.inv(u2));
            for &u3 in &uniq {
                if u3 == u2 {
                    continue;
                }
                let u4 = group.mul(&q, u3);
                if u4 != *u3 && u4 != *u1 && members.contains(&u4) {
                    return Some([u1.clone(), u2.clone(), u3.clone(), u4]);
                }
            }
        }
    }
    None
}

pub fn is_parallelogram_free<G: Group>(group: &G, set: &[G::Elem]) -> bool {
    find_parallelogram(group, set).is_none()
}

/// Which translates a translate criterion intersects with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `#(P ∩ gP) ≤ 1`.
    Left,
    /// `#(P ∩ Pg) ≤ 1`.
    Right,
}

/// Checks `#(P ∩ gP) ≤ 1` (or `#(P ∩ Pg) ≤ 1`) for every nontrivial `g`
/// in `pool`. Without a pool every quotient of distinct members is tested,
/// which covers all possible violations.
pub fn translate_criterion_check<G: Group>(
    group: &G,
    set: &[G::Elem],
    pool: Option<&[G::Elem]>,
    side: Side,
) -> bool {
    let uniq: Vec<&G::Elem> = {
        let mut seen = HashSet::new();
        set.iter().filter(|e| seen.insert(*e)).collect()
    };
    match pool {
        None => {
            // P ∩ gP ∋ x ⇔ x = g y with y ∈ P, so count pairs per quotient.
            let mut counts: HashMap<G::Elem, u32> = HashMap::new();
            for &x in &uniq {
                for &y in &uniq {
                    if x == y {
                        continue;
                    }
                    let g = match side {
                        Side::Left => group.mul(x, &group.inv(y)),
                        Side::Right => group.mul(&group.inv(y), x),
                    };
                    let c = counts.entry(g).or_insert(0);
                    *c += 1;
                    if *c > 1 {
                        return false;
                    }
                }
            }
            true
        }
        Some(pool) => {
            let members: HashSet<&G::Elem> = uniq.iter().copied().collect();
            pool.iter().filter(|g| !group.is_identity(g)).all(|g| {
                let hits = uniq
                    .iter()
                    .filter(|y| {
                        let t = match side {
                            Side::Left => group.mul(g, y),
                            Side::Right => group.mul(y, g),
                        };
                        members.contains(&t)
                    })
                    .count();
                hits <= 1
            })
        }
    }
}

pub fn left_translate<G: Group>(group: &G, g: &G::Elem, set: &[G::Elem]) -> Vec<G::Elem> {
    set.iter().map(|x| group.mul(g, x)).collect()
}

pub fn right_translate<G: Group>(group: &G, set: &[G::Elem], g: &G::Elem) -> Vec<G::Elem> {
    set.iter().map(|x| group.mul(x, g)).collect()
}

/// The working set `N` of the greedy construction together with the
/// quotients `Q = {w v⁻¹ : v, w ∈ N}`, so that `x = w v⁻¹ u` is detected
/// as `x u⁻¹ ∈ Q`.
#[derive(Debug, Clone, Default)]
pub struct AdmissibilityIndex {
    members: Vec<LamplighterElement>,
    member_set: HashSet<LamplighterElement>,
    quotients: HashSet<LamplighterElement>,
}

impl AdmissibilityIndex {
    pub fn new() -> Self {
        AdmissibilityIndex::default()
    }

    pub fn from_members(members: &[LamplighterElement]) -> Self {
        let mut idx = AdmissibilityIndex::new();
        for m in members {
            idx.insert(m.clone());
        }
        idx
    }

    pub fn members(&self) -> &[LamplighterElement] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn insert(&mut self, x: LamplighterElement) {
        if !self.member_set.insert(x.clone()) {
            return;
        }
        let m = Lamplighter;
        let xi = m.inv(&x);
        for u in &self.members {
            self.quotients.insert(m.mul(&x, &m.inv(u)));
            self.quotients.insert(m.mul(u, &xi));
        }
        self.quotients.insert(m.identity());
        self.members.push(x);
    }

    /// `x ∈ N` (equation `x = u`).
    pub fn violates_membership(&self, x: &LamplighterElement) -> bool {
        self.member_set.contains(x)
    }

    /// `x u⁻¹ v w⁻¹ = 1` for some `u, v, w ∈ N`.
    pub fn violates_triple(&self, x: &LamplighterElement) -> bool {
        let m = Lamplighter;
        self.members
            .iter()
            .any(|u| self.quotients.contains(&m.mul(x, &m.inv(u))))
    }

    /// `x u⁻¹ x v⁻¹ = 1` for some `u, v ∈ N`, checked as `x u⁻¹ x ∈ N`.
    pub fn violates_square_direct(&self, x: &LamplighterElement) -> bool {
        let m = Lamplighter;
        self.members
            .iter()
            .any(|u| self.member_set.contains(&m.mul(&m.mul(x, &m.inv(u)), x)))
    }

    /// The same condition via square roots: `x = √(v u⁻¹) · u`.
    pub fn violates_square_by_roots(&self, x: &LamplighterElement) -> bool {
        let m = Lamplighter;
        self.members.iter().any(|u| {
            let ui = m.inv(u);
            self.members.iter().any(|v| {
                square_root(&m.mul(v, &ui)).is_some_and(|y| m.mul(&y, u) == *x)
            })
        })
    }

    /// None of the three equations holds, so `N ∪ {x}` stays
    /// parallelogram-free.
    pub fn admissible(&self, x: &LamplighterElement) -> bool {
        !self.violates_membership(x) && !self.violates_triple(x) && !self.violates_square_direct(x)
    }

    /// Distinct solutions `x` of each equation family:
    /// `(#{x = u}, #{x = w v⁻¹ u}, #{(x u⁻¹)² = v u⁻¹})`.
    pub fn solution_counts(&self) -> (usize, usize, usize) {
        let m = Lamplighter;
        let mut triple = HashSet::new();
        let mut square = HashSet::new();
        for u in &self.members {
            let ui = m.inv(u);
            for q in &self.quotients {
                triple.insert(m.mul(q, u));
            }
            for v in &self.members {
                if let Some(y) = square_root(&m.mul(v, &ui)) {
                    square.insert(m.mul(&y, u));
                }
            }
        }
        (self.members.len(), triple.len(), square.len())
    }
}

/// `x` is admissible for `N`: `x ∉ N`, `x ≠ w v⁻¹ u` and `x u⁻¹ x v⁻¹ ≠ 1`
/// for all `u, v, w ∈ N`. Both routes for the last equation are evaluated
/// and must agree.
pub fn candidate_admissible(x: &LamplighterElement, n: &[LamplighterElement]) -> bool {
    let idx = AdmissibilityIndex::from_members(n);
    let direct = idx.violates_square_direct(x);
    assert_eq!(
        direct,
        idx.violates_square_by_roots(x),
        "square-root route disagrees with the direct check"
    );
    !idx.violates_membership(x) && !idx.violates_triple(x) && !direct
}

/// Per-radius record of the greedy construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadiusLog {
    pub radius: u32,
    /// `#B_r`.
    pub ball: usize,
    /// `#P_r`.
    pub members: usize,
    /// `(n, #sol₁, #sol₂, #sol₃)` for `N = P_{r−1}`, when recorded.
    pub solutions: Option<(usize, usize, usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParafreeSet {
    /// Members in acceptance order; the identity comes first.
    pub members: Vec<LamplighterElement>,
    pub radius_built: u32,
    pub growth_log: Vec<RadiusLog>,
}

/// Default radius cap for [`greedy_build`].
pub const DEFAULT_RADIUS_CAP: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyConfig {
    pub radius: u32,
    pub radius_cap: u32,
    /// Records the per-step solution counts (cubic in `#N`).
    pub record_solutions: bool,
}

impl GreedyConfig {
    pub fn new(radius: u32) -> Self {
        GreedyConfig {
            radius,
            radius_cap: DEFAULT_RADIUS_CAP,
            record_solutions: true,
        }
    }
}

/// Builds `P_0 = {1} ⊆ P_1 ⊆ … ⊆ P_r` with `P_r` a maximal
/// parallelogram-free extension of `P_{r−1}` inside `B_r`, scanning each
/// sphere once in canonical-key order.
pub fn greedy_build(radius: u32) -> Result<ParafreeSet> {
    greedy_build_with(GreedyConfig::new(radius))
}

pub fn greedy_build_with(cfg: GreedyConfig) -> Result<ParafreeSet> {
    if cfg.radius > cfg.radius_cap {
        return Err(Error::RadiusCapExceeded { cap: cfg.radius_cap });
    }
    let m = Lamplighter;
    let ball = Ball::enumerate(&m, &m.generators(), cfg.radius);
    let mut idx = AdmissibilityIndex::new();
    idx.insert(m.identity());
    let mut log = vec![RadiusLog {
        radius: 0,
        ball: 1,
        members: 1,
        solutions: None,
    }];
    for r in 1..=cfg.radius {
        let solutions = cfg.record_solutions.then(|| {
            let (s1, s2, s3) = idx.solution_counts();
            (idx.len(), s1, s2, s3)
        });
        let mut sphere: Vec<&LamplighterElement> = ball.sphere(r).iter().collect();
        sphere.sort_by_cached_key(|e| m.canonical_key(e));
        for x in sphere {
            if idx.admissible(x) {
                idx.insert(x.clone());
            }
        }
        debug!("radius {r}: {} members in a ball of {}", idx.len(), ball.cumulative_counts()[r as usize]);
        log.push(RadiusLog {
            radius: r,
            ball: ball.cumulative_counts()[r as usize],
            members: idx.len(),
            solutions,
        });
    }
    info!("parallelogram-free set of {} elements up to radius {}", idx.len(), cfg.radius);
    Ok(ParafreeSet {
        members: idx.members().to_vec(),
        radius_built: cfg.radius,
        growth_log: log,
    })
}

impl ParafreeSet {
    /// `#{w ∈ P : λ|w|_S < n + 1}` for `λ = 1/q` and `n = 0..=max_n`.
    pub fn stratum_counts(&self, q: u64, max_n: u64) -> Vec<u64> {
        (0..=max_n)
            .map(|n| {
                self.members
                    .iter()
                    .filter(|w| lamplighter_length(w) < q * (n + 1))
                    .count() as u64
            })
            .collect()
    }

    /// The largest `c` with `count_n ≥ c^n` for `n = 1..=max_n`.
    pub fn fitted_growth(&self, q: u64, max_n: u64) -> f64 {
        self.stratum_counts(q, max_n)
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| (c as f64).powf(1.0 / n as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// The largest `k` with `#B_r ≥ k^r` over the logged radii.
pub fn fitted_ball_base(log: &[RadiusLog]) -> f64 {
    log.iter()
        .filter(|l| l.radius > 0)
        .map(|l| (l.ball as f64).powf(1.0 / f64::from(l.radius)))
        .fold(f64::INFINITY, f64::min)
}

/// Outcome of checking a built set against the counting argument.
#[derive(Debug, Clone, Serialize)]
pub struct GreedyVerification {
    pub parallelogram_free: bool,
    pub left_translates: bool,
    pub right_translates: bool,
    pub solution_bounds: bool,
    pub strictly_increasing: bool,
    pub fitted_k: f64,
    /// Radii where `#P_r > ½ k^{r/3}` fails.
    pub growth_failures: Vec<u32>,
    /// Radii where it holds with less than 10% slack.
    pub growth_tight: Vec<u32>,
    pub fitted_c: f64,
}

impl GreedyVerification {
    pub fn passed(&self) -> bool {
        self.parallelogram_free
            && self.left_translates
            && self.right_translates
            && self.solution_bounds
            && self.strictly_increasing
            && self.growth_failures.is_empty()
            && self.fitted_c > 1.0
    }
}

pub fn verify_greedy(set: &ParafreeSet) -> GreedyVerification {
    let m = Lamplighter;
    let k = fitted_ball_base(&set.growth_log);
    let mut growth_failures = Vec::new();
    let mut growth_tight = Vec::new();
    for l in &set.growth_log {
        let bound = 0.5 * k.powf(f64::from(l.radius) / 3.0);
        let count = l.members as f64;
        if count <= bound {
            growth_failures.push(l.radius);
        } else if count < 1.1 * bound {
            growth_tight.push(l.radius);
        }
    }
    let solution_bounds = set.growth_log.iter().all(|l| match l.solutions {
        Some((n, s1, s2, s3)) => s1 == n && s2 <= n.pow(3) && s3 <= n.pow(2),
        None => true,
    });
    let strictly_increasing = set.growth_log.windows(2).all(|w| w[1].members > w[0].members);
    GreedyVerification {
        parallelogram_free: is_parallelogram_free(&m, &set.members),
        left_translates: translate_criterion_check(&m, &set.members, None, Side::Left),
        right_translates: translate_criterion_check(&m, &set.members, None, Side::Right),
        solution_bounds,
        strictly_increasing,
        fitted_k: k,
        growth_failures,
        growth_tight,
        fitted_c: set.fitted_growth(1, u64::from(set.radius_built)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m() -> Lamplighter {
        Lamplighter
    }

    #[test]
    fn small_examples() {
        let g = m();
        assert!(is_parallelogram_free(&g, &[g.identity()]));
        assert!(translate_criterion_check(&g, &[g.identity()], None, Side::Left));
        let ball = Ball::enumerate(&g, &g.generators(), 2);
        for a in ball.elements() {
            for b in ball.elements() {
                assert!(is_parallelogram_free(&g, &[a.clone(), b.clone()]));
            }
        }
        // 1·x₀⁻¹·(x₀y₀)·y₀⁻¹ = 1.
        let set = [g.identity(), g.x0(), g.mul(&g.x0(), &g.y0()), g.y0()];
        let p = find_parallelogram(&g, &set).unwrap();
        let prod = g.mul(&g.mul(&g.mul(&p[0], &g.inv(&p[1])), &p[2]), &g.inv(&p[3]));
        assert!(g.is_identity(&prod));
        assert!(!translate_criterion_check(&g, &set, None, Side::Left));
        assert!(!translate_criterion_check(&g, &set, None, Side::Right));
    }

    #[test]
    fn criteria_agree_on_random_subsets() {
        let g = m();
        let ball = Ball::enumerate(&g, &g.generators(), 4);
        let pool = ball.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..300 {
            let size = rng.gen_range(1..=6);
            let mut set: Vec<LamplighterElement> = pool.choose_multiple(&mut rng, size).cloned().collect();
            if trial % 2 == 0 && set.len() >= 3 {
                // Plant the fourth vertex when it stays in the ball.
                let u4 = g.mul(&g.mul(&set[0], &g.inv(&set[1])), &set[2]);
                if ball.contains(&u4) && set.len() < 6 {
                    set.push(u4);
                }
            }
            let a = is_parallelogram_free(&g, &set);
            assert_eq!(a, translate_criterion_check(&g, &set, None, Side::Left));
            assert_eq!(a, translate_criterion_check(&g, &set, None, Side::Right));
            let quotients: Vec<LamplighterElement> = set
                .iter()
                .flat_map(|x| set.iter().map(move |y| g.mul(x, &g.inv(y))))
                .collect();
            assert_eq!(a, translate_criterion_check(&g, &set, Some(&quotients), Side::Left));
        }
    }

    #[test]
    fn admissibility_routes_agree() {
        let g = m();
        let ball = Ball::enumerate(&g, &g.generators(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert!(candidate_admissible(&g.x0(), &[g.identity()]));
        assert!(!candidate_admissible(&g.identity(), &[g.identity()]));
        for _ in 0..200 {
            let size = rng.gen_range(1..6);
            let n: Vec<LamplighterElement> = ball.elements().choose_multiple(&mut rng, size).cloned().collect();
            let idx = AdmissibilityIndex::from_members(&n);
            for x in ball.elements().choose_multiple(&mut rng, 10) {
                assert_eq!(idx.violates_square_direct(x), idx.violates_square_by_roots(x));
                if is_parallelogram_free(&g, &n) && !n.contains(x) {
                    let mut bigger = n.clone();
                    bigger.push(x.clone());
                    assert_eq!(idx.admissible(x), is_parallelogram_free(&g, &bigger));
                }
            }
        }
    }

    #[test]
    fn greedy_small_radii() {
        let p0 = greedy_build(0).unwrap();
        assert_eq!(p0.members, vec![m().identity()]);
        let p1 = greedy_build(1).unwrap();
        assert!(is_parallelogram_free(&m(), &p1.members));
        // Maximality inside B₁.
        let ball = Ball::enumerate(&m(), &m().generators(), 1);
        for x in ball.elements() {
            if !p1.members.contains(x) {
                let mut bigger = p1.members.clone();
                bigger.push(x.clone());
                assert!(!is_parallelogram_free(&m(), &bigger));
            }
        }
        let p3 = greedy_build(3).unwrap();
        assert!(p3.members.starts_with(&p1.members));
        let v = verify_greedy(&p3);
        assert!(v.passed(), "{v:?}");
        assert_eq!(greedy_build(7).unwrap_err(), Error::RadiusCapExceeded { cap: 6 });
    }
}
