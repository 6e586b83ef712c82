//! Length functions, word metrics by breadth-first search, growth counts,
//! the closed-form word length on `ℤ≀ℤ` and a few computable distortion
//! quantities (compression, Følner defect).

use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::groups::{CayleyTable, FreeAbelianElement, Group, Letter, Word};
use crate::wreath::LamplighterElement;

/// A function `ℓ : H → ℕ`, expected to satisfy
/// `ℓ(h) = 0 ⇔ h = 1`, `ℓ(h) = ℓ(h⁻¹)` and `ℓ(gh) ≤ ℓ(g) + ℓ(h)`.
pub trait LengthFunction<E> {
    fn length(&self, h: &E) -> u64;
}

/// Wraps a closure as a length function.
pub struct FnLength<F>(pub F);

impl<E, F: Fn(&E) -> u64> LengthFunction<E> for FnLength<F> {
    fn length(&self, h: &E) -> u64 {
        (self.0)(h)
    }
}

/// A length function on a finite group, tabulated by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableLength {
    values: Vec<u64>,
}

impl TableLength {
    /// Word length with respect to the table's recorded generators.
    pub fn word_length(table: &CayleyTable) -> TableLength {
        TableLength {
            values: table
                .word_lengths()
                .into_iter()
                .map(|d| d.expect("table generators generate the group"))
                .collect(),
        }
    }

    /// A custom length, checked exhaustively against the three axioms.
    pub fn new(table: &CayleyTable, values: Vec<u64>) -> Result<TableLength> {
        if values.len() != table.order() {
            return Err(Error::InvalidLength(format!(
                "expected {} values, got {}",
                table.order(),
                values.len()
            )));
        }
        let ell = TableLength { values };
        check_length_axioms(table, &ell, &table.elements().collect::<Vec<_>>())?;
        Ok(ell)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

impl LengthFunction<usize> for TableLength {
    fn length(&self, h: &usize) -> u64 {
        self.values[*h]
    }
}

/// `ℓ(h) = Σ wᵢ|hᵢ|` on a free abelian group; coordinates without an
/// explicit weight have weight `1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedL1 {
    pub weights: Vec<u64>,
}

impl WeightedL1 {
    pub fn standard() -> Self {
        WeightedL1::default()
    }

    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidLength("weights must be positive".into()));
        }
        Ok(WeightedL1 { weights })
    }
}

impl LengthFunction<FreeAbelianElement> for WeightedL1 {
    fn length(&self, h: &FreeAbelianElement) -> u64 {
        h.coords()
            .iter()
            .map(|(&i, &k)| self.weights.get(i).copied().unwrap_or(1) * k.unsigned_abs())
            .sum()
    }
}

impl LengthFunction<i64> for WeightedL1 {
    fn length(&self, h: &i64) -> u64 {
        self.weights.first().copied().unwrap_or(1) * h.unsigned_abs()
    }
}

/// Word length on `ℤ≀ℤ` with respect to `S = {x₀, y₀}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LamplighterLength;

impl LengthFunction<LamplighterElement> for LamplighterLength {
    fn length(&self, h: &LamplighterElement) -> u64 {
        lamplighter_length(h)
    }
}

/// Checks the three length-function axioms on all pairs from `sample`.
pub fn check_length_axioms<G, L>(group: &G, ell: &L, sample: &[G::Elem]) -> Result<()>
where
    G: Group,
    L: LengthFunction<G::Elem>,
{
    for g in sample {
        let lg = ell.length(g);
        if (lg == 0) != group.is_identity(g) {
            return Err(Error::InvalidLength(format!("ℓ({g:?}) = {lg} violates ℓ(h) = 0 ⇔ h = 1")));
        }
        if ell.length(&group.inv(g)) != lg {
            return Err(Error::InvalidLength(format!("ℓ is not symmetric at {g:?}")));
        }
        for h in sample {
            if ell.length(&group.mul(g, h)) > lg + ell.length(h) {
                return Err(Error::InvalidLength(format!(
                    "triangle inequality fails for {g:?}, {h:?}"
                )));
            }
        }
    }
    Ok(())
}

/// The ball of radius `radius` in the Cayley graph of `⟨gens⟩`, in BFS
/// order. Each element is reached from the identity by right
/// multiplication with `gens[i]^{±1}`, tried in the order
/// `gens[0], gens[0]⁻¹, gens[1], …`.
#[derive(Debug, Clone)]
pub struct Ball<E> {
    elements: Vec<E>,
    dist: Vec<u32>,
    parent: Vec<Option<(usize, Letter)>>,
    index: HashMap<E, usize>,
    level_starts: Vec<usize>,
}

impl<E: crate::groups::Element> Ball<E> {
    pub fn enumerate<G: Group<Elem = E>>(group: &G, gens: &[E], radius: u32) -> Ball<E> {
        let mut ball = Ball::start(group);
        for _ in 0..radius {
            if !ball.grow(group, gens) {
                break;
            }
        }
        ball
    }

    fn start<G: Group<Elem = E>>(group: &G) -> Ball<E> {
        let id = group.identity();
        Ball {
            elements: vec![id.clone()],
            dist: vec![0],
            parent: vec![None],
            index: HashMap::from([(id, 0)]),
            level_starts: vec![0, 1],
        }
    }

    /// Adds the next sphere; returns `false` if it is empty.
    fn grow<G: Group<Elem = E>>(&mut self, group: &G, gens: &[E]) -> bool {
        let letters = letter_alphabet(group, gens);
        let n = self.level_starts.len() - 1;
        let (lo, hi) = (self.level_starts[n - 1], self.level_starts[n]);
        for i in lo..hi {
            for (l, s) in &letters {
                let y = group.mul(&self.elements[i], s);
                if !self.index.contains_key(&y) {
                    self.index.insert(y.clone(), self.elements.len());
                    self.elements.push(y);
                    self.dist.push(n as u32);
                    self.parent.push(Some((i, *l)));
                }
            }
        }
        self.level_starts.push(self.elements.len());
        self.elements.len() > hi
    }

    pub fn radius(&self) -> u32 {
        (self.level_starts.len() - 2) as u32
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains_key(e)
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn distance(&self, e: &E) -> Option<u32> {
        self.index.get(e).map(|&i| self.dist[i])
    }

    /// Elements at distance exactly `r`.
    pub fn sphere(&self, r: u32) -> &[E] {
        let r = r as usize;
        if r + 1 >= self.level_starts.len() {
            return &[];
        }
        &self.elements[self.level_starts[r]..self.level_starts[r + 1]]
    }

    /// `#B_r` for `r = 0..=radius`.
    pub fn cumulative_counts(&self) -> Vec<usize> {
        self.level_starts[1..].to_vec()
    }

    /// A geodesic word for `e`, generator `i` standing for `gens[i]`.
    pub fn word(&self, e: &E) -> Option<Word> {
        let mut i = self.index_of(e)?;
        let mut letters = Vec::new();
        while let Some((p, l)) = self.parent[i] {
            letters.push(l);
            i = p;
        }
        letters.reverse();
        Some(Word::free_reduce(letters))
    }
}

fn letter_alphabet<G: Group>(group: &G, gens: &[G::Elem]) -> Vec<(Letter, G::Elem)> {
    let mut out: Vec<(Letter, G::Elem)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for (l, s) in [(Letter::pos(i), g.clone()), (Letter::neg(i), group.inv(g))] {
            if !out.iter().any(|(_, t)| *t == s) {
                out.push((l, s));
            }
        }
    }
    out
}

/// `|target|_gens` if it is at most `radius_cap`.
pub fn word_length_bfs<G: Group>(
    group: &G,
    gens: &[G::Elem],
    target: &G::Elem,
    radius_cap: u32,
) -> Option<u32> {
    let mut ball = Ball::start(group);
    loop {
        if let Some(d) = ball.distance(target) {
            return Some(d);
        }
        if ball.radius() >= radius_cap || !ball.grow(group, gens) {
            return None;
        }
    }
}

/// Cursor bounds `lo ≤ 0, s ≤ hi` of the stretch the lamplighter must
/// sweep: lamp `n` is lit from cursor position `-n`.
fn sweep_bounds(e: &LamplighterElement) -> (i64, i64) {
    let s = e.shift;
    let mut lo = 0.min(s);
    let mut hi = 0.max(s);
    if let (Some((&a, _)), Some((&b, _))) = (e.lamps.first_key_value(), e.lamps.last_key_value()) {
        lo = lo.min(-b);
        hi = hi.max(-a);
    }
    (lo, hi)
}

/// `|e|_S` in closed form: all lamp values plus the shortest cursor tour
/// from `0` covering the lit positions and ending at the shift.
pub fn lamplighter_length(e: &LamplighterElement) -> u64 {
    let s = e.shift;
    let (lo, hi) = sweep_bounds(e);
    let lamps: u64 = e.lamps.values().map(|k| k.unsigned_abs()).sum();
    let left_first = lo.abs() + (hi - lo) + (hi - s).abs();
    let right_first = hi.abs() + (hi - lo) + (s - lo).abs();
    lamps + left_first.min(right_first) as u64
}

/// A geodesic word for `e` over `x₀` (generator `0`) and `y₀` (generator `1`).
pub fn lamplighter_geodesic(e: &LamplighterElement) -> Word {
    let s = e.shift;
    let (lo, hi) = sweep_bounds(e);
    let left_first = lo.abs() + (hi - lo) + (hi - s).abs();
    let right_first = hi.abs() + (hi - lo) + (s - lo).abs();
    let (first, second) = if left_first <= right_first { (lo, hi) } else { (hi, lo) };
    let mut letters = Vec::new();
    let step = |letters: &mut Vec<Letter>, from: i64, to: i64| {
        let l = if to >= from { Letter::pos(1) } else { Letter::neg(1) };
        letters.extend(std::iter::repeat_n(l, from.abs_diff(to) as usize));
    };
    step(&mut letters, 0, first);
    let dir = if second >= first { 1 } else { -1 };
    let mut p = first;
    loop {
        let k = e.lamp(-p);
        let l = if k > 0 { Letter::pos(0) } else { Letter::neg(0) };
        letters.extend(std::iter::repeat_n(l, k.unsigned_abs() as usize));
        if p == second {
            break;
        }
        step(&mut letters, p, p + dir);
        p += dir;
    }
    step(&mut letters, second, s);
    Word::free_reduce(letters)
}

/// A finite list of elements known to contain every element of length at
/// most `complete_to` (all of them for a finite group).
#[derive(Debug, Clone)]
pub struct Domain<E> {
    elements: Vec<E>,
    complete_to: Option<u64>,
}

impl<E> Domain<E> {
    pub fn finite(elements: Vec<E>) -> Self {
        Domain {
            elements,
            complete_to: None,
        }
    }

    /// Elements of a word-metric ball; complete for any length function
    /// dominating that word length.
    pub fn ball(elements: Vec<E>, radius: u64) -> Self {
        Domain {
            elements,
            complete_to: Some(radius),
        }
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    /// `#{h : ℓ(h) ≤ k}` for `k = 0..=n`.
    pub counts: Vec<u64>,
    /// Smallest `a` with `count_j ≤ a^j` for every `j ≤ k`, per level.
    pub fitted: Vec<f64>,
}

impl GrowthReport {
    pub fn count(&self) -> u64 {
        *self.counts.last().expect("level 0 is always present")
    }

    pub fn fitted_a(&self) -> f64 {
        *self.fitted.last().expect("level 0 is always present")
    }

    /// `count_k ≤ a^k` at every level.
    pub fn witnesses(&self, a: f64) -> bool {
        self.counts
            .iter()
            .enumerate()
            .all(|(k, &c)| c as f64 <= a.powi(k as i32))
    }
}

/// Smallest `a ≥ 1` with `count ≤ a^level`, nudged up against rounding.
pub fn fit_base(count: u64, level: u32) -> f64 {
    if level == 0 || count <= 1 {
        return 1.0;
    }
    let mut a = (count as f64).powf(1.0 / f64::from(level));
    while a.powi(level as i32) < count as f64 {
        a = a.next_up();
    }
    a
}

/// Counts `#{h : ℓ(h) ≤ k}` for `k ≤ n` and fits the growth base.
pub fn growth_count<E, L: LengthFunction<E>>(ell: &L, domain: &Domain<E>, n: u64) -> Result<GrowthReport> {
    if domain.complete_to.is_some_and(|r| r < n) {
        return Err(Error::NotEnumerable(n));
    }
    let mut hist = vec![0u64; n as usize + 1];
    for h in &domain.elements {
        let l = ell.length(h);
        if l <= n {
            hist[l as usize] += 1;
        }
    }
    let mut counts = Vec::with_capacity(hist.len());
    let mut fitted = Vec::with_capacity(hist.len());
    let mut acc = 0;
    let mut a: f64 = 1.0;
    for (k, c) in hist.into_iter().enumerate() {
        acc += c;
        a = a.max(fit_base(acc, k as u32));
        counts.push(acc);
        fitted.push(a);
    }
    Ok(GrowthReport { counts, fitted })
}

/// `ℓ(h) = Σ k·d_k(1, g_k)` for `h = (g_k)` with factor `k` the `k`-th entry
/// of `components` (`k ≥ 1`).
pub fn product_length<G, L>(components: &[(G, L)], h: &BTreeMap<usize, G::Elem>) -> Result<u64>
where
    G: Group,
    L: LengthFunction<G::Elem>,
{
    let mut total = 0;
    for (&k, g) in h {
        if k == 0 || k > components.len() {
            let (group, _) = components.first().ok_or(Error::InfiniteSupport(k))?;
            if group.is_identity(g) {
                continue;
            }
            return Err(Error::InfiniteSupport(k));
        }
        let (_, d) = &components[k - 1];
        total += k as u64 * d.length(g);
    }
    Ok(total)
}

/// `inf { d_Y(f(u), f(v)) : d_X(u, v) ≥ x }` over a finite sample of
/// `(source distance, image distance)` pairs.
pub fn compression_empirical(sample: &[(f64, f64)], x: f64) -> Result<f64> {
    sample
        .iter()
        .filter(|(src, _)| *src >= x)
        .map(|&(_, img)| img)
        .reduce(f64::min)
        .ok_or(Error::NoQualifyingPair(x))
}

/// `Σ_{x ∈ X} |Ax △ A| / |A|`.
pub fn folner_defect<G: Group>(group: &G, gens: &[G::Elem], a: &[G::Elem]) -> Result<Ratio<u64>> {
    let set: HashSet<&G::Elem> = a.iter().collect();
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut total = 0u64;
    for x in gens {
        let translate: HashSet<G::Elem> = set.iter().map(|e| group.mul(e, x)).collect();
        let missing = set.iter().filter(|e| !translate.contains(**e)).count();
        let extra = translate.iter().filter(|e| !set.contains(e)).count();
        total += (missing + extra) as u64;
    }
    Ok(Ratio::new(total, set.len() as u64))
}

/// Largest subset size accepted by [`min_folner_set`].
pub const FOLNER_SEARCH_LIMIT: usize = 12;

/// The first subset of `pool`, by size then lexicographic position, whose
/// Følner defect is at most `eps`, searching sizes up to `max_size`.
pub fn min_folner_set<G: Group>(
    group: &G,
    gens: &[G::Elem],
    pool: &[G::Elem],
    eps: Ratio<u64>,
    max_size: usize,
) -> Result<Option<Vec<G::Elem>>> {
    if max_size > FOLNER_SEARCH_LIMIT {
        return Err(Error::InvalidGroup(format!(
            "subset size {max_size} exceeds the exhaustive limit {FOLNER_SEARCH_LIMIT}"
        )));
    }
    let pool: Vec<G::Elem> = pool.iter().unique().cloned().collect();
    for size in 1..=max_size.min(pool.len()) {
        for subset in pool.iter().cloned().combinations(size) {
            if folner_defect(group, gens, &subset)? <= eps {
                return Ok(Some(subset));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{Cyclic, FreeAbelian, Integers};
    use crate::wreath::Lamplighter;
    use proptest::prelude::*;

    fn el(lamps: &[(i64, i64)], shift: i64) -> LamplighterElement {
        LamplighterElement::new(lamps.iter().copied().collect(), shift)
    }

    #[test]
    fn bfs_basics() {
        let m = Lamplighter;
        let s = m.generators();
        assert_eq!(word_length_bfs(&m, &s, &m.identity(), 0), Some(0));
        assert_eq!(word_length_bfs(&m, &s, &m.x0(), 3), Some(1));
        assert_eq!(word_length_bfs(&m, &s, &el(&[(0, 1), (1, 1)], 0), 4), Some(4));
        assert_eq!(word_length_bfs(&m, &s, &el(&[(0, 1), (1, 1)], 0), 3), None);
    }

    #[test]
    fn lamplighter_ball_sizes() {
        let m = Lamplighter;
        let ball = Ball::enumerate(&m, &m.generators(), 10);
        assert_eq!(
            ball.cumulative_counts(),
            vec![1, 5, 17, 53, 153, 421, 1125, 2937, 7537, 19093, 47881]
        );
    }

    #[test]
    fn closed_form_matches_bfs_on_small_ball() {
        let m = Lamplighter;
        let ball = Ball::enumerate(&m, &m.generators(), 6);
        for e in ball.elements() {
            assert_eq!(lamplighter_length(e), u64::from(ball.distance(e).unwrap()));
            let w = lamplighter_geodesic(e);
            assert_eq!(w.len() as u64, lamplighter_length(e));
        }
        assert_eq!(lamplighter_length(&el(&[(0, 3)], 0)), 3);
        let far = el(&[(-1, 1), (2, 1)], 0);
        assert_eq!(lamplighter_length(&far), 8);
        assert_eq!(word_length_bfs(&m, &m.generators(), &far, 10), Some(8));
    }

    #[test]
    fn ball_words_are_geodesic() {
        let g = FreeAbelian::new(2);
        let ball = Ball::enumerate(&g, &g.basis(), 3);
        let assign: BTreeMap<usize, FreeAbelianElement> = g.basis().into_iter().enumerate().collect();
        for e in ball.elements() {
            let w = ball.word(e).unwrap();
            assert_eq!(w.len() as u32, ball.distance(e).unwrap());
            assert_eq!(&crate::groups::evaluate_word(&g, &assign, &w).unwrap(), e);
        }
        assert_eq!(ball.sphere(2).len(), 8);
    }

    #[test]
    fn growth_examples() {
        let z2 = FreeAbelian::new(2);
        let ball = Ball::enumerate(&z2, &z2.basis(), 2);
        let dom = Domain::ball(ball.elements().to_vec(), 2);
        let r = growth_count(&WeightedL1::standard(), &dom, 2).unwrap();
        assert_eq!(r.counts, vec![1, 5, 13]);
        assert!(r.witnesses(r.fitted_a()));
        assert_eq!(growth_count(&WeightedL1::standard(), &dom, 3), Err(Error::NotEnumerable(3)));

        let (z5, _) = CayleyTable::from_group(&Cyclic::new(5), &[1]);
        let ell = TableLength::word_length(&z5);
        let dom = Domain::finite(z5.elements().collect());
        let r = growth_count(&ell, &dom, 2).unwrap();
        assert_eq!(r.counts, vec![1, 3, 5]);
        assert_eq!(growth_count(&ell, &dom, 0).unwrap().count(), 1);
        assert!(r.witnesses(r.fitted_a()));
        assert!(!r.witnesses(r.fitted_a() * 0.999));
    }

    #[test]
    fn table_length_validation() {
        let (z5, _) = CayleyTable::from_group(&Cyclic::new(5), &[1]);
        // BFS order of ℤ/5 from the generator 1: 0, 1, 4, 2, 3.
        assert_eq!(TableLength::word_length(&z5).values(), &[0, 1, 1, 2, 2]);
        assert!(TableLength::new(&z5, vec![0, 1, 1, 2, 2]).is_ok());
        assert!(TableLength::new(&z5, vec![0, 2, 2, 1, 1]).is_ok());
        assert!(TableLength::new(&z5, vec![0, 1, 2, 2, 2]).is_err());
        assert!(TableLength::new(&z5, vec![0, 1, 1, 5, 5]).is_err());
        assert!(TableLength::new(&z5, vec![0, 1, 1, 0, 0]).is_err());
        assert!(TableLength::new(&z5, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn product_length_examples() {
        let (z5, _) = CayleyTable::from_group(&Cyclic::new(5), &[1]);
        let comps: Vec<(CayleyTable, TableLength)> =
            (0..3).map(|_| (z5.clone(), TableLength::word_length(&z5))).collect();
        let idx = |x: u64| (0..5).find(|&i| z5.label(i) == x.to_string()).unwrap();
        assert_eq!(product_length(&comps, &BTreeMap::new()).unwrap(), 0);
        assert_eq!(product_length(&comps, &BTreeMap::from([(3, idx(2))])).unwrap(), 6);
        assert_eq!(product_length(&comps, &BTreeMap::from([(1, idx(1)), (2, idx(2))])).unwrap(), 5);
        assert_eq!(
            product_length(&comps, &BTreeMap::from([(4, idx(1))])),
            Err(Error::InfiniteSupport(4))
        );
        assert_eq!(product_length(&comps, &BTreeMap::from([(4, 0)])).unwrap(), 0);

        // d₁ = 1 and d₂ = 4 in ℤ.
        let z: Vec<(Integers, WeightedL1)> = vec![(Integers, WeightedL1::standard()); 2];
        assert_eq!(product_length(&z, &BTreeMap::from([(1, 1), (2, -4)])).unwrap(), 9);
    }

    #[test]
    fn compression_examples() {
        let constant = [(1.0, 0.0), (3.0, 0.0), (5.0, 0.0)];
        assert_eq!(compression_empirical(&constant, 2.0).unwrap(), 0.0);
        let iso = [(1.0, 1.0), (3.0, 3.0), (5.0, 5.0)];
        assert_eq!(compression_empirical(&iso, 2.0).unwrap(), 3.0);
        assert_eq!(compression_empirical(&iso, 6.0), Err(Error::NoQualifyingPair(6.0)));
    }

    #[test]
    fn folner_examples() {
        let (z5, _) = CayleyTable::from_group(&Cyclic::new(5), &[1]);
        let all: Vec<usize> = z5.elements().collect();
        assert_eq!(folner_defect(&z5, z5.generators(), &all).unwrap(), Ratio::from_integer(0));
        for m in 1..8 {
            let a: Vec<i64> = (0..m).collect();
            assert_eq!(folner_defect(&Integers, &[1], &a).unwrap(), Ratio::new(2, m as u64));
        }
        let m = Lamplighter;
        assert_eq!(
            folner_defect(&m, &m.generators(), &[m.identity()]).unwrap(),
            Ratio::from_integer(4)
        );
        assert_eq!(folner_defect(&m, &m.generators(), &[]), Err(Error::EmptySet));
    }

    #[test]
    fn folner_search() {
        let pool: Vec<i64> = (-6..=6).collect();
        let best = min_folner_set(&Integers, &[1], &pool, Ratio::new(1, 3), 12).unwrap().unwrap();
        assert_eq!(best.len(), 6);
        assert!(min_folner_set(&Integers, &[1], &pool, Ratio::new(1, 3), 5).unwrap().is_none());
        assert!(min_folner_set(&Integers, &[1], &pool, Ratio::new(1, 3), 13).is_err());
    }

    fn arb_lamp() -> impl Strategy<Value = LamplighterElement> {
        (prop::collection::btree_map(-4i64..=4, -2i64..=2, 0..4), -4i64..=4)
            .prop_map(|(l, s)| LamplighterElement::new(l, s))
    }

    proptest! {
        #[test]
        fn lamplighter_length_axioms(a in arb_lamp(), b in arb_lamp()) {
            let m = Lamplighter;
            check_length_axioms(&m, &LamplighterLength, &[a.clone(), b.clone()]).unwrap();
            let w = lamplighter_geodesic(&a);
            let assign = BTreeMap::from([(0, m.x0()), (1, m.y0())]);
            prop_assert_eq!(crate::groups::evaluate_word(&m, &assign, &w).unwrap(), a.clone());
            prop_assert_eq!(w.len() as u64, lamplighter_length(&a));
        }

        #[test]
        fn compression_monotone_in_x(
            sample in prop::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..20),
            x in 0.0f64..5.0,
            dx in 0.0f64..5.0,
        ) {
            if let (Ok(lo), Ok(hi)) = (compression_empirical(&sample, x), compression_empirical(&sample, x + dx)) {
                prop_assert!(lo <= hi);
            }
        }
    }
}
