//! The three-stage embedding `H ≤ V = A≀H ≤ K ≤ V W̄r ℤ` and
//! `H ↪ G = ⟨S ∪ {g}⟩ ≤ K Wr M` for a finite group `H`, with certificates
//! for both sides of `θ|h|_X ≤ ℓ(h) ≤ |h|_X`.

use std::collections::BTreeMap;

use log::{debug, info};
use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{evaluate_word, CayleyTable, FreeAbelian, FreeAbelianElement, Group, Letter, Word};
use crate::magnus::{magnus_image, module_form, verify_magnus_bound};
use crate::metrics::{growth_count, lamplighter_geodesic, lamplighter_length, Ball, Domain, LengthFunction, TableLength};
use crate::parafree::{greedy_build_with, GreedyConfig, ParafreeSet};
use crate::ring::GroupRingElement;
use crate::wreath::{
    wreath_conj_power, Lamplighter, LamplighterElement, StepElement, StepGroup, WreathElement, WreathProduct,
};

pub type VGroup = WreathProduct<FreeAbelian, CayleyTable>;
pub type VElem = WreathElement<FreeAbelianElement, usize>;
pub type KGroup = StepGroup<VGroup>;
pub type KElem = StepElement<VElem>;
pub type GGroup = WreathProduct<KGroup, Lamplighter>;
pub type GElem = WreathElement<KElem, LamplighterElement>;

/// Generator indices of words over `X = S ∪ {g}`.
pub const X0: usize = 0;
pub const Y0: usize = 1;
pub const G: usize = 2;

/// Names for rendering words over `X`.
pub fn x_name(i: usize) -> String {
    match i {
        X0 => "x0".into(),
        Y0 => "y0".into(),
        G => "g".into(),
        _ => format!("z{i}"),
    }
}

/// Which step generator a `u`-entry is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    /// `f_{1,h}`, with values `a_h^{ℓ(h)} h`.
    Twisted,
    /// `f_{2,h}`, with values `a_h`.
    Plain,
}

/// `u_i`, its partner `w_i ∈ P₀` and a geodesic `S`-word for `w_i`.
#[derive(Debug, Clone)]
pub struct PairedGenerator {
    pub h: usize,
    pub kind: StepKind,
    pub u: KElem,
    pub w: LamplighterElement,
    pub w_word: Word,
}

#[derive(Debug, Clone)]
pub struct EmbeddingContext {
    pub h_group: CayleyTable,
    pub ell: TableLength,
    pub v: VGroup,
    pub k: KGroup,
    pub m: Lamplighter,
    pub g_group: GGroup,
    /// Nontrivial elements of `H` ordered by `(ℓ, canonical key)`.
    pub order: Vec<usize>,
    /// `u_1, u_2, …` in listing order.
    pub pairs: Vec<PairedGenerator>,
    pub t: KElem,
    /// The function `g : M → K`, identity values omitted.
    pub g: BTreeMap<LamplighterElement, KElem>,
    /// `λ = 1/q`.
    pub q: u64,
    pub radius: u32,
    pub parafree: ParafreeSet,
    /// Minimal base witnessing `#{ℓ ≤ n} ≤ a^n` on `H`.
    pub a: f64,
    /// Largest `c` with `#{w ∈ P : λ|w|_S < n+1} ≥ c^n` up to `n = max ℓ`.
    pub c: f64,
}

/// Default radius cap for building the parallelogram-free set.
pub const DEFAULT_RADIUS_CAP: u32 = 10;

impl EmbeddingContext {
    pub fn max_length(&self) -> u64 {
        self.ell.max()
    }

    /// `θ = (8 + 16λ⁻¹)⁻¹`.
    pub fn theta(&self) -> Ratio<u64> {
        Ratio::new(1, 8 + 16 * self.q)
    }

    /// `a_h` as an element of `V`.
    pub fn a_h(&self, h: usize) -> VElem {
        self.v.lift_base(FreeAbelianElement::basis(h))
    }

    /// `a_h^{ℓ(h)} h`.
    pub fn twisted(&self, h: usize) -> VElem {
        let l = self.ell.length(&h) as i64;
        self.v.base_then_top(FreeAbelianElement::basis(h).scale(l), h)
    }

    /// `Y = {a_h, a_h^{ℓ(h)}h}` in the order of [`Self::order`].
    pub fn y_generators(&self) -> Vec<VElem> {
        self.order
            .iter()
            .flat_map(|&h| [self.twisted(h), self.a_h(h)])
            .collect()
    }

    /// `h ∈ H ≤ V`.
    pub fn h_in_v(&self, h: usize) -> VElem {
        self.v.lift_top(h)
    }

    /// `h ∈ V ≤ K`: the function with the single value `h` at `0`.
    pub fn h_in_k(&self, h: usize) -> KElem {
        self.k.at_zero(self.h_in_v(h))
    }

    /// `h ∈ K ≤ G`: the base function with value `h` at `1 ∈ M`.
    pub fn h_in_g(&self, h: usize) -> GElem {
        self.g_group.from_base(BTreeMap::from([(self.m.identity(), self.h_in_k(h))]))
    }

    pub fn g_eval(&self, x: &LamplighterElement) -> KElem {
        g_eval(self, x)
    }

    /// The generators `x₀, y₀, g` of `G`.
    pub fn x_generators(&self) -> BTreeMap<usize, GElem> {
        BTreeMap::from([
            (X0, self.g_group.lift_top(self.m.x0())),
            (Y0, self.g_group.lift_top(self.m.y0())),
            (G, self.g_group.from_base(self.g.clone())),
        ])
    }

    pub fn pair_of(&self, h: usize, kind: StepKind) -> &PairedGenerator {
        self.pairs
            .iter()
            .find(|p| p.h == h && p.kind == kind)
            .expect("every nontrivial h has both step generators")
    }

    /// `#{w ∈ P₀ : λ|w|_S < n+1}` for `n = 0..=max ℓ`.
    pub fn stratum_counts(&self) -> Vec<u64> {
        (0..=self.max_length())
            .map(|n| {
                1 + self
                    .pairs
                    .iter()
                    .filter(|p| lamplighter_length(&p.w) < self.q * (n + 1))
                    .count() as u64
            })
            .collect()
    }

    /// Checks generation of `V` by `Y` on `H`, the stratified counts,
    /// `λ|w_i|_S < ℓ(h)+1`, and the definition of `g`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::BoundViolation(m));
        let ell = &self.ell;
        for (n, &c) in self.stratum_counts().iter().enumerate() {
            let want = 2 * self.order.iter().filter(|&&h| ell.length(&h) <= n as u64).count() as u64 + 1;
            if c != want {
                return fail(format!("stratum {n} has {c} elements, expected {want}"));
            }
        }
        for p in &self.pairs {
            if lamplighter_length(&p.w) >= self.q * (ell.length(&p.h) + 1) {
                return fail(format!("w for h = {} is too long", p.h));
            }
            if self.g_eval(&p.w) != p.u {
                return fail("g(w_i) differs from u_i".into());
            }
            if p.w_word.len() as u64 != lamplighter_length(&p.w) {
                return fail("stored S-word is not geodesic".into());
            }
        }
        if self.g_eval(&self.m.identity()) != self.t {
            return fail("g(1) differs from t".into());
        }
        if self.g.len() != self.pairs.len() + 1 {
            return fail("g has support outside P₀".into());
        }
        // Y generates V: every h is a_h^{-ℓ} (a_h^ℓ h), and each a_h lies in Y.
        for &h in &self.order {
            let l = ell.length(&h) as i64;
            let prod = self.v.mul(&self.v.pow(&self.a_h(h), -l), &self.twisted(h));
            if prod != self.h_in_v(h) {
                return fail(format!("a_h^-ℓ (a_h^ℓ h) differs from h for h = {h}"));
            }
        }
        Ok(())
    }
}

/// Builds the context for finite `H` with length `ell`. `λ = 1/q` for the
/// smallest `q ≥ q_min` whose strata are large enough inside the
/// parallelogram-free set grown to `radius_cap`.
pub fn build_context(h_group: &CayleyTable, ell: &TableLength, q_min: u64, radius_cap: u32) -> Result<EmbeddingContext> {
    if ell.values().len() != h_group.order() {
        return Err(Error::InvalidLength("length table does not match the group".into()));
    }
    let mut order: Vec<usize> = h_group.elements().filter(|&h| h != 0).collect();
    order.sort_by_cached_key(|h| (ell.length(h), h_group.canonical_key(h)));
    let max_l = ell.max();
    let m = Lamplighter;
    // Smallest radius that could serve q = q_min.
    let needed = |q: u64| q * (max_l + 1) - 1;
    let q_min = q_min.max(1);
    if needed(q_min) > u64::from(radius_cap) {
        return Err(Error::InsufficientStrata(format!(
            "λ = 1/{q_min} needs radius {} beyond the cap {radius_cap}",
            needed(q_min)
        )));
    }
    let parafree = greedy_build_with(GreedyConfig {
        radius: radius_cap,
        radius_cap,
        record_solutions: false,
    })?;
    let mut q = q_min;
    let strata = loop {
        if needed(q) > u64::from(radius_cap) {
            return Err(Error::InsufficientStrata(format!(
                "no λ = 1/q with q ≥ {q_min} fits radius cap {radius_cap}"
            )));
        }
        match stratify(&parafree, &order, ell, q) {
            Some(s) => break s,
            None => {
                debug!("λ = 1/{q} leaves a stratum short");
                q += 1;
            }
        }
    };
    let radius = needed(q) as u32;

    let v = WreathProduct::new(FreeAbelian::unbounded(), h_group.clone());
    let k = StepGroup::new(v.clone());
    let t = k.shift_generator();
    let mut pairs = Vec::new();
    for (h, w) in strata {
        let l = ell.length(&h) as i64;
        let twisted = v.base_then_top(FreeAbelianElement::basis(h).scale(l), h);
        let plain = v.lift_base(FreeAbelianElement::basis(h));
        for (kind, value, w) in [(StepKind::Twisted, twisted, w.0), (StepKind::Plain, plain, w.1)] {
            pairs.push(PairedGenerator {
                h,
                kind,
                u: k.positive_ray(value),
                w_word: lamplighter_geodesic(&w),
                w,
            });
        }
    }
    let mut g = BTreeMap::from([(m.identity(), t.clone())]);
    for p in &pairs {
        g.insert(p.w.clone(), p.u.clone());
    }

    let domain = Domain::finite(h_group.elements().collect());
    let a = growth_count(ell, &domain, max_l)?.fitted_a().max(1.0);
    let c = if max_l == 0 {
        f64::INFINITY
    } else {
        parafree.fitted_growth(q, max_l)
    };
    if c < a.max(3.0) {
        info!("fitted parafree growth c = {c:.3} is below max(a, 3) = {:.3}", a.max(3.0));
    }
    let ctx = EmbeddingContext {
        h_group: h_group.clone(),
        ell: ell.clone(),
        g_group: WreathProduct::new(k.clone(), m),
        v,
        k,
        m,
        order,
        pairs,
        t,
        g,
        q,
        radius,
        parafree,
        a,
        c,
    };
    ctx.check_invariants()?;
    info!("embedding context for {} with λ = 1/{q}", h_group.name());
    Ok(ctx)
}

/// Picks, for each `h` in order, two members of `P` with `⌊|w|_S / q⌋ = ℓ(h)`,
/// in acceptance order. `None` if some stratum is too small.
fn stratify(
    p: &ParafreeSet,
    order: &[usize],
    ell: &TableLength,
    q: u64,
) -> Option<Vec<(usize, (LamplighterElement, LamplighterElement))>> {
    let mut by_stratum: BTreeMap<u64, Vec<&LamplighterElement>> = BTreeMap::new();
    for w in &p.members {
        by_stratum.entry(lamplighter_length(w) / q).or_default().push(w);
    }
    let mut used: BTreeMap<u64, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for &h in order {
        let n = ell.length(&h);
        let pool = by_stratum.get(&n)?;
        let next = used.entry(n).or_insert(0);
        if *next + 2 > pool.len() {
            return None;
        }
        out.push((h, (pool[*next].clone(), pool[*next + 1].clone())));
        *next += 2;
    }
    Some(out)
}

/// `g(x)`: `t` at `1`, `u_i` at `w_i`, identity elsewhere.
pub fn g_eval(ctx: &EmbeddingContext, x: &LamplighterElement) -> KElem {
    ctx.g.get(x).cloned().unwrap_or_else(|| ctx.k.identity())
}

/// Exact value of a word over `X` in `K Wr M`.
pub fn eval_in_g(ctx: &EmbeddingContext, word: &Word) -> Result<GElem> {
    evaluate_word(&ctx.g_group, &ctx.x_generators(), word)
}

/// `[a, b]` as a word.
fn commutator_word(a: &Word, b: &Word) -> Word {
    Word::commutator(a, b)
}

/// `S`-word for `r` followed by `g^k` conjugated: `r g^k r⁻¹`.
fn conj_g_word(r: &Word, k: i64) -> Word {
    r.concat(&Word::power_of(G, k)).concat(&r.inverse())
}

/// Maps a word over `{x₀, y₀}` (generators `0`, `1`) to the same letters
/// of `X`.
fn s_word(w: &Word) -> Word {
    w.clone()
}

/// Support of `[g, r g r⁻¹]` with its values, after checking that it has
/// at most one point and that the value there is `[g(u), g(ur)]`.
pub fn commutator_support(ctx: &EmbeddingContext, r: &LamplighterElement) -> Result<Vec<(LamplighterElement, KElem)>> {
    let gg = &ctx.g_group;
    let g = gg.from_base(ctx.g.clone());
    let rg = gg.lift_top(r.clone());
    let conj = gg.conjugate(&rg, &g);
    let c = gg.commutator(&g, &conj);
    if !ctx.m.is_identity(&c.top) {
        return Err(Error::BoundViolation("commutator leaves the base".into()));
    }
    let support: Vec<(LamplighterElement, KElem)> = c.base.into_iter().collect();
    if support.len() > 1 {
        return Err(Error::BoundViolation(format!(
            "[g, r g r⁻¹] has {} support points for r = {r:?}",
            support.len()
        )));
    }
    for (u, value) in &support {
        let expected = ctx.k.commutator(&ctx.g_eval(u), &ctx.g_eval(&ctx.m.mul(u, r)));
        if *value != expected {
            return Err(Error::BoundViolation("support value is not [g(u), g(ur)]".into()));
        }
    }
    Ok(support)
}

/// Upper-bound certificate for `h`:
/// `[g, w_{i′} g^{−ℓ(h)} w_{i′}⁻¹] · [g, w_i g w_i⁻¹]`, where `u_i = f_{1,h}`
/// and `u_{i′} = f_{2,h}`.
pub fn embed_h(ctx: &EmbeddingContext, h: usize) -> Word {
    if h == 0 {
        return Word::empty();
    }
    let l = ctx.ell.length(&h) as i64;
    let wi = s_word(&ctx.pair_of(h, StepKind::Twisted).w_word);
    let wj = s_word(&ctx.pair_of(h, StepKind::Plain).w_word);
    let g = Word::generator(G);
    let inverse_power = commutator_word(&g, &conj_g_word(&wj, -l));
    let twisted = commutator_word(&g, &conj_g_word(&wi, 1));
    inverse_power.concat(&twisted)
}

/// Bound on the certificate length, `(8 + 16λ⁻¹)ℓ(h)`.
pub fn certificate_bound(ctx: &EmbeddingContext, h: usize) -> u64 {
    (8 + 16 * ctx.q) * ctx.ell.length(&h)
}

/// A letter of the `Y`-word obtained by projecting at `0 ∈ ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct YLetter {
    pub h: usize,
    pub kind: StepKind,
    pub sign: i8,
}

/// The intermediate quantities of the lower-bound chain for one word:
/// `ℓ(h) ≤ ‖w‖ ≤ q_a ≤ r_Y − 1`, `r_Y ≤ m ≤ r_Z ≤ Σ|α_j| ≤ L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub h: usize,
    pub ell: u64,
    pub word_length: usize,
    pub alpha_sum: u64,
    /// Letters of the `Z`-word other than `1`.
    pub z_length: usize,
    /// Conjugates `t^α f^{±1} t^{−α}` in the rewritten form.
    pub conjugates: usize,
    /// Letters of the `Y`-word other than `1`.
    pub y_length: usize,
    /// Letters `a_h^{±1}` in the `Y`-word.
    pub a_letters: usize,
    pub magnus_norm: u64,
}

impl ChainReport {
    /// Every inequality of the chain.
    pub fn holds(&self) -> bool {
        let tail = self.y_length <= self.conjugates
            && self.conjugates <= self.z_length
            && self.z_length as u64 <= self.alpha_sum
            && self.alpha_sum <= self.word_length as u64;
        if self.h == 0 {
            return tail;
        }
        self.ell <= self.magnus_norm
            && self.magnus_norm <= self.a_letters as u64
            && self.a_letters < self.y_length
            && tail
    }
}

/// Which element of `H` (if any) `e` represents in `G`.
pub fn recognize(ctx: &EmbeddingContext, e: &GElem) -> Option<usize> {
    if !ctx.m.is_identity(&e.top) {
        return None;
    }
    if e.base.is_empty() {
        return Some(0);
    }
    ctx.h_group
        .elements()
        .skip(1)
        .find(|&h| ctx.h_in_g(h) == *e)
}

/// Runs the projection chain for a word over `X` representing some
/// `h ∈ H`, and returns the intermediate bounds; the certified bound is
/// `ℓ(h) ≤ L`.
pub fn lower_bound_chain(ctx: &EmbeddingContext, word: &Word) -> Result<ChainReport> {
    let fail = |m: &str| Error::BoundViolation(m.to_string());
    let value = eval_in_g(ctx, word)?;
    let h = recognize(ctx, &value).ok_or_else(|| Error::NotInImage(word.render_with(x_name)))?;
    let (k, m, v) = (&ctx.k, &ctx.m, &ctx.v);

    // Project r_j g^{α_j} r_j⁻¹ at 1 ∈ M: g-letters become g(r_j)^{±1}.
    let s_gens = [m.x0(), m.y0()];
    let mut r = m.identity();
    let mut alpha_sum = 0u64;
    let mut z_letters: Vec<(KElem, i8)> = Vec::new();
    for l in word.letters() {
        if l.gen == G {
            alpha_sum += 1;
            let x = ctx.g_eval(&r);
            if !k.is_identity(&x) {
                z_letters.push((x, l.sign));
            }
        } else {
            let s = &s_gens[l.gen];
            r = if l.sign > 0 { m.mul(&r, s) } else { m.mul(&r, &m.inv(s)) };
        }
    }
    if !m.is_identity(&r) {
        return Err(fail("S-part of the word is not trivial in M"));
    }
    let signed = |x: &KElem, s: i8| if s > 0 { x.clone() } else { k.inv(x) };
    let z_value = z_letters.iter().fold(k.identity(), |acc, (x, s)| k.mul(&acc, &signed(x, *s)));
    if z_value != ctx.h_in_k(h) {
        return Err(fail("projection at 1 does not reproduce h in K"));
    }

    // Rewrite as a product of t^β f^{±1} t^{−β} and project at 0 ∈ ℤ.
    let mut beta = 0i64;
    let mut conjugates = Vec::new();
    for (x, s) in &z_letters {
        if *x == ctx.t {
            beta += i64::from(*s);
            continue;
        }
        let p = ctx
            .pairs
            .iter()
            .find(|p| p.u == *x)
            .ok_or_else(|| fail("Z-letter outside U ∪ {t}"))?;
        conjugates.push((p, beta, *s));
    }
    if beta != 0 {
        return Err(fail("t-exponent sum is not zero"));
    }
    let rewritten = conjugates.iter().fold(k.identity(), |acc, (p, b, s)| {
        k.mul(&acc, &wreath_conj_power(*b, &signed(&p.u, *s)))
    });
    if rewritten != z_value {
        return Err(fail("rewritten product differs from the Z-word"));
    }
    let mut y_word: Vec<YLetter> = Vec::new();
    for (p, b, s) in &conjugates {
        let at_zero = wreath_conj_power(*b, &p.u).eval(0).clone();
        let letter = if v.is_identity(&at_zero) {
            None
        } else if at_zero == ctx.twisted(p.h) && p.kind == StepKind::Twisted
            || at_zero == ctx.a_h(p.h) && p.kind == StepKind::Plain
        {
            Some(YLetter { h: p.h, kind: p.kind, sign: *s })
        } else {
            return Err(fail("projected value lies outside Y ∪ {1}"));
        };
        y_word.extend(letter);
    }
    let y_value = |y: &YLetter| match y.kind {
        StepKind::Twisted => ctx.twisted(y.h),
        StepKind::Plain => ctx.a_h(y.h),
    };
    let y_prod = y_word.iter().fold(v.identity(), |acc, y| {
        let e = y_value(y);
        v.mul(&acc, &if y.sign > 0 { e } else { v.inv(&e) })
    });
    if y_prod != ctx.h_in_v(h) {
        return Err(fail("projection at 0 does not reproduce h in V"));
    }

    let mut report = ChainReport {
        h,
        ell: ctx.ell.length(&h),
        word_length: word.len(),
        alpha_sum,
        z_length: z_letters.len(),
        conjugates: conjugates.len(),
        y_length: y_word.len(),
        a_letters: y_word.iter().filter(|y| y.kind == StepKind::Plain).count(),
        magnus_norm: 0,
    };
    if h != 0 {
        report.magnus_norm = y_word_bound(ctx, h, &y_word)?;
    }
    if !report.holds() {
        return Err(Error::BoundViolation(format!("chain inequalities fail: {report:?}")));
    }
    Ok(report)
}

/// For a `Y`-word representing `h ≠ 1`, moves the `a_h`-letters to the
/// left by conjugation: `h = u · v` with `v = μ(f)` for the generalized
/// Magnus map `x_h ↦ a_h^{ℓ(h)} h`. Checks `v = w h`, `u + w = 0` and
/// `ℓ(h) ≤ ‖w‖ ≤ #a-letters`, and returns `‖w‖`.
fn y_word_bound(ctx: &EmbeddingContext, h: usize, y_word: &[YLetter]) -> Result<u64> {
    let fail = |m: &str| Error::BoundViolation(m.to_string());
    let v = &ctx.v;
    let mut u = v.identity();
    let mut mv = v.identity();
    let mut f_letters = Vec::new();
    for y in y_word {
        match y.kind {
            StepKind::Twisted => {
                let e = ctx.twisted(y.h);
                mv = v.mul(&mv, &if y.sign > 0 { e } else { v.inv(&e) });
                f_letters.push(Letter::new(y.h, y.sign));
            }
            StepKind::Plain => {
                let a = ctx.a_h(y.h);
                let a = if y.sign > 0 { a } else { v.inv(&a) };
                u = v.mul(&u, &v.conjugate(&mv, &a));
            }
        }
    }
    if v.mul(&u, &mv) != ctx.h_in_v(h) {
        return Err(fail("u · μ(f) differs from h"));
    }
    let assignment: BTreeMap<usize, usize> = ctx.order.iter().map(|&x| (x, x)).collect();
    let f = Word::free_reduce(f_letters);
    let image = magnus_image(&ctx.h_group, &ctx.ell, &assignment, &f)?;
    if image.g != h {
        return Err(fail("Magnus image does not project to h"));
    }
    let (lg, norm, _) = verify_magnus_bound(&ctx.h_group, &image, &ctx.ell)?;
    let u_module = module_form(&ctx.h_group, &u);
    let all: std::collections::BTreeSet<usize> = u_module.keys().chain(image.t.keys()).copied().collect();
    for i in all {
        let sum = u_module.get(&i).cloned().unwrap_or_default().add(&image.t_i(i));
        if sum != GroupRingElement::zero() {
            return Err(fail("u + w is not zero"));
        }
    }
    let a_letters = y_word.iter().filter(|y| y.kind == StepKind::Plain).count() as u64;
    if lg != ctx.ell.length(&h) || norm > a_letters {
        return Err(fail("Magnus bound does not fit the a-letter count"));
    }
    Ok(norm)
}

/// `(|h|_Y, ℓ(h)+1)` for every nontrivial `h`, with `|h|_Y` from one BFS
/// in `V` to radius `max ℓ + 1`.
pub fn y_length_check_all(ctx: &EmbeddingContext, radius_cap: u32) -> Result<Vec<(usize, u32, u64)>> {
    let radius = ctx.max_length() as u32 + 1;
    if radius > radius_cap {
        return Err(Error::RadiusCapExceeded { cap: radius_cap });
    }
    let ball = Ball::enumerate(&ctx.v, &ctx.y_generators(), radius);
    let mut out = Vec::new();
    for &h in &ctx.order {
        let d = ball
            .distance(&ctx.h_in_v(h))
            .ok_or(Error::RadiusCapExceeded { cap: radius })?;
        let want = ctx.ell.length(&h) + 1;
        if u64::from(d) != want {
            return Err(Error::BoundViolation(format!("|h|_Y = {d} but ℓ(h)+1 = {want} for h = {h}")));
        }
        out.push((h, d, want));
    }
    Ok(out)
}

/// `(|h|_Y, ℓ(h)+1)` for one `h ≠ 1`.
pub fn y_length_check(ctx: &EmbeddingContext, h: usize, radius_cap: u32) -> Result<(u32, u64)> {
    let want = ctx.ell.length(&h) + 1;
    let d = crate::metrics::word_length_bfs(&ctx.v, &ctx.y_generators(), &ctx.h_in_v(h), radius_cap)
        .ok_or(Error::RadiusCapExceeded { cap: radius_cap })?;
    if u64::from(d) != want {
        return Err(Error::BoundViolation(format!("|h|_Y = {d} but ℓ(h)+1 = {want}")));
    }
    Ok((d, want))
}

/// A word over `X` that evaluates to the identity of `G`: either a
/// conjugated commutator of lamps or `[g, r g r⁻¹]` with empty support.
pub fn identity_word<R: Rng>(ctx: &EmbeddingContext, rng: &mut R) -> Word {
    let conj = random_s_word(rng, 3);
    let core = if rng.gen_bool(0.5) {
        let k = rng.gen_range(1..=3);
        let shifted = Word::power_of(Y0, k)
            .concat(&Word::generator(X0))
            .concat(&Word::power_of(Y0, -k));
        Word::commutator(&Word::generator(X0), &shifted)
    } else {
        loop {
            let r = random_s_word(rng, 3);
            let c = Word::commutator(&Word::generator(G), &conj_g_word(&r, 1));
            if eval_in_g(ctx, &c).is_ok_and(|e| ctx.g_group.is_identity(&e)) {
                break c;
            }
        }
    };
    conj.concat(&core).concat(&conj.inverse())
}

fn random_s_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::free_reduce((0..len).map(|_| {
        let gen = if rng.gen_bool(0.5) { X0 } else { Y0 };
        Letter::new(gen, if rng.gen_bool(0.5) { 1 } else { -1 })
    }))
}

/// Inserts `pieces` identity words at random positions of `word`.
pub fn pad_word<R: Rng>(ctx: &EmbeddingContext, word: &Word, pieces: usize, rng: &mut R) -> Word {
    let mut out = word.clone();
    for _ in 0..pieces {
        let pad = identity_word(ctx, rng);
        let cut = rng.gen_range(0..=out.len());
        let head = Word::free_reduce(out.letters()[..cut].iter().copied());
        let tail = Word::free_reduce(out.letters()[cut..].iter().copied());
        out = head.concat(&pad).concat(&tail);
    }
    out
}

/// Per-element report of the two certified inequalities.
#[derive(Debug, Clone, Serialize)]
pub struct ElementReport {
    pub h: usize,
    pub label: String,
    pub ell: u64,
    pub certificate: String,
    pub certificate_length: usize,
    pub certificate_bound: u64,
    pub evaluates_to_h: bool,
    pub chain: ChainReport,
    pub padded_chains: usize,
}

impl ElementReport {
    pub fn passed(&self) -> bool {
        self.evaluates_to_h && self.certificate_length as u64 <= self.certificate_bound && self.chain.holds()
    }
}

/// Certificate, evaluation and chain for `h`, plus `padded` random padded
/// variants through the chain.
pub fn check_element<R: Rng>(ctx: &EmbeddingContext, h: usize, padded: usize, rng: &mut R) -> Result<ElementReport> {
    let cert = embed_h(ctx, h);
    let value = eval_in_g(ctx, &cert)?;
    let evaluates_to_h = recognize(ctx, &value) == Some(h);
    let chain = lower_bound_chain(ctx, &cert)?;
    for _ in 0..padded {
        let w = pad_word(ctx, &cert, rng.gen_range(1..=3), rng);
        let c = lower_bound_chain(ctx, &w)?;
        if c.h != h || !c.holds() || c.ell > w.len() as u64 {
            return Err(Error::BoundViolation("padded word breaks the chain".into()));
        }
    }
    Ok(ElementReport {
        h,
        label: ctx.h_group.label(h).to_string(),
        ell: ctx.ell.length(&h),
        certificate: cert.render_with(x_name),
        certificate_length: cert.len(),
        certificate_bound: certificate_bound(ctx, h),
        evaluates_to_h,
        chain,
        padded_chains: padded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Cyclic;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cyclic(n: u64) -> (CayleyTable, TableLength) {
        let gens: &[u64] = if n == 1 { &[] } else { &[1] };
        let (t, _) = CayleyTable::from_group(&Cyclic::new(n), gens);
        let ell = TableLength::word_length(&t);
        (t, ell)
    }

    #[test]
    fn order_two() {
        let (t, ell) = cyclic(2);
        let ctx = build_context(&t, &ell, 1, DEFAULT_RADIUS_CAP).unwrap();
        assert_eq!(ctx.stratum_counts(), vec![1, 3]);
        assert_eq!(ctx.pairs.len(), 2);
    }

    #[test]
    fn trivial_group() {
        let (t, ell) = cyclic(1);
        let ctx = build_context(&t, &ell, 1, DEFAULT_RADIUS_CAP).unwrap();
        assert!(ctx.y_generators().is_empty());
        assert_eq!(ctx.g.len(), 1);
        assert_eq!(ctx.g_eval(&ctx.m.identity()), ctx.t);
        assert!(embed_h(&ctx, 0).is_empty());
        assert_eq!(lower_bound_chain(&ctx, &Word::empty()).unwrap().ell, 0);
    }

    #[test]
    fn order_five_context() {
        let (t, ell) = cyclic(5);
        let ctx = build_context(&t, &ell, 1, DEFAULT_RADIUS_CAP).unwrap();
        assert_eq!(ctx.stratum_counts(), vec![1, 5, 9]);
        assert_eq!(ctx.q, 2);
        assert_eq!(ctx.theta(), Ratio::new(1, 40));
        assert!(ctx.g_eval(&LamplighterElement::new(BTreeMap::from([(7, 7)]), 0)) == ctx.k.identity());
        let w1 = &ctx.pairs[0];
        assert_eq!(ctx.g_eval(&w1.w), w1.u);

        let gen = eval_in_g(&ctx, &Word::generator(G)).unwrap();
        assert_eq!(gen.top, ctx.m.identity());
        assert_eq!(gen.base, ctx.g);
        assert!(eval_in_g(&ctx, &Word::empty()).unwrap() == ctx.g_group.identity());

        for p in &ctx.pairs {
            let c = Word::commutator(&Word::generator(G), &conj_g_word(&p.w_word, 1));
            let e = eval_in_g(&ctx, &c).unwrap();
            let expected = ctx.k.commutator(&ctx.t, &p.u);
            assert_eq!(e.base, BTreeMap::from([(ctx.m.identity(), expected.clone())]));
            let support = commutator_support(&ctx, &p.w).unwrap();
            assert_eq!(support, vec![(ctx.m.identity(), expected)]);
        }
        assert!(commutator_support(&ctx, &ctx.m.identity()).unwrap().is_empty());
    }

    #[test]
    fn order_five_certificates() {
        let (t, ell) = cyclic(5);
        let ctx = build_context(&t, &ell, 1, DEFAULT_RADIUS_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut values = Vec::new();
        for h in t.elements() {
            let r = check_element(&ctx, h, 3, &mut rng).unwrap();
            assert!(r.passed(), "{r:?}");
            values.push(eval_in_g(&ctx, &embed_h(&ctx, h)).unwrap());
        }
        for i in 0..values.len() {
            for j in 0..i {
                assert_ne!(values[i], values[j]);
            }
        }
        for a in t.elements() {
            for b in t.elements() {
                let w = embed_h(&ctx, a).concat(&embed_h(&ctx, b));
                let ab = t.mul(&a, &b);
                assert_eq!(eval_in_g(&ctx, &w).unwrap(), eval_in_g(&ctx, &embed_h(&ctx, ab)).unwrap());
            }
        }
        let not_in_h = Word::generator(X0);
        assert!(matches!(lower_bound_chain(&ctx, &not_in_h), Err(Error::NotInImage(_))));
    }

    #[test]
    fn order_five_y_lengths() {
        let (t, ell) = cyclic(5);
        let ctx = build_context(&t, &ell, 1, DEFAULT_RADIUS_CAP).unwrap();
        let all = y_length_check_all(&ctx, 3).unwrap();
        assert_eq!(all.len(), 4);
        let gen = ctx.order[0];
        assert_eq!(y_length_check(&ctx, gen, 3).unwrap(), (2, 2));
    }

    #[test]
    fn radius_cap_too_small() {
        let (t, ell) = cyclic(5);
        assert!(matches!(build_context(&t, &ell, 1, 4), Err(Error::InsufficientStrata(_))));
    }
}
