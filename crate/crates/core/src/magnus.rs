//! Generalized Magnus homomorphisms `μ(xᵢ) = aᵢ^{lᵢ} hᵢ` into `A≀H`, the
//! Remeslennikov-Sokolov identity, and cancellation graphs certifying
//! `ℓ(g) ≤ ‖w‖`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{Element, FreeAbelian, FreeAbelianElement, Group, Word};
use crate::metrics::{word_length_bfs, LengthFunction};
use crate::ring::GroupRingElement;
use crate::wreath::{WreathElement, WreathProduct};

/// `μ(f) = w g` with `w = Σ tᵢ∘aᵢ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusImage<E: Element> {
    /// `tᵢ`, only nonzero entries.
    pub t: BTreeMap<usize, GroupRingElement<E>>,
    pub g: E,
    /// `hᵢ` for every assigned generator.
    pub generators: BTreeMap<usize, E>,
    /// `lᵢ = max(ℓ(hᵢ), 1)`.
    pub lengths: BTreeMap<usize, u64>,
}

impl<E: Element> MagnusImage<E> {
    pub fn t_i(&self, i: usize) -> GroupRingElement<E> {
        self.t.get(&i).cloned().unwrap_or_default()
    }

    /// `‖w‖ = Σ ‖tᵢ‖`.
    pub fn norm(&self) -> u64 {
        self.t
            .values()
            .map(|t| t.norm().to_u64().expect("norm fits in u64"))
            .sum()
    }

    pub fn to_json<G: Group<Elem = E>>(&self, group: &G) -> Value {
        let t: serde_json::Map<String, Value> = self
            .t
            .iter()
            .map(|(i, t)| (i.to_string(), t.to_json(group)))
            .collect();
        json!({
            "t": t,
            "g": serde_json::to_value(&self.g).expect("element serializes"),
            "lengths": self.lengths,
            "norm": self.norm(),
        })
    }
}

/// `lᵢ = max(ℓ(hᵢ), 1)` for every assigned generator.
pub fn generator_lengths<E, L: LengthFunction<E>>(ell: &L, assignment: &BTreeMap<usize, E>) -> BTreeMap<usize, u64> {
    assignment
        .iter()
        .map(|(&i, h)| (i, ell.length(h).max(1)))
        .collect()
}

/// Converts `w g ∈ A≀H` to module notation: the coefficient of `h` in `tᵢ`
/// is the `aᵢ`-coordinate of `w(h⁻¹)`.
pub fn module_form<G: Group>(
    group: &G,
    v: &WreathElement<FreeAbelianElement, G::Elem>,
) -> BTreeMap<usize, GroupRingElement<G::Elem>> {
    let mut t: BTreeMap<usize, GroupRingElement<G::Elem>> = BTreeMap::new();
    for (x, a) in &v.base {
        let h = group.inv(x);
        for (&i, &k) in a.coords() {
            t.entry(i).or_default().add_term(h.clone(), BigInt::from(k));
        }
    }
    t.retain(|_, ti| !ti.is_zero());
    t
}

/// The image `μ(xᵢ) = aᵢ^{lᵢ} hᵢ` of each generator.
pub fn generator_images<G: Group + Clone>(
    group: &G,
    lengths: &BTreeMap<usize, u64>,
    assignment: &BTreeMap<usize, G::Elem>,
) -> (WreathProduct<FreeAbelian, G>, BTreeMap<usize, WreathElement<FreeAbelianElement, G::Elem>>) {
    let v = WreathProduct::new(FreeAbelian::unbounded(), group.clone());
    let images = assignment
        .iter()
        .map(|(&i, h)| {
            let a = FreeAbelianElement::basis(i).scale(lengths[&i] as i64);
            (i, v.base_then_top(a, h.clone()))
        })
        .collect();
    (v, images)
}

/// `μ(f)`, by left-to-right multiplication in `A≀H`.
pub fn magnus_image<G, L>(
    group: &G,
    ell: &L,
    assignment: &BTreeMap<usize, G::Elem>,
    f: &Word,
) -> Result<MagnusImage<G::Elem>>
where
    G: Group + Clone,
    L: LengthFunction<G::Elem>,
{
    let lengths = generator_lengths(ell, assignment);
    let (v, images) = generator_images(group, &lengths, assignment);
    let value = crate::groups::evaluate_word(&v, &images, f)?;
    Ok(MagnusImage {
        t: module_form(group, &value),
        g: value.top,
        generators: assignment.clone(),
        lengths,
    })
}

/// Result of checking (RS): `tᵢ = lᵢ sᵢ` and `Σ sᵢ(hᵢ − 1) = g − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCheck<E: Element> {
    pub holds: bool,
    /// The quotients `sᵢ`, present whenever every `tᵢ` is divisible.
    pub s: Option<BTreeMap<usize, GroupRingElement<E>>>,
}

pub fn rs_check<G: Group>(group: &G, m: &MagnusImage<G::Elem>) -> RsCheck<G::Elem> {
    let mut s = BTreeMap::new();
    for (&i, t) in &m.t {
        let (Some(&l), Some(_)) = (m.lengths.get(&i), m.generators.get(&i)) else {
            return RsCheck { holds: false, s: None };
        };
        match t.div_exact(&BigInt::from(l)) {
            Some(q) => {
                s.insert(i, q);
            }
            None => return RsCheck { holds: false, s: None },
        }
    }
    let mut lhs = GroupRingElement::zero();
    for (i, si) in &s {
        let d = GroupRingElement::augmentation_generator(group, &m.generators[i]);
        lhs = lhs.add(&si.mul(&d, group));
    }
    let rhs = GroupRingElement::augmentation_generator(group, &m.g);
    RsCheck {
        holds: lhs == rhs,
        s: Some(s),
    }
}

/// Vertex `(i, j, slot)` of the cancellation graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub i: usize,
    pub j: usize,
    pub slot: u8,
}

/// How blue edges pair vertices carrying cancelling labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairingStrategy {
    /// The k-th positive with the k-th negative copy of each label, in
    /// vertex order.
    #[default]
    Forward,
    /// The same from the end of the vertex order.
    Reverse,
}

/// A signed group element `±x`.
pub type Label<E> = (i8, E);

#[derive(Debug, Clone)]
pub struct CancellationGraph<E> {
    pub vertices: Vec<Vertex>,
    pub labels: Vec<Label<E>>,
    /// `(u, v, weight lᵢ)` joining `(i, j, 1)` and `(i, j, 2)`.
    pub red: Vec<(usize, usize, u64)>,
    pub blue: Vec<(usize, usize)>,
    /// The unpaired vertices labeled `−1` and `g`; absent when `g = 1`.
    pub o: Option<usize>,
    pub o_prime: Option<usize>,
    /// `hᵢ` attached to each red edge, parallel to `red`.
    red_generators: Vec<E>,
}

/// Builds `Γ` from `sᵢ = Σⱼ ±gᵢⱼ`: `(i, j, 1)` is labeled `∓gᵢⱼ` and
/// `(i, j, 2)` is labeled `±gᵢⱼhᵢ`.
pub fn build_cancellation_graph<G: Group>(
    group: &G,
    m: &MagnusImage<G::Elem>,
    strategy: PairingStrategy,
) -> Result<CancellationGraph<G::Elem>> {
    let rs = rs_check(group, m);
    let s = match (rs.holds, rs.s) {
        (true, Some(s)) => s,
        _ => return Err(Error::PairingInfeasible("(RS) does not hold".into())),
    };
    let mut vertices = Vec::new();
    let mut labels = Vec::new();
    let mut red = Vec::new();
    let mut red_generators = Vec::new();
    for (&i, si) in &s {
        let h = &m.generators[&i];
        let mut j = 0;
        for (x, k) in si.sorted_terms(group) {
            let sign: i8 = if k.sign() == num_bigint::Sign::Minus { -1 } else { 1 };
            let copies = k.magnitude().to_u64().expect("coefficient fits in u64");
            for _ in 0..copies {
                let a = vertices.len();
                vertices.push(Vertex { i, j, slot: 1 });
                labels.push((-sign, x.clone()));
                vertices.push(Vertex { i, j, slot: 2 });
                labels.push((sign, group.mul(x, h)));
                red.push((a, a + 1, m.lengths[&i]));
                red_generators.push(h.clone());
                j += 1;
            }
        }
    }

    let mut by_elem: BTreeMap<&G::Elem, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (v, (sign, x)) in labels.iter().enumerate() {
        let e = by_elem.entry(x).or_default();
        if *sign > 0 {
            e.0.push(v);
        } else {
            e.1.push(v);
        }
    }
    let one = group.identity();
    let g_trivial = group.is_identity(&m.g);
    let mut blue = Vec::new();
    let mut leftover_pos = Vec::new();
    let mut leftover_neg = Vec::new();
    for (_, (mut pos, mut neg)) in by_elem {
        if strategy == PairingStrategy::Reverse {
            pos.reverse();
            neg.reverse();
        }
        let n = pos.len().min(neg.len());
        for k in 0..n {
            blue.push((pos[k].min(neg[k]), pos[k].max(neg[k])));
        }
        leftover_pos.extend_from_slice(&pos[n..]);
        leftover_neg.extend_from_slice(&neg[n..]);
    }
    blue.sort_unstable();
    let (o, o_prime) = if g_trivial {
        if !leftover_pos.is_empty() || !leftover_neg.is_empty() {
            return Err(Error::PairingInfeasible("terms do not cancel completely".into()));
        }
        (None, None)
    } else {
        match (leftover_neg.as_slice(), leftover_pos.as_slice()) {
            ([o], [op]) if labels[*o].1 == one && labels[*op].1 == m.g => (Some(*o), Some(*op)),
            _ => {
                return Err(Error::PairingInfeasible(format!(
                    "{} positive and {} negative labels left unpaired",
                    leftover_pos.len(),
                    leftover_neg.len()
                )))
            }
        }
    };
    Ok(CancellationGraph {
        vertices,
        labels,
        red,
        blue,
        o,
        o_prime,
        red_generators,
    })
}

impl<E: Element> CancellationGraph<E> {
    pub fn red_count(&self) -> usize {
        self.red.len()
    }

    fn red_partner(&self, v: usize) -> usize {
        // Red edges join consecutive vertices 2k and 2k + 1.
        v ^ 1
    }

    fn blue_partners(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.vertices.len()];
        for &(a, b) in &self.blue {
            p[a] = Some(b);
            p[b] = Some(a);
        }
        p
    }

    /// The `o-o′` arc as a vertex sequence, starting at `o` and alternating
    /// red and blue edges. Empty when `g = 1`.
    pub fn arc(&self) -> Vec<usize> {
        let (Some(o), Some(op)) = (self.o, self.o_prime) else {
            return Vec::new();
        };
        let blue = self.blue_partners();
        let mut path = vec![o];
        let mut v = o;
        loop {
            let r = self.red_partner(v);
            path.push(r);
            if r == op {
                return path;
            }
            v = blue[r].expect("interior arc vertices have a blue edge");
            path.push(v);
        }
    }

    /// Components other than the arc, each as a closed vertex cycle.
    pub fn loops(&self) -> Vec<Vec<usize>> {
        let blue = self.blue_partners();
        let mut seen: BTreeSet<usize> = self.arc().into_iter().collect();
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            loop {
                let r = self.red_partner(v);
                cycle.push(v);
                cycle.push(r);
                seen.insert(v);
                seen.insert(r);
                v = blue[r].expect("loop vertices have a blue edge");
                if v == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.loops().is_empty()
    }

    /// `Σ lᵢ` over red edges of the arc.
    pub fn arc_weight(&self) -> u64 {
        let arc = self.arc();
        arc.chunks(2).map(|p| self.red[p[0] / 2].2).sum()
    }

    /// Checks degrees, the arc/loop decomposition, label cancellation on
    /// blue edges and the telescoping bound
    /// `ℓ(z_{2k+1}) ≤ ℓ(z_{2k−1}) + ℓ(h_{i_k})` along the arc.
    pub fn check_invariants<G, L>(&self, group: &G, ell: &L) -> Result<()>
    where
        G: Group<Elem = E>,
        L: LengthFunction<E>,
    {
        let fail = |msg: String| Err(Error::BoundViolation(msg));
        let n = self.vertices.len();
        let mut red_deg = vec![0; n];
        for &(a, b, _) in &self.red {
            red_deg[a] += 1;
            red_deg[b] += 1;
            let (va, vb) = (self.vertices[a], self.vertices[b]);
            if (va.i, va.j, va.slot, vb.slot) != (vb.i, vb.j, 1, 2) {
                return fail(format!("red edge {a}-{b} joins {va:?} and {vb:?}"));
            }
        }
        if red_deg.iter().any(|&d| d != 1) {
            return fail("a vertex is not on exactly one red edge".into());
        }
        let mut blue_deg = vec![0; n];
        for &(a, b) in &self.blue {
            blue_deg[a] += 1;
            blue_deg[b] += 1;
            let (sa, xa) = &self.labels[a];
            let (sb, xb) = &self.labels[b];
            if xa != xb || sa + sb != 0 {
                return fail(format!("blue edge {a}-{b} joins non-cancelling labels"));
            }
        }
        for (v, &d) in blue_deg.iter().enumerate() {
            let endpoint = Some(v) == self.o || Some(v) == self.o_prime;
            if d != usize::from(!endpoint) {
                return fail(format!("vertex {v} has blue degree {d}"));
            }
        }
        let arc = self.arc();
        let covered = arc.len() + self.loops().iter().map(Vec::len).sum::<usize>();
        if covered != n {
            return fail("components do not partition the vertices".into());
        }
        if let (Some(o), Some(op)) = (self.o, self.o_prime) {
            if self.labels[o] != (-1, group.identity()) || self.labels[op].0 != 1 {
                return fail("arc endpoints carry the wrong labels".into());
            }
            // z₀ = 1; z_{2k+1} is the terminal label of the k-th red edge.
            let mut prev = group.identity();
            for (k, pair) in arc.chunks(2).enumerate() {
                let (a, b) = (pair[0], pair[1]);
                let za = &self.labels[a].1;
                let zb = &self.labels[b].1;
                if za != &prev {
                    return fail(format!("arc label mismatch before red edge {k}"));
                }
                let h = &self.red_generators[a / 2];
                if zb != &group.mul(za, h) && zb != &group.mul(za, &group.inv(h)) {
                    return fail(format!("red edge {k} does not move the label by h"));
                }
                if ell.length(zb) > ell.length(za) + ell.length(h) {
                    return fail(format!("telescoping bound fails at red edge {k}"));
                }
                prev = zb.clone();
            }
            if prev != self.labels[op].1 {
                return fail("arc does not end at g".into());
            }
        }
        Ok(())
    }

    /// Graphviz rendering: red edges carry their weight, endpoints are
    /// drawn as a double circle (`o`) and a box (`o′`).
    pub fn to_dot(&self, name: impl Fn(&E) -> String) -> String {
        let mut out = String::from("graph cancellation {\n");
        for (v, (s, x)) in self.labels.iter().enumerate() {
            let vert = self.vertices[v];
            let sign = if *s > 0 { '+' } else { '-' };
            let shape = if Some(v) == self.o {
                ", shape=doublecircle"
            } else if Some(v) == self.o_prime {
                ", shape=box"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  v{v} [label=\"{sign}{}\", tooltip=\"({}, {}, {})\"{shape}];",
                name(x).replace('"', "\\\""),
                vert.i,
                vert.j,
                vert.slot
            );
        }
        for &(a, b, w) in &self.red {
            let _ = writeln!(out, "  v{a} -- v{b} [color=red, label=\"{w}\"];");
        }
        for &(a, b) in &self.blue {
            let _ = writeln!(out, "  v{a} -- v{b} [color=blue];");
        }
        out.push_str("}\n");
        out
    }
}

/// `(ℓ(g), ‖w‖, arc weight)`, after checking `ℓ(g) ≤ arc weight ≤ ‖w‖` and
/// the graph invariants.
pub fn verify_magnus_bound<G, L>(group: &G, m: &MagnusImage<G::Elem>, ell: &L) -> Result<(u64, u64, u64)>
where
    G: Group,
    L: LengthFunction<G::Elem>,
{
    verify_with_strategy(group, m, ell, PairingStrategy::Forward)
}

pub fn verify_with_strategy<G, L>(
    group: &G,
    m: &MagnusImage<G::Elem>,
    ell: &L,
    strategy: PairingStrategy,
) -> Result<(u64, u64, u64)>
where
    G: Group,
    L: LengthFunction<G::Elem>,
{
    let norm = m.norm();
    if group.is_identity(&m.g) {
        if !rs_check(group, m).holds {
            return Err(Error::BoundViolation("(RS) fails".into()));
        }
        return Ok((0, norm, 0));
    }
    let graph = build_cancellation_graph(group, m, strategy)?;
    graph.check_invariants(group, ell)?;
    let lg = ell.length(&m.g);
    let arc = graph.arc_weight();
    let total: u64 = graph.red.iter().map(|r| r.2).sum();
    if total != norm {
        return Err(Error::BoundViolation(format!("red weight {total} differs from ‖w‖ = {norm}")));
    }
    if lg > arc || arc > norm {
        return Err(Error::BoundViolation(format!("ℓ(g) = {lg}, arc weight {arc}, ‖w‖ = {norm}")));
    }
    Ok((lg, norm, arc))
}

/// Both sides of the equality criterion for the standard Magnus map:
/// `(|g|_X = ‖w‖, |f|_{F/N} = |f|_{F/[N,N]})`. The second length is
/// computed as the word length of `μ(f)` over `aᵢhᵢ` in `A≀H`.
pub fn mcor_equality_check<G: Group + Clone>(
    group: &G,
    assignment: &BTreeMap<usize, G::Elem>,
    f: &Word,
    radius_cap: u32,
) -> Result<(bool, bool)> {
    let lengths: BTreeMap<usize, u64> = assignment.keys().map(|&i| (i, 1)).collect();
    let (v, images) = generator_images(group, &lengths, assignment);
    let value = crate::groups::evaluate_word(&v, &images, f)?;
    let m = MagnusImage {
        t: module_form(group, &value),
        g: value.top.clone(),
        generators: assignment.clone(),
        lengths,
    };
    let hgens: Vec<G::Elem> = assignment.values().cloned().collect();
    let cap = Error::RadiusCapExceeded { cap: radius_cap };
    let g_len = word_length_bfs(group, &hgens, &m.g, radius_cap).ok_or(cap.clone())?;
    let vgens: Vec<_> = images.values().cloned().collect();
    let v_len = word_length_bfs(&v, &vgens, &value, radius_cap).ok_or(cap)?;
    let norm_eq = u64::from(g_len) == m.norm();
    let len_eq = g_len == v_len;
    if norm_eq != len_eq {
        return Err(Error::BoundViolation(format!(
            "|g| = {g_len}, ‖w‖ = {}, |μ(f)| = {v_len}",
            m.norm()
        )));
    }
    if norm_eq && !group.is_identity(&m.g) {
        let ell = crate::metrics::FnLength(|h: &G::Elem| {
            u64::from(word_length_bfs(group, &hgens, h, radius_cap).unwrap_or(u32::MAX))
        });
        let graph = build_cancellation_graph(group, &m, PairingStrategy::Forward)?;
        graph.check_invariants(group, &ell)?;
        if !graph.is_connected() {
            return Err(Error::BoundViolation("equality case with a disconnected graph".into()));
        }
    }
    Ok((norm_eq, len_eq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{CayleyTable, Cyclic, DirectProduct};
    use crate::metrics::{FnLength, TableLength, WeightedL1};

    fn h(a: i64, b: i64) -> FreeAbelianElement {
        FreeAbelianElement::from_pairs([(0, a), (1, b)])
    }

    fn z2() -> (FreeAbelian, BTreeMap<usize, FreeAbelianElement>) {
        (FreeAbelian::new(2), BTreeMap::from([(1, h(1, 0)), (2, h(0, 1))]))
    }

    fn example() -> Word {
        Word::parse("x1^-3 x2^-1 x1 x2 x1^3 x2 x1 x2").unwrap()
    }

    /// Module-notation recursion: appending `xᵢ^{±1}` to a prefix with top
    /// `g` adds `±lᵢ g` (or `∓lᵢ g hᵢ⁻¹`) to `tᵢ`.
    fn module_oracle<G: Group>(
        group: &G,
        lengths: &BTreeMap<usize, u64>,
        assignment: &BTreeMap<usize, G::Elem>,
        f: &Word,
    ) -> (BTreeMap<usize, GroupRingElement<G::Elem>>, G::Elem) {
        let mut t: BTreeMap<usize, GroupRingElement<G::Elem>> = BTreeMap::new();
        let mut g = group.identity();
        for l in f.letters() {
            let hi = &assignment[&l.gen];
            let li = BigInt::from(lengths[&l.gen]);
            if l.sign > 0 {
                t.entry(l.gen).or_default().add_term(g.clone(), li);
                g = group.mul(&g, hi);
            } else {
                g = group.mul(&g, &group.inv(hi));
                t.entry(l.gen).or_default().add_term(g.clone(), -li);
            }
        }
        t.retain(|_, x| !x.is_zero());
        (t, g)
    }

    #[test]
    fn worked_example_image() {
        let (g, a) = z2();
        let m = magnus_image(&g, &WeightedL1::standard(), &a, &example()).unwrap();
        let t1 = GroupRingElement::from_terms([(h(1, 1), 1), (h(-3, -1), 1), (h(-3, 0), -1), (h(0, 0), 1)]);
        let t2 = GroupRingElement::from_terms([(h(2, 1), 1), (h(1, 0), 1), (h(-2, -1), 1), (h(-3, -1), -1)]);
        assert_eq!(m.t_i(1), t1);
        assert_eq!(m.t_i(2), t2);
        assert_eq!(m.g, h(2, 2));
        assert_eq!(m.norm(), 8);
        let rs = rs_check(&g, &m);
        assert!(rs.holds);
        assert_eq!(rs.s.unwrap(), m.t);
        let graph = build_cancellation_graph(&g, &m, PairingStrategy::Forward).unwrap();
        assert_eq!(graph.red_count(), 8);
        graph.check_invariants(&g, &WeightedL1::standard()).unwrap();
        let arc = graph.arc();
        assert_eq!(graph.labels[arc[0]], (-1, h(0, 0)));
        assert_eq!(graph.labels[*arc.last().unwrap()], (1, h(2, 2)));
        let (lg, norm, w) = verify_magnus_bound(&g, &m, &WeightedL1::standard()).unwrap();
        assert_eq!((lg, norm), (4, 8));
        assert!((4..=8).contains(&w));
    }

    #[test]
    fn two_letter_word() {
        let (g, a) = z2();
        let m = magnus_image(&g, &WeightedL1::standard(), &a, &Word::parse("x1 x2").unwrap()).unwrap();
        assert_eq!(m.t_i(1), GroupRingElement::monomial(h(0, 0), 1));
        assert_eq!(m.t_i(2), GroupRingElement::monomial(h(1, 0), 1));
        assert_eq!(m.g, h(1, 1));
        let graph = build_cancellation_graph(&g, &m, PairingStrategy::Forward).unwrap();
        assert_eq!(graph.arc().len(), 4);
        assert!(graph.is_connected());
        assert_eq!(verify_magnus_bound(&g, &m, &WeightedL1::standard()).unwrap(), (2, 2, 2));
    }

    #[test]
    fn empty_word() {
        let (g, a) = z2();
        let m = magnus_image(&g, &WeightedL1::standard(), &a, &Word::empty()).unwrap();
        assert!(m.t.is_empty());
        assert_eq!(m.g, h(0, 0));
        let rs = rs_check(&g, &m);
        assert!(rs.holds && rs.s.unwrap().is_empty());
        assert_eq!(verify_magnus_bound(&g, &m, &WeightedL1::standard()).unwrap(), (0, 0, 0));
        let graph = build_cancellation_graph(&g, &m, PairingStrategy::Forward).unwrap();
        assert!(graph.arc().is_empty() && graph.vertices.is_empty());
    }

    #[test]
    fn corrupted_image_fails_rs() {
        let (g, a) = z2();
        let mut m = magnus_image(&g, &WeightedL1::standard(), &a, &example()).unwrap();
        m.t.get_mut(&1).unwrap().add_term(h(1, 1), BigInt::from(1));
        assert!(!rs_check(&g, &m).holds);
        assert!(build_cancellation_graph(&g, &m, PairingStrategy::Forward).is_err());
    }

    #[test]
    fn generalized_weights_divide() {
        let (g, a) = z2();
        let ell = WeightedL1::new(vec![1, 3]).unwrap();
        let m = magnus_image(&g, &ell, &a, &example()).unwrap();
        assert_eq!(m.lengths, BTreeMap::from([(1, 1), (2, 3)]));
        let rs = rs_check(&g, &m);
        assert!(rs.holds);
        assert_eq!(m.norm(), 4 + 3 * 4);
        let (lg, norm, _) = verify_magnus_bound(&g, &m, &ell).unwrap();
        assert_eq!(lg, 2 + 3 * 2);
        assert!(lg <= norm);
    }

    #[test]
    fn matches_module_recursion_and_standard_case() {
        let (g, a) = z2();
        let unit = FnLength(|x: &FreeAbelianElement| u64::from(!x.is_zero()));
        let weighted = WeightedL1::new(vec![2, 3]).unwrap();
        for f in Word::all_reduced_up_to(&[1, 2], 5) {
            let m = magnus_image(&g, &weighted, &a, &f).unwrap();
            let (t, top) = module_oracle(&g, &m.lengths, &a, &f);
            assert_eq!(m.t, t);
            assert_eq!(m.g, top);
            let std = magnus_image(&g, &WeightedL1::standard(), &a, &f).unwrap();
            assert_eq!(magnus_image(&g, &unit, &a, &f).unwrap(), std);
        }
    }

    #[test]
    fn exhaustive_bound_on_finite_product() {
        let group = DirectProduct::new(Cyclic::new(5), Cyclic::new(5));
        let (table, elems) = CayleyTable::from_group(&group, &[(1, 0), (0, 1)]);
        let ell = TableLength::word_length(&table);
        let idx = |e: (u64, u64)| elems.iter().position(|x| *x == e).unwrap();
        let a = BTreeMap::from([(1, idx((1, 0))), (2, idx((0, 1)))]);
        for f in Word::all_reduced_up_to(&[1, 2], 6) {
            let m = magnus_image(&table, &ell, &a, &f).unwrap();
            let fw = verify_with_strategy(&table, &m, &ell, PairingStrategy::Forward).unwrap();
            let rv = verify_with_strategy(&table, &m, &ell, PairingStrategy::Reverse).unwrap();
            assert_eq!((fw.0, fw.1), (rv.0, rv.1));
        }
    }

    #[test]
    fn mcor_examples() {
        let (g, a) = z2();
        assert_eq!(mcor_equality_check(&g, &a, &Word::parse("x1").unwrap(), 4).unwrap(), (true, true));
        let c = Word::parse("x1 x2 x1^-1 x2^-1").unwrap();
        assert_eq!(mcor_equality_check(&g, &a, &c, 4).unwrap(), (false, false));
        assert_eq!(
            mcor_equality_check(&g, &a, &c, 1),
            Err(Error::RadiusCapExceeded { cap: 1 })
        );
    }

    #[test]
    fn dot_output() {
        let (g, a) = z2();
        let m = magnus_image(&g, &WeightedL1::standard(), &a, &Word::parse("x1 x2").unwrap()).unwrap();
        let graph = build_cancellation_graph(&g, &m, PairingStrategy::Forward).unwrap();
        let dot = graph.to_dot(|e| e.render("h"));
        assert!(dot.starts_with("graph cancellation {"));
        assert_eq!(dot.matches("color=red").count(), 2);
        assert_eq!(dot.matches("color=blue").count(), 1);
        assert!(dot.contains("shape=doublecircle") && dot.contains("shape=box"));
        assert!(dot.contains("label=\"-1\""));
    }
}
