use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{put_int, put_uint, Group};
use crate::error::{Error, Result};

/// The infinite cyclic group, written additively.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Group for Integers {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }
    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }
    fn inv(&self, a: &i64) -> i64 {
        -a
    }
    fn write_key(&self, a: &i64, out: &mut Vec<u8>) {
        put_int(out, *a);
    }
    fn name(&self) -> String {
        "Z".into()
    }
}

/// `ℤ/n` with residues in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cyclic {
    n: u64,
}

impl Cyclic {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "cyclic group order must be positive");
        Cyclic { n }
    }

    pub fn order(&self) -> u64 {
        self.n
    }
}

impl Group for Cyclic {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }
    fn inv(&self, a: &u64) -> u64 {
        (self.n - a % self.n) % self.n
    }
    fn write_key(&self, a: &u64, out: &mut Vec<u8>) {
        put_uint(out, *a);
    }
    fn name(&self) -> String {
        format!("Z/{}", self.n)
    }
    fn contains(&self, a: &u64) -> bool {
        *a < self.n
    }
}

/// A permutation in one-line notation: `image[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The cycle `(c0 c1 ... ck)` acting on `{0, …, n-1}`.
    pub fn cycle(n: usize, points: &[usize]) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        for (i, &p) in points.iter().enumerate() {
            image[p] = points[(i + 1) % points.len()];
        }
        Permutation(image)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        self.0.iter().all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
    }
}

/// The symmetric group `S_n`; the product `p·q` applies `q` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symmetric {
    n: usize,
}

impl Symmetric {
    pub fn new(n: usize) -> Self {
        Symmetric { n }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// The transposition `(0 1)` and the full cycle `(0 1 … n-1)`.
    pub fn standard_generators(&self) -> Vec<Permutation> {
        if self.n < 2 {
            return Vec::new();
        }
        let mut gens = vec![Permutation::cycle(self.n, &[0, 1])];
        if self.n > 2 {
            gens.push(Permutation::cycle(self.n, &(0..self.n).collect::<Vec<_>>()));
        }
        gens
    }
}

impl Group for Symmetric {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.n)
    }
    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        Permutation(b.0.iter().map(|&i| a.0[i]).collect())
    }
    fn inv(&self, a: &Permutation) -> Permutation {
        let mut out = vec![0; a.0.len()];
        for (i, &j) in a.0.iter().enumerate() {
            out[j] = i;
        }
        Permutation(out)
    }
    fn write_key(&self, a: &Permutation, out: &mut Vec<u8>) {
        put_uint(out, a.0.len() as u64);
        for &x in &a.0 {
            put_uint(out, x as u64);
        }
    }
    fn name(&self) -> String {
        format!("S{}", self.n)
    }
    fn contains(&self, a: &Permutation) -> bool {
        a.degree() == self.n && a.is_valid()
    }
}

/// Element of a free abelian group: finitely many nonzero coordinates.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "RawFreeAbelian")]
pub struct FreeAbelianElement {
    coords: BTreeMap<usize, i64>,
}

#[derive(Deserialize)]
struct RawFreeAbelian {
    coords: BTreeMap<usize, i64>,
}

impl From<RawFreeAbelian> for FreeAbelianElement {
    fn from(raw: RawFreeAbelian) -> Self {
        FreeAbelianElement::from_pairs(raw.coords)
    }
}

impl FreeAbelianElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::from_pairs([(i, 1)])
    }

    /// Builds an element from `(index, coefficient)` pairs, summing repeats
    /// and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, i64)>>(pairs: I) -> Self {
        let mut coords = BTreeMap::new();
        for (i, k) in pairs {
            *coords.entry(i).or_insert(0) += k;
        }
        coords.retain(|_, k| *k != 0);
        FreeAbelianElement { coords }
    }

    pub fn coord(&self, i: usize) -> i64 {
        self.coords.get(&i).copied().unwrap_or(0)
    }

    pub fn coords(&self) -> &BTreeMap<usize, i64> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coords = self.coords.clone();
        for (&i, &k) in &other.coords {
            let e = coords.entry(i).or_insert(0);
            *e += k;
            if *e == 0 {
                coords.remove(&i);
            }
        }
        FreeAbelianElement { coords }
    }

    pub fn neg(&self) -> Self {
        FreeAbelianElement {
            coords: self.coords.iter().map(|(&i, &k)| (i, -k)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_pairs(self.coords.iter().map(|(&i, &c)| (i, c * k)))
    }

    /// Sum of absolute values of the coordinates.
    pub fn l1_norm(&self) -> u64 {
        self.coords.values().map(|k| k.unsigned_abs()).sum()
    }

    /// Multiplicative rendering such as `h1^2h2^-1`; coordinate `i` is
    /// printed as `{symbol}{i + 1}` and zero as `1`.
    pub fn render(&self, symbol: &str) -> String {
        if self.coords.is_empty() {
            return "1".to_string();
        }
        self.coords
            .iter()
            .map(|(&i, &k)| match k {
                1 => format!("{symbol}{}", i + 1),
                _ => format!("{symbol}{}^{k}", i + 1),
            })
            .collect()
    }
}

/// Free abelian group with basis indexed by `0..rank`, or by all of `ℕ`
/// when `rank` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeAbelian {
    rank: Option<usize>,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Self {
        FreeAbelian { rank: Some(rank) }
    }

    pub fn unbounded() -> Self {
        FreeAbelian { rank: None }
    }

    pub fn rank(&self) -> Option<usize> {
        self.rank
    }

    pub fn basis(&self) -> Vec<FreeAbelianElement> {
        (0..self.rank.unwrap_or(0))
            .map(FreeAbelianElement::basis)
            .collect()
    }
}

impl Group for FreeAbelian {
    type Elem = FreeAbelianElement;

    fn identity(&self) -> FreeAbelianElement {
        FreeAbelianElement::zero()
    }
    fn mul(&self, a: &FreeAbelianElement, b: &FreeAbelianElement) -> FreeAbelianElement {
        a.add(b)
    }
    fn inv(&self, a: &FreeAbelianElement) -> FreeAbelianElement {
        a.neg()
    }
    fn write_key(&self, a: &FreeAbelianElement, out: &mut Vec<u8>) {
        put_uint(out, a.coords.len() as u64);
        for (&i, &k) in &a.coords {
            put_uint(out, i as u64);
            put_int(out, k);
        }
    }
    fn name(&self) -> String {
        match self.rank {
            Some(r) => format!("Z^{r}"),
            None => "Z^(N)".into(),
        }
    }
    fn contains(&self, a: &FreeAbelianElement) -> bool {
        match self.rank {
            Some(r) => a.coords.keys().all(|&i| i < r) && a.coords.values().all(|&k| k != 0),
            None => a.coords.values().all(|&k| k != 0),
        }
    }
}

/// Direct product `A × B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectProduct<A, B> {
    pub left: A,
    pub right: B,
}

impl<A, B> DirectProduct<A, B> {
    pub fn new(left: A, right: B) -> Self {
        DirectProduct { left, right }
    }
}

impl<A: Group, B: Group> Group for DirectProduct<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn identity(&self) -> Self::Elem {
        (self.left.identity(), self.right.identity())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(&a.0, &b.0), self.right.mul(&a.1, &b.1))
    }
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        (self.left.inv(&a.0), self.right.inv(&a.1))
    }
    fn write_key(&self, a: &Self::Elem, out: &mut Vec<u8>) {
        self.left.write_key(&a.0, out);
        self.right.write_key(&a.1, out);
    }
    fn name(&self) -> String {
        format!("{}x{}", self.left.name(), self.right.name())
    }
    fn contains(&self, a: &Self::Elem) -> bool {
        self.left.contains(&a.0) && self.right.contains(&a.1)
    }
}

/// A finite group given by its multiplication table. Index `0` is the
/// identity. The table also records a generating set, which defines the
/// default word length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    labels: Vec<String>,
}

/// On-disk description of a custom finite group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CayleyTableSpec {
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub generators: Option<Vec<usize>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub name: Option<String>,
}

impl CayleyTable {
    /// Enumerates the subgroup generated by `gens` inside `group` in BFS
    /// order (identity first) and tabulates its multiplication.
    pub fn from_group<G: Group>(group: &G, gens: &[G::Elem]) -> (CayleyTable, Vec<G::Elem>) {
        let mut index: HashMap<G::Elem, usize> = HashMap::new();
        let mut elems = vec![group.identity()];
        index.insert(group.identity(), 0);
        let mut queue = VecDeque::from([0usize]);
        let letters: Vec<G::Elem> = gens
            .iter()
            .flat_map(|g| [g.clone(), group.inv(g)])
            .collect();
        while let Some(i) = queue.pop_front() {
            for s in &letters {
                let y = group.mul(&elems[i], s);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| index[&group.mul(&elems[i], &elems[j])]).collect())
            .collect();
        let inverse = (0..n).map(|i| index[&group.inv(&elems[i])]).collect();
        let mut generators: Vec<usize> = gens.iter().map(|g| index[g]).collect();
        generators.retain(|&g| g != 0);
        generators.dedup();
        let labels = elems
            .iter()
            .map(|e| serde_json::to_string(e).unwrap_or_else(|_| format!("{e:?}")))
            .collect();
        (
            CayleyTable {
                name: group.name(),
                table,
                inverse,
                generators,
                labels,
            },
            elems,
        )
    }

    /// Validates a user-supplied table: index 0 must be the identity, and the
    /// table must be associative with inverses.
    pub fn from_spec(spec: CayleyTableSpec) -> Result<CayleyTable> {
        let n = spec.table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in spec.table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            if row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {i} has an out-of-range entry")));
            }
        }
        let t = &spec.table;
        for i in 0..n {
            if t[0][i] != i || t[i][0] != i {
                return Err(Error::InvalidGroup("index 0 is not the identity".into()));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            match (0..n).find(|&j| t[i][j] == 0) {
                Some(j) if t[j][i] == 0 => inverse[i] = j,
                _ => return Err(Error::InvalidGroup(format!("element {i} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if t[t[a][b]][c] != t[a][t[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let generators = match spec.generators {
            Some(g) => {
                if g.iter().any(|&x| x >= n) {
                    return Err(Error::InvalidGroup("generator out of range".into()));
                }
                g.into_iter().filter(|&x| x != 0).collect()
            }
            None => (1..n).collect(),
        };
        let labels = match spec.labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(Error::InvalidGroup("label count mismatch".into())),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let table = CayleyTable {
            name: spec.name.unwrap_or_else(|| format!("custom{n}")),
            table: spec.table,
            inverse,
            generators,
            labels,
        };
        let reach = table.word_lengths();
        if reach.iter().any(|d| d.is_none()) {
            return Err(Error::InvalidGroup("generators do not generate the group".into()));
        }
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.table.len()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Word lengths with respect to the recorded generators, by BFS.
    pub fn word_lengths(&self) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.order()];
        dist[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &g in &self.generators {
                for s in [g, self.inverse[g]] {
                    let y = self.table[x][s];
                    if dist[y].is_none() {
                        dist[y] = Some(d + 1);
                        queue.push_back(y);
                    }
                }
            }
        }
        dist
    }
}

impl Group for CayleyTable {
    type Elem = usize;

    fn identity(&self) -> usize {
        0
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }
    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }
    fn write_key(&self, a: &usize, out: &mut Vec<u8>) {
        put_uint(out, *a as u64);
    }
    fn name(&self) -> String {
        self.name.clone()
    }
    fn contains(&self, a: &usize) -> bool {
        *a < self.table.len()
    }
}
