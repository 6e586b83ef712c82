use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator symbol with sign `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(usize, i8)", into = "(usize, i8)")]
pub struct Letter {
    pub gen: usize,
    pub sign: i8,
}

impl Letter {
    pub fn new(gen: usize, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1, "letter sign must be +1 or -1");
        Letter { gen, sign }
    }

    pub fn pos(gen: usize) -> Self {
        Letter { gen, sign: 1 }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, sign: -1 }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            sign: -self.sign,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign == -other.sign
    }
}

impl TryFrom<(usize, i8)> for Letter {
    type Error = String;

    fn try_from((gen, sign): (usize, i8)) -> std::result::Result<Self, Self::Error> {
        if sign == 1 || sign == -1 {
            Ok(Letter { gen, sign })
        } else {
            Err(format!("letter sign must be +1 or -1, got {sign}"))
        }
    }
}

impl From<Letter> for (usize, i8) {
    fn from(l: Letter) -> Self {
        (l.gen, l.sign)
    }
}

/// A freely reduced word in the free group.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "RawWord", into = "RawWord")]
pub struct Word {
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    letters: Vec<Letter>,
}

impl From<RawWord> for Word {
    fn from(raw: RawWord) -> Self {
        Word::free_reduce(raw.letters)
    }
}

impl From<Word> for RawWord {
    fn from(w: Word) -> Self {
        RawWord { letters: w.letters }
    }
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// Stack-based free reduction of an arbitrary letter sequence.
    pub fn free_reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn generator(gen: usize) -> Self {
        Word {
            letters: vec![Letter::pos(gen)],
        }
    }

    /// `x_gen^k`.
    pub fn power_of(gen: usize, k: i64) -> Self {
        let l = if k >= 0 {
            Letter::pos(gen)
        } else {
            Letter::neg(gen)
        };
        Word {
            letters: vec![l; k.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::free_reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Self {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// Sum of exponents of `gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| i64::from(l.sign))
            .sum()
    }

    /// All freely reduced words of exactly `len` letters over `gens`, in
    /// lexicographic order of (generator position, sign).
    pub fn all_reduced(gens: &[usize], len: usize) -> Vec<Word> {
        let alphabet: Vec<Letter> = gens
            .iter()
            .flat_map(|&g| [Letter::pos(g), Letter::neg(g)])
            .collect();
        let mut level = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(level.len() * alphabet.len());
            for w in &level {
                for &l in &alphabet {
                    if w.letters.last().is_some_and(|&t| t.cancels(l)) {
                        continue;
                    }
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    next.push(Word { letters });
                }
            }
            level = next;
        }
        level
    }

    /// All freely reduced words of length at most `max_len`.
    pub fn all_reduced_up_to(gens: &[usize], max_len: usize) -> Vec<Word> {
        (0..=max_len)
            .flat_map(|n| Word::all_reduced(gens, n))
            .collect()
    }

    /// Parses whitespace-separated tokens `xi` or `xi^k`. The tokens `1` and
    /// the empty string denote the empty word.
    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let body = tok
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("token `{tok}` must start with `x`")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let gen: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator index in `{tok}`")))?;
            let k: i64 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
            letters.extend(Word::power_of(gen, k).letters);
        }
        Ok(Word::free_reduce(letters))
    }

    /// Renders the word with custom generator names, collapsing runs into
    /// powers.
    pub fn render_with(&self, name: impl Fn(usize) -> String) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let k = (j - i) as i64 * i64::from(l.sign);
            if k == 1 {
                parts.push(name(l.gen));
            } else {
                parts.push(format!("{}^{}", name(l.gen), k));
            }
            i = j;
        }
        parts.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(|g| format!("x{g}")))
    }
}
