//! Prefix-family representations of null sets.
//!
//! A summable family `F_n` of length-`n` words represents the null set of
//! reals whose initial segments land in infinitely many `F_n`. The
//! conversion from a cylinder cover collects the cover words by length.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rep::PrefixRep;
use crate::word::Word;

/// A sequence of open covers, each a union of pairwise-incompatible
/// cylinders given by words on initial segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderCover {
    levels: Vec<Vec<Word>>,
}

impl CylinderCover {
    pub fn new(levels: Vec<Vec<Word>>) -> Result<Self> {
        for (n, level) in levels.iter().enumerate() {
            for w in level {
                let expect: Vec<u32> = (0..w.len() as u32).collect();
                if w.domain() != expect.as_slice() {
                    return Err(Error::MalformedCover(format!(
                        "level {n} contains the non-initial-segment word {w}"
                    )));
                }
            }
            for (i, a) in level.iter().enumerate() {
                for (j, b) in level.iter().enumerate() {
                    if i != j && extends(a, b) {
                        return Err(Error::MalformedCover(format!(
                            "level {n}: [{}] is not disjoint from [{}]",
                            a.bits_string(),
                            b.bits_string()
                        )));
                    }
                }
            }
        }
        Ok(CylinderCover { levels })
    }

    pub fn levels(&self) -> &[Vec<Word>] {
        &self.levels
    }

    /// `mu(U_n) = sum 2^{-|s|}` over the level's cylinders.
    pub fn level_measure(&self, n: usize) -> Dyadic {
        let mut acc = Dyadic::zero();
        for w in &self.levels[n] {
            acc = &acc + &Dyadic::ratio(1, w.len() as u32);
        }
        acc
    }

    /// Check the measure hypothesis `mu(U_n) <= 2^{-n}`. The conversion
    /// itself only needs finiteness, so this is a separate validation.
    pub fn check_shrinking(&self) -> Result<()> {
        for n in 0..self.levels.len() {
            let mu = self.level_measure(n);
            if mu > Dyadic::pow2(-(n as i64)) {
                return Err(Error::MalformedCover(format!(
                    "level {n} has measure {mu} > 2^-{n}"
                )));
            }
        }
        Ok(())
    }

    pub fn total_measure(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for n in 0..self.levels.len() {
            acc = &acc + &self.level_measure(n);
        }
        acc
    }
}

/// `a` is an initial-segment extension of `b` (so `[a]` is inside `[b]`).
fn extends(a: &Word, b: &Word) -> bool {
    a.len() >= b.len() && a.restrict(b.domain()) == *b
}

/// All `n` with `x | [0, n)` in `F_n`. The domain of `x` must reach the
/// family support.
pub fn prefix_hits(x: &Word, f: &PrefixRep) -> Result<Vec<usize>> {
    let n_dom = x.len();
    let expect: Vec<u32> = (0..n_dom as u32).collect();
    if x.domain() != expect.as_slice() {
        return Err(Error::InvalidInput("x must live on an initial segment".into()));
    }
    if n_dom < f.support_len().saturating_sub(1) {
        return Err(Error::DomainTooSmall(n_dom as u32));
    }
    let mut out = Vec::new();
    for n in 0..f.support_len() {
        if n > n_dom {
            break;
        }
        let prefix = x.restrict(&expect[..n]);
        if f.family(n).contains(&prefix) {
            out.push(n);
        }
    }
    Ok(out)
}

/// `sum_n |F_n| / 2^n`, exactly.
pub fn prefix_weight(f: &PrefixRep) -> Dyadic {
    tail_weight(f, 0)
}

/// `sum_{i >= j} |F_i| / 2^i`, exactly (zero beyond the support).
pub fn tail_weight(f: &PrefixRep, j: usize) -> Dyadic {
    let mut acc = Dyadic::zero();
    for i in j..f.support_len() {
        acc = &acc + &Dyadic::ratio(f.family(i).len() as i64, i as u32);
    }
    acc
}

/// Lemma-basic conversion: `F_k` collects the cover words of length `k`
/// across all levels, deduplicated.
pub fn cylinders_to_prefix(cover: &CylinderCover) -> PrefixRep {
    let max_len = cover
        .levels()
        .iter()
        .flatten()
        .map(Word::len)
        .max()
        .unwrap_or(0);
    let mut families: Vec<Vec<Word>> = vec![Vec::new(); max_len + 1];
    for level in cover.levels() {
        for w in level {
            families[w.len()].push(w.clone());
        }
    }
    if cover.levels().iter().all(Vec::is_empty) {
        return PrefixRep::empty();
    }
    PrefixRep::new(families).expect("cover words are initial-segment words")
}

// Wire format: {"levels":[["00","11"],["000"]]}
#[derive(Serialize, Deserialize)]
struct CoverWire {
    levels: Vec<Vec<String>>,
}

impl Serialize for CylinderCover {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoverWire {
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(Word::bits_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylinderCover {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = CoverWire::deserialize(d)?;
        let levels = wire
            .levels
            .iter()
            .map(|l| {
                l.iter()
                    .map(|s| Word::from_bits((0..s.len() as u32).collect(), s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        CylinderCover::new(levels).map_err(serde::de::Error::custom)
    }
}
