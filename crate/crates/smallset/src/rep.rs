//! The three set representations and their truncated membership semantics.
//!
//! * `SmallRep` — word-sets `J_n` over pairwise-disjoint finite blocks `I_n`.
//! * `IntervalRep` — the same, with blocks `[k_n, k_{n+1})` cut from a
//!   strictly increasing sequence.
//! * `PrefixRep` — initial-segment families `F_n` over `[0, n)`.
//!
//! Membership at truncation reads "at least `threshold` hits", default 1.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::word::{Block, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub block: Block,
    pub words: Vec<Word>,
}

impl Entry {
    pub fn new(block: Block, mut words: Vec<Word>) -> Result<Self> {
        for w in &words {
            if w.domain() != block.coords() {
                return Err(Error::InvalidInput(format!(
                    "word {w} does not live on block {:?}",
                    block.coords()
                )));
            }
        }
        words.sort();
        words.dedup();
        Ok(Entry { block, words })
    }

    pub fn weight(&self) -> Dyadic {
        Dyadic::ratio(self.words.len() as i64, self.block.len() as u32)
    }

    /// Exactly when the word-set is all of `2^I`.
    pub fn is_full(&self) -> bool {
        self.block.len() < 64 && self.words.len() as u64 == 1u64 << self.block.len()
    }

    pub fn contains_value(&self, v: u32) -> bool {
        self.words.binary_search_by_key(&v, |w| w.value()).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SmallRep {
    entries: Vec<Entry>,
}

impl SmallRep {
    pub fn new(entries: Vec<Entry>) -> Result<Self> {
        for (i, a) in entries.iter().enumerate() {
            for b in &entries[i + 1..] {
                if !a.block.is_disjoint(&b.block) {
                    return Err(Error::InvalidInput(format!(
                        "blocks {:?} and {:?} overlap",
                        a.block.coords(),
                        b.block.coords()
                    )));
                }
            }
        }
        Ok(SmallRep { entries })
    }

    pub fn empty() -> Self {
        SmallRep::default()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest coordinate mentioned by any block, if any.
    pub fn max_coord(&self) -> Option<u32> {
        self.entries.iter().map(|e| e.block.max_coord()).max()
    }

    /// The exact weight `sum_n |J_n| / 2^{|I_n|}`.
    pub fn weight(&self) -> Dyadic {
        let mut acc = Dyadic::zero();
        for e in &self.entries {
            acc = &acc + &e.weight();
        }
        acc
    }

    /// Indices `n` with `x | I_n` in `J_n`. The domain of `x` must cover
    /// every block.
    pub fn hits(&self, x: &Word) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (n, e) in self.entries.iter().enumerate() {
            for &c in e.block.coords() {
                if x.bit(c).is_none() {
                    return Err(Error::DomainTooSmall(c));
                }
            }
            let r = x.restrict(e.block.coords());
            if e.contains_value(r.value()) {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// Truncated membership: hit count at least `threshold`.
    pub fn is_member(&self, x: &Word, threshold: usize) -> Result<bool> {
        Ok(self.hits(x)?.len() >= threshold)
    }
}

/// `true` iff every block of `fine` is contained in some block of `coarse`.
pub fn partition_refines(fine: &[Block], coarse: &[Block]) -> bool {
    fine.iter()
        .all(|f| coarse.iter().any(|c| f.is_subset_of(c)))
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalRep {
    cuts: Vec<u32>,
    sets: Vec<Vec<Word>>,
}

impl IntervalRep {
    pub fn new(cuts: Vec<u32>, sets: Vec<Vec<Word>>) -> Result<Self> {
        if !crate::word::is_sorted_set(&cuts) {
            return Err(Error::InvalidInput("cuts must be strictly increasing".into()));
        }
        let blocks = cuts.len().saturating_sub(1);
        if sets.len() != blocks {
            return Err(Error::InvalidInput(format!(
                "{} cut points define {blocks} blocks but {} word-sets were given",
                cuts.len(),
                sets.len()
            )));
        }
        let mut canon = Vec::with_capacity(sets.len());
        for (k, words) in sets.into_iter().enumerate() {
            let block = Block::interval(cuts[k], cuts[k + 1])?;
            canon.push(Entry::new(block, words)?.words);
        }
        Ok(IntervalRep { cuts, sets: canon })
    }

    pub fn cuts(&self) -> &[u32] {
        &self.cuts
    }

    pub fn sets(&self) -> &[Vec<Word>] {
        &self.sets
    }

    pub fn as_small_rep(&self) -> SmallRep {
        let entries = self
            .sets
            .iter()
            .enumerate()
            .map(|(k, words)| Entry {
                block: Block::interval(self.cuts[k], self.cuts[k + 1]).unwrap(),
                words: words.clone(),
            })
            .collect();
        // Consecutive intervals are disjoint by construction.
        SmallRep { entries }
    }

    pub fn weight(&self) -> Dyadic {
        self.as_small_rep().weight()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PrefixRep {
    families: Vec<Vec<Word>>,
}

impl PrefixRep {
    pub fn new(families: Vec<Vec<Word>>) -> Result<Self> {
        let mut canon = Vec::with_capacity(families.len());
        for (n, fam) in families.into_iter().enumerate() {
            let mut fam = fam;
            for w in &fam {
                let expect: Vec<u32> = (0..n as u32).collect();
                if w.domain() != expect.as_slice() {
                    return Err(Error::InvalidInput(format!(
                        "family {n} contains the word {w} not on [0, {n})"
                    )));
                }
            }
            fam.sort();
            fam.dedup();
            canon.push(fam);
        }
        Ok(PrefixRep { families: canon })
    }

    pub fn empty() -> Self {
        PrefixRep::default()
    }

    pub fn families(&self) -> &[Vec<Word>] {
        &self.families
    }

    /// One past the last family index; every family at or beyond is empty.
    pub fn support_len(&self) -> usize {
        self.families.len()
    }

    pub fn family(&self, n: usize) -> &[Word] {
        self.families.get(n).map(Vec::as_slice).unwrap_or(&[])
    }
}

// ---------------------------------------------------------------------------
// JSON wire formats. Word strings are 0/1 strings in increasing coordinate
// order; dyadics are "m/2^e" strings.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EntryWire {
    block: Vec<u32>,
    words: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SmallRepWire {
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
struct IntervalRepWire {
    cuts: Vec<u32>,
    entries: Vec<EntryWire>,
}

#[derive(Serialize, Deserialize)]
struct PrefixRepWire {
    families: Vec<Vec<String>>,
}

impl Serialize for SmallRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = SmallRepWire {
            entries: self
                .entries
                .iter()
                .map(|e| EntryWire {
                    block: e.block.coords().to_vec(),
                    words: e.words.iter().map(Word::bits_string).collect(),
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SmallRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SmallRepWire::deserialize(d)?;
        let mut entries = Vec::with_capacity(wire.entries.len());
        for ew in wire.entries {
            let block = Block::new(ew.block).map_err(serde::de::Error::custom)?;
            let words = ew
                .words
                .iter()
                .map(|s| Word::from_bits(block.coords().to_vec(), s))
                .collect::<Result<Vec<_>>>()
                .map_err(serde::de::Error::custom)?;
            entries.push(Entry::new(block, words).map_err(serde::de::Error::custom)?);
        }
        SmallRep::new(entries).map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntervalRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = IntervalRepWire {
            cuts: self.cuts.clone(),
            entries: self
                .sets
                .iter()
                .enumerate()
                .map(|(k, words)| EntryWire {
                    block: (self.cuts[k]..self.cuts[k + 1]).collect(),
                    words: words.iter().map(Word::bits_string).collect(),
                })
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = IntervalRepWire::deserialize(d)?;
        let mut sets = Vec::with_capacity(wire.entries.len());
        for (k, ew) in wire.entries.iter().enumerate() {
            let lo = *wire.cuts.get(k).ok_or_else(|| {
                serde::de::Error::custom("more entries than cut intervals")
            })?;
            let hi = *wire.cuts.get(k + 1).ok_or_else(|| {
                serde::de::Error::custom("more entries than cut intervals")
            })?;
            let expect: Vec<u32> = (lo..hi).collect();
            if ew.block != expect {
                return Err(serde::de::Error::custom(format!(
                    "entry {k} block does not match interval [{lo}, {hi})"
                )));
            }
            let words = ew
                .words
                .iter()
                .map(|s| Word::from_bits(expect.clone(), s))
                .collect::<Result<Vec<_>>>()
                .map_err(serde::de::Error::custom)?;
            sets.push(words);
        }
        IntervalRep::new(wire.cuts, sets).map_err(serde::de::Error::custom)
    }
}

impl Serialize for PrefixRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = PrefixRepWire {
            families: self
                .families
                .iter()
                .map(|f| f.iter().map(Word::bits_string).collect())
                .collect(),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PrefixRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = PrefixRepWire::deserialize(d)?;
        let mut families = Vec::with_capacity(wire.families.len());
        for (n, fam) in wire.families.iter().enumerate() {
            let coords: Vec<u32> = (0..n as u32).collect();
            let words = fam
                .iter()
                .map(|s| Word::from_bits(coords.clone(), s))
                .collect::<Result<Vec<_>>>()
                .map_err(serde::de::Error::custom)?;
            families.push(words);
        }
        PrefixRep::new(families).map_err(serde::de::Error::custom)
    }
}
