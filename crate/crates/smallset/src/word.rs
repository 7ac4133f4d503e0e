//! Words (finite 0/1 assignments) and blocks (finite coordinate sets).
//!
//! A word stores its sorted domain plus the bits packed into a `u32`, most
//! significant bit first in coordinate order. The packed value therefore
//! orders words lexicographically by their serialized 0/1 string, which is
//! the tie-break order used everywhere a "least word" is required.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_WORD_LEN: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    coords: Vec<u32>,
    value: u32,
}

impl Word {
    pub fn new(coords: Vec<u32>, value: u32) -> Result<Self> {
        if !is_sorted_set(&coords) {
            return Err(Error::InvalidInput(
                "word domain must be sorted and duplicate-free".into(),
            ));
        }
        if coords.len() > MAX_WORD_LEN {
            return Err(Error::InvalidInput(format!(
                "word of {} coordinates exceeds the {MAX_WORD_LEN}-bit cap",
                coords.len()
            )));
        }
        if coords.len() < 32 && value >> coords.len() != 0 {
            return Err(Error::InvalidInput("word value wider than its domain".into()));
        }
        Ok(Word { coords, value })
    }

    /// Parse a `0/1` string whose k-th character is the bit of the k-th
    /// smallest coordinate.
    pub fn from_bits(coords: Vec<u32>, bits: &str) -> Result<Self> {
        if bits.len() != coords.len() {
            return Err(Error::InvalidInput(format!(
                "bit string {bits:?} does not match a domain of {} coordinates",
                coords.len()
            )));
        }
        let mut value = 0u32;
        for c in bits.chars() {
            value = (value << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(Error::InvalidInput(format!("bad bit character {c:?}"))),
                };
        }
        Word::new(coords, value)
    }

    /// Word on the interval domain `[lo, hi)`.
    pub fn on_range(lo: u32, hi: u32, value: u32) -> Result<Self> {
        Word::new((lo..hi).collect(), value)
    }

    pub fn empty() -> Self {
        Word {
            coords: Vec::new(),
            value: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn domain(&self) -> &[u32] {
        &self.coords
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn bit(&self, coord: u32) -> Option<bool> {
        let i = self.coords.binary_search(&coord).ok()?;
        Some((self.value >> (self.coords.len() - 1 - i)) & 1 == 1)
    }

    /// Restriction `w | s`: keeps the coordinates of `w` that lie in `s`.
    /// `s` may be any sorted coordinate set; the result lives on the
    /// intersection.
    pub fn restrict(&self, s: &[u32]) -> Word {
        debug_assert!(is_sorted_set(s));
        let mut coords = Vec::new();
        let mut value = 0u32;
        for (i, &c) in self.coords.iter().enumerate() {
            if s.binary_search(&c).is_ok() {
                coords.push(c);
                value = (value << 1) | ((self.value >> (self.coords.len() - 1 - i)) & 1);
            }
        }
        Word { coords, value }
    }

    /// Concatenation of two words with disjoint domains, merged in
    /// coordinate order.
    pub fn join(&self, other: &Word) -> Result<Word> {
        let mut coords = Vec::with_capacity(self.len() + other.len());
        let mut value = 0u32;
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let take_left = match (self.coords.get(i), other.coords.get(j)) {
                (Some(&a), Some(&b)) if a == b => return Err(Error::OverlappingDomains(a)),
                (Some(&a), Some(&b)) => a < b,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            if take_left {
                coords.push(self.coords[i]);
                value = (value << 1) | ((self.value >> (self.len() - 1 - i)) & 1);
                i += 1;
            } else {
                coords.push(other.coords[j]);
                value = (value << 1) | ((other.value >> (other.len() - 1 - j)) & 1);
                j += 1;
            }
        }
        Word::new(coords, value)
    }

    /// Re-index the domain through a strictly monotone coordinate map.
    pub fn map_coords(&self, f: impl Fn(u32) -> u32) -> Result<Word> {
        let coords: Vec<u32> = self.coords.iter().map(|&c| f(c)).collect();
        Word::new(coords, self.value)
    }

    pub fn bits_string(&self) -> String {
        (0..self.coords.len())
            .map(|i| {
                if (self.value >> (self.coords.len() - 1 - i)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.bits_string(), self.coords)
    }
}

/// A nonempty finite set of coordinates, stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    coords: Vec<u32>,
}

impl Block {
    pub fn new(mut coords: Vec<u32>) -> Result<Self> {
        coords.sort_unstable();
        coords.dedup();
        if coords.is_empty() {
            return Err(Error::InvalidInput("block must be nonempty".into()));
        }
        Ok(Block { coords })
    }

    /// The interval block `[lo, hi)`.
    pub fn interval(lo: u32, hi: u32) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi})")));
        }
        Ok(Block {
            coords: (lo..hi).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn min_coord(&self) -> u32 {
        self.coords[0]
    }

    pub fn max_coord(&self) -> u32 {
        *self.coords.last().unwrap()
    }

    pub fn contains(&self, c: u32) -> bool {
        self.coords.binary_search(&c).is_ok()
    }

    pub fn intersection(&self, other: &Block) -> Vec<u32> {
        self.coords
            .iter()
            .copied()
            .filter(|c| other.contains(*c))
            .collect()
    }

    pub fn is_disjoint(&self, other: &Block) -> bool {
        self.intersection(other).is_empty()
    }

    pub fn is_subset_of(&self, other: &Block) -> bool {
        self.coords.iter().all(|c| other.contains(*c))
    }

    pub fn union_coords(blocks: &[&Block]) -> Vec<u32> {
        let mut all: Vec<u32> = blocks.iter().flat_map(|b| b.coords.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    /// Coordinates of `self` missing from `other`.
    pub fn difference(&self, other: &[u32]) -> Vec<u32> {
        self.coords
            .iter()
            .copied()
            .filter(|c| other.binary_search(c).is_err())
            .collect()
    }
}

pub fn is_sorted_set(coords: &[u32]) -> bool {
    coords.windows(2).all(|w| w[0] < w[1])
}
