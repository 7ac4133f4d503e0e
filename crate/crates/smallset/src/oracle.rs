//! Exhaustive brute-force ground truth over `2^N`.
//!
//! Deliberately naive: every operation walks all `2^N` words. The only
//! liberties taken are a bit-packed word encoding and chunked parallel
//! scans whose reductions (counts, least counterexamples) are associative,
//! so the results are independent of scheduling.

use rayon::prelude::*;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::rep::{PrefixRep, SmallRep};
use crate::word::Word;

pub const DEFAULT_CAP: u32 = 24;
pub const HARD_CAP: u32 = 28;

/// Ambient truncation length. `N <= 24` unless `SMALLSET_MAX_TRUNC` raises
/// it; the oracle refuses anything above 28 regardless.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    n: u32,
}

impl Truncation {
    pub fn new(n: u32) -> Result<Self> {
        let cap = match std::env::var("SMALLSET_MAX_TRUNC") {
            Ok(v) => v
                .parse::<u32>()
                .map_err(|_| Error::InvalidInput("SMALLSET_MAX_TRUNC must be an integer".into()))?
                .min(HARD_CAP),
            Err(_) => DEFAULT_CAP,
        };
        if n > cap {
            return Err(Error::TruncationExceeded(n, cap));
        }
        Ok(Truncation { n })
    }

    pub fn len(&self) -> u32 {
        self.n
    }

    pub fn words(&self) -> u64 {
        1u64 << self.n
    }

    pub fn word(&self, value: u32) -> Word {
        Word::new((0..self.n).collect(), value).expect("value fits the truncation")
    }
}

/// Anything with a per-word hit count can be enumerated against.
pub trait Membership {
    /// Number of hits of the packed word `x` of length `n`.
    fn hit_count(&self, x: u32, n: u32) -> usize;
    /// Largest coordinate the representation mentions.
    fn max_coord(&self) -> Option<u32>;
}

/// Compiled form of a `SmallRep`: per entry, the block coordinates and the
/// sorted word values.
pub struct CompiledSmall {
    entries: Vec<(Vec<u32>, Vec<u32>)>,
    max_coord: Option<u32>,
}

impl CompiledSmall {
    pub fn new(rep: &SmallRep) -> Self {
        CompiledSmall {
            entries: rep
                .entries()
                .iter()
                .map(|e| {
                    (
                        e.block.coords().to_vec(),
                        e.words.iter().map(Word::value).collect(),
                    )
                })
                .collect(),
            max_coord: rep.max_coord(),
        }
    }
}

#[inline]
fn extract(x: u32, n: u32, coords: &[u32]) -> u32 {
    let mut v = 0u32;
    for &c in coords {
        v = (v << 1) | ((x >> (n - 1 - c)) & 1);
    }
    v
}

impl Membership for CompiledSmall {
    fn hit_count(&self, x: u32, n: u32) -> usize {
        self.entries
            .iter()
            .filter(|(coords, values)| values.binary_search(&extract(x, n, coords)).is_ok())
            .count()
    }

    fn max_coord(&self) -> Option<u32> {
        self.max_coord
    }
}

/// Compiled form of a `PrefixRep`: sorted prefix values per family.
pub struct CompiledPrefix {
    families: Vec<Vec<u32>>,
}

impl CompiledPrefix {
    pub fn new(f: &PrefixRep) -> Self {
        CompiledPrefix {
            families: f
                .families()
                .iter()
                .map(|fam| fam.iter().map(Word::value).collect())
                .collect(),
        }
    }
}

impl Membership for CompiledPrefix {
    fn hit_count(&self, x: u32, n: u32) -> usize {
        self.families
            .iter()
            .enumerate()
            .take(n as usize + 1)
            .filter(|(k, values)| values.binary_search(&(x >> (n - *k as u32))).is_ok())
            .count()
    }

    fn max_coord(&self) -> Option<u32> {
        if self.families.len() > 1 {
            Some(self.families.len() as u32 - 2)
        } else {
            None
        }
    }
}

fn check_fits(m: &dyn Membership, t: Truncation) -> Result<()> {
    if let Some(c) = m.max_coord() {
        if c >= t.len() {
            return Err(Error::TruncationExceeded(c + 1, t.len()));
        }
    }
    Ok(())
}

pub struct MemberCount {
    pub count: u64,
    pub bitmap: Option<Vec<u64>>,
}

/// Count the words of `2^N` with at least `threshold` hits; optionally
/// return the full membership bitmap.
pub fn enumerate_members(
    m: &(dyn Membership + Sync),
    t: Truncation,
    threshold: usize,
    want_bitmap: bool,
) -> Result<MemberCount> {
    check_fits(m, t)?;
    let n = t.len();
    let total = t.words();
    if want_bitmap {
        let mut bitmap = vec![0u64; ((total + 63) / 64) as usize];
        let count: u64 = bitmap
            .par_iter_mut()
            .enumerate()
            .map(|(idx, cell)| {
                let mut c = 0u64;
                for b in 0..64u64 {
                    let x = idx as u64 * 64 + b;
                    if x >= total {
                        break;
                    }
                    if m.hit_count(x as u32, n) >= threshold {
                        *cell |= 1 << b;
                        c += 1;
                    }
                }
                c
            })
            .sum();
        Ok(MemberCount {
            count,
            bitmap: Some(bitmap),
        })
    } else {
        let count = (0..total)
            .into_par_iter()
            .filter(|&x| m.hit_count(x as u32, n) >= threshold)
            .count() as u64;
        Ok(MemberCount {
            count,
            bitmap: None,
        })
    }
}

/// Exact truncated measure: member count over `2^N` at the given threshold.
pub fn exact_measure(m: &(dyn Membership + Sync), t: Truncation, threshold: usize) -> Result<Dyadic> {
    let c = enumerate_members(m, t, threshold, false)?;
    Ok(Dyadic::ratio(c.count as i64, t.len()))
}

/// `true` iff every word hitting `a` hits `b`; otherwise the
/// lexicographically least counterexample.
pub fn subset_oracle(a: &SmallRep, b: &SmallRep, t: Truncation) -> Result<Option<Word>> {
    let ca = CompiledSmall::new(a);
    let cb = CompiledSmall::new(b);
    check_fits(&ca, t)?;
    check_fits(&cb, t)?;
    let n = t.len();
    let cex = (0..t.words())
        .into_par_iter()
        .filter(|&x| ca.hit_count(x as u32, n) >= 1 && cb.hit_count(x as u32, n) == 0)
        .min();
    Ok(cex.map(|x| t.word(x as u32)))
}

/// `true` iff every word hitting the prefix family hits `a` or `b`;
/// otherwise the least counterexample.
pub fn cover_oracle(
    f: &PrefixRep,
    a: &SmallRep,
    b: &SmallRep,
    t: Truncation,
) -> Result<Option<Word>> {
    let cf = CompiledPrefix::new(f);
    let ca = CompiledSmall::new(a);
    let cb = CompiledSmall::new(b);
    check_fits(&cf, t)?;
    check_fits(&ca, t)?;
    check_fits(&cb, t)?;
    let n = t.len();
    let cex = (0..t.words())
        .into_par_iter()
        .filter(|&x| {
            let x = x as u32;
            cf.hit_count(x, n) >= 1 && ca.hit_count(x, n) == 0 && cb.hit_count(x, n) == 0
        })
        .min();
    Ok(cex.map(|x| t.word(x as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::Entry;
    use crate::word::Block;

    fn rep(spec: &[(&[u32], &[&str])]) -> SmallRep {
        let entries = spec
            .iter()
            .map(|(coords, words)| {
                let block = Block::new(coords.to_vec()).unwrap();
                let ws = words
                    .iter()
                    .map(|s| Word::from_bits(coords.to_vec(), s).unwrap())
                    .collect();
                Entry::new(block, ws).unwrap()
            })
            .collect();
        SmallRep::new(entries).unwrap()
    }

    #[test]
    fn member_examples() {
        let t = Truncation::new(3).unwrap();
        let empty = CompiledSmall::new(&SmallRep::empty());
        assert_eq!(enumerate_members(&empty, t, 1, false).unwrap().count, 0);

        let r = CompiledSmall::new(&rep(&[(&[0], &["1"])]));
        assert_eq!(enumerate_members(&r, t, 1, false).unwrap().count, 4);

        let t2 = Truncation::new(2).unwrap();
        let r = rep(&[(&[0], &["1"]), (&[1], &["1"])]);
        let c = enumerate_members(&CompiledSmall::new(&r), t2, 2, true).unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.bitmap.unwrap()[0], 1 << 0b11);
    }

    #[test]
    fn measure_examples() {
        let t = Truncation::new(1).unwrap();
        let one_bit = rep(&[(&[0], &["1"])]);
        assert_eq!(
            exact_measure(&CompiledSmall::new(&one_bit), t, 1).unwrap(),
            Dyadic::new(1, 1)
        );
        let t = Truncation::new(2).unwrap();
        assert_eq!(
            exact_measure(&CompiledSmall::new(&SmallRep::empty()), t, 1).unwrap(),
            Dyadic::zero()
        );
        // two independent one-bit blocks: 1 - (1/2)^2 = 3/4
        let r = rep(&[(&[0], &["1"]), (&[1], &["1"])]);
        assert_eq!(
            exact_measure(&CompiledSmall::new(&r), t, 1).unwrap(),
            Dyadic::new(3, 2)
        );
    }

    #[test]
    fn measure_respects_union_bound() {
        let t = Truncation::new(6).unwrap();
        let r = rep(&[(&[0, 1], &["01", "10"]), (&[3], &["1"]), (&[4, 5], &["11"])]);
        let mu = exact_measure(&CompiledSmall::new(&r), t, 1).unwrap();
        let w = r.weight();
        let cap = if w > Dyadic::one() { Dyadic::one() } else { w };
        assert!(mu <= cap);
    }

    #[test]
    fn subset_examples() {
        let t = Truncation::new(2).unwrap();
        let a = rep(&[(&[0], &["1"])]);
        assert_eq!(subset_oracle(&a, &a, t).unwrap(), None);
        let b = rep(&[(&[0, 1], &["10"])]);
        let cex = subset_oracle(&a, &b, t).unwrap().unwrap();
        assert_eq!(cex.bits_string(), "11");
        assert_eq!(subset_oracle(&SmallRep::empty(), &b, t).unwrap(), None);
    }

    #[test]
    fn subset_transitive_on_random_triples() {
        use crate::rng::SplitMix64;
        let mut rng = SplitMix64::new(7);
        let t = Truncation::new(6).unwrap();
        let mut random_rep = |rng: &mut SplitMix64| {
            let mut entries = Vec::new();
            let mut next = 0u32;
            while next < 6 {
                let len = 1 + rng.below(2) as u32;
                let hi = (next + len).min(6);
                let block = Block::interval(next, hi).unwrap();
                let blen = (hi - next) as usize;
                let words = (0..1u32 << blen)
                    .filter(|_| rng.below(3) == 0)
                    .map(|v| Word::new(block.coords().to_vec(), v).unwrap())
                    .collect();
                entries.push(Entry::new(block, words).unwrap());
                next = hi;
            }
            SmallRep::new(entries).unwrap()
        };
        let mut seen = 0;
        for _ in 0..200 {
            let a = random_rep(&mut rng);
            let b = random_rep(&mut rng);
            let c = random_rep(&mut rng);
            let ab = subset_oracle(&a, &b, t).unwrap().is_none();
            let bc = subset_oracle(&b, &c, t).unwrap().is_none();
            if ab && bc {
                seen += 1;
                assert!(subset_oracle(&a, &c, t).unwrap().is_none());
            }
        }
        assert!(seen > 0, "sampler never produced a chained pair");
    }

    #[test]
    fn measure_monotone_under_word_addition() {
        let t = Truncation::new(5).unwrap();
        let base = rep(&[(&[0, 1], &["01"]), (&[2, 3], &["10"])]);
        let more = rep(&[(&[0, 1], &["01", "11"]), (&[2, 3], &["10"])]);
        let m0 = exact_measure(&CompiledSmall::new(&base), t, 1).unwrap();
        let m1 = exact_measure(&CompiledSmall::new(&more), t, 1).unwrap();
        assert!(m0 <= m1);
    }

    // Inclusion-exclusion cross-check for up to 3 entries.
    #[test]
    fn threshold_one_matches_inclusion_exclusion() {
        let t = Truncation::new(6).unwrap();
        let r = rep(&[(&[0, 1], &["01", "11"]), (&[2], &["0"]), (&[4, 5], &["10"])]);
        let sizes: Vec<u64> = r
            .entries()
            .iter()
            .map(|e| (e.words.len() as u64) << (6 - e.block.len()))
            .collect();
        let pair = |i: usize, j: usize| -> u64 {
            let wi = r.entries()[i].words.len() as u64;
            let wj = r.entries()[j].words.len() as u64;
            let free = 6 - r.entries()[i].block.len() - r.entries()[j].block.len();
            wi * wj * (1 << free)
        };
        let triple = {
            let w: u64 = r.entries().iter().map(|e| e.words.len() as u64).product();
            let free: usize = 6 - r.entries().iter().map(|e| e.block.len()).sum::<usize>();
            w * (1 << free)
        };
        let expect = sizes.iter().sum::<u64>() - pair(0, 1) - pair(0, 2) - pair(1, 2) + triple;
        let got = enumerate_members(&CompiledSmall::new(&r), t, 1, false)
            .unwrap()
            .count;
        assert_eq!(got, expect);
    }

    #[test]
    fn truncation_caps() {
        assert!(Truncation::new(24).is_ok());
        assert!(matches!(
            Truncation::new(25),
            Err(Error::TruncationExceeded(25, 24))
        ));
        let t = Truncation::new(3).unwrap();
        let r = rep(&[(&[5], &["1"])]);
        assert!(matches!(
            subset_oracle(&r, &r, t),
            Err(Error::TruncationExceeded(6, 3))
        ));
    }
}
