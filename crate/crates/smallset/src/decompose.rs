//! Decomposition of a prefix-represented null set into two interval
//! representations whose union covers it.
//!
//! The cut sequences interleave as `n_0 = 0 < m_0 < n_1 < m_1 < ...`, each
//! chosen as the least index past the previous cut at which the scaled tail
//! weight drops below the current epsilon. The first representation lives
//! on the blocks `[n_k, n_{k+1})`, the second on `[m_k, m_{k+1})`; a word
//! lands in `J_k` exactly when it agrees with some family word `t` in `F_i`
//! on `[n_k, i)` for an `i` in `[m_k, n_{k+1})`, and symmetrically for
//! `J'_k`.

use std::str::FromStr;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::nullrep::tail_weight;
use crate::rep::{IntervalRep, PrefixRep};
use crate::word::Word;

pub const DEFAULT_BLOCK_CAP: usize = 20;

/// A positive epsilon per cut index, generated by rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsSchedule {
    /// `eps_k = 2^(shift - k)`. The default schedule is `shift = -1`,
    /// i.e. `eps_k = 2^{-k-1}`.
    PowShift(i32),
    /// The same positive dyadic at every index.
    Const(Dyadic),
}

impl Default for EpsSchedule {
    fn default() -> Self {
        EpsSchedule::PowShift(-1)
    }
}

impl EpsSchedule {
    pub fn eps(&self, k: usize) -> Dyadic {
        match self {
            EpsSchedule::PowShift(shift) => Dyadic::pow2(*shift as i64 - k as i64),
            EpsSchedule::Const(d) => d.clone(),
        }
    }
}

impl FromStr for EpsSchedule {
    type Err = Error;

    /// Accepts `2^-k`, `2^-k-3`, `2^-k+3`, or a positive dyadic constant
    /// such as `1/2^4`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("2^-k") {
            if rest.is_empty() {
                return Ok(EpsSchedule::PowShift(0));
            }
            let shift: i32 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad epsilon rule: {s:?}")))?;
            return Ok(EpsSchedule::PowShift(shift));
        }
        let d: Dyadic = s.parse()?;
        if !d.is_positive() {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        Ok(EpsSchedule::Const(d))
    }
}

/// The interleaved cut list `[n_0, m_0, n_1, m_1, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPair {
    cuts: Vec<u32>,
}

impl CutPair {
    pub fn cuts(&self) -> &[u32] {
        &self.cuts
    }

    /// Even positions: `n_0 < n_1 < ...`.
    pub fn n_cuts(&self) -> Vec<u32> {
        self.cuts.iter().copied().step_by(2).collect()
    }

    /// Odd positions: `m_0 < m_1 < ...`.
    pub fn m_cuts(&self) -> Vec<u32> {
        self.cuts.iter().copied().skip(1).step_by(2).collect()
    }
}

/// The greedy minima of the construction. Generation stops at the first
/// cut with zero tail weight, once the mandatory `n_0, m_0, n_1` prefix
/// exists; at finite support the minima always exist because tails reach
/// zero.
pub fn compute_cuts(f: &PrefixRep, eps: &EpsSchedule) -> CutPair {
    let mut cuts: Vec<u32> = vec![0];
    let mut step = 1usize;
    loop {
        let k = (step - 1) / 2;
        let bound = eps.eps(k);
        debug_assert!(bound.is_positive());
        let base = cuts[step - 1];
        let mut j = base + 1;
        loop {
            let scaled = tail_weight(f, j as usize).mul_pow2(base as i64);
            if scaled < bound {
                break;
            }
            j += 1;
        }
        cuts.push(j);
        if tail_weight(f, j as usize).is_zero() && cuts.len() >= 3 {
            return CutPair { cuts };
        }
        step += 1;
    }
}

fn materialize_side(
    f: &PrefixRep,
    side_cuts: &[u32],
    other_cuts: &[u32],
    first_source_is_other_same: bool,
    cap: usize,
) -> Result<IntervalRep> {
    // For the n-side, block k = [n_k, n_{k+1}) draws from i in [m_k, n_{k+1});
    // for the m-side, block k = [m_k, m_{k+1}) draws from i in [n_{k+1}, m_{k+1}).
    let blocks = side_cuts.len().saturating_sub(1);
    let mut sets = Vec::with_capacity(blocks);
    for k in 0..blocks {
        let lo = side_cuts[k];
        let hi = side_cuts[k + 1];
        let blen = (hi - lo) as usize;
        if blen > cap {
            return Err(Error::BlockTooLarge { len: blen, cap });
        }
        let src_lo = if first_source_is_other_same {
            other_cuts[k]
        } else {
            other_cuts[k + 1]
        };
        let src_hi = hi;
        let mut marked = vec![false; 1usize << blen];
        for i in src_lo..src_hi {
            for t in f.family(i as usize) {
                let keep = (i - lo) as usize;
                let part = if keep == 0 { 0 } else { t.value() & ((1u32 << keep) - 1) };
                let span = 1usize << (blen - keep);
                let start = (part as usize) << (blen - keep);
                marked[start..start + span].iter_mut().for_each(|b| *b = true);
            }
        }
        let words = marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| Word::on_range(lo, hi, v as u32))
            .collect::<Result<Vec<_>>>()?;
        sets.push(words);
    }
    IntervalRep::new(side_cuts.to_vec(), sets)
}

/// Materialize the two interval representations from the cut pair.
pub fn build_block_sets(
    f: &PrefixRep,
    cuts: &CutPair,
    cap: usize,
) -> Result<(IntervalRep, IntervalRep)> {
    let n_cuts = cuts.n_cuts();
    let m_cuts = cuts.m_cuts();
    let a = materialize_side(f, &n_cuts, &m_cuts, true, cap)?;
    let b = materialize_side(f, &m_cuts, &n_cuts, false, cap)?;
    Ok((a, b))
}

/// The whole construction: cuts, then both interval representations.
pub fn decompose(f: &PrefixRep, eps: &EpsSchedule) -> Result<(IntervalRep, IntervalRep)> {
    decompose_capped(f, eps, DEFAULT_BLOCK_CAP)
}

pub fn decompose_capped(
    f: &PrefixRep,
    eps: &EpsSchedule,
    cap: usize,
) -> Result<(IntervalRep, IntervalRep)> {
    let cuts = compute_cuts(f, eps);
    build_block_sets(f, &cuts, cap)
}

/// Exact per-block bound check: for every block `k` of either output,
/// `|J_k| / 2^{|I_k|} <= eps_k`. Returns the first violating (side, k) if any.
pub fn check_block_bounds(
    a: &IntervalRep,
    b: &IntervalRep,
    eps: &EpsSchedule,
) -> Option<(usize, usize)> {
    for (side, rep) in [a, b].into_iter().enumerate() {
        for (k, words) in rep.sets().iter().enumerate() {
            let blen = rep.cuts()[k + 1] - rep.cuts()[k];
            let w = Dyadic::ratio(words.len() as i64, blen);
            if w > eps.eps(k) {
                return Some((side, k));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nullrep::prefix_hits;
    use crate::word::Word;

    fn prefix(families: &[&[&str]]) -> PrefixRep {
        PrefixRep::new(
            families
                .iter()
                .enumerate()
                .map(|(n, fam)| {
                    fam.iter()
                        .map(|s| Word::from_bits((0..n as u32).collect(), s).unwrap())
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cuts_empty_family() {
        let cuts = compute_cuts(&PrefixRep::empty(), &EpsSchedule::default());
        assert_eq!(cuts.cuts(), &[0, 1, 2]);
    }

    // Spec example: F_4 = {"0000"}, eps_k = 2^-k.
    #[test]
    fn cuts_single_word_family() {
        let f = prefix(&[&[], &[], &[], &[], &["0000"]]);
        let eps = EpsSchedule::PowShift(0);
        let cuts = compute_cuts(&f, &eps);
        assert_eq!(cuts.cuts(), &[0, 1, 2, 3, 5]);
        assert_eq!(cuts.n_cuts(), vec![0, 2, 5]);
        assert_eq!(cuts.m_cuts(), vec![1, 3]);

        // Re-derive each minimum by direct evaluation of 2^base * tail(j).
        let recompute = |base: u32, k: usize| -> u32 {
            let mut j = base + 1;
            while !(tail_weight(&f, j as usize).mul_pow2(base as i64) < eps.eps(k)) {
                j += 1;
            }
            j
        };
        assert_eq!(recompute(0, 0), 1); // m_0
        assert_eq!(recompute(1, 0), 2); // n_1
        assert_eq!(recompute(2, 1), 3); // m_1
        assert_eq!(recompute(3, 1), 5); // n_2: 2^3 * tail(4) = 1/2 is not < 1/2
    }

    #[test]
    fn huge_eps_gives_consecutive_cuts() {
        let f = prefix(&[&[], &[], &["00"], &[], &["1111"]]);
        let cuts = compute_cuts(&f, &EpsSchedule::Const(Dyadic::pow2(10)));
        // every minimum is at the first candidate until the support is gone
        let c = cuts.cuts();
        for w in c.windows(2) {
            assert_eq!(w[1], w[0] + 1);
        }
        assert!(tail_weight(&f, *c.last().unwrap() as usize).is_zero());
    }

    #[test]
    fn block_sets_single_word_family() {
        let f = prefix(&[&[], &[], &[], &[], &["0000"]]);
        let cuts = compute_cuts(&f, &EpsSchedule::PowShift(0));
        let (a, b) = build_block_sets(&f, &cuts, DEFAULT_BLOCK_CAP).unwrap();

        // J_1 over [2,5): words with s(2) = 0, s(3) = 0, s(4) free.
        assert_eq!(a.cuts(), &[0, 2, 5]);
        let j1: Vec<String> = a.sets()[1].iter().map(Word::bits_string).collect();
        assert_eq!(j1, vec!["000", "001"]);
        assert_eq!(Dyadic::ratio(a.sets()[1].len() as i64, 3), Dyadic::new(1, 2));
        // J_0 draws from i in [1,2) where the family is empty.
        assert!(a.sets()[0].is_empty());

        // B has the single complete block [1,3) drawing from F_2 = {}.
        assert_eq!(b.cuts(), &[1, 3]);
        assert!(b.sets()[0].is_empty());
    }

    #[test]
    fn empty_family_gives_empty_sets() {
        let (a, b) = decompose(&PrefixRep::empty(), &EpsSchedule::default()).unwrap();
        assert!(a.sets().iter().all(Vec::is_empty));
        assert!(b.sets().iter().all(Vec::is_empty));
    }

    // Membership transfer: a prefix hit at i in [m_k, n_{k+1}) forces a hit
    // of A at block k, and symmetrically for B. Exhaustive at N = 10.
    #[test]
    fn hits_transfer_blockwise() {
        let f = prefix(&[&[], &[], &["01"], &[], &["1100", "0011"], &["10101"]]);
        let eps = EpsSchedule::default();
        let cuts = compute_cuts(&f, &eps);
        let (a, b) = build_block_sets(&f, &cuts, DEFAULT_BLOCK_CAP).unwrap();
        let ra = a.as_small_rep();
        let rb = b.as_small_rep();
        let n_cuts = cuts.n_cuts();
        let m_cuts = cuts.m_cuts();
        let n = 10u32.max(*cuts.cuts().last().unwrap());
        for v in 0..(1u32 << n) {
            let x = Word::new((0..n).collect(), v).unwrap();
            let ha = ra.hits(&x).unwrap();
            let hb = rb.hits(&x).unwrap();
            for i in prefix_hits(&x, &f).unwrap() {
                let i = i as u32;
                for k in 0..n_cuts.len() - 1 {
                    if m_cuts[k] <= i && i < n_cuts[k + 1] {
                        assert!(ha.contains(&k), "A must catch hit at {i}");
                    }
                }
                for k in 0..m_cuts.len().saturating_sub(1) {
                    if n_cuts[k + 1] <= i && i < m_cuts[k + 1] {
                        assert!(hb.contains(&k), "B must catch hit at {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn eps_schedule_parsing() {
        assert_eq!("2^-k".parse::<EpsSchedule>().unwrap(), EpsSchedule::PowShift(0));
        assert_eq!(
            "2^-k-1".parse::<EpsSchedule>().unwrap(),
            EpsSchedule::PowShift(-1)
        );
        assert_eq!(
            "2^-k+3".parse::<EpsSchedule>().unwrap(),
            EpsSchedule::PowShift(3)
        );
        assert_eq!(
            "1/2^4".parse::<EpsSchedule>().unwrap(),
            EpsSchedule::Const(Dyadic::new(1, 4))
        );
        assert!("0".parse::<EpsSchedule>().is_err());
    }
}
