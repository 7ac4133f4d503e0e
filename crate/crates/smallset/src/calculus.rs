//! The small-set partition calculus.
//!
//! Containment between two represented sets is decided block-wise: `a` is
//! contained in `b` when every word `s` of every `J_n` finds a target block
//! `I'_m` meeting `I_n` such that the restriction of `s` to the overlap has
//! a full fiber in `J'_m` — every extension of it across `I'_m \ I_n` lies
//! in `J'_m`. (Conditions (b) and (c) of the criterion collapse to exactly
//! this full-fiber statement.) A failed check yields a certificate from
//! which a witness real is constructed and re-verified.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::rep::{partition_refines, Entry, SmallRep};
use crate::word::{Block, Word};

pub const DEFAULT_BLOCK_CAP: usize = 20;

/// A partition of the entry indices `{0, ..., K-1}` into nonempty groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grouping {
    groups: Vec<Vec<usize>>,
}

impl Grouping {
    pub fn new(groups: Vec<Vec<usize>>, total: usize) -> Result<Self> {
        let mut seen = vec![false; total];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidGrouping("empty group".into()));
            }
            for &i in g {
                if i >= total {
                    return Err(Error::InvalidGrouping(format!(
                        "index {i} out of range for {total} entries"
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidGrouping(format!("index {i} grouped twice")));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGrouping(format!("index {missing} not grouped")));
        }
        Ok(Grouping { groups })
    }

    pub fn identity(total: usize) -> Self {
        Grouping {
            groups: (0..total).map(|i| vec![i]).collect(),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

/// Scatter a word's bits onto a superset domain: returns the packed base
/// value plus the mask of positions left free.
fn scatter(word: &Word, target: &[u32]) -> (u32, u32) {
    let tlen = target.len();
    let mut base = 0u32;
    let mut free = 0u32;
    for (p, &c) in target.iter().enumerate() {
        let bit = 1u32 << (tlen - 1 - p);
        match word.bit(c) {
            Some(true) => base |= bit,
            Some(false) => {}
            None => free |= bit,
        }
    }
    (base, free)
}

fn for_each_extension(base: u32, free: u32, mut f: impl FnMut(u32)) {
    let mut sub = free;
    loop {
        f(base | sub);
        if sub == 0 {
            break;
        }
        sub = sub.wrapping_sub(1) & free;
    }
}

/// Regroup entries along a partition of the indices (Lemma-trivial
/// coarsening): the new blocks are unions of grouped blocks, and a word
/// belongs to the new set when its restriction to some grouped block lands
/// in that block's word-set. Truncated membership is unchanged.
pub fn coarsen(r: &SmallRep, g: &Grouping, cap: usize) -> Result<SmallRep> {
    let _ = Grouping::new(g.groups().to_vec(), r.len())?;
    let mut entries = Vec::with_capacity(g.groups().len());
    for group in g.groups() {
        let blocks: Vec<&Block> = group.iter().map(|&l| &r.entries()[l].block).collect();
        let union = Block::union_coords(&blocks);
        if union.len() > cap {
            return Err(Error::BlockTooLarge {
                len: union.len(),
                cap,
            });
        }
        let mut marked = vec![false; 1usize << union.len()];
        for &l in group {
            for t in &r.entries()[l].words {
                let (base, free) = scatter(t, &union);
                for_each_extension(base, free, |v| marked[v as usize] = true);
            }
        }
        let block = Block::new(union)?;
        let words = marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| Word::new(block.coords().to_vec(), v as u32))
            .collect::<Result<Vec<_>>>()?;
        entries.push(Entry::new(block, words)?);
    }
    SmallRep::new(entries)
}

/// Union of a finer representation into a coarser one: on each coarse
/// block, keep its own words and add every word whose restriction to a
/// contained fine block lands in that fine word-set. Truncated membership
/// is the union of the two memberships.
pub fn union_finer(fine: &SmallRep, coarse: &SmallRep, cap: usize) -> Result<SmallRep> {
    let fine_blocks: Vec<Block> = fine.entries().iter().map(|e| e.block.clone()).collect();
    let coarse_blocks: Vec<Block> = coarse.entries().iter().map(|e| e.block.clone()).collect();
    if !partition_refines(&fine_blocks, &coarse_blocks) {
        let bad = fine_blocks
            .iter()
            .position(|f| !coarse_blocks.iter().any(|c| f.is_subset_of(c)))
            .unwrap_or(0);
        return Err(Error::NotARefinement(bad));
    }
    let mut entries = Vec::with_capacity(coarse.len());
    for ec in coarse.entries() {
        let blen = ec.block.len();
        if blen > cap {
            return Err(Error::BlockTooLarge { len: blen, cap });
        }
        let mut marked = vec![false; 1usize << blen];
        for t in &ec.words {
            marked[t.value() as usize] = true;
        }
        for ef in fine.entries() {
            if !ef.block.is_subset_of(&ec.block) {
                continue;
            }
            for t in &ef.words {
                let (base, free) = scatter(t, ec.block.coords());
                for_each_extension(base, free, |v| marked[v as usize] = true);
            }
        }
        let words = marked
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| Word::new(ec.block.coords().to_vec(), v as u32))
            .collect::<Result<Vec<_>>>()?;
        entries.push(Entry::new(ec.block.clone(), words)?);
    }
    SmallRep::new(entries)
}

/// Why a given target block fails a word of `a`: either no target word
/// agrees on the overlap at all, or some agree but a concrete fill spoils
/// the fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocker {
    Mismatch { target: usize },
    Spoiler { target: usize, fill: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub entry: usize,
    pub word: Word,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub entry: usize,
    pub word: Word,
    pub blockers: Vec<Blocker>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContainmentCertificate {
    /// Per word of `a`, the least target block whose overlap fiber is full.
    Yes { choices: Vec<Choice> },
    /// Failing pairs with, per intersecting target block, why it fails.
    No { failures: Vec<Failure> },
}

impl ContainmentCertificate {
    pub fn is_yes(&self) -> bool {
        matches!(self, ContainmentCertificate::Yes { .. })
    }
}

/// Does the overlap word of `s` have a full fiber in the target entry?
fn fiber_is_full(s_on_overlap: &Word, target: &Entry, overlap: &[u32]) -> bool {
    let fill_len = target.block.len() - overlap.len();
    let count = target
        .words
        .iter()
        .filter(|t| t.restrict(overlap) == *s_on_overlap)
        .count();
    count == 1usize << fill_len
}

/// Block-wise containment check for entries `n >= ignore` of `a`.
pub fn subset_blockwise(a: &SmallRep, b: &SmallRep, ignore: usize) -> ContainmentCertificate {
    let mut choices = Vec::new();
    let mut failures = Vec::new();
    for (n, ea) in a.entries().iter().enumerate() {
        if n < ignore {
            continue;
        }
        for s in &ea.words {
            let mut blockers = Vec::new();
            let mut chosen = None;
            for (m, eb) in b.entries().iter().enumerate() {
                let overlap = ea.block.intersection(&eb.block);
                if overlap.is_empty() {
                    continue;
                }
                let w = s.restrict(&overlap);
                if fiber_is_full(&w, eb, &overlap) {
                    chosen = Some(m);
                    break;
                }
                let agrees = eb.words.iter().any(|t| t.restrict(&overlap) == w);
                if !agrees {
                    blockers.push(Blocker::Mismatch { target: m });
                } else {
                    // Some target word agrees but the fiber is not full:
                    // exhibit the least fill that escapes the word-set.
                    let fill_coords = eb.block.difference(&overlap);
                    let fill = (0..1u32 << fill_coords.len())
                        .map(|v| Word::new(fill_coords.clone(), v).unwrap())
                        .find(|u| {
                            let t = w.join(u).unwrap();
                            !eb.contains_value(t.value())
                        })
                        .expect("a non-full fiber has an escaping fill");
                    blockers.push(Blocker::Spoiler { target: m, fill });
                }
            }
            match chosen {
                Some(m) => choices.push(Choice {
                    entry: n,
                    word: s.clone(),
                    target: m,
                }),
                None => failures.push(Failure {
                    entry: n,
                    word: s.clone(),
                    blockers,
                }),
            }
        }
    }
    if failures.is_empty() {
        ContainmentCertificate::Yes { choices }
    } else {
        ContainmentCertificate::No { failures }
    }
}

/// Lexicographically least word of `2^block` outside the given entry's
/// word-set, or `None` when the set is full.
fn least_avoiding(e: &Entry) -> Option<Word> {
    (0..1u64 << e.block.len())
        .map(|v| v as u32)
        .find(|&v| !e.contains_value(v))
        .map(|v| Word::new(e.block.coords().to_vec(), v).unwrap())
}

/// Build the witness real for a failed containment from its first failing
/// pair: copy the failing word onto its block, spoil every intersecting
/// target block (spoiler fill, or zeros after a mismatch), avoid every
/// disjoint target block with its least escaping word, and fill the rest
/// of `[0, N)` with zeros. The result hits `a` at the failing entry and
/// misses `b` everywhere; both facts are re-checked before returning.
pub fn witness_not_subset(
    a: &SmallRep,
    b: &SmallRep,
    cert: &ContainmentCertificate,
    n_trunc: u32,
) -> Result<Word> {
    let failures = match cert {
        ContainmentCertificate::No { failures } => failures,
        ContainmentCertificate::Yes { .. } => {
            return Err(Error::InvalidInput(
                "witness construction needs a No-certificate".into(),
            ))
        }
    };
    for (m, eb) in b.entries().iter().enumerate() {
        if eb.is_full() {
            return Err(Error::ImproperTarget(m));
        }
    }
    let fail = failures
        .first()
        .ok_or_else(|| Error::InvalidInput("empty No-certificate".into()))?;
    let ea = &a.entries()[fail.entry];
    let max_needed = ea
        .block
        .max_coord()
        .max(b.max_coord().unwrap_or(0));
    if max_needed >= n_trunc {
        return Err(Error::DomainTooSmall(max_needed));
    }

    let mut value = 0u32;
    let mut set_bits = |w: &Word, value: &mut u32| {
        for &c in w.domain() {
            if w.bit(c) == Some(true) {
                *value |= 1 << (n_trunc - 1 - c);
            }
        }
    };
    set_bits(&fail.word, &mut value);
    for blocker in &fail.blockers {
        if let Blocker::Spoiler { fill, .. } = blocker {
            set_bits(fill, &mut value);
        }
    }
    for eb in b.entries() {
        if eb.block.is_disjoint(&ea.block) {
            let t = least_avoiding(eb).expect("propriety checked above");
            set_bits(&t, &mut value);
        }
    }
    let x = Word::new((0..n_trunc).collect(), value)?;

    let hits_a = a.hits(&x)?;
    let hits_b = b.hits(&x)?;
    if !hits_a.contains(&fail.entry) || !hits_b.is_empty() {
        return Err(Error::InternalInconsistency(format!(
            "witness {x} fails its own re-check (hits in a: {hits_a:?}, hits in b: {hits_b:?})"
        )));
    }
    Ok(x)
}

/// Common-refinement interpolant: on each nonempty overlap `I_n ∩ I'_m`
/// collect the words whose fiber in `J'_m` is full. Requires block-wise
/// containment of `a` in `b`; the result is sandwiched between the two
/// memberships at truncation.
pub fn refine_interpolant(a: &SmallRep, b: &SmallRep) -> Result<SmallRep> {
    if !subset_blockwise(a, b, 0).is_yes() {
        return Err(Error::NotContained);
    }
    let mut entries = Vec::new();
    for ea in a.entries() {
        for eb in b.entries() {
            let overlap = ea.block.intersection(&eb.block);
            if overlap.is_empty() {
                continue;
            }
            let fill_len = eb.block.len() - overlap.len();
            let mut fiber: HashMap<u32, usize> = HashMap::new();
            for t in &eb.words {
                *fiber.entry(t.restrict(&overlap).value()).or_insert(0) += 1;
            }
            let block = Block::new(overlap.clone())?;
            let mut words: Vec<Word> = fiber
                .into_iter()
                .filter(|&(_, count)| count == 1usize << fill_len)
                .map(|(v, _)| Word::new(overlap.clone(), v))
                .collect::<Result<Vec<_>>>()?;
            words.sort();
            entries.push(Entry::new(block, words)?);
        }
    }
    SmallRep::new(entries)
}
