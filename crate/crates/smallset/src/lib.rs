//! Finite-truncation toolkit for measure-zero, small, and small-star
//! subsets of Cantor space.
//!
//! The crate represents null sets by prefix families, small sets by
//! word-sets over disjoint finite blocks, and small-star sets by interval
//! blocks. On top of those it implements the null-set decomposition into
//! two interval representations, the small-set partition calculus
//! (regrouping, union under refinement, the block-wise containment
//! criterion with witness construction, and the common-refinement
//! interpolant), the randomized hitting-set construction with an exact
//! verifier and rigorous failure-probability bounds, and the
//! overlapping-interval counterexample machinery. Everything is certified
//! against an exhaustive brute-force oracle over `2^N`.
//!
//! The companion `smallset` binary exposes all of it on the command line;
//! see the crate README.

pub mod calculus;
pub mod counterexample;
pub mod decompose;
pub mod dyadic;
pub mod enclosure;
pub mod error;
pub mod hitting;
pub mod nullrep;
pub mod oracle;
pub mod rep;
pub mod rng;
pub mod word;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use rep::{Entry, IntervalRep, PrefixRep, SmallRep};
pub use word::{Block, Word};
