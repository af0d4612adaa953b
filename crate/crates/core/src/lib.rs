//! Decision procedures for finite satisfiability of two-variable logic
//! over two successor relations.
//!
//! Models are valued permutations: element `(r, c)` sits in row `r` and
//! column `c`, the column order is the `->` successor and the row order is
//! the `|>` successor. The pipeline goes formula, Scott normal form,
//! fingerprint summary, restricted labeled permutation instance, Parikh
//! intersection, explicit witness.

pub mod automata;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod logic;
pub mod oracle;
pub mod perm;
pub mod rlp;
pub mod sat;

pub use error::{Error, Result};
