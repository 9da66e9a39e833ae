//! Stanley sequences: greedy 3-free sequences, their independence
//! certificates, and constructions that realise prescribed scaling and
//! repeat factors.

pub mod analyzer;
pub mod cli;
pub mod constructor;
pub mod error;
pub mod growth;
mod sieve;
pub mod oracle;
pub mod search;
pub mod seq;
pub mod triadic;

pub use error::{Error, Result};
pub use seq::{
    covered_by, generate, is_three_free, jointly_covered, obstruction_set, s0_term,
    GeneratedSequence, ObstructionReport, SeedSet, SieveConfig,
};
pub use triadic::Triadic;
