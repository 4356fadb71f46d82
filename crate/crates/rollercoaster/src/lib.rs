//! Roller coaster permutations: permutations that maximize the total number
//! of ascent/descent switches over themselves and all of their subsequences
//! simultaneously.
//!
//! The crate computes the total-switches objective by a brute-force oracle
//! and an equivalent polynomial scorer, enumerates the full argmax set RC(n)
//! exhaustively or through a structure-filtered generator, solves the exact
//! minimum partition of a permutation into strictly monotone subsequences,
//! builds the run-pairing cover whose size realizes the closed-form bound
//! `⌊⌈(n−2)/2⌉/2⌋ + 2`, and mechanically verifies the structure theorems and
//! reference tables behind all of it.
//!
//! ```
//! use rollercoaster::{enumerate_rc, SearchConfig, SearchMode};
//!
//! let rc4 = enumerate_rc(&SearchConfig::new(4, SearchMode::Exhaustive)).unwrap();
//! assert_eq!(rc4.t_max, 6);
//! assert_eq!(
//!     rc4.canonical_texts(),
//!     ["2,1,4,3", "2,4,1,3", "3,1,4,2", "3,4,1,2"]
//! );
//! ```
//!
//! A narrative guide with worked examples lives under [`guide`]; the same
//! chapters are the sources of the rendered book in `book/`.

pub mod cli;
pub mod guide;
pub mod partition;
pub mod perm;
pub mod scoring;
pub mod search;
pub mod verify;

pub use partition::{
    bound_formula, constructive_cover, lower_bound, partition_number, partition_number_oracle,
    pmax, BoundRow, CoverSource, MonotonePiece, PartitionCover, PartitionError, PieceDirection,
};
pub use perm::{
    lex_successor, longest_monotone, switch_count, Direction, PermError, Permutation, PositionSet,
};
pub use scoring::{
    total_switches_brute, total_switches_brute_unguarded, total_switches_fast, Method, ScoreError,
    ScoreReport,
};
pub use search::{
    cache_load, cache_store, candidate_count, enumerate_rc, CacheError, RcSet, SearchConfig,
    SearchError, SearchMode,
};
pub use verify::{run_suite, CheckResult, CheckStatus, Counterexample, VerificationReport};
