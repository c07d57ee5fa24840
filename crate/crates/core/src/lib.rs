//! Distinct abelian-square factors of finite words.
//!
//! - [`word`]: words, Parikh vectors, canonical enumeration.
//! - [`count`]: exact distinct-factor counting (oracle and fast paths).
//! - [`search`]: exhaustive, parallel extremal search.
//! - [`checkpoint`]: resumable searches.
//! - [`harness`]: binary-maximality checks and extension-step falsification.

pub mod checkpoint;
pub mod count;
pub mod harness;
pub mod search;
pub mod word;

pub use checkpoint::{max_distinct_checkpointed, CheckpointRun};
pub use count::{
    count_distinct_fast, count_distinct_oracle, coverage_mask, last_symbol_covered, CountResult,
    CoverageMask, DistinctFactorKey,
};
pub use harness::{
    binary_image_exists, check_lemma1, falsify_proof_steps, verify_conjecture, BinaryImageFinder,
    ClaimId, ConjectureReport, LemmaCheckResult, ProofStepCounterexample,
};
pub use search::{
    default_sigma, max_distinct, merge, partition_space, MaxSearchResult, SearchError,
    SearchOptions, SearchTask,
};
pub use word::{
    canonical_form, enumerate_canonical, is_abelian_square, parikh, prefix_table, FactorRef,
    ParikhVector, PrefixParikhTable, Symbol, Word, WordError,
};
