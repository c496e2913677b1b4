//! Semigroup identities for triangular tropical matrices.
//!
//! The crate builds identities from power words, evaluates them on max-plus
//! matrices with exact rational weights, and checks them against an
//! independent colored-digraph path semantics.

pub mod bounds;
pub mod error;
pub mod identities;
pub mod oracle;
pub mod search;
pub mod tropical;
pub mod words;

pub use bounds::{class_count, closed_form_bounds, enumerated_bound, fib, fib_binet};
pub use error::{Error, Result};
pub use identities::{
    balance_substitute, check, construct_identity, construct_identity_from, evaluate,
    evaluate_by_paths, exhaustive_check, extend_for_identity, fuzz, identity_for_dimension,
    refine_two_variable, Assignment, ConstructedIdentity, ExtensionRule, FuzzMode, Identity,
    IdentityForm, Partition, Verdict,
};
pub use oracle::{oracle_product, word_of_path, ColoredDigraph, Edge, ProperPath};
pub use search::{
    default_power_word, falsify_below, minimal_power_word, verify_minimality_witness,
    FalsifyReport, SearchMode,
};
pub use tropical::{
    diag_equivalent, mat_mul, mat_pow, sample_matrix, tadd, tmul, MatrixClass, SamplerConfig,
    TropMatrix, TropValue,
};
pub use words::{
    construct_power_word, enumerate_class, is_factor, is_faithful, is_power_word, is_subword,
    Variable, Word, WordClassSpec,
};
