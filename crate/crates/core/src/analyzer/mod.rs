//! Exact and spectral verification of generated graphs.

pub mod bounds;
pub mod expansion;
pub mod future;

pub use bounds::{
    cheeger_check, mixing_check, mixing_suite_exhaustive, mixing_suite_sampled, rayleigh_lower_bound_check,
    simple_lambda, unbalanced_bound_check, CheegerCheck, MixingCheck, MixingSuite, RayleighCheck, UnbalancedCheck,
};
pub use expansion::{edge_expansion_exact, expansion_of_set, ExpansionReport, MAX_EXACT_VERTICES};
pub use future::{
    cut_decomposition, future_cut_suite, future_set, half_lemma_check, Block, BlockWeight, CutDecomposition,
    FutureCutSuite, HalfLemmaReport,
};
