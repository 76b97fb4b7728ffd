//! Interleaved signal sets with low correlation.
//!
//! Builds the `(v^2, v + 1, delta)` interleaved signal set from two period-`v`
//! sequences with 2-level autocorrelation and a shift sequence, computes its
//! correlations, checks shift-sequence conditions, and searches shift-sequence
//! space exhaustively for small `v`.
//!
//! ```
//! use shiftseq::{build_signal_set, signal_set_delta, CorrelationMethod, Delta};
//!
//! let a = "1001110".parse().unwrap();
//! let b = "1001011".parse().unwrap();
//! let e = "0,0,1,0,6,3,5".parse().unwrap();
//! let set = build_signal_set(&a, &b, &e).unwrap();
//! let report = signal_set_delta(&set.members, CorrelationMethod::Fast).unwrap();
//! assert_eq!(report.delta, Delta::Exact(17));
//! ```

pub mod conditions;
pub mod correlation;
pub mod error;
pub mod generate;
pub mod interleave;
pub mod search;
pub mod sequence;

pub use conditions::{
    check_condition, check_condition_a, check_condition_b, check_condition_open, cond2_sum_residue, differences_a,
    differences_b, differences_open, Condition, ConditionReport, DifferenceMode, DifferenceProfile, OpenForm,
    ShiftDiagnostic,
};
pub use correlation::{
    autocorrelation, correlate, cross_correlation, fast_cross_correlation, is_two_level, signal_set_delta, CorrValue,
    CorrelationMethod, CorrelationProfile, Delta, DeltaReport, Witness,
};
pub use error::{Error, Result};
pub use generate::{gen_legendre, gen_mseq, LfsrSpec};
pub use interleave::{
    build_signal_set, decompose_tau, interleave, lemma_correlation, lemma_correlation_for, lemma_terms, matrix_form,
    recover_shifts, zero_count, LemmaTerms, Shift, ShiftSequence, SignalSet, TauDecomposition, ZeroCount,
};
pub use search::{
    backtrack, enumerate, find_b_not_a, run, verify_open_nonexistence, Budget, NonexistenceRow, Predicate,
    SearchOutcome, SearchSpec, Strategy,
};
pub use sequence::PeriodicSequence;
