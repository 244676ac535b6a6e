//! Monotonicity, positivity and interpolation on finite frames.

mod monotone;
mod report;
mod synth;
mod witness;

pub(crate) use monotone::submasks;
pub use monotone::{check_monotone, MonotoneCounterexample, MonotonicityVerdict};
pub use report::{lpp_report, Budgets, LppReport, LppVerdict};
pub use synth::{synthesize_interpolant, synthesize_positive, SynthesisResult};
pub use witness::{
    directed_tau, interpolant_witness_search, positivity_witness_search, verify_witness, witness_for_models,
    SearchMode, SearchOutcome, Witness,
};
