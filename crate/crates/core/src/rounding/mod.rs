//! Rounding of LP solutions to assignments.

mod coupling;
mod two_lin;
mod ug;

pub use coupling::{total_variation, EdgeCoupling};
pub use two_lin::{
    heavy_edges, round_two_lin, round_two_lin_once, TwoLinRoundOptions, TwoLinRoundResult,
    DEFAULT_DELTA, HEAVY_THRESHOLD,
};
pub use ug::{
    propagation_violation_bound, round_ug, ug_delta, PropagationPlan, ShortestPathForest,
    UgRoundOptions, UgRoundResult, DELTA_FLOOR,
};
