//! Cutting-plane LP relaxations and the simplex engine behind them.

mod cycle;
mod simplex;
mod ug;

pub use cycle::{
    separate_cycle, solve_cycle_transversal, solve_cycle_transversal_capped, violated_cycles,
    EdgeLpSolution,
};
pub use simplex::{lp_optimize, lp_optimize_dense, LpOutcome, RestrictedLp, Row, Sense};
pub use ug::{
    separate_ug, solve_ug_lp, solve_ug_lp_capped, violated_ug_cuts, UgCut, UgLpSolution,
    UG_VARIABLE_CAP,
};

/// Default separation tolerance.
pub const DEFAULT_TOL: f64 = 1e-7;
