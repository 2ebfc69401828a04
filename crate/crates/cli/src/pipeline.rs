//! LP solve and rounding steps shared by `solve`, `round` and `experiment`.

use ugdecomp_core::lp::{solve_cycle_transversal, solve_cycle_transversal_capped, solve_ug_lp, solve_ug_lp_capped};
use ugdecomp_core::rounding::{round_two_lin, round_ug, TwoLinRoundOptions, UgRoundOptions, DEFAULT_DELTA};
use ugdecomp_core::{Assignment, EdgeId, EdgeLpSolution, Partition, Result, Scheme, UgInstance, UgLpSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    CycleLp,
    UgLp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    TwoLin,
    Ug,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::TwoLin => "2lin",
            Algo::Ug => "ug",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Algo::TwoLin => Mode::CycleLp,
            Algo::Ug => Mode::UgLp,
        }
    }
}

#[derive(Clone, Debug)]
pub enum LpSolution {
    Edge(EdgeLpSolution),
    Ug(UgLpSolution),
}

impl LpSolution {
    pub fn objective(&self) -> f64 {
        match self {
            LpSolution::Edge(s) => s.objective,
            LpSolution::Ug(s) => s.objective,
        }
    }

    pub fn feasible(&self) -> bool {
        match self {
            LpSolution::Edge(s) => s.feasible,
            LpSolution::Ug(s) => s.feasible,
        }
    }

    pub fn rounds(&self) -> usize {
        match self {
            LpSolution::Edge(s) => s.rounds,
            LpSolution::Ug(s) => s.rounds,
        }
    }

    pub fn cuts_added(&self) -> usize {
        match self {
            LpSolution::Edge(s) => s.cuts_added,
            LpSolution::Ug(s) => s.cuts_added,
        }
    }
}

/// Runs the cutting-plane loop; `max_rounds` replaces the default cap.
pub fn solve(inst: &UgInstance, mode: Mode, tol: f64, max_rounds: Option<usize>) -> Result<LpSolution> {
    Ok(match (mode, max_rounds) {
        (Mode::CycleLp, None) => LpSolution::Edge(solve_cycle_transversal(inst, tol)?),
        (Mode::CycleLp, Some(cap)) => LpSolution::Edge(solve_cycle_transversal_capped(inst, tol, cap)?),
        (Mode::UgLp, None) => LpSolution::Ug(solve_ug_lp(inst, tol)?),
        (Mode::UgLp, Some(cap)) => LpSolution::Ug(solve_ug_lp_capped(inst, tol, cap)?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundSettings {
    pub scheme: Scheme,
    /// Falls back to 1/4 for 2Lin and to the LP-derived value for UG.
    pub delta: Option<f64>,
    pub r: usize,
    pub seed: u64,
    pub repeats: usize,
}

#[derive(Clone, Debug)]
pub struct RoundOutcome {
    pub assignment: Assignment,
    pub unsat_cost: f64,
    pub deleted_cost: f64,
    /// Edges deleted up front for being heavy; empty for UG rounding.
    pub heavy: Vec<EdgeId>,
    pub delta: f64,
    pub resplits: usize,
    pub repeat: usize,
    pub partition: Partition,
}

pub fn round(inst: &UgInstance, lp: &LpSolution, s: &RoundSettings) -> Result<RoundOutcome> {
    match lp {
        LpSolution::Edge(lp) => {
            let opts = TwoLinRoundOptions {
                scheme: s.scheme,
                delta: s.delta.unwrap_or(DEFAULT_DELTA),
                seed: s.seed,
                repeats: s.repeats,
            };
            let res = round_two_lin(inst, lp, &opts)?;
            Ok(RoundOutcome {
                assignment: res.assignment,
                unsat_cost: res.unsat_cost,
                deleted_cost: res.deleted_cost,
                heavy: res.f1,
                delta: res.delta,
                resplits: res.resplits,
                repeat: res.repeat,
                partition: res.partition,
            })
        }
        LpSolution::Ug(lp) => {
            let opts = UgRoundOptions {
                scheme: s.scheme,
                r: s.r as f64,
                delta: s.delta,
                seed: s.seed,
                repeats: s.repeats,
            };
            let res = round_ug(inst, lp, &opts)?;
            Ok(RoundOutcome {
                deleted_cost: res.cut_edges.iter().fold(0.0, |acc, &e| acc + inst.edge(e).cost),
                assignment: res.assignment,
                unsat_cost: res.unsat_cost,
                heavy: Vec::new(),
                delta: res.delta_used,
                resplits: 0,
                repeat: res.repeat,
                partition: res.partition,
            })
        }
    }
}

/// Builds a generator family from its name and whichever sizes it needs.
pub fn family(
    name: &str,
    rows: Option<usize>,
    cols: Option<usize>,
    n: Option<usize>,
) -> std::result::Result<ugdecomp_core::gen::Family, String> {
    use ugdecomp_core::gen::Family;
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("family `{name}` needs `{flag}`"));
    match name {
        "grid" => Ok(Family::Grid { rows: need(rows, "rows")?, cols: need(cols, "cols")? }),
        "torus" => Ok(Family::Torus { rows: need(rows, "rows")?, cols: need(cols, "cols")? }),
        "cycle" => Ok(Family::Cycle { n: need(n, "n")? }),
        "bipartite" => Ok(Family::CompleteBipartite { n: need(n, "n")? }),
        other => Err(format!("unknown family `{other}`")),
    }
}
