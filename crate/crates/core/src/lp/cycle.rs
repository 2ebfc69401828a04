//! Inconsistent-cycle transversal LP for 2Lin instances (Min-Uncut at k = 2).

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::simplex::{lp_optimize, RestrictedLp, Row, Sense};
use super::DEFAULT_TOL;
use crate::error::{Error, PartialSolution, Result};
use crate::instance::{ClosedWalk, EdgeId, InstanceKind, UgInstance};

/// A fractional edge-deletion vector for the cycle-transversal LP.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeLpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// No inconsistent cycle has weight below `1 - tol`.
    pub feasible: bool,
    pub cuts_added: usize,
    pub rounds: usize,
    /// Restricted-LP objective after each re-optimization.
    pub history: Vec<f64>,
    /// Edge sets of the cycle rows, each sorted.
    pub cuts: Vec<Vec<EdgeId>>,
}

impl EdgeLpSolution {
    /// Wraps externally supplied values, computing objective and feasibility.
    pub fn from_values(inst: &UgInstance, x: Vec<f64>, tol: f64) -> Result<Self> {
        let objective = edge_objective(inst, &x)?;
        let feasible = separate_cycle(inst, &x, tol)?.is_none();
        Ok(EdgeLpSolution {
            x,
            objective,
            feasible,
            cuts_added: 0,
            rounds: 0,
            history: Vec::new(),
            cuts: Vec::new(),
        })
    }
}

fn edge_objective(inst: &UgInstance, x: &[f64]) -> Result<f64> {
    if x.len() != inst.num_edges() {
        return Err(Error::LengthMismatch {
            expected: inst.num_edges(),
            got: x.len(),
        });
    }
    if let Some(edge) = x.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidWeight { edge });
    }
    Ok(inst.edges().iter().zip(x).map(|(e, v)| e.cost * v).sum())
}

fn require_two_lin(inst: &UgInstance) -> Result<()> {
    if inst.kind() == InstanceKind::TwoLin {
        Ok(())
    } else {
        Err(Error::RequiresTwoLin)
    }
}

/// For every vertex `v` whose lifted copies `(v, 0)` and `(v, l != 0)` are
/// closer than `1 - tol` under weights `x`, the lightest inconsistent simple
/// cycle found on that shortest walk. Duplicates are dropped; the result
/// is sorted by weight, then by edge set.
pub fn violated_cycles(inst: &UgInstance, x: &[f64], tol: f64) -> Result<Vec<ClosedWalk>> {
    require_two_lin(inst)?;
    edge_objective(inst, x)?;
    let k = inst.k();
    if k < 2 {
        return Ok(Vec::new());
    }
    let lifted = inst.label_extended(|e, _| x[e]);
    let mut seen = BTreeSet::new();
    let mut found: Vec<(f64, Vec<EdgeId>, ClosedWalk)> = Vec::new();
    for v in 0..inst.n() {
        let sp = lifted.shortest_paths(lifted.node(v, 0));
        let target = (1..k)
            .map(|l| lifted.node(v, l))
            .filter(|&t| sp.dist[t] < 1.0 - tol)
            .min_by(|&a, &b| sp.dist[a].total_cmp(&sp.dist[b]));
        let Some(target) = target else { continue };
        let walk = ClosedWalk {
            start: v,
            edges: sp.path_tags(target).into_iter().map(|(_, e)| e).collect(),
        };
        let cycle = walk
            .simple_cycles(inst)
            .into_iter()
            .filter(|c| !inst.signature_of(c).is_identity())
            .min_by(|a, b| a.weight(x).total_cmp(&b.weight(x)))
            .expect("a closed walk with non-identity shift has an inconsistent simple piece");
        let mut key = cycle.edges.clone();
        key.sort_unstable();
        if seen.insert(key.clone()) {
            found.push((cycle.weight(x), key, cycle));
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    Ok(found.into_iter().map(|(_, _, c)| c).collect())
}

/// The lightest inconsistent cycle of weight below `1 - tol`, if any.
pub fn separate_cycle(inst: &UgInstance, x: &[f64], tol: f64) -> Result<Option<ClosedWalk>> {
    Ok(violated_cycles(inst, x, tol)?.into_iter().next())
}

/// Cutting-plane solve with the default round cap of `10 * |E| * k`.
pub fn solve_cycle_transversal(inst: &UgInstance, tol: f64) -> Result<EdgeLpSolution> {
    let cap = 10 * inst.num_edges().max(1) * inst.k();
    solve_cycle_transversal_capped(inst, tol, cap)
}

/// Minimizes `Σ c_e x_e` subject to `Σ_{e ∈ C} x_e >= 1` for every
/// inconsistent cycle `C`, adding violated cycles as rows until the
/// separation oracle finds none.
pub fn solve_cycle_transversal_capped(
    inst: &UgInstance,
    tol: f64,
    max_rounds: usize,
) -> Result<EdgeLpSolution> {
    require_two_lin(inst)?;
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let m = inst.num_edges();
    let zero = vec![0.0; m];
    if inst.total_cost() == 0.0 {
        return EdgeLpSolution::from_values(inst, zero, tol);
    }

    let mut lp = RestrictedLp::new(m);
    lp.objective = inst.costs();
    let mut cuts: Vec<Vec<EdgeId>> = Vec::new();
    let mut known = BTreeSet::new();
    let mut x = zero;
    let mut objective = 0.0;
    let mut history = Vec::new();
    let mut rounds = 0;
    loop {
        let violated = violated_cycles(inst, &x, tol)?;
        let fresh: Vec<Vec<EdgeId>> = violated
            .into_iter()
            .map(|c| {
                let mut key = c.edges;
                key.sort_unstable();
                key
            })
            .filter(|key| !known.contains(key))
            .collect();
        if fresh.is_empty() {
            break;
        }
        if rounds >= max_rounds {
            let partial = EdgeLpSolution {
                x,
                objective,
                feasible: false,
                cuts_added: cuts.len(),
                rounds,
                history,
                cuts,
            };
            return Err(Error::NoConvergence {
                rounds,
                partial: alloc::boxed::Box::new(PartialSolution::Edge(partial)),
            });
        }
        for key in fresh {
            lp.push(Row::new(key.iter().map(|&e| (e, 1.0)).collect(), Sense::Ge, 1.0));
            known.insert(key.clone());
            cuts.push(key);
        }
        let out = lp_optimize(&lp)?;
        // The box x <= 1 never binds at an optimum; clamping keeps every
        // cycle row satisfied and cannot raise the objective.
        x = out.values.into_iter().map(|v| v.min(1.0)).collect();
        objective = edge_objective(inst, &x)?;
        history.push(objective);
        rounds += 1;
    }
    let feasible = separate_cycle(inst, &x, tol)?.is_none();
    Ok(EdgeLpSolution {
        x,
        objective,
        feasible,
        cuts_added: cuts.len(),
        rounds,
        history,
        cuts,
    })
}
