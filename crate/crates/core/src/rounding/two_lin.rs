//! Heavy-edge filter, decomposition and propagation for 2Lin and Min-Uncut.

use alloc::vec;
use alloc::vec::Vec;

use crate::decompose::{ball_carve, inter_cluster_edges, Partition, Scheme, WeightedGraph};
use crate::error::{Error, Result};
use crate::instance::{Assignment, ClusterConsistency, EdgeId, InstanceKind, UgInstance, VertexId};
use crate::lp::{separate_cycle, EdgeLpSolution};
use crate::seed;

/// Edges with `x_e` at least this value are deleted up front.
pub const HEAVY_THRESHOLD: f64 = 0.5;
/// Default decomposition diameter.
pub const DEFAULT_DELTA: f64 = 0.25;
/// Slack when checking the LP solution handed to the rounding.
pub const FEASIBILITY_SLACK: f64 = 1e-6;
/// Re-split depth after which an inconsistent cluster becomes singletons.
const MAX_RESPLIT_DEPTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoLinRoundOptions {
    pub scheme: Scheme,
    pub delta: f64,
    pub seed: u64,
    pub repeats: usize,
}

impl Default for TwoLinRoundOptions {
    fn default() -> Self {
        TwoLinRoundOptions {
            scheme: Scheme::BallCarve,
            delta: DEFAULT_DELTA,
            seed: 0,
            repeats: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoLinRoundResult {
    /// `f1 ∪ f2`, sorted.
    pub deleted: Vec<EdgeId>,
    pub f1: Vec<EdgeId>,
    pub f2: Vec<EdgeId>,
    pub assignment: Assignment,
    pub deleted_cost: f64,
    pub unsat_cost: f64,
    /// Final clusters; each is consistent without the deleted edges.
    pub partition: Partition,
    /// Clusters that had to be carved again because they held an
    /// inconsistent cycle.
    pub resplits: usize,
    pub delta: f64,
    /// Index of the winning repeat.
    pub repeat: usize,
}

/// Edges with `x_e >= 1/2`.
pub fn heavy_edges(x: &[f64]) -> Vec<EdgeId> {
    (0..x.len()).filter(|&e| x[e] >= HEAVY_THRESHOLD).collect()
}

fn check_input(inst: &UgInstance, lp: &EdgeLpSolution) -> Result<()> {
    if inst.kind() != InstanceKind::TwoLin {
        return Err(Error::RequiresTwoLin);
    }
    if lp.x.len() != inst.num_edges() {
        return Err(Error::LengthMismatch {
            expected: inst.num_edges(),
            got: lp.x.len(),
        });
    }
    if separate_cycle(inst, &lp.x, FEASIBILITY_SLACK)?.is_some() {
        return Err(Error::InfeasibleSolution("an inconsistent cycle is lighter than 1"));
    }
    Ok(())
}

/// Best of `repeats` runs of [`round_two_lin_once`], by unsatisfied cost.
/// Repeat `i` uses a seed derived from `(seed, i)` only.
pub fn round_two_lin(
    inst: &UgInstance,
    lp: &EdgeLpSolution,
    opts: &TwoLinRoundOptions,
) -> Result<TwoLinRoundResult> {
    if opts.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be positive"));
    }
    check_input(inst, lp)?;
    let mut best: Option<TwoLinRoundResult> = None;
    for i in 0..opts.repeats {
        let mut res = round_unchecked(inst, lp, opts.scheme, opts.delta, seed::derive(opts.seed, i as u64))?;
        res.repeat = i;
        if best.as_ref().is_none_or(|b| res.unsat_cost < b.unsat_cost) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least one repeat"))
}

/// One run: delete heavy edges `F1`, partition the rest with weights
/// `x_e`, delete inter-cluster edges `F2`, and label each cluster by
/// propagation. Clusters still holding an inconsistent cycle are carved
/// again at half the diameter.
pub fn round_two_lin_once(
    inst: &UgInstance,
    lp: &EdgeLpSolution,
    scheme: Scheme,
    delta: f64,
    seed: u64,
) -> Result<TwoLinRoundResult> {
    check_input(inst, lp)?;
    round_unchecked(inst, lp, scheme, delta, seed)
}

fn round_unchecked(
    inst: &UgInstance,
    lp: &EdgeLpSolution,
    scheme: Scheme,
    delta: f64,
    seed: u64,
) -> Result<TwoLinRoundResult> {
    let f1 = heavy_edges(&lp.x);
    let mut active = vec![true; inst.num_edges()];
    for &e in &f1 {
        active[e] = false;
    }
    let g = WeightedGraph::from_instance(inst, lp.x.clone())?.with_active(active.clone())?;
    let initial = scheme.partition(&g, delta, seed::derive(seed, 0))?;

    let mut labels = vec![0; inst.n()];
    let mut final_clusters: Vec<Vec<VertexId>> = Vec::new();
    let mut resplits = 0;
    let mut work: Vec<(Vec<VertexId>, usize, f64)> = initial
        .clusters()
        .iter()
        .rev()
        .map(|c| (c.clone(), 0, delta))
        .collect();
    while let Some((cluster, depth, d)) = work.pop() {
        match inst.is_cluster_consistent_within(&cluster, &active)? {
            ClusterConsistency::Consistent { labels: found } => {
                for (v, l) in found {
                    labels[v] = l;
                }
                final_clusters.push(cluster);
            }
            ClusterConsistency::Inconsistent { .. } => {
                resplits += 1;
                if depth >= MAX_RESPLIT_DEPTH {
                    // singletons are always consistent
                    work.extend(cluster.iter().rev().map(|&v| (vec![v], depth + 1, d)));
                    continue;
                }
                let pieces = carve_cluster(&g, &cluster, d / 2.0, seed::derive(seed, resplits as u64))?;
                work.extend(pieces.into_iter().rev().map(|c| (c, depth + 1, d / 2.0)));
            }
        }
    }

    let partition = Partition::from_clusters(inst.n(), final_clusters, delta, Some(scheme))?;
    let f2 = inter_cluster_edges(&g, &partition);
    let mut deleted: Vec<EdgeId> = f1.iter().chain(&f2).copied().collect();
    deleted.sort_unstable();
    let deleted_cost = deleted.iter().fold(0.0, |acc, &e| acc + inst.edge(e).cost);
    let assignment = Assignment::new(labels);
    let unsat_cost = inst.unsat_cost(&assignment);
    Ok(TwoLinRoundResult {
        deleted,
        f1,
        f2,
        assignment,
        deleted_cost,
        unsat_cost,
        partition,
        resplits,
        delta,
        repeat: 0,
    })
}

/// Ball-carves the subgraph induced by `cluster`.
fn carve_cluster(g: &WeightedGraph, cluster: &[VertexId], delta: f64, seed: u64) -> Result<Vec<Vec<VertexId>>> {
    let mut member = vec![false; g.n()];
    for &v in cluster {
        member[v] = true;
    }
    let mask = (0..g.num_edges())
        .map(|e| {
            let (u, v) = g.ends(e);
            g.is_active(e) && member[u] && member[v]
        })
        .collect();
    let sub = g.clone().with_active(mask)?;
    let p = ball_carve(&sub, delta, seed)?;
    Ok(p.clusters()
        .iter()
        .filter(|c| member[c[0]])
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Constraint, Edge};
    use crate::lp::{solve_cycle_transversal, DEFAULT_TOL};

    /// Vertices a..f = 0..5; edges ab, ad, bc, bd, de, cf, ec, be, ef.
    fn six_vertex() -> UgInstance {
        let pairs = [(0, 1), (0, 3), (1, 2), (1, 3), (3, 4), (2, 5), (4, 2), (1, 4), (4, 5)];
        let edges = pairs
            .iter()
            .map(|&(u, v)| Edge::new(u, v, 1.0, Constraint::Shift(1)))
            .collect();
        UgInstance::new(6, 2, InstanceKind::TwoLin, edges).unwrap()
    }

    #[test]
    fn six_vertex_fractional_heavy_edges() {
        let inst = six_vertex();
        let x = vec![0.3, 0.3, 0.23, 0.4, 0.59, 0.12, 0.76, 0.01, 0.12];
        let lp = EdgeLpSolution::from_values(&inst, x, DEFAULT_TOL).unwrap();
        assert!(lp.feasible);
        // de and ec
        assert_eq!(heavy_edges(&lp.x), vec![4, 6]);
        let res = round_two_lin(&inst, &lp, &TwoLinRoundOptions::default()).unwrap();
        assert_eq!(res.f1, vec![4, 6]);
        let eval = inst.evaluate(&res.assignment).unwrap();
        assert!(eval.violated.iter().all(|e| res.deleted.binary_search(e).is_ok()));
    }

    #[test]
    fn six_vertex_integral_solution_needs_no_second_cut() {
        let inst = six_vertex();
        let mut x = vec![0.0; 9];
        for e in [3, 6, 7] {
            x[e] = 1.0;
        }
        let lp = EdgeLpSolution::from_values(&inst, x, DEFAULT_TOL).unwrap();
        let res = round_two_lin(&inst, &lp, &TwoLinRoundOptions::default()).unwrap();
        assert_eq!(res.f1, vec![3, 6, 7]);
        assert!(res.f2.is_empty());
        assert_eq!(res.partition.len(), 1);
        assert_eq!(res.resplits, 0);
    }

    #[test]
    fn satisfiable_instance_rounds_exactly() {
        let edges = (0..5)
            .map(|i| Edge::new(i, (i + 1) % 5, 1.0, Constraint::Shift(if i == 4 { 3 } else { 1 })))
            .collect();
        // shifts sum to 7 = 0 mod 7
        let inst = UgInstance::new(5, 7, InstanceKind::TwoLin, edges).unwrap();
        let lp = solve_cycle_transversal(&inst, DEFAULT_TOL).unwrap();
        assert_eq!(lp.x, vec![0.0; 5]);
        let res = round_two_lin(&inst, &lp, &TwoLinRoundOptions::default()).unwrap();
        assert!(res.f1.is_empty() && res.f2.is_empty());
        assert_eq!(res.unsat_cost, 0.0);
    }

    #[test]
    fn infeasible_lp_is_rejected() {
        let inst = six_vertex();
        let lp = EdgeLpSolution::from_values(&inst, vec![0.0; 9], DEFAULT_TOL).unwrap();
        assert!(matches!(
            round_two_lin(&inst, &lp, &TwoLinRoundOptions::default()),
            Err(Error::InfeasibleSolution(_))
        ));
    }
}
