//! Small hand-checked instances with known answers.

mod common;

use common::*;
use ugdecomp_core::decompose::{inter_cluster_edges, Partition, WeightedGraph};
use ugdecomp_core::exact::{brute_force_assignment, brute_force_transversal};
use ugdecomp_core::lp::DEFAULT_TOL;
use ugdecomp_core::rounding::{heavy_edges, round_two_lin, TwoLinRoundOptions};
use ugdecomp_core::{EdgeLpSolution, InstanceKind};

#[test]
fn fractional_point_deletes_the_two_heavy_edges() {
    let inst = six_vertex();
    let lp = EdgeLpSolution::from_values(&inst, SIX_VERTEX_FRACTIONAL.to_vec(), DEFAULT_TOL).unwrap();
    assert!(lp.feasible);
    // de and ec
    assert_eq!(heavy_edges(&lp.x), vec![4, 6]);
    for seed in 0..10 {
        let opts = TwoLinRoundOptions { seed, ..Default::default() };
        assert_eq!(round_two_lin(&inst, &lp, &opts).unwrap().f1, vec![4, 6]);
    }
}

#[test]
fn three_cluster_split_cuts_ab_ad_bd() {
    let inst = six_vertex();
    let mut active = vec![true; 9];
    active[4] = false;
    active[6] = false;
    let g = WeightedGraph::from_instance(&inst, SIX_VERTEX_FRACTIONAL.to_vec())
        .unwrap()
        .with_active(active.clone())
        .unwrap();
    // {a}, {d}, {b, c, e, f}
    let p = Partition::from_assignment(&[0, 2, 2, 1, 2, 2], 0.25, None).unwrap();
    assert_eq!(inter_cluster_edges(&g, &p), vec![0, 1, 3]);
    for cluster in p.clusters() {
        assert!(inst.is_cluster_consistent_within(cluster, &active).unwrap().is_consistent());
    }
}

#[test]
fn bold_edge_set_is_a_transversal() {
    let inst = six_vertex();
    let mut active = vec![true; 9];
    for e in SIX_VERTEX_INTEGRAL {
        active[e] = false;
    }
    let all: Vec<usize> = (0..6).collect();
    assert!(inst.is_cluster_consistent_within(&all, &active).unwrap().is_consistent());
}

#[test]
fn unit_cost_transversal_has_cost_two() {
    let inst = six_vertex();
    let t = brute_force_transversal(&inst).unwrap();
    assert_eq!(t.cost, 2.0);
    assert_eq!(brute_force_assignment(&inst).unwrap().opt_unsat_cost, 2.0);
}

#[test]
fn bold_set_is_optimal_when_be_is_free() {
    let mut costs = [1.0; 9];
    costs[7] = 0.0;
    let inst = six_vertex_with_costs(costs);
    let bold_cost: f64 = SIX_VERTEX_INTEGRAL.iter().map(|&e| costs[e]).sum();
    assert_eq!(brute_force_transversal(&inst).unwrap().cost, bold_cost);
}

#[test]
fn planted_grid_flip_log_matches_violations() {
    for kind in [InstanceKind::TwoLin, InstanceKind::General] {
        let g = planted(grid(4, 4), 3, kind, 0.1, 7);
        let eval = g.instance.evaluate(&g.planted).unwrap();
        assert_eq!(eval.violated, g.flipped);
        assert_eq!(eval.unsat_cost, g.flipped.len() as f64);
    }
}

#[test]
fn odd_triangle_needs_one_deletion() {
    let inst = odd_triangle();
    assert_eq!(brute_force_transversal(&inst).unwrap().cost, 1.0);
    assert_eq!(brute_force_assignment(&inst).unwrap().opt_unsat_cost, 1.0);
}
