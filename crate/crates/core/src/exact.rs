//! Brute-force oracles: optimal assignments, optimal transversals and
//! exhaustive simple-cycle enumeration on small instances.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::instance::{Assignment, ClosedWalk, EdgeId, InstanceKind, UgInstance, VertexId};

/// Largest number of assignments [`brute_force_assignment`] will try.
pub const ASSIGNMENT_CAP: u128 = 10_000_000;
/// Largest edge count [`brute_force_transversal`] accepts.
pub const TRANSVERSAL_EDGE_CAP: usize = 24;
/// Largest edge count [`enumerate_cycles`] accepts.
pub const CYCLE_EDGE_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct BruteForceResult {
    pub opt_unsat_cost: f64,
    /// Lexicographically smallest optimal assignment among those tried.
    pub witness: Assignment,
    pub explored: u64,
}

/// Exhaustive minimum unsatisfied cost. For 2Lin one vertex per connected
/// component is pinned to label 0, since shifting a whole component by a
/// constant changes no constraint.
pub fn brute_force_assignment(inst: &UgInstance) -> Result<BruteForceResult> {
    let n = inst.n();
    let k = inst.k();
    let mut pinned = vec![false; n];
    if inst.kind() == InstanceKind::TwoLin {
        for root in component_roots(inst) {
            pinned[root] = true;
        }
    }
    let free: Vec<VertexId> = (0..n).filter(|&v| !pinned[v]).collect();
    let size = (k as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if size > ASSIGNMENT_CAP {
        return Err(Error::SizeCapExceeded {
            what: "assignments",
            size,
            cap: ASSIGNMENT_CAP,
        });
    }

    let mut labels = vec![0; n];
    let mut best_cost = f64::INFINITY;
    let mut best = labels.clone();
    let mut explored = 0u64;
    loop {
        explored += 1;
        let a = Assignment::new(labels);
        let cost = inst.unsat_cost(&a);
        labels = a.into_labels();
        if cost < best_cost {
            best_cost = cost;
            best.copy_from_slice(&labels);
        }
        // odometer over the free vertices, last vertex fastest
        let mut i = free.len();
        loop {
            if i == 0 {
                return Ok(BruteForceResult {
                    opt_unsat_cost: best_cost,
                    witness: Assignment::new(best),
                    explored,
                });
            }
            i -= 1;
            let v = free[i];
            labels[v] += 1;
            if labels[v] < k {
                break;
            }
            labels[v] = 0;
        }
    }
}

/// Smallest vertex of every connected component.
fn component_roots(inst: &UgInstance) -> Vec<VertexId> {
    let mut seen = vec![false; inst.n()];
    let mut roots = Vec::new();
    for s in 0..inst.n() {
        if seen[s] {
            continue;
        }
        roots.push(s);
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(w, _) in inst.neighbors(x) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    roots
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransversalResult {
    pub cost: f64,
    /// Sorted edge ids of the first optimal set found (by size, then
    /// lexicographically).
    pub edges: Vec<EdgeId>,
    pub explored: u64,
}

/// Minimum-cost edge set whose removal leaves no inconsistent cycle.
/// Subsets are tried by increasing size; a size is skipped once its
/// cheapest possible cost cannot beat the incumbent.
pub fn brute_force_transversal(inst: &UgInstance) -> Result<TransversalResult> {
    if inst.kind() != InstanceKind::TwoLin {
        return Err(Error::RequiresTwoLin);
    }
    let m = inst.num_edges();
    if m > TRANSVERSAL_EDGE_CAP {
        return Err(Error::SizeCapExceeded {
            what: "edges for transversal search",
            size: m as u128,
            cap: TRANSVERSAL_EDGE_CAP as u128,
        });
    }
    let costs = inst.costs();
    let mut sorted_costs = costs.clone();
    sorted_costs.sort_by(f64::total_cmp);

    let mut best: Option<(f64, Vec<EdgeId>)> = None;
    let mut explored = 0u64;
    let mut active = vec![true; m];
    for size in 0..=m {
        let floor: f64 = sorted_costs[..size].iter().sum();
        if best.as_ref().is_some_and(|(c, _)| floor >= *c) {
            break;
        }
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let cost: f64 = combo.iter().map(|&e| costs[e]).sum();
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                explored += 1;
                for &e in &combo {
                    active[e] = false;
                }
                if !inst.has_inconsistent_cycle(&active) {
                    best = Some((cost, combo.clone()));
                }
                for &e in &combo {
                    active[e] = true;
                }
            }
            if !next_combination(&mut combo, m) {
                break;
            }
        }
    }
    let (cost, edges) = best.expect("deleting every edge always works");
    Ok(TransversalResult {
        cost,
        edges,
        explored,
    })
}

/// Advances `combo` to the next `combo.len()`-subset of `0..m` in
/// lexicographic order.
fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let s = combo.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if combo[i] < m - s + i {
            combo[i] += 1;
            for j in i + 1..s {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// A simple cycle: `vertices[i]` joins `vertices[i + 1]` (cyclically) via
/// `edges[i]`. Stored in canonical form: rotated to start at the smallest
/// vertex, and of the two orientations the lexicographically smaller.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn canonical(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        let len = vertices.len();
        let start = (0..len).min_by_key(|&i| vertices[i]).expect("nonempty cycle");
        let forward = Cycle {
            vertices: (0..len).map(|i| vertices[(start + i) % len]).collect(),
            edges: (0..len).map(|i| edges[(start + i) % len]).collect(),
        };
        // reversed: start, then walk backwards
        let backward = Cycle {
            vertices: (0..len).map(|i| vertices[(start + len - i) % len]).collect(),
            edges: (0..len).map(|i| edges[(start + 2 * len - i - 1) % len]).collect(),
        };
        forward.min(backward)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn walk(&self) -> ClosedWalk {
        ClosedWalk {
            start: self.vertices[0],
            edges: self.edges.clone(),
        }
    }
}

/// Every simple cycle (parallel-edge pairs included), canonical and sorted.
pub fn enumerate_cycles(inst: &UgInstance, max_edges: usize) -> Result<Vec<Cycle>> {
    if max_edges > CYCLE_EDGE_CAP || inst.num_edges() > max_edges {
        return Err(Error::SizeCapExceeded {
            what: "edges for cycle enumeration",
            size: inst.num_edges().max(max_edges) as u128,
            cap: max_edges.min(CYCLE_EDGE_CAP) as u128,
        });
    }
    let mut found = BTreeSet::new();
    let mut on_path = vec![false; inst.n()];
    for s in 0..inst.n() {
        let mut vertices = vec![s];
        let mut edges = Vec::new();
        on_path[s] = true;
        extend_cycles(inst, s, &mut vertices, &mut edges, &mut on_path, &mut found);
        on_path[s] = false;
    }
    Ok(found.into_iter().collect())
}

fn extend_cycles(
    inst: &UgInstance,
    s: VertexId,
    vertices: &mut Vec<VertexId>,
    edges: &mut Vec<EdgeId>,
    on_path: &mut [bool],
    found: &mut BTreeSet<Cycle>,
) {
    let cur = *vertices.last().expect("path starts at s");
    for &(w, e) in inst.neighbors(cur) {
        if edges.last() == Some(&e) {
            continue;
        }
        if w == s && !edges.is_empty() {
            let mut es = edges.clone();
            es.push(e);
            found.insert(Cycle::canonical(vertices.clone(), es));
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            vertices.push(w);
            edges.push(e);
            extend_cycles(inst, s, vertices, edges, on_path, found);
            edges.pop();
            vertices.pop();
            on_path[w] = false;
        }
    }
}

/// Simple cycles whose signature is not the identity.
pub fn enumerate_inconsistent_cycles(inst: &UgInstance, max_edges: usize) -> Result<Vec<Cycle>> {
    Ok(enumerate_cycles(inst, max_edges)?
        .into_iter()
        .filter(|c| !inst.signature_of(&c.walk()).is_identity())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Constraint, Edge};

    fn odd_triangle() -> UgInstance {
        let edges = (0..3)
            .map(|i| Edge::new(i, (i + 1) % 3, 1.0, Constraint::Shift(1)))
            .collect();
        UgInstance::new(3, 2, InstanceKind::TwoLin, edges).unwrap()
    }

    fn k4_odd() -> UgInstance {
        let mut edges = Vec::new();
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push(Edge::new(u, v, 1.0, Constraint::Shift(1)));
            }
        }
        UgInstance::new(4, 2, InstanceKind::TwoLin, edges).unwrap()
    }

    #[test]
    fn triangle_oracles() {
        let inst = odd_triangle();
        let bf = brute_force_assignment(&inst).unwrap();
        assert_eq!(bf.opt_unsat_cost, 1.0);
        // vertex 0 pinned: 2^2 assignments
        assert_eq!(bf.explored, 4);
        let t = brute_force_transversal(&inst).unwrap();
        assert_eq!(t.cost, 1.0);
        assert_eq!(t.edges.len(), 1);
        assert_eq!(enumerate_inconsistent_cycles(&inst, 16).unwrap().len(), 1);
    }

    #[test]
    fn consistent_instance_needs_no_transversal() {
        let edges = (0..4)
            .map(|i| Edge::new(i, (i + 1) % 4, 1.0, Constraint::Shift(0)))
            .collect();
        let inst = UgInstance::new(4, 3, InstanceKind::TwoLin, edges).unwrap();
        let t = brute_force_transversal(&inst).unwrap();
        assert_eq!(t.cost, 0.0);
        assert!(t.edges.is_empty());
        let bf = brute_force_assignment(&inst).unwrap();
        assert_eq!(bf.opt_unsat_cost, 0.0);
        assert_eq!(inst.unsat_cost(&bf.witness), 0.0);
    }

    #[test]
    fn tree_has_no_cycles() {
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(1)),
            Edge::new(1, 2, 1.0, Constraint::Shift(1)),
            Edge::new(1, 3, 1.0, Constraint::Shift(1)),
        ];
        let inst = UgInstance::new(4, 2, InstanceKind::TwoLin, edges).unwrap();
        assert!(enumerate_cycles(&inst, 16).unwrap().is_empty());
    }

    #[test]
    fn k4_cycle_parity() {
        let inst = k4_odd();
        let all = enumerate_cycles(&inst, 16).unwrap();
        assert_eq!(all.len(), 7);
        let bad = enumerate_inconsistent_cycles(&inst, 16).unwrap();
        assert_eq!(bad.len(), 4);
        assert!(bad.iter().all(|c| c.len() == 3));
        assert!(all.iter().filter(|c| c.len() == 4).count() == 3);
    }

    #[test]
    fn parallel_edges_form_two_cycles() {
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(0)),
            Edge::new(1, 0, 1.0, Constraint::Shift(1)),
        ];
        let inst = UgInstance::new(2, 3, InstanceKind::TwoLin, edges).unwrap();
        let cycles = enumerate_inconsistent_cycles(&inst, 16).unwrap();
        assert_eq!(cycles, vec![Cycle { vertices: vec![0, 1], edges: vec![0, 1] }]);
    }

    #[test]
    fn canonical_form_collapses_rotations_and_reflections() {
        let a = Cycle::canonical(vec![2, 0, 1], vec![5, 3, 4]);
        let b = Cycle::canonical(vec![0, 2, 1], vec![5, 4, 3]);
        assert_eq!(a, b);
        assert_eq!(a.vertices[0], 0);
    }

    #[test]
    fn caps_are_enforced() {
        let edges = (0..25)
            .map(|i| Edge::new(i, i + 1, 1.0, Constraint::Shift(0)))
            .collect();
        let inst = UgInstance::new(26, 2, InstanceKind::TwoLin, edges).unwrap();
        assert!(matches!(brute_force_transversal(&inst), Err(Error::SizeCapExceeded { .. })));
        assert!(matches!(enumerate_cycles(&inst, 16), Err(Error::SizeCapExceeded { .. })));

        let edges = vec![Edge::new(0, 1, 1.0, Constraint::Perm(vec![0, 1, 2]))];
        let inst = UgInstance::new(16, 3, InstanceKind::General, edges).unwrap();
        assert!(matches!(brute_force_assignment(&inst), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn general_oracle_uses_all_labels() {
        // a 3-cycle whose composed permutation fixes no label: every
        // assignment violates at least one edge
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Perm(vec![1, 2, 0])),
            Edge::new(1, 2, 1.0, Constraint::Perm(vec![0, 1, 2])),
            Edge::new(2, 0, 2.0, Constraint::Perm(vec![0, 1, 2])),
        ];
        let inst = UgInstance::new(3, 3, InstanceKind::General, edges).unwrap();
        let bf = brute_force_assignment(&inst).unwrap();
        assert_eq!(bf.explored, 27);
        assert_eq!(bf.opt_unsat_cost, 1.0);
    }
}
