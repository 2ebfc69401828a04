//! Unique Games instances, assignments, walk signatures and the
//! label-extended graph.
//!
//! Every edge stores its constraint in the `u -> v` direction; the
//! `v -> u` constraint is the inverse and is applied on traversal.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::paths::{self, ShortestPaths};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Label = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    /// Constraints `x_v = x_u + c (mod k)`.
    TwoLin,
    /// Arbitrary permutation constraints.
    General,
}

/// A `u -> v` constraint: an edge is satisfied when `apply(label(u)) == label(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Shift(Label),
    /// Image array of a bijection on `[k]`.
    Perm(Vec<Label>),
}

impl Constraint {
    pub fn apply(&self, label: Label, k: usize) -> Label {
        match self {
            Constraint::Shift(c) => (label + c) % k,
            Constraint::Perm(p) => p[label],
        }
    }

    pub fn apply_inverse(&self, label: Label, k: usize) -> Label {
        match self {
            Constraint::Shift(c) => (label + k - c % k) % k,
            Constraint::Perm(p) => p
                .iter()
                .position(|&img| img == label)
                .expect("constraint is a bijection"),
        }
    }

    pub fn inverse(&self, k: usize) -> Constraint {
        match self {
            Constraint::Shift(c) => Constraint::Shift((k - c % k) % k),
            Constraint::Perm(p) => {
                let mut inv = vec![0; k];
                for (l, &img) in p.iter().enumerate() {
                    inv[img] = l;
                }
                Constraint::Perm(inv)
            }
        }
    }

    pub fn to_signature(&self, k: usize) -> Signature {
        Signature((0..k).map(|l| self.apply(l, k)).collect())
    }

    fn is_valid(&self, k: usize, kind: InstanceKind) -> bool {
        match (self, kind) {
            (Constraint::Shift(c), InstanceKind::TwoLin) => *c < k,
            (Constraint::Perm(p), InstanceKind::General) => is_permutation(p, k),
            _ => false,
        }
    }
}

fn is_permutation(p: &[Label], k: usize) -> bool {
    if p.len() != k {
        return false;
    }
    let mut seen = vec![false; k];
    for &l in p {
        if l >= k || seen[l] {
            return false;
        }
        seen[l] = true;
    }
    true
}

/// Composed constraint along a walk, as an image array on `[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature(Vec<Label>);

impl Signature {
    pub fn identity(k: usize) -> Self {
        Signature((0..k).collect())
    }

    pub fn apply(&self, label: Label) -> Label {
        self.0[label]
    }

    pub fn images(&self) -> &[Label] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &l)| i == l)
    }

    /// `next ∘ self`: walk `self` first, then `next`.
    pub fn then(&self, next: &Signature) -> Signature {
        Signature(self.0.iter().map(|&l| next.0[l]).collect())
    }

    pub fn inverse(&self) -> Signature {
        let mut inv = vec![0; self.0.len()];
        for (l, &img) in self.0.iter().enumerate() {
            inv[img] = l;
        }
        Signature(inv)
    }

    /// The shift `c` if this signature is `l -> l + c (mod k)`.
    pub fn as_shift(&self) -> Option<Label> {
        let k = self.0.len();
        let c = *self.0.first()?;
        (0..k)
            .all(|l| self.0[l] == (l + c) % k)
            .then_some(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub cost: f64,
    pub constraint: Constraint,
}

impl Edge {
    pub fn new(u: VertexId, v: VertexId, cost: f64, constraint: Constraint) -> Self {
        Edge {
            u,
            v,
            cost,
            constraint,
        }
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UgInstance {
    n: usize,
    k: usize,
    kind: InstanceKind,
    edges: Vec<Edge>,
    /// `(neighbor, edge)` sorted by neighbor id, then edge id.
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

/// Result of [`UgInstance::evaluate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub sat_cost: f64,
    pub unsat_cost: f64,
    pub violated: Vec<EdgeId>,
}

/// Total labeling `vertex -> label`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    labels: Vec<Label>,
}

impl Assignment {
    pub fn new(labels: Vec<Label>) -> Self {
        Assignment { labels }
    }

    pub fn constant(n: usize, label: Label) -> Self {
        Assignment {
            labels: vec![label; n],
        }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> Label {
        self.labels[v]
    }

    pub fn set(&mut self, v: VertexId, label: Label) {
        self.labels[v] = label;
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn into_labels(self) -> Vec<Label> {
        self.labels
    }
}

/// A closed walk given by its start vertex and the edges it crosses in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedWalk {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl ClosedWalk {
    /// Vertex sequence `v0, v1, ..., v_t` (with `v_t == v0` for a closed walk).
    pub fn vertices(&self, inst: &UgInstance) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        let mut cur = self.start;
        out.push(cur);
        for &e in &self.edges {
            cur = inst.edges[e].other(cur);
            out.push(cur);
        }
        out
    }

    pub fn weight(&self, x: &[f64]) -> f64 {
        self.edges.iter().map(|&e| x[e]).sum()
    }

    /// Splits the walk at repeated vertices into simple closed sub-walks.
    /// Back-and-forth steps over a single edge come out as length-2 pieces.
    pub fn simple_cycles(&self, inst: &UgInstance) -> Vec<ClosedWalk> {
        let mut out = Vec::new();
        // (vertex, edge used to arrive)
        let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(self.start, None)];
        let mut cur = self.start;
        for &e in &self.edges {
            let next = inst.edges[e].other(cur);
            if let Some(pos) = stack.iter().position(|&(v, _)| v == next) {
                let mut edges: Vec<EdgeId> =
                    stack[pos + 1..].iter().filter_map(|&(_, a)| a).collect();
                edges.push(e);
                out.push(ClosedWalk { start: next, edges });
                stack.truncate(pos + 1);
            } else {
                stack.push((next, Some(e)));
            }
            cur = next;
        }
        out
    }
}

/// Outcome of [`UgInstance::is_cluster_consistent`].
#[derive(Clone, Debug, PartialEq)]
pub enum ClusterConsistency {
    /// Labels for every cluster vertex satisfying every induced edge.
    Consistent { labels: Vec<(VertexId, Label)> },
    /// A closed walk inside the cluster whose signature is not the identity.
    Inconsistent { witness: ClosedWalk },
}

impl ClusterConsistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ClusterConsistency::Consistent { .. })
    }
}

struct BfsForest {
    label: Vec<Option<Label>>,
    parent: Vec<Option<(VertexId, EdgeId)>>,
}

impl UgInstance {
    pub fn new(n: usize, k: usize, kind: InstanceKind, edges: Vec<Edge>) -> Result<Self> {
        if k == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let mut adj = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            for w in [e.u, e.v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { edge: id, vertex: w });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop { edge: id });
            }
            if !(e.cost.is_finite() && e.cost >= 0.0) {
                return Err(Error::InvalidCost { edge: id });
            }
            if !e.constraint.is_valid(k, kind) {
                let expected = match kind {
                    InstanceKind::TwoLin => "shift",
                    InstanceKind::General => "permutation",
                };
                return Err(Error::InvalidConstraint { edge: id, expected });
            }
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(UgInstance {
            n,
            k,
            kind,
            edges,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn costs(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.cost).collect()
    }

    pub fn total_cost(&self) -> f64 {
        self.edges.iter().fold(0.0, |acc, e| acc + e.cost)
    }

    /// Label reached at the far end of `e` when leaving `from` with `label`.
    pub fn cross(&self, e: EdgeId, from: VertexId, label: Label) -> Label {
        let edge = &self.edges[e];
        if from == edge.u {
            edge.constraint.apply(label, self.k)
        } else {
            edge.constraint.apply_inverse(label, self.k)
        }
    }

    pub fn is_satisfied(&self, e: EdgeId, a: &Assignment) -> bool {
        let edge = &self.edges[e];
        edge.constraint.apply(a.label(edge.u), self.k) == a.label(edge.v)
    }

    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.len() != self.n {
            return Err(Error::AssignmentLength {
                expected: self.n,
                got: a.len(),
            });
        }
        if let Some((vertex, &label)) = a.labels().iter().enumerate().find(|(_, &l)| l >= self.k) {
            return Err(Error::InvalidAssignment { vertex, label });
        }
        Ok(())
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<Evaluation> {
        self.check_assignment(a)?;
        let mut sat_cost = 0.0;
        let mut unsat_cost = 0.0;
        let mut violated = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if self.is_satisfied(id, a) {
                sat_cost += e.cost;
            } else {
                unsat_cost += e.cost;
                violated.push(id);
            }
        }
        Ok(Evaluation {
            sat_cost,
            unsat_cost,
            violated,
        })
    }

    /// Unsatisfied cost only, without allocating the violated list.
    pub fn unsat_cost(&self, a: &Assignment) -> f64 {
        (0..self.edges.len())
            .filter(|&e| !self.is_satisfied(e, a))
            .map(|e| self.edges[e].cost)
            .fold(0.0, |acc, c| acc + c)
    }

    /// Signature of the walk leaving `start` along `edges` in order.
    pub fn walk_signature(&self, start: VertexId, edges: &[EdgeId]) -> Result<Signature> {
        let mut sig = Signature::identity(self.k);
        let mut cur = start;
        for (step, &e) in edges.iter().enumerate() {
            let edge = self.edges.get(e).ok_or(Error::InvalidWalk { step })?;
            if cur != edge.u && cur != edge.v {
                return Err(Error::InvalidWalk { step });
            }
            let hop = if cur == edge.u {
                edge.constraint.to_signature(self.k)
            } else {
                edge.constraint.inverse(self.k).to_signature(self.k)
            };
            sig = sig.then(&hop);
            cur = edge.other(cur);
        }
        Ok(sig)
    }

    /// Signature of a vertex walk; between parallel edges the smallest id is used.
    pub fn vertex_walk_signature(&self, walk: &[VertexId]) -> Result<Signature> {
        let edges = self.walk_edges(walk)?;
        match walk.first() {
            Some(&s) => self.walk_signature(s, &edges),
            None => Ok(Signature::identity(self.k)),
        }
    }

    /// Resolves consecutive vertex pairs to edge ids (smallest id among parallels).
    pub fn walk_edges(&self, walk: &[VertexId]) -> Result<Vec<EdgeId>> {
        walk.windows(2)
            .enumerate()
            .map(|(step, pair)| {
                if pair[0] >= self.n {
                    return Err(Error::InvalidWalk { step });
                }
                self.adj[pair[0]]
                    .iter()
                    .find(|&&(w, _)| w == pair[1])
                    .map(|&(_, e)| e)
                    .ok_or(Error::InvalidWalk { step })
            })
            .collect()
    }

    pub fn signature_of(&self, walk: &ClosedWalk) -> Signature {
        self.walk_signature(walk.start, &walk.edges)
            .expect("closed walk built from incident edges")
    }

    /// BFS forest over `members` using only `active` edges. Given roots are
    /// seeded first; every remaining component is rooted at its smallest id
    /// with label 0. Neighbors are visited in ascending vertex id.
    fn bfs_forest(
        &self,
        members: &[bool],
        active: &[bool],
        roots: &[(VertexId, Label)],
    ) -> BfsForest {
        let mut label = vec![None; self.n];
        let mut parent = vec![None; self.n];
        let mut queue = VecDeque::new();
        let implicit = (0..self.n).filter(|&v| members[v]).map(|v| (v, 0));
        for (root, root_label) in roots.iter().copied().chain(implicit) {
            if !members[root] || label[root].is_some() {
                continue;
            }
            label[root] = Some(root_label);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let lu = label[u].expect("queued vertices are labeled");
                for &(w, e) in &self.adj[u] {
                    if !active[e] || !members[w] || label[w].is_some() {
                        continue;
                    }
                    label[w] = Some(self.cross(e, u, lu));
                    parent[w] = Some((u, e));
                    queue.push_back(w);
                }
            }
        }
        BfsForest { label, parent }
    }

    /// Propagates root labels along BFS trees over the `active` edges.
    /// Components without a supplied root get label 0 at their smallest vertex.
    pub fn propagate_assignment(&self, roots: &[(VertexId, Label)], active: &[bool]) -> Assignment {
        let members = vec![true; self.n];
        let forest = self.bfs_forest(&members, active, roots);
        Assignment::new(forest.label.into_iter().map(|l| l.unwrap_or(0)).collect())
    }

    /// Checks whether the subgraph induced by `cluster` admits an assignment
    /// satisfying all its edges. 2Lin only: there, consistency is the
    /// absence of inconsistent cycles.
    pub fn is_cluster_consistent(&self, cluster: &[VertexId]) -> Result<ClusterConsistency> {
        let active = vec![true; self.edges.len()];
        self.is_cluster_consistent_within(cluster, &active)
    }

    /// As [`Self::is_cluster_consistent`], restricted to the `active` edges.
    pub fn is_cluster_consistent_within(
        &self,
        cluster: &[VertexId],
        active: &[bool],
    ) -> Result<ClusterConsistency> {
        if self.kind != InstanceKind::TwoLin {
            return Err(Error::RequiresTwoLin);
        }
        Ok(self.propagation_check(cluster, active))
    }

    /// Label propagation check shared by the 2Lin consistency test. For
    /// general instances a `Consistent` answer still yields a satisfying
    /// labeling, but `Inconsistent` only means this particular propagation
    /// failed.
    fn propagation_check(&self, cluster: &[VertexId], active: &[bool]) -> ClusterConsistency {
        let mut members = vec![false; self.n];
        for &v in cluster {
            members[v] = true;
        }
        let forest = self.bfs_forest(&members, active, &[]);
        for (id, e) in self.edges.iter().enumerate() {
            if !active[id] || !members[e.u] || !members[e.v] {
                continue;
            }
            let lu = forest.label[e.u].expect("member labeled");
            let lv = forest.label[e.v].expect("member labeled");
            if e.constraint.apply(lu, self.k) != lv {
                return ClusterConsistency::Inconsistent {
                    witness: tree_cycle(&forest.parent, e.u, e.v, id),
                };
            }
        }
        let mut sorted: Vec<VertexId> = cluster.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        ClusterConsistency::Consistent {
            labels: sorted
                .into_iter()
                .map(|v| (v, forest.label[v].expect("member labeled")))
                .collect(),
        }
    }

    /// Whether the `active` subgraph contains a closed walk with a
    /// non-identity signature. Works for both kinds by propagating whole
    /// permutations instead of single labels.
    pub fn has_inconsistent_cycle(&self, active: &[bool]) -> bool {
        let mut sig: Vec<Option<Signature>> = vec![None; self.n];
        for root in 0..self.n {
            if sig[root].is_some() {
                continue;
            }
            sig[root] = Some(Signature::identity(self.k));
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let su = sig[u].clone().expect("queued");
                for &(w, e) in &self.adj[u] {
                    if !active[e] {
                        continue;
                    }
                    let hop = self
                        .walk_signature(u, &[e])
                        .expect("incident edge");
                    let sw = su.then(&hop);
                    match &sig[w] {
                        Some(existing) => {
                            if *existing != sw {
                                return true;
                            }
                        }
                        None => {
                            sig[w] = Some(sw);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        false
    }

    /// Lifts the instance to `V x [k]`. `weight(e, l)` is the weight of the
    /// arc `((u, l), (v, pi_uv(l)))` where `u` is the stored tail of `e`.
    pub fn label_extended<F>(&self, weight: F) -> LabelExtendedGraph
    where
        F: Fn(EdgeId, Label) -> f64,
    {
        let k = self.k;
        let mut adj = vec![Vec::new(); self.n * k];
        for (id, e) in self.edges.iter().enumerate() {
            for l in 0..k {
                let w = weight(id, l);
                let a = e.u * k + l;
                let b = e.v * k + e.constraint.apply(l, k);
                adj[a].push(LiftedArc {
                    to: b,
                    edge: id,
                    weight: w,
                });
                adj[b].push(LiftedArc {
                    to: a,
                    edge: id,
                    weight: w,
                });
            }
        }
        LabelExtendedGraph { n: self.n, k, adj }
    }

    /// Same instance with vertex `v` renamed to `perm[v]`.
    pub fn relabel_vertices(&self, perm: &[VertexId]) -> Result<UgInstance> {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.u], perm[e.v], e.cost, e.constraint.clone()))
            .collect();
        UgInstance::new(self.n, self.k, self.kind, edges)
    }
}

/// Closed walk `lca -> ... -> u --e--> v -> ... -> lca` through a BFS forest.
fn tree_cycle(
    parent: &[Option<(VertexId, EdgeId)>],
    u: VertexId,
    v: VertexId,
    e: EdgeId,
) -> ClosedWalk {
    // root-first lists of (vertex, edge from parent)
    let chain = |mut x: VertexId| {
        let mut out = vec![(x, None)];
        while let Some((p, pe)) = parent[x] {
            out.push((p, None));
            let len = out.len();
            out[len - 2].1 = Some(pe);
            x = p;
        }
        out.reverse();
        out
    };
    let cu = chain(u);
    let cv = chain(v);
    let mut common = 0;
    while common < cu.len() && common < cv.len() && cu[common].0 == cv[common].0 {
        common += 1;
    }
    let lca = cu[common - 1].0;
    // entries below the LCA carry the tree edges of the two paths
    let mut edges: Vec<EdgeId> = cu[common..].iter().filter_map(|&(_, pe)| pe).collect();
    edges.push(e);
    edges.extend(cv[common..].iter().rev().filter_map(|&(_, pe)| pe));
    ClosedWalk { start: lca, edges }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiftedArc {
    pub to: usize,
    pub edge: EdgeId,
    pub weight: f64,
}

/// Lift of a constraint graph with node `(v, l)` stored at `v * k + l`.
#[derive(Clone, Debug)]
pub struct LabelExtendedGraph {
    n: usize,
    k: usize,
    adj: Vec<Vec<LiftedArc>>,
}

impl LabelExtendedGraph {
    pub fn node(&self, v: VertexId, l: Label) -> usize {
        v * self.k + l
    }

    pub fn split(&self, node: usize) -> (VertexId, Label) {
        (node / self.k, node % self.k)
    }

    pub fn node_count(&self) -> usize {
        self.n * self.k
    }

    /// Undirected arc count.
    pub fn arc_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn arcs(&self, node: usize) -> &[LiftedArc] {
        &self.adj[node]
    }

    pub(crate) fn shortest_paths(&self, source: usize) -> ShortestPaths {
        paths::dijkstra(self.node_count(), source, f64::INFINITY, |x, emit| {
            for arc in &self.adj[x] {
                emit(arc.to, arc.weight, arc.edge);
            }
        })
    }

    /// Distances from `source` to every lifted node.
    pub fn distances(&self, source: usize) -> Vec<f64> {
        self.shortest_paths(source).dist
    }

    /// Nodes reachable from `source` through arcs of any weight.
    pub fn reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut stack = vec![source];
        seen[source] = true;
        while let Some(x) = stack.pop() {
            for arc in &self.adj[x] {
                if !seen[arc.to] {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(k: usize, shifts: [usize; 3]) -> UgInstance {
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(shifts[0])),
            Edge::new(1, 2, 1.0, Constraint::Shift(shifts[1])),
            Edge::new(2, 0, 1.0, Constraint::Shift(shifts[2])),
        ];
        UgInstance::new(3, k, InstanceKind::TwoLin, edges).unwrap()
    }

    #[test]
    fn rejects_malformed_instances() {
        let bad = |edges: Vec<Edge>, kind| UgInstance::new(3, 2, kind, edges).unwrap_err();
        assert!(matches!(
            bad(vec![Edge::new(0, 3, 1.0, Constraint::Shift(0))], InstanceKind::TwoLin),
            Error::VertexOutOfRange { vertex: 3, .. }
        ));
        assert!(matches!(
            bad(vec![Edge::new(1, 1, 1.0, Constraint::Shift(0))], InstanceKind::TwoLin),
            Error::SelfLoop { edge: 0 }
        ));
        assert!(matches!(
            bad(vec![Edge::new(0, 1, -1.0, Constraint::Shift(0))], InstanceKind::TwoLin),
            Error::InvalidCost { .. }
        ));
        assert!(matches!(
            bad(vec![Edge::new(0, 1, 1.0, Constraint::Shift(2))], InstanceKind::TwoLin),
            Error::InvalidConstraint { .. }
        ));
        assert!(matches!(
            bad(vec![Edge::new(0, 1, 1.0, Constraint::Perm(vec![1, 1]))], InstanceKind::General),
            Error::InvalidConstraint { .. }
        ));
        assert!(matches!(
            bad(vec![Edge::new(0, 1, 1.0, Constraint::Perm(vec![1, 0]))], InstanceKind::TwoLin),
            Error::InvalidConstraint { .. }
        ));
        assert!(matches!(
            UgInstance::new(1, 0, InstanceKind::TwoLin, vec![]),
            Err(Error::EmptyAlphabet)
        ));
    }

    #[test]
    fn parallel_edges_are_allowed() {
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(0)),
            Edge::new(0, 1, 1.0, Constraint::Shift(1)),
        ];
        let inst = UgInstance::new(2, 2, InstanceKind::TwoLin, edges).unwrap();
        let sig = inst.walk_signature(0, &[0, 1]).unwrap();
        assert_eq!(sig.as_shift(), Some(1));
        assert!(!inst.is_cluster_consistent(&[0, 1]).unwrap().is_consistent());
    }

    #[test]
    fn evaluate_max_cut_triangle() {
        let inst = triangle(2, [1, 1, 1]);
        let ev = inst.evaluate(&Assignment::new(vec![0, 1, 0])).unwrap();
        assert_eq!(ev.unsat_cost, 1.0);
        assert_eq!(ev.sat_cost, 2.0);
        assert_eq!(ev.violated, vec![2]);
    }

    #[test]
    fn evaluate_identity_constraints_constant_assignment() {
        let inst = triangle(5, [0, 0, 0]);
        let ev = inst.evaluate(&Assignment::constant(3, 3)).unwrap();
        assert_eq!(ev.unsat_cost, 0.0);
        assert!(ev.violated.is_empty());
    }

    #[test]
    fn evaluate_rejects_bad_labels() {
        let inst = triangle(2, [1, 1, 1]);
        assert!(matches!(
            inst.evaluate(&Assignment::new(vec![0, 2, 0])),
            Err(Error::InvalidAssignment { vertex: 1, label: 2 })
        ));
        assert!(matches!(
            inst.evaluate(&Assignment::new(vec![0, 1])),
            Err(Error::AssignmentLength { .. })
        ));
    }

    #[test]
    fn lifted_single_edge_k2() {
        let edges = vec![Edge::new(0, 1, 1.0, Constraint::Shift(1))];
        let inst = UgInstance::new(2, 2, InstanceKind::TwoLin, edges).unwrap();
        let h = inst.label_extended(|_, _| 0.4);
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.arc_count(), 2);
        // u+ = (0,0) joins v- = (1,1); u- = (0,1) joins v+ = (1,0)
        assert_eq!(h.arcs(h.node(0, 0)), &[LiftedArc { to: h.node(1, 1), edge: 0, weight: 0.4 }]);
        assert_eq!(h.arcs(h.node(0, 1)), &[LiftedArc { to: h.node(1, 0), edge: 0, weight: 0.4 }]);
        assert_eq!(h.arcs(h.node(1, 1)), &[LiftedArc { to: h.node(0, 0), edge: 0, weight: 0.4 }]);
    }

    #[test]
    fn lifted_k1_is_the_base_graph() {
        let inst = triangle(1, [0, 0, 0]);
        let h = inst.label_extended(|e, _| e as f64);
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.arc_count(), 3);
        for v in 0..3 {
            let mut lifted: Vec<(usize, usize)> = h.arcs(v).iter().map(|a| (a.to, a.edge)).collect();
            lifted.sort_unstable();
            assert_eq!(lifted, inst.neighbors(v));
        }
    }

    #[test]
    fn lifted_triangle_k3_has_no_short_return() {
        let inst = triangle(3, [1, 1, 1]);
        let h = inst.label_extended(|_, _| 1.0);
        assert_eq!(h.node_count(), 9);
        assert_eq!(h.arc_count(), 9);
        // one loop around the triangle from (0, l) lands on (0, l + 3 mod 3)... = (0, l)?
        // shifts sum to 3 = 0 mod 3, so a single loop returns to the start label.
        let sig = inst.walk_signature(0, &[0, 1, 2]).unwrap();
        assert!(sig.is_identity());
        // with shift sum 1 mod 3 no single loop returns to the start label
        let inst = triangle(3, [1, 0, 0]);
        let sig = inst.walk_signature(0, &[0, 1, 2]).unwrap();
        for l in 0..3 {
            assert_ne!(sig.apply(l), l);
        }
    }

    #[test]
    fn signatures_of_cycles() {
        let inst = triangle(2, [0, 0, 0]);
        assert!(inst.vertex_walk_signature(&[0, 1, 2, 0]).unwrap().is_identity());
        let inst = triangle(2, [1, 1, 1]);
        let sig = inst.vertex_walk_signature(&[0, 1, 2, 0]).unwrap();
        assert_eq!(sig.as_shift(), Some(1));
        assert!(!sig.is_identity());
        assert!(inst.vertex_walk_signature(&[]).unwrap().is_identity());
        assert!(matches!(
            inst.walk_signature(0, &[1]),
            Err(Error::InvalidWalk { step: 0 })
        ));
    }

    #[test]
    fn four_cycle_with_zero_shift_sum() {
        // shifts 1, 3, 2, 2 sum to 8 = 0 mod 4; one edge stored backwards
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(1)),
            Edge::new(1, 2, 1.0, Constraint::Shift(3)),
            Edge::new(3, 2, 1.0, Constraint::Shift(2)),
            Edge::new(3, 0, 1.0, Constraint::Shift(2)),
        ];
        let inst = UgInstance::new(4, 4, InstanceKind::TwoLin, edges).unwrap();
        // 0->1 (+1), 1->2 (+3), 2->3 (-2), 3->0 (+2): total 4 = 0
        assert!(inst.vertex_walk_signature(&[0, 1, 2, 3, 0]).unwrap().is_identity());
    }

    #[test]
    fn consistent_cluster_gets_zero_assignment() {
        let inst = triangle(3, [0, 0, 0]);
        match inst.is_cluster_consistent(&[0, 1, 2]).unwrap() {
            ClusterConsistency::Consistent { labels } => {
                assert_eq!(labels, vec![(0, 0), (1, 0), (2, 0)]);
            }
            other => panic!("expected consistent, got {other:?}"),
        }
    }

    #[test]
    fn odd_cycle_witness_is_the_cycle() {
        let inst = triangle(2, [1, 1, 1]);
        match inst.is_cluster_consistent(&[0, 1, 2]).unwrap() {
            ClusterConsistency::Inconsistent { witness } => {
                let mut edges = witness.edges.clone();
                edges.sort_unstable();
                assert_eq!(edges, vec![0, 1, 2]);
                assert!(!inst.signature_of(&witness).is_identity());
                let vs = witness.vertices(&inst);
                assert_eq!(vs.first(), vs.last());
            }
            other => panic!("expected inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn consistency_requires_two_lin() {
        let edges = vec![Edge::new(0, 1, 1.0, Constraint::Perm(vec![1, 0]))];
        let inst = UgInstance::new(2, 2, InstanceKind::General, edges).unwrap();
        assert!(matches!(inst.is_cluster_consistent(&[0, 1]), Err(Error::RequiresTwoLin)));
    }

    #[test]
    fn propagation_along_a_path() {
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(1)),
            Edge::new(1, 2, 1.0, Constraint::Shift(2)),
        ];
        let inst = UgInstance::new(3, 4, InstanceKind::TwoLin, edges).unwrap();
        let a = inst.propagate_assignment(&[(0, 0)], &[true, true]);
        assert_eq!(a.labels(), &[0, 1, 3]);
        let single = UgInstance::new(1, 4, InstanceKind::TwoLin, vec![]).unwrap();
        assert_eq!(single.propagate_assignment(&[(0, 2)], &[]).labels(), &[2]);
    }

    #[test]
    fn simple_cycle_split_of_figure_eight() {
        // two triangles sharing vertex 0: 0-1-2-0 and 0-3-4-0
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Shift(1)),
            Edge::new(1, 2, 1.0, Constraint::Shift(1)),
            Edge::new(2, 0, 1.0, Constraint::Shift(1)),
            Edge::new(0, 3, 1.0, Constraint::Shift(0)),
            Edge::new(3, 4, 1.0, Constraint::Shift(0)),
            Edge::new(4, 0, 1.0, Constraint::Shift(0)),
        ];
        let inst = UgInstance::new(5, 2, InstanceKind::TwoLin, edges).unwrap();
        let walk = ClosedWalk {
            start: 0,
            edges: vec![0, 1, 2, 3, 4, 5],
        };
        let parts = walk.simple_cycles(&inst);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].edges, vec![0, 1, 2]);
        assert_eq!(parts[1].edges, vec![3, 4, 5]);
        assert!(!inst.signature_of(&parts[0]).is_identity());
        assert!(inst.signature_of(&parts[1]).is_identity());
    }

    #[test]
    fn general_inconsistency_via_permutations() {
        // k=3, a 3-cycle of transpositions composing to a non-identity permutation
        let edges = vec![
            Edge::new(0, 1, 1.0, Constraint::Perm(vec![1, 0, 2])),
            Edge::new(1, 2, 1.0, Constraint::Perm(vec![0, 2, 1])),
            Edge::new(2, 0, 1.0, Constraint::Perm(vec![0, 1, 2])),
        ];
        let inst = UgInstance::new(3, 3, InstanceKind::General, edges).unwrap();
        assert!(inst.has_inconsistent_cycle(&[true, true, true]));
        assert!(!inst.has_inconsistent_cycle(&[true, true, false]));
    }
}
