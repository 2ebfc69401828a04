//! Decomposition plus tree propagation with correlated sampling for
//! general Unique Games.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::coupling::EdgeCoupling;
use crate::decompose::{inter_cluster_edges, Partition, Scheme, WeightedGraph};
use crate::error::{Error, Result};
use crate::instance::{Assignment, EdgeId, Label, UgInstance, VertexId};
use crate::lp::UgLpSolution;
use crate::seed;

/// Smallest decomposition diameter used when the LP value is zero.
pub const DELTA_FLOOR: f64 = 1e-9;
/// Slack when checking the LP solution handed to the rounding.
pub const FEASIBILITY_SLACK: f64 = 1e-6;

/// One shortest-path tree per cluster, built from intra-cluster edges.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPathForest {
    roots: Vec<VertexId>,
    root_of: Vec<VertexId>,
    parent: Vec<Option<(VertexId, EdgeId)>>,
    /// Vertices with every parent listed before its children.
    order: Vec<VertexId>,
}

impl ShortestPathForest {
    /// In each cluster the root minimizes the eccentricity under `g`'s
    /// weights inside the induced subgraph (ties to the smaller id), and
    /// equal-length paths prefer the smaller parent. Vertices the root
    /// cannot reach start trees of their own.
    pub fn build(g: &WeightedGraph, p: &Partition) -> Self {
        let n = g.n();
        let mut roots = Vec::new();
        let mut root_of = vec![usize::MAX; n];
        let mut parent = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut member = vec![false; n];
        for cluster in p.clusters() {
            for &v in cluster {
                member[v] = true;
            }
            let mut pending: Vec<VertexId> = cluster.clone();
            while !pending.is_empty() {
                let root = pending
                    .iter()
                    .copied()
                    .map(|s| {
                        let dist = g.distances_within(s, &member);
                        let ecc = pending.iter().map(|&t| dist[t]).fold(0.0, f64::max);
                        (ecc, s)
                    })
                    .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
                    .map(|(_, s)| s)
                    .expect("pending is nonempty");
                let sp = g.shortest_paths_within(root, Some(&member), f64::INFINITY);
                let reached: Vec<VertexId> = pending
                    .iter()
                    .copied()
                    .filter(|&v| sp.dist[v].is_finite())
                    .collect();
                let mut children = vec![Vec::new(); n];
                for &v in &reached {
                    root_of[v] = root;
                    if v != root {
                        let (par, e) = sp.pred[v].expect("reached vertex has a predecessor");
                        parent[v] = Some((par, e));
                        children[par].push(v);
                    }
                }
                roots.push(root);
                let start = order.len();
                order.push(root);
                let mut i = start;
                while i < order.len() {
                    let v = order[i];
                    order.extend(children[v].iter().copied());
                    i += 1;
                }
                for &v in &reached {
                    member[v] = false;
                }
                pending.retain(|&v| sp.dist[v].is_infinite());
            }
        }
        ShortestPathForest {
            roots,
            root_of,
            parent,
            order,
        }
    }

    pub fn roots(&self) -> &[VertexId] {
        &self.roots
    }

    pub fn root_of(&self, v: VertexId) -> VertexId {
        self.root_of[v]
    }

    pub fn parent(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.parent[v]
    }

    /// Tree edges, by child vertex order.
    pub fn tree_edges(&self) -> Vec<EdgeId> {
        self.order
            .iter()
            .filter_map(|&v| self.parent[v].map(|(_, e)| e))
            .collect()
    }

    /// Vertices in an order where parents precede children.
    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn same_tree(&self, u: VertexId, v: VertexId) -> bool {
        self.root_of[u] == self.root_of[v]
    }

    /// Tree edges on the path between `u` and `v`.
    pub fn path_edges(&self, u: VertexId, v: VertexId) -> Result<Vec<EdgeId>> {
        if !self.same_tree(u, v) {
            return Err(Error::DifferentClusters { u, v });
        }
        let chain = |mut x: VertexId| {
            let mut out = vec![(x, None)];
            while let Some((p, e)) = self.parent[x] {
                out.last_mut().expect("nonempty").1 = Some(e);
                out.push((p, None));
                x = p;
            }
            out
        };
        let cu = chain(u);
        let cv = chain(v);
        // strip the common suffix up to the lowest common ancestor
        let mut iu = cu.len();
        let mut iv = cv.len();
        while iu > 0 && iv > 0 && cu[iu - 1].0 == cv[iv - 1].0 {
            iu -= 1;
            iv -= 1;
        }
        let mut edges: Vec<EdgeId> = cu[..iu].iter().filter_map(|&(_, e)| e).collect();
        edges.extend(cv[..iv].iter().rev().filter_map(|&(_, e)| e));
        Ok(edges)
    }
}

/// Forest plus one coupling per tree edge; sampling it is one propagation run.
#[derive(Clone, Debug)]
pub struct PropagationPlan {
    forest: ShortestPathForest,
    root_law: Vec<(VertexId, Vec<f64>)>,
    couplings: Vec<Option<EdgeCoupling>>,
    lengths: Vec<f64>,
}

impl PropagationPlan {
    pub fn new(inst: &UgInstance, lp: &UgLpSolution, g: &WeightedGraph, p: &Partition) -> Self {
        let forest = ShortestPathForest::build(g, p);
        let root_law = forest
            .roots
            .iter()
            .map(|&r| (r, lp.x_row(r).iter().map(|x| x.max(0.0)).collect()))
            .collect();
        let couplings = (0..inst.n())
            .map(|v| {
                forest
                    .parent(v)
                    .map(|(par, e)| EdgeCoupling::for_edge(inst, lp, e, par))
            })
            .collect();
        PropagationPlan {
            forest,
            root_law,
            couplings,
            lengths: lp.edge_lengths(),
        }
    }

    pub fn forest(&self) -> &ShortestPathForest {
        &self.forest
    }

    /// Coupling on the tree edge into `v`, if `v` is not a root.
    pub fn coupling(&self, v: VertexId) -> Option<&EdgeCoupling> {
        self.couplings[v].as_ref()
    }

    /// Samples every root from its `x` row, then every child through the
    /// coupling on its tree edge.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Assignment {
        let n = self.couplings.len();
        let mut labels: Vec<Label> = vec![0; n];
        let mut roots = self.root_law.iter();
        for &v in &self.forest.order {
            labels[v] = match (&self.couplings[v], self.forest.parent(v)) {
                (Some(c), Some((par, _))) => c.sample(labels[par], rng),
                _ => {
                    let (r, law) = roots.next().expect("roots appear in order");
                    debug_assert_eq!(*r, v);
                    sample_law(law, rng)
                }
            };
        }
        Assignment::new(labels)
    }

    /// `len(e) + 2 * (tree path length between e's endpoints)`, where
    /// `len(e) = Σ_l d(e, l)`; bounds `Pr[e violated]` for an edge inside
    /// a tree.
    pub fn violation_bound(&self, inst: &UgInstance, e: EdgeId) -> Result<f64> {
        let edge = inst.edge(e);
        let tree = self.tree_distance(edge.u, edge.v)?;
        Ok(self.lengths[e] + 2.0 * tree)
    }

    /// Sum of edge lengths along the tree path; 0 when `u == v`.
    pub fn tree_distance(&self, u: VertexId, v: VertexId) -> Result<f64> {
        Ok(self
            .forest
            .path_edges(u, v)?
            .iter()
            .map(|&e| self.lengths[e])
            .sum())
    }
}

/// `d_G(u, v) + 2 d_T(u, v)` for edge `e` under `plan`'s forest.
pub fn propagation_violation_bound(inst: &UgInstance, plan: &PropagationPlan, e: EdgeId) -> Result<f64> {
    plan.violation_bound(inst, e)
}

fn sample_law<R: Rng + ?Sized>(law: &[f64], rng: &mut R) -> Label {
    let total: f64 = law.iter().sum();
    let mut t = rng.gen::<f64>() * total;
    for (l, &p) in law.iter().enumerate() {
        if t < p {
            return l;
        }
        t -= p;
    }
    law.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UgRoundOptions {
    pub scheme: Scheme,
    /// Multiplier `r` in `Δ = r * sqrt(LP / Σ c)`.
    pub r: f64,
    /// Overrides the computed `Δ` when set.
    pub delta: Option<f64>,
    pub seed: u64,
    pub repeats: usize,
}

impl Default for UgRoundOptions {
    fn default() -> Self {
        UgRoundOptions {
            scheme: Scheme::BallCarve,
            r: 5.0,
            delta: None,
            seed: 0,
            repeats: 20,
        }
    }
}

#[derive(Clone, Debug)]
pub struct UgRoundResult {
    pub assignment: Assignment,
    pub unsat_cost: f64,
    pub cut_edges: Vec<EdgeId>,
    pub delta_used: f64,
    pub partition: Partition,
    pub plan: PropagationPlan,
    /// Index of the winning repeat.
    pub repeat: usize,
}

impl UgRoundResult {
    pub fn forest(&self) -> &ShortestPathForest {
        self.plan.forest()
    }
}

/// `Δ = r * sqrt(LP / Σ c)` clamped to `[DELTA_FLOOR, diameter]`.
pub fn ug_delta(lp_value: f64, total_cost: f64, r: f64, diameter: f64) -> f64 {
    let raw = r * libm::sqrt((lp_value / total_cost).max(0.0));
    raw.min(diameter).max(DELTA_FLOOR)
}

/// Best of `repeats` runs of: partition the graph with edge lengths
/// `Σ_l d(e, l)`, then propagate labels down a shortest-path tree per
/// cluster. Repeat `i` uses a seed derived from `(seed, i)` only.
pub fn round_ug(inst: &UgInstance, lp: &UgLpSolution, opts: &UgRoundOptions) -> Result<UgRoundResult> {
    let total = inst.total_cost();
    if total <= 0.0 {
        return Err(Error::DegenerateInstance);
    }
    if opts.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be positive"));
    }
    if lp.n() != inst.n() || lp.num_edges() != inst.num_edges() || lp.k() != inst.k() {
        return Err(Error::LengthMismatch {
            expected: inst.k() * (inst.n() + inst.num_edges()),
            got: lp.k() * (lp.n() + lp.num_edges()),
        });
    }
    lp.validate(inst, FEASIBILITY_SLACK)?;
    let lengths: Vec<f64> = lp.edge_lengths().into_iter().map(|w| w.max(0.0)).collect();
    let g = WeightedGraph::from_instance(inst, lengths)?;
    let delta = match opts.delta {
        Some(d) => d,
        None => ug_delta(lp.objective, total, opts.r, g.weighted_diameter()),
    };

    let mut best: Option<UgRoundResult> = None;
    for i in 0..opts.repeats {
        let s = seed::derive(opts.seed, i as u64);
        let partition = opts.scheme.partition(&g, delta, seed::derive(s, 0))?;
        let plan = PropagationPlan::new(inst, lp, &g, &partition);
        let assignment = plan.sample(&mut seed::rng(seed::derive(s, 1)));
        let unsat_cost = inst.unsat_cost(&assignment);
        if best.as_ref().is_none_or(|b| unsat_cost < b.unsat_cost) {
            best = Some(UgRoundResult {
                assignment,
                unsat_cost,
                cut_edges: inter_cluster_edges(&g, &partition),
                delta_used: delta,
                partition,
                plan,
                repeat: i,
            });
        }
    }
    Ok(best.expect("at least one repeat"))
}
