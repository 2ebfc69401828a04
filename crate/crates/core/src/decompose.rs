//! Randomized low-diameter partitions of an edge-weighted graph, with
//! diameter checks and cut-rate measurement.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{EdgeId, UgInstance, VertexId};
use crate::paths::{self, ShortestPaths};
use crate::seed;

/// Slack allowed when comparing distances against a diameter bound.
pub const DIAMETER_SLACK: f64 = 1e-9;

/// An undirected multigraph with non-negative edge weights. Inactive
/// edges are kept for id stability but ignored by every algorithm.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    ends: Vec<(VertexId, VertexId)>,
    weights: Vec<f64>,
    active: Vec<bool>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
}

impl WeightedGraph {
    pub fn new(n: usize, ends: Vec<(VertexId, VertexId)>, weights: Vec<f64>) -> Result<Self> {
        if ends.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: ends.len(),
                got: weights.len(),
            });
        }
        let mut adj = vec![Vec::new(); n];
        for (id, (&(u, v), &w)) in ends.iter().zip(&weights).enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidWeight { edge: id });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { edge: id, vertex: x });
                }
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let active = vec![true; ends.len()];
        Ok(WeightedGraph {
            n,
            ends,
            weights,
            active,
            adj,
        })
    }

    /// The constraint graph of `inst` with the given per-edge weights.
    pub fn from_instance(inst: &UgInstance, weights: Vec<f64>) -> Result<Self> {
        let ends = inst.edges().iter().map(|e| (e.u, e.v)).collect();
        WeightedGraph::new(inst.n(), ends, weights)
    }

    /// Deactivates every edge whose mask entry is `false`.
    pub fn with_active(mut self, active: Vec<bool>) -> Result<Self> {
        if active.len() != self.ends.len() {
            return Err(Error::LengthMismatch {
                expected: self.ends.len(),
                got: active.len(),
            });
        }
        self.active = active;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.ends[e]
    }

    pub fn weight(&self, e: EdgeId) -> f64 {
        self.weights[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_active(&self, e: EdgeId) -> bool {
        self.active[e]
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    /// Active `(neighbor, edge)` pairs of `v`, ascending by neighbor.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.adj[v].iter().copied().filter(|&(_, e)| self.active[e])
    }

    /// Dijkstra from `source` over active edges, optionally confined to
    /// the vertices flagged in `members`, ignoring anything beyond `limit`.
    pub(crate) fn shortest_paths_within(
        &self,
        source: VertexId,
        members: Option<&[bool]>,
        limit: f64,
    ) -> ShortestPaths {
        paths::dijkstra(self.n, source, limit, |v, emit| {
            for (w, e) in self.neighbors(v) {
                if members.is_none_or(|m| m[w]) {
                    emit(w, self.weights[e], e);
                }
            }
        })
    }

    /// Distances from `source` over active edges in the whole graph.
    pub fn distances(&self, source: VertexId) -> Vec<f64> {
        self.shortest_paths_within(source, None, f64::INFINITY).dist
    }

    /// Distances from `source` inside the subgraph induced by `members`.
    pub fn distances_within(&self, source: VertexId, members: &[bool]) -> Vec<f64> {
        self.shortest_paths_within(source, Some(members), f64::INFINITY)
            .dist
    }

    /// Connected components over active edges, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let all = vec![true; self.n];
        let verts: Vec<VertexId> = (0..self.n).collect();
        self.split_components(&verts, &all, |_, _| true)
    }

    /// Components of the subgraph induced by `verts` (flagged in `member`)
    /// using only active edges accepted by `keep`.
    fn split_components<F>(&self, verts: &[VertexId], member: &[bool], keep: F) -> Vec<Vec<VertexId>>
    where
        F: Fn(VertexId, VertexId) -> bool,
    {
        let mut seen = vec![false; self.n];
        let mut sorted = verts.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &s in &sorted {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for (w, _) in self.neighbors(v) {
                    if member[w] && !seen[w] && keep(v, w) {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Largest finite shortest-path distance between two vertices.
    pub fn weighted_diameter(&self) -> f64 {
        (0..self.n)
            .flat_map(|s| self.distances(s))
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }
}

/// Which randomized partitioning scheme to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Sequential ball carving with truncated-exponential radii.
    BallCarve,
    /// Iterated distance-band chopping with `r - 1` rounds.
    Kpr { r: usize },
}

impl Scheme {
    pub fn partition(&self, g: &WeightedGraph, delta: f64, seed: u64) -> Result<Partition> {
        match *self {
            Scheme::BallCarve => ball_carve(g, delta, seed),
            Scheme::Kpr { r } => kpr_partition(g, delta, r, seed),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::BallCarve => "ball",
            Scheme::Kpr { .. } => "kpr",
        }
    }
}

/// A disjoint cover of the vertex set by nonempty clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    cluster_of: Vec<usize>,
    clusters: Vec<Vec<VertexId>>,
    delta: f64,
    scheme: Option<Scheme>,
}

impl Partition {
    /// Validates and canonicalizes `clusters`: members sorted, clusters
    /// ordered by smallest member.
    pub fn from_clusters(
        n: usize,
        mut clusters: Vec<Vec<VertexId>>,
        delta: f64,
        scheme: Option<Scheme>,
    ) -> Result<Self> {
        clusters.retain(|c| !c.is_empty());
        for c in &mut clusters {
            c.sort_unstable();
        }
        clusters.sort_unstable_by_key(|c| c[0]);
        let mut cluster_of = vec![usize::MAX; n];
        for (id, c) in clusters.iter().enumerate() {
            for &v in c {
                if v >= n || cluster_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition { vertex: v });
                }
                cluster_of[v] = id;
            }
        }
        if let Some(vertex) = cluster_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition { vertex });
        }
        Ok(Partition {
            cluster_of,
            clusters,
            delta,
            scheme,
        })
    }

    /// Builds a partition from a cluster id per vertex.
    pub fn from_assignment(cluster_of: &[usize], delta: f64, scheme: Option<Scheme>) -> Result<Self> {
        let count = cluster_of.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut clusters = vec![Vec::new(); count];
        for (v, &c) in cluster_of.iter().enumerate() {
            clusters[c].push(v);
        }
        Partition::from_clusters(cluster_of.len(), clusters, delta, scheme)
    }

    pub fn singletons(n: usize) -> Self {
        Partition::from_clusters(n, (0..n).map(|v| vec![v]).collect(), 0.0, None)
            .expect("singletons cover")
    }

    pub fn cluster_of(&self, v: VertexId) -> usize {
        self.cluster_of[v]
    }

    pub fn cluster_ids(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn clusters(&self) -> &[Vec<VertexId>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn scheme(&self) -> Option<Scheme> {
        self.scheme
    }

    pub fn same_cluster(&self, u: VertexId, v: VertexId) -> bool {
        self.cluster_of[u] == self.cluster_of[v]
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter("delta must be positive and finite"))
    }
}

/// Radius with density proportional to `exp(-t / beta)` on `[0, cap]`.
fn truncated_exponential<R: Rng>(rng: &mut R, beta: f64, cap: f64) -> f64 {
    let u: f64 = rng.gen();
    let tail = -libm::expm1(-cap / beta);
    let rho = -beta * libm::log1p(-u * tail);
    rho.min(cap)
}

/// Repeatedly carves a ball around the smallest unassigned vertex. Radii
/// are truncated exponentials with scale `delta / 8` capped at `delta / 2`,
/// and distances are measured among unassigned vertices only, so every
/// cluster has strong diameter at most `delta`.
pub fn ball_carve(g: &WeightedGraph, delta: f64, seed: u64) -> Result<Partition> {
    check_delta(delta)?;
    let mut rng = seed::rng(seed);
    let mut free = vec![true; g.n];
    let mut clusters = Vec::new();
    for center in 0..g.n {
        if !free[center] {
            continue;
        }
        let rho = truncated_exponential(&mut rng, delta / 8.0, delta / 2.0);
        let sp = g.shortest_paths_within(center, Some(&free), rho);
        let ball: Vec<VertexId> = (0..g.n).filter(|&v| sp.dist[v].is_finite()).collect();
        for &v in &ball {
            free[v] = false;
        }
        clusters.push(ball);
    }
    Partition::from_clusters(g.n, clusters, delta, Some(Scheme::BallCarve))
}

/// Chops every piece into distance bands of width `delta / (2(r - 1))`
/// around a random root with a random offset, `r - 1` times, splitting
/// bands into connected components after each round. The weak diameter
/// is not certified.
pub fn kpr_partition(g: &WeightedGraph, delta: f64, r: usize, seed: u64) -> Result<Partition> {
    check_delta(delta)?;
    if r < 2 {
        return Err(Error::InvalidParameter("r must be at least 2"));
    }
    let width = delta / (2.0 * (r - 1) as f64);
    let mut rng = seed::rng(seed);
    let mut pieces = g.components();
    let mut member = vec![false; g.n];
    let mut band = vec![0u64; g.n];
    for _ in 1..r {
        let mut next = Vec::with_capacity(pieces.len());
        for piece in &pieces {
            if piece.len() == 1 {
                next.push(piece.clone());
                continue;
            }
            let root = piece[rng.gen_range(0..piece.len())];
            let offset = rng.gen_range(0.0..width);
            for &v in piece {
                member[v] = true;
            }
            let dist = g.distances_within(root, &member);
            for &v in piece {
                band[v] = libm::floor((dist[v] + offset) / width) as u64;
            }
            next.extend(g.split_components(piece, &member, |a, b| band[a] == band[b]));
            for &v in piece {
                member[v] = false;
            }
        }
        pieces = next;
    }
    Partition::from_clusters(g.n, pieces, delta, Some(Scheme::Kpr { r }))
}

/// Active edges whose endpoints lie in different clusters.
pub fn inter_cluster_edges(g: &WeightedGraph, p: &Partition) -> Vec<EdgeId> {
    (0..g.num_edges())
        .filter(|&e| {
            let (u, v) = g.ends[e];
            g.active[e] && !p.same_cluster(u, v)
        })
        .collect()
}

/// Outcome of a diameter check: `worst` is the farthest intra-cluster pair
/// and its distance (infinite when disconnected).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiameterReport {
    pub ok: bool,
    pub worst: Option<(VertexId, VertexId, f64)>,
}

impl DiameterReport {
    pub fn max_distance(&self) -> f64 {
        self.worst.map_or(0.0, |(_, _, d)| d)
    }
}

fn diameter_check(g: &WeightedGraph, p: &Partition, delta: f64, strong: bool) -> DiameterReport {
    let mut worst: Option<(VertexId, VertexId, f64)> = None;
    let mut member = vec![false; g.n];
    for cluster in p.clusters() {
        if cluster.len() < 2 {
            continue;
        }
        for &v in cluster {
            member[v] = true;
        }
        for &s in cluster {
            let dist = if strong {
                g.distances_within(s, &member)
            } else {
                g.distances(s)
            };
            for &t in cluster {
                if t > s && worst.is_none_or(|(_, _, d)| dist[t] > d) {
                    worst = Some((s, t, dist[t]));
                }
            }
        }
        for &v in cluster {
            member[v] = false;
        }
    }
    let ok = worst.is_none_or(|(_, _, d)| d <= delta + DIAMETER_SLACK);
    DiameterReport { ok, worst }
}

/// Checks every intra-cluster pair against `delta` using whole-graph distances.
pub fn check_weak_diameter(g: &WeightedGraph, p: &Partition, delta: f64) -> DiameterReport {
    diameter_check(g, p, delta, false)
}

/// Checks every intra-cluster pair against `delta` using distances inside
/// the cluster's induced subgraph.
pub fn check_strong_diameter(g: &WeightedGraph, p: &Partition, delta: f64) -> DiameterReport {
    diameter_check(g, p, delta, true)
}

/// Empirical per-edge cut rates of a scheme.
#[derive(Clone, Debug, PartialEq)]
pub struct CutStatistics {
    pub samples: usize,
    /// Fraction of samples separating each edge's endpoints.
    pub cut_rate: Vec<f64>,
    /// `max_e rate_e * delta / w_e` over active edges of positive weight;
    /// infinite if a zero-weight edge was ever cut.
    pub fitted_constant: f64,
}

/// Samples `samples` partitions (seeds derived from `seed`) and fits the
/// separating constant `C` in `Pr[e cut] <= C * w_e / delta`.
pub fn cut_statistics(
    g: &WeightedGraph,
    scheme: Scheme,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<CutStatistics> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive"));
    }
    let mut cuts = vec![0usize; g.num_edges()];
    for i in 0..samples {
        let p = scheme.partition(g, delta, seed::derive(seed, i as u64))?;
        for e in inter_cluster_edges(g, &p) {
            cuts[e] += 1;
        }
    }
    let cut_rate: Vec<f64> = cuts.iter().map(|&c| c as f64 / samples as f64).collect();
    let mut fitted_constant: f64 = 0.0;
    for (e, &rate) in cut_rate.iter().enumerate() {
        if !g.active[e] || rate == 0.0 {
            continue;
        }
        let w = g.weights[e];
        let c = if w > 0.0 { rate * delta / w } else { f64::INFINITY };
        fitted_constant = fitted_constant.max(c);
    }
    Ok(CutStatistics {
        samples,
        cut_rate,
        fitted_constant,
    })
}
