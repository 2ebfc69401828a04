//! Dijkstra over implicit adjacency, shared by the base graph, induced
//! subgraphs and the label-extended graph.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // BinaryHeap is a max-heap; invert so the smallest (dist, node) pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source distances plus a predecessor `(node, tag)` per reached node.
#[derive(Clone, Debug)]
pub(crate) struct ShortestPaths {
    pub dist: Vec<f64>,
    pub pred: Vec<Option<(usize, usize)>>,
}

impl ShortestPaths {
    /// Tags along the path from the source to `target`, in source order.
    pub fn path_tags(&self, target: usize) -> Vec<(usize, usize)> {
        let mut steps = Vec::new();
        let mut cur = target;
        while let Some((prev, tag)) = self.pred[cur] {
            steps.push((prev, tag));
            cur = prev;
        }
        steps.reverse();
        steps
    }
}

/// Dijkstra from `source`. `neighbors(node, emit)` must call
/// `emit(next, weight, tag)` for each outgoing arc. Nodes farther than
/// `limit` are left unreached. Equal-distance ties prefer the smaller
/// predecessor id.
pub(crate) fn dijkstra<F>(n: usize, source: usize, limit: f64, mut neighbors: F) -> ShortestPaths
where
    F: FnMut(usize, &mut dyn FnMut(usize, f64, usize)),
{
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        node: source,
    });
    while let Some(Entry { dist: d, node }) = heap.pop() {
        if done[node] || d > dist[node] {
            continue;
        }
        done[node] = true;
        neighbors(node, &mut |next, w, tag| {
            if done[next] {
                return;
            }
            let nd = d + w;
            if nd > limit {
                return;
            }
            let better = match nd.total_cmp(&dist[next]) {
                Ordering::Less => true,
                Ordering::Equal => pred[next].is_none_or(|(p, _)| node < p),
                Ordering::Greater => false,
            };
            if better {
                let improved = nd < dist[next];
                dist[next] = nd;
                pred[next] = Some((node, tag));
                if improved {
                    heap.push(Entry { dist: nd, node: next });
                }
            }
        });
    }
    // Unreached nodes beyond the limit keep infinite distance.
    for (i, d) in dist.iter_mut().enumerate() {
        if !done[i] {
            *d = f64::INFINITY;
            pred[i] = None;
        }
    }
    ShortestPaths { dist, pred }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_distances_and_tiebreak() {
        // 0 -1- 1 -1- 3, 0 -1- 2 -1- 3: both predecessors of 3 tie, 1 wins.
        let adj: Vec<Vec<(usize, f64)>> = vec![
            vec![(1, 1.0), (2, 1.0)],
            vec![(0, 1.0), (3, 1.0)],
            vec![(0, 1.0), (3, 1.0)],
            vec![(1, 1.0), (2, 1.0)],
        ];
        let sp = dijkstra(4, 0, f64::INFINITY, |v, emit| {
            for &(w, c) in &adj[v] {
                emit(w, c, v * 10 + w);
            }
        });
        assert_eq!(sp.dist, vec![0.0, 1.0, 1.0, 2.0]);
        assert_eq!(sp.pred[3], Some((1, 13)));
        assert_eq!(sp.path_tags(3), vec![(0, 1), (1, 13)]);
    }

    #[test]
    fn limit_cuts_off_far_nodes() {
        let sp = dijkstra(3, 0, 1.5, |v, emit| {
            if v + 1 < 3 {
                emit(v + 1, 1.0, v);
            }
        });
        assert_eq!(sp.dist[1], 1.0);
        assert!(sp.dist[2].is_infinite());
        assert!(sp.pred[2].is_none());
    }
}
