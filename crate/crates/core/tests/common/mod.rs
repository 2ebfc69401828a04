#![allow(dead_code)]

use ugdecomp_core::gen::{generate, CostModel, Family, GenSpec, Generated};
use ugdecomp_core::{Constraint, Edge, InstanceKind, UgInstance};

/// Vertices a..f = 0..5. Edge ids: ab 0, ad 1, bc 2, bd 3, de 4, cf 5,
/// ec 6, be 7, ef 8. Every edge demands a label change (Min-Uncut).
pub fn six_vertex() -> UgInstance {
    six_vertex_with_costs([1.0; 9])
}

pub fn six_vertex_with_costs(costs: [f64; 9]) -> UgInstance {
    let pairs = [(0, 1), (0, 3), (1, 2), (1, 3), (3, 4), (2, 5), (4, 2), (1, 4), (4, 5)];
    let edges = pairs
        .iter()
        .zip(costs)
        .map(|(&(u, v), c)| Edge::new(u, v, c, Constraint::Shift(1)))
        .collect();
    UgInstance::new(6, 2, InstanceKind::TwoLin, edges).unwrap()
}

pub const SIX_VERTEX_INTEGRAL: [usize; 3] = [3, 6, 7];
pub const SIX_VERTEX_FRACTIONAL: [f64; 9] = [0.3, 0.3, 0.23, 0.4, 0.59, 0.12, 0.76, 0.01, 0.12];

pub fn odd_triangle() -> UgInstance {
    let edges = (0..3)
        .map(|i| Edge::new(i, (i + 1) % 3, 1.0, Constraint::Shift(1)))
        .collect();
    UgInstance::new(3, 2, InstanceKind::TwoLin, edges).unwrap()
}

pub fn planted(family: Family, k: usize, kind: InstanceKind, noise: f64, seed: u64) -> Generated {
    generate(&GenSpec {
        family,
        k,
        kind,
        noise,
        cost: CostModel::Unit,
        seed,
    })
    .unwrap()
}

pub fn grid(rows: usize, cols: usize) -> Family {
    Family::Grid { rows, cols }
}

pub fn torus(rows: usize, cols: usize) -> Family {
    Family::Torus { rows, cols }
}

/// A random instance: a path through all vertices plus `extra` random edges
/// (parallel edges allowed), integer costs in 1..=5.
pub fn random_instance(n: usize, k: usize, kind: InstanceKind, extra: usize, seed: u64) -> UgInstance {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
    while pairs.len() < n - 1 + extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            pairs.push((u, v));
        }
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let constraint = match kind {
                InstanceKind::TwoLin => Constraint::Shift(rng.gen_range(0..k)),
                InstanceKind::General => {
                    let mut p: Vec<usize> = (0..k).collect();
                    p.shuffle(&mut rng);
                    Constraint::Perm(p)
                }
            };
            Edge::new(u, v, rng.gen_range(1..=5) as f64, constraint)
        })
        .collect();
    UgInstance::new(n, k, kind, edges).unwrap()
}

/// Uniform random assignment.
pub fn random_assignment(n: usize, k: usize, seed: u64) -> ugdecomp_core::Assignment {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    ugdecomp_core::Assignment::new((0..n).map(|_| rng.gen_range(0..k)).collect())
}
