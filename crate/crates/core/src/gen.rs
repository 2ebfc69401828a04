//! Planted instances on grids, tori, cycles and complete bipartite graphs.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::{Assignment, Constraint, Edge, EdgeId, InstanceKind, UgInstance, VertexId};
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Grid { rows: usize, cols: usize },
    /// Grid with wrap-around edges in both directions.
    Torus { rows: usize, cols: usize },
    Cycle { n: usize },
    /// `K_{⌈n/2⌉, ⌊n/2⌋}`.
    CompleteBipartite { n: usize },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Grid { .. } => "grid",
            Family::Torus { .. } => "torus",
            Family::Cycle { .. } => "cycle",
            Family::CompleteBipartite { .. } => "complete_bipartite",
        }
    }

    pub fn vertex_count(&self) -> usize {
        match *self {
            Family::Grid { rows, cols } | Family::Torus { rows, cols } => rows * cols,
            Family::Cycle { n } | Family::CompleteBipartite { n } => n,
        }
    }

    /// Edge endpoints in generation order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        match *self {
            Family::Grid { rows, cols } => {
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        if c + 1 < cols {
                            out.push((v, v + 1));
                        }
                        if r + 1 < rows {
                            out.push((v, v + cols));
                        }
                    }
                }
            }
            Family::Torus { rows, cols } => {
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        out.push((v, r * cols + (c + 1) % cols));
                        out.push((v, ((r + 1) % rows) * cols + c));
                    }
                }
            }
            Family::Cycle { n } => out.extend((0..n).map(|i| (i, (i + 1) % n))),
            Family::CompleteBipartite { n } => {
                let left = n.div_ceil(2);
                for u in 0..left {
                    out.extend((left..n).map(|v| (u, v)));
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Family::Grid { rows, cols } | Family::Torus { rows, cols } => rows >= 2 && cols >= 2,
            Family::Cycle { n } => n >= 3,
            Family::CompleteBipartite { n } => n >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("family dimensions are too small"))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostModel {
    Unit,
    /// Integer costs drawn uniformly from `1..=10`.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub k: usize,
    pub kind: InstanceKind,
    /// Probability that an edge is corrupted.
    pub noise: f64,
    pub cost: CostModel,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub instance: UgInstance,
    pub planted: Assignment,
    /// Corrupted edges, ascending; exactly the edges `planted` violates.
    pub flipped: Vec<EdgeId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyMetadata {
    pub is_planar: bool,
    pub genus_upper: usize,
    /// Smallest `r` for which the family is `K_r`-minor free.
    pub r_suggestion: usize,
}

pub fn family_metadata(family: &Family) -> FamilyMetadata {
    match *family {
        Family::Grid { .. } => FamilyMetadata {
            is_planar: true,
            genus_upper: 0,
            r_suggestion: 5,
        },
        Family::Torus { .. } => FamilyMetadata {
            is_planar: false,
            genus_upper: 1,
            r_suggestion: 6,
        },
        Family::Cycle { .. } => FamilyMetadata {
            is_planar: true,
            genus_upper: 0,
            r_suggestion: 4,
        },
        Family::CompleteBipartite { n } => {
            let a = n / 2;
            let b = n.div_ceil(2);
            // Ringel: genus of K_{a,b} is ⌈(a-2)(b-2)/4⌉
            let genus = (a.saturating_sub(2) * b.saturating_sub(2)).div_ceil(4);
            FamilyMetadata {
                is_planar: a <= 2,
                genus_upper: genus,
                r_suggestion: a + 2,
            }
        }
    }
}

/// Plants a uniform random labeling, makes every edge agree with it, then
/// corrupts each edge independently with probability `noise`. A corrupted
/// 2Lin edge gets a uniform nonzero extra shift; a corrupted general edge
/// has its planted target swapped with a uniform other label.
pub fn generate(spec: &GenSpec) -> Result<Generated> {
    spec.family.validate()?;
    if spec.k == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if !(0.0..=1.0).contains(&spec.noise) {
        return Err(Error::InvalidParameter("noise must lie in [0, 1]"));
    }
    if spec.noise > 0.0 && spec.k < 2 {
        return Err(Error::InvalidParameter("noise needs at least two labels"));
    }
    let k = spec.k;
    let n = spec.family.vertex_count();
    let mut rng = seed::rng(spec.seed);
    let planted: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut edges = Vec::new();
    let mut flipped = Vec::new();
    for (id, (u, v)) in spec.family.edges().into_iter().enumerate() {
        let cost = match spec.cost {
            CostModel::Unit => 1.0,
            CostModel::Uniform => rng.gen_range(1..=10u32) as f64,
        };
        let (a, b) = (planted[u], planted[v]);
        let corrupt = rng.gen::<f64>() < spec.noise;
        let constraint = match spec.kind {
            InstanceKind::TwoLin => {
                let mut c = (b + k - a) % k;
                if corrupt {
                    c = (c + rng.gen_range(1..k)) % k;
                }
                Constraint::Shift(c)
            }
            InstanceKind::General => {
                let mut p: Vec<usize> = (0..k).collect();
                p.shuffle(&mut rng);
                let at = p.iter().position(|&x| x == b).expect("permutation");
                p.swap(a, at);
                if corrupt {
                    let mut other = rng.gen_range(0..k - 1);
                    if other >= b {
                        other += 1;
                    }
                    for img in p.iter_mut() {
                        if *img == b {
                            *img = other;
                        } else if *img == other {
                            *img = b;
                        }
                    }
                }
                Constraint::Perm(p)
            }
        };
        let satisfied = constraint.apply(a, k) == b;
        assert_eq!(satisfied, !corrupt, "corruption must flip the planted edge");
        if corrupt {
            flipped.push(id);
        }
        edges.push(Edge::new(u, v, cost, constraint));
    }
    let instance = UgInstance::new(n, k, spec.kind, edges)?;
    Ok(Generated {
        instance,
        planted: Assignment::new(planted),
        flipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, k: usize, kind: InstanceKind, noise: f64, seed: u64) -> GenSpec {
        GenSpec {
            family,
            k,
            kind,
            noise,
            cost: CostModel::Unit,
            seed,
        }
    }

    #[test]
    fn family_shapes() {
        assert_eq!(Family::Grid { rows: 4, cols: 4 }.edges().len(), 24);
        assert_eq!(Family::Torus { rows: 3, cols: 3 }.edges().len(), 18);
        assert_eq!(Family::Cycle { n: 5 }.edges().len(), 5);
        assert_eq!(Family::CompleteBipartite { n: 5 }.edges().len(), 6);
    }

    #[test]
    fn noiseless_is_satisfied() {
        for kind in [InstanceKind::TwoLin, InstanceKind::General] {
            let g = generate(&spec(Family::Torus { rows: 3, cols: 4 }, 5, kind, 0.0, 1)).unwrap();
            assert!(g.flipped.is_empty());
            assert_eq!(g.instance.unsat_cost(&g.planted), 0.0);
        }
    }

    #[test]
    fn full_noise_violates_everything() {
        for kind in [InstanceKind::TwoLin, InstanceKind::General] {
            let g = generate(&spec(Family::Grid { rows: 3, cols: 3 }, 3, kind, 1.0, 2)).unwrap();
            assert_eq!(g.instance.unsat_cost(&g.planted), 12.0);
            assert_eq!(g.flipped.len(), 12);
        }
    }

    #[test]
    fn flip_log_matches_violations() {
        let g = generate(&spec(Family::Grid { rows: 4, cols: 4 }, 2, InstanceKind::TwoLin, 0.1, 7)).unwrap();
        let eval = g.instance.evaluate(&g.planted).unwrap();
        assert_eq!(eval.violated, g.flipped);
        assert_eq!(eval.unsat_cost, g.flipped.len() as f64);
    }

    #[test]
    fn deterministic_per_seed() {
        let s = GenSpec {
            cost: CostModel::Uniform,
            ..spec(Family::Torus { rows: 3, cols: 3 }, 4, InstanceKind::General, 0.3, 9)
        };
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
        let costs = generate(&s).unwrap().instance.costs();
        assert!(costs.iter().all(|&c| (1.0..=10.0).contains(&c) && c.fract() == 0.0));
    }

    #[test]
    fn metadata() {
        assert!(family_metadata(&Family::Grid { rows: 2, cols: 2 }).is_planar);
        assert_eq!(family_metadata(&Family::Torus { rows: 3, cols: 3 }).genus_upper, 1);
        assert!(family_metadata(&Family::Cycle { n: 3 }).is_planar);
        assert!(!family_metadata(&Family::CompleteBipartite { n: 6 }).is_planar);
        assert_eq!(family_metadata(&Family::CompleteBipartite { n: 6 }).genus_upper, 1);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate(&spec(Family::Grid { rows: 1, cols: 4 }, 2, InstanceKind::TwoLin, 0.0, 0)).is_err());
        assert!(generate(&spec(Family::Cycle { n: 4 }, 2, InstanceKind::TwoLin, 1.5, 0)).is_err());
        assert!(generate(&spec(Family::Cycle { n: 4 }, 1, InstanceKind::TwoLin, 0.5, 0)).is_err());
    }
}
