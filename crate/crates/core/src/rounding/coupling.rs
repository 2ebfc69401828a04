//! Maximal coupling of the label distributions at the two ends of an edge.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::instance::{EdgeId, Label, Signature, UgInstance, VertexId};
use crate::lp::UgLpSolution;

/// Conditional law of the child label `l_v` given the parent label `l_u`
/// for one tree edge. Keeps `π(l_u)` with probability
/// `min(p_u(l), p_v(π l)) / p_u(l)`, otherwise draws from the excess
/// `max(0, p_v(m) - p_u(π⁻¹ m))`. The child marginal is `p_v` and the
/// mismatch probability is the total variation distance.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCoupling {
    perm: Signature,
    parent: Vec<f64>,
    keep: Vec<f64>,
    /// Normalized excess law; empty when the excess has no mass.
    excess: Vec<f64>,
}

impl EdgeCoupling {
    /// Couples `parent` pushed through `perm` with `child`. Negative
    /// entries (LP round-off) are treated as zero.
    pub fn new(parent: &[f64], child: &[f64], perm: Signature) -> Self {
        let k = parent.len();
        assert_eq!(child.len(), k, "distributions over the same alphabet");
        assert_eq!(perm.images().len(), k, "permutation over the same alphabet");
        let pu: Vec<f64> = parent.iter().map(|p| p.max(0.0)).collect();
        let pv: Vec<f64> = child.iter().map(|p| p.max(0.0)).collect();
        let keep = (0..k)
            .map(|l| {
                if pu[l] > 0.0 {
                    (pv[perm.apply(l)].min(pu[l]) / pu[l]).min(1.0)
                } else {
                    1.0
                }
            })
            .collect();
        let inv = perm.inverse();
        let mut excess: Vec<f64> = (0..k).map(|m| (pv[m] - pu[inv.apply(m)]).max(0.0)).collect();
        let total: f64 = excess.iter().sum();
        if total > 0.0 {
            excess.iter_mut().for_each(|e| *e /= total);
        } else {
            excess.clear();
        }
        EdgeCoupling {
            perm,
            parent: pu,
            keep,
            excess,
        }
    }

    /// Coupling for traversing edge `e` away from `from`.
    pub fn for_edge(inst: &UgInstance, lp: &UgLpSolution, e: EdgeId, from: VertexId) -> Self {
        let to = inst.edge(e).other(from);
        let perm = inst
            .walk_signature(from, &[e])
            .expect("edge is incident to its endpoint");
        EdgeCoupling::new(lp.x_row(from), lp.x_row(to), perm)
    }

    pub fn k(&self) -> usize {
        self.keep.len()
    }

    pub fn permutation(&self) -> &Signature {
        &self.perm
    }

    pub fn sample<R: Rng + ?Sized>(&self, parent_label: Label, rng: &mut R) -> Label {
        let kept = self.perm.apply(parent_label);
        let u: f64 = rng.gen();
        if u < self.keep[parent_label] || self.excess.is_empty() {
            return kept;
        }
        let mut t: f64 = rng.gen();
        for (m, &p) in self.excess.iter().enumerate() {
            if t < p {
                return m;
            }
            t -= p;
        }
        // round-off left the cumulative sum just short of 1
        self.excess
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(kept)
    }

    /// Exact law of the child label given `parent_label`.
    pub fn conditional(&self, parent_label: Label) -> Vec<f64> {
        let mut law = vec![0.0; self.k()];
        let keep = self.keep[parent_label];
        let kept = self.perm.apply(parent_label);
        if self.excess.is_empty() {
            law[kept] = 1.0;
            return law;
        }
        law[kept] += keep;
        for (m, &p) in self.excess.iter().enumerate() {
            law[m] += (1.0 - keep) * p;
        }
        law
    }

    /// Exact child marginal when the parent label follows the parent law.
    pub fn child_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.k()];
        for (l, &p) in self.parent.iter().enumerate() {
            for (m, q) in self.conditional(l).into_iter().enumerate() {
                out[m] += p * q;
            }
        }
        out
    }

    /// Exact `Pr[l_v != π(l_u)]`.
    pub fn mismatch_probability(&self) -> f64 {
        (0..self.k())
            .map(|l| {
                let kept = self.perm.apply(l);
                self.parent[l] * (1.0 - self.conditional(l)[kept])
            })
            .sum()
    }
}

/// Total variation distance between `parent ∘ π⁻¹` and `child`.
pub fn total_variation(parent: &[f64], child: &[f64], perm: &Signature) -> f64 {
    let inv = perm.inverse();
    0.5 * (0..child.len())
        .map(|m| (child[m] - parent[inv.apply(m)]).abs())
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn id2() -> Signature {
        Signature::identity(2)
    }

    #[test]
    fn identical_marginals_copy() {
        let perm = crate::instance::Constraint::Perm(vec![2, 0, 1]).to_signature(3);
        let pu = [0.2, 0.5, 0.3];
        // p_v(π l) = p_u(l)
        let mut pv = [0.0; 3];
        for l in 0..3 {
            pv[perm.apply(l)] = pu[l];
        }
        let c = EdgeCoupling::new(&pu, &pv, perm);
        assert_eq!(c.mismatch_probability(), 0.0);
        let mut rng = seed::rng(3);
        for l in 0..3 {
            for _ in 0..20 {
                assert_eq!(c.sample(l, &mut rng), c.permutation().apply(l));
            }
        }
    }

    #[test]
    fn disjoint_supports_always_mismatch() {
        let c = EdgeCoupling::new(&[1.0, 0.0], &[0.0, 1.0], id2());
        assert_eq!(c.mismatch_probability(), 1.0);
        assert_eq!(c.conditional(0), vec![0.0, 1.0]);
    }

    #[test]
    fn small_tv_example() {
        let pu = [0.6, 0.4];
        let pv = [0.5, 0.5];
        let c = EdgeCoupling::new(&pu, &pv, id2());
        assert!((c.mismatch_probability() - 0.1).abs() < 1e-12);
        assert!((total_variation(&pu, &pv, &id2()) - 0.1).abs() < 1e-12);
        let marginal = c.child_marginal();
        assert!((marginal[0] - 0.5).abs() < 1e-12 && (marginal[1] - 0.5).abs() < 1e-12);
    }
}
