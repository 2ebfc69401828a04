//! The label-based LP relaxation for general Unique Games, solved by
//! cutting planes over walks in the label-extended graph.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::simplex::{lp_optimize, RestrictedLp, Row, Sense};
use super::DEFAULT_TOL;
use crate::error::{Error, PartialSolution, Result};
use crate::instance::{Assignment, EdgeId, Label, UgInstance, VertexId};

/// Largest `k * (n + |E|)` accepted by [`solve_ug_lp`].
pub const UG_VARIABLE_CAP: usize = 4000;

/// A lifted-walk row `Σ d(e, l) >= x(vertex, label)`. Each term names the
/// label at the edge's stored tail.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UgCut {
    pub vertex: VertexId,
    pub label: Label,
    pub terms: Vec<(EdgeId, Label)>,
}

impl UgCut {
    pub fn lhs(&self, sol: &UgLpSolution) -> f64 {
        self.terms.iter().map(|&(e, l)| sol.d(e, l)).sum()
    }

    pub fn violation(&self, sol: &UgLpSolution) -> f64 {
        (sol.x(self.vertex, self.label) - self.lhs(sol)).max(0.0)
    }
}

/// Values of `x(u, l)` and `d(e, l)`; `d` is indexed by the label at the
/// edge's stored tail `u`, so `d(e, l)` pairs `x(u, l)` with `x(v, π(l))`.
#[derive(Clone, Debug, PartialEq)]
pub struct UgLpSolution {
    n: usize,
    m: usize,
    k: usize,
    x: Vec<f64>,
    d: Vec<f64>,
    pub objective: f64,
    pub feasible: bool,
    pub cuts_added: usize,
    pub rounds: usize,
    pub history: Vec<f64>,
    pub cuts: Vec<UgCut>,
}

impl UgLpSolution {
    /// Wraps supplied values; `x` is `n * k` row-major by vertex, `d` is
    /// `|E| * k` row-major by edge.
    pub fn from_values(inst: &UgInstance, x: Vec<f64>, d: Vec<f64>, tol: f64) -> Result<Self> {
        let (n, m, k) = (inst.n(), inst.num_edges(), inst.k());
        for (len, expected) in [(x.len(), n * k), (d.len(), m * k)] {
            if len != expected {
                return Err(Error::LengthMismatch { expected, got: len });
            }
        }
        if x.iter().chain(&d).any(|v| !v.is_finite()) {
            return Err(Error::InfeasibleSolution("values must be finite"));
        }
        let mut sol = UgLpSolution {
            n,
            m,
            k,
            x,
            d,
            objective: 0.0,
            feasible: false,
            cuts_added: 0,
            rounds: 0,
            history: Vec::new(),
            cuts: Vec::new(),
        };
        sol.objective = sol.objective_for(inst);
        sol.feasible = sol.validate(inst, tol).is_ok();
        Ok(sol)
    }

    /// The integral point of an assignment: indicator `x`, `d = |x - x∘π|`.
    pub fn from_assignment(inst: &UgInstance, a: &Assignment) -> Result<Self> {
        inst.check_assignment(a)?;
        let k = inst.k();
        let mut x = vec![0.0f64; inst.n() * k];
        for (v, &l) in a.labels().iter().enumerate() {
            x[v * k + l] = 1.0;
        }
        let mut d = vec![0.0; inst.num_edges() * k];
        for (id, e) in inst.edges().iter().enumerate() {
            for l in 0..k {
                let image = e.constraint.apply(l, k);
                d[id * k + l] = (x[e.u * k + l] - x[e.v * k + image]).abs();
            }
        }
        UgLpSolution::from_values(inst, x, d, DEFAULT_TOL)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x(&self, v: VertexId, l: Label) -> f64 {
        self.x[v * self.k + l]
    }

    pub fn d(&self, e: EdgeId, l: Label) -> f64 {
        self.d[e * self.k + l]
    }

    /// The label distribution `x(v, ·)`.
    pub fn x_row(&self, v: VertexId) -> &[f64] {
        &self.x[v * self.k..(v + 1) * self.k]
    }

    pub fn d_row(&self, e: EdgeId) -> &[f64] {
        &self.d[e * self.k..(e + 1) * self.k]
    }

    pub fn x_values(&self) -> &[f64] {
        &self.x
    }

    pub fn d_values(&self) -> &[f64] {
        &self.d
    }

    /// Edge length `Σ_l d(e, l)` used by the rounding.
    pub fn edge_length(&self, e: EdgeId) -> f64 {
        self.d_row(e).iter().sum()
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.m).map(|e| self.edge_length(e)).collect()
    }

    fn objective_for(&self, inst: &UgInstance) -> f64 {
        inst.edges()
            .iter()
            .enumerate()
            .map(|(id, e)| e.cost / 2.0 * self.edge_length(id))
            .sum()
    }

    /// Checks the label sums, the absolute-value linearizations, the
    /// bounds and the lifted-walk rows, all within `tol`.
    pub fn validate(&self, inst: &UgInstance, tol: f64) -> Result<()> {
        let k = self.k;
        if self.x.iter().chain(&self.d).any(|&v| v < -tol) {
            return Err(Error::InfeasibleSolution("negative value"));
        }
        for v in 0..self.n {
            let s: f64 = self.x_row(v).iter().sum();
            if (s - 1.0).abs() > tol {
                return Err(Error::InfeasibleSolution("label distribution does not sum to 1"));
            }
        }
        for (id, e) in inst.edges().iter().enumerate() {
            for l in 0..k {
                let gap = (self.x(e.u, l) - self.x(e.v, e.constraint.apply(l, k))).abs();
                if self.d(id, l) < gap - tol {
                    return Err(Error::InfeasibleSolution("d below |x(u,l) - x(v,π(l))|"));
                }
            }
        }
        if separate_ug(inst, self, tol)?.is_some() {
            return Err(Error::InfeasibleSolution("violated lifted-walk row"));
        }
        Ok(())
    }
}

/// For each vertex, the most violated lifted-walk row: a shortest walk
/// from `(u, l0)` to some `(u, l' != l0)` under arc weights `d` shorter
/// than `x(u, l0) - tol`. Sorted by decreasing violation.
pub fn violated_ug_cuts(inst: &UgInstance, sol: &UgLpSolution, tol: f64) -> Result<Vec<UgCut>> {
    let (n, k) = (inst.n(), inst.k());
    if sol.n != n || sol.m != inst.num_edges() || sol.k != k {
        return Err(Error::LengthMismatch {
            expected: n * k + inst.num_edges() * k,
            got: sol.x.len() + sol.d.len(),
        });
    }
    if k < 2 {
        return Ok(Vec::new());
    }
    let lifted = inst.label_extended(|e, l| sol.d(e, l));
    let mut out: Vec<(f64, UgCut)> = Vec::new();
    for u in 0..n {
        let mut best: Option<(f64, UgCut)> = None;
        for l0 in 0..k {
            let xv = sol.x(u, l0);
            if xv <= tol {
                continue;
            }
            let sp = lifted.shortest_paths(lifted.node(u, l0));
            let target = (0..k)
                .filter(|&l| l != l0)
                .map(|l| lifted.node(u, l))
                .min_by(|&a, &b| sp.dist[a].total_cmp(&sp.dist[b]))
                .expect("k >= 2");
            let violation = xv - sp.dist[target];
            if violation <= tol || best.as_ref().is_some_and(|(b, _)| violation <= *b) {
                continue;
            }
            let mut terms: Vec<(EdgeId, Label)> = sp
                .path_tags(target)
                .into_iter()
                .map(|(prev, e)| {
                    let (w, a) = lifted.split(prev);
                    let edge = inst.edge(e);
                    let tail_label = if w == edge.u { a } else { edge.constraint.apply_inverse(a, k) };
                    (e, tail_label)
                })
                .collect();
            terms.sort_unstable();
            best = Some((violation, UgCut { vertex: u, label: l0, terms }));
        }
        out.extend(best);
    }
    out.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    Ok(out.into_iter().map(|(_, c)| c).collect())
}

/// The most violated lifted-walk row, if any.
pub fn separate_ug(inst: &UgInstance, sol: &UgLpSolution, tol: f64) -> Result<Option<UgCut>> {
    Ok(violated_ug_cuts(inst, sol, tol)?.into_iter().next())
}

/// Cutting-plane solve with the default round cap of `10 * |E| * k`.
pub fn solve_ug_lp(inst: &UgInstance, tol: f64) -> Result<UgLpSolution> {
    let cap = 10 * inst.num_edges().max(1) * inst.k();
    solve_ug_lp_capped(inst, tol, cap)
}

/// Minimizes `Σ_e (c_e / 2) Σ_l d(e, l)` over the label-sum rows, the two
/// linearizations of `d(e, l) >= |x(u, l) - x(v, π(l))|`, and lifted-walk
/// rows added by [`violated_ug_cuts`] until none is violated.
pub fn solve_ug_lp_capped(inst: &UgInstance, tol: f64, max_rounds: usize) -> Result<UgLpSolution> {
    let tol = if tol > 0.0 { tol } else { DEFAULT_TOL };
    let (n, m, k) = (inst.n(), inst.num_edges(), inst.k());
    let vars = k * (n + m);
    if vars > UG_VARIABLE_CAP {
        return Err(Error::SizeCapExceeded {
            what: "LP variables k(n + |E|)",
            size: vars as u128,
            cap: UG_VARIABLE_CAP as u128,
        });
    }
    let xi = |v: VertexId, l: Label| v * k + l;
    let di = |e: EdgeId, l: Label| n * k + e * k + l;

    let mut lp = RestrictedLp::new(vars);
    for (id, e) in inst.edges().iter().enumerate() {
        for l in 0..k {
            lp.objective[di(id, l)] = e.cost / 2.0;
        }
    }
    for v in 0..n {
        lp.push(Row::new((0..k).map(|l| (xi(v, l), 1.0)).collect(), Sense::Eq, 1.0));
    }
    for (id, e) in inst.edges().iter().enumerate() {
        for l in 0..k {
            let (a, b) = (xi(e.u, l), xi(e.v, e.constraint.apply(l, k)));
            let d = di(id, l);
            lp.push(Row::new(vec![(d, 1.0), (a, -1.0), (b, 1.0)], Sense::Ge, 0.0));
            lp.push(Row::new(vec![(d, 1.0), (a, 1.0), (b, -1.0)], Sense::Ge, 0.0));
        }
    }

    let mut known: BTreeSet<UgCut> = BTreeSet::new();
    let mut cuts = Vec::new();
    let mut history = Vec::new();
    let mut rounds = 0;
    loop {
        let out = lp_optimize(&lp)?;
        let x = out.values[..n * k].to_vec();
        // d <= 1 never binds: both the linearizations and the walk rows
        // have right-hand sides at most 1.
        let d = out.values[n * k..].iter().map(|v| v.min(1.0)).collect();
        let mut sol = UgLpSolution::from_values(inst, x, d, tol)?;
        history.push(sol.objective);
        rounds += 1;
        let fresh: Vec<UgCut> = violated_ug_cuts(inst, &sol, tol)?
            .into_iter()
            .filter(|c| !known.contains(c))
            .collect();
        if fresh.is_empty() || rounds > max_rounds {
            sol.cuts_added = cuts.len();
            sol.rounds = rounds;
            sol.history = history;
            sol.cuts = cuts;
            if !fresh.is_empty() {
                return Err(Error::NoConvergence {
                    rounds: max_rounds,
                    partial: Box::new(PartialSolution::Ug(sol)),
                });
            }
            return Ok(sol);
        }
        for cut in fresh {
            let mut coeffs: Vec<(usize, f64)> = cut.terms.iter().map(|&(e, l)| (di(e, l), 1.0)).collect();
            coeffs.push((xi(cut.vertex, cut.label), -1.0));
            lp.push(Row::new(coeffs, Sense::Ge, 0.0));
            known.insert(cut.clone());
            cuts.push(cut);
        }
    }
}
