//! Dense-tableau two-phase primal simplex for small restricted LPs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Reduced costs above `-PRICE_EPS` count as non-negative.
const PRICE_EPS: f64 = 1e-9;
/// Smallest pivot element accepted by the ratio test.
const PIVOT_EPS: f64 = 1e-7;
/// Ratios within this distance of the minimum are ties.
const RATIO_EPS: f64 = 1e-12;
/// Entries below this magnitude are flushed to zero after a pivot.
const FLUSH_EPS: f64 = 1e-12;
/// Values within this distance of a bound are snapped onto it.
const SNAP_EPS: f64 = 1e-9;
/// Basic values may dip this far below zero during the Harris ratio test.
const HARRIS_SLACK: f64 = 1e-9;
/// Pivots between rebuilds of the tableau from the original rows.
const REINVERT_EVERY: usize = 1000;
/// Pivot magnitude below which a basis counts as singular on reinversion.
const SINGULAR_EPS: f64 = 1e-11;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_SWITCH: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `Σ coeff * x[var]  (sense)  rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(coeffs: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        Row { coeffs, sense, rhs }
    }

    /// Left-hand side at `x`.
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => (lhs - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - lhs).max(0.0),
            Sense::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `min objective · x` subject to `rows`, `0 <= x <= upper`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictedLp {
    pub objective: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
}

impl RestrictedLp {
    /// `num_vars` variables with no upper bounds and a zero objective.
    pub fn new(num_vars: usize) -> Self {
        RestrictedLp {
            objective: vec![0.0; num_vars],
            upper: vec![f64::INFINITY; num_vars],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome {
    pub values: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

struct Tableau {
    width: usize,
    cols: usize,
    /// Current tableau `B⁻¹ [A | b]`, row-major.
    data: Vec<f64>,
    /// Original `[A | b]`, kept for reinversion.
    orig: Vec<f64>,
    cost: Vec<f64>,
    obj: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    pivot_cap: usize,
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.data[r * w + c];
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for v in prow.iter_mut() {
            *v /= p;
        }
        prow[c] = 1.0;
        let eliminate = |row: &mut [f64]| {
            let f = row[c];
            if f == 0.0 {
                return;
            }
            for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                if pv != 0.0 {
                    *v -= f * pv;
                    if v.abs() < FLUSH_EPS {
                        *v = 0.0;
                    }
                }
            }
            row[c] = 0.0;
        };
        for row in before.chunks_mut(w).chain(after.chunks_mut(w)) {
            eliminate(row);
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Loads `cost` into the objective row, priced out against the basis.
    fn set_objective(&mut self, cost: &[f64]) {
        self.cost.clear();
        self.cost.extend_from_slice(cost);
        self.price();
    }

    fn price(&mut self) {
        self.obj.iter_mut().for_each(|v| *v = 0.0);
        self.obj[..self.cost.len()].copy_from_slice(&self.cost);
        for i in 0..self.rows() {
            let cb = self.obj[self.basis[i]];
            if cb != 0.0 {
                let row = &self.data[i * self.width..(i + 1) * self.width];
                for (o, &a) in self.obj.iter_mut().zip(row) {
                    *o -= cb * a;
                }
            }
        }
        for &b in &self.basis {
            self.obj[b] = 0.0;
        }
    }

    /// Rebuilds `B⁻¹ [A | b]` from the original rows by Gauss-Jordan
    /// elimination with partial pivoting, discarding accumulated drift.
    /// Returns `false` (leaving the tableau untouched) if the basis has
    /// become numerically singular.
    fn reinvert(&mut self) -> bool {
        let m = self.rows();
        let w = self.width;
        let mut bm = vec![0.0; m * m];
        for i in 0..m {
            for (p, &j) in self.basis.iter().enumerate() {
                bm[i * m + p] = self.orig[i * w + j];
            }
        }
        let mut rhs = self.orig.clone();
        for p in 0..m {
            let r = (p..m)
                .max_by(|&a, &b| bm[a * m + p].abs().total_cmp(&bm[b * m + p].abs()))
                .expect("non-empty range");
            let piv = bm[r * m + p];
            if piv.abs() < SINGULAR_EPS {
                return false;
            }
            if r != p {
                for j in 0..m {
                    bm.swap(r * m + j, p * m + j);
                }
                for j in 0..w {
                    rhs.swap(r * w + j, p * w + j);
                }
            }
            for j in 0..m {
                bm[p * m + j] /= piv;
            }
            for j in 0..w {
                rhs[p * w + j] /= piv;
            }
            for i in 0..m {
                let f = bm[i * m + p];
                if i == p || f == 0.0 {
                    continue;
                }
                for j in 0..m {
                    bm[i * m + j] -= f * bm[p * m + j];
                }
                for j in 0..w {
                    rhs[i * w + j] -= f * rhs[p * w + j];
                }
            }
        }
        for v in rhs.iter_mut() {
            if v.abs() < FLUSH_EPS {
                *v = 0.0;
            }
        }
        // basic columns are exact unit vectors
        for (p, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                rhs[i * w + j] = if i == p { 1.0 } else { 0.0 };
            }
        }
        self.data = rhs;
        self.price();
        true
    }

    fn entering(&self, allowed: &[bool], bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (j, (&rc, &ok)) in self.obj[..self.cols].iter().zip(allowed).enumerate() {
            if !ok || rc >= -PRICE_EPS {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.is_none_or(|(_, b)| rc < b) {
                best = Some((j, rc));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Two-pass Harris ratio test: the step is bounded by the minimum ratio
    /// with every basic value relaxed by `HARRIS_SLACK`, and among rows
    /// within that bound the largest pivot element wins. Under Bland's rule
    /// the exact minimum ratio with the smallest basic index is used.
    fn leaving(&self, c: usize, bland: bool) -> Option<usize> {
        let candidates = (0..self.rows()).filter(|&i| self.at(i, c) > PIVOT_EPS);
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for i in candidates {
                let ratio = self.rhs(i).max(0.0) / self.at(i, c);
                let better = match best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < br - RATIO_EPS || (ratio <= br + RATIO_EPS && self.basis[i] < self.basis[bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            return best.map(|(i, _)| i);
        }
        let bound = candidates
            .clone()
            .map(|i| (self.rhs(i).max(0.0) + HARRIS_SLACK) / self.at(i, c))
            .fold(f64::INFINITY, f64::min);
        if bound == f64::INFINITY {
            return None;
        }
        candidates
            .filter(|&i| self.rhs(i).max(0.0) / self.at(i, c) <= bound)
            .max_by(|&a, &b| self.at(a, c).total_cmp(&self.at(b, c)).then(b.cmp(&a)))
    }

    /// Pivots to optimality over the `allowed` columns. The tableau is
    /// rebuilt from the original rows every `REINVERT_EVERY` pivots and
    /// before any optimality or unboundedness verdict is accepted.
    fn optimize(&mut self, allowed: &[bool]) -> Result<()> {
        let mut degenerate_run = 0;
        let mut since_reinvert = 0;
        let mut verified = false;
        loop {
            if since_reinvert >= REINVERT_EVERY {
                self.reinvert();
                since_reinvert = 0;
            }
            let bland = degenerate_run >= DEGENERATE_SWITCH;
            let step = self.entering(allowed, bland).map(|c| (c, self.leaving(c, bland)));
            let (c, r) = match step {
                Some((c, Some(r))) => (c, r),
                verdict => {
                    // accept a verdict only straight after a fresh reinversion
                    if verified || !self.reinvert() {
                        return match verdict {
                            None => Ok(()),
                            Some(_) => Err(Error::Unbounded),
                        };
                    }
                    verified = true;
                    since_reinvert = 0;
                    continue;
                }
            };
            if self.pivots >= self.pivot_cap {
                return Err(Error::PivotLimit(self.pivot_cap));
            }
            if self.rhs(r) <= RATIO_EPS {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
            for i in 0..self.rows() {
                let v = &mut self.data[i * self.width + self.cols];
                if *v < 0.0 && *v > -HARRIS_SLACK {
                    *v = 0.0;
                }
            }
            verified = false;
            since_reinvert += 1;
        }
    }
}

fn check_shape(lp: &RestrictedLp) -> Result<()> {
    let nv = lp.num_vars();
    if lp.upper.len() != nv {
        return Err(Error::LengthMismatch {
            expected: nv,
            got: lp.upper.len(),
        });
    }
    if lp.objective.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter("objective coefficients must be finite"));
    }
    for row in &lp.rows {
        if row.coeffs.iter().any(|&(j, a)| j >= nv || !a.is_finite()) || !row.rhs.is_finite() {
            return Err(Error::InvalidParameter("row coefficients must be finite and in range"));
        }
    }
    if lp.upper.iter().any(|&u| u.is_nan() || u < 0.0) {
        return Err(Error::InvalidParameter("upper bounds must be non-negative"));
    }
    Ok(())
}

/// Snaps values within `SNAP_EPS` of a bound onto it and evaluates the
/// objective.
fn finish(lp: &RestrictedLp, mut values: Vec<f64>, pivots: usize) -> LpOutcome {
    for (v, &u) in values.iter_mut().zip(&lp.upper) {
        if *v < SNAP_EPS {
            *v = 0.0;
        }
        if u.is_finite() && (*v - u).abs() < SNAP_EPS {
            *v = u;
        }
    }
    let objective = lp.objective.iter().zip(&values).map(|(c, v)| c * v).sum();
    LpOutcome {
        values,
        objective,
        pivots,
    }
}

/// Solves `lp` to an optimal basic solution, with microlp when the
/// `microlp` feature is enabled and with [`lp_optimize_dense`] otherwise.
/// Values within 1e-9 of a bound are snapped to it.
pub fn lp_optimize(lp: &RestrictedLp) -> Result<LpOutcome> {
    #[cfg(feature = "microlp")]
    {
        lp_optimize_microlp(lp)
    }
    #[cfg(not(feature = "microlp"))]
    {
        lp_optimize_dense(lp)
    }
}

#[cfg(feature = "microlp")]
fn lp_optimize_microlp(lp: &RestrictedLp) -> Result<LpOutcome> {
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;
    use microlp::{ComparisonOp, OptimizationDirection, Problem};

    check_shape(lp)?;
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = lp
        .objective
        .iter()
        .zip(&lp.upper)
        .map(|(&c, &u)| problem.add_var(c, (0.0, u)))
        .collect();
    for row in &lp.rows {
        // microlp wants each variable at most once per row
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for &(j, a) in &row.coeffs {
            *merged.entry(j).or_insert(0.0) += a;
        }
        let expr: Vec<_> = merged.into_iter().filter(|&(_, a)| a != 0.0).map(|(j, a)| (vars[j], a)).collect();
        let op = match row.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        problem.add_constraint(expr, op, row.rhs);
    }
    let outcome = problem.solve().map_err(|e| match e {
        microlp::Error::Infeasible => Error::Infeasible,
        microlp::Error::Unbounded => Error::Unbounded,
        other => Error::Solver(other.to_string()),
    })?;
    let solution = outcome
        .into_solution()
        .map_err(|_| Error::Solver("solve was interrupted".to_string()))?;
    let values = vars.iter().map(|&v| solution.var_value(v)).collect();
    Ok(finish(lp, values, solution.stats().lp_iterations as usize))
}

/// Coefficients, sense and right-hand side after sign normalization.
type SignedRow = (Vec<(usize, f64)>, Sense, f64);

/// Dense-tableau two-phase simplex. Finite upper bounds become explicit
/// rows. Needs only `alloc`; adequate for the cycle LP, but large highly
/// degenerate LP-UG instances are better served by the `microlp` feature.
pub fn lp_optimize_dense(lp: &RestrictedLp) -> Result<LpOutcome> {
    check_shape(lp)?;
    let nv = lp.num_vars();

    // Normalize to rhs >= 0. Zero-rhs `>=` rows become `<=` rows so they
    // start feasible on a slack instead of needing an artificial.
    let mut rows: Vec<SignedRow> = Vec::with_capacity(lp.rows.len());
    for row in &lp.rows {
        let flip = row.rhs < 0.0 || (row.rhs == 0.0 && row.sense == Sense::Ge);
        if flip {
            let coeffs = row.coeffs.iter().map(|&(j, a)| (j, -a)).collect();
            let sense = match row.sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
            rows.push((coeffs, sense, -row.rhs));
        } else {
            rows.push((row.coeffs.clone(), row.sense, row.rhs));
        }
    }
    for (j, &u) in lp.upper.iter().enumerate() {
        if u.is_finite() {
            rows.push((vec![(j, 1.0)], Sense::Le, u));
        }
    }

    let m = rows.len();
    let slacks = rows.iter().filter(|r| r.1 != Sense::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Sense::Le).count();
    let cols = nv + slacks + artificials;
    let width = cols + 1;
    let mut data = vec![0.0; m * width];
    let mut basis = vec![0; m];
    let mut next_slack = nv;
    let mut next_art = nv + slacks;
    for (i, (coeffs, sense, rhs)) in rows.iter().enumerate() {
        let row = &mut data[i * width..(i + 1) * width];
        for &(j, a) in coeffs {
            row[j] += a;
        }
        row[cols] = *rhs;
        match sense {
            Sense::Le => {
                row[next_slack] = 1.0;
                basis[i] = next_slack;
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = 1.0;
                basis[i] = next_art;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        width,
        cols,
        orig: data.clone(),
        data,
        cost: Vec::with_capacity(cols),
        obj: vec![0.0; width],
        basis,
        pivots: 0,
        pivot_cap: 50_000 + 50 * (m + cols),
    };
    let first_art = nv + slacks;

    if artificials > 0 {
        let mut cost = vec![0.0; cols];
        cost[first_art..].iter_mut().for_each(|c| *c = 1.0);
        t.set_objective(&cost);
        t.optimize(&vec![true; cols])?;
        let infeasibility: f64 = (0..m)
            .filter(|&i| t.basis[i] >= first_art)
            .map(|i| t.rhs(i))
            .sum();
        let scale = 1.0 + rows.iter().map(|r| r.2).fold(0.0, f64::max);
        if infeasibility > 1e-7 * scale {
            return Err(Error::Infeasible);
        }
        // Drive zero-valued artificials out of the basis where possible;
        // rows where that fails are redundant and stay inert.
        for i in 0..m {
            if t.basis[i] < first_art {
                continue;
            }
            let best = (0..first_art)
                .map(|j| (j, t.at(i, j).abs()))
                .filter(|&(_, a)| a > PIVOT_EPS)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((j, _)) = best {
                t.pivot(i, j);
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..nv].copy_from_slice(&lp.objective);
    t.set_objective(&cost);
    let mut allowed = vec![true; cols];
    allowed[first_art..].iter_mut().for_each(|a| *a = false);
    t.optimize(&allowed)?;

    let mut values = vec![0.0; nv];
    for i in 0..m {
        if t.basis[i] < nv {
            values[t.basis[i]] = t.rhs(i);
        }
    }
    Ok(finish(lp, values, t.pivots))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Solves with the default backend and checks the dense tableau agrees.
    fn solve(lp: &RestrictedLp) -> LpOutcome {
        let out = lp_optimize(lp).unwrap();
        let dense = lp_optimize_dense(lp).unwrap();
        assert!((out.objective - dense.objective).abs() < 1e-9);
        out
    }

    #[test]
    fn single_lower_bound() {
        let mut lp = RestrictedLp::new(1);
        lp.objective[0] = 1.0;
        lp.upper[0] = 1.0;
        lp.push(Row::new(vec![(0, 1.0)], Sense::Ge, 0.3));
        let out = solve(&lp);
        assert!((out.values[0] - 0.3).abs() < 1e-12);
        assert!((out.objective - 0.3).abs() < 1e-12);
    }

    #[test]
    fn no_rows() {
        let mut lp = RestrictedLp::new(3);
        lp.objective = vec![1.0, 1.0, 1.0];
        let out = solve(&lp);
        assert_eq!(out.values, vec![0.0; 3]);
        assert_eq!(out.objective, 0.0);
    }

    #[test]
    fn two_var_cover() {
        let mut lp = RestrictedLp::new(2);
        lp.objective = vec![1.0, 1.0];
        lp.push(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 1.0));
        let out = solve(&lp);
        assert!((out.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_senses() {
        // min -x - 2y  s.t. x + y = 1, y <= 0.7, x - y >= -0.5
        let mut lp = RestrictedLp::new(2);
        lp.objective = vec![-1.0, -2.0];
        lp.push(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 1.0));
        lp.push(Row::new(vec![(1, 1.0)], Sense::Le, 0.7));
        lp.push(Row::new(vec![(0, 1.0), (1, -1.0)], Sense::Ge, -0.5));
        let out = solve(&lp);
        assert!((out.values[1] - 0.7).abs() < 1e-12);
        assert!((out.values[0] - 0.3).abs() < 1e-12);
        assert!((out.objective + 1.7).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = RestrictedLp::new(1);
        lp.upper[0] = 1.0;
        lp.push(Row::new(vec![(0, 1.0)], Sense::Ge, 2.0));
        assert!(matches!(lp_optimize(&lp), Err(Error::Infeasible)));
        assert!(matches!(lp_optimize_dense(&lp), Err(Error::Infeasible)));

        let mut lp = RestrictedLp::new(1);
        lp.objective[0] = -1.0;
        assert!(matches!(lp_optimize(&lp), Err(Error::Unbounded)));
        assert!(matches!(lp_optimize_dense(&lp), Err(Error::Unbounded)));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = RestrictedLp::new(2);
        lp.objective = vec![1.0, 2.0];
        lp.push(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Eq, 1.0));
        lp.push(Row::new(vec![(0, 2.0), (1, 2.0)], Sense::Eq, 2.0));
        let out = solve(&lp);
        assert_eq!(out.values, vec![1.0, 0.0]);
    }

    #[test]
    fn degenerate_vertex_cover_of_a_triangle() {
        // fractional optimum 1.5 at x = (0.5, 0.5, 0.5)
        let mut lp = RestrictedLp::new(3);
        lp.objective = vec![1.0; 3];
        lp.upper = vec![1.0; 3];
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            lp.push(Row::new(vec![(a, 1.0), (b, 1.0)], Sense::Ge, 1.0));
        }
        let out = solve(&lp);
        assert!((out.objective - 1.5).abs() < 1e-9);
    }
}
