//! Dense bounded-variable primal simplex for
//!
//! ```text
//! minimize  c^T x   subject to  A x <= b,  l <= x <= u
//! ```
//!
//! where each bound may be infinite. Rows can be appended between solves;
//! every solve starts from scratch (the warm hint only picks the starting
//! bound of boxed variables), so results never depend on solve history.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// Primal feasibility and pivoting tolerance.
pub const FEAS_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STALL: usize = 25;

/// One `sum coeffs <= rhs` row.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl LpRow {
    pub fn new(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LpRow { coeffs, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(i, a)| a * x[i]).sum()
    }

    /// Sorted by index, repeated indices merged, zero coefficients dropped.
    fn canonical(mut self) -> Self {
        self.coeffs.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs {
            match merged.last_mut() {
                Some((j, b)) if *j == i => *b += a,
                _ => merged.push((i, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        LpRow {
            coeffs: merged,
            rhs: self.rhs,
        }
    }

    fn key(&self) -> (Vec<(usize, u64)>, u64) {
        // +0.0 so that -0.0 and 0.0 collide
        let bits = |v: f64| (v + 0.0).to_bits();
        (
            self.coeffs.iter().map(|&(i, a)| (i, bits(a))).collect(),
            bits(self.rhs),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// A constraint that holds with equality at a basic solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ActiveConstraint {
    Lower(usize),
    Upper(usize),
    Row(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub status: LpStatus,
    /// Nonbasic bounds and rows at the returned vertex.
    pub vertex_basis: Vec<ActiveConstraint>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    rows: Vec<LpRow>,
    keys: BTreeSet<(Vec<(usize, u64)>, u64)>,
}

impl LinearProgram {
    /// All variables unbounded; set bounds before solving.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
            rows: Vec::new(),
            keys: BTreeSet::new(),
        }
    }

    /// All variables boxed in `[0, 1]`.
    pub fn with_unit_box(objective: Vec<f64>) -> Self {
        let mut lp = Self::new(objective);
        lp.lower.fill(0.0);
        lp.upper.fill(1.0);
        lp
    }

    pub fn n(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[LpRow] {
        &self.rows
    }

    pub fn lower(&self, i: usize) -> f64 {
        self.lower[i]
    }

    pub fn upper(&self, i: usize) -> f64 {
        self.upper[i]
    }

    pub fn set_lower(&mut self, i: usize, value: f64) {
        self.lower[i] = value;
    }

    pub fn set_upper(&mut self, i: usize, value: f64) {
        self.upper[i] = value;
    }

    /// Appends a row unless an identical one is present. Returns whether it was added.
    pub fn add_row(&mut self, row: LpRow) -> Result<bool> {
        let n = self.n();
        if let Some(&(i, _)) = row.coeffs.iter().find(|&&(i, _)| i >= n) {
            return Err(invalid(format!("row references variable {i}, program has {n}")));
        }
        if !row.rhs.is_finite() || row.coeffs.iter().any(|&(_, a)| !a.is_finite()) {
            return Err(invalid("row has a non-finite coefficient"));
        }
        let row = row.canonical();
        if !self.keys.insert(row.key()) {
            return Ok(false);
        }
        self.rows.push(row);
        Ok(true)
    }

    /// Appends rows with set semantics; returns how many were new.
    ///
    /// All rows are validated before any is added.
    pub fn add_rows<I: IntoIterator<Item = LpRow>>(&mut self, rows: I) -> Result<usize> {
        let rows: Vec<LpRow> = rows.into_iter().collect();
        let n = self.n();
        if rows.iter().flat_map(|r| &r.coeffs).any(|&(i, _)| i >= n) {
            return Err(invalid("row references a variable out of range"));
        }
        let mut added = 0;
        for row in rows {
            added += self.add_row(row)? as usize;
        }
        Ok(added)
    }

    /// Largest `a^T x - b` over rows and bound violations (0 if none).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.activity(x) - r.rhs);
        let bounds = (0..self.n()).map(|i| (self.lower[i] - x[i]).max(x[i] - self.upper[i]));
        rows.chain(bounds).fold(0.0, f64::max)
    }

    pub fn solve(&self, warm_hint: Option<&LpSolution>) -> LpSolution {
        solve(self, warm_hint)
    }
}

/// Solves `lp` to optimality, or reports infeasibility or unboundedness.
pub fn solve(lp: &LinearProgram, warm_hint: Option<&LpSolution>) -> LpSolution {
    let mut tab = Tableau::build(lp, warm_hint.map(|s| s.x.as_slice()));
    let mut pivots = 0;

    if tab.artificials > 0 {
        let cost = tab.phase_one_cost();
        let outcome = tab.optimize(&cost, &mut pivots);
        let infeasibility: f64 = (tab.first_artificial()..tab.cols).map(|k| tab.value[k]).sum();
        match outcome {
            Phase::Optimal if infeasibility <= FEAS_TOL * (1 + tab.artificials) as f64 => {}
            Phase::Optimal => return tab.finish(lp, LpStatus::Infeasible, pivots),
            Phase::Unbounded => unreachable!("phase one objective is bounded below"),
            Phase::Limit => return tab.finish(lp, LpStatus::IterationLimit, pivots),
        }
        tab.fix_artificials();
    }

    let mut cost = vec![0.0; tab.cols];
    cost[..lp.n()].copy_from_slice(&lp.objective);
    let status = match tab.optimize(&cost, &mut pivots) {
        Phase::Optimal => LpStatus::Optimal,
        Phase::Unbounded => LpStatus::Unbounded,
        Phase::Limit => LpStatus::IterationLimit,
    };
    tab.finish(lp, status, pivots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    Free,
}

enum Phase {
    Optimal,
    Unbounded,
    Limit,
}

/// Columns: structural `0..n`, slacks `n..n+m`, then one artificial per row
/// whose slack starts infeasible.
struct Tableau {
    n: usize,
    m: usize,
    cols: usize,
    width: usize,
    artificials: usize,
    /// Row-major `m x (cols + 1)`; the last column is `B^-1 b`.
    t: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<VarState>,
    lo: Vec<f64>,
    up: Vec<f64>,
    value: Vec<f64>,
    reduced: Vec<f64>,
}

impl Tableau {
    fn build(lp: &LinearProgram, hint: Option<&[f64]>) -> Self {
        let n = lp.n();
        let m = lp.rows.len();
        let mut lo = Vec::with_capacity(n + m);
        let mut up = Vec::with_capacity(n + m);
        let mut state = Vec::with_capacity(n + m);
        let mut value = Vec::with_capacity(n + m);
        for i in 0..n {
            let (l, u) = (lp.lower[i], lp.upper[i]);
            let prefer_upper = match hint {
                Some(h) if l.is_finite() && u.is_finite() => h[i] > 0.5 * (l + u),
                _ => false,
            };
            let (s, v) = if l.is_finite() && !prefer_upper {
                (VarState::AtLower, l)
            } else if u.is_finite() {
                (VarState::AtUpper, u)
            } else {
                (VarState::Free, 0.0)
            };
            lo.push(l);
            up.push(u);
            state.push(s);
            value.push(v);
        }

        let residual: Vec<f64> = lp.rows.iter().map(|r| r.rhs - r.activity(&value)).collect();
        let artificials = residual.iter().filter(|&&r| r < 0.0).count();
        let cols = n + m + artificials;
        let width = cols + 1;
        let mut t = vec![0.0; m * width];
        let mut basis = Vec::with_capacity(m);
        let mut next_art = n + m;
        for (r, row) in lp.rows.iter().enumerate() {
            let line = &mut t[r * width..(r + 1) * width];
            let sign = if residual[r] < 0.0 { -1.0 } else { 1.0 };
            for &(i, a) in &row.coeffs {
                line[i] = sign * a;
            }
            line[n + r] = sign;
            line[cols] = sign * row.rhs;
            if residual[r] < 0.0 {
                line[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(n + r);
            }
        }

        for r in 0..m {
            lo.push(0.0);
            up.push(f64::INFINITY);
            if residual[r] < 0.0 {
                state.push(VarState::AtLower);
            } else {
                state.push(VarState::Basic);
            }
            value.push(residual[r].max(0.0));
        }
        for r in 0..m {
            if residual[r] < 0.0 {
                lo.push(0.0);
                up.push(f64::INFINITY);
                state.push(VarState::Basic);
                value.push(-residual[r]);
            }
        }

        Tableau {
            n,
            m,
            cols,
            width,
            artificials,
            t,
            basis,
            state,
            lo,
            up,
            value,
            reduced: vec![0.0; cols],
        }
    }

    fn first_artificial(&self) -> usize {
        self.n + self.m
    }

    fn phase_one_cost(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.cols];
        c[self.first_artificial()..].fill(1.0);
        c
    }

    /// Artificials are pinned at zero once phase one has driven them there.
    fn fix_artificials(&mut self) {
        for k in self.first_artificial()..self.cols {
            self.up[k] = 0.0;
            if self.state[k] != VarState::Basic {
                self.state[k] = VarState::AtLower;
                self.value[k] = 0.0;
            }
        }
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.t[r * self.width..(r + 1) * self.width]
    }

    fn price(&mut self, cost: &[f64]) {
        self.reduced.copy_from_slice(cost);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * self.width..r * self.width + self.cols];
                for (d, &a) in self.reduced.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
        for r in 0..self.m {
            self.reduced[self.basis[r]] = 0.0;
        }
    }

    /// Entering column and direction (+1 increase, -1 decrease).
    fn entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols {
            let d = self.reduced[j];
            let dir = match self.state[j] {
                VarState::Basic => continue,
                _ if self.lo[j] == self.up[j] => continue,
                VarState::AtLower if d < -OPT_TOL => 1.0,
                VarState::AtUpper if d > OPT_TOL => -1.0,
                VarState::Free if d.abs() > OPT_TOL => -d.signum(),
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            if best.is_none_or(|(_, _, mag)| d.abs() > mag) {
                best = Some((j, dir, d.abs()));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn optimize(&mut self, cost: &[f64], pivots: &mut usize) -> Phase {
        self.price(cost);
        let limit = 50 * (self.m + self.cols) + 1000;
        let mut degenerate_run = 0;
        let mut steps = 0;
        loop {
            if steps == limit {
                return Phase::Limit;
            }
            steps += 1;
            let bland = degenerate_run >= DEGENERATE_STALL;
            let Some((j, dir)) = self.entering(bland) else {
                self.refresh_basic_values();
                return Phase::Optimal;
            };

            // Ratio test.
            let flip = self.up[j] - self.lo[j];
            let mut theta = f64::INFINITY;
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let alpha = self.t[r * self.width + j] * dir;
                let b = self.basis[r];
                let lim = if alpha > PIVOT_TOL && self.lo[b].is_finite() {
                    (self.value[b] - self.lo[b]) / alpha
                } else if alpha < -PIVOT_TOL && self.up[b].is_finite() {
                    (self.up[b] - self.value[b]) / -alpha
                } else {
                    continue;
                };
                let lim = lim.max(0.0);
                let better = match leave {
                    None => true,
                    Some((lr, la)) => {
                        if lim < theta - 1e-12 {
                            true
                        } else if lim <= theta + 1e-12 {
                            if bland {
                                b < self.basis[lr]
                            } else {
                                alpha.abs() > la.abs()
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    theta = if leave.is_none() { lim } else { theta.min(lim) };
                    leave = Some((r, alpha));
                }
            }

            if flip <= theta {
                if !flip.is_finite() {
                    return Phase::Unbounded;
                }
                self.shift(j, dir * flip);
                self.state[j] = match self.state[j] {
                    VarState::AtLower => VarState::AtUpper,
                    _ => VarState::AtLower,
                };
                self.value[j] = if self.state[j] == VarState::AtLower {
                    self.lo[j]
                } else {
                    self.up[j]
                };
                degenerate_run = 0;
                continue;
            }
            let Some((r, alpha)) = leave else {
                return Phase::Unbounded;
            };
            if theta > 1e-12 {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }
            self.shift(j, dir * theta);
            let out = self.basis[r];
            if alpha > 0.0 {
                self.state[out] = VarState::AtLower;
                self.value[out] = self.lo[out];
            } else {
                self.state[out] = VarState::AtUpper;
                self.value[out] = self.up[out];
            }
            self.pivot(r, j);
            self.state[j] = VarState::Basic;
            *pivots += 1;
        }
    }

    /// Moves nonbasic `j` by `delta` and updates basic values.
    fn shift(&mut self, j: usize, delta: f64) {
        if delta == 0.0 {
            return;
        }
        self.value[j] += delta;
        for r in 0..self.m {
            let a = self.t[r * self.width + j];
            if a != 0.0 {
                self.value[self.basis[r]] -= a * delta;
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let w = self.width;
        let p = self.t[r * w + j];
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for v in prow.iter_mut() {
            *v /= p;
        }
        prow[j] = 1.0;
        let nz: Vec<usize> = (0..w).filter(|&k| prow[k] != 0.0).collect();
        for line in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = line[j];
            if f != 0.0 {
                for &k in &nz {
                    line[k] -= f * prow[k];
                }
                line[j] = 0.0;
            }
        }
        let f = self.reduced[j];
        if f != 0.0 {
            for &k in &nz {
                if k < self.cols {
                    self.reduced[k] -= f * prow[k];
                }
            }
            self.reduced[j] = 0.0;
        }
        self.basis[r] = j;
    }

    /// Recomputes basic values from `B^-1 b` to shed accumulated drift.
    fn refresh_basic_values(&mut self) {
        let nonbasic: Vec<usize> = (0..self.cols)
            .filter(|&k| self.state[k] != VarState::Basic && self.value[k] != 0.0)
            .collect();
        for r in 0..self.m {
            let row = self.row(r);
            let v = nonbasic
                .iter()
                .fold(row[self.cols], |acc, &k| acc - row[k] * self.value[k]);
            let b = self.basis[r];
            self.value[b] = v;
        }
    }

    fn finish(&self, lp: &LinearProgram, status: LpStatus, pivots: usize) -> LpSolution {
        let x: Vec<f64> = self.value[..self.n].to_vec();
        let objective_value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        let mut vertex_basis = Vec::new();
        for k in 0..self.n + self.m {
            let s = self.state[k];
            if s == VarState::Basic || s == VarState::Free {
                continue;
            }
            vertex_basis.push(if k >= self.n {
                ActiveConstraint::Row(k - self.n)
            } else if s == VarState::AtLower {
                ActiveConstraint::Lower(k)
            } else {
                ActiveConstraint::Upper(k)
            });
        }
        LpSolution {
            x,
            objective_value,
            status,
            vertex_basis,
            pivots,
        }
    }
}
