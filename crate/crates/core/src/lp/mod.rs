//! Linear programming backend.
//!
//! [`LpSolver`] is a bounded revised simplex over `A x - s = 0` with one
//! logical `s_i` per row carrying the row bounds. The dual simplex does the
//! main work: with every structural column boxed, any basis can be made dual
//! feasible by choosing bounds, so the slack basis, warm starts, added rows
//! and tightened bounds all restart without a phase 1. A primal pass cleans
//! up the rare case where costs had to be shifted.

mod factor;

use std::fmt;

use crate::error::{Error, Result};
use factor::{reinvert, Factor, PIVOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::IterationLimit => "iteration_limit",
        })
    }
}

/// `lower <= sum coef * x <= upper`; either side may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coefs: Vec<(usize, f64)>,
    pub lower: f64,
    pub upper: f64,
}

impl LpRow {
    pub fn le(coefs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LpRow { coefs, lower: f64::NEG_INFINITY, upper: rhs }
    }

    pub fn ge(coefs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LpRow { coefs, lower: rhs, upper: f64::INFINITY }
    }

    pub fn eq(coefs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LpRow { coefs, lower: rhs, upper: rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// `min c^T x` subject to rows and column bounds.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub col_lower: Vec<f64>,
    pub col_upper: Vec<f64>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, col_lower: Vec<f64>, col_upper: Vec<f64>) -> Self {
        LpProblem { objective, col_lower, col_upper, rows: Vec::new() }
    }

    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    /// Largest bound or row violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.num_cols() {
            worst = worst.max(self.col_lower[j] - x[j]).max(x[j] - self.col_upper[j]);
        }
        for row in &self.rows {
            let a = row.activity(x);
            worst = worst.max(row.lower - a).max(a - row.upper);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

/// Basis descriptor: status of every column and every row logical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub cols: Vec<VarStatus>,
    pub rows: Vec<VarStatus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub row_activity: Vec<f64>,
    /// Row duals `y` with `c - A^T y` the reduced costs.
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub basis: Basis,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Defaults to `50 * (rows + cols)` when `None`.
    pub iteration_limit: Option<usize>,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    pub refactor_every: usize,
    pub primal_tol: f64,
    pub dual_tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { iteration_limit: None, bland_after: 1000, refactor_every: 100, primal_tol: 1e-9, dual_tol: 1e-9 }
    }
}

/// Stand-in box for infinite column bounds; a solution resting on it is
/// reported unbounded.
const BOX: f64 = 1e6;

/// Solves an LP from scratch or from a warm basis.
pub fn solve_lp(problem: &LpProblem, warm: Option<&Basis>, options: &LpOptions) -> Result<LpResult> {
    let mut solver = LpSolver::new(problem)?;
    if let Some(b) = warm {
        solver.set_basis(b)?;
    }
    Ok(solver.solve(options))
}

/// Simplex state that survives between solves, for warm starts after rows
/// are added or bounds change.
#[derive(Debug, Clone)]
pub struct LpSolver {
    ncols: usize,
    cols: Vec<Vec<(usize, f64)>>,
    rows: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    boxed_inf: Vec<bool>,
    status: Vec<VarStatus>,
    head: Vec<usize>,
    x: Vec<f64>,
    d: Vec<f64>,
    shift: Vec<f64>,
    factor: Factor,
    /// Whether `factor` represents the basis in `head`.
    factor_ok: bool,
}

enum Phase {
    Done,
    Infeasible,
    Unbounded,
    Limit,
}

impl LpSolver {
    pub fn new(problem: &LpProblem) -> Result<Self> {
        let n = problem.num_cols();
        if problem.col_lower.len() != n || problem.col_upper.len() != n {
            return Err(Error::InvalidArgument("bound vectors do not match objective length".into()));
        }
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        let mut boxed_inf = Vec::with_capacity(n);
        for j in 0..n {
            let (l, u) = (problem.col_lower[j], problem.col_upper[j]);
            if l.is_nan() || u.is_nan() || !problem.objective[j].is_finite() {
                return Err(Error::InvalidArgument(format!("column {j} has a NaN bound or non-finite cost")));
            }
            if l > u {
                return Err(Error::InvalidArgument(format!("column {j} has lower bound above upper bound")));
            }
            boxed_inf.push(l.is_infinite() || u.is_infinite());
            lower.push(if l.is_infinite() { -BOX } else { l });
            upper.push(if u.is_infinite() { BOX } else { u });
        }
        let mut s = LpSolver {
            ncols: n,
            cols: vec![Vec::new(); n],
            rows: Vec::new(),
            cost: problem.objective.clone(),
            lower,
            upper,
            boxed_inf,
            status: (0..n).map(|_| VarStatus::AtLower).collect(),
            head: Vec::new(),
            x: vec![0.0; n],
            d: vec![0.0; n],
            shift: vec![0.0; n],
            factor: Factor::default(),
            factor_ok: false,
        };
        for row in &problem.rows {
            s.add_row(row)?;
        }
        Ok(s)
    }

    pub fn num_cols(&self) -> usize {
        self.ncols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row whose logical enters the basis.
    pub fn add_row(&mut self, row: &LpRow) -> Result<()> {
        if row.lower.is_nan() || row.upper.is_nan() || row.lower > row.upper {
            return Err(Error::InvalidArgument("row bounds are inconsistent".into()));
        }
        let i = self.rows.len();
        let mut merged = row.coefs.clone();
        merged.sort_by_key(|&(j, _)| j);
        let mut coefs: Vec<(usize, f64)> = Vec::with_capacity(merged.len());
        for (j, a) in merged {
            if j >= self.ncols {
                return Err(Error::IndexOutOfRange { index: j, len: self.ncols });
            }
            if !a.is_finite() {
                return Err(Error::InvalidArgument(format!("row {i} has a non-finite coefficient")));
            }
            match coefs.last_mut() {
                Some(last) if last.0 == j => last.1 += a,
                _ => coefs.push((j, a)),
            }
        }
        coefs.retain(|&(_, a)| a != 0.0);
        for &(j, a) in &coefs {
            self.cols[j].push((i, a));
        }
        self.rows.push(coefs);
        self.lower.push(row.lower);
        self.upper.push(row.upper);
        self.cost.push(0.0);
        self.status.push(VarStatus::Basic);
        self.x.push(0.0);
        self.d.push(0.0);
        self.shift.push(0.0);
        self.head.push(self.ncols + i);
        self.factor_ok = false;
        Ok(())
    }

    pub fn col_bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    pub fn set_col_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        debug_assert!(lower <= upper && lower.is_finite() && upper.is_finite());
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn basis(&self) -> Basis {
        Basis { cols: self.status[..self.ncols].to_vec(), rows: self.status[self.ncols..].to_vec() }
    }

    /// Installs a basis. Rows missing from `basis` (added since it was taken)
    /// get basic logicals.
    pub fn set_basis(&mut self, basis: &Basis) -> Result<()> {
        if basis.cols.len() != self.ncols || basis.rows.len() > self.rows.len() {
            return Err(Error::InvalidArgument("basis dimensions do not match the problem".into()));
        }
        let m = self.rows.len();
        self.status[..self.ncols].copy_from_slice(&basis.cols);
        self.status[self.ncols..self.ncols + basis.rows.len()].copy_from_slice(&basis.rows);
        for k in basis.rows.len()..m {
            self.status[self.ncols + k] = VarStatus::Basic;
        }
        self.head = (0..self.ncols + m).filter(|&v| self.status[v] == VarStatus::Basic).collect();
        self.factor = Factor::default();
        self.factor_ok = false;
        Ok(())
    }

    fn is_fixed(&self, v: usize) -> bool {
        self.upper[v] - self.lower[v] <= 0.0
    }

    fn column_into(&self, v: usize, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = 0.0;
        }
        if v < self.ncols {
            for &(i, a) in &self.cols[v] {
                out[i] = a;
            }
        } else {
            out[v - self.ncols] = -1.0;
        }
    }

    fn nonbasic_value(&self, v: usize) -> f64 {
        match self.status[v] {
            VarStatus::AtUpper if self.upper[v].is_finite() => self.upper[v],
            VarStatus::AtLower if self.lower[v].is_finite() => self.lower[v],
            _ => {
                if self.lower[v].is_finite() {
                    self.lower[v]
                } else if self.upper[v].is_finite() {
                    self.upper[v]
                } else {
                    0.0
                }
            }
        }
    }

    fn refactor(&mut self) {
        let m = self.rows.len();
        let re = reinvert(m, self.ncols, &self.cols, &self.head);
        for &v in &re.rejected {
            self.status[v] = if self.x[v] - self.lower[v] <= self.upper[v] - self.x[v] {
                VarStatus::AtLower
            } else {
                VarStatus::AtUpper
            };
        }
        for &v in &re.head {
            self.status[v] = VarStatus::Basic;
        }
        self.head = re.head;
        self.factor = re.factor;
        self.factor_ok = true;
    }

    /// Puts nonbasic variables on sensible bounds and recomputes `x_B`.
    fn compute_primal(&mut self) {
        let m = self.rows.len();
        let mut rhs = vec![0.0; m];
        for v in 0..self.ncols + m {
            if self.status[v] == VarStatus::Basic {
                continue;
            }
            let val = self.nonbasic_value(v);
            self.status[v] = if self.upper[v].is_finite() && val == self.upper[v] && val != self.lower[v] {
                VarStatus::AtUpper
            } else {
                VarStatus::AtLower
            };
            self.x[v] = val;
            if val != 0.0 {
                if v < self.ncols {
                    for &(i, a) in &self.cols[v] {
                        rhs[i] -= a * val;
                    }
                } else {
                    rhs[v - self.ncols] += val;
                }
            }
        }
        self.factor.ftran(&mut rhs);
        for (r, &v) in self.head.iter().enumerate() {
            self.x[v] = rhs[r];
        }
    }

    fn compute_duals(&mut self) -> Vec<f64> {
        let m = self.rows.len();
        let mut y: Vec<f64> = self.head.iter().map(|&v| self.cost[v] + self.shift[v]).collect();
        self.factor.btran(&mut y);
        for j in 0..self.ncols {
            let ya: f64 = self.cols[j].iter().map(|&(i, a)| y[i] * a).sum();
            self.d[j] = self.cost[j] + self.shift[j] - ya;
        }
        for i in 0..m {
            let v = self.ncols + i;
            self.d[v] = self.shift[v] + y[i];
        }
        for &v in &self.head {
            self.d[v] = 0.0;
        }
        y
    }

    /// Restores dual feasibility by bound flips, shifting costs where the
    /// needed bound is infinite.
    fn repair_dual(&mut self, tol: f64) {
        for v in 0..self.ncols + self.rows.len() {
            if self.status[v] == VarStatus::Basic || self.is_fixed(v) {
                continue;
            }
            let wants_upper = self.d[v] < -tol;
            let wants_lower = self.d[v] > tol;
            let at_upper = self.x_at_upper(v);
            if wants_upper && !at_upper {
                if self.upper[v].is_finite() {
                    self.status[v] = VarStatus::AtUpper;
                } else {
                    self.shift[v] -= self.d[v];
                    self.d[v] = 0.0;
                }
            } else if wants_lower && at_upper {
                if self.lower[v].is_finite() {
                    self.status[v] = VarStatus::AtLower;
                } else {
                    self.shift[v] -= self.d[v];
                    self.d[v] = 0.0;
                }
            }
        }
    }

    fn x_at_upper(&self, v: usize) -> bool {
        match self.status[v] {
            VarStatus::AtUpper => self.upper[v].is_finite(),
            VarStatus::AtLower => !self.lower[v].is_finite(),
            VarStatus::Basic => false,
        }
    }

    fn tableau_row(&self, r: usize, alpha: &mut [f64]) {
        let m = self.rows.len();
        let mut rho = vec![0.0; m];
        rho[r] = 1.0;
        self.factor.btran(&mut rho);
        for a in alpha.iter_mut() {
            *a = 0.0;
        }
        for (i, &p) in rho.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for &(j, a) in &self.rows[i] {
                alpha[j] += p * a;
            }
            alpha[self.ncols + i] = -p;
        }
    }

    fn infeasibility(&self, v: usize, tol: f64) -> f64 {
        let x = self.x[v];
        if x < self.lower[v] - tol {
            self.lower[v] - x
        } else if x > self.upper[v] + tol {
            x - self.upper[v]
        } else {
            0.0
        }
    }

    fn pivot(&mut self, r: usize, q: usize, alpha_q: &[f64], alpha_row: &[f64], delta_q: f64, leave_to: VarStatus) {
        let p = self.head[r];
        let theta_d = self.d[q] / alpha_q[r];
        for v in 0..self.ncols + self.rows.len() {
            if self.status[v] != VarStatus::Basic && alpha_row[v] != 0.0 {
                self.d[v] -= theta_d * alpha_row[v];
            }
        }
        self.d[q] = 0.0;
        self.d[p] = -theta_d;
        for (pos, &v) in self.head.iter().enumerate() {
            self.x[v] -= delta_q * alpha_q[pos];
        }
        self.x[q] += delta_q;
        self.x[p] = if leave_to == VarStatus::AtLower { self.lower[p] } else { self.upper[p] };
        self.status[p] = leave_to;
        self.status[q] = VarStatus::Basic;
        self.head[r] = q;
        self.factor.push(r, alpha_q);
    }

    fn dual_phase(&mut self, opts: &LpOptions, iters: &mut usize, limit: usize) -> Phase {
        let m = self.rows.len();
        let nv = self.ncols + m;
        let mut alpha_row = vec![0.0; nv];
        let mut alpha_q = vec![0.0; m];
        let mut degenerate_run = 0usize;
        let mut confirmed = false;
        loop {
            if *iters >= limit {
                return Phase::Limit;
            }
            if self.factor.updates() >= opts.refactor_every {
                self.reset_numerics(opts);
            }
            let bland = degenerate_run >= opts.bland_after;
            let mut r = usize::MAX;
            let mut best = 0.0;
            for (pos, &v) in self.head.iter().enumerate() {
                let inf = self.infeasibility(v, opts.primal_tol);
                if inf > 0.0 {
                    let better = if bland { r == usize::MAX || v < self.head[r] } else { inf > best };
                    if better {
                        best = inf;
                        r = pos;
                    }
                }
            }
            if r == usize::MAX {
                return Phase::Done;
            }
            let p = self.head[r];
            let increase = self.x[p] < self.lower[p];
            self.tableau_row(r, &mut alpha_row);

            // Harris two-pass ratio test.
            let mut bound = f64::INFINITY;
            let mut cands = Vec::new();
            for v in 0..nv {
                if self.status[v] == VarStatus::Basic || self.is_fixed(v) {
                    continue;
                }
                let a = alpha_row[v];
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let at_upper = self.x_at_upper(v);
                let signed = if increase { a } else { -a };
                let slack = if !at_upper && signed < 0.0 {
                    self.d[v].max(0.0)
                } else if at_upper && signed > 0.0 {
                    (-self.d[v]).max(0.0)
                } else {
                    continue;
                };
                cands.push((v, slack, a.abs()));
                if !bland {
                    bound = bound.min((slack + opts.dual_tol) / a.abs());
                }
            }
            let mut q = usize::MAX;
            if bland {
                let mut best_ratio = f64::INFINITY;
                for &(v, slack, a) in &cands {
                    let ratio = slack / a;
                    if ratio < best_ratio - 1e-15 || (ratio <= best_ratio + 1e-15 && v < q) {
                        if ratio < best_ratio - 1e-15 {
                            q = v;
                        } else {
                            q = q.min(v);
                        }
                        best_ratio = best_ratio.min(ratio);
                    }
                }
            } else {
                let mut best_a = 0.0;
                for &(v, slack, a) in &cands {
                    if slack / a <= bound && a > best_a {
                        best_a = a;
                        q = v;
                    }
                }
            }
            if q == usize::MAX {
                if !confirmed && self.factor.updates() > 0 {
                    // Re-check on a fresh factorization before declaring infeasible.
                    self.reset_numerics(opts);
                    confirmed = true;
                    continue;
                }
                return Phase::Infeasible;
            }
            confirmed = false;
            self.column_into(q, &mut alpha_q);
            self.factor.ftran(&mut alpha_q);
            let piv = alpha_q[r];
            if (piv - alpha_row[q]).abs() > 1e-7 * (1.0 + piv.abs()) || piv.abs() < PIVOT_TOL {
                self.reset_numerics(opts);
                *iters += 1;
                continue;
            }
            let target = if increase { self.lower[p] } else { self.upper[p] };
            let delta_q = (self.x[p] - target) / piv;
            let theta_d = self.d[q] / piv;
            let leave_to = if increase { VarStatus::AtLower } else { VarStatus::AtUpper };
            self.pivot(r, q, &alpha_q, &alpha_row, delta_q, leave_to);
            *iters += 1;
            if theta_d.abs() < 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
        }
    }

    fn primal_phase(&mut self, opts: &LpOptions, iters: &mut usize, limit: usize) -> Phase {
        let m = self.rows.len();
        let nv = self.ncols + m;
        let mut alpha_row = vec![0.0; nv];
        let mut alpha_q = vec![0.0; m];
        let mut degenerate_run = 0usize;
        loop {
            if *iters >= limit {
                return Phase::Limit;
            }
            if self.factor.updates() >= opts.refactor_every {
                self.refactor();
                self.compute_primal();
                self.compute_duals();
            }
            let bland = degenerate_run >= opts.bland_after;
            let mut q = usize::MAX;
            let mut best = 0.0;
            for v in 0..nv {
                if self.status[v] == VarStatus::Basic || self.is_fixed(v) {
                    continue;
                }
                let at_upper = self.x_at_upper(v);
                let gain = if !at_upper && self.d[v] < -opts.dual_tol {
                    -self.d[v]
                } else if at_upper && self.d[v] > opts.dual_tol {
                    self.d[v]
                } else {
                    continue;
                };
                if bland {
                    q = v;
                    break;
                }
                if gain > best {
                    best = gain;
                    q = v;
                }
            }
            if q == usize::MAX {
                return Phase::Done;
            }
            let dir = if self.x_at_upper(q) { -1.0 } else { 1.0 };
            self.column_into(q, &mut alpha_q);
            self.factor.ftran(&mut alpha_q);

            let flip = self.upper[q] - self.lower[q];
            let mut harris = f64::INFINITY;
            for (pos, &v) in self.head.iter().enumerate() {
                let a = dir * alpha_q[pos];
                if a > PIVOT_TOL && self.lower[v].is_finite() {
                    harris = harris.min((self.x[v] - self.lower[v] + opts.primal_tol) / a);
                } else if a < -PIVOT_TOL && self.upper[v].is_finite() {
                    harris = harris.min((self.upper[v] + opts.primal_tol - self.x[v]) / -a);
                }
            }
            let mut r = usize::MAX;
            let mut best_a = 0.0;
            let mut step = 0.0;
            for (pos, &v) in self.head.iter().enumerate() {
                let a = dir * alpha_q[pos];
                let ratio = if a > PIVOT_TOL && self.lower[v].is_finite() {
                    ((self.x[v] - self.lower[v]) / a).max(0.0)
                } else if a < -PIVOT_TOL && self.upper[v].is_finite() {
                    ((self.upper[v] - self.x[v]) / -a).max(0.0)
                } else {
                    continue;
                };
                if ratio <= harris && a.abs() > best_a {
                    best_a = a.abs();
                    r = pos;
                    step = ratio;
                }
            }
            *iters += 1;
            if flip.is_finite() && (r == usize::MAX || flip <= step) {
                for (pos, &v) in self.head.iter().enumerate() {
                    self.x[v] -= dir * flip * alpha_q[pos];
                }
                self.status[q] = if dir > 0.0 { VarStatus::AtUpper } else { VarStatus::AtLower };
                self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                degenerate_run = 0;
                continue;
            }
            if r == usize::MAX {
                return Phase::Unbounded;
            }
            let leave_to = if dir * alpha_q[r] > 0.0 { VarStatus::AtLower } else { VarStatus::AtUpper };
            self.tableau_row(r, &mut alpha_row);
            self.pivot(r, q, &alpha_q, &alpha_row, dir * step, leave_to);
            if step < 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
        }
    }

    /// Largest `|a_i x - s_i|` over the rows.
    fn row_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let act: f64 = row.iter().map(|&(j, a)| a * self.x[j]).sum();
            worst = worst.max((act - self.x[self.ncols + i]).abs() / (1.0 + act.abs()));
        }
        worst
    }

    fn reset_numerics(&mut self, opts: &LpOptions) {
        self.refactor();
        self.compute_duals();
        self.repair_dual(opts.dual_tol);
        self.compute_primal();
    }

    /// Optimizes from the current basis.
    pub fn solve(&mut self, opts: &LpOptions) -> LpResult {
        let m = self.rows.len();
        let limit = opts.iteration_limit.unwrap_or(50 * (m + self.ncols).max(1));
        let mut iters = 0usize;
        for s in self.shift.iter_mut() {
            *s = 0.0;
        }
        if self.head.len() != m {
            self.head = (0..self.ncols + m).filter(|&v| self.status[v] == VarStatus::Basic).collect();
            self.factor_ok = false;
        }
        if !self.factor_ok || self.factor.updates() >= opts.refactor_every {
            self.refactor();
        }
        self.compute_duals();
        self.repair_dual(opts.dual_tol);
        self.compute_primal();

        let mut status = LpStatus::Optimal;
        let mut rounds = 0;
        loop {
            rounds += 1;
            match self.dual_phase(opts, &mut iters, limit) {
                Phase::Limit => {
                    status = LpStatus::IterationLimit;
                    break;
                }
                Phase::Infeasible => {
                    status = LpStatus::Infeasible;
                    break;
                }
                Phase::Unbounded => unreachable!("dual phase never reports unbounded"),
                Phase::Done => {}
            }
            if self.shift.iter().any(|&s| s != 0.0) {
                for s in self.shift.iter_mut() {
                    *s = 0.0;
                }
                self.compute_duals();
                match self.primal_phase(opts, &mut iters, limit) {
                    Phase::Limit => {
                        status = LpStatus::IterationLimit;
                        break;
                    }
                    Phase::Unbounded => {
                        status = LpStatus::Unbounded;
                        break;
                    }
                    _ => {}
                }
            }
            // Confirm against the rows themselves; refactor only on drift.
            self.compute_primal();
            let clean = self.head.iter().all(|&v| self.infeasibility(v, 1e-8) == 0.0)
                && self.shift.iter().all(|&s| s == 0.0)
                && self.row_residual() <= 1e-9;
            if clean || rounds >= 5 {
                break;
            }
            self.reset_numerics(opts);
        }

        let duals = self.compute_duals();
        if status == LpStatus::Optimal {
            let on_box = (0..self.ncols)
                .any(|j| self.boxed_inf[j] && (self.x[j].abs() - BOX).abs() < 1e-3 * BOX);
            if on_box {
                status = LpStatus::Unbounded;
            }
        }
        let x = self.x[..self.ncols].to_vec();
        let objective = self.cost[..self.ncols].iter().zip(&x).map(|(c, v)| c * v).sum();
        let row_activity = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(j, a)| a * x[j]).sum())
            .collect();
        LpResult {
            status,
            x,
            objective,
            row_activity,
            duals,
            reduced_costs: self.d[..self.ncols].to_vec(),
            basis: self.basis(),
            iterations: iters,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(p: &LpProblem) -> LpResult {
        solve_lp(p, None, &LpOptions::default()).unwrap()
    }

    #[test]
    fn minimize_single_nonnegative_variable() {
        let p = LpProblem::new(vec![1.0], vec![0.0], vec![f64::INFINITY]);
        let r = solve(&p);
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.x, vec![0.0]);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut p = LpProblem::new(vec![0.0], vec![-10.0], vec![10.0]);
        p.rows.push(LpRow::le(vec![(0, 1.0)], 0.0));
        p.rows.push(LpRow::ge(vec![(0, 1.0)], 1.0));
        assert_eq!(solve(&p).status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction_is_reported() {
        let p = LpProblem::new(vec![-1.0], vec![0.0], vec![f64::INFINITY]);
        assert_eq!(solve(&p).status, LpStatus::Unbounded);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36.
        let mut p = LpProblem::new(vec![-3.0, -5.0], vec![0.0; 2], vec![100.0; 2]);
        p.rows.push(LpRow::le(vec![(0, 1.0)], 4.0));
        p.rows.push(LpRow::le(vec![(1, 2.0)], 12.0));
        p.rows.push(LpRow::le(vec![(0, 3.0), (1, 2.0)], 18.0));
        let r = solve(&p);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.x[0] - 2.0).abs() < 1e-9 && (r.x[1] - 6.0).abs() < 1e-9);
        assert!((r.objective + 36.0).abs() < 1e-9);
        // Duals of the two binding rows: 0, 1.5, 1 (in max form).
        assert!((r.duals[1] + 1.5).abs() < 1e-9 && (r.duals[2] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn equality_and_ranged_rows() {
        // min x + 2y + 3z, x + y + z = 1, 0.2 <= y - z <= 0.4, z >= 0.1.
        let mut p = LpProblem::new(vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 0.1], vec![1.0; 3]);
        p.rows.push(LpRow::eq(vec![(0, 1.0), (1, 1.0), (2, 1.0)], 1.0));
        p.rows.push(LpRow { coefs: vec![(1, 1.0), (2, -1.0)], lower: 0.2, upper: 0.4 });
        let r = solve(&p);
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - (0.6 + 0.6 + 0.3)).abs() < 1e-9, "{:?}", r.x);
        assert!(p.max_violation(&r.x) < 1e-9);
    }

    #[test]
    fn warm_start_after_added_row() {
        let mut p = LpProblem::new(vec![-1.0, -1.0], vec![0.0; 2], vec![1.0; 2]);
        p.rows.push(LpRow::le(vec![(0, 1.0), (1, 2.0)], 2.0));
        let mut s = LpSolver::new(&p).unwrap();
        let r0 = s.solve(&LpOptions::default());
        assert!((r0.objective + 1.5).abs() < 1e-9);
        s.add_row(&LpRow::le(vec![(0, 2.0), (1, 1.0)], 2.0)).unwrap();
        let r1 = s.solve(&LpOptions::default());
        assert_eq!(r1.status, LpStatus::Optimal);
        assert!((r1.objective + 4.0 / 3.0).abs() < 1e-9);
        assert!(r1.objective >= r0.objective);
    }

    #[test]
    fn bound_changes_and_basis_reuse() {
        let mut p = LpProblem::new(vec![-2.0, -1.0], vec![0.0; 2], vec![1.0; 2]);
        p.rows.push(LpRow::le(vec![(0, 1.0), (1, 1.0)], 1.5));
        let mut s = LpSolver::new(&p).unwrap();
        let r = s.solve(&LpOptions::default());
        assert!((r.objective + 2.5).abs() < 1e-9);
        s.set_col_bounds(0, 0.0, 0.0);
        let r = s.solve(&LpOptions::default());
        assert!((r.objective + 1.0).abs() < 1e-9);
        s.set_col_bounds(0, 0.0, 1.0);
        let again = s.solve(&LpOptions::default());
        assert!((again.objective + 2.5).abs() < 1e-9);
        let warm = solve_lp(&p, Some(&again.basis), &LpOptions::default()).unwrap();
        assert_eq!(warm.iterations, 0);
    }

    #[test]
    fn repeated_coefficients_are_summed() {
        // x + x <= 1 is 2x <= 1.
        let mut p = LpProblem::new(vec![-1.0], vec![0.0], vec![1.0]);
        p.rows.push(LpRow::le(vec![(0, 1.0), (0, 1.0)], 1.0));
        let r = solve(&p);
        assert!((r.x[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut p = LpProblem::new(vec![-1.0, -1.0], vec![0.0; 2], vec![1.0; 2]);
        p.rows.push(LpRow::le(vec![(0, 1.0), (1, 1.0)], 1.0));
        p.rows.push(LpRow::ge(vec![(0, 1.0)], 0.5));
        let opts = LpOptions { iteration_limit: Some(0), ..Default::default() };
        assert_eq!(solve_lp(&p, None, &opts).unwrap().status, LpStatus::IterationLimit);
    }

    #[test]
    fn rejects_bad_input() {
        let p = LpProblem::new(vec![1.0], vec![1.0], vec![0.0]);
        assert!(solve_lp(&p, None, &LpOptions::default()).is_err());
        let mut p = LpProblem::new(vec![1.0], vec![0.0], vec![1.0]);
        p.rows.push(LpRow::le(vec![(3, 1.0)], 1.0));
        assert!(solve_lp(&p, None, &LpOptions::default()).is_err());
    }
}
