//! The LP relaxation as seen by the tree search: the static model after
//! bound propagation, with fixed columns substituted out.

use crate::error::Result;
use crate::formulation::{Model, Row, Sense};
use crate::lp::{LpOptions, LpProblem, LpResult, LpRow, LpSolver};

const PROP_TOL: f64 = 1e-9;
/// Tightenings smaller than this are not worth another propagation pass.
const MIN_TIGHTENING: f64 = 1e-6;

/// Tightens `lower`/`upper` using every row. Returns `false` when the
/// bounds prove the rows infeasible.
pub(crate) fn propagate(rows: &[Row], integer: &[bool], lower: &mut [f64], upper: &mut [f64]) -> bool {
    for _ in 0..50 {
        let mut changed = false;
        for row in rows {
            let (mut min_act, mut max_act) = (0.0, 0.0);
            for &(c, a) in &row.coefs {
                if a > 0.0 {
                    min_act += a * lower[c];
                    max_act += a * upper[c];
                } else {
                    min_act += a * upper[c];
                    max_act += a * lower[c];
                }
            }
            let upper_side = matches!(row.sense, Sense::Le | Sense::Eq);
            let lower_side = matches!(row.sense, Sense::Ge | Sense::Eq);
            if upper_side && min_act > row.rhs + PROP_TOL {
                return false;
            }
            if lower_side && max_act < row.rhs - PROP_TOL {
                return false;
            }
            for &(c, a) in &row.coefs {
                let (own_min, own_max) = if a > 0.0 { (a * lower[c], a * upper[c]) } else { (a * upper[c], a * lower[c]) };
                let mut lo = lower[c];
                let mut hi = upper[c];
                if upper_side {
                    let limit = (row.rhs - (min_act - own_min)) / a;
                    if a > 0.0 {
                        hi = hi.min(limit);
                    } else {
                        lo = lo.max(limit);
                    }
                }
                if lower_side {
                    let limit = (row.rhs - (max_act - own_max)) / a;
                    if a > 0.0 {
                        lo = lo.max(limit);
                    } else {
                        hi = hi.min(limit);
                    }
                }
                if integer[c] {
                    hi = (hi + PROP_TOL).floor();
                    lo = (lo - PROP_TOL).ceil();
                }
                if lo > hi + PROP_TOL {
                    return false;
                }
                if lo > hi {
                    lo = hi;
                }
                if hi < upper[c] - MIN_TIGHTENING {
                    upper[c] = hi.max(lower[c]);
                    changed = true;
                }
                if lo > lower[c] + MIN_TIGHTENING {
                    lower[c] = lo.min(upper[c]);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    true
}

#[derive(Debug, Clone)]
pub(crate) struct Relaxation {
    pub lp_to_model: Vec<usize>,
    model_to_lp: Vec<Option<usize>>,
    /// Model-space values of fixed columns (zero elsewhere).
    fixed: Vec<f64>,
    pub root_lower: Vec<f64>,
    pub root_upper: Vec<f64>,
    pub integer: Vec<bool>,
    pub solver: LpSolver,
}

impl Relaxation {
    /// `None` when propagation proves the model infeasible.
    pub fn build(model: &Model) -> Result<Option<Relaxation>> {
        let nc = model.num_cols();
        let integer: Vec<bool> = (0..nc).map(|c| model.is_integer(c)).collect();
        let mut lower = model.lower.clone();
        let mut upper = model.upper.clone();
        if !propagate(&model.rows, &integer, &mut lower, &mut upper) {
            return Ok(None);
        }
        let mut lp_to_model = Vec::new();
        let mut model_to_lp = vec![None; nc];
        let mut fixed = vec![0.0; nc];
        for c in 0..nc {
            if upper[c] - lower[c] <= PROP_TOL {
                fixed[c] = lower[c];
            } else {
                model_to_lp[c] = Some(lp_to_model.len());
                lp_to_model.push(c);
            }
        }
        let objective = lp_to_model.iter().map(|&c| model.objective[c]).collect();
        let root_lower: Vec<f64> = lp_to_model.iter().map(|&c| lower[c]).collect();
        let root_upper: Vec<f64> = lp_to_model.iter().map(|&c| upper[c]).collect();
        let lp_integer = lp_to_model.iter().map(|&c| integer[c]).collect();
        let mut rel = Relaxation {
            lp_to_model,
            model_to_lp,
            fixed,
            root_lower: root_lower.clone(),
            root_upper: root_upper.clone(),
            integer: lp_integer,
            solver: LpSolver::new(&LpProblem::new(objective, root_lower, root_upper))?,
        };
        for row in &model.rows {
            match rel.translate(row, true) {
                Translated::Row(r) => rel.solver.add_row(&r)?,
                Translated::Redundant => {}
                Translated::Infeasible => return Ok(None),
            }
        }
        Ok(Some(rel))
    }

    /// Objective contribution of the fixed columns.
    pub fn fixed_objective(&self, model: &Model) -> f64 {
        model.objective.iter().zip(&self.fixed).map(|(c, v)| c * v).sum()
    }

    #[cfg(test)]
    pub fn lp_col(&self, model_col: usize) -> Option<usize> {
        self.model_to_lp[model_col]
    }

    /// Rewrites a model row over LP columns. With `drop_redundant`, rows that
    /// the root bounds already satisfy are discarded.
    pub fn translate(&self, row: &Row, drop_redundant: bool) -> Translated {
        let mut rhs = row.rhs;
        let mut coefs = Vec::with_capacity(row.coefs.len());
        let (mut min_act, mut max_act) = (0.0, 0.0);
        for &(c, a) in &row.coefs {
            match self.model_to_lp[c] {
                Some(j) => {
                    coefs.push((j, a));
                    let (l, u) = (self.root_lower[j], self.root_upper[j]);
                    if a > 0.0 {
                        min_act += a * l;
                        max_act += a * u;
                    } else {
                        min_act += a * u;
                        max_act += a * l;
                    }
                }
                None => rhs -= a * self.fixed[c],
            }
        }
        let upper_ok = !matches!(row.sense, Sense::Le | Sense::Eq) || max_act <= rhs + PROP_TOL;
        let lower_ok = !matches!(row.sense, Sense::Ge | Sense::Eq) || min_act >= rhs - PROP_TOL;
        if coefs.is_empty() {
            return if upper_ok && lower_ok { Translated::Redundant } else { Translated::Infeasible };
        }
        if drop_redundant && upper_ok && lower_ok {
            return Translated::Redundant;
        }
        Translated::Row(match row.sense {
            Sense::Le => LpRow::le(coefs, rhs),
            Sense::Ge => LpRow::ge(coefs, rhs),
            Sense::Eq => LpRow::eq(coefs, rhs),
        })
    }

    /// Model-space values of an LP solution.
    pub fn expand(&self, x: &[f64]) -> Vec<f64> {
        let mut v = self.fixed.clone();
        for (j, &c) in self.lp_to_model.iter().enumerate() {
            v[c] = x[j];
        }
        v
    }

    pub fn solve(&mut self, opts: &LpOptions) -> LpResult {
        self.solver.solve(opts)
    }
}

pub(crate) enum Translated {
    Row(LpRow),
    Redundant,
    Infeasible,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::{build_model, ModelOptions, RowKind};
    use crate::instance::tiny4;

    #[test]
    fn propagation_fixes_base_assignment() {
        let m = build_model(&tiny4(), ModelOptions::default());
        let rel = Relaxation::build(&m).unwrap().unwrap();
        // y_00 = 1 forces y_0j = 0 through the assignment row of 0.
        assert!(rel.lp_col(m.vars.y(0, 0)).is_none());
        assert!(rel.lp_col(m.vars.y(0, 1)).is_none());
        assert!(rel.fixed[m.vars.y(0, 0)] == 1.0);
        assert!(rel.lp_to_model.len() < m.num_cols());
    }

    #[test]
    fn infeasible_rows_detected() {
        let rows = vec![
            Row { coefs: vec![(0, 1.0), (1, 1.0)], sense: Sense::Ge, rhs: 3.0, kind: RowKind::Assignment },
        ];
        let (mut lo, mut hi) = (vec![0.0, 0.0], vec![1.0, 1.0]);
        assert!(!propagate(&rows, &[true, true], &mut lo, &mut hi));
        let rows = vec![
            Row { coefs: vec![(0, 1.0), (1, 1.0)], sense: Sense::Ge, rhs: 1.5, kind: RowKind::Assignment },
        ];
        let (mut lo, mut hi) = (vec![0.0, 0.0], vec![1.0, 1.0]);
        assert!(propagate(&rows, &[true, true], &mut lo, &mut hi));
        assert_eq!(lo, vec![1.0, 1.0]);
        let (mut lo, mut hi) = (vec![0.0, 0.0], vec![1.0, 1.0]);
        assert!(propagate(&rows, &[false, false], &mut lo, &mut hi));
        assert_eq!(lo, vec![0.5, 0.5]);
    }
}
