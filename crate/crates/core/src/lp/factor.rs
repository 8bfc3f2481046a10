//! Product-form basis inverse.
//!
//! The basis is `B = B0 E1 ... Ek` with `B0 = -I` (every row held by its
//! logical) and each eta matrix `Ei` replacing one column. Reinversion pivots
//! the structural basic columns in one at a time; simplex iterations append
//! one eta each.

#[derive(Debug, Clone)]
struct Eta {
    pivot_row: usize,
    pivot: f64,
    /// Off-pivot entries of the transformed column.
    entries: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Factor {
    etas: Vec<Eta>,
    /// Etas produced by the last reinversion.
    base: usize,
}

const DROP_TOL: f64 = 1e-13;
pub(crate) const PIVOT_TOL: f64 = 1e-9;

impl Factor {
    /// Etas added by basis updates since the last reinversion.
    pub fn updates(&self) -> usize {
        self.etas.len() - self.base
    }

    /// Replaces the basis column at `row` by a column whose FTRAN is `alpha`.
    pub fn push(&mut self, row: usize, alpha: &[f64]) {
        let entries: Vec<(usize, f64)> = alpha
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != row && v.abs() > DROP_TOL)
            .map(|(i, &v)| (i, v))
            .collect();
        self.etas.push(Eta { pivot_row: row, pivot: alpha[row], entries });
    }

    /// `v <- B^{-1} v`.
    pub fn ftran(&self, v: &mut [f64]) {
        for x in v.iter_mut() {
            *x = -*x;
        }
        for eta in &self.etas {
            let vp = v[eta.pivot_row];
            if vp == 0.0 {
                continue;
            }
            let w = vp / eta.pivot;
            for &(i, e) in &eta.entries {
                v[i] -= e * w;
            }
            v[eta.pivot_row] = w;
        }
    }

    /// `u <- u^T B^{-1}`.
    pub fn btran(&self, u: &mut [f64]) {
        for eta in self.etas.iter().rev() {
            let mut s = u[eta.pivot_row];
            for &(i, e) in &eta.entries {
                s -= u[i] * e;
            }
            u[eta.pivot_row] = s / eta.pivot;
        }
        for x in u.iter_mut() {
            *x = -*x;
        }
    }
}

/// Outcome of a reinversion: which variable holds each row, and the
/// structural candidates that had to be dropped as dependent.
pub(crate) struct Reinverted {
    pub factor: Factor,
    pub head: Vec<usize>,
    pub rejected: Vec<usize>,
}

/// Factorizes the basis formed by `candidates` (variable indices; logicals
/// are `ncols + row`). Rows left uncovered are given their logicals.
pub(crate) fn reinvert(
    m: usize,
    ncols: usize,
    cols: &[Vec<(usize, f64)>],
    candidates: &[usize],
) -> Reinverted {
    const NONE: usize = usize::MAX;
    let mut head = vec![NONE; m];
    let mut structurals = Vec::new();
    let mut rejected = Vec::new();
    for &v in candidates {
        if v >= ncols {
            let r = v - ncols;
            if head[r] == NONE {
                head[r] = v;
            } else {
                rejected.push(v);
            }
        } else {
            structurals.push(v);
        }
    }
    // Short columns first keeps the eta file sparse on these models.
    structurals.sort_by_key(|&j| (cols[j].len(), j));
    let mut row_count = vec![0usize; m];
    for &j in &structurals {
        for &(i, _) in &cols[j] {
            row_count[i] += 1;
        }
    }

    let mut factor = Factor::default();
    let mut work = vec![0.0; m];
    let mut mark = vec![false; m];
    let mut pattern: Vec<usize> = Vec::new();
    for &j in &structurals {
        // Sparse FTRAN through the etas built so far (B0 = -I first).
        for &(i, a) in &cols[j] {
            work[i] = -a;
            mark[i] = true;
            pattern.push(i);
        }
        for eta in &factor.etas {
            let vp = work[eta.pivot_row];
            if vp == 0.0 {
                continue;
            }
            let w = vp / eta.pivot;
            for &(i, e) in &eta.entries {
                if !mark[i] {
                    mark[i] = true;
                    pattern.push(i);
                }
                work[i] -= e * w;
            }
            work[eta.pivot_row] = w;
        }
        // Threshold pivoting: among large enough entries, the sparsest row.
        let max_abs = pattern.iter().filter(|&&i| head[i] == NONE).map(|&i| work[i].abs()).fold(0.0, f64::max);
        let mut best = NONE;
        if max_abs > PIVOT_TOL * 100.0 {
            let floor = (0.1 * max_abs).max(PIVOT_TOL * 100.0);
            let mut best_key = (usize::MAX, 0.0, usize::MAX);
            for &i in &pattern {
                let v = work[i].abs();
                if head[i] != NONE || v < floor {
                    continue;
                }
                let better = row_count[i] < best_key.0
                    || (row_count[i] == best_key.0 && (v > best_key.1 || (v == best_key.1 && i < best_key.2)));
                if better {
                    best_key = (row_count[i], v, i);
                    best = i;
                }
            }
        }
        for &(i, _) in &cols[j] {
            row_count[i] -= 1;
        }
        if best == NONE {
            rejected.push(j);
        } else {
            head[best] = j;
            let mut entries: Vec<(usize, f64)> =
                pattern.iter().filter(|&&i| i != best && work[i].abs() > DROP_TOL).map(|&i| (i, work[i])).collect();
            entries.sort_unstable_by_key(|e| e.0);
            factor.etas.push(Eta { pivot_row: best, pivot: work[best], entries });
        }
        for &i in &pattern {
            work[i] = 0.0;
            mark[i] = false;
        }
        pattern.clear();
    }
    for (r, h) in head.iter_mut().enumerate() {
        if *h == NONE {
            *h = ncols + r;
        }
    }
    factor.base = factor.etas.len();
    Reinverted { factor, head, rejected }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_basis(m: usize, ncols: usize, cols: &[Vec<(usize, f64)>], head: &[usize]) -> Vec<Vec<f64>> {
        let mut b = vec![vec![0.0; m]; m];
        for (pos, &v) in head.iter().enumerate() {
            if v >= ncols {
                b[v - ncols][pos] = -1.0;
            } else {
                for &(i, a) in &cols[v] {
                    b[i][pos] = a;
                }
            }
        }
        b
    }

    #[test]
    fn ftran_and_btran_invert_the_basis() {
        let cols = vec![
            vec![(0, 2.0), (1, 1.0)],
            vec![(1, 3.0), (2, -1.0)],
            vec![(0, 1.0), (2, 4.0)],
        ];
        let re = reinvert(3, 3, &cols, &[0, 1, 2]);
        assert!(re.rejected.is_empty());
        let b = dense_basis(3, 3, &cols, &re.head);
        let rhs = [1.0, -2.0, 0.5];
        let mut x = rhs.to_vec();
        re.factor.ftran(&mut x);
        for i in 0..3 {
            let bx: f64 = (0..3).map(|k| b[i][k] * x[k]).sum();
            assert!((bx - rhs[i]).abs() < 1e-12);
        }
        let mut u = rhs.to_vec();
        re.factor.btran(&mut u);
        for k in 0..3 {
            let ub: f64 = (0..3).map(|i| u[i] * b[i][k]).sum();
            assert!((ub - rhs[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn dependent_columns_are_rejected() {
        let cols = vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 2.0), (1, 2.0)]];
        let re = reinvert(2, 2, &cols, &[0, 1]);
        assert_eq!(re.rejected, vec![1]);
        assert!(re.head.contains(&0));
        assert!(re.head.iter().any(|&h| h >= 2));
    }

    #[test]
    fn logicals_keep_their_rows() {
        let cols = vec![vec![(0, 1.0), (1, 1.0)]];
        let re = reinvert(2, 1, &cols, &[1, 0]);
        assert_eq!(re.head, vec![1, 0]);
    }
}
