//! The mixed-integer model in solver-agnostic sparse form.
//!
//! Variables are `x_e` (GV edges), `w_ij` (UAV arcs, self-loops included),
//! `y_ij` (target `i` served from stop `j`) and the linearization products
//! `z_ijk = y_ik * y_jk`. Connectivity and 2-matching rows are not built here;
//! they come from the separation routines as [`Cut`]s.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::instance::{Edge, Instance};
use crate::verify::Solution;

/// Column layout of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarTable {
    n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X(Edge),
    W(usize, usize),
    Y(usize, usize),
    Z(usize, usize, usize),
}

impl VarTable {
    pub fn new(n: usize) -> Self {
        VarTable { n }
    }

    pub fn targets(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn num_cols(&self) -> usize {
        self.num_edges() + 2 * self.n * self.n + self.n * self.n * self.n
    }

    /// Column of `x_{ij}` (`i != j`, either order).
    pub fn x(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(a != b && b < self.n);
        // Edges (a, b) in lexicographic order.
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn w(&self, i: usize, j: usize) -> usize {
        self.num_edges() + i * self.n + j
    }

    pub fn y(&self, i: usize, j: usize) -> usize {
        self.num_edges() + self.n * self.n + i * self.n + j
    }

    pub fn z(&self, i: usize, j: usize, k: usize) -> usize {
        self.num_edges() + 2 * self.n * self.n + (i * self.n + j) * self.n + k
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| Edge(i, j)))
    }

    /// Inverse of the column maps.
    pub fn var(&self, col: usize) -> Var {
        let n = self.n;
        let ne = self.num_edges();
        if col < ne {
            let mut rem = col;
            for a in 0..n {
                let cnt = n - a - 1;
                if rem < cnt {
                    return Var::X(Edge(a, a + 1 + rem));
                }
                rem -= cnt;
            }
            unreachable!()
        } else if col < ne + n * n {
            let r = col - ne;
            Var::W(r / n, r % n)
        } else if col < ne + 2 * n * n {
            let r = col - ne - n * n;
            Var::Y(r / n, r % n)
        } else {
            let r = col - ne - 2 * n * n;
            Var::Z(r / (n * n), (r / n) % n, r % n)
        }
    }

    pub fn name(&self, col: usize) -> String {
        match self.var(col) {
            Var::X(e) => format!("x_{}_{}", e.0, e.1),
            Var::W(i, j) => format!("w_{i}_{j}"),
            Var::Y(i, j) => format!("y_{i}_{j}"),
            Var::Z(i, j, k) => format!("z_{i}_{j}_{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn holds(&self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Sense::Le => lhs <= rhs + tol,
            Sense::Ge => lhs >= rhs - tol,
            Sense::Eq => (lhs - rhs).abs() <= tol,
        }
    }

    /// Amount by which `lhs (sense) rhs` is violated; zero when satisfied.
    pub fn violation(&self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Sense::Le => (lhs - rhs).max(0.0),
            Sense::Ge => (rhs - lhs).max(0.0),
            Sense::Eq => (lhs - rhs).abs(),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Assignment,
    BaseIsStop,
    GvDegree,
    UavOutDegree,
    UavInDegree,
    ArcLinking,
    ProductUpperFirst,
    ProductUpperSecond,
    ProductLower,
    NeighborhoodBound,
    EdgeExclusion,
    Cut(CutKind),
}

/// A sparse linear row `sum coef * col (sense) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
    pub kind: RowKind,
}

impl Row {
    pub fn lhs(&self, values: &[f64]) -> f64 {
        self.coefs.iter().map(|&(c, a)| a * values[c]).sum()
    }

    pub fn violation(&self, values: &[f64]) -> f64 {
        self.sense.violation(self.lhs(values), self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    GvConnectivity,
    UavConnectivityIn,
    UavConnectivityOut,
    TwoMatching,
}

impl CutKind {
    pub const ALL: [CutKind; 4] = [
        CutKind::GvConnectivity,
        CutKind::UavConnectivityIn,
        CutKind::UavConnectivityOut,
        CutKind::TwoMatching,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CutKind::GvConnectivity => "gv_connectivity",
            CutKind::UavConnectivityIn => "uav_connectivity_in",
            CutKind::UavConnectivityOut => "uav_connectivity_out",
            CutKind::TwoMatching => "two_matching",
        }
    }
}

/// A generated inequality together with the sets that define it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub kind: CutKind,
    /// `S` for connectivity cuts, the handle `H` for 2-matching cuts.
    pub set: Vec<usize>,
    /// The target `i` of a connectivity cut.
    pub root: Option<usize>,
    /// Teeth of a 2-matching cut.
    pub teeth: Vec<Edge>,
    pub row: Row,
}

impl Cut {
    /// `sum_{e in delta(S)} x_e >= 2 sum_{j in S} y_ij` for `i in S`, `0 not in S`.
    pub fn gv_connectivity(vars: &VarTable, set: &[usize], i: usize) -> Cut {
        let n = vars.targets();
        let inside = membership(n, set);
        let mut coefs = Vec::new();
        for e in vars.edges() {
            if inside[e.0] != inside[e.1] {
                coefs.push((vars.x(e.0, e.1), 1.0));
            }
        }
        for &j in set {
            coefs.push((vars.y(i, j), -2.0));
        }
        Cut {
            kind: CutKind::GvConnectivity,
            set: set.to_vec(),
            root: Some(i),
            teeth: Vec::new(),
            row: Row { coefs, sense: Sense::Ge, rhs: 0.0, kind: RowKind::Cut(CutKind::GvConnectivity) },
        }
    }

    /// `sum_{[a,b] entering S} w_ab >= 1 - sum_{j in S} y_ij` (`inbound`), or
    /// the same over arcs leaving `S`.
    pub fn uav_connectivity(vars: &VarTable, set: &[usize], i: usize, inbound: bool) -> Cut {
        let n = vars.targets();
        let inside = membership(n, set);
        let mut coefs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let crossing = if inbound { !inside[a] && inside[b] } else { inside[a] && !inside[b] };
                if crossing {
                    coefs.push((vars.w(a, b), 1.0));
                }
            }
        }
        for &j in set {
            coefs.push((vars.y(i, j), 1.0));
        }
        let kind = if inbound { CutKind::UavConnectivityIn } else { CutKind::UavConnectivityOut };
        Cut {
            kind,
            set: set.to_vec(),
            root: Some(i),
            teeth: Vec::new(),
            row: Row { coefs, sense: Sense::Ge, rhs: 1.0, kind: RowKind::Cut(kind) },
        }
    }

    /// `sum_{gamma(H)} x + sum_{I} x <= sum_{i in H} y_ii + (|I| - 1) / 2`.
    pub fn two_matching(vars: &VarTable, handle: &[usize], teeth: &[Edge]) -> Cut {
        let n = vars.targets();
        let inside = membership(n, handle);
        let mut coefs = Vec::new();
        for e in vars.edges() {
            if inside[e.0] && inside[e.1] {
                coefs.push((vars.x(e.0, e.1), 1.0));
            }
        }
        for e in teeth {
            coefs.push((vars.x(e.0, e.1), 1.0));
        }
        for &i in handle {
            coefs.push((vars.y(i, i), -1.0));
        }
        Cut {
            kind: CutKind::TwoMatching,
            set: handle.to_vec(),
            root: None,
            teeth: teeth.to_vec(),
            row: Row {
                coefs,
                sense: Sense::Le,
                rhs: (teeth.len() as f64 - 1.0) / 2.0,
                kind: RowKind::Cut(CutKind::TwoMatching),
            },
        }
    }
}

fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; n];
    for &s in set {
        inside[s] = true;
    }
    inside
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeMode {
    /// Fix `y_ij = 0` whenever `j` is out of range of `i`.
    FixInfeasible,
    /// Keep every `y_ij` free and charge `f_ij` in the objective.
    PenaltyCost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelOptions {
    pub range_mode: RangeMode,
    pub valid_inequalities: bool,
    /// Binary `x` everywhere. Without it, edges at the base may carry 2 so
    /// that the out-and-back ring is representable.
    pub strict_binary_x: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions { range_mode: RangeMode::FixInfeasible, valid_inequalities: true, strict_binary_x: false }
    }
}

#[derive(Debug, Clone)]
pub struct Model {
    pub vars: VarTable,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
    pub options: ModelOptions,
}

/// Builds the static part of the model.
pub fn build_model(inst: &Instance, options: ModelOptions) -> Model {
    let n = inst.len();
    let vars = VarTable::new(n);
    let nc = vars.num_cols();
    let lower = vec![0.0; nc];
    let mut upper = vec![1.0; nc];
    let mut objective = vec![0.0; nc];

    for e in vars.edges() {
        let col = vars.x(e.0, e.1);
        objective[col] = inst.c(e.0, e.1);
        if e.0 == 0 && !options.strict_binary_x {
            upper[col] = 2.0;
        }
    }
    for i in 0..n {
        for j in 0..n {
            objective[vars.w(i, j)] = inst.d(i, j);
            if options.range_mode == RangeMode::PenaltyCost {
                objective[vars.y(i, j)] = inst.f(i, j);
            }
        }
    }
    if options.range_mode == RangeMode::FixInfeasible {
        // Out-of-range assignments, and every product / arc they make impossible.
        for i in 0..n {
            for j in 0..n {
                if !inst.in_range(i, j) {
                    upper[vars.y(i, j)] = 0.0;
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut any = false;
                for k in 0..n {
                    let col = vars.z(i, j, k);
                    if upper[vars.y(i, k)] == 0.0 || upper[vars.y(j, k)] == 0.0 {
                        upper[col] = 0.0;
                    } else {
                        any = true;
                    }
                }
                if !any {
                    upper[vars.w(i, j)] = 0.0;
                }
            }
        }
    }

    let mut rows = Vec::new();
    for i in 0..n {
        rows.push(Row {
            coefs: (0..n).map(|j| (vars.y(i, j), 1.0)).collect(),
            sense: Sense::Eq,
            rhs: 1.0,
            kind: RowKind::Assignment,
        });
    }
    rows.push(Row { coefs: vec![(vars.y(0, 0), 1.0)], sense: Sense::Eq, rhs: 1.0, kind: RowKind::BaseIsStop });
    for i in 0..n {
        let mut coefs: Vec<(usize, f64)> =
            (0..n).filter(|&j| j != i).map(|j| (vars.x(i, j), 1.0)).collect();
        coefs.push((vars.y(i, i), -2.0));
        rows.push(Row { coefs, sense: Sense::Eq, rhs: 0.0, kind: RowKind::GvDegree });
    }
    for i in 0..n {
        rows.push(Row {
            coefs: (0..n).map(|j| (vars.w(i, j), 1.0)).collect(),
            sense: Sense::Eq,
            rhs: 1.0,
            kind: RowKind::UavOutDegree,
        });
    }
    for j in 0..n {
        rows.push(Row {
            coefs: (0..n).map(|i| (vars.w(i, j), 1.0)).collect(),
            sense: Sense::Eq,
            rhs: 1.0,
            kind: RowKind::UavInDegree,
        });
    }
    for i in 0..n {
        for j in 0..n {
            let mut coefs = vec![(vars.w(i, j), 1.0)];
            coefs.extend((0..n).map(|k| (vars.z(i, j, k), -1.0)));
            rows.push(Row { coefs, sense: Sense::Le, rhs: 0.0, kind: RowKind::ArcLinking });
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let z = vars.z(i, j, k);
                rows.push(Row {
                    coefs: vec![(z, 1.0), (vars.y(i, k), -1.0)],
                    sense: Sense::Le,
                    rhs: 0.0,
                    kind: RowKind::ProductUpperFirst,
                });
                rows.push(Row {
                    coefs: vec![(z, 1.0), (vars.y(j, k), -1.0)],
                    sense: Sense::Le,
                    rhs: 0.0,
                    kind: RowKind::ProductUpperSecond,
                });
                let lower = if i == j {
                    vec![(z, 1.0), (vars.y(i, k), -2.0)]
                } else {
                    vec![(z, 1.0), (vars.y(i, k), -1.0), (vars.y(j, k), -1.0)]
                };
                rows.push(Row {
                    coefs: lower,
                    sense: Sense::Ge,
                    rhs: -1.0,
                    kind: RowKind::ProductLower,
                });
            }
        }
    }
    if options.valid_inequalities {
        for j in 0..n {
            let members: Vec<usize> = (0..n).filter(|&i| inst.in_range(i, j)).collect();
            let size = members.len() as f64;
            let mut coefs: Vec<(usize, f64)> =
                members.iter().filter(|&&i| i != j).map(|&i| (vars.y(i, j), 1.0)).collect();
            // y_jj appears on both sides.
            coefs.push((vars.y(j, j), 1.0 - size));
            rows.push(Row { coefs, sense: Sense::Le, rhs: 0.0, kind: RowKind::NeighborhoodBound });
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                rows.push(Row {
                    coefs: vec![(vars.w(i, j), 1.0), (vars.y(i, i), 1.0), (vars.y(j, j), 1.0)],
                    sense: Sense::Le,
                    rhs: 2.0,
                    kind: RowKind::EdgeExclusion,
                });
            }
        }
    }
    Model { vars, lower, upper, objective, rows, options }
}

/// Column values of an LP relaxation (or integer) point.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint {
    pub vars: VarTable,
    pub values: Vec<f64>,
}

impl FractionalPoint {
    pub fn new(vars: VarTable, values: Vec<f64>) -> Result<Self> {
        if values.len() != vars.num_cols() {
            return Err(Error::InvalidArgument(format!(
                "point has {} values, model has {} columns",
                values.len(),
                vars.num_cols()
            )));
        }
        Ok(FractionalPoint { vars, values })
    }

    pub fn from_solution(n: usize, sol: &Solution) -> Self {
        let vars = VarTable::new(n);
        FractionalPoint { vars, values: solution_columns(&vars, sol) }
    }

    pub fn targets(&self) -> usize {
        self.vars.targets()
    }

    pub fn x(&self, i: usize, j: usize) -> f64 {
        self.values[self.vars.x(i, j)]
    }

    pub fn w(&self, i: usize, j: usize) -> f64 {
        self.values[self.vars.w(i, j)]
    }

    pub fn y(&self, i: usize, j: usize) -> f64 {
        self.values[self.vars.y(i, j)]
    }

    /// Whether every non-`z` column is within `tol` of an integer.
    pub fn is_integral(&self, tol: f64) -> bool {
        self.values
            .iter()
            .enumerate()
            .filter(|&(c, _)| !matches!(self.vars.var(c), Var::Z(..)))
            .all(|(_, v)| (v - v.round()).abs() <= tol)
    }
}

/// Column values of a route plan (`z` set to the implied products).
pub fn solution_columns(vars: &VarTable, sol: &Solution) -> Vec<f64> {
    let n = vars.targets();
    let mut v = vec![0.0; vars.num_cols()];
    for (e, m) in sol.gv_edges() {
        v[vars.x(e.0, e.1)] += m as f64;
    }
    for a in sol.uav_arcs() {
        v[vars.w(a.0, a.1)] = 1.0;
    }
    for (&t, &s) in &sol.assignment {
        if t < n && s < n {
            v[vars.y(t, s)] = 1.0;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                v[vars.z(i, j, k)] = v[vars.y(i, k)] * v[vars.y(j, k)];
            }
        }
    }
    v
}

/// Total route cost; adds `sum f_ij y_ij` when `with_penalty`.
pub fn evaluate_objective(inst: &Instance, sol: &Solution, with_penalty: bool) -> Result<f64> {
    let n = inst.len();
    let check = |i: usize| {
        if i < n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, len: n })
        }
    };
    for &s in &sol.gv_ring {
        check(s)?;
    }
    for (&r, v) in &sol.subtours {
        check(r)?;
        for &t in v {
            check(t)?;
        }
    }
    for (&t, &s) in &sol.assignment {
        check(t)?;
        check(s)?;
    }
    let mut cost = 0.0;
    for (e, m) in sol.gv_edges() {
        cost += m as f64 * inst.c(e.0, e.1);
    }
    for (&root, visits) in &sol.subtours {
        if visits.is_empty() {
            continue;
        }
        let mut prev = root;
        for &t in visits {
            cost += inst.d(prev, t);
            prev = t;
        }
        cost += inst.d(prev, root);
    }
    if with_penalty {
        for (&t, &s) in &sol.assignment {
            cost += inst.f(t, s);
        }
    }
    Ok(cost)
}

/// Whether `sol` satisfies the cut's row.
pub fn check_cut_validity(inst: &Instance, cut: &Cut, sol: &Solution) -> bool {
    let vars = VarTable::new(inst.len());
    let values = solution_columns(&vars, sol);
    cut.row.coefs.iter().all(|&(c, _)| c < values.len())
        && cut.row.sense.holds(cut.row.lhs(&values), cut.row.rhs, 1e-9)
}

impl Model {
    pub fn num_cols(&self) -> usize {
        self.objective.len()
    }

    /// Whether column `col` must be integral in the mixed-integer model.
    pub fn is_integer(&self, col: usize) -> bool {
        !matches!(self.vars.var(col), Var::Z(..))
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, v)| c * v).sum()
    }

    /// Model in CPLEX LP text format.
    pub fn to_lp_string(&self, extra_rows: &[Row]) -> String {
        let mut s = String::new();
        let term = |s: &mut String, coef: f64, name: &str, first: bool| {
            if coef < 0.0 {
                let _ = write!(s, " - {} {name}", -coef);
            } else if first {
                let _ = write!(s, " {coef} {name}");
            } else {
                let _ = write!(s, " + {coef} {name}");
            }
        };
        s.push_str("\\ CAGVRP model\nMinimize\n obj:");
        let mut first = true;
        for (col, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                term(&mut s, c, &self.vars.name(col), first);
                first = false;
            }
        }
        if first {
            s.push_str(" 0");
        }
        s.push_str("\nSubject To\n");
        for (r, row) in self.rows.iter().chain(extra_rows).enumerate() {
            let _ = write!(s, " r{r}:");
            for (k, &(col, a)) in row.coefs.iter().enumerate() {
                term(&mut s, a, &self.vars.name(col), k == 0);
            }
            if row.coefs.is_empty() {
                s.push_str(" 0 x_dummy");
            }
            let _ = writeln!(s, " {} {}", row.sense, row.rhs);
        }
        s.push_str("Bounds\n");
        for col in 0..self.num_cols() {
            let _ = writeln!(s, " {} <= {} <= {}", self.lower[col], self.vars.name(col), self.upper[col]);
        }
        let (mut bin, mut gen) = (Vec::new(), Vec::new());
        for col in 0..self.num_cols() {
            if self.upper[col] > 1.0 {
                gen.push(self.vars.name(col));
            } else {
                bin.push(self.vars.name(col));
            }
        }
        if !gen.is_empty() {
            let _ = writeln!(s, "Generals\n {}", gen.join(" "));
        }
        let _ = writeln!(s, "Binaries\n {}", bin.join(" "));
        s.push_str("End\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, tiny4, InstanceClass};
    use crate::oracle::{brute_force, for_each_feasible};

    #[test]
    fn var_table_is_a_bijection() {
        let vars = VarTable::new(5);
        for col in 0..vars.num_cols() {
            let back = match vars.var(col) {
                Var::X(e) => vars.x(e.0, e.1),
                Var::W(i, j) => vars.w(i, j),
                Var::Y(i, j) => vars.y(i, j),
                Var::Z(i, j, k) => vars.z(i, j, k),
            };
            assert_eq!(back, col);
        }
        assert_eq!(vars.x(3, 1), vars.x(1, 3));
    }

    #[test]
    fn single_target_model() {
        let inst = generate_instance(InstanceClass::A, 1, 0.1, 0).unwrap();
        let m = build_model(&inst, ModelOptions::default());
        assert_eq!(m.vars.num_edges(), 0);
        let sol = Solution::gv_only(vec![0]);
        let v = solution_columns(&m.vars, &sol);
        assert_eq!(v[m.vars.y(0, 0)], 1.0);
        assert_eq!(v[m.vars.w(0, 0)], 1.0);
        // A ring made of the base alone has no edges, so only its degree row fails.
        for row in &m.rows {
            let expect_ok = row.kind != RowKind::GvDegree;
            assert_eq!(row.violation(&v) < 1e-12, expect_ok, "{row:?}");
        }
        assert_eq!(m.objective_value(&v), 0.0);
    }

    #[test]
    fn z_column_count_is_cubic() {
        for n in [2usize, 4, 7] {
            let inst = generate_instance(InstanceClass::A, n, 0.2, 1).unwrap();
            let m = build_model(&inst, ModelOptions::default());
            let z = (0..m.num_cols()).filter(|&c| matches!(m.vars.var(c), Var::Z(..))).count();
            assert_eq!(z, n * n * n);
        }
    }

    #[test]
    fn tiny4_fixes_out_of_range_assignments() {
        let m = build_model(&tiny4(), ModelOptions::default());
        assert_eq!(m.upper[m.vars.y(0, 2)], 0.0);
        assert_eq!(m.upper[m.vars.y(2, 0)], 0.0);
        assert_eq!(m.upper[m.vars.y(0, 3)], 1.0);
        let pen = build_model(&tiny4(), ModelOptions { range_mode: RangeMode::PenaltyCost, ..Default::default() });
        assert_eq!(pen.upper[pen.vars.y(0, 2)], 1.0);
        assert!(pen.objective[pen.vars.y(0, 2)] > 0.0);
    }

    #[test]
    fn bounds_stay_in_unit_box_except_base_edges() {
        let inst = generate_instance(InstanceClass::A, 6, 0.2, 3).unwrap();
        let m = build_model(&inst, ModelOptions::default());
        for col in 0..m.num_cols() {
            let hi = match m.vars.var(col) {
                Var::X(e) if e.0 == 0 => 2.0,
                _ => 1.0,
            };
            assert!(m.lower[col] >= 0.0 && m.upper[col] <= hi);
        }
        let strict = build_model(&inst, ModelOptions { strict_binary_x: true, ..Default::default() });
        assert!(strict.upper.iter().all(|&u| u <= 1.0));
    }

    #[test]
    fn linearization_rows_force_the_product() {
        // For every binary (y_ik, y_jk) the rows admit exactly z = y_ik * y_jk.
        let inst = generate_instance(InstanceClass::A, 2, 0.2, 0).unwrap();
        let m = build_model(&inst, ModelOptions { range_mode: RangeMode::PenaltyCost, ..Default::default() });
        let (i, j, k) = (0, 1, 1);
        let rows: Vec<&Row> = m
            .rows
            .iter()
            .filter(|r| {
                matches!(r.kind, RowKind::ProductLower | RowKind::ProductUpperFirst | RowKind::ProductUpperSecond)
                    && r.coefs[0].0 == m.vars.z(i, j, k)
            })
            .collect();
        assert_eq!(rows.len(), 3);
        for yik in [0.0, 1.0] {
            for yjk in [0.0, 1.0] {
                let feasible_z: Vec<f64> = [0.0, 1.0]
                    .into_iter()
                    .filter(|&z| {
                        let mut v = vec![0.0; m.num_cols()];
                        v[m.vars.y(i, k)] = yik;
                        v[m.vars.y(j, k)] = yjk;
                        v[m.vars.z(i, j, k)] = z;
                        rows.iter().all(|r| r.violation(&v) < 1e-12)
                    })
                    .collect();
                assert_eq!(feasible_z, vec![yik * yjk]);
            }
        }
    }

    #[test]
    fn feasible_solutions_satisfy_static_rows() {
        for seed in 0..3 {
            let inst = generate_instance(InstanceClass::A, 5, 0.2, seed).unwrap();
            for opts in [
                ModelOptions::default(),
                ModelOptions { range_mode: RangeMode::PenaltyCost, valid_inequalities: true, strict_binary_x: false },
            ] {
                let m = build_model(&inst, opts);
                for_each_feasible(&inst, 20_000, |s| {
                    let v = solution_columns(&m.vars, s);
                    let with_pen = opts.range_mode == RangeMode::PenaltyCost;
                    assert!(
                        (m.objective_value(&v) - evaluate_objective(&inst, s, with_pen).unwrap()).abs() < 1e-9
                    );
                    if s.gv_ring.len() == 1 && inst.len() > 1 {
                        return; // base-only ring lives outside the rows
                    }
                    for row in &m.rows {
                        assert!(row.violation(&v) < 1e-9, "{row:?} violated by {s:?}");
                    }
                    for col in 0..m.num_cols() {
                        assert!(v[col] >= m.lower[col] && v[col] <= m.upper[col]);
                    }
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn objective_of_example_solution() {
        let t = tiny4();
        let sol = Solution::from_routes(vec![0, 1], [(1, vec![2, 3])].into_iter().collect());
        let expect = 2.0 * t.c(0, 1) + t.d(1, 2) + t.d(2, 3) + t.d(3, 1);
        assert!((evaluate_objective(&t, &sol, false).unwrap() - expect).abs() < 1e-12);
        assert!((evaluate_objective(&t, &sol, true).unwrap() - expect).abs() < 1e-12);
        let opt = brute_force(&t).unwrap();
        assert!((evaluate_objective(&t, &opt.solution, false).unwrap() - opt.cost).abs() < 1e-12);
        assert!(evaluate_objective(&t, &Solution::gv_only(vec![0, 9]), false).is_err());
        let far = Solution::from_routes(vec![0, 1], [(0, vec![2, 3])].into_iter().collect());
        assert!(evaluate_objective(&t, &far, true).unwrap() > 1000.0);
    }

    #[test]
    fn cut_validity_checks() {
        let t = tiny4();
        let vars = VarTable::new(4);
        let sol = brute_force(&t).unwrap().solution;
        let gv = Cut::gv_connectivity(&vars, &[2, 3], 2);
        assert!(check_cut_validity(&t, &gv, &sol));
        let tm = Cut::two_matching(&vars, &[1], &[Edge(0, 1), Edge(1, 2), Edge(1, 3)]);
        assert!(check_cut_validity(&t, &tm, &sol));
        let bogus = Cut {
            kind: CutKind::GvConnectivity,
            set: vec![],
            root: None,
            teeth: vec![],
            row: Row { coefs: vec![], sense: Sense::Ge, rhs: 1.0, kind: RowKind::Cut(CutKind::GvConnectivity) },
        };
        assert!(!check_cut_validity(&t, &bogus, &sol));
    }

    #[test]
    fn lp_export_mentions_every_column() {
        let m = build_model(&tiny4(), ModelOptions::default());
        let text = m.to_lp_string(&[]);
        assert!(text.starts_with("\\ CAGVRP model\nMinimize"));
        assert!(text.contains("Subject To") && text.contains("Bounds") && text.ends_with("End\n"));
        assert!(text.contains("z_3_3_3") && text.contains("Generals\n x_0_1"));
    }
}
