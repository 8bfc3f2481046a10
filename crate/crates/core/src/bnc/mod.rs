//! Branch-and-cut for the full model.
//!
//! Connectivity and 2-matching inequalities are generated on demand and kept
//! in one global pool that every node's LP carries. Nodes are explored in
//! best-bound order; integral LP points are accepted only after the exact
//! connectivity separators come back empty and [`check_integer_point`]
//! rebuilds a feasible route plan from them.

mod relax;
mod rounding;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::time::{Duration, Instant};

use log::{debug, info, warn};

use crate::error::{Error, Result};
use crate::formulation::{build_model, Cut, CutKind, FractionalPoint, ModelOptions, RangeMode, Var};
use crate::instance::{Arc, Edge, Instance};
use crate::lp::{Basis, LpOptions, LpStatus};
use crate::separation::{separate_gv_connectivity, separate_two_matching, separate_uav_connectivity, strongest};
use crate::tolerance::{COST_TOL, INT_TOL};
use crate::tsp::{tsp_exact_small, tsp_heuristic, EXACT_MAX_NODES};
use crate::verify::{check_feasibility, check_integer_point, IntegerPoint, Solution};

use relax::{Relaxation, Translated};
pub use rounding::lp_rounding;

#[derive(Debug, Clone)]
pub struct SolveParams {
    pub time_limit: Duration,
    pub node_limit: Option<usize>,
    pub use_rounding: bool,
    /// Include the static valid inequalities and separate 2-matching cuts.
    pub use_valid_ineq: bool,
    pub range_mode: RangeMode,
    pub strict_binary_x: bool,
    pub cut_rounds_per_node: usize,
    pub cuts_per_round: usize,
    /// A known feasible plan to start from.
    pub initial_incumbent: Option<Solution>,
    pub lp: LpOptions,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            time_limit: Duration::from_secs(600),
            node_limit: None,
            use_rounding: true,
            use_valid_ineq: true,
            range_mode: RangeMode::FixInfeasible,
            strict_binary_x: false,
            cut_rounds_per_node: 20,
            cuts_per_round: 50,
            initial_incumbent: None,
            lp: LpOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    TimeLimit,
    Infeasible,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::TimeLimit => "time_limit",
            SolveStatus::Infeasible => "infeasible",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub incumbent: Option<Solution>,
    /// Cost of the incumbent (`inf` without one).
    pub cost: f64,
    pub bound: f64,
    pub root_bound: f64,
    pub gap: f64,
    pub nodes: usize,
    pub cuts: BTreeMap<CutKind, usize>,
    pub rounding_successes: usize,
    pub lp_iterations: usize,
    pub wall_time: Duration,
}

impl SolveReport {
    pub fn total_cuts(&self) -> usize {
        self.cuts.values().sum()
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status={}", self.status)?;
        writeln!(f, "cost={}", self.cost)?;
        writeln!(f, "bound={}", self.bound)?;
        writeln!(f, "root_bound={}", self.root_bound)?;
        writeln!(f, "gap={}", self.gap)?;
        writeln!(f, "nodes={}", self.nodes)?;
        for kind in CutKind::ALL {
            writeln!(f, "cuts_{}={}", kind.label(), self.cuts.get(&kind).copied().unwrap_or(0))?;
        }
        writeln!(f, "rounding_successes={}", self.rounding_successes)?;
        writeln!(f, "lp_iterations={}", self.lp_iterations)?;
        write!(f, "seconds={:.3}", self.wall_time.as_secs_f64())
    }
}

/// Relative gap `(incumbent - bound) / incumbent`, clamped at zero.
fn gap(incumbent: f64, bound: f64) -> f64 {
    if !incumbent.is_finite() {
        return f64::INFINITY;
    }
    if incumbent.abs() < 1e-12 {
        return if bound >= incumbent - COST_TOL { 0.0 } else { f64::INFINITY };
    }
    ((incumbent - bound) / incumbent.abs()).max(0.0)
}

#[derive(Debug, Clone)]
struct Node {
    id: usize,
    depth: usize,
    bound: f64,
    /// `(lp column, lower, upper)` overrides of the root bounds.
    fixings: Vec<(usize, f64, f64)>,
    basis: Option<Basis>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    /// Max-heap order: smallest bound first, then deeper, then older.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

struct Incumbent {
    solution: Option<Solution>,
    cost: f64,
}

impl Incumbent {
    fn offer(&mut self, inst: &Instance, sol: Solution, source: &str) -> bool {
        if !check_feasibility(inst, &sol).ok() {
            warn!("{source} produced an infeasible plan; ignored");
            return false;
        }
        let cost = plan_cost(inst, &sol);
        if cost < self.cost - 1e-9 {
            debug!("new incumbent {cost:.6} from {source}");
            self.cost = cost;
            self.solution = Some(sol);
            true
        } else {
            false
        }
    }
}

fn plan_cost(inst: &Instance, sol: &Solution) -> f64 {
    crate::formulation::evaluate_objective(inst, sol, false).unwrap_or(f64::INFINITY)
}

/// The plan where the GV never leaves the base and one UAV tour covers every
/// target. It lies outside the model's rows, so it is priced separately.
/// Returns the plan and whether its cost is exact.
fn base_only_plan(inst: &Instance) -> Option<(Solution, bool)> {
    let n = inst.len();
    if !(1..n).all(|t| inst.in_range(t, 0)) {
        return None;
    }
    let nodes: Vec<usize> = (0..n).collect();
    let (tour, exact) = if n <= EXACT_MAX_NODES {
        (tsp_exact_small(inst.uav_costs(), &nodes).ok()?, true)
    } else {
        (tsp_heuristic(inst.uav_costs(), &nodes), false)
    };
    let start = tour.order.iter().position(|&v| v == 0)?;
    let mut order = tour.order.clone();
    order.rotate_left(start);
    let mut subtours = BTreeMap::new();
    if n > 1 {
        subtours.insert(0, order[1..].to_vec());
    }
    Some((Solution::from_routes(vec![0], subtours), exact))
}

fn integer_point(inst: &Instance, point: &FractionalPoint) -> IntegerPoint {
    let n = inst.len();
    let mut edges = Vec::new();
    for e in point.vars.edges() {
        let m = point.x(e.0, e.1).round();
        if m >= 1.0 {
            edges.push((Edge(e.0, e.1), m as u8));
        }
    }
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if point.w(i, j) >= 0.5 {
                arcs.push(Arc(i, j));
            }
        }
    }
    let root = (0..n)
        .map(|i| (0..n).max_by(|&a, &b| point.y(i, a).total_cmp(&point.y(i, b))).unwrap_or(i))
        .collect();
    IntegerPoint { edges, arcs, root }
}

/// Column to branch on: most fractional `y_ii`, then `x_e`, then `w_ij`, then
/// `y_ij`; ties go to the lowest column.
fn branching_column(rel: &Relaxation, model_vars: &crate::formulation::VarTable, x: &[f64]) -> Option<usize> {
    let mut best: [Option<(f64, usize)>; 4] = [None; 4];
    for (j, &c) in rel.lp_to_model.iter().enumerate() {
        if !rel.integer[j] {
            continue;
        }
        let v = x[j];
        let frac = v - v.floor();
        let score = frac.min(1.0 - frac);
        if score <= INT_TOL {
            continue;
        }
        let class = match model_vars.var(c) {
            Var::Y(a, b) if a == b => 0,
            Var::X(_) => 1,
            Var::W(..) => 2,
            Var::Y(..) => 3,
            Var::Z(..) => continue,
        };
        if best[class].map_or(true, |(s, _)| score > s + 1e-12) {
            best[class] = Some((score, j));
        }
    }
    best.iter().flatten().next().map(|&(_, j)| j)
}

/// Solves an instance to proven optimality (or until a limit is hit).
pub fn solve_exact(inst: &Instance, params: &SolveParams) -> Result<SolveReport> {
    let start = Instant::now();
    let n = inst.len();
    if n == 0 {
        return Err(Error::InvalidArgument("instance has no targets".into()));
    }
    let mut cuts_by_kind: BTreeMap<CutKind, usize> = CutKind::ALL.iter().map(|&k| (k, 0)).collect();
    let mut incumbent = Incumbent { solution: None, cost: f64::INFINITY };
    if let Some(sol) = &params.initial_incumbent {
        incumbent.offer(inst, sol.clone(), "initial plan");
    }
    let mut extra_bound = f64::INFINITY;
    if let Some((plan, exact)) = base_only_plan(inst) {
        let cost = plan_cost(inst, &plan);
        incumbent.offer(inst, plan, "base-only plan");
        if exact {
            extra_bound = cost;
        }
    }
    let finish = |status, incumbent: Incumbent, bound: f64, root_bound, nodes, cuts, rounding, iters| {
        let bound = if status == SolveStatus::Optimal { incumbent.cost } else { bound.min(incumbent.cost) };
        SolveReport {
            status,
            gap: gap(incumbent.cost, bound),
            cost: incumbent.cost,
            incumbent: incumbent.solution,
            bound,
            root_bound,
            nodes,
            cuts,
            rounding_successes: rounding,
            lp_iterations: iters,
            wall_time: start.elapsed(),
        }
    };
    if n == 1 {
        return Ok(finish(SolveStatus::Optimal, incumbent, 0.0, 0.0, 1, cuts_by_kind, 0, 0));
    }

    let model = build_model(
        inst,
        ModelOptions {
            range_mode: params.range_mode,
            valid_inequalities: params.use_valid_ineq,
            strict_binary_x: params.strict_binary_x,
        },
    );
    let Some(mut rel) = Relaxation::build(&model)? else {
        let status = if incumbent.solution.is_some() { SolveStatus::Optimal } else { SolveStatus::Infeasible };
        return Ok(finish(status, incumbent, extra_bound, extra_bound, 0, cuts_by_kind, 0, 0));
    };
    let offset = rel.fixed_objective(&model);
    info!(
        "model: {} columns, {} rows; relaxation: {} columns, {} rows",
        model.num_cols(),
        model.rows.len(),
        rel.solver.num_cols(),
        rel.solver.num_rows()
    );

    let mut heap = BinaryHeap::new();
    heap.push(Node { id: 0, depth: 0, bound: f64::NEG_INFINITY, fixings: Vec::new(), basis: None });
    let mut next_id = 1;
    let mut nodes = 0usize;
    let mut rounding_successes = 0usize;
    let mut lp_iterations = 0usize;
    let mut root_bound = f64::NEG_INFINITY;
    let mut limit_hit = false;
    let mut unresolved_bound = f64::INFINITY;
    let prune_tol = 1e-7;

    while let Some(node) = heap.pop() {
        if node.bound >= incumbent.cost - prune_tol {
            continue;
        }
        if start.elapsed() >= params.time_limit || params.node_limit.is_some_and(|l| nodes >= l) {
            heap.push(node);
            limit_hit = true;
            break;
        }
        nodes += 1;
        for j in 0..rel.solver.num_cols() {
            rel.solver.set_col_bounds(j, rel.root_lower[j], rel.root_upper[j]);
        }
        for &(j, lo, hi) in &node.fixings {
            let (cl, cu) = rel.solver.col_bounds(j);
            rel.solver.set_col_bounds(j, lo.max(cl), hi.min(cu));
        }
        if let Some(b) = &node.basis {
            rel.solver.set_basis(b)?;
        }

        let mut rounds = 0usize;
        let outcome = loop {
            let mut res = rel.solve(&params.lp);
            lp_iterations += res.iterations;
            if res.status == LpStatus::IterationLimit {
                warn!("LP iteration limit at node {}; retrying from the slack basis", node.id);
                let slack = Basis {
                    cols: vec![crate::lp::VarStatus::AtLower; rel.solver.num_cols()],
                    rows: vec![crate::lp::VarStatus::Basic; rel.solver.num_rows()],
                };
                rel.solver.set_basis(&slack)?;
                let opts = LpOptions { iteration_limit: Some(usize::MAX), ..params.lp };
                res = rel.solve(&opts);
                lp_iterations += res.iterations;
            }
            match res.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => break NodeOutcome::Pruned,
                other => {
                    warn!("LP returned {other} at node {}; node left unresolved", node.id);
                    break NodeOutcome::Unresolved(node.bound);
                }
            }
            let value = (res.objective + offset).max(node.bound);
            if node.id == 0 {
                root_bound = value;
            }
            if value >= incumbent.cost - prune_tol {
                break NodeOutcome::Pruned;
            }
            let values = rel.expand(&res.x);
            let point = FractionalPoint::new(model.vars, values)?;
            let integral = rel.integer.iter().zip(&res.x).all(|(&int, &v)| !int || (v - v.round()).abs() <= INT_TOL);

            let mut found: Vec<(Cut, f64)> = Vec::new();
            found.extend(separate_gv_connectivity(&point, inst));
            found.extend(separate_uav_connectivity(&point, inst));
            if params.use_valid_ineq {
                found.extend(separate_two_matching(&point, inst));
            }
            let over_budget = rounds >= params.cut_rounds_per_node || start.elapsed() >= params.time_limit;
            if !found.is_empty() && (integral || !over_budget) {
                let mut added = 0;
                for cut in strongest(found, params.cuts_per_round) {
                    match rel.translate(&cut.row, false) {
                        Translated::Row(r) => {
                            rel.solver.add_row(&r)?;
                            *cuts_by_kind.entry(cut.kind).or_insert(0) += 1;
                            added += 1;
                        }
                        Translated::Infeasible => {
                            // Only fixed columns remain and they violate the cut.
                            break;
                        }
                        Translated::Redundant => {}
                    }
                }
                if added > 0 {
                    rounds += 1;
                    continue;
                }
            }

            if integral {
                let (report, plan) = check_integer_point(inst, &integer_point(inst, &point));
                match plan {
                    Some(sol) => {
                        incumbent.offer(inst, sol, "integral LP point");
                    }
                    None => warn!(
                        "integral point at node {} rejected without a separating cut: {}",
                        node.id,
                        crate::verify::describe(&report)
                    ),
                }
                break NodeOutcome::Pruned;
            }
            if params.use_rounding {
                if let Some(sol) = lp_rounding(&point, inst) {
                    if incumbent.offer(inst, sol, "LP rounding") {
                        rounding_successes += 1;
                    }
                }
                if value >= incumbent.cost - prune_tol {
                    break NodeOutcome::Pruned;
                }
            }
            match branching_column(&rel, &model.vars, &res.x) {
                Some(j) => break NodeOutcome::Branch { value, col: j, x: res.x[j], basis: res.basis },
                None => break NodeOutcome::Pruned,
            }
        };

        match outcome {
            NodeOutcome::Pruned => {}
            NodeOutcome::Unresolved(b) => unresolved_bound = unresolved_bound.min(b),
            NodeOutcome::Branch { value, col, x, basis } => {
                let (lo, hi) = rel.solver.col_bounds(col);
                let down = (col, lo, x.floor());
                let up = (col, x.ceil(), hi);
                for fix in [down, up] {
                    let mut fixings = node.fixings.clone();
                    fixings.push(fix);
                    heap.push(Node {
                        id: next_id,
                        depth: node.depth + 1,
                        bound: value,
                        fixings,
                        basis: Some(basis.clone()),
                    });
                    next_id += 1;
                }
            }
        }
    }

    let open_bound = heap
        .iter()
        .filter(|nd| nd.bound < incumbent.cost - prune_tol)
        .map(|nd| nd.bound)
        .fold(f64::INFINITY, f64::min)
        .min(unresolved_bound);
    let tree_bound = open_bound.min(incumbent.cost);
    let bound = tree_bound.min(extra_bound);
    let exhausted = !limit_hit && unresolved_bound.is_infinite();
    let status = if incumbent.solution.is_none() {
        if exhausted {
            SolveStatus::Infeasible
        } else {
            SolveStatus::TimeLimit
        }
    } else if exhausted || gap(incumbent.cost, bound) <= 1e-9 {
        SolveStatus::Optimal
    } else {
        SolveStatus::TimeLimit
    };
    let root_bound = if root_bound.is_finite() { root_bound.min(extra_bound) } else { bound };
    info!(
        "branch-and-cut {status}: cost {:.6}, bound {:.6}, {nodes} nodes, {} cuts",
        incumbent.cost,
        bound,
        cuts_by_kind.values().sum::<usize>()
    );
    Ok(finish(status, incumbent, bound, root_bound, nodes, cuts_by_kind, rounding_successes, lp_iterations))
}

enum NodeOutcome {
    Pruned,
    Unresolved(f64),
    Branch { value: f64, col: usize, x: f64, basis: Basis },
}

/// Root LP relaxation value of the static model (no cuts), or `None` if
/// bound propagation already proves it infeasible.
pub fn root_relaxation_value(inst: &Instance, options: ModelOptions) -> Result<Option<(f64, FractionalPoint)>> {
    let model = build_model(inst, options);
    let Some(mut rel) = Relaxation::build(&model)? else {
        return Ok(None);
    };
    let res = rel.solve(&LpOptions::default());
    if res.status != LpStatus::Optimal {
        return Ok(None);
    }
    let point = FractionalPoint::new(model.vars, rel.expand(&res.x))?;
    Ok(Some((res.objective + rel.fixed_objective(&model), point)))
}

/// Root relaxation with connectivity and 2-matching cuts separated until
/// none is found (or `max_rounds` is reached).
pub fn root_cut_loop(
    inst: &Instance,
    options: ModelOptions,
    max_rounds: usize,
) -> Result<Option<(f64, FractionalPoint, Vec<Cut>)>> {
    let model = build_model(inst, options);
    let Some(mut rel) = Relaxation::build(&model)? else {
        return Ok(None);
    };
    let mut all = Vec::new();
    let mut rounds = 0;
    loop {
        let res = rel.solve(&LpOptions::default());
        if res.status != LpStatus::Optimal {
            return Ok(None);
        }
        let point = FractionalPoint::new(model.vars, rel.expand(&res.x))?;
        let mut found = separate_gv_connectivity(&point, inst);
        found.extend(separate_uav_connectivity(&point, inst));
        if options.valid_inequalities {
            found.extend(separate_two_matching(&point, inst));
        }
        if found.is_empty() || rounds >= max_rounds {
            return Ok(Some((res.objective + rel.fixed_objective(&model), point, all)));
        }
        for cut in strongest(found, 50) {
            if let Translated::Row(r) = rel.translate(&cut.row, false) {
                rel.solver.add_row(&r)?;
            }
            all.push(cut);
        }
        rounds += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, tiny4, InstanceClass};
    use crate::oracle::brute_force;

    fn quiet() -> SolveParams {
        SolveParams { time_limit: Duration::from_secs(60), ..Default::default() }
    }

    #[test]
    fn single_target() {
        let inst = generate_instance(InstanceClass::A, 1, 0.2, 5).unwrap();
        let r = solve_exact(&inst, &quiet()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.cost, 0.0);
        assert_eq!(r.nodes, 1);
    }

    #[test]
    fn tiny4_matches_oracle() {
        let t = tiny4();
        let r = solve_exact(&t, &quiet()).unwrap();
        let o = brute_force(&t).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert!((r.cost - o.cost).abs() < 1e-6, "{} vs {}", r.cost, o.cost);
        assert!(r.gap <= 1e-6);
        let (root, _) = root_relaxation_value(&t, ModelOptions::default()).unwrap().unwrap();
        assert!(root <= o.cost + 1e-9);
    }

    #[test]
    fn small_random_instances_match_oracle() {
        for seed in 0..6 {
            let inst = generate_instance(InstanceClass::A, 6, 0.2, seed).unwrap();
            let r = solve_exact(&inst, &quiet()).unwrap();
            let o = brute_force(&inst).unwrap();
            assert_eq!(r.status, SolveStatus::Optimal);
            assert!((r.cost - o.cost).abs() < 1e-6, "seed {seed}: {} vs {}", r.cost, o.cost);
            assert!(check_feasibility(&inst, r.incumbent.as_ref().unwrap()).ok());
        }
    }

    #[test]
    fn node_limit_reports_time_limit_status() {
        let inst = generate_instance(InstanceClass::A, 8, 0.3, 2).unwrap();
        let params = SolveParams { node_limit: Some(0), use_rounding: false, ..quiet() };
        let r = solve_exact(&inst, &params).unwrap();
        assert_eq!(r.nodes, 0);
        assert!(r.status == SolveStatus::TimeLimit || r.incumbent.is_some());
        assert!(r.bound <= r.cost);
    }

    #[test]
    fn report_display_has_every_key() {
        let r = solve_exact(&tiny4(), &quiet()).unwrap();
        let text = r.to_string();
        for key in ["status=optimal", "cost=", "bound=", "gap=", "nodes=", "cuts_gv_connectivity=", "seconds="] {
            assert!(text.contains(key), "{key} missing from {text}");
        }
    }
}
