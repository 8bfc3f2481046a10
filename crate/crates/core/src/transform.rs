//! Reduction of a CAGVRP instance to a one-in-a-set TSP over vehicle
//! configurations, and the cost-preserving maps between their solutions.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::formulation::evaluate_objective;
use crate::gtsp::{solve_gtsp_lns, GtspGraph, GtspTour, LnsParams};
use crate::instance::Instance;
use crate::tsp::tsp_heuristic;
use crate::verify::{check_feasibility, describe, Solution};

/// GV at target `g`, UAV at target `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub g: usize,
    pub a: usize,
}

impl Configuration {
    pub fn is_hub(&self) -> bool {
        self.g == self.a
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C(g{}, a{})", self.g, self.a)
    }
}

/// The maneuver an edge of the transformed graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRule {
    /// Hub to hub: both vehicles drive `i -> k` at cost `c_ik`.
    Drive,
    /// Same GV position: the UAV hops `j -> l` at cost `d_jl`.
    Hop,
    /// The UAV returns from `j` to the GV at `i`, then both drive to `k`:
    /// `d_ji + c_ik`.
    ReturnAndDrive,
    /// The UAV returns from `j` to the GV waiting at the base: `d_j0`.
    ReturnToBase,
}

impl EdgeRule {
    pub fn label(&self) -> &'static str {
        match self {
            EdgeRule::Drive => "drive",
            EdgeRule::Hop => "hop",
            EdgeRule::ReturnAndDrive => "return_drive",
            EdgeRule::ReturnToBase => "return_base",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformedEdge {
    pub from: usize,
    pub to: usize,
    pub rule: EdgeRule,
    pub cost: f64,
}

/// Configurations as vertices, partitioned by UAV position.
///
/// The base set holds only the base hub, so every tour starts with both
/// vehicles at the base.
#[derive(Debug, Clone)]
pub struct TransformedGraph {
    pub vertices: Vec<Configuration>,
    /// `partitions[t]`: vertices whose UAV position is `t`.
    pub partitions: Vec<Vec<usize>>,
    pub edges: Vec<TransformedEdge>,
    index: HashMap<Configuration, usize>,
    rule_of: HashMap<(usize, usize), EdgeRule>,
    graph: GtspGraph,
}

impl TransformedGraph {
    pub fn vertex(&self, c: Configuration) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn rule(&self, from: usize, to: usize) -> Option<EdgeRule> {
        self.rule_of.get(&(from, to)).copied()
    }

    pub fn gtsp(&self) -> &GtspGraph {
        &self.graph
    }

    pub fn base_hub(&self) -> usize {
        self.partitions[0][0]
    }

    /// GTSP text with one `VERTEX <id> <g> <a>` line per configuration.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (v, c) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "VERTEX {v} {} {}", c.g, c.a);
        }
        s.push_str(&self.graph.to_text());
        s
    }
}

/// Builds the configuration graph: every in-range `(g, a)` pair (only the
/// hub in the base set) with typed directed edges.
pub fn build_transformed_graph(inst: &Instance) -> Result<TransformedGraph> {
    let n = inst.len();
    if n == 0 {
        return Err(Error::InvalidArgument("instance has no targets".into()));
    }
    let mut vertices = Vec::new();
    let mut partitions = vec![Vec::new(); n];
    for (a, part) in partitions.iter_mut().enumerate() {
        let gs: Vec<usize> = if a == 0 { vec![0] } else { (0..n).filter(|&g| inst.in_range(g, a)).collect() };
        for g in gs {
            part.push(vertices.len());
            vertices.push(Configuration { g, a });
        }
    }
    let index: HashMap<Configuration, usize> = vertices.iter().enumerate().map(|(v, &c)| (c, v)).collect();
    let hubs: Vec<usize> = (0..n).map(|t| index[&Configuration { g: t, a: t }]).collect();
    // Non-hub configurations grouped by GV position.
    let mut by_gv: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, c) in vertices.iter().enumerate() {
        if !c.is_hub() {
            by_gv[c.g].push(v);
        }
    }

    let mut edges = Vec::new();
    for i in 0..n {
        for k in 0..n {
            if i != k {
                edges.push(TransformedEdge { from: hubs[i], to: hubs[k], rule: EdgeRule::Drive, cost: inst.c(i, k) });
            }
        }
    }
    for i in 0..n {
        let sources = std::iter::once(hubs[i]).chain(by_gv[i].iter().copied());
        for u in sources {
            let j = vertices[u].a;
            for &v in &by_gv[i] {
                let l = vertices[v].a;
                if l != j {
                    edges.push(TransformedEdge { from: u, to: v, rule: EdgeRule::Hop, cost: inst.d(j, l) });
                }
            }
        }
    }
    for (u, cu) in vertices.iter().enumerate() {
        if cu.is_hub() {
            continue;
        }
        let (i, j) = (cu.g, cu.a);
        for k in 0..n {
            if k != i && k != j {
                edges.push(TransformedEdge {
                    from: u,
                    to: hubs[k],
                    rule: EdgeRule::ReturnAndDrive,
                    cost: inst.d(j, i) + inst.c(i, k),
                });
            }
        }
        if i == 0 {
            edges.push(TransformedEdge { from: u, to: hubs[0], rule: EdgeRule::ReturnToBase, cost: inst.d(j, 0) });
        }
    }
    let rule_of = edges.iter().map(|e| ((e.from, e.to), e.rule)).collect();
    let graph = GtspGraph::new(partitions.clone(), edges.iter().map(|e| (e.from, e.to, e.cost)).collect())?;
    Ok(TransformedGraph { vertices, partitions, edges, index, rule_of, graph })
}

/// Replays a configuration tour as vehicle maneuvers.
///
/// The tour may start anywhere; it is rotated to the base hub. Errors when a
/// set is skipped or repeated, or an edge does not exist.
pub fn map_gtsp_to_cagvrp(tg: &TransformedGraph, tour: &[usize], inst: &Instance) -> Result<Solution> {
    tg.graph.check_tour(tour)?;
    let base = tg.base_hub();
    let start = tour.iter().position(|&v| v == base).ok_or_else(|| Error::InvalidTour("base hub missing".into()))?;
    let mut order = tour.to_vec();
    order.rotate_left(start);
    let mut ring = vec![0];
    let mut subtours: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in 0..order.len().saturating_sub(1) {
        let (u, v) = (order[p], order[p + 1]);
        let rule = tg.rule(u, v).ok_or_else(|| Error::InvalidTour(format!("no edge {u}->{v}")))?;
        let (cu, cv) = (tg.vertices[u], tg.vertices[v]);
        match rule {
            EdgeRule::Drive | EdgeRule::ReturnAndDrive => ring.push(cv.g),
            EdgeRule::Hop => subtours.entry(cu.g).or_default().push(cv.a),
            EdgeRule::ReturnToBase => unreachable!("the base hub appears only at the start"),
        }
    }
    let sol = Solution::from_routes(ring, subtours);
    let report = check_feasibility(inst, &sol);
    if !report.ok() {
        return Err(Error::InvalidTour(format!("mapped plan is infeasible: {}", describe(&report))));
    }
    Ok(sol)
}

/// Configuration tour of a feasible plan: the base hub, the base sub-tour,
/// then per later stop its hub followed by its sub-tour.
pub fn map_cagvrp_to_gtsp(tg: &TransformedGraph, sol: &Solution, inst: &Instance) -> Result<GtspTour> {
    let report = check_feasibility(inst, sol);
    if !report.ok() {
        return Err(Error::Infeasible(describe(&report)));
    }
    let lookup = |g: usize, a: usize| {
        tg.vertex(Configuration { g, a })
            .ok_or_else(|| Error::InvalidTour(format!("configuration C(g{g}, a{a}) is not a vertex")))
    };
    let mut vertices = Vec::with_capacity(inst.len());
    for &s in &sol.gv_ring {
        vertices.push(lookup(s, s)?);
        for &t in sol.subtours.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
            vertices.push(lookup(s, t)?);
        }
    }
    let cost = tg.graph.check_tour(&vertices)?;
    Ok(GtspTour { vertices, cost })
}

/// Hub-only tour following a heuristic GV tour through every target.
pub fn all_hub_tour(tg: &TransformedGraph, inst: &Instance) -> Vec<usize> {
    let nodes: Vec<usize> = (0..inst.len()).collect();
    let mut order = tsp_heuristic(inst.gv_costs(), &nodes).order;
    if let Some(p) = order.iter().position(|&v| v == 0) {
        order.rotate_left(p);
    }
    order.iter().map(|&t| tg.vertex(Configuration { g: t, a: t }).expect("hubs are always vertices")).collect()
}

/// Outcome of the transformation heuristic.
#[derive(Debug, Clone)]
pub struct HeuristicResult {
    pub solution: Solution,
    pub cost: f64,
    pub tour: GtspTour,
}

/// Transform, run LNS from the all-hub tour, and map back. The returned cost
/// is recomputed from the plan.
pub fn solve_via_gtsp(inst: &Instance, params: &LnsParams) -> Result<HeuristicResult> {
    let tg = build_transformed_graph(inst)?;
    let mut p = params.clone();
    if p.initial.is_none() {
        p.initial = Some(all_hub_tour(&tg, inst));
    }
    let tour = solve_gtsp_lns(tg.gtsp(), &p)?;
    let solution = map_gtsp_to_cagvrp(&tg, &tour.vertices, inst)?;
    let cost = evaluate_objective(inst, &solution, false)?;
    Ok(HeuristicResult { solution, cost, tour })
}
