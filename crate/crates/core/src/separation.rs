//! Separation of connectivity and 2-matching inequalities.
//!
//! Connectivity separation is exact: besides the component and `0`-to-`t`
//! cut candidates, each target `i` gets one rooted max-flow whose minimum
//! cut is the most violated inequality for that `i`. The 2-matching routine
//! is the usual component heuristic and may miss violated inequalities.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::formulation::{Cut, CutKind, FractionalPoint};
use crate::instance::{Arc, Edge, Instance};
use crate::tolerance::{CUT_VIOLATION, INT_TOL, SUPPORT_EPS};

/// Default number of cuts kept per separation round.
pub const CUTS_PER_ROUND: usize = 50;

/// Graph induced by the positive entries of a point.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportGraph {
    pub n: usize,
    /// Targets with `y_ii > eps`.
    pub vertices: Vec<usize>,
    pub edges: Vec<(Edge, f64)>,
    /// Arcs `[i, j]`, `i != j`, with `w_ij > eps`.
    pub arcs: Vec<(Arc, f64)>,
}

impl SupportGraph {
    pub fn from_point(point: &FractionalPoint) -> Self {
        let n = point.targets();
        let vertices = (0..n).filter(|&i| point.y(i, i) > SUPPORT_EPS).collect();
        let mut edges = Vec::new();
        for e in point.vars.edges() {
            let v = point.x(e.0, e.1);
            if v > SUPPORT_EPS {
                edges.push((e, v));
            }
        }
        let mut arcs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = point.w(i, j);
                if i != j && v > SUPPORT_EPS {
                    arcs.push((Arc(i, j), v));
                }
            }
        }
        SupportGraph { n, vertices, edges, arcs }
    }

    /// Connected components of the undirected edge support, over all targets.
    pub fn edge_components(&self) -> Vec<Vec<usize>> {
        components(self.n, self.edges.iter().map(|(e, _)| (e.0, e.1)))
    }

    /// Weakly connected components of the arc support, over all targets.
    pub fn arc_components(&self) -> Vec<Vec<usize>> {
        components(self.n, self.arcs.iter().map(|(a, _)| (a.0, a.1)))
    }
}

fn components(n: usize, links: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for (a, b) in links {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = find(&mut parent, v);
        groups[r].push(v);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Directed capacity network on a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowGraph {
    n: usize,
    cap: Vec<f64>,
}

impl FlowGraph {
    pub fn new(n: usize) -> Self {
        FlowGraph { n, cap: vec![0.0; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_arc(&mut self, u: usize, v: usize, c: f64) {
        self.cap[u * self.n + v] += c;
    }

    pub fn add_edge(&mut self, u: usize, v: usize, c: f64) {
        self.add_arc(u, v, c);
        self.add_arc(v, u, c);
    }

    pub fn capacity(&self, u: usize, v: usize) -> f64 {
        self.cap[u * self.n + v]
    }
}

const FLOW_EPS: f64 = 1e-12;

/// Maximum `s`-`t` flow by shortest augmenting paths. Returns the flow value
/// and the vertices reachable from `s` in the final residual network.
pub fn min_cut(g: &FlowGraph, s: usize, t: usize) -> Result<(f64, Vec<usize>)> {
    let n = g.n;
    for v in [s, t] {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, len: n });
        }
    }
    if s == t {
        return Err(Error::InvalidArgument("source and sink coincide".into()));
    }
    let mut res = g.cap.clone();
    let mut total = 0.0;
    let mut pred = vec![usize::MAX; n];
    loop {
        pred.iter_mut().for_each(|p| *p = usize::MAX);
        pred[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for v in 0..n {
                if pred[v] == usize::MAX && res[u * n + v] > FLOW_EPS {
                    pred[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if pred[t] == usize::MAX {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = t;
        while v != s {
            let u = pred[v];
            bottleneck = bottleneck.min(res[u * n + v]);
            v = u;
        }
        if !bottleneck.is_finite() {
            return Ok((f64::INFINITY, Vec::new()));
        }
        let mut v = t;
        while v != s {
            let u = pred[v];
            res[u * n + v] -= bottleneck;
            res[v * n + u] += bottleneck;
            v = u;
        }
        total += bottleneck;
    }
    let side: Vec<usize> = (0..n).filter(|&v| pred[v] != usize::MAX).collect();
    Ok((total, side))
}

/// Keeps the `cap` most violated cuts (stable on ties).
pub fn strongest(mut cuts: Vec<(Cut, f64)>, cap: usize) -> Vec<Cut> {
    cuts.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    cuts.into_iter().take(cap).map(|(c, _)| c).collect()
}

fn push_if_violated(
    out: &mut Vec<(Cut, f64)>,
    seen: &mut HashSet<(CutKind, Vec<usize>, usize)>,
    point: &FractionalPoint,
    cut: Cut,
) {
    let viol = cut.row.violation(&point.values);
    if viol > CUT_VIOLATION {
        let key = (cut.kind, cut.set.clone(), cut.root.unwrap_or(usize::MAX));
        if seen.insert(key) {
            out.push((cut, viol));
        }
    }
}

fn edge_network(support: &SupportGraph, extra: usize) -> FlowGraph {
    let mut g = FlowGraph::new(support.n + extra);
    for &(e, v) in &support.edges {
        g.add_edge(e.0, e.1, v);
    }
    g
}

/// Violated `x(delta(S)) >= 2 sum_{j in S} y_ij` inequalities, with their
/// violations, most violated first.
pub fn separate_gv_connectivity(point: &FractionalPoint, inst: &Instance) -> Vec<(Cut, f64)> {
    let n = inst.len();
    debug_assert_eq!(point.targets(), n);
    let support = SupportGraph::from_point(point);
    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();

    let comps = support.edge_components();
    for c in &comps {
        if !c.contains(&0) {
            candidates.insert(c.clone());
        }
    }
    let base_comp: Vec<usize> = comps.iter().find(|c| c.contains(&0)).cloned().unwrap_or_default();
    let net = edge_network(&support, 0);
    for &t in &support.vertices {
        if t != 0 && base_comp.contains(&t) {
            if let Ok((_, side)) = min_cut(&net, 0, t) {
                let s: Vec<usize> = (0..n).filter(|v| !side.contains(v)).collect();
                candidates.insert(s);
            }
        }
    }
    // Rooted networks: source -> j with capacity 2 y_ij, source -> i unbounded,
    // sink 0. A cut of value below 2 is a violated inequality for `i`.
    let source = n;
    for i in 1..n {
        if point.y(i, 0) >= 1.0 - CUT_VIOLATION {
            continue;
        }
        let mut g = edge_network(&support, 1);
        for j in 0..n {
            let y = point.y(i, j);
            if y > SUPPORT_EPS {
                g.add_arc(source, j, 2.0 * y);
            }
        }
        g.add_arc(source, i, f64::INFINITY);
        if let Ok((value, side)) = min_cut(&g, source, 0) {
            if value < 2.0 - CUT_VIOLATION {
                candidates.insert(side.into_iter().filter(|&v| v != source).collect());
            }
        }
    }

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for s in &candidates {
        if s.is_empty() || s.contains(&0) {
            continue;
        }
        for &i in s {
            push_if_violated(&mut out, &mut seen, point, Cut::gv_connectivity(&point.vars, s, i));
        }
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    out
}

/// Violated `w(delta^+(S)) >= 1 - sum_{j in S} y_ij` and
/// `w(delta^-(S)) >= 1 - sum_{j in S} y_ij` inequalities, most violated first.
pub fn separate_uav_connectivity(point: &FractionalPoint, inst: &Instance) -> Vec<(Cut, f64)> {
    let n = inst.len();
    debug_assert_eq!(point.targets(), n);
    let support = SupportGraph::from_point(point);
    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in support.arc_components() {
        if c.len() < n {
            candidates.insert(c);
        }
    }
    // Rooted networks with sink connected from every j by y_ij: the minimum
    // cut around `i` is the smallest left-hand side over sets containing `i`.
    let sink = n;
    for i in 0..n {
        if point.y(i, i) >= 1.0 - CUT_VIOLATION {
            continue;
        }
        for outbound in [true, false] {
            let mut g = FlowGraph::new(n + 1);
            for &(a, v) in &support.arcs {
                if outbound {
                    g.add_arc(a.0, a.1, v);
                } else {
                    g.add_arc(a.1, a.0, v);
                }
            }
            for j in 0..n {
                let y = point.y(i, j);
                if y > SUPPORT_EPS {
                    g.add_arc(j, sink, y);
                }
            }
            if let Ok((value, side)) = min_cut(&g, i, sink) {
                if value < 1.0 - CUT_VIOLATION {
                    candidates.insert(side);
                }
            }
        }
    }

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for s in &candidates {
        if s.is_empty() || s.len() >= n {
            continue;
        }
        for &i in s {
            push_if_violated(&mut out, &mut seen, point, Cut::uav_connectivity(&point.vars, s, i, false));
            push_if_violated(&mut out, &mut seen, point, Cut::uav_connectivity(&point.vars, s, i, true));
        }
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    out
}

/// 2-matching heuristic: handles are components of the fractional edges,
/// teeth are unit edges leaving the handle with pairwise distinct endpoints.
pub fn separate_two_matching(point: &FractionalPoint, inst: &Instance) -> Vec<(Cut, f64)> {
    let n = inst.len();
    debug_assert_eq!(point.targets(), n);
    let support = SupportGraph::from_point(point);
    let fractional: Vec<(usize, usize)> = support
        .edges
        .iter()
        .filter(|(_, v)| *v < 1.0 - INT_TOL)
        .map(|(e, _)| (e.0, e.1))
        .collect();
    let mut touched = vec![false; n];
    for &(a, b) in &fractional {
        touched[a] = true;
        touched[b] = true;
    }
    let units: Vec<Edge> = support
        .edges
        .iter()
        .filter(|(_, v)| (v - 1.0).abs() <= INT_TOL)
        .map(|(e, _)| *e)
        .collect();

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for handle in components(n, fractional.into_iter()) {
        if handle.len() < 2 || !touched[handle[0]] {
            continue;
        }
        let inside: HashSet<usize> = handle.iter().copied().collect();
        let mut used = HashSet::new();
        let mut teeth = Vec::new();
        for &e in &units {
            if inside.contains(&e.0) != inside.contains(&e.1) && !used.contains(&e.0) && !used.contains(&e.1) {
                used.insert(e.0);
                used.insert(e.1);
                teeth.push(e);
            }
        }
        if teeth.len() < 3 || teeth.len() % 2 == 0 {
            continue;
        }
        push_if_violated(&mut out, &mut seen, point, Cut::two_matching(&point.vars, &handle, &teeth));
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    out
}
