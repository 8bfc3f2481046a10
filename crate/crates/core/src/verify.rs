//! Independent feasibility checks for routes and integer points.
//!
//! Everything here is re-derived from the [`Instance`]; nothing depends on
//! solver internals. Violations are returned as data.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{Arc, Edge, Instance};

/// A CAGVRP route plan.
///
/// `gv_ring` lists the ground-vehicle stops in visiting order starting at the
/// base. A ring of length 1 is the base-only tour; length 2 is the
/// out-and-back tour `0 -> s -> 0`. `subtours[s]` is the ordered list of
/// targets the UAV visits while the GV waits at stop `s`; stops without an
/// entry (or with an empty list) keep the UAV on board.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Solution {
    pub gv_ring: Vec<usize>,
    pub subtours: BTreeMap<usize, Vec<usize>>,
    pub assignment: BTreeMap<usize, usize>,
}

impl Solution {
    /// Builds a solution and derives the assignment map from the ring and
    /// sub-tours.
    pub fn from_routes(gv_ring: Vec<usize>, subtours: BTreeMap<usize, Vec<usize>>) -> Self {
        let mut assignment = BTreeMap::new();
        for &s in &gv_ring {
            assignment.insert(s, s);
        }
        for (&root, visits) in &subtours {
            for &t in visits {
                assignment.insert(t, root);
            }
        }
        let subtours = subtours.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Solution { gv_ring, subtours, assignment }
    }

    /// GV-only tour visiting `ring` in order.
    pub fn gv_only(ring: Vec<usize>) -> Self {
        Self::from_routes(ring, BTreeMap::new())
    }

    pub fn is_stop(&self, t: usize) -> bool {
        self.gv_ring.contains(&t)
    }

    /// GV edges with multiplicity (2 for the out-and-back ring).
    pub fn gv_edges(&self) -> Vec<(Edge, u8)> {
        let r = &self.gv_ring;
        match r.len() {
            0 | 1 => Vec::new(),
            2 => vec![(Edge::new(r[0], r[1]), 2)],
            k => (0..k).map(|p| (Edge::new(r[p], r[(p + 1) % k]), 1)).collect(),
        }
    }

    /// UAV arcs including the self-loop of every stop whose UAV stays aboard.
    pub fn uav_arcs(&self) -> Vec<Arc> {
        let mut arcs = Vec::new();
        for &s in &self.gv_ring {
            match self.subtours.get(&s) {
                Some(v) if !v.is_empty() => {
                    let mut prev = s;
                    for &t in v {
                        arcs.push(Arc(prev, t));
                        prev = t;
                    }
                    arcs.push(Arc(prev, s));
                }
                _ => arcs.push(Arc(s, s)),
            }
        }
        arcs
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "GVRING {}", join(&self.gv_ring))?;
        for (root, visits) in &self.subtours {
            if !visits.is_empty() {
                writeln!(f, "SUBTOUR {root}: {}", join(visits))?;
            }
        }
        for (t, s) in &self.assignment {
            writeln!(f, "ASSIGN {t} {s}")?;
        }
        Ok(())
    }
}

/// Solution file contents: the routes plus the recorded cost, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFile {
    pub solution: Solution,
    pub cost: Option<f64>,
}

impl SolutionFile {
    pub fn new(solution: Solution, cost: f64) -> Self {
        SolutionFile { solution, cost: Some(cost) }
    }
}

impl fmt::Display for SolutionFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.solution)?;
        if let Some(c) = self.cost {
            writeln!(f, "COST {c}")?;
        }
        Ok(())
    }
}

impl FromStr for SolutionFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let parse_list = |line: usize, s: &str| -> Result<Vec<usize>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse { line, message: format!("invalid index `{t}`") })
                })
                .collect()
        };
        let mut ring = None;
        let mut subtours = BTreeMap::new();
        let mut assignment = BTreeMap::new();
        let mut cost = None;
        for (no, raw) in text.lines().enumerate() {
            let line = no + 1;
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            match head {
                "GVRING" => ring = Some(parse_list(line, rest)?),
                "SUBTOUR" => {
                    let (root, visits) = rest.split_once(':').ok_or_else(|| Error::Parse {
                        line,
                        message: "expected `SUBTOUR <root>: <targets>`".into(),
                    })?;
                    let root: usize = root.trim().parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid root `{}`", root.trim()),
                    })?;
                    if subtours.insert(root, parse_list(line, visits)?).is_some() {
                        return Err(Error::Parse { line, message: format!("duplicate SUBTOUR {root}") });
                    }
                }
                "ASSIGN" => {
                    let v = parse_list(line, rest)?;
                    if v.len() != 2 {
                        return Err(Error::Parse { line, message: "expected `ASSIGN <t> <stop>`".into() });
                    }
                    if assignment.insert(v[0], v[1]).is_some() {
                        return Err(Error::Parse { line, message: format!("duplicate ASSIGN {}", v[0]) });
                    }
                }
                "COST" => {
                    cost = Some(rest.trim().parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid cost `{}`", rest.trim()),
                    })?)
                }
                other => return Err(Error::Parse { line, message: format!("unknown record `{other}`") }),
            }
        }
        let gv_ring = ring.ok_or_else(|| Error::Parse { line: 0, message: "missing GVRING".into() })?;
        Ok(SolutionFile { solution: Solution { gv_ring, subtours, assignment }, cost })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { index: usize },
    EmptyRing,
    RingNotAtBase { first: usize },
    RepeatedStop { stop: usize },
    BaseNotAssignedToItself,
    Uncovered { target: usize },
    CoveredTwice { target: usize },
    AssignmentMismatch { target: usize, recorded: Option<usize>, actual: Option<usize> },
    OutOfRange { target: usize, stop: usize },
    SubtourAtNonStop { stop: usize },
    StopInSubtour { stop: usize, root: usize },
    /// GV degree differs from `2 * y_ii`.
    GvDegree { target: usize, degree: usize },
    /// A GV cycle that does not contain the base.
    DetachedGvCycle { members: Vec<usize> },
    UavDegree { target: usize, out_degree: usize, in_degree: usize },
    /// A UAV cycle that does not contain the stop its targets are assigned to.
    DetachedUavCycle { members: Vec<usize> },
    /// A UAV arc between targets assigned to different stops.
    UavArcAcrossStops { from: usize, to: usize },
    AssignedToNonStop { target: usize, stop: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IndexOutOfRange { index } => write!(f, "index {index} out of range"),
            Violation::EmptyRing => write!(f, "GV ring is empty"),
            Violation::RingNotAtBase { first } => write!(f, "GV ring starts at {first}, not at the base"),
            Violation::RepeatedStop { stop } => write!(f, "stop {stop} repeated in the GV ring"),
            Violation::BaseNotAssignedToItself => write!(f, "base is not a GV stop"),
            Violation::Uncovered { target } => write!(f, "target {target} is not visited"),
            Violation::CoveredTwice { target } => write!(f, "target {target} is visited more than once"),
            Violation::AssignmentMismatch { target, recorded, actual } => {
                write!(f, "target {target}: recorded assignment {recorded:?}, routes imply {actual:?}")
            }
            Violation::OutOfRange { target, stop } => {
                write!(f, "target {target} is out of range of stop {stop}")
            }
            Violation::SubtourAtNonStop { stop } => write!(f, "sub-tour rooted at non-stop {stop}"),
            Violation::StopInSubtour { stop, root } => {
                write!(f, "GV stop {stop} appears in the sub-tour of {root}")
            }
            Violation::GvDegree { target, degree } => write!(f, "target {target} has GV degree {degree}"),
            Violation::DetachedGvCycle { members } => write!(f, "detached GV cycle {members:?}"),
            Violation::UavDegree { target, out_degree, in_degree } => {
                write!(f, "target {target} has UAV out/in degree {out_degree}/{in_degree}")
            }
            Violation::DetachedUavCycle { members } => write!(f, "detached UAV cycle {members:?}"),
            Violation::UavArcAcrossStops { from, to } => {
                write!(f, "UAV arc [{from},{to}] joins targets of different stops")
            }
            Violation::AssignedToNonStop { target, stop } => {
                write!(f, "target {target} assigned to {stop}, which is not a GV stop")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
}

impl FeasibilityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a route plan against every CAGVRP requirement.
pub fn check_feasibility(inst: &Instance, sol: &Solution) -> FeasibilityReport {
    let n = inst.len();
    let mut v = Vec::new();
    let bad_index = |i: usize, v: &mut Vec<Violation>| {
        if i >= n {
            v.push(Violation::IndexOutOfRange { index: i });
            true
        } else {
            false
        }
    };

    // Ring.
    match sol.gv_ring.first() {
        None => v.push(Violation::EmptyRing),
        Some(&f) if f != 0 => v.push(Violation::RingNotAtBase { first: f }),
        _ => {}
    }
    let mut seen_stop = BTreeSet::new();
    for &s in &sol.gv_ring {
        if bad_index(s, &mut v) {
            continue;
        }
        if !seen_stop.insert(s) {
            v.push(Violation::RepeatedStop { stop: s });
        }
    }

    // Coverage: every target once, as a stop or inside one sub-tour.
    let mut cover: Vec<usize> = vec![0; n];
    let mut actual: Vec<Option<usize>> = vec![None; n];
    for &s in &seen_stop {
        cover[s] += 1;
        actual[s] = Some(s);
    }
    for (&root, visits) in &sol.subtours {
        if bad_index(root, &mut v) {
            continue;
        }
        if !seen_stop.contains(&root) && !visits.is_empty() {
            v.push(Violation::SubtourAtNonStop { stop: root });
        }
        for &t in visits {
            if bad_index(t, &mut v) {
                continue;
            }
            if seen_stop.contains(&t) {
                v.push(Violation::StopInSubtour { stop: t, root });
            }
            cover[t] += 1;
            actual[t] = Some(root);
            if !inst.in_range(root, t) {
                v.push(Violation::OutOfRange { target: t, stop: root });
            }
        }
    }
    for t in 0..n {
        match cover[t] {
            0 => v.push(Violation::Uncovered { target: t }),
            1 => {}
            _ => v.push(Violation::CoveredTwice { target: t }),
        }
    }

    // Assignment map must agree with the routes.
    for (&t, &s) in &sol.assignment {
        if bad_index(t, &mut v) || bad_index(s, &mut v) {
            continue;
        }
        if actual[t] != Some(s) {
            v.push(Violation::AssignmentMismatch { target: t, recorded: Some(s), actual: actual[t] });
        }
    }
    for t in 0..n {
        if actual[t].is_some() && !sol.assignment.contains_key(&t) {
            v.push(Violation::AssignmentMismatch { target: t, recorded: None, actual: actual[t] });
        }
    }
    if n > 0 && sol.assignment.get(&0) != Some(&0) {
        v.push(Violation::BaseNotAssignedToItself);
    }
    v.dedup();
    FeasibilityReport { violations: v }
}

/// An integer assignment of the model variables in graph form.
///
/// `edges` carries multiplicities (2 only for the out-and-back ring);
/// `root[t]` is the stop target `t` is assigned to (`y_{t,root[t]} = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPoint {
    pub edges: Vec<(Edge, u8)>,
    pub arcs: Vec<Arc>,
    pub root: Vec<usize>,
}

impl IntegerPoint {
    pub fn from_solution(sol: &Solution, n: usize) -> Self {
        let root = (0..n).map(|t| sol.assignment.get(&t).copied().unwrap_or(t)).collect();
        IntegerPoint { edges: sol.gv_edges(), arcs: sol.uav_arcs(), root }
    }
}

fn components(n: usize, adj: &[Vec<usize>], active: &[bool]) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if !active[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Checks an integer point and, when feasible, rebuilds the route plan.
///
/// The base-only ring is accepted as `y_00 = 1` with no GV edges.
pub fn check_integer_point(inst: &Instance, point: &IntegerPoint) -> (FeasibilityReport, Option<Solution>) {
    let n = inst.len();
    let mut v = Vec::new();
    if point.root.len() != n {
        v.push(Violation::IndexOutOfRange { index: point.root.len() });
        return (FeasibilityReport { violations: v }, None);
    }
    for e in &point.edges {
        if e.0 .0 >= n || e.0 .1 >= n {
            v.push(Violation::IndexOutOfRange { index: e.0 .0.max(e.0 .1) });
        }
    }
    for a in &point.arcs {
        if a.0 >= n || a.1 >= n {
            v.push(Violation::IndexOutOfRange { index: a.0.max(a.1) });
        }
    }
    if point.root.iter().any(|&r| r >= n) {
        let bad = *point.root.iter().find(|&&r| r >= n).unwrap();
        v.push(Violation::IndexOutOfRange { index: bad });
    }
    if !v.is_empty() {
        return (FeasibilityReport { violations: v }, None);
    }
    let is_stop: Vec<bool> = (0..n).map(|t| point.root[t] == t).collect();
    if !is_stop[0] {
        v.push(Violation::BaseNotAssignedToItself);
    }
    for t in 0..n {
        let r = point.root[t];
        if r != t {
            if !is_stop[r] {
                v.push(Violation::AssignedToNonStop { target: t, stop: r });
            }
            if !inst.in_range(r, t) {
                v.push(Violation::OutOfRange { target: t, stop: r });
            }
        }
    }

    // GV part.
    let mut degree = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for &(e, m) in &point.edges {
        if m == 0 {
            continue;
        }
        degree[e.0] += m as usize;
        degree[e.1] += m as usize;
        adj[e.0].push(e.1);
        adj[e.1].push(e.0);
    }
    let stops: Vec<usize> = (0..n).filter(|&t| is_stop[t]).collect();
    let base_only = stops == [0] && point.edges.iter().all(|&(_, m)| m == 0);
    if !base_only {
        for t in 0..n {
            let want = if is_stop[t] { 2 } else { 0 };
            if degree[t] != want {
                v.push(Violation::GvDegree { target: t, degree: degree[t] });
            }
        }
        let active: Vec<bool> = (0..n).map(|t| degree[t] > 0).collect();
        for comp in components(n, &adj, &active) {
            if !comp.contains(&0) {
                v.push(Violation::DetachedGvCycle { members: comp });
            }
        }
    }

    // UAV part.
    let mut succ = vec![usize::MAX; n];
    let mut outd = vec![0usize; n];
    let mut ind = vec![0usize; n];
    for a in &point.arcs {
        outd[a.0] += 1;
        ind[a.1] += 1;
        succ[a.0] = a.1;
        if point.root[a.0] != point.root[a.1] {
            v.push(Violation::UavArcAcrossStops { from: a.0, to: a.1 });
        }
    }
    let mut uav_ok = true;
    for t in 0..n {
        if outd[t] != 1 || ind[t] != 1 {
            v.push(Violation::UavDegree { target: t, out_degree: outd[t], in_degree: ind[t] });
            uav_ok = false;
        }
    }
    if uav_ok {
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut u = s;
            while !seen[u] {
                seen[u] = true;
                cyc.push(u);
                u = succ[u];
            }
            let roots: BTreeSet<usize> = cyc.iter().map(|&t| point.root[t]).collect();
            let rooted = roots.len() == 1 && cyc.contains(roots.iter().next().unwrap());
            if !rooted {
                cyc.sort_unstable();
                v.push(Violation::DetachedUavCycle { members: cyc });
            }
        }
    }

    if !v.is_empty() {
        return (FeasibilityReport { violations: v }, None);
    }

    // Rebuild routes: walk the ring from the base.
    let mut ring = vec![0];
    if !base_only {
        let mut prev = usize::MAX;
        let mut cur = 0;
        loop {
            // The walk stops when only the base (ring closure) is left.
            let nxt = adj[cur].iter().copied().find(|&w| w != prev && w != 0);
            match nxt {
                Some(w) if !ring.contains(&w) => {
                    ring.push(w);
                    prev = cur;
                    cur = w;
                }
                _ => break,
            }
        }
    }
    let mut subtours = BTreeMap::new();
    for &s in &ring {
        let mut visits = Vec::new();
        let mut u = succ[s];
        while u != s {
            visits.push(u);
            u = succ[u];
        }
        if !visits.is_empty() {
            subtours.insert(s, visits);
        }
    }
    let sol = Solution::from_routes(ring, subtours);
    let report = check_feasibility(inst, &sol);
    if report.ok() {
        (report, Some(sol))
    } else {
        (report, None)
    }
}

/// `(c_t - c_star) / c_star * 100`.
pub fn relative_gap(c_t: f64, c_star: f64) -> Result<f64> {
    if !(c_star > 0.0) {
        return Err(Error::InvalidArgument(format!("reference cost must be positive, got {c_star}")));
    }
    if c_t < c_star - 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "heuristic cost {c_t} is below the optimum {c_star}"
        )));
    }
    Ok((c_t - c_star) / c_star * 100.0)
}

/// Human-readable summary of a report, one violation per line.
pub fn describe(report: &FeasibilityReport) -> String {
    let mut s = String::new();
    for v in &report.violations {
        let _ = writeln!(s, "{v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{tiny4, InstanceClass, Point};

    fn routes(ring: &[usize], subs: &[(usize, &[usize])]) -> Solution {
        Solution::from_routes(ring.to_vec(), subs.iter().map(|(r, v)| (*r, v.to_vec())).collect())
    }

    #[test]
    fn feasible_tiny4_plan() {
        let t = tiny4();
        let sol = routes(&[0, 1], &[(1, &[2, 3])]);
        assert!(check_feasibility(&t, &sol).ok());
        let (rep, back) = check_integer_point(&t, &IntegerPoint::from_solution(&sol, 4));
        assert!(rep.ok(), "{:?}", rep);
        assert_eq!(back.unwrap(), sol);
    }

    #[test]
    fn out_of_range_assignment_is_named() {
        let t = tiny4();
        let sol = routes(&[0, 1], &[(0, &[2]), (1, &[3])]);
        let rep = check_feasibility(&t, &sol);
        assert!(rep.violations.contains(&Violation::OutOfRange { target: 2, stop: 0 }));
    }

    #[test]
    fn structural_errors() {
        let t = tiny4();
        let rep = check_feasibility(&t, &routes(&[1, 0, 2, 3], &[]));
        assert!(rep.violations.contains(&Violation::RingNotAtBase { first: 1 }));
        let rep = check_feasibility(&t, &routes(&[0, 1, 1, 2, 3], &[]));
        assert!(rep.violations.contains(&Violation::RepeatedStop { stop: 1 }));
        let rep = check_feasibility(&t, &routes(&[0, 1, 2], &[]));
        assert!(rep.violations.contains(&Violation::Uncovered { target: 3 }));
        let rep = check_feasibility(&t, &routes(&[0, 1, 2, 3], &[(1, &[3])]));
        assert!(rep.violations.contains(&Violation::StopInSubtour { stop: 3, root: 1 }));
        let rep = check_feasibility(&t, &routes(&[0, 7], &[]));
        assert!(rep.violations.contains(&Violation::IndexOutOfRange { index: 7 }));
        let mut sol = routes(&[0, 1, 2, 3], &[]);
        sol.subtours.insert(2, vec![]);
        assert!(check_feasibility(&t, &sol).ok());
        sol.assignment.insert(3, 1);
        assert!(!check_feasibility(&t, &sol).ok());
    }

    #[test]
    fn two_component_point_reports_detached_cycles() {
        // Base ring 0-1-2 with a UAV pair rooted at 0; a second GV triangle
        // {3,4,5}; a UAV triangle {6,7,8} assigned to 3 but not containing it.
        let pts: Vec<Point> = (0..9).map(|i| Point::new(i as f64, 0.0)).collect();
        let inst = Instance::euclidean(pts, 25.0, 0.5, InstanceClass::Custom, None).unwrap();
        let mut root: Vec<usize> = (0..9).collect();
        root[6] = 3;
        root[7] = 3;
        root[8] = 3;
        let edges = vec![
            (Edge::new(0, 1), 1),
            (Edge::new(1, 2), 1),
            (Edge::new(2, 0), 1),
            (Edge::new(3, 4), 1),
            (Edge::new(4, 5), 1),
            (Edge::new(5, 3), 1),
        ];
        let mut arcs: Vec<Arc> = (0..6).map(|i| Arc(i, i)).collect();
        arcs.extend([Arc(6, 7), Arc(7, 8), Arc(8, 6)]);
        let (rep, sol) = check_integer_point(&inst, &IntegerPoint { edges, arcs, root });
        assert!(sol.is_none());
        assert!(rep.violations.contains(&Violation::DetachedGvCycle { members: vec![3, 4, 5] }));
        assert!(rep.violations.contains(&Violation::DetachedUavCycle { members: vec![6, 7, 8] }));
    }

    #[test]
    fn base_only_and_out_and_back_points() {
        let t = tiny4();
        let sol = routes(&[0], &[]);
        // Target 2 is out of range of the base, so base-only is infeasible here.
        let all = routes(&[0], &[(0, &[1, 2, 3])]);
        assert!(!check_feasibility(&t, &all).ok());
        assert!(!check_feasibility(&t, &sol).ok());
        let ok = routes(&[0, 1], &[(1, &[2]), (0, &[3])]);
        assert!(check_feasibility(&t, &ok).ok());
        let p = IntegerPoint::from_solution(&ok, 4);
        assert_eq!(p.edges, vec![(Edge(0, 1), 2)]);
        let (rep, back) = check_integer_point(&t, &p);
        assert!(rep.ok());
        assert_eq!(back.unwrap(), ok);

        let near = Instance::euclidean(
            vec![Point::new(0.0, 0.0), Point::new(5.0, 0.0), Point::new(0.0, 5.0)],
            25.0,
            0.2,
            InstanceClass::Custom,
            None,
        )
        .unwrap();
        let only = routes(&[0], &[(0, &[2, 1])]);
        assert!(check_feasibility(&near, &only).ok());
        let (rep, back) = check_integer_point(&near, &IntegerPoint::from_solution(&only, 3));
        assert!(rep.ok());
        assert_eq!(back.unwrap(), only);
    }

    #[test]
    fn solution_file_round_trip() {
        let sol = routes(&[0, 3, 1], &[(1, &[2])]);
        let file = SolutionFile::new(sol.clone(), 12.5);
        let text = file.to_string();
        assert!(text.starts_with("GVRING 0 3 1\nSUBTOUR 1: 2\n"));
        let back: SolutionFile = text.parse().unwrap();
        assert_eq!(back, file);
        assert!("SUBTOUR 1 2\n".parse::<SolutionFile>().is_err());
    }

    #[test]
    fn relative_gap_examples() {
        assert_eq!(relative_gap(100.0, 100.0).unwrap(), 0.0);
        assert!((relative_gap(105.0, 100.0).unwrap() - 5.0).abs() < 1e-12);
        assert!(relative_gap(1.0, 0.0).is_err());
        assert!(relative_gap(90.0, 100.0).is_err());
    }
}
