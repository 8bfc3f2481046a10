//! One-in-a-set (generalized) TSP on directed, possibly incomplete graphs.
//!
//! A tour is a cyclic vertex sequence that visits exactly one vertex of
//! every set and only uses existing edges. Tours are stored starting in
//! set 0.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Graphs up to this many vertices keep a dense cost matrix.
const DENSE_MAX_VERTICES: usize = 2048;
/// Largest set count accepted by [`solve_gtsp_exact_small`].
pub const EXACT_MAX_SETS: usize = 8;
/// Largest product of set sizes accepted by [`solve_gtsp_exact_small`].
pub const EXACT_MAX_PRODUCT: f64 = 1e6;

#[derive(Debug, Clone)]
enum Costs {
    Dense(Vec<f64>),
    Sparse(Vec<Vec<(usize, f64)>>),
}

/// Vertex partition plus directed edge costs.
#[derive(Debug, Clone)]
pub struct GtspGraph {
    sets: Vec<Vec<usize>>,
    set_of: Vec<usize>,
    edges: Vec<(usize, usize, f64)>,
    costs: Costs,
}

impl GtspGraph {
    /// Validates that `sets` partition `0..V` and that no edge stays inside a
    /// set or repeats.
    pub fn new(sets: Vec<Vec<usize>>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidArgument("a GTSP graph needs at least one set".into()));
        }
        let nv: usize = sets.iter().map(Vec::len).sum();
        let mut set_of = vec![usize::MAX; nv];
        for (t, set) in sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidArgument(format!("set {t} is empty")));
            }
            for &v in set {
                if v >= nv {
                    return Err(Error::IndexOutOfRange { index: v, len: nv });
                }
                if set_of[v] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("vertex {v} is in sets {} and {t}", set_of[v])));
                }
                set_of[v] = t;
            }
        }
        let mut costs = if nv <= DENSE_MAX_VERTICES {
            Costs::Dense(vec![f64::INFINITY; nv * nv])
        } else {
            Costs::Sparse(vec![Vec::new(); nv])
        };
        for &(u, v, c) in &edges {
            if u >= nv || v >= nv {
                return Err(Error::IndexOutOfRange { index: u.max(v), len: nv });
            }
            if set_of[u] == set_of[v] {
                return Err(Error::InvalidArgument(format!("edge {u}->{v} stays inside set {}", set_of[u])));
            }
            if !c.is_finite() {
                return Err(Error::InvalidArgument(format!("edge {u}->{v} has cost {c}")));
            }
            let duplicate = match &mut costs {
                Costs::Dense(m) => {
                    let slot = &mut m[u * nv + v];
                    let dup = slot.is_finite();
                    *slot = c;
                    dup
                }
                Costs::Sparse(adj) => {
                    let dup = adj[u].iter().any(|e| e.0 == v);
                    adj[u].push((v, c));
                    dup
                }
            };
            if duplicate {
                return Err(Error::InvalidArgument(format!("edge {u}->{v} appears twice")));
            }
        }
        if let Costs::Sparse(adj) = &mut costs {
            for out in adj.iter_mut() {
                out.sort_by_key(|e| e.0);
            }
        }
        Ok(GtspGraph { sets, set_of, edges, costs })
    }

    pub fn num_vertices(&self) -> usize {
        self.set_of.len()
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set_of(&self, v: usize) -> usize {
        self.set_of[v]
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Cost of edge `u -> v`, or `None` when absent.
    pub fn edge_cost(&self, u: usize, v: usize) -> Option<f64> {
        let c = self.cost(u, v);
        c.is_finite().then_some(c)
    }

    /// Infinite for missing edges.
    #[inline]
    fn cost(&self, u: usize, v: usize) -> f64 {
        match &self.costs {
            Costs::Dense(m) => m[u * self.set_of.len() + v],
            Costs::Sparse(adj) => match adj[u].binary_search_by_key(&v, |e| e.0) {
                Ok(p) => adj[u][p].1,
                Err(_) => f64::INFINITY,
            },
        }
    }

    /// Cyclic cost of `tour`, infinite when an edge is missing. A single
    /// vertex costs 0.
    fn cycle_cost(&self, tour: &[usize]) -> f64 {
        if tour.len() < 2 {
            return 0.0;
        }
        let mut total = 0.0;
        for p in 0..tour.len() {
            total += self.cost(tour[p], tour[(p + 1) % tour.len()]);
        }
        total
    }

    /// Checks that `tour` visits each set exactly once over existing edges
    /// and returns its cost.
    pub fn check_tour(&self, tour: &[usize]) -> Result<f64> {
        let mut seen = vec![false; self.sets.len()];
        for &v in tour {
            if v >= self.num_vertices() {
                return Err(Error::IndexOutOfRange { index: v, len: self.num_vertices() });
            }
            let t = self.set_of[v];
            if seen[t] {
                return Err(Error::InvalidTour(format!("set {t} visited twice")));
            }
            seen[t] = true;
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidTour(format!("set {t} not visited")));
        }
        if tour.len() >= 2 {
            for p in 0..tour.len() {
                let (u, v) = (tour[p], tour[(p + 1) % tour.len()]);
                if !self.cost(u, v).is_finite() {
                    return Err(Error::InvalidTour(format!("no edge {u}->{v}")));
                }
            }
        }
        Ok(self.cycle_cost(tour))
    }

    /// Text form: a header, one `SET` line per set, one `EDGE` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "GTSP {} {} {}", self.num_vertices(), self.num_sets(), self.edges.len());
        for (t, set) in self.sets.iter().enumerate() {
            let members: Vec<String> = set.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "SET {t} {}", members.join(" "));
        }
        for &(u, v, c) in &self.edges {
            let _ = writeln!(s, "EDGE {u} {v} {c}");
        }
        s
    }
}

impl FromStr for GtspGraph {
    type Err = Error;

    /// Parses [`GtspGraph::to_text`] output. Blank lines, `#` comments, and
    /// lines with other keywords (such as `VERTEX`) are skipped.
    fn from_str(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut header: Option<(usize, usize, usize)> = None;
        let mut sets: Vec<Option<Vec<usize>>> = Vec::new();
        let mut edges = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            let mut tok = body.split_whitespace();
            let Some(key) = tok.next() else { continue };
            let nums = |tok: std::str::SplitWhitespace<'_>| -> Result<Vec<usize>> {
                tok.map(|t| t.parse::<usize>().map_err(|e| parse_err(line, format!("{t:?}: {e}")))).collect()
            };
            match key {
                "GTSP" => {
                    let v = nums(tok)?;
                    if v.len() != 3 {
                        return Err(parse_err(line, "expected GTSP <vertices> <sets> <edges>".into()));
                    }
                    header = Some((v[0], v[1], v[2]));
                    sets = vec![None; v[1]];
                }
                "SET" => {
                    let v = nums(tok)?;
                    let Some((&t, members)) = v.split_first() else {
                        return Err(parse_err(line, "SET without an index".into()));
                    };
                    let slot = sets.get_mut(t).ok_or_else(|| parse_err(line, format!("set {t} out of range")))?;
                    if slot.is_some() {
                        return Err(parse_err(line, format!("set {t} given twice")));
                    }
                    *slot = Some(members.to_vec());
                }
                "EDGE" => {
                    let parts: Vec<&str> = tok.collect();
                    if parts.len() != 3 {
                        return Err(parse_err(line, "expected EDGE <from> <to> <cost>".into()));
                    }
                    let u = parts[0].parse().map_err(|e| parse_err(line, format!("{:?}: {e}", parts[0])))?;
                    let v = parts[1].parse().map_err(|e| parse_err(line, format!("{:?}: {e}", parts[1])))?;
                    let c = parts[2].parse().map_err(|e| parse_err(line, format!("{:?}: {e}", parts[2])))?;
                    edges.push((u, v, c));
                }
                _ => {}
            }
        }
        let (nv, _, ne) = header.ok_or_else(|| parse_err(0, "missing GTSP header".into()))?;
        let sets: Vec<Vec<usize>> = sets
            .into_iter()
            .enumerate()
            .map(|(t, s)| s.ok_or_else(|| parse_err(0, format!("set {t} missing"))))
            .collect::<Result<_>>()?;
        if edges.len() != ne {
            return Err(parse_err(0, format!("header promises {ne} edges, found {}", edges.len())));
        }
        let g = GtspGraph::new(sets, edges)?;
        if g.num_vertices() != nv {
            return Err(parse_err(0, format!("header promises {nv} vertices, sets hold {}", g.num_vertices())));
        }
        Ok(g)
    }
}

/// A tour starting in set 0 with its cost.
#[derive(Debug, Clone, PartialEq)]
pub struct GtspTour {
    pub vertices: Vec<usize>,
    pub cost: f64,
}

/// Cheapest vertex choice for a fixed cyclic set order starting with
/// `order[0]`. Returns `None` when no choice closes the cycle.
pub fn best_vertices_for_order(g: &GtspGraph, order: &[usize]) -> Option<GtspTour> {
    let first = order.first()?;
    if order.len() == 1 {
        return Some(GtspTour { vertices: vec![g.sets[*first][0]], cost: 0.0 });
    }
    // The DP repeats once per start vertex, so start at the smallest set.
    let shift = (0..order.len()).min_by_key(|&k| g.sets[order[k]].len()).unwrap_or(0);
    if shift == 0 {
        return vertices_from_first(g, order);
    }
    let mut rotated = order.to_vec();
    rotated.rotate_left(shift);
    let mut tour = vertices_from_first(g, &rotated)?;
    tour.vertices.rotate_right(shift);
    Some(tour)
}

fn vertices_from_first(g: &GtspGraph, order: &[usize]) -> Option<GtspTour> {
    let first = order.first()?;
    let mut best: Option<GtspTour> = None;
    // Layer buffers: cost to reach each vertex of the current set, and the
    // predecessor index per layer.
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for &s in &g.sets[*first] {
        let mut dist = vec![0.0];
        let start = [s];
        let mut prev_set: &[usize] = &start;
        for (layer, &t) in order.iter().enumerate().skip(1) {
            let set = &g.sets[t];
            let mut next = vec![f64::INFINITY; set.len()];
            let pl = &mut preds[layer];
            pl.clear();
            pl.resize(set.len(), usize::MAX);
            for (b, &v) in set.iter().enumerate() {
                for (a, &u) in prev_set.iter().enumerate() {
                    let c = dist[a] + g.cost(u, v);
                    if c < next[b] {
                        next[b] = c;
                        pl[b] = a;
                    }
                }
            }
            dist = next;
            prev_set = set;
        }
        let mut close = f64::INFINITY;
        let mut end = usize::MAX;
        for (a, &u) in prev_set.iter().enumerate() {
            let c = dist[a] + g.cost(u, s);
            if c < close {
                close = c;
                end = a;
            }
        }
        if !close.is_finite() || best.as_ref().is_some_and(|b| b.cost <= close) {
            continue;
        }
        let mut vertices = vec![0; order.len()];
        vertices[0] = s;
        let mut idx = end;
        for layer in (1..order.len()).rev() {
            vertices[layer] = g.sets[order[layer]][idx];
            idx = preds[layer][idx];
        }
        best = Some(GtspTour { vertices, cost: close });
    }
    best
}

/// Exact optimum by enumerating set orders after set 0.
pub fn solve_gtsp_exact_small(g: &GtspGraph) -> Result<GtspTour> {
    let m = g.num_sets();
    if m > EXACT_MAX_SETS {
        return Err(Error::SizeCap(format!("{m} sets exceed the exact cap of {EXACT_MAX_SETS}")));
    }
    let product: f64 = g.sets.iter().map(|s| s.len() as f64).product();
    if product > EXACT_MAX_PRODUCT {
        return Err(Error::SizeCap(format!("set size product {product} exceeds {EXACT_MAX_PRODUCT}")));
    }
    let mut rest: Vec<usize> = (1..m).collect();
    let mut best: Option<GtspTour> = None;
    let mut order = vec![0; m];
    permute(&mut rest, 0, &mut |perm| {
        order[1..].copy_from_slice(perm);
        if let Some(t) = best_vertices_for_order(g, &order) {
            if best.as_ref().is_none_or(|b| t.cost < b.cost) {
                best = Some(t);
            }
        }
    });
    best.ok_or_else(|| Error::Infeasible("no tour visits every set".into()))
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[derive(Debug, Clone)]
pub struct LnsParams {
    /// Defaults to `2000 * sets`.
    pub iterations: Option<usize>,
    pub seed: u64,
    pub removal_fraction: f64,
    /// Starting tour; greedy insertion when absent or invalid.
    pub initial: Option<Vec<usize>>,
    pub time_limit: Option<Duration>,
}

impl Default for LnsParams {
    fn default() -> Self {
        LnsParams { iterations: None, seed: 0, removal_fraction: 0.3, initial: None, time_limit: None }
    }
}

/// Cheapest feasible insertion of one vertex of `set` into the cyclic
/// `tour`: `(delta, vertex, position)` where the vertex goes before
/// `tour[position]` (or at the end when `position == tour.len()`).
fn best_insertion(g: &GtspGraph, tour: &[usize], set: usize) -> Option<(f64, usize, usize)> {
    let mut best: Option<(f64, usize, usize)> = None;
    let len = tour.len();
    if let Costs::Dense(m) = &g.costs {
        let nv = g.set_of.len();
        let members = &g.sets[set];
        let (mut bd, mut bv, mut bp) = (f64::INFINITY, usize::MAX, 0);
        for p in 1..=len {
            let prev = tour[p - 1];
            let next = tour[p % len];
            let old = if len == 1 { 0.0 } else { m[prev * nv + next] };
            let row = &m[prev * nv..(prev + 1) * nv];
            for &v in members {
                let delta = row[v] + m[v * nv + next] - old;
                if delta < bd {
                    (bd, bv, bp) = (delta, v, p);
                }
            }
        }
        return (bv != usize::MAX).then_some((bd, bv, bp));
    }
    for p in 1..=len {
        let prev = tour[p - 1];
        let next = tour[p % len];
        let old = if len == 1 { 0.0 } else { g.cost(prev, next) };
        for &v in &g.sets[set] {
            let delta = g.cost(prev, v) + g.cost(v, next) - old;
            if delta.is_finite() && best.is_none_or(|b| delta < b.0) {
                best = Some((delta, v, p));
            }
        }
    }
    best
}

/// Inserts the `pending` sets greedily; `false` when some set never fits.
fn reinsert(g: &GtspGraph, tour: &mut Vec<usize>, pending: &mut Vec<usize>) -> bool {
    while !pending.is_empty() {
        let mut progress = false;
        let mut k = 0;
        while k < pending.len() {
            match best_insertion(g, tour, pending[k]) {
                Some((_, v, p)) => {
                    tour.insert(p, v);
                    pending.remove(k);
                    progress = true;
                }
                None => k += 1,
            }
        }
        if !progress {
            return false;
        }
    }
    true
}

/// Drops vertices whose incoming edge is missing until the cycle is
/// consistent; returns the sets of the dropped vertices.
fn drop_broken(g: &GtspGraph, tour: &mut Vec<usize>) -> Vec<usize> {
    let mut dropped = Vec::new();
    loop {
        let len = tour.len();
        if len < 2 {
            break;
        }
        let broken = (1..=len).find(|&p| !g.cost(tour[p - 1], tour[p % len]).is_finite());
        match broken {
            Some(p) if p < len => dropped.push(g.set_of[tour.remove(p)]),
            // Only the closing edge into the start is missing.
            Some(_) => dropped.push(g.set_of[tour.pop().expect("len >= 2")]),
            None => break,
        }
    }
    dropped
}

fn set_order(g: &GtspGraph, tour: &[usize]) -> Vec<usize> {
    tour.iter().map(|&v| g.set_of[v]).collect()
}

/// Large-neighborhood search: remove a share of the set visits (random sets
/// or a contiguous segment), reinsert each at its cheapest feasible vertex
/// and position, re-pick every set's vertex optimally for the resulting
/// order, and keep strict improvements. Deterministic for a fixed seed.
pub fn solve_gtsp_lns(g: &GtspGraph, params: &LnsParams) -> Result<GtspTour> {
    let m = g.num_sets();
    if !(0.0..=1.0).contains(&params.removal_fraction) {
        return Err(Error::InvalidArgument(format!("removal fraction {} outside [0, 1]", params.removal_fraction)));
    }
    let start = Instant::now();
    let mut best = initial_tour(g, params.initial.as_deref())?;
    if g.sets.iter().all(|s| s.len() == 1) && m <= 3 {
        return Ok(best);
    }
    let iterations = params.iterations.unwrap_or(2000 * m);
    let remove = ((params.removal_fraction * m as f64).ceil() as usize).clamp(1, m.saturating_sub(1).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pending = Vec::with_capacity(m);
    for it in 0..iterations {
        if m <= 1 {
            break;
        }
        if it % 64 == 0 && params.time_limit.is_some_and(|lim| start.elapsed() >= lim) {
            break;
        }
        let mut tour = best.vertices.clone();
        pending.clear();
        if rng.gen_bool(0.5) {
            // Random sets; position 0 (set 0) stays.
            let mut pos: Vec<usize> = (1..tour.len()).collect();
            pos.shuffle(&mut rng);
            pos.truncate(remove);
            pos.sort_unstable_by(|a, b| b.cmp(a));
            for p in pos {
                pending.push(g.set_of[tour.remove(p)]);
            }
        } else {
            let k = remove.min(tour.len() - 1);
            let first = rng.gen_range(1..=tour.len() - k);
            pending.extend(tour.drain(first..first + k).map(|v| g.set_of[v]));
        }
        pending.extend(drop_broken(g, &mut tour));
        pending.shuffle(&mut rng);
        if !reinsert(g, &mut tour, &mut pending) {
            continue;
        }
        let Some(cand) = best_vertices_for_order(g, &set_order(g, &tour)) else { continue };
        if cand.cost < best.cost - 1e-12 {
            best = cand;
        }
    }
    Ok(best)
}

fn initial_tour(g: &GtspGraph, hint: Option<&[usize]>) -> Result<GtspTour> {
    if let Some(h) = hint {
        if let Ok(cost) = g.check_tour(h) {
            let mut vertices = h.to_vec();
            if let Some(p) = vertices.iter().position(|&v| g.set_of[v] == 0) {
                vertices.rotate_left(p);
            }
            let tour = GtspTour { vertices, cost };
            return Ok(best_vertices_for_order(g, &set_order(g, &tour.vertices)).unwrap_or(tour));
        }
    }
    for &s in &g.sets[0] {
        let mut tour = vec![s];
        let mut pending: Vec<usize> = (1..g.num_sets()).collect();
        if reinsert(g, &mut tour, &mut pending) {
            let cost = g.cycle_cost(&tour);
            if cost.is_finite() {
                return Ok(GtspTour { vertices: tour, cost });
            }
        }
    }
    // Nearest-neighbor set order on the cheapest inter-set edges.
    let m = g.num_sets();
    let mut set_cost = vec![f64::INFINITY; m * m];
    for &(u, v, c) in &g.edges {
        let slot = &mut set_cost[g.set_of[u] * m + g.set_of[v]];
        *slot = slot.min(c);
    }
    let mut order = vec![0];
    let mut used = vec![false; m];
    used[0] = true;
    for _ in 1..m {
        let last = *order.last().expect("non-empty");
        let next = (0..m)
            .filter(|&t| !used[t])
            .min_by(|&a, &b| set_cost[last * m + a].total_cmp(&set_cost[last * m + b]))
            .expect("unused set remains");
        used[next] = true;
        order.push(next);
    }
    best_vertices_for_order(g, &order).ok_or_else(|| Error::Infeasible("no construction found a tour".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two-vertex sets on a line: set t holds a cheap and a dear copy.
    fn ladder(m: usize) -> GtspGraph {
        let sets: Vec<Vec<usize>> = (0..m).map(|t| vec![2 * t, 2 * t + 1]).collect();
        let mut edges = Vec::new();
        for u in 0..2 * m {
            for v in 0..2 * m {
                if u / 2 != v / 2 {
                    let (a, b) = ((u / 2) as f64, (v / 2) as f64);
                    edges.push((u, v, (a - b).abs() + (u % 2 + v % 2) as f64 * 10.0));
                }
            }
        }
        GtspGraph::new(sets, edges).unwrap()
    }

    #[test]
    fn single_set_tour() {
        let g = GtspGraph::new(vec![vec![0]], vec![]).unwrap();
        let t = solve_gtsp_exact_small(&g).unwrap();
        assert_eq!(t, GtspTour { vertices: vec![0], cost: 0.0 });
        assert_eq!(solve_gtsp_lns(&g, &LnsParams::default()).unwrap().cost, 0.0);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(GtspGraph::new(vec![], vec![]).is_err());
        assert!(GtspGraph::new(vec![vec![0, 1]], vec![(0, 1, 1.0)]).is_err());
        assert!(GtspGraph::new(vec![vec![0], vec![0]], vec![]).is_err());
        assert!(GtspGraph::new(vec![vec![0], vec![1]], vec![(0, 1, 1.0), (0, 1, 2.0)]).is_err());
        assert!(GtspGraph::new(vec![vec![0], vec![2]], vec![]).is_err());
    }

    #[test]
    fn ladder_optimum_uses_cheap_copies() {
        // Cheap copies on a line 0..m-1: out and back costs 2(m-1).
        let g = ladder(5);
        let t = solve_gtsp_exact_small(&g).unwrap();
        assert!((t.cost - 8.0).abs() < 1e-12);
        assert!(t.vertices.iter().all(|v| v % 2 == 0));
        assert_eq!(g.check_tour(&t.vertices).unwrap(), t.cost);
        let h = solve_gtsp_lns(&g, &LnsParams { seed: 3, ..Default::default() }).unwrap();
        assert!((h.cost - 8.0).abs() < 1e-12);
    }

    #[test]
    fn order_dp_picks_cheapest_vertices() {
        let g = ladder(4);
        let t = best_vertices_for_order(&g, &[0, 2, 1, 3]).unwrap();
        // |0-2| + |2-1| + |1-3| + |3-0| = 8.
        assert_eq!(t.vertices, vec![0, 4, 2, 6]);
        assert!((t.cost - 8.0).abs() < 1e-12);
    }

    #[test]
    fn incomplete_graph_needs_the_only_cycle() {
        // Directed triangle 0 -> 1 -> 2 -> 0 plus a dead-end vertex 3 in set 1.
        let g = GtspGraph::new(
            vec![vec![0], vec![1, 3], vec![2]],
            vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 0.1)],
        )
        .unwrap();
        let t = solve_gtsp_exact_small(&g).unwrap();
        assert_eq!(t.vertices, vec![0, 1, 2]);
        let h = solve_gtsp_lns(&g, &LnsParams::default()).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2]);
        assert!(g.check_tour(&[0, 2, 1]).is_err());
        assert!(g.check_tour(&[0, 1]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = ladder(3);
        let text = format!("# comment\nVERTEX 0 0 0\n{}", g.to_text());
        let h: GtspGraph = text.parse().unwrap();
        assert_eq!(h.sets(), g.sets());
        assert_eq!(h.edges(), g.edges());
        assert!("GTSP 2 1 0\nSET 0 0 1\nEDGE 0 1 x\n".parse::<GtspGraph>().is_err());
        assert!("SET 0 0\n".parse::<GtspGraph>().is_err());
    }

    #[test]
    fn lns_is_deterministic_and_no_worse_than_start() {
        let g = ladder(7);
        let p = LnsParams { seed: 11, iterations: Some(50), ..Default::default() };
        let a = solve_gtsp_lns(&g, &p).unwrap();
        let b = solve_gtsp_lns(&g, &p).unwrap();
        assert_eq!(a, b);
        let start = initial_tour(&g, None).unwrap();
        assert!(a.cost <= start.cost + 1e-12);
    }
}
