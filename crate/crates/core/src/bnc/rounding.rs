//! LP-rounding primal heuristic.

use std::collections::BTreeMap;

use crate::formulation::FractionalPoint;
use crate::instance::Instance;
use crate::tsp::tsp_heuristic;
use crate::verify::Solution;

/// Rounds the assignment part of a relaxation point into a route plan.
///
/// Targets with `y_ii >= 0.5` (and the base) become GV stops. The others, in
/// index order, join the closest in-range stop by UAV cost, or become stops
/// themselves when none is in range. Ring and sub-tours come from
/// [`tsp_heuristic`]. The result is always feasible.
pub fn lp_rounding(point: &FractionalPoint, inst: &Instance) -> Option<Solution> {
    let n = inst.len();
    if point.targets() != n || n == 0 {
        return None;
    }
    let mut is_stop: Vec<bool> = (0..n).map(|i| point.y(i, i) >= 0.5).collect();
    is_stop[0] = true;
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for u in 0..n {
        if is_stop[u] {
            continue;
        }
        let best = (0..n)
            .filter(|&v| is_stop[v] && inst.in_range(u, v))
            .min_by(|&a, &b| inst.d(u, a).total_cmp(&inst.d(u, b)).then(a.cmp(&b)));
        match best {
            Some(k) => groups.entry(k).or_default().push(u),
            None => is_stop[u] = true,
        }
    }
    let stops: Vec<usize> = (0..n).filter(|&i| is_stop[i]).collect();
    // Promoted stops can end up with an empty group only; nothing to rebalance.
    let ring = tsp_heuristic(inst.gv_costs(), &stops).order;
    let mut subtours = BTreeMap::new();
    for (root, members) in groups {
        let mut nodes = vec![root];
        nodes.extend(members);
        let tour = tsp_heuristic(inst.uav_costs(), &nodes);
        let start = tour.order.iter().position(|&v| v == root).unwrap_or(0);
        let mut order = tour.order[start..].to_vec();
        order.extend_from_slice(&tour.order[..start]);
        subtours.insert(root, order[1..].to_vec());
    }
    let ring = rotate_to_base(ring);
    Some(Solution::from_routes(ring, subtours))
}

fn rotate_to_base(mut ring: Vec<usize>) -> Vec<usize> {
    if let Some(p) = ring.iter().position(|&v| v == 0) {
        ring.rotate_left(p);
    }
    ring
}
