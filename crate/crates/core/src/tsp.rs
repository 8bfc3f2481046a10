//! Tour subroutines: a nearest-neighbor + 2-opt + Or-opt heuristic and a
//! Held-Karp exact solver for small node sets.
//!
//! Tours are closed cycles given as node lists starting at `nodes[0]`. A
//! one-node tour has no edges and costs nothing; a two-node tour is the
//! out-and-back `a -> b -> a`. Cost matrices may be asymmetric.

use crate::error::{Error, Result};
use crate::instance::Matrix;

/// Largest node count accepted by [`tsp_exact_small`].
pub const EXACT_MAX_NODES: usize = 13;

const IMPROVE_EPS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: f64,
}

/// Cost of the closed tour visiting `order` in sequence.
pub fn tour_cost(costs: &Matrix, order: &[usize]) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    for w in order.windows(2) {
        total += costs.get(w[0], w[1]);
    }
    total + costs.get(order[order.len() - 1], order[0])
}

/// Heuristic tour over `nodes`, starting at `nodes[0]`.
pub fn tsp_heuristic(costs: &Matrix, nodes: &[usize]) -> Tour {
    if nodes.len() <= 3 {
        let order = nodes.to_vec();
        if nodes.len() == 3 {
            // Both orientations of the triangle; they differ only when asymmetric.
            let rev = vec![nodes[0], nodes[2], nodes[1]];
            let (a, b) = (tour_cost(costs, &order), tour_cost(costs, &rev));
            return if b + IMPROVE_EPS < a { Tour { order: rev, cost: b } } else { Tour { order, cost: a } };
        }
        let cost = tour_cost(costs, &order);
        return Tour { order, cost };
    }
    let mut order = nearest_neighbor(costs, nodes);
    loop {
        if two_opt_pass(costs, &mut order) {
            continue;
        }
        if or_opt_pass(costs, &mut order) {
            continue;
        }
        break;
    }
    let cost = tour_cost(costs, &order);
    Tour { order, cost }
}

fn nearest_neighbor(costs: &Matrix, nodes: &[usize]) -> Vec<usize> {
    let mut remaining: Vec<usize> = nodes[1..].to_vec();
    let mut order = Vec::with_capacity(nodes.len());
    order.push(nodes[0]);
    while !remaining.is_empty() {
        let last = *order.last().unwrap();
        let (pos, _) = remaining
            .iter()
            .enumerate()
            .min_by(|a, b| costs.get(last, *a.1).total_cmp(&costs.get(last, *b.1)))
            .unwrap();
        order.push(remaining.swap_remove(pos));
    }
    order
}

/// Prefix sums of forward and backward edge costs along the path `order[0..k]`.
fn prefix_costs(costs: &Matrix, order: &[usize]) -> (Vec<f64>, Vec<f64>) {
    let k = order.len();
    let mut fwd = vec![0.0; k];
    let mut bwd = vec![0.0; k];
    for p in 1..k {
        fwd[p] = fwd[p - 1] + costs.get(order[p - 1], order[p]);
        bwd[p] = bwd[p - 1] + costs.get(order[p], order[p - 1]);
    }
    (fwd, bwd)
}

/// Applies the first improving segment reversal, if any.
fn two_opt_pass(costs: &Matrix, order: &mut [usize]) -> bool {
    let k = order.len();
    if k < 4 {
        return false;
    }
    let (fwd, bwd) = prefix_costs(costs, order);
    for i in 0..k - 2 {
        for j in (i + 2)..k {
            // Reverse order[i+1..=j]; the edge after j wraps to order[0].
            let a = order[i];
            let b = order[i + 1];
            let c = order[j];
            let d = order[(j + 1) % k];
            if i == 0 && j == k - 1 {
                continue;
            }
            let inner_fwd = fwd[j] - fwd[i + 1];
            let inner_bwd = bwd[j] - bwd[i + 1];
            let delta = costs.get(a, c) + costs.get(b, d) + inner_bwd
                - costs.get(a, b)
                - costs.get(c, d)
                - inner_fwd;
            if delta < -IMPROVE_EPS {
                order[i + 1..=j].reverse();
                return true;
            }
        }
    }
    false
}

/// Applies the first improving move of a segment of 1-3 nodes, optionally
/// reversed. Position 0 never moves.
fn or_opt_pass(costs: &Matrix, order: &mut Vec<usize>) -> bool {
    let k = order.len();
    if k < 4 {
        return false;
    }
    for len in 1..=3usize {
        for s in 1..k {
            let e = s + len - 1;
            if e >= k {
                break;
            }
            let prev = order[s - 1];
            let next = order[(e + 1) % k];
            let first = order[s];
            let last = order[e];
            let mut inner_fwd = 0.0;
            let mut inner_bwd = 0.0;
            for p in s..e {
                inner_fwd += costs.get(order[p], order[p + 1]);
                inner_bwd += costs.get(order[p + 1], order[p]);
            }
            let removed = costs.get(prev, first) + costs.get(last, next) + inner_fwd;
            let base_gain = removed - costs.get(prev, next);
            // Candidate insertion edges (u, v) of the remaining tour.
            for p in 0..k {
                if p >= s - 1 && p <= e {
                    continue;
                }
                let u = order[p];
                let v = order[(p + 1) % k];
                if (p + 1) % k == s {
                    continue;
                }
                let keep = costs.get(u, first) + inner_fwd + costs.get(last, v) - costs.get(u, v);
                let flip = costs.get(u, last) + inner_bwd + costs.get(first, v) - costs.get(u, v);
                let (added, reversed) = if flip + IMPROVE_EPS < keep { (flip, true) } else { (keep, false) };
                if added - base_gain < -IMPROVE_EPS {
                    let mut seg: Vec<usize> = order.drain(s..=e).collect();
                    if reversed {
                        seg.reverse();
                    }
                    let u_pos = order.iter().position(|&x| x == u).unwrap();
                    for (off, node) in seg.into_iter().enumerate() {
                        order.insert(u_pos + 1 + off, node);
                    }
                    return true;
                }
            }
        }
    }
    false
}

/// Exact minimum-cost tour by Held-Karp dynamic programming.
pub fn tsp_exact_small(costs: &Matrix, nodes: &[usize]) -> Result<Tour> {
    let k = nodes.len();
    if k > EXACT_MAX_NODES {
        return Err(Error::SizeCap(format!(
            "exact TSP supports at most {EXACT_MAX_NODES} nodes, got {k}"
        )));
    }
    if k <= 2 {
        let order = nodes.to_vec();
        let cost = tour_cost(costs, &order);
        return Ok(Tour { order, cost });
    }
    // dp[mask][j]: cheapest path from nodes[0] through `mask` (over nodes 1..k)
    // ending at nodes[j+1].
    let m = k - 1;
    let full = 1usize << m;
    let mut dp = vec![f64::INFINITY; full * m];
    let mut parent = vec![usize::MAX; full * m];
    let c = |a: usize, b: usize| costs.get(nodes[a], nodes[b]);
    for j in 0..m {
        dp[(1 << j) * m + j] = c(0, j + 1);
    }
    for mask in 1..full {
        for j in 0..m {
            if mask & (1 << j) == 0 {
                continue;
            }
            let cur = dp[mask * m + j];
            if !cur.is_finite() {
                continue;
            }
            for nxt in 0..m {
                if mask & (1 << nxt) != 0 {
                    continue;
                }
                let nmask = mask | (1 << nxt);
                let cand = cur + c(j + 1, nxt + 1);
                let slot = nmask * m + nxt;
                if cand < dp[slot] {
                    dp[slot] = cand;
                    parent[slot] = j;
                }
            }
        }
    }
    let last_mask = full - 1;
    let (mut best_j, mut best) = (0, f64::INFINITY);
    for j in 0..m {
        let v = dp[last_mask * m + j] + c(j + 1, 0);
        if v < best {
            best = v;
            best_j = j;
        }
    }
    let mut rev = Vec::with_capacity(k);
    let (mut mask, mut j) = (last_mask, best_j);
    loop {
        rev.push(nodes[j + 1]);
        let p = parent[mask * m + j];
        mask &= !(1 << j);
        if p == usize::MAX {
            break;
        }
        j = p;
    }
    rev.push(nodes[0]);
    rev.reverse();
    Ok(Tour { order: rev, cost: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn euclid_matrix(pts: &[(f64, f64)]) -> Matrix {
        Matrix::from_fn(pts.len(), |i, j| {
            let (a, b) = (pts[i], pts[j]);
            (a.0 - b.0).hypot(a.1 - b.1)
        })
    }

    fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect()
    }

    /// Factorial enumeration with node 0 fixed.
    fn brute_force(costs: &Matrix, nodes: &[usize]) -> f64 {
        fn rec(costs: &Matrix, path: &mut Vec<usize>, rest: &mut Vec<usize>, best: &mut f64) {
            if rest.is_empty() {
                *best = best.min(tour_cost(costs, path));
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                path.push(v);
                rec(costs, path, rest, best);
                path.pop();
                rest.insert(i, v);
            }
        }
        let mut best = f64::INFINITY;
        rec(costs, &mut vec![nodes[0]], &mut nodes[1..].to_vec(), &mut best);
        best
    }

    #[test]
    fn single_node_tour_is_free() {
        let m = euclid_matrix(&[(0.0, 0.0), (3.0, 4.0)]);
        let t = tsp_heuristic(&m, &[1]);
        assert_eq!(t.order, vec![1]);
        assert_eq!(t.cost, 0.0);
        assert_eq!(tsp_exact_small(&m, &[1]).unwrap().cost, 0.0);
    }

    #[test]
    fn two_nodes_are_out_and_back() {
        let m = Matrix::from_fn(2, |i, j| if i == j { 0.0 } else if i < j { 2.0 } else { 3.0 });
        assert_eq!(tsp_exact_small(&m, &[0, 1]).unwrap().cost, 5.0);
        assert_eq!(tsp_heuristic(&m, &[0, 1]).cost, 5.0);
    }

    #[test]
    fn unit_square_perimeter() {
        let m = euclid_matrix(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]);
        let t = tsp_exact_small(&m, &[0, 1, 2, 3]).unwrap();
        assert!((t.cost - 4.0).abs() < 1e-12);
        assert!((tsp_heuristic(&m, &[0, 1, 2, 3]).cost - 4.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_is_optimal() {
        let m = euclid_matrix(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)]);
        assert!((tsp_heuristic(&m, &[0, 1, 2]).cost - 12.0).abs() < 1e-12);
    }

    #[test]
    fn exact_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 3..=8 {
            for _ in 0..5 {
                let m = euclid_matrix(&random_points(&mut rng, n));
                let nodes: Vec<usize> = (0..n).collect();
                let hk = tsp_exact_small(&m, &nodes).unwrap();
                assert!((hk.cost - brute_force(&m, &nodes)).abs() < 1e-9);
                assert!((tour_cost(&m, &hk.order) - hk.cost).abs() < 1e-9);
            }
        }
        // Asymmetric matrix.
        let m = Matrix::from_fn(6, |i, j| if i == j { 0.0 } else { ((i * 7 + j * 3) % 11) as f64 + 1.0 });
        let nodes: Vec<usize> = (0..6).collect();
        assert!((tsp_exact_small(&m, &nodes).unwrap().cost - brute_force(&m, &nodes)).abs() < 1e-9);
    }

    #[test]
    fn exact_rejects_large_sets() {
        let m = Matrix::zeros(14);
        let nodes: Vec<usize> = (0..14).collect();
        assert!(matches!(tsp_exact_small(&m, &nodes), Err(Error::SizeCap(_))));
    }

    #[test]
    fn heuristic_close_to_optimal_on_eight_nodes() {
        let mut within = 0;
        for seed in 0..200u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = euclid_matrix(&random_points(&mut rng, 8));
            let nodes: Vec<usize> = (0..8).collect();
            let h = tsp_heuristic(&m, &nodes);
            let opt = tsp_exact_small(&m, &nodes).unwrap();
            assert!(h.cost >= opt.cost - 1e-9);
            if h.cost <= 1.05 * opt.cost {
                within += 1;
            }
        }
        assert!(within >= 190, "only {within}/200 within 5%");
    }

    #[test]
    fn heuristic_is_two_opt_local_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let m = euclid_matrix(&random_points(&mut rng, 25));
        let nodes: Vec<usize> = (0..25).collect();
        let mut t = tsp_heuristic(&m, &nodes);
        assert!(!two_opt_pass(&m, &mut t.order));
        assert_eq!(t.order[0], 0);
        let mut sorted = t.order.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, nodes);
    }

    #[test]
    fn heuristic_handles_subsets_and_asymmetry() {
        let m = Matrix::from_fn(7, |i, j| if i == j { 0.0 } else { 1.0 + ((i + 2 * j) % 5) as f64 });
        let nodes = [5, 1, 3, 6];
        let t = tsp_heuristic(&m, &nodes);
        assert_eq!(t.order[0], 5);
        assert!((tour_cost(&m, &t.order) - t.cost).abs() < 1e-12);
        assert!(t.cost >= tsp_exact_small(&m, &nodes).unwrap().cost - 1e-9);
    }
}
