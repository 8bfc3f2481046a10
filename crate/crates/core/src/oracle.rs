//! Brute-force CAGVRP solver for tiny instances.
//!
//! Enumerates every GV stop set containing the base and every in-range
//! assignment of the remaining targets, pricing each configuration with exact
//! Held-Karp tours. This is the ground truth the other solvers are checked
//! against.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::tsp::{tsp_exact_small, Tour};
use crate::verify::Solution;

pub const ORACLE_MAX_TARGETS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub solution: Solution,
    pub cost: f64,
}

fn stop_options(inst: &Instance, stops: &[usize], u: usize) -> Vec<usize> {
    stops.iter().copied().filter(|&s| inst.in_range(s, u)).collect()
}

struct TourCache<'a> {
    inst: &'a Instance,
    rings: HashMap<u32, Tour>,
    subtours: HashMap<(usize, u32), Tour>,
}

impl<'a> TourCache<'a> {
    fn ring(&mut self, mask: u32) -> &Tour {
        let inst = self.inst;
        self.rings.entry(mask).or_insert_with(|| {
            let nodes: Vec<usize> = (0..inst.len()).filter(|&i| mask & (1 << i) != 0).collect();
            tsp_exact_small(inst.gv_costs(), &nodes).expect("within cap")
        })
    }

    fn subtour(&mut self, root: usize, mask: u32) -> &Tour {
        let inst = self.inst;
        self.subtours.entry((root, mask)).or_insert_with(|| {
            let mut nodes = vec![root];
            nodes.extend((0..inst.len()).filter(|&i| mask & (1 << i) != 0));
            tsp_exact_small(inst.uav_costs(), &nodes).expect("within cap")
        })
    }
}

/// Exact optimum by exhaustive enumeration (`|T| <= 8`).
///
/// Ties are broken by enumeration order: stop sets by increasing bitmask,
/// then assignments lexicographically.
pub fn brute_force(inst: &Instance) -> Result<OracleResult> {
    let n = inst.len();
    if n > ORACLE_MAX_TARGETS {
        return Err(Error::SizeCap(format!(
            "oracle supports at most {ORACLE_MAX_TARGETS} targets, got {n}"
        )));
    }
    let mut cache = TourCache { inst, rings: HashMap::new(), subtours: HashMap::new() };
    let mut best: Option<(f64, u32, Vec<usize>)> = None;

    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let stops: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let others: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) == 0).collect();
        let options: Vec<Vec<usize>> = others.iter().map(|&u| stop_options(inst, &stops, u)).collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let ring_cost = cache.ring(mask).cost;
        if let Some((b, _, _)) = &best {
            if ring_cost >= *b + 1e-9 {
                continue;
            }
        }
        // Odometer over the per-target options.
        let mut choice = vec![0usize; others.len()];
        loop {
            let mut groups: BTreeMap<usize, u32> = BTreeMap::new();
            for (k, &u) in others.iter().enumerate() {
                *groups.entry(options[k][choice[k]]).or_insert(0) |= 1 << u;
            }
            let mut cost = ring_cost;
            for (&root, &g) in &groups {
                cost += cache.subtour(root, g).cost;
            }
            let better = match &best {
                None => true,
                Some((b, _, _)) => cost < *b - 1e-9,
            };
            if better {
                let roots = others.iter().enumerate().map(|(k, _)| options[k][choice[k]]).collect();
                best = Some((cost, mask, roots));
            }
            // Advance.
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }

    let (cost, mask, roots) =
        best.ok_or_else(|| Error::Infeasible("no feasible stop configuration".into()))?;
    let ring = cache.ring(mask).order.clone();
    let others: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) == 0).collect();
    let mut groups: BTreeMap<usize, u32> = BTreeMap::new();
    for (u, r) in others.iter().zip(&roots) {
        *groups.entry(*r).or_insert(0) |= 1 << u;
    }
    let mut subtours = BTreeMap::new();
    for (&root, &g) in &groups {
        let t = cache.subtour(root, g);
        subtours.insert(root, t.order[1..].to_vec());
    }
    Ok(OracleResult { solution: Solution::from_routes(ring, subtours), cost })
}

fn permutations(items: &[usize], out: &mut Vec<Vec<usize>>) {
    fn rec(cur: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            rec(cur, rest, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    rec(&mut Vec::new(), &mut items.to_vec(), out);
}

/// Calls `visit` on every feasible solution with distinct variable values:
/// rings up to orientation, sub-tours in every direction. Stops early and
/// returns `false` once `limit` solutions have been visited.
pub fn for_each_feasible(inst: &Instance, limit: usize, mut visit: impl FnMut(&Solution)) -> Result<bool> {
    let n = inst.len();
    if n > ORACLE_MAX_TARGETS {
        return Err(Error::SizeCap(format!(
            "enumeration supports at most {ORACLE_MAX_TARGETS} targets, got {n}"
        )));
    }
    let mut count = 0usize;
    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let stops: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let others: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) == 0).collect();
        let options: Vec<Vec<usize>> = others.iter().map(|&u| stop_options(inst, &stops, u)).collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut rings = Vec::new();
        let mut rest_perms = Vec::new();
        permutations(&stops[1..], &mut rest_perms);
        for p in rest_perms {
            // One orientation per undirected ring.
            if p.len() >= 2 && p[0] > p[p.len() - 1] {
                continue;
            }
            let mut r = vec![0];
            r.extend(p);
            rings.push(r);
        }
        let mut choice = vec![0usize; others.len()];
        loop {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (k, &u) in others.iter().enumerate() {
                groups.entry(options[k][choice[k]]).or_default().push(u);
            }
            let group_perms: Vec<(usize, Vec<Vec<usize>>)> = groups
                .iter()
                .map(|(&r, g)| {
                    let mut ps = Vec::new();
                    permutations(g, &mut ps);
                    (r, ps)
                })
                .collect();
            let mut idx = vec![0usize; group_perms.len()];
            loop {
                let subtours: BTreeMap<usize, Vec<usize>> =
                    group_perms.iter().zip(&idx).map(|((r, ps), &i)| (*r, ps[i].clone())).collect();
                for ring in &rings {
                    if count >= limit {
                        return Ok(false);
                    }
                    visit(&Solution::from_routes(ring.clone(), subtours.clone()));
                    count += 1;
                }
                let mut k = 0;
                while k < idx.len() {
                    idx[k] += 1;
                    if idx[k] < group_perms[k].1.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    Ok(true)
}

/// A uniformly shaped random feasible plan: each target becomes a stop
/// with probability `stop_prob` (the base always), the others join a random
/// in-range stop (or become stops), and ring and sub-tour orders are
/// shuffled.
pub fn random_feasible<R: Rng + ?Sized>(inst: &Instance, stop_prob: f64, rng: &mut R) -> Solution {
    let n = inst.len();
    let mut is_stop: Vec<bool> = (0..n).map(|i| i == 0 || rng.gen_bool(stop_prob.clamp(0.0, 1.0))).collect();
    let mut subtours: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut others: Vec<usize> = (0..n).filter(|&i| !is_stop[i]).collect();
    others.shuffle(rng);
    for u in others {
        let options: Vec<usize> = (0..n).filter(|&s| is_stop[s] && inst.in_range(s, u)).collect();
        match options.choose(rng) {
            Some(&s) => subtours.entry(s).or_default().push(u),
            None => is_stop[u] = true,
        }
    }
    let mut ring: Vec<usize> = (1..n).filter(|&i| is_stop[i]).collect();
    ring.shuffle(rng);
    ring.insert(0, 0);
    Solution::from_routes(ring, subtours)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::evaluate_objective;
    use crate::instance::{generate_instance, tiny4, InstanceClass, Point};
    use crate::verify::check_feasibility;

    #[test]
    fn single_target_costs_nothing() {
        let inst = generate_instance(InstanceClass::A, 1, 0.1, 1).unwrap();
        let r = brute_force(&inst).unwrap();
        assert_eq!(r.cost, 0.0);
        assert_eq!(r.solution.gv_ring, vec![0]);
    }

    #[test]
    fn two_targets_pick_cheaper_option() {
        for alpha in [0.1, 0.9, 1.0] {
            let inst = Instance::euclidean(
                vec![Point::new(0.0, 0.0), Point::new(12.0, 5.0)],
                25.0,
                alpha,
                InstanceClass::Custom,
                None,
            )
            .unwrap();
            let gv = 2.0 * inst.c(0, 1);
            let uav = inst.d(0, 1) + inst.d(1, 0);
            let r = brute_force(&inst).unwrap();
            assert!((r.cost - gv.min(uav)).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny4_optimum() {
        let t = tiny4();
        let r = brute_force(&t).unwrap();
        assert!(check_feasibility(&t, &r.solution).ok());
        assert!((evaluate_objective(&t, &r.solution, false).unwrap() - r.cost).abs() < 1e-12);
        // GV 0 -> 1 -> 0 (20), UAV from 1 visits 2 and 3: 0.5 * (10 + 14.142... + 10).
        let expect = 20.0 + 0.5 * (20.0 + 200f64.sqrt());
        assert!((r.cost - expect).abs() < 1e-9, "{}", r.cost);
    }

    #[test]
    fn enumeration_minimum_agrees() {
        for seed in 0..4 {
            let inst = generate_instance(InstanceClass::A, 5, 0.3, seed).unwrap();
            let r = brute_force(&inst).unwrap();
            let mut best = f64::INFINITY;
            let complete = for_each_feasible(&inst, 1_000_000, |s| {
                assert!(check_feasibility(&inst, s).ok());
                best = best.min(evaluate_objective(&inst, s, false).unwrap());
            })
            .unwrap();
            assert!(complete);
            assert!((best - r.cost).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_large_instances() {
        let inst = generate_instance(InstanceClass::A, 9, 0.3, 0).unwrap();
        assert!(matches!(brute_force(&inst), Err(Error::SizeCap(_))));
    }

    #[test]
    fn random_plans_are_feasible() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for seed in 0..20 {
            let inst = generate_instance(InstanceClass::A, 3 + seed as usize % 8, 0.2, seed).unwrap();
            for p in [0.0, 0.3, 1.0] {
                let sol = random_feasible(&inst, p, &mut rng);
                assert!(check_feasibility(&inst, &sol).ok(), "{sol}");
            }
        }
    }
}
