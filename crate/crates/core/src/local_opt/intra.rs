//! Intra-route 3-opt: segment reversals and segment relocations (with or
//! without reversal), first improvement, until a local optimum.

use crate::vrptw::{is_time_feasible, Instance, NodeId, Solution, DEPOT, EPS};

use super::MoveOutcome;

pub fn intra_route_3opt(inst: &Instance, sol: &mut Solution, r: usize) -> MoveOutcome {
    if r >= sol.num_slots() || sol.route(r).len() < 2 {
        return MoveOutcome::none();
    }
    let before = sol.route(r).length();
    let mut nodes = sol.route(r).nodes().to_vec();
    let mut improved = false;
    while let Some(next) = improve_once(inst, &nodes) {
        nodes = next;
        improved = true;
    }
    if !improved {
        return MoveOutcome::none();
    }
    sol.set_route(inst, r, nodes);
    let delta = sol.route(r).length() - before;
    if delta < -EPS {
        MoveOutcome::applied(delta, vec![r])
    } else {
        MoveOutcome::none()
    }
}

/// Length-optimal reordering is not attempted; this only looks for one
/// improving, time-feasible 2-opt or or-3opt move.
pub(crate) fn improve_once(inst: &Instance, nodes: &[NodeId]) -> Option<Vec<NodeId>> {
    let len = nodes.len();
    let at = |k: isize| -> NodeId {
        if k < 0 || k as usize >= len {
            DEPOT
        } else {
            nodes[k as usize]
        }
    };
    let d = |a: NodeId, b: NodeId| inst.distance(a, b);

    // reversal of nodes[i..=j]
    for i in 0..len {
        for j in i + 1..len {
            let prev = at(i as isize - 1);
            let next = at(j as isize + 1);
            let delta = d(prev, nodes[j]) + d(nodes[i], next) - d(prev, nodes[i]) - d(nodes[j], next);
            if delta < -EPS {
                let mut cand = nodes.to_vec();
                cand[i..=j].reverse();
                if is_time_feasible(inst, &cand) {
                    return Some(cand);
                }
            }
        }
    }

    // relocation of nodes[i..=j] between reduced[k-1] and reduced[k]
    let mut reduced: Vec<NodeId> = Vec::with_capacity(len);
    for i in 0..len {
        for j in i..len {
            if j - i + 1 == len {
                continue;
            }
            let prev = at(i as isize - 1);
            let next = at(j as isize + 1);
            let gain = d(prev, nodes[i]) + d(nodes[j], next) - d(prev, next);
            reduced.clear();
            reduced.extend_from_slice(&nodes[..i]);
            reduced.extend_from_slice(&nodes[j + 1..]);
            for k in 0..=reduced.len() {
                let u = if k == 0 { DEPOT } else { reduced[k - 1] };
                let v = if k == reduced.len() { DEPOT } else { reduced[k] };
                for reversed in [false, true] {
                    if k == i && !reversed {
                        continue;
                    }
                    let (first, last) = if reversed {
                        (nodes[j], nodes[i])
                    } else {
                        (nodes[i], nodes[j])
                    };
                    let add = d(u, first) + d(last, v) - d(u, v);
                    if add - gain < -EPS {
                        let mut cand = Vec::with_capacity(len);
                        cand.extend_from_slice(&reduced[..k]);
                        if reversed {
                            cand.extend(nodes[i..=j].iter().rev());
                        } else {
                            cand.extend_from_slice(&nodes[i..=j]);
                        }
                        cand.extend_from_slice(&reduced[k..]);
                        if is_time_feasible(inst, &cand) {
                            return Some(cand);
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{line_instance, open_instance, random_instance};
    use crate::vrptw::{tour_length, validate};

    fn permutations(items: &[NodeId]) -> Vec<Vec<NodeId>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn two_customer_route_is_already_optimal() {
        let inst = line_instance(2);
        let mut sol = Solution::from_routes(&inst, vec![vec![1, 2]]);
        let out = intra_route_3opt(&inst, &mut sol, 0);
        assert!(!out.applied);
        assert_eq!(out.delta, 0.0);
    }

    #[test]
    fn five_customer_tours_match_brute_force_mostly() {
        let trials = 200;
        let mut hits = 0;
        for seed in 0..trials {
            let inst = open_instance(5, seed);
            let mut sol = Solution::from_routes(&inst, vec![vec![1, 2, 3, 4, 5]]);
            intra_route_3opt(&inst, &mut sol, 0);
            let best = permutations(&[1, 2, 3, 4, 5])
                .iter()
                .map(|p| tour_length(&inst, p))
                .fold(f64::INFINITY, f64::min);
            if sol.route(0).length() <= best + 1e-9 {
                hits += 1;
            }
        }
        assert!(hits * 10 >= trials * 9, "optimal in {hits}/{trials}");
    }

    #[test]
    fn output_stays_feasible() {
        for seed in 0..20 {
            let inst = random_instance(12, seed, true);
            let mut ctx = crate::vrptw::EvalContext::new(crate::vrptw::ObjectiveConfig::travel(), seed);
            let mut sol = crate::local_opt::insert_build(&inst, &mut ctx, 0);
            for r in 0..sol.num_slots() {
                let before = sol.route(r).length();
                let out = intra_route_3opt(&inst, &mut sol, r);
                assert!(sol.route(r).length() <= before + 1e-9);
                assert_eq!(out.applied, out.delta < 0.0);
            }
            assert!(validate(&inst, &sol).is_empty());
        }
    }
}
