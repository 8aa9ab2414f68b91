//! The two domain primitives: constrained insertion (push) and removal (pull).

use thiserror::Error;

use super::context::EvalContext;
use super::instance::{Instance, NodeId, DEPOT};
use super::solution::{Route, Solution};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum PushError {
    #[error("customer {0} has no feasible insertion")]
    NoFeasibleInsertion(NodeId),
}

/// Best feasible slot of one customer in one route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub route: usize,
    pub position: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InsertionReport {
    pub route: usize,
    pub position: usize,
    pub delta: f64,
    /// Best slot in a different route, if any.
    pub second: Option<Candidate>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemovalReport {
    pub route: usize,
    pub position: usize,
    pub delta: f64,
}

/// Cheapest feasible position for `c` in a tour with known start times.
/// Ties go to the earliest position.
pub fn best_slot(
    inst: &Instance,
    nodes: &[NodeId],
    start: &[f64],
    load: u32,
    c: NodeId,
) -> Option<(usize, f64)> {
    if load + inst.demand(c) > inst.capacity() {
        return None;
    }
    let mut best: Option<(usize, f64)> = None;
    for pos in 0..=nodes.len() {
        let Some(delta) = slot_delta(inst, nodes, start, pos, c) else {
            continue;
        };
        if best.map_or(true, |(_, d)| delta < d) {
            best = Some((pos, delta));
        }
    }
    best
}

/// Length increase of inserting `c` before index `pos`, or `None` if the
/// time windows downstream cannot absorb it. Capacity is not checked.
pub fn slot_delta(
    inst: &Instance,
    nodes: &[NodeId],
    start: &[f64],
    pos: usize,
    c: NodeId,
) -> Option<f64> {
    let prev = if pos == 0 { DEPOT } else { nodes[pos - 1] };
    let next = if pos == nodes.len() { DEPOT } else { nodes[pos] };
    let depart_prev = if pos == 0 {
        inst.ready(DEPOT)
    } else {
        start[pos - 1] + inst.service(prev)
    };
    let t = inst.ready(c).max(depart_prev + inst.distance(prev, c));
    if t > inst.due(c) {
        return None;
    }
    let mut depart = t + inst.service(c);
    let mut last = c;
    let mut settled = false;
    for k in pos..nodes.len() {
        let node = nodes[k];
        let nt = inst.ready(node).max(depart + inst.distance(last, node));
        if nt > inst.due(node) {
            return None;
        }
        if nt <= start[k] {
            settled = true;
            break;
        }
        depart = nt + inst.service(node);
        last = node;
    }
    if !settled && depart + inst.distance(last, DEPOT) > inst.due(DEPOT) {
        return None;
    }
    Some(inst.distance(prev, c) + inst.distance(c, next) - inst.distance(prev, next))
}

pub(crate) fn route_slot(inst: &Instance, route: &Route, c: NodeId) -> Option<(usize, f64)> {
    best_slot(inst, route.nodes(), route.start_times(), route.load(), c)
}

/// Route slots push may use for `c`: non-empty routes (optionally the
/// closest few) plus one empty route while the fleet limit allows.
pub fn candidate_routes(
    inst: &Instance,
    sol: &Solution,
    c: NodeId,
    ctx: &EvalContext,
) -> Vec<usize> {
    let mut routes: Vec<usize> = (0..sol.num_slots())
        .filter(|&r| !sol.route(r).is_empty())
        .collect();
    if let Some(k) = ctx.candidate_limit {
        if routes.len() > k {
            let closeness = |r: usize| {
                sol.route(r)
                    .nodes()
                    .iter()
                    .map(|&x| inst.distance(c, x))
                    .fold(f64::INFINITY, f64::min)
            };
            routes.sort_by(|&a, &b| closeness(a).total_cmp(&closeness(b)).then(a.cmp(&b)));
            routes.truncate(k);
            routes.sort_unstable();
        }
    }
    if sol.route_count() < inst.fleet_limit() {
        routes.push(sol.free_slot());
        routes.sort_unstable();
    }
    routes
}

/// Evaluates every candidate route for `c` (one counted insertion each) and
/// returns the feasible ones ordered by delta, then route index.
pub fn evaluate_push(
    inst: &Instance,
    sol: &Solution,
    c: NodeId,
    ctx: &mut EvalContext,
) -> Vec<Candidate> {
    let empty = Route::default();
    let mut out = Vec::new();
    for r in candidate_routes(inst, sol, c, ctx) {
        ctx.count_insertion();
        let route = if r < sol.num_slots() { sol.route(r) } else { &empty };
        if let Some((position, delta)) = route_slot(inst, route, c) {
            out.push(Candidate {
                route: r,
                position,
                delta,
            });
        }
    }
    out.sort_by(|a, b| a.delta.total_cmp(&b.delta).then(a.route.cmp(&b.route)));
    out
}

/// Inserts an unassigned customer at its cheapest feasible position.
///
/// Panics if `c` is already assigned.
pub fn push(
    inst: &Instance,
    sol: &mut Solution,
    c: NodeId,
    ctx: &mut EvalContext,
) -> Result<InsertionReport, PushError> {
    assert!(!sol.is_assigned(c), "push: customer {c} is already assigned");
    let cands = evaluate_push(inst, sol, c, ctx);
    let Some(&best) = cands.first() else {
        return Err(PushError::NoFeasibleInsertion(c));
    };
    let before = slot_length(sol, best.route);
    sol.insert_at(inst, best.route, best.position, c);
    Ok(InsertionReport {
        route: best.route,
        position: best.position,
        delta: sol.route(best.route).length() - before,
        second: cands.get(1).copied(),
    })
}

/// Applies a previously evaluated candidate.
pub(crate) fn apply_candidate(inst: &Instance, sol: &mut Solution, c: NodeId, cand: Candidate) {
    sol.insert_at(inst, cand.route, cand.position, c);
}

fn slot_length(sol: &Solution, r: usize) -> f64 {
    if r < sol.num_slots() {
        sol.route(r).length()
    } else {
        0.0
    }
}

/// Moves an assigned customer to the unassigned pool. Downstream start
/// times only move earlier, so feasibility is preserved.
///
/// Panics if `c` is unassigned.
pub fn pull(inst: &Instance, sol: &mut Solution, c: NodeId) -> RemovalReport {
    assert!(sol.is_assigned(c), "pull: customer {c} is not assigned");
    let r = sol.route_of(c).unwrap();
    let before = sol.route(r).length();
    let (route, position) = sol.remove(inst, c);
    RemovalReport {
        route,
        position,
        delta: before - sol.route(r).length(),
    }
}

/// Length saved by removing the customer at `pos` from `nodes`.
pub fn removal_gain(inst: &Instance, nodes: &[NodeId], pos: usize) -> f64 {
    let c = nodes[pos];
    let prev = if pos == 0 { DEPOT } else { nodes[pos - 1] };
    let next = nodes.get(pos + 1).copied().unwrap_or(DEPOT);
    inst.distance(prev, c) + inst.distance(c, next) - inst.distance(prev, next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{line_instance, random_instance};
    use crate::vrptw::{validate, ObjectiveConfig};

    fn ctx() -> EvalContext {
        EvalContext::new(ObjectiveConfig::travel(), 1)
    }

    #[test]
    fn push_into_empty_route() {
        let inst = line_instance(3);
        let mut sol = Solution::empty(&inst);
        let mut ctx = ctx();
        let rep = push(&inst, &mut sol, 2, &mut ctx).unwrap();
        assert_eq!(rep.route, 0);
        assert_eq!(sol.route(0).nodes(), &[2]);
        let expect = inst.distance(0, 2) + inst.distance(2, 0);
        assert!((rep.delta - expect).abs() < 1e-12);
        assert_eq!(ctx.insertions(), 1);
    }

    #[test]
    fn window_closing_before_travel_is_rejected() {
        let mut inst = line_instance(2);
        let mut sites = inst.sites().to_vec();
        sites[1].ready = 0.0;
        sites[1].due = inst.distance(0, 1) - 0.5;
        inst = crate::vrptw::Instance::new("late", sites, inst.capacity(), 5).unwrap();
        let mut sol = Solution::empty(&inst);
        let err = push(&inst, &mut sol, 1, &mut ctx()).unwrap_err();
        assert_eq!(err, PushError::NoFeasibleInsertion(1));
        assert!(sol.unassigned().contains(&1));
        assert_eq!(sol.route_count(), 0);
    }

    #[test]
    fn pull_then_push_restores_value() {
        let inst = random_instance(20, 3, true);
        let mut c = ctx();
        let sol = crate::local_opt::insert_build(&inst, &mut c, 0);
        let cfg = ObjectiveConfig::travel();
        let before = crate::vrptw::objective(&inst, &sol, &cfg);
        for cust in sol.assigned().collect::<Vec<_>>() {
            let mut s = sol.clone();
            let (r, p) = s.position(cust).unwrap();
            pull(&inst, &mut s, cust);
            assert!(validate(&inst, &s).is_empty());
            s.insert_at(&inst, r, p, cust);
            let after = crate::vrptw::objective(&inst, &s, &cfg);
            assert!((before - after).abs() < 1e-9);
        }
    }

    #[test]
    fn pulling_last_customer_empties_route() {
        let inst = line_instance(2);
        let mut sol = Solution::from_routes(&inst, vec![vec![1], vec![2]]);
        let rep = pull(&inst, &mut sol, 2);
        assert_eq!(sol.route_count(), 1);
        assert!((rep.delta - 2.0 * inst.distance(0, 2)).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn pull_unassigned_panics() {
        let inst = line_instance(2);
        let mut sol = Solution::empty(&inst);
        pull(&inst, &mut sol, 1);
    }
}
