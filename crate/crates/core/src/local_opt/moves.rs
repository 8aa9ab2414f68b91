//! Inter-route moves: 2-opt* exchange, chain transfer, node transfer and
//! the greedy route optimization built on node transfers.

use crate::vrptw::{
    is_feasible_tour, removal_gain, route_slot, tour_length, Instance, NodeId, Solution, EPS,
};

use super::intra::intra_route_3opt;
use super::MoveOutcome;

/// Swaps the tails of routes `ra` and `rb`: `A[..cut_a] + B[cut_b..]` and
/// `B[..cut_b] + A[cut_a..]`. Applied only if feasible and strictly
/// shorter. With `follow`, `ra` then gets 3-opt and `rb` greedy route
/// optimization.
pub fn two_opt_exchange(
    inst: &Instance,
    sol: &mut Solution,
    ra: usize,
    cut_a: usize,
    rb: usize,
    cut_b: usize,
    follow: bool,
    neighborhood: usize,
) -> MoveOutcome {
    if ra == rb {
        return MoveOutcome::none();
    }
    let a = sol.route(ra).nodes();
    let b = sol.route(rb).nodes();
    if cut_a > a.len() || cut_b > b.len() {
        return MoveOutcome::none();
    }
    let mut na: Vec<NodeId> = a[..cut_a].to_vec();
    na.extend_from_slice(&b[cut_b..]);
    let mut nb: Vec<NodeId> = b[..cut_b].to_vec();
    nb.extend_from_slice(&a[cut_a..]);
    let before = sol.route(ra).length() + sol.route(rb).length();
    let delta = tour_length(inst, &na) + tour_length(inst, &nb) - before;
    if delta >= -EPS || !is_feasible_tour(inst, &na) || !is_feasible_tour(inst, &nb) {
        return MoveOutcome::none();
    }
    sol.rewrite(inst, vec![(ra, na), (rb, nb)]);
    let mut out = MoveOutcome::applied(delta, vec![ra, rb]);
    if follow {
        out.absorb(intra_route_3opt(inst, sol, ra));
        out.absorb(greedy_route_optimization(inst, sol, rb, neighborhood));
    }
    out
}

/// Moves `len` consecutive customers starting at `start` in route `rb`
/// into route `ra` before index `anchor`, keeping their order.
pub fn chain_transfer(
    inst: &Instance,
    sol: &mut Solution,
    rb: usize,
    start: usize,
    len: usize,
    ra: usize,
    anchor: usize,
    follow: bool,
    neighborhood: usize,
) -> MoveOutcome {
    let Some(delta) = chain_transfer_delta(inst, sol, rb, start, len, ra, anchor) else {
        return MoveOutcome::none();
    };
    if delta >= -EPS {
        return MoveOutcome::none();
    }
    let (na, nb) = chain_transfer_tours(sol, rb, start, len, ra, anchor);
    sol.rewrite(inst, vec![(ra, na), (rb, nb)]);
    let mut out = MoveOutcome::applied(delta, vec![ra, rb]);
    if follow {
        out.absorb(intra_route_3opt(inst, sol, ra));
        out.absorb(greedy_route_optimization(inst, sol, rb, neighborhood));
    }
    out
}

/// Moves customer `y` into route `ra` before index `anchor`.
pub fn node_transfer(
    inst: &Instance,
    sol: &mut Solution,
    y: NodeId,
    ra: usize,
    anchor: usize,
    follow: bool,
    neighborhood: usize,
) -> MoveOutcome {
    let Some((rb, pos)) = sol.position(y) else {
        return MoveOutcome::none();
    };
    chain_transfer(inst, sol, rb, pos, 1, ra, anchor, follow, neighborhood)
}

fn chain_transfer_tours(
    sol: &Solution,
    rb: usize,
    start: usize,
    len: usize,
    ra: usize,
    anchor: usize,
) -> (Vec<NodeId>, Vec<NodeId>) {
    let a = sol.route(ra).nodes();
    let b = sol.route(rb).nodes();
    let chain = &b[start..start + len];
    let mut na = a[..anchor].to_vec();
    na.extend_from_slice(chain);
    na.extend_from_slice(&a[anchor..]);
    let mut nb = b[..start].to_vec();
    nb.extend_from_slice(&b[start + len..]);
    (na, nb)
}

/// Length change of a chain transfer, or `None` if it is malformed or
/// infeasible.
pub fn chain_transfer_delta(
    inst: &Instance,
    sol: &Solution,
    rb: usize,
    start: usize,
    len: usize,
    ra: usize,
    anchor: usize,
) -> Option<f64> {
    if ra == rb || ra >= sol.num_slots() || rb >= sol.num_slots() || len == 0 {
        return None;
    }
    if start + len > sol.route(rb).len() || anchor > sol.route(ra).len() {
        return None;
    }
    let (na, nb) = chain_transfer_tours(sol, rb, start, len, ra, anchor);
    if !is_feasible_tour(inst, &na) || !is_feasible_tour(inst, &nb) {
        return None;
    }
    Some(
        tour_length(inst, &na) + tour_length(inst, &nb)
            - sol.route(ra).length()
            - sol.route(rb).length(),
    )
}

/// Best improving chain transfer of length `1..=max_len` between any two
/// non-empty routes: `(rb, start, len, ra, anchor, delta)`.
pub fn best_chain_transfer(
    inst: &Instance,
    sol: &Solution,
    max_len: usize,
) -> Option<(usize, usize, usize, usize, usize, f64)> {
    let mut best: Option<(usize, usize, usize, usize, usize, f64)> = None;
    for rb in 0..sol.num_slots() {
        let lb = sol.route(rb).len();
        for ra in 0..sol.num_slots() {
            if ra == rb || sol.route(ra).is_empty() {
                continue;
            }
            for len in 1..=max_len.min(lb) {
                for start in 0..=lb - len {
                    for anchor in 0..=sol.route(ra).len() {
                        if let Some(d) = chain_transfer_delta(inst, sol, rb, start, len, ra, anchor)
                        {
                            if d < -EPS && best.map_or(true, |b| d < b.5) {
                                best = Some((rb, start, len, ra, anchor, d));
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

/// Best improving single-customer relocation into another non-empty route:
/// `(customer, ra, anchor, delta)`.
pub fn best_node_transfer(inst: &Instance, sol: &Solution) -> Option<(NodeId, usize, usize, f64)> {
    best_chain_transfer(inst, sol, 1).map(|(rb, start, _, ra, anchor, d)| {
        (sol.route(rb).nodes()[start], ra, anchor, d)
    })
}

/// Pulls customers close to route `r` out of their routes into their best
/// slot in `r` while that shortens the total, re-running 3-opt on `r`
/// after each accepted transfer.
pub fn greedy_route_optimization(
    inst: &Instance,
    sol: &mut Solution,
    r: usize,
    neighborhood: usize,
) -> MoveOutcome {
    let mut out = MoveOutcome::none();
    if r >= sol.num_slots() {
        return out;
    }
    'restart: loop {
        if sol.route(r).is_empty() {
            break;
        }
        let mut near: Vec<NodeId> = sol
            .route(r)
            .nodes()
            .iter()
            .flat_map(|&m| inst.nearest(m, neighborhood).iter().copied())
            .filter(|&y| matches!(sol.route_of(y), Some(rb) if rb != r))
            .collect();
        near.sort_unstable();
        near.dedup();
        for y in near {
            let (rb, pos) = sol.position(y).unwrap();
            let gain = removal_gain(inst, sol.route(rb).nodes(), pos);
            let Some((anchor, add)) = route_slot(inst, sol.route(r), y) else {
                continue;
            };
            if add - gain < -EPS {
                let moved = chain_transfer(inst, sol, rb, pos, 1, r, anchor, false, neighborhood);
                if moved.applied {
                    out.absorb(moved);
                    out.absorb(intra_route_3opt(inst, sol, r));
                    continue 'restart;
                }
            }
        }
        break;
    }
    out
}
