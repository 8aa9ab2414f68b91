//! Greedy insertion with incremental local optimization.

use crate::vrptw::{
    apply_candidate, evaluate_push, is_feasible_tour, push, Candidate, EvalContext, Instance,
    NodeId, Solution,
};

use super::moves::{chain_transfer, greedy_route_optimization, two_opt_exchange};
use super::MoveOutcome;

pub const MAX_LEVEL: u8 = 4;

/// Longest chain moved by a transfer during incremental optimization.
const MAX_CHAIN: usize = 3;

/// Incremental local optimization around a freshly inserted customer `v`.
/// Level 0 does nothing; 1 adds exchanges, 2 transfers, 3 greedy route
/// optimization. Level 4 only changes what happens on insertion failure.
pub fn incremental_optimize(
    inst: &Instance,
    sol: &mut Solution,
    v: NodeId,
    level: u8,
    neighborhood: usize,
) -> MoveOutcome {
    let mut out = MoveOutcome::none();
    if level == 0 || !sol.is_assigned(v) {
        return out;
    }
    while let Some(m) = exchange_around(inst, sol, v, neighborhood) {
        out.absorb(m);
    }
    if level >= 2 {
        while let Some(m) = transfer_around(inst, sol, v, neighborhood) {
            out.absorb(m);
        }
    }
    if level >= 3 {
        if let Some(r) = sol.route_of(v) {
            out.absorb(greedy_route_optimization(inst, sol, r, neighborhood));
        }
    }
    out
}

/// First improving 2-opt* exchange linking `v` with one of its neighbours.
fn exchange_around(
    inst: &Instance,
    sol: &mut Solution,
    v: NodeId,
    k: usize,
) -> Option<MoveOutcome> {
    for &y in inst.nearest(v, k) {
        let (ra, pa) = sol.position(v)?;
        let Some((rb, pb)) = sol.position(y) else {
            continue;
        };
        if ra == rb {
            continue;
        }
        for ca in [pa, pa + 1] {
            for cb in [pb, pb + 1] {
                let m = two_opt_exchange(inst, sol, ra, ca, rb, cb, true, k);
                if m.applied {
                    return Some(m);
                }
            }
        }
    }
    None
}

/// First improving transfer of a chain containing a neighbour of `v`
/// (starting or ending at it) next to `v`.
fn transfer_around(
    inst: &Instance,
    sol: &mut Solution,
    v: NodeId,
    k: usize,
) -> Option<MoveOutcome> {
    for &y in inst.nearest(v, k) {
        let (ra, pa) = sol.position(v)?;
        let Some((rb, pb)) = sol.position(y) else {
            continue;
        };
        if ra == rb {
            continue;
        }
        let lb = sol.route(rb).len();
        for len in 1..=MAX_CHAIN.min(lb) {
            let mut starts = vec![];
            if pb + len <= lb {
                starts.push(pb);
            }
            if len > 1 && pb + 1 >= len {
                starts.push(pb + 1 - len);
            }
            for start in starts {
                for anchor in [pa, pa + 1] {
                    let m = chain_transfer(inst, sol, rb, start, len, ra, anchor, true, k);
                    if m.applied {
                        return Some(m);
                    }
                }
            }
        }
    }
    None
}

/// Places `c` at a previously evaluated candidate and optimizes around it.
pub(crate) fn place(
    inst: &Instance,
    sol: &mut Solution,
    c: NodeId,
    cand: Candidate,
    level: u8,
    ctx: &EvalContext,
) {
    apply_candidate(inst, sol, c, cand);
    incremental_optimize(inst, sol, c, level, ctx.neighborhood);
}

/// Tries to insert `c`, optimizing afterwards. On failure at level 4, the
/// route closest to `c` is rebuilt around it. Returns whether `c` ended up
/// assigned.
pub fn insert_customer(
    inst: &Instance,
    sol: &mut Solution,
    c: NodeId,
    level: u8,
    ctx: &mut EvalContext,
) -> bool {
    match push(inst, sol, c, ctx) {
        Ok(_) => {
            incremental_optimize(inst, sol, c, level, ctx.neighborhood);
            true
        }
        Err(_) if level >= 4 => reconstruct_around(inst, sol, c, level, ctx),
        Err(_) => false,
    }
}

/// Empties the route closest to `c`, seeds it with `c` and re-inserts the
/// evicted customers. Restores the previous solution if any of them no
/// longer fits.
pub(crate) fn reconstruct_around(
    inst: &Instance,
    sol: &mut Solution,
    c: NodeId,
    level: u8,
    ctx: &mut EvalContext,
) -> bool {
    if !is_feasible_tour(inst, &[c]) {
        return false;
    }
    let closeness = |r: usize| {
        sol.route(r)
            .nodes()
            .iter()
            .map(|&x| inst.distance(c, x))
            .fold(f64::INFINITY, f64::min)
    };
    let Some(r) = (0..sol.num_slots())
        .filter(|&r| !sol.route(r).is_empty())
        .min_by(|&a, &b| closeness(a).total_cmp(&closeness(b)).then(a.cmp(&b)))
    else {
        return false;
    };
    let snapshot = sol.clone();
    let mut evicted = sol.route(r).nodes().to_vec();
    evicted.sort_by(|&a, &b| inst.due(a).total_cmp(&inst.due(b)).then(a.cmp(&b)));
    sol.rewrite(inst, vec![(r, vec![c])]);
    for e in evicted {
        let cands = evaluate_push(inst, sol, e, ctx);
        let Some(&best) = cands.first() else {
            *sol = snapshot;
            return false;
        };
        place(inst, sol, e, best, level.min(3), ctx);
    }
    true
}

/// Inserts `order` (skipping already assigned customers) into `sol`.
pub fn insert_all(
    inst: &Instance,
    sol: &mut Solution,
    order: &[NodeId],
    level: u8,
    ctx: &mut EvalContext,
) {
    for &c in order {
        if !sol.is_assigned(c) {
            insert_customer(inst, sol, c, level, ctx);
        }
    }
}

/// Greedy construction in due-date order with optimization `level`.
pub fn insert_build(inst: &Instance, ctx: &mut EvalContext, level: u8) -> Solution {
    let mut sol = Solution::empty(inst);
    insert_all(inst, &mut sol, &inst.due_date_order(), level, ctx);
    sol.compact();
    sol
}
