//! Ejection trees: a forced insertion may eject several customers, each of
//! which is reinserted freely or forced in turn, depth first from a stack.

use crate::vrptw::{
    best_slot, evaluate_push, is_feasible_tour, load_of, schedule_into, tour_length, EvalContext,
    Instance, NodeId, Score, Solution,
};

use super::select::Selector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    /// Routes tried per forced insertion.
    pub fan_out: usize,
    /// Discrepancy budget: branches through a non-best route, summed over
    /// the whole tree.
    pub discrepancies: u32,
    /// Ejected customers deeper than this are not forced again.
    pub depth_max: usize,
}

impl TreeParams {
    pub const DEFAULT_FAN_OUT: usize = 3;
    pub const DEFAULT_DEPTH: usize = 4;

    pub fn with_discrepancies(discrepancies: u32) -> Self {
        TreeParams {
            fan_out: Self::DEFAULT_FAN_OUT,
            discrepancies,
            depth_max: Self::DEFAULT_DEPTH,
        }
    }
}

/// Largest consecutive block ejected by one forced insertion.
const MAX_EJECT: usize = 3;

/// Forced insertion of a node into one route.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcedInsertion {
    pub route: usize,
    pub tour: Vec<NodeId>,
    pub ejected: Vec<NodeId>,
    pub delta: f64,
}

/// Inserts `v` into route `r` after ejecting the shortest block of
/// consecutive customers that makes room (empty if it fits directly).
/// Among blocks of equal size the cheapest result wins.
pub fn forced_insertion(
    inst: &Instance,
    sol: &Solution,
    r: usize,
    v: NodeId,
    ctx: &mut EvalContext,
) -> Option<ForcedInsertion> {
    let (nodes, old_len): (&[NodeId], f64) = if r < sol.num_slots() {
        (sol.route(r).nodes(), sol.route(r).length())
    } else {
        (&[], 0.0)
    };
    let mut times = Vec::new();
    for w in 0..=MAX_EJECT.min(nodes.len()) {
        let mut best: Option<ForcedInsertion> = None;
        let starts = if w == 0 { 0..1 } else { 0..nodes.len() + 1 - w };
        for s in starts {
            let mut rest = nodes[..s].to_vec();
            rest.extend_from_slice(&nodes[s + w..]);
            ctx.count_insertion();
            if !schedule_into(inst, &rest, &mut times) {
                continue;
            }
            let Some((pos, _)) = best_slot(inst, &rest, &times, load_of(inst, &rest), v) else {
                continue;
            };
            rest.insert(pos, v);
            let delta = tour_length(inst, &rest) - old_len;
            if best.as_ref().map_or(true, |b| delta < b.delta) {
                best = Some(ForcedInsertion {
                    route: r,
                    tour: rest,
                    ejected: nodes[s..s + w].to_vec(),
                    delta,
                });
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Forced insertion options for `v`, best first by (ejected count, length
/// change), truncated to `fan_out`. Candidate routes are those holding one
/// of `v`'s nearest customers, plus a fresh route when the fleet allows.
fn options(
    inst: &Instance,
    sol: &Solution,
    v: NodeId,
    tabu: &[usize],
    fan_out: usize,
    ctx: &mut EvalContext,
) -> Vec<ForcedInsertion> {
    let mut routes: Vec<usize> = inst
        .nearest(v, ctx.neighborhood)
        .iter()
        .filter_map(|&y| sol.route_of(y))
        .filter(|r| !tabu.contains(r))
        .collect();
    routes.sort_unstable();
    routes.dedup();
    if sol.route_count() < inst.fleet_limit() && is_feasible_tour(inst, &[v]) {
        routes.push(sol.free_slot());
    }
    let mut out: Vec<ForcedInsertion> = routes
        .into_iter()
        .filter_map(|r| forced_insertion(inst, sol, r, v, ctx))
        .collect();
    out.sort_by(|a, b| {
        a.ejected
            .len()
            .cmp(&b.ejected.len())
            .then(a.delta.total_cmp(&b.delta))
            .then(a.route.cmp(&b.route))
    });
    out.truncate(fan_out);
    out
}

/// Statistics of one search, for tests.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct TreeSearchStats {
    pub branches: usize,
    pub trees: usize,
}

/// Searches ejection trees rooted at the unassigned customer `root` and
/// returns the completed solution with the best score, if any tree closes.
pub fn ejection_tree_search(
    inst: &Instance,
    sol: &Solution,
    root: NodeId,
    ctx: &mut EvalContext,
    p: TreeParams,
) -> Option<Solution> {
    ejection_tree_search_stats(inst, sol, root, ctx, p).0
}

pub fn ejection_tree_search_stats(
    inst: &Instance,
    sol: &Solution,
    root: NodeId,
    ctx: &mut EvalContext,
    p: TreeParams,
) -> (Option<Solution>, TreeSearchStats) {
    assert!(!sol.is_assigned(root), "tree root {root} is assigned");
    let mut best: Option<(Score, Solution)> = None;
    let mut stats = TreeSearchStats::default();
    grow(
        inst,
        sol.clone(),
        vec![(root, 0)],
        0,
        &[],
        p,
        ctx,
        &mut best,
        &mut stats,
    );
    (best.map(|(_, s)| s), stats)
}

#[allow(clippy::too_many_arguments)]
fn grow(
    inst: &Instance,
    sol: Solution,
    mut stack: Vec<(NodeId, usize)>,
    disc: u32,
    tabu: &[usize],
    p: TreeParams,
    ctx: &mut EvalContext,
    best: &mut Option<(Score, Solution)>,
    stats: &mut TreeSearchStats,
) {
    let Some((v, depth)) = stack.pop() else {
        stats.trees += 1;
        let score = Score::of(inst, &sol, &ctx.objective);
        if best.as_ref().map_or(true, |(s, _)| score < *s) {
            *best = Some((score, sol));
        }
        return;
    };
    if depth >= p.depth_max {
        return;
    }
    let opts = options(inst, &sol, v, tabu, p.fan_out, ctx);
    for (rank, opt) in opts.into_iter().enumerate() {
        let d = disc + u32::from(rank > 0);
        if d > p.discrepancies {
            break;
        }
        stats.branches += 1;
        let mut next = sol.clone();
        next.rewrite(inst, vec![(opt.route, opt.tour)]);
        let mut next_stack = stack.clone();
        for e in opt.ejected {
            // free nodes go straight back in
            let cands = evaluate_push(inst, &next, e, ctx);
            if let Some(c) = cands.into_iter().find(|c| c.route != opt.route) {
                crate::vrptw::apply_candidate(inst, &mut next, e, c);
            } else {
                next_stack.push((e, depth + 1));
            }
        }
        let mut next_tabu = tabu.to_vec();
        next_tabu.push(opt.route);
        grow(inst, next, next_stack, d, &next_tabu, p, ctx, best, stats);
    }
}

/// TREE(n, m, k): like CHAIN but reinserting through ejection trees with
/// discrepancy budget `k`.
pub fn tree_optimize(
    inst: &Instance,
    sol: &mut Solution,
    ctx: &mut EvalContext,
    n: u32,
    m: u8,
    k: u32,
) {
    let before = Score::of(inst, sol, &ctx.objective);
    let p = TreeParams::with_discrepancies(k);
    let mut selector = Selector::new(m);
    for _ in 0..n {
        let Some(x) = selector.next(inst, sol, ctx) else {
            break;
        };
        let s0 = Score::of(inst, sol, &ctx.objective);
        let mut work = sol.clone();
        if work.is_assigned(x) {
            crate::vrptw::pull(inst, &mut work, x);
        }
        if let Some(done) = ejection_tree_search(inst, &work, x, ctx, p) {
            if Score::of(inst, &done, &ctx.objective) <= s0 {
                *sol = done;
            }
        }
    }
    sol.compact();
    let after = Score::of(inst, sol, &ctx.objective);
    ctx.record("TREE", before, after);
}
