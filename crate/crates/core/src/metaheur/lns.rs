//! Large neighbourhood search with Shaw's relatedness-based removal.

use rand::Rng;

use crate::vrptw::{pull, EvalContext, Instance, NodeId, Score, Solution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShawParams {
    /// Customers to remove.
    pub n: usize,
    /// Determinism exponent; larger means closer to always taking the most
    /// related customer.
    pub h: f64,
}

/// `1 / (d(i,j) / diameter + [i and j on different routes])`. Unassigned
/// customers count as being on a route of their own.
pub fn relatedness(inst: &Instance, sol: &Solution, i: NodeId, j: NodeId) -> f64 {
    let same = matches!((sol.route_of(i), sol.route_of(j)), (Some(a), Some(b)) if a == b);
    let dmax = inst.diameter().max(f64::MIN_POSITIVE);
    1.0 / (inst.distance(i, j) / dmax + if same { 0.0 } else { 1.0 })
}

/// Picks `p.n` distinct customers: the unassigned pool first, then by
/// repeatedly ranking the rest by relatedness to a random already chosen
/// customer and taking rank `floor(u^h * count)`.
pub fn shaw_select(
    inst: &Instance,
    sol: &Solution,
    ctx: &mut EvalContext,
    p: ShawParams,
) -> Vec<NodeId> {
    let n = p.n.min(inst.n());
    let mut selected: Vec<NodeId> = sol.unassigned().iter().copied().take(n).collect();
    let mut rest: Vec<NodeId> = inst.customers().filter(|c| !selected.contains(c)).collect();
    if selected.is_empty() && n > 0 {
        let k = ctx.rng().gen_range(0..rest.len());
        selected.push(rest.remove(k));
    }
    while selected.len() < n {
        let anchor = selected[ctx.rng().gen_range(0..selected.len())];
        let key = |c: &NodeId| relatedness(inst, sol, anchor, *c);
        rest.sort_by(|a, b| key(b).total_cmp(&key(a)).then(a.cmp(b)));
        let u: f64 = ctx.rng().gen();
        let k = ((u.powf(p.h) * rest.len() as f64) as usize).min(rest.len() - 1);
        selected.push(rest.remove(k));
    }
    selected
}

/// One LNS step: remove `n` Shaw-selected customers, let `rebuild`
/// reinsert the unassigned pool, and keep the result unless its score is
/// worse than before.
pub fn lns_optimize(
    inst: &Instance,
    sol: &mut Solution,
    ctx: &mut EvalContext,
    p: ShawParams,
    rebuild: &mut dyn FnMut(&Instance, Solution, &mut EvalContext) -> Solution,
) {
    let before = Score::of(inst, sol, &ctx.objective);
    if p.n == 0 {
        ctx.record("LNS", before, before);
        return;
    }
    let mut work = sol.clone();
    for c in shaw_select(inst, sol, ctx, p) {
        if work.is_assigned(c) {
            pull(inst, &mut work, c);
        }
    }
    let mut rebuilt = rebuild(inst, work, ctx);
    rebuilt.compact();
    let after = Score::of(inst, &rebuilt, &ctx.objective);
    if after <= before {
        *sol = rebuilt;
        ctx.record("LNS", before, after);
    } else {
        ctx.record("LNS", before, before);
    }
}
