//! Limited discrepancy search over the greedy insertion sequence.

use crate::local_opt::{place, reconstruct_around};
use crate::vrptw::{evaluate_push, EvalContext, Instance, NodeId, Score, Solution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdsParams {
    /// Incremental optimization level used at every insertion.
    pub level: u8,
    /// Maximum number of branching points along one path, so at most
    /// `2^discrepancies` leaves.
    pub discrepancies: u32,
    /// Branch only when the two best routes differ by less than this, in
    /// objective units.
    pub threshold: f64,
}

impl LdsParams {
    pub fn new(level: u8, discrepancies: u32, threshold: f64) -> Self {
        LdsParams {
            level,
            discrepancies,
            threshold,
        }
    }
}

/// Builds from scratch and returns the best leaf.
pub fn lds_build(inst: &Instance, ctx: &mut EvalContext, p: LdsParams) -> Solution {
    lds_generate(inst, ctx, p, Solution::empty(inst), &mut |_, s, _| s)
}

/// Completes `base` along every explored path, hands each leaf to
/// `consumer` and returns the best consumer output. Ties keep the earliest
/// leaf, which is the greedy one.
pub fn lds_generate(
    inst: &Instance,
    ctx: &mut EvalContext,
    p: LdsParams,
    base: Solution,
    consumer: &mut dyn FnMut(&Instance, Solution, &mut EvalContext) -> Solution,
) -> Solution {
    let order: Vec<NodeId> = inst
        .due_date_order()
        .into_iter()
        .filter(|&c| !base.is_assigned(c))
        .collect();
    let mut best: Option<(Score, Solution)> = None;
    let mut leaf = |sol: Solution, ctx: &mut EvalContext| {
        let out = consumer(inst, sol, ctx);
        let score = Score::of(inst, &out, &ctx.objective);
        if best.as_ref().map_or(true, |(s, _)| score < *s) {
            best = Some((score, out));
        }
    };
    descend(inst, base, &order, 0, p.discrepancies, p, ctx, &mut leaf);
    best.expect("search always reaches a leaf").1
}

/// Number of leaves the search visits; at most `2^n`.
pub fn lds_leaf_count(inst: &Instance, ctx: &mut EvalContext, p: LdsParams) -> usize {
    let mut count = 0;
    let order = inst.due_date_order();
    descend(
        inst,
        Solution::empty(inst),
        &order,
        0,
        p.discrepancies,
        p,
        ctx,
        &mut |_, _| count += 1,
    );
    count
}

#[allow(clippy::too_many_arguments)]
fn descend(
    inst: &Instance,
    mut sol: Solution,
    order: &[NodeId],
    mut idx: usize,
    budget: u32,
    p: LdsParams,
    ctx: &mut EvalContext,
    leaf: &mut dyn FnMut(Solution, &mut EvalContext),
) {
    while idx < order.len() {
        let c = order[idx];
        idx += 1;
        if sol.is_assigned(c) {
            continue;
        }
        let cands = evaluate_push(inst, &sol, c, ctx);
        let Some(&first) = cands.first() else {
            if p.level >= 4 {
                reconstruct_around(inst, &mut sol, c, p.level, ctx);
            }
            continue;
        };
        let close = cands
            .get(1)
            .is_some_and(|second| ctx.objective.scale * (second.delta - first.delta) < p.threshold);
        if budget > 0 && close {
            let mut alt = sol.clone();
            place(inst, &mut sol, c, first, p.level, ctx);
            descend(inst, sol, order, idx, budget - 1, p, ctx, leaf);
            place(inst, &mut alt, c, cands[1], p.level, ctx);
            descend(inst, alt, order, idx, budget - 1, p, ctx, leaf);
            return;
        }
        place(inst, &mut sol, c, first, p.level, ctx);
    }
    sol.compact();
    leaf(sol, ctx);
}
