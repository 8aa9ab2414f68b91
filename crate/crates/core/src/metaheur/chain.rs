//! Ejection chains: insert a node by ejecting another, which is inserted
//! by ejecting a third, and so on until the last one fits somewhere free.

use crate::vrptw::{
    best_slot, schedule_into, tour_length, EvalContext, Instance, NodeId, Score, Solution, EPS,
};

use super::select::Selector;

/// Longest chain of ejections explored.
pub const MAX_CHAIN_LEN: usize = 3;

/// One link: `node` goes into route `route`, whose new tour is `tour`.
#[derive(Debug, Clone, PartialEq)]
pub struct EjectionStep {
    pub node: NodeId,
    pub route: usize,
    pub tour: Vec<NodeId>,
}

/// A complete chain. The last step is the free insertion; every earlier
/// step ejects the node of the next one. Routes are pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct EjectionChain {
    pub steps: Vec<EjectionStep>,
    /// Total length change, root insertion included.
    pub cost: f64,
}

impl EjectionChain {
    /// Number of ejections.
    pub fn len(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, inst: &Instance, sol: &mut Solution) {
        let changes = self
            .steps
            .iter()
            .map(|s| (s.route, s.tour.clone()))
            .collect();
        sol.rewrite(inst, changes);
    }
}

struct Label {
    node: NodeId,
    cost: f64,
    parent: Option<usize>,
    step: Option<EjectionStep>,
}

/// Cheapest way to put `root` into `tour` with `c` inserted, as
/// `(new tour, length change)`. Counts one insertion.
fn slot_in(
    inst: &Instance,
    tour: &[NodeId],
    old_len: f64,
    c: NodeId,
    ctx: &mut EvalContext,
    scratch: &mut Vec<f64>,
) -> Option<(Vec<NodeId>, f64)> {
    ctx.count_insertion();
    if !schedule_into(inst, tour, scratch) {
        return None;
    }
    let load: u32 = tour.iter().map(|&x| inst.demand(x)).sum();
    let (pos, _) = best_slot(inst, tour, scratch, load, c)?;
    let mut out = tour.to_vec();
    out.insert(pos, c);
    let delta = tour_length(inst, &out) - old_len;
    Some((out, delta))
}

/// Breadth-first search for the cheapest ejection chain starting at the
/// unassigned customer `root`. Each node keeps the cost of the cheapest
/// chain that ejects it and a pointer to its parent; ejection edges are
/// restricted to the `ctx.neighborhood` nearest customers.
pub fn ejection_chain_search(
    inst: &Instance,
    sol: &Solution,
    root: NodeId,
    ctx: &mut EvalContext,
) -> Option<EjectionChain> {
    ejection_chain_search_within(inst, sol, root, ctx, MAX_CHAIN_LEN)
}

pub fn ejection_chain_search_within(
    inst: &Instance,
    sol: &Solution,
    root: NodeId,
    ctx: &mut EvalContext,
    max_len: usize,
) -> Option<EjectionChain> {
    assert!(!sol.is_assigned(root), "chain root {root} is assigned");
    let mut labels = vec![Label {
        node: root,
        cost: 0.0,
        parent: None,
        step: None,
    }];
    let mut marker = vec![f64::INFINITY; inst.n() + 1];
    marker[root] = 0.0;
    let mut frontier = vec![0usize];
    let mut best: Option<(f64, usize, EjectionStep)> = None;
    let fresh_ok = sol.route_count() < inst.fleet_limit();
    let mut scratch = Vec::new();

    for depth in 0..=max_len {
        let mut next = Vec::new();
        for &li in &frontier {
            let used = path_routes(&labels, li);
            let a = labels[li].node;
            let base = labels[li].cost;

            // free terminal insertion
            for r in 0..sol.num_slots() {
                let route = sol.route(r);
                if route.is_empty() || used.contains(&r) {
                    continue;
                }
                if let Some((tour, d)) =
                    slot_in(inst, route.nodes(), route.length(), a, ctx, &mut scratch)
                {
                    consider(&mut best, base + d, li, a, r, tour);
                }
            }
            if fresh_ok {
                if let Some((tour, d)) = slot_in(inst, &[], 0.0, a, ctx, &mut scratch) {
                    consider(&mut best, base + d, li, a, sol.free_slot(), tour);
                }
            }

            if depth == max_len {
                continue;
            }
            for &b in inst.nearest(a, ctx.neighborhood) {
                let Some((r, pos)) = sol.position(b) else {
                    continue;
                };
                if used.contains(&r) {
                    continue;
                }
                let route = sol.route(r);
                let mut rest = route.nodes().to_vec();
                rest.remove(pos);
                let Some((tour, d)) = slot_in(inst, &rest, route.length(), a, ctx, &mut scratch)
                else {
                    continue;
                };
                let cost = base + d;
                if cost < marker[b] - EPS {
                    marker[b] = cost;
                    labels.push(Label {
                        node: b,
                        cost,
                        parent: Some(li),
                        step: Some(EjectionStep {
                            node: a,
                            route: r,
                            tour,
                        }),
                    });
                    next.push(labels.len() - 1);
                }
            }
        }
        frontier = next;
    }

    let (cost, li, last) = best?;
    let mut steps = vec![last];
    let mut cur = Some(li);
    while let Some(i) = cur {
        if let Some(s) = &labels[i].step {
            steps.push(s.clone());
        }
        cur = labels[i].parent;
    }
    steps.reverse();
    Some(EjectionChain { steps, cost })
}

fn consider(
    best: &mut Option<(f64, usize, EjectionStep)>,
    cost: f64,
    li: usize,
    node: NodeId,
    route: usize,
    tour: Vec<NodeId>,
) {
    if best.as_ref().map_or(true, |b| cost < b.0 - EPS) {
        *best = Some((cost, li, EjectionStep { node, route, tour }));
    }
}

fn path_routes(labels: &[Label], mut li: usize) -> Vec<usize> {
    let mut out = Vec::new();
    loop {
        if let Some(s) = &labels[li].step {
            out.push(s.route);
        }
        match labels[li].parent {
            Some(p) => li = p,
            None => return out,
        }
    }
}

/// `n` times: pick a customer with selector `m`, pull it and put it back
/// through the cheapest ejection chain. A step that worsens the score is
/// undone.
pub fn chain_optimize(
    inst: &Instance,
    sol: &mut Solution,
    ctx: &mut EvalContext,
    n: u32,
    m: u8,
) {
    let before = Score::of(inst, sol, &ctx.objective);
    let mut selector = Selector::new(m);
    for _ in 0..n {
        let Some(x) = selector.next(inst, sol, ctx) else {
            break;
        };
        let snapshot = sol.clone();
        let s0 = Score::of(inst, sol, &ctx.objective);
        if sol.is_assigned(x) {
            crate::vrptw::pull(inst, sol, x);
        }
        if let Some(chain) = ejection_chain_search(inst, sol, x, ctx) {
            chain.apply(inst, sol);
        }
        if Score::of(inst, sol, &ctx.objective) > s0 {
            *sol = snapshot;
        }
    }
    sol.compact();
    let after = Score::of(inst, sol, &ctx.objective);
    ctx.record("CHAIN", before, after);
}
