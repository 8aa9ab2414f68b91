//! Root selection for CHAIN and TREE.

use std::collections::BTreeSet;

use rand::Rng;

use crate::vrptw::{removal_gain, EvalContext, Instance, NodeId, Solution};

/// Selector `m`: 1 picks a uniformly random assigned customer, 2 the one
/// whose removal saves the most length. Unassigned customers always come
/// first, and a customer is picked at most once per call.
pub struct Selector {
    m: u8,
    taken: BTreeSet<NodeId>,
}

impl Selector {
    pub fn new(m: u8) -> Self {
        Selector {
            m,
            taken: BTreeSet::new(),
        }
    }

    pub fn next(&mut self, inst: &Instance, sol: &Solution, ctx: &mut EvalContext) -> Option<NodeId> {
        let pick = if let Some(&c) = sol.unassigned().iter().find(|c| !self.taken.contains(c)) {
            Some(c)
        } else if self.m == 1 {
            let pool: Vec<NodeId> = sol.assigned().filter(|c| !self.taken.contains(c)).collect();
            if pool.is_empty() {
                None
            } else {
                let mut sorted = pool;
                sorted.sort_unstable();
                Some(sorted[ctx.rng().gen_range(0..sorted.len())])
            }
        } else {
            let mut best: Option<(f64, NodeId)> = None;
            for route in sol.routes() {
                for (pos, &c) in route.nodes().iter().enumerate() {
                    if self.taken.contains(&c) {
                        continue;
                    }
                    let g = removal_gain(inst, route.nodes(), pos);
                    let better = match best {
                        None => true,
                        Some((bg, bc)) => g > bg || (g == bg && c < bc),
                    };
                    if better {
                        best = Some((g, c));
                    }
                }
            }
            best.map(|(_, c)| c)
        };
        if let Some(c) = pick {
            self.taken.insert(c);
        }
        pick
    }
}
