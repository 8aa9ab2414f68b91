//! Greedy insertion and local improvement: intra-route 3-opt, inter-route
//! exchanges and transfers, and the incremental optimization levels.

mod build;
mod intra;
mod moves;

pub use build::{incremental_optimize, insert_all, insert_build, insert_customer, MAX_LEVEL};
pub(crate) use build::{place, reconstruct_around};
pub use intra::intra_route_3opt;
pub use moves::{
    best_chain_transfer, best_node_transfer, chain_transfer, chain_transfer_delta,
    greedy_route_optimization, node_transfer, two_opt_exchange,
};

/// Result of a local move. `delta` is the change in total travel, so an
/// applied move always has `delta < 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveOutcome {
    pub applied: bool,
    pub delta: f64,
    pub routes_touched: Vec<usize>,
}

impl MoveOutcome {
    pub fn none() -> Self {
        MoveOutcome {
            applied: false,
            delta: 0.0,
            routes_touched: Vec::new(),
        }
    }

    pub fn applied(delta: f64, routes_touched: Vec<usize>) -> Self {
        MoveOutcome {
            applied: true,
            delta,
            routes_touched,
        }
    }

    pub(crate) fn absorb(&mut self, other: MoveOutcome) {
        if !other.applied {
            return;
        }
        self.applied = true;
        self.delta += other.delta;
        for r in other.routes_touched {
            if !self.routes_touched.contains(&r) {
                self.routes_touched.push(r);
            }
        }
    }
}
