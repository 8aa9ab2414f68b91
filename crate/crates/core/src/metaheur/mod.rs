//! Search strategies over push and pull: limited discrepancy search,
//! ejection chains and trees, and large neighbourhood search.

mod chain;
mod lds;
mod lns;
mod select;
mod tree;

pub use chain::{
    chain_optimize, ejection_chain_search, ejection_chain_search_within, EjectionChain,
    EjectionStep, MAX_CHAIN_LEN,
};
pub use lds::{lds_build, lds_generate, lds_leaf_count, LdsParams};
pub use lns::{lns_optimize, relatedness, shaw_select, ShawParams};
pub use select::Selector;
pub use tree::{
    ejection_tree_search, ejection_tree_search_stats, forced_insertion, tree_optimize,
    ForcedInsertion, TreeParams, TreeSearchStats,
};
