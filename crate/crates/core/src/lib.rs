//! Vehicle routing with time windows: a solver toolkit built from two
//! primitives (insert a customer, remove a customer), a term language
//! that combines heuristics over them, and a learning loop that evolves
//! terms against a set of training instances.

pub mod algebra;
pub mod learning;
pub mod local_opt;
pub mod metaheur;
pub mod vrptw;

#[doc(hidden)]
pub mod testing;
