//! The term language over the build and optimize heuristics: syntax,
//! interpretation, cost estimate, random generation and size bounding.

mod complexity;
mod diet;
mod invent;
mod parse;
mod run;
mod term;

pub use complexity::estimate_complexity;
pub use diet::{diet, DEFAULT_DIET_BOUND};
pub use invent::{complexity_window, in_window, invent, random_term, MAX_ATTEMPTS};
pub use parse::{parse_term, parse_term_file, TermError, TermErrorKind};
pub use run::{run, RunReport};
pub use term::{range, Sort, Term, TREE_DEFAULT_K};
