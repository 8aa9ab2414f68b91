//! Structural estimate of the number of insertions a term performs.

use super::term::Term;

pub const INSERT_COST: u64 = 1000;
pub const LDS_BASE: u64 = 1000;
pub const LDS_BASE_LEVEL4: u64 = 6000;
pub const CHAIN_COST: u64 = 1500;
pub const TREE_COST: u64 = 600;

/// Saturating at `u64::MAX`. LNS is `max(1, n * c(t) / 100)`: linear in
/// the number of removed customers.
pub fn estimate_complexity(t: &Term) -> u64 {
    match t {
        Term::Insert(_) => INSERT_COST,
        Term::Lds(i, n, _) => {
            let base = if *i == 4 { LDS_BASE_LEVEL4 } else { LDS_BASE };
            base.saturating_mul(pow2(*n))
        }
        Term::Do(a, b) | Term::Forall(a, b) | Term::Then(a, b) => {
            estimate_complexity(a).saturating_add(estimate_complexity(b))
        }
        Term::Chain(n, _) => CHAIN_COST.saturating_mul(*n as u64),
        Term::Tree(n, _, k) => TREE_COST
            .saturating_mul(*n as u64)
            .saturating_mul(pow2(*k)),
        Term::Lns(n, _, b) => ((*n as u64).saturating_mul(estimate_complexity(b)) / 100).max(1),
        Term::Loop(n, b) => (*n as u64).saturating_mul(estimate_complexity(b)),
    }
}

fn pow2(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        1u64 << k
    }
}
