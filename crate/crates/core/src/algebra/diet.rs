//! Size bounding by truncation at a fixed depth.

use super::term::{Sort, Term};

pub const DEFAULT_DIET_BOUND: usize = 24;

/// Returns `t` if it has at most `bound` nodes. Otherwise keeps the deepest
/// prefix that fits: every compound sub-term below that depth becomes
/// `INSERT(3)` or `CHAIN(1,1)` according to its sort.
pub fn diet(t: &Term, bound: usize) -> Term {
    assert!(bound >= 1, "diet bound must be positive");
    if t.size() <= bound {
        return t.clone();
    }
    let mut keep = 1;
    while truncate(t, keep + 1).size() <= bound {
        keep += 1;
    }
    truncate(t, keep)
}

fn leaf(sort: Sort) -> Term {
    match sort {
        Sort::Build => Term::Insert(3),
        Sort::Optimize => Term::Chain(1, 1),
    }
}

/// Keeps `levels` levels of operators; compound nodes on the last level
/// become leaves.
fn truncate(t: &Term, levels: usize) -> Term {
    if t.children().is_empty() {
        return t.clone();
    }
    if levels <= 1 {
        return leaf(t.sort());
    }
    let sub = |c: &Term| Box::new(truncate(c, levels - 1));
    match t {
        Term::Do(a, b) => Term::Do(sub(a), sub(b)),
        Term::Forall(a, b) => Term::Forall(a.clone(), sub(b)),
        Term::Then(a, b) => Term::Then(sub(a), sub(b)),
        Term::Lns(n, h, b) => Term::Lns(*n, *h, sub(b)),
        Term::Loop(n, b) => Term::Loop(*n, sub(b)),
        _ => unreachable!(),
    }
}
