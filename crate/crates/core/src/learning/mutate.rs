//! Three-level mutation guided by a grow/shrink flag.

use rand::Rng;

use crate::algebra::{diet, estimate_complexity, invent, range, Sort, Term, DEFAULT_DIET_BOUND};

/// Probability of ignoring the grow/shrink indication.
pub const IGNORE_DIRECTION: f64 = 0.10;

/// Level 2: chance of replacing a sub-term by an invention of the same sort.
const LEVEL2_REPLACE: f64 = 0.25;
/// Level 3: chance of substituting a whole sub-term.
const LEVEL3_REPLACE: f64 = 0.35;

/// Upper limits for mutated parameters, tighter than the parser's so that
/// growth stays within what a learning run can afford.
mod cap {
    pub const LDS_N: u32 = 10;
    pub const LDS_L: u32 = 5000;
    pub const COUNT: u32 = 1000;
    pub const TREE_K: u32 = 5;
    pub const LNS_N: u32 = 60;
    pub const LNS_H: u32 = 100;
}

/// Mutates `t` at `level` (1 shallow, 2 average, 3 deep). `too_small`
/// asks for a more expensive term, otherwise a cheaper one; the request is
/// ignored 10% of the time. The result is diet-bounded.
pub fn mutate<R: Rng + ?Sized>(t: &Term, level: u8, too_small: bool, rng: &mut R) -> Term {
    assert!((1..=3).contains(&level), "mutation level is 1, 2 or 3");
    let s = if rng.gen_bool(IGNORE_DIRECTION) {
        rng.gen()
    } else {
        too_small
    };
    diet(&mutate_rec(t, s, level, rng), DEFAULT_DIET_BOUND)
}

fn mutate_rec<R: Rng + ?Sized>(t: &Term, s: bool, i: u8, rng: &mut R) -> Term {
    if i >= 2 {
        let p = if i == 3 { LEVEL3_REPLACE } else { LEVEL2_REPLACE };
        if rng.gen_bool(p) {
            return substitute(t, s, i, rng);
        }
    }
    match t {
        Term::Then(a, b) => {
            let y = rng.gen_range(0..100 / i as u32);
            let y2 = rng.gen_range(0..100);
            mutate_then(a, b, s, i, y, y2, rng)
        }
        _ => perturb(t, s, i, rng),
    }
}

/// Replacement for a sub-term: at level 3 any term of the same sort, at
/// level 2 a term of the same class unless `t` is a leaf.
fn substitute<R: Rng + ?Sized>(t: &Term, s: bool, i: u8, rng: &mut R) -> Term {
    let est = estimate_complexity(t).max(1000);
    let goal = if s { est.saturating_mul(2) } else { (est / 2).max(1000) };
    if i == 3 || t.children().is_empty() {
        return invent(t.sort(), goal, rng);
    }
    // Keep the class, reinvent one child.
    match t {
        Term::Do(b, o) => {
            if rng.gen() {
                Term::Do(Box::new(invent(Sort::Build, goal, rng)), o.clone())
            } else {
                Term::Do(b.clone(), Box::new(invent(Sort::Optimize, goal, rng)))
            }
        }
        Term::Forall(l, _) => Term::Forall(l.clone(), Box::new(invent(Sort::Optimize, goal, rng))),
        Term::Lns(n, h, _) => Term::Lns(*n, *h, Box::new(invent(Sort::Build, goal, rng))),
        Term::Loop(n, _) => Term::Loop(*n, Box::new(invent(Sort::Optimize, goal, rng))),
        Term::Then(a, b) => {
            if rng.gen() {
                Term::Then(Box::new(invent(Sort::Optimize, goal, rng)), b.clone())
            } else {
                Term::Then(a.clone(), Box::new(invent(Sort::Optimize, goal, rng)))
            }
        }
        _ => unreachable!(),
    }
}

/// The THEN strategy with explicit draws `y` in `0..100/i` and `y2` in
/// `0..100`.
pub fn mutate_then<R: Rng + ?Sized>(
    a: &Term,
    b: &Term,
    s: bool,
    i: u8,
    y: u32,
    y2: u32,
    rng: &mut R,
) -> Term {
    let x = || Term::Then(Box::new(a.clone()), Box::new(b.clone()));
    let recurse = |rng: &mut R| {
        let ma = mutate_rec(a, s, i, rng);
        let mb = mutate_rec(b, s, i, rng);
        Term::Then(Box::new(ma), Box::new(mb))
    };
    if (s && y2 > 20) || y > 90 {
        if y < 10 {
            let goal = estimate_complexity(&x()).max(1000);
            Term::Then(Box::new(x()), Box::new(invent(Sort::Optimize, goal, rng)))
        } else if y < 20 {
            let n = rng.gen_range(3..=10);
            Term::Then(Box::new(a.clone()), Box::new(Term::Loop(n, Box::new(b.clone()))))
        } else if y < 30 {
            let n = rng.gen_range(3..=10);
            Term::Then(Box::new(Term::Loop(n, Box::new(a.clone()))), Box::new(b.clone()))
        } else {
            recurse(rng)
        }
    } else if (i == 3 && y < 50) || (i > 1 && y < 10) {
        a.clone()
    } else if i == 3 || (i > 1 && y < 20) {
        b.clone()
    } else {
        recurse(rng)
    }
}

/// Keeps the class and changes integer parameters, recursing into
/// children. Parameters that drive cost follow the direction `s`.
fn perturb<R: Rng + ?Sized>(t: &Term, s: bool, i: u8, rng: &mut R) -> Term {
    let big = i >= 2;
    let free = |v: u32, (lo, hi): (u32, u32), rng: &mut R| {
        let up = rng.gen();
        step(v, lo, hi, big, up, rng)
    };
    match t {
        Term::Insert(l) => Term::Insert(free(*l, range::LEVEL, rng)),
        Term::Lds(l, n, th) => Term::Lds(
            free(*l, range::LEVEL, rng),
            step(*n, 0, cap::LDS_N, big, s, rng),
            free(*th, (0, cap::LDS_L), rng),
        ),
        Term::Chain(n, m) => Term::Chain(step(*n, 1, cap::COUNT, big, s, rng), flip(*m, rng)),
        Term::Tree(n, m, k) => {
            let (n, k) = if rng.gen() {
                (step(*n, 1, cap::COUNT, big, s, rng), *k)
            } else {
                (*n, step(*k, 0, cap::TREE_K, big, s, rng))
            };
            Term::Tree(n, flip(*m, rng), k)
        }
        Term::Lns(n, h, b) => Term::Lns(
            step(*n, 0, cap::LNS_N, big, s, rng),
            free(*h, (1, cap::LNS_H), rng),
            Box::new(mutate_rec(b, s, i, rng)),
        ),
        Term::Loop(n, b) => {
            // Direction applies to the count or the body, not both.
            if rng.gen() {
                Term::Loop(step(*n, 1, cap::COUNT, big, s, rng), b.clone())
            } else {
                Term::Loop(*n, Box::new(mutate_rec(b, s, i, rng)))
            }
        }
        Term::Do(b, o) => {
            let mb = mutate_rec(b, s, i, rng);
            Term::Do(Box::new(mb), Box::new(mutate_rec(o, s, i, rng)))
        }
        Term::Forall(l, o) => {
            let ml = perturb(l, s, i, rng);
            Term::Forall(Box::new(ml), Box::new(mutate_rec(o, s, i, rng)))
        }
        Term::Then(..) => mutate_rec(t, s, i, rng),
    }
}

fn flip<R: Rng + ?Sized>(m: u32, rng: &mut R) -> u32 {
    if rng.gen_bool(0.2) {
        3 - m
    } else {
        m
    }
}

/// Small step: by 0, 1 or up to 10%. Big step: up to doubling or halving.
fn step<R: Rng + ?Sized>(v: u32, lo: u32, hi: u32, big: bool, up: bool, rng: &mut R) -> u32 {
    let v = v.clamp(lo, hi.max(lo));
    let reach = if big { v.max(2) } else { (v / 10).max(1) };
    let d = rng.gen_range(big as u32..=reach);
    let out = if up { v.saturating_add(d) } else { v.saturating_sub(d) };
    out.clamp(lo, hi.max(v))
}
