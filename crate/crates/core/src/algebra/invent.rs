//! Random term generation at a complexity goal.

use rand::Rng;

use super::complexity::{estimate_complexity, CHAIN_COST, INSERT_COST};
use super::term::{Sort, Term};

pub const MAX_ATTEMPTS: usize = 50;

/// Child weights are multiplied by `DEPTH_DECAY^depth` for compound
/// operators, so generation stops with probability 1.
const DEPTH_DECAY: f64 = 0.5;

const BUILD_WEIGHTS: [(&str, f64); 4] = [("INSERT", 15.0), ("LDS", 35.0), ("DO", 40.0), ("FORALL", 10.0)];
const OPTIMIZE_WEIGHTS: [(&str, f64); 5] = [
    ("CHAIN", 20.0),
    ("TREE", 15.0),
    ("LNS", 30.0),
    ("LOOP", 20.0),
    ("THEN", 15.0),
];

/// Inclusive window `[goal/2, 3*goal/2]` accepted by [`invent`].
pub fn complexity_window(goal: u64) -> (u64, u64) {
    (goal / 2, goal.saturating_mul(3) / 2)
}

pub fn in_window(t: &Term, goal: u64) -> bool {
    let (lo, hi) = complexity_window(goal);
    (lo..=hi).contains(&estimate_complexity(t))
}

/// Samples terms of `sort` until one estimates inside the goal window, and
/// after [`MAX_ATTEMPTS`] misses builds one analytically.
pub fn invent<R: Rng + ?Sized>(sort: Sort, goal: u64, rng: &mut R) -> Term {
    for _ in 0..MAX_ATTEMPTS {
        let t = random_term(sort, 0, rng);
        if in_window(&t, goal) {
            return t;
        }
    }
    fallback(sort, goal)
}

/// One unconstrained draw from the generation distribution.
pub fn random_term<R: Rng + ?Sized>(sort: Sort, depth: u32, rng: &mut R) -> Term {
    let decay = DEPTH_DECAY.powi(depth as i32);
    let compound = |name: &str| matches!(name, "DO" | "FORALL" | "LNS" | "LOOP" | "THEN");
    let table: &[(&str, f64)] = match sort {
        Sort::Build => &BUILD_WEIGHTS,
        Sort::Optimize => &OPTIMIZE_WEIGHTS,
    };
    let weight = |(name, w): &(&str, f64)| if compound(name) { w * decay } else { *w };
    let total: f64 = table.iter().map(weight).sum();
    let mut x = rng.gen::<f64>() * total;
    let mut pick = table[table.len() - 1].0;
    for entry in table {
        x -= weight(entry);
        if x < 0.0 {
            pick = entry.0;
            break;
        }
    }
    let child = |s: Sort, rng: &mut R| Box::new(random_term(s, depth + 1, rng));
    match pick {
        "INSERT" => Term::Insert(rng.gen_range(0..=4)),
        "LDS" => random_lds(rng),
        "DO" => {
            let b = child(Sort::Build, rng);
            Term::Do(b, child(Sort::Optimize, rng))
        }
        "FORALL" => {
            let l = Box::new(random_lds(rng));
            Term::Forall(l, child(Sort::Optimize, rng))
        }
        "CHAIN" => Term::Chain(rng.gen_range(1..=100), rng.gen_range(1..=2)),
        "TREE" => Term::Tree(rng.gen_range(1..=100), rng.gen_range(1..=2), rng.gen_range(0..=3)),
        "LNS" => {
            let (n, h) = (rng.gen_range(2..=15), rng.gen_range(1..=30));
            Term::Lns(n, h, child(Sort::Build, rng))
        }
        "LOOP" => {
            let n = rng.gen_range(1..=100);
            Term::Loop(n, child(Sort::Optimize, rng))
        }
        _ => {
            let a = child(Sort::Optimize, rng);
            Term::Then(a, child(Sort::Optimize, rng))
        }
    }
}

fn random_lds<R: Rng + ?Sized>(rng: &mut R) -> Term {
    Term::Lds(rng.gen_range(0..=4), rng.gen_range(0..=8), rng.gen_range(0..=1000))
}

/// `INSERT(3)` when it fits, otherwise a LOOP of CHAIN sized to the goal
/// (behind an INSERT for Build).
fn fallback(sort: Sort, goal: u64) -> Term {
    let (lo, hi) = complexity_window(goal);
    let base = match sort {
        Sort::Build if (lo..=hi).contains(&INSERT_COST) => return Term::Insert(3),
        Sort::Build => INSERT_COST,
        Sort::Optimize => 0,
    };
    let rest = goal.saturating_sub(base).max(CHAIN_COST);
    let chain = (rest / CHAIN_COST).clamp(1, 100);
    let loops = (rest as f64 / (CHAIN_COST * chain) as f64).round().clamp(1.0, 100_000.0) as u32;
    let opt = Term::Loop(loops, Box::new(Term::Chain(chain as u32, 2)));
    match sort {
        Sort::Build => Term::Do(Box::new(Term::Insert(3)), Box::new(opt)),
        Sort::Optimize => opt,
    }
}
