//! The interpreter: structural evaluation of a term on one instance.

use std::time::{Duration, Instant};

use super::term::{Sort, Term};
use crate::local_opt::insert_all;
use crate::metaheur::{chain_optimize, lds_generate, lns_optimize, tree_optimize, LdsParams, ShawParams};
use crate::vrptw::{objective, EvalContext, Instance, Score, Solution};

#[derive(Debug, Clone)]
pub struct RunReport {
    pub solution: Solution,
    pub value: f64,
    /// Counter delta across the run.
    pub insertions_used: u64,
    pub wall_time: Duration,
}

/// Runs `t`. A Build term completes `base` (or starts from scratch); an
/// Optimize term improves `base`, which it requires.
///
/// # Panics
/// On an Optimize term without a base solution.
pub fn run(t: &Term, inst: &Instance, ctx: &mut EvalContext, base: Option<Solution>) -> RunReport {
    let start = Instant::now();
    let used = ctx.insertions();
    let solution = match t.sort() {
        Sort::Build => build(t, inst, ctx, base.unwrap_or_else(|| Solution::empty(inst))),
        Sort::Optimize => {
            let mut sol = base.expect("an Optimize term needs a base solution");
            optimize(t, inst, ctx, &mut sol);
            sol
        }
    };
    RunReport {
        value: objective(inst, &solution, &ctx.objective),
        insertions_used: ctx.insertions() - used,
        wall_time: start.elapsed(),
        solution,
    }
}

fn lds_params(i: u32, n: u32, l: u32) -> LdsParams {
    LdsParams::new(i as u8, n, l as f64)
}

fn build(t: &Term, inst: &Instance, ctx: &mut EvalContext, mut base: Solution) -> Solution {
    match t {
        Term::Insert(i) => {
            insert_all(inst, &mut base, &inst.due_date_order(), *i as u8, ctx);
            base.compact();
            base
        }
        Term::Lds(i, n, l) => lds_generate(inst, ctx, lds_params(*i, *n, *l), base, &mut |_, s, _| s),
        Term::Do(b, o) => {
            let mut sol = build(b, inst, ctx, base);
            optimize(o, inst, ctx, &mut sol);
            sol
        }
        Term::Forall(lds, o) => {
            let Term::Lds(i, n, l) = **lds else {
                unreachable!("FORALL head is an LDS term")
            };
            lds_generate(inst, ctx, lds_params(i, n, l), base, &mut |inst, mut s, ctx| {
                optimize(o, inst, ctx, &mut s);
                s
            })
        }
        _ => unreachable!("{} is not a Build term", t.name()),
    }
}

fn optimize(t: &Term, inst: &Instance, ctx: &mut EvalContext, sol: &mut Solution) {
    match t {
        Term::Chain(n, m) => chain_optimize(inst, sol, ctx, *n, *m as u8),
        Term::Tree(n, m, k) => tree_optimize(inst, sol, ctx, *n, *m as u8, *k),
        Term::Lns(n, h, b) => {
            let p = ShawParams {
                n: *n as usize,
                h: *h as f64,
            };
            lns_optimize(inst, sol, ctx, p, &mut |inst, s, ctx| build(b, inst, ctx, s));
        }
        Term::Loop(n, o) => {
            for _ in 0..*n {
                let before = Score::of(inst, sol, &ctx.objective);
                optimize(o, inst, ctx, sol);
                let after = Score::of(inst, sol, &ctx.objective);
                ctx.record("LOOP", before, after);
            }
        }
        Term::Then(a, b) => {
            optimize(a, inst, ctx, sol);
            optimize(b, inst, ctx, sol);
        }
        _ => unreachable!("{} is not an Optimize term", t.name()),
    }
}
