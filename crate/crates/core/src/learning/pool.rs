//! Term evaluation, pool ranking and the learning loop.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::crossover::crossover;
use super::mutate::mutate;
use super::stats::{mean, std_dev};
use crate::algebra::{
    complexity_window, diet, estimate_complexity, invent, run, Sort, Term, DEFAULT_DIET_BOUND,
    MAX_ATTEMPTS,
};
use crate::vrptw::{derive_seed, EvalContext, Instance, ObjectiveConfig, ROUTE_PENALTY};

/// Iterations per round when the run is split into rounds.
pub const ROUND_ITERATIONS: usize = 10;
/// Runs of at least this many iterations are split into rounds.
pub const ROUNDS_FROM: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preset {
    pub name: &'static str,
    pub pool_size: usize,
    /// Excellent terms that are mutated.
    pub mutate_k: usize,
    /// Excellent terms that are crossed pairwise.
    pub cross_k: usize,
    pub iterations: usize,
}

pub const PRESETS: [Preset; 7] = [
    Preset { name: "al2", pool_size: 16, mutate_k: 3, cross_k: 3, iterations: 20 },
    Preset { name: "am2", pool_size: 16, mutate_k: 4, cross_k: 2, iterations: 20 },
    Preset { name: "ag2", pool_size: 16, mutate_k: 1, cross_k: 5, iterations: 20 },
    Preset { name: "ai2", pool_size: 16, mutate_k: 2, cross_k: 2, iterations: 20 },
    Preset { name: "ap0", pool_size: 10, mutate_k: 2, cross_k: 2, iterations: 50 },
    Preset { name: "ap1", pool_size: 35, mutate_k: 6, cross_k: 5, iterations: 15 },
    Preset { name: "ap2", pool_size: 24, mutate_k: 5, cross_k: 4, iterations: 20 },
];

pub fn preset(name: &str) -> Option<Preset> {
    PRESETS.iter().copied().find(|p| p.name.eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningConfig {
    pub pool_size: usize,
    pub mutate_k: usize,
    pub cross_k: usize,
    pub iterations: usize,
    pub complexity_goal: u64,
    /// Runs per instance when re-ranking excellent terms.
    pub runs_per_eval: usize,
    pub diet_bound: usize,
    pub seed: u64,
    pub objective: ObjectiveConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("pool size {pool_size} is below 1 + 3*{mutate_k} + {cross_k}*({cross_k}-1)/2 = {needed}")]
    PoolTooSmall {
        pool_size: usize,
        mutate_k: usize,
        cross_k: usize,
        needed: usize,
    },
    #[error("{0} must be at least 1")]
    Zero(&'static str),
}

impl LearningConfig {
    pub fn from_preset(p: Preset, complexity_goal: u64, seed: u64) -> Self {
        LearningConfig {
            pool_size: p.pool_size,
            mutate_k: p.mutate_k,
            cross_k: p.cross_k,
            iterations: p.iterations,
            complexity_goal,
            runs_per_eval: 10,
            diet_bound: DEFAULT_DIET_BOUND,
            seed,
            objective: ObjectiveConfig::travel(),
        }
    }

    /// Number of excellent terms taken from each ranking.
    pub fn excellent(&self) -> usize {
        self.mutate_k.max(self.cross_k)
    }

    pub fn crossovers(&self) -> usize {
        self.cross_k * self.cross_k.saturating_sub(1) / 2
    }

    /// Pool slots left for inventions after the elite, the mutations and
    /// the crossovers.
    pub fn inventions(&self) -> usize {
        self.pool_size - 1 - 3 * self.mutate_k - self.crossovers()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("pool size", self.pool_size),
            ("iterations", self.iterations),
            ("runs per evaluation", self.runs_per_eval),
            ("diet bound", self.diet_bound),
            ("excellent terms", self.excellent()),
        ] {
            if v == 0 {
                return Err(ConfigError::Zero(name));
            }
        }
        let needed = 1 + 3 * self.mutate_k + self.crossovers();
        if self.pool_size < needed {
            return Err(ConfigError::PoolTooSmall {
                pool_size: self.pool_size,
                mutate_k: self.mutate_k,
                cross_k: self.cross_k,
                needed,
            });
        }
        Ok(())
    }
}

/// Value of one finished run: the objective, plus one route penalty per
/// customer left unassigned.
pub fn penalized_value(report_value: f64, unassigned: usize) -> f64 {
    report_value + ROUTE_PENALTY * unassigned as f64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    /// Mean over runs of the dataset mean.
    pub value: f64,
    /// Deviation of the per-run dataset means.
    pub sigma: f64,
    /// Largest per-run dataset mean.
    pub worst: f64,
    /// Mean insertions per instance and run.
    pub insertions: f64,
    pub run_values: Vec<f64>,
}

/// Runs `t` `runs` times on every instance. Run `r` on instance `j` uses
/// the seed `derive_seed(seed, [r, j])`, so results do not depend on
/// scheduling.
pub fn evaluate_term(
    t: &Term,
    dataset: &[Instance],
    objective: &ObjectiveConfig,
    runs: usize,
    seed: u64,
) -> Evaluation {
    assert!(runs >= 1 && !dataset.is_empty());
    let cells: Vec<(f64, u64)> = (0..runs * dataset.len())
        .into_par_iter()
        .map(|cell| {
            let (r, j) = (cell / dataset.len(), cell % dataset.len());
            let inst = &dataset[j];
            let mut ctx = EvalContext::new(*objective, derive_seed(seed, &[r as u64, j as u64]));
            let rep = run(t, inst, &mut ctx, None);
            (penalized_value(rep.value, rep.solution.unassigned().len()), rep.insertions_used)
        })
        .collect();
    let run_values: Vec<f64> = cells
        .chunks(dataset.len())
        .map(|c| mean(&c.iter().map(|x| x.0).collect::<Vec<_>>()))
        .collect();
    let insertions = cells.iter().map(|x| x.1 as f64).sum::<f64>() / cells.len() as f64;
    Evaluation {
        value: mean(&run_values),
        sigma: std_dev(&run_values),
        worst: run_values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        insertions,
        run_values,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranked {
    /// Position in the ranked pool.
    pub index: usize,
    pub term: Term,
    /// Single-run evaluation used for the first sort.
    pub single: Evaluation,
    /// Multi-run evaluation.
    pub eval: Evaluation,
    /// `(worst + mean) / 2` over the multi-run evaluation.
    pub score: f64,
}

/// Sorts the pool on one run per instance, re-evaluates the best `k` over
/// `runs` runs and orders them by `(worst + mean) / 2`. Member `i` is
/// evaluated with seed `derive_seed(seed, [i])`.
pub fn rank_pool(
    pool: &[Term],
    dataset: &[Instance],
    objective: &ObjectiveConfig,
    k: usize,
    runs: usize,
    seed: u64,
) -> Vec<Ranked> {
    assert!(k >= 1 && k <= pool.len());
    let singles: Vec<Evaluation> = pool
        .par_iter()
        .enumerate()
        .map(|(i, t)| evaluate_term(t, dataset, objective, 1, derive_seed(seed, &[i as u64])))
        .collect();
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| singles[a].value.total_cmp(&singles[b].value).then(a.cmp(&b)));
    order.truncate(k);
    let mut ranked: Vec<Ranked> = order
        .par_iter()
        .map(|&i| {
            let eval = evaluate_term(&pool[i], dataset, objective, runs, derive_seed(seed, &[i as u64]));
            Ranked {
                index: i,
                term: pool[i].clone(),
                single: singles[i].clone(),
                score: (eval.worst + eval.value) / 2.0,
                eval,
            }
        })
        .collect();
    // Stable: ties keep the single-run order.
    ranked.sort_by(|a, b| a.score.total_cmp(&b.score));
    ranked
}

/// Breeds the next pool from a ranking: the best term, three mutations of
/// each of the first `mutate_k`, crossovers of every pair among the first
/// `cross_k`, and inventions to fill the pool. Mutations grow terms whose
/// measured insertions fall below the goal.
pub fn next_pool(ranked: &[Ranked], cfg: &LearningConfig, rng: &mut ChaCha8Rng) -> Vec<Term> {
    let (bound, goal) = (cfg.diet_bound, cfg.complexity_goal);
    let mut pool = vec![ranked[0].term.clone()];
    for r in ranked.iter().take(cfg.mutate_k) {
        let too_small = r.single.insertions < goal as f64;
        for level in 1..=3 {
            pool.push(guided(goal, rng, |rng| diet(&mutate(&r.term, level, too_small, rng), bound)));
        }
    }
    let top = &ranked[..cfg.cross_k.min(ranked.len())];
    for a in 0..top.len() {
        for b in a + 1..top.len() {
            pool.push(guided(goal, rng, |rng| diet(&crossover(&top[a].term, &top[b].term, rng), bound)));
        }
    }
    while pool.len() < cfg.pool_size {
        pool.push(diet(&invent(Sort::Build, goal, rng), bound));
    }
    pool
}

/// Redraws `make` until its estimate falls in the complexity window, for
/// at most `MAX_ATTEMPTS` draws; otherwise keeps the closest draw.
fn guided(goal: u64, rng: &mut ChaCha8Rng, mut make: impl FnMut(&mut ChaCha8Rng) -> Term) -> Term {
    let (lo, hi) = complexity_window(goal);
    let miss = |t: &Term| {
        let c = estimate_complexity(t);
        lo.saturating_sub(c).max(c.saturating_sub(hi))
    };
    let mut best = make(rng);
    let mut best_miss = miss(&best);
    for _ in 1..MAX_ATTEMPTS {
        if best_miss == 0 {
            break;
        }
        let t = make(rng);
        let m = miss(&t);
        if m < best_miss {
            (best, best_miss) = (t, m);
        }
    }
    best
}

pub fn random_pool(cfg: &LearningConfig, rng: &mut ChaCha8Rng) -> Vec<Term> {
    (0..cfg.pool_size)
        .map(|_| diet(&invent(Sort::Build, cfg.complexity_goal, rng), cfg.diet_bound))
        .collect()
}

/// One row of the learning history: the best term of a ranking.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryRow {
    /// Running count over the whole learning run; 0 is the first ranking of
    /// a fresh pool.
    pub iteration: usize,
    /// 0 for a single phase or the final phase, `r + 1` for round `r`.
    pub round: usize,
    pub best_value: f64,
    pub best_score: f64,
    pub best_term: Term,
    pub insertions: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearningOutcome {
    pub best: Term,
    pub eval: Evaluation,
    pub score: f64,
    pub history: Vec<HistoryRow>,
}

struct Phase<'a> {
    cfg: &'a LearningConfig,
    dataset: &'a [Instance],
    rng: ChaCha8Rng,
    history: Vec<HistoryRow>,
    rankings: u64,
}

impl Phase<'_> {
    fn rank(&mut self, pool: &[Term], round: usize) -> Vec<Ranked> {
        let seed = derive_seed(self.cfg.seed, &[0x7261_6e6b, self.rankings]);
        self.rankings += 1;
        let k = self.cfg.excellent().min(pool.len());
        let ranked = rank_pool(pool, self.dataset, &self.cfg.objective, k, self.cfg.runs_per_eval, seed);
        let best = &ranked[0];
        self.history.push(HistoryRow {
            iteration: self.history.len(),
            round,
            best_value: best.eval.value,
            best_score: best.score,
            best_term: best.term.clone(),
            insertions: best.eval.insertions,
        });
        ranked
    }

    /// `iterations` breeding steps from `pool`; returns the final ranking.
    fn run(&mut self, mut pool: Vec<Term>, iterations: usize, round: usize) -> Vec<Ranked> {
        let mut ranked = self.rank(&pool, round);
        for _ in 0..iterations {
            pool = next_pool(&ranked, self.cfg, &mut self.rng);
            ranked = self.rank(&pool, round);
        }
        ranked
    }
}

/// A whole learning run. Below [`ROUNDS_FROM`] iterations a single phase
/// runs from a random pool; otherwise `N / 12` rounds of ten iterations
/// each contribute their best term to a final pool, topped up with
/// inventions, that runs for the remaining iterations.
pub fn learning_run(cfg: &LearningConfig, dataset: &[Instance]) -> Result<LearningOutcome, ConfigError> {
    cfg.validate()?;
    assert!(!dataset.is_empty(), "learning needs at least one instance");
    let mut phase = Phase {
        cfg,
        dataset,
        rng: ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[0x6c65_6172_6e])),
        history: Vec::new(),
        rankings: 0,
    };
    let n = cfg.iterations;
    let ranked = if n < ROUNDS_FROM {
        let pool = random_pool(cfg, &mut phase.rng);
        phase.run(pool, n, 0)
    } else {
        let rounds = n / 12;
        let mut seeds = Vec::with_capacity(rounds);
        for r in 0..rounds {
            let pool = random_pool(cfg, &mut phase.rng);
            let ranked = phase.run(pool, ROUND_ITERATIONS, r + 1);
            seeds.push(ranked[0].term.clone());
        }
        let mut pool = seeds;
        pool.truncate(cfg.pool_size);
        while pool.len() < cfg.pool_size {
            pool.push(diet(&invent(Sort::Build, cfg.complexity_goal, &mut phase.rng), cfg.diet_bound));
        }
        phase.run(pool, n - ROUND_ITERATIONS * rounds, 0)
    };
    let best = ranked.into_iter().next().unwrap();
    Ok(LearningOutcome {
        best: best.term,
        eval: best.eval,
        score: best.score,
        history: phase.history,
    })
}

/// Number of rounds and iterations of the final phase for `n` iterations.
pub fn round_plan(n: usize) -> (usize, usize) {
    if n < ROUNDS_FROM {
        (0, n)
    } else {
        let r = n / 12;
        (r, n - ROUND_ITERATIONS * r)
    }
}
