//! Evolutionary search over terms: mutation, crossover, pool management
//! and run statistics.

mod crossover;
mod mutate;
mod pool;
mod stats;

pub use crossover::crossover;
pub use mutate::{mutate, mutate_then, IGNORE_DIRECTION};
pub use pool::{
    evaluate_term, learning_run, next_pool, penalized_value, preset, random_pool, rank_pool,
    round_plan, ConfigError, Evaluation, HistoryRow, LearningConfig, LearningOutcome, Preset,
    Ranked, PRESETS, ROUNDS_FROM, ROUND_ITERATIONS,
};
pub use stats::{aggregate_stats, mean, std_dev, TermStats};
