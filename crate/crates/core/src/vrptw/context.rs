//! Evaluation context threaded through every algorithm: objective
//! configuration, the insertion counter and the random stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::objective::{ObjectiveConfig, Score};

/// Nearest-customer neighbourhood used by incremental local optimization.
pub const DEFAULT_NEIGHBORHOOD: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEvent {
    pub op: &'static str,
    pub before: Score,
    pub after: Score,
}

pub struct EvalContext {
    pub objective: ObjectiveConfig,
    insertions: u64,
    rng: ChaCha8Rng,
    seed: u64,
    /// Restricts push to the `k` non-empty routes closest to the customer.
    pub candidate_limit: Option<usize>,
    /// Size of the nearest-customer lists used by local moves.
    pub neighborhood: usize,
    trace: Option<Vec<TraceEvent>>,
}

impl EvalContext {
    pub fn new(objective: ObjectiveConfig, seed: u64) -> Self {
        EvalContext {
            objective,
            insertions: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            candidate_limit: None,
            neighborhood: DEFAULT_NEIGHBORHOOD,
            trace: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn insertions(&self) -> u64 {
        self.insertions
    }

    #[inline]
    pub fn count_insertion(&mut self) {
        self.insertions += 1;
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Starts recording one event per optimizer application.
    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub(crate) fn record(&mut self, op: &'static str, before: Score, after: Score) {
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceEvent { op, before, after });
        }
    }
}

/// Mixes a base seed with stream coordinates (run, instance, member, ...)
/// into an independent seed. SplitMix64 finalizer.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = base ^ 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        h = h.wrapping_add(p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 31;
    }
    h
}
