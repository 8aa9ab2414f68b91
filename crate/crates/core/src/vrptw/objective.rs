//! Objective function: route-excess penalty plus travel and service time.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::instance::Instance;
use super::solution::Solution;

pub const ROUTE_PENALTY: f64 = 1_000_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Minimize routes first: penalty against the instance's target E_opt.
    Trucks,
    /// Pure travel: E_opt is taken as the fleet limit, so no penalty applies.
    Travel,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Trucks => f.write_str("trucks"),
            Mode::Travel => f.write_str("travel"),
        }
    }
}

/// Shape of the route-excess penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoutePenalty {
    /// `E * 10^6 * min(1, max(0, E - E_opt))`: grows with every extra route.
    PerRoute,
    /// `10^6 * min(1, max(0, E - E_opt))`: a single step at E_opt + 1.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveConfig {
    pub mode: Mode,
    /// Multiplier applied to travel and service time. 10 expresses
    /// Solomon distances in tenths, the unit of the published values.
    pub scale: f64,
    pub penalty: RoutePenalty,
}

impl ObjectiveConfig {
    pub fn travel() -> Self {
        ObjectiveConfig {
            mode: Mode::Travel,
            scale: 1.0,
            penalty: RoutePenalty::PerRoute,
        }
    }

    pub fn trucks() -> Self {
        ObjectiveConfig {
            mode: Mode::Trucks,
            ..Self::travel()
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_penalty(mut self, penalty: RoutePenalty) -> Self {
        self.penalty = penalty;
        self
    }

    /// Route target for `inst` under this mode.
    pub fn target_routes(&self, inst: &Instance) -> usize {
        match self.mode {
            Mode::Travel => inst.fleet_limit(),
            Mode::Trucks => inst.e_opt().unwrap_or(inst.fleet_limit()),
        }
    }
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        Self::travel()
    }
}

/// The objective from its components. `routes` is E, `travel` is D.
pub fn objective_value(
    cfg: &ObjectiveConfig,
    routes: usize,
    target: usize,
    travel: f64,
    total_service: f64,
) -> f64 {
    let excess = (routes as f64 - target as f64).clamp(0.0, 1.0);
    let factor = match cfg.penalty {
        RoutePenalty::PerRoute => routes as f64,
        RoutePenalty::Flat => 1.0,
    };
    factor * ROUTE_PENALTY * excess + cfg.scale * (travel + total_service)
}

/// Objective of one solution. Unassigned customers add no travel; the
/// service term always covers every customer.
pub fn objective(inst: &Instance, sol: &Solution, cfg: &ObjectiveConfig) -> f64 {
    objective_value(
        cfg,
        sol.route_count(),
        cfg.target_routes(inst),
        sol.total_length(),
        inst.total_service(),
    )
}

/// Dataset-level value: arithmetic mean over test cases.
pub fn dataset_value(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Comparison key for accept/reject decisions: fewer unassigned customers
/// first, then the objective value.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Score {
    pub unassigned: usize,
    pub value: f64,
}

impl Score {
    pub fn of(inst: &Instance, sol: &Solution, cfg: &ObjectiveConfig) -> Self {
        Score {
            unassigned: sol.unassigned().len(),
            value: objective(inst, sol, cfg),
        }
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.unassigned
            .cmp(&other.unassigned)
            .then(self.value.total_cmp(&other.value))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Score {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Score {}
