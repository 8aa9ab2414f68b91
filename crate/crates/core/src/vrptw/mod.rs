//! Problem and solution model: instances, routes, the push/pull
//! primitives, feasibility checking and the objective.

mod context;
mod instance;
mod objective;
mod primitives;
mod solution;
mod validate;

pub use context::{derive_seed, EvalContext, TraceEvent, DEFAULT_NEIGHBORHOOD};
pub use instance::{parse_solomon, Instance, InstanceError, NodeId, ParseError, Site, DEPOT};
pub use objective::{
    dataset_value, objective, objective_value, Mode, ObjectiveConfig, RoutePenalty, Score,
    ROUTE_PENALTY,
};
pub use primitives::{
    best_slot, candidate_routes, evaluate_push, pull, push, removal_gain, slot_delta, Candidate,
    InsertionReport, PushError, RemovalReport,
};
pub(crate) use primitives::{apply_candidate, route_slot};
pub use solution::{
    is_feasible_tour, is_time_feasible, load_of, schedule_into, tour_length, Route, Solution,
    SolutionRecord, EPS,
};
pub use validate::{validate, Violation};
