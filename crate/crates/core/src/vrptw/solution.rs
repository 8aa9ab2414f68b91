//! Routes, schedules and the unassigned pool.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::instance::{Instance, NodeId, DEPOT};

/// Tolerance used when comparing lengths for strict improvement.
pub const EPS: f64 = 1e-9;

/// One vehicle tour. The depot is implicit at both ends.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Route {
    nodes: Vec<NodeId>,
    start: Vec<f64>,
    load: u32,
    length: f64,
}

impl Route {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Service start times, aligned with `nodes`.
    pub fn start_times(&self) -> &[f64] {
        &self.start
    }

    pub fn load(&self) -> u32 {
        self.load
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Total length of a depot-to-depot tour over `seq`.
pub fn tour_length(inst: &Instance, seq: &[NodeId]) -> f64 {
    let mut prev = DEPOT;
    let mut total = 0.0;
    for &c in seq {
        total += inst.distance(prev, c);
        prev = c;
    }
    total + inst.distance(prev, DEPOT)
}

/// Forward time propagation over `seq` with waiting allowed. Fills `out`
/// with service start times and returns `false` on the first window
/// violation (including a late return to the depot).
pub fn schedule_into(inst: &Instance, seq: &[NodeId], out: &mut Vec<f64>) -> bool {
    out.clear();
    let mut prev = DEPOT;
    let mut depart = inst.ready(DEPOT);
    for &c in seq {
        let t = inst.ready(c).max(depart + inst.distance(prev, c));
        if t > inst.due(c) {
            return false;
        }
        out.push(t);
        depart = t + inst.service(c);
        prev = c;
    }
    depart + inst.distance(prev, DEPOT) <= inst.due(DEPOT)
}

/// Time-window feasibility of a whole tour, without keeping the schedule.
pub fn is_time_feasible(inst: &Instance, seq: &[NodeId]) -> bool {
    let mut prev = DEPOT;
    let mut depart = inst.ready(DEPOT);
    for &c in seq {
        let t = inst.ready(c).max(depart + inst.distance(prev, c));
        if t > inst.due(c) {
            return false;
        }
        depart = t + inst.service(c);
        prev = c;
    }
    depart + inst.distance(prev, DEPOT) <= inst.due(DEPOT)
}

pub fn load_of(inst: &Instance, seq: &[NodeId]) -> u32 {
    seq.iter().map(|&c| inst.demand(c)).sum()
}

/// Capacity and time-window feasibility of a whole tour.
pub fn is_feasible_tour(inst: &Instance, seq: &[NodeId]) -> bool {
    load_of(inst, seq) <= inst.capacity() && is_time_feasible(inst, seq)
}

/// A (possibly partial) assignment of customers to routes.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    routes: Vec<Route>,
    route_of: Vec<Option<usize>>,
    unassigned: BTreeSet<NodeId>,
}

impl Solution {
    /// All customers unassigned, no routes.
    pub fn empty(inst: &Instance) -> Self {
        Solution {
            routes: Vec::new(),
            route_of: vec![None; inst.n() + 1],
            unassigned: inst.customers().collect(),
        }
    }

    /// Builds a solution from explicit tours, recomputing schedules.
    /// Customers not mentioned are unassigned. Does not check feasibility.
    pub fn from_routes(inst: &Instance, tours: Vec<Vec<NodeId>>) -> Self {
        let mut sol = Solution::empty(inst);
        for tour in tours {
            let r = sol.routes.len();
            sol.routes.push(Route::default());
            sol.set_route(inst, r, tour);
        }
        sol
    }

    /// Builds a solution with caller-provided service start times, kept as
    /// given. Used to check externally produced schedules, so customers
    /// not mentioned are neither routed nor unassigned unless listed in
    /// `unassigned`.
    pub fn from_parts(
        inst: &Instance,
        tours: Vec<Vec<NodeId>>,
        times: Vec<Vec<f64>>,
        unassigned: &[NodeId],
    ) -> Self {
        let mut sol = Solution::empty(inst);
        sol.unassigned = unassigned.iter().copied().filter(|&c| c >= 1 && c <= inst.n()).collect();
        for (tour, start) in tours.into_iter().zip(times) {
            let r = sol.routes.len();
            for &c in &tour {
                if c < sol.route_of.len() {
                    sol.route_of[c] = Some(r);
                    sol.unassigned.remove(&c);
                }
            }
            let in_range = tour.iter().all(|&c| c <= inst.n());
            let (load, length) = if in_range {
                (load_of(inst, &tour), tour_length(inst, &tour))
            } else {
                (0, f64::NAN)
            };
            sol.routes.push(Route {
                nodes: tour,
                start,
                load,
                length,
            });
        }
        sol
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn route(&self, r: usize) -> &Route {
        &self.routes[r]
    }

    pub fn num_slots(&self) -> usize {
        self.routes.len()
    }

    pub fn route_of(&self, c: NodeId) -> Option<usize> {
        self.route_of[c]
    }

    pub fn position(&self, c: NodeId) -> Option<(usize, usize)> {
        let r = self.route_of[c]?;
        let p = self.routes[r].nodes.iter().position(|&x| x == c)?;
        Some((r, p))
    }

    pub fn unassigned(&self) -> &BTreeSet<NodeId> {
        &self.unassigned
    }

    pub fn is_assigned(&self, c: NodeId) -> bool {
        self.route_of[c].is_some()
    }

    pub fn assigned(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.routes.iter().flat_map(|r| r.nodes.iter().copied())
    }

    /// E: number of non-empty routes.
    pub fn route_count(&self) -> usize {
        self.routes.iter().filter(|r| !r.is_empty()).count()
    }

    /// D: total travel over all routes.
    pub fn total_length(&self) -> f64 {
        self.routes.iter().map(|r| r.length).sum()
    }

    /// Index of the first empty route slot, or the index a new one would get.
    pub fn free_slot(&self) -> usize {
        self.routes
            .iter()
            .position(|r| r.is_empty())
            .unwrap_or(self.routes.len())
    }

    /// Service start time of an assigned customer.
    pub fn start_time(&self, c: NodeId) -> Option<f64> {
        let (r, p) = self.position(c)?;
        Some(self.routes[r].start[p])
    }

    /// Replaces the content of route slot `r` (which may be one past the
    /// end) and recomputes its cached data. Customers leaving the slot are
    /// not touched; callers keep coverage consistent.
    pub(crate) fn set_route(&mut self, inst: &Instance, r: usize, nodes: Vec<NodeId>) {
        if r == self.routes.len() {
            self.routes.push(Route::default());
        }
        for &c in &self.routes[r].nodes {
            if self.route_of[c] == Some(r) {
                self.route_of[c] = None;
            }
        }
        for &c in &nodes {
            self.route_of[c] = Some(r);
            self.unassigned.remove(&c);
        }
        let route = &mut self.routes[r];
        route.load = load_of(inst, &nodes);
        route.length = tour_length(inst, &nodes);
        schedule_into(inst, &nodes, &mut route.start);
        if route.start.len() < nodes.len() {
            // infeasible tour: keep times defined so validation can report it
            let mut prev = DEPOT;
            let mut depart = inst.ready(DEPOT);
            route.start.clear();
            for &c in &nodes {
                let t = inst.ready(c).max(depart + inst.distance(prev, c));
                route.start.push(t);
                depart = t + inst.service(c);
                prev = c;
            }
        }
        route.nodes = nodes;
    }

    /// Rewrites several routes at once; every customer that disappears from
    /// them and is not placed elsewhere becomes unassigned.
    pub(crate) fn rewrite(&mut self, inst: &Instance, changes: Vec<(usize, Vec<NodeId>)>) {
        let mut released: Vec<NodeId> = Vec::new();
        for (r, _) in &changes {
            if *r < self.routes.len() {
                released.extend_from_slice(&self.routes[*r].nodes);
            }
        }
        for (r, nodes) in changes {
            self.set_route(inst, r, nodes);
        }
        for c in released {
            if self.route_of[c].is_none() {
                self.unassigned.insert(c);
            }
        }
    }

    pub(crate) fn insert_at(&mut self, inst: &Instance, r: usize, pos: usize, c: NodeId) {
        debug_assert!(self.route_of[c].is_none());
        let mut nodes = if r < self.routes.len() {
            self.routes[r].nodes.clone()
        } else {
            Vec::new()
        };
        nodes.insert(pos, c);
        self.set_route(inst, r, nodes);
    }

    /// Removes `c` from its route and puts it in the unassigned pool.
    /// Returns the removed position.
    pub(crate) fn remove(&mut self, inst: &Instance, c: NodeId) -> (usize, usize) {
        let (r, p) = self.position(c).expect("customer is not assigned");
        let mut nodes = self.routes[r].nodes.clone();
        nodes.remove(p);
        self.set_route(inst, r, nodes);
        self.route_of[c] = None;
        self.unassigned.insert(c);
        (r, p)
    }

    /// Drops empty route slots.
    pub fn compact(&mut self) {
        self.routes.retain(|r| !r.is_empty());
        for c in self.route_of.iter_mut() {
            *c = None;
        }
        for (r, route) in self.routes.iter().enumerate() {
            for &c in &route.nodes {
                self.route_of[c] = Some(r);
            }
        }
    }

    /// Tours of non-empty routes.
    pub fn tours(&self) -> Vec<Vec<NodeId>> {
        self.routes
            .iter()
            .filter(|r| !r.is_empty())
            .map(|r| r.nodes.clone())
            .collect()
    }
}

/// Portable solution form: `{instance, routes, times, E, D, value}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub instance: String,
    pub routes: Vec<Vec<NodeId>>,
    pub times: Vec<Vec<f64>>,
    #[serde(rename = "E")]
    pub e: usize,
    #[serde(rename = "D")]
    pub d: f64,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unassigned: Vec<NodeId>,
}

impl SolutionRecord {
    pub fn new(inst: &Instance, sol: &Solution, value: f64) -> Self {
        let kept: Vec<&Route> = sol.routes().iter().filter(|r| !r.is_empty()).collect();
        SolutionRecord {
            instance: inst.id().to_string(),
            routes: kept.iter().map(|r| r.nodes.clone()).collect(),
            times: kept.iter().map(|r| r.start.clone()).collect(),
            e: sol.route_count(),
            d: sol.total_length(),
            value,
            unassigned: sol.unassigned().iter().copied().collect(),
        }
    }

    pub fn to_solution(&self, inst: &Instance) -> Solution {
        Solution::from_parts(inst, self.routes.clone(), self.times.clone(), &self.unassigned)
    }
}
