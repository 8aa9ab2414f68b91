use std::fmt;

use serde::Serialize;

use super::instance::{Instance, NodeId, DEPOT};
use super::solution::{tour_length, Solution};

/// Slack for comparisons against externally supplied times.
const TIME_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Violation {
    /// Customer missing, duplicated, out of range, or both routed and unassigned.
    Coverage { customer: NodeId, issue: &'static str },
    Capacity { route: usize, load: u32, capacity: u32 },
    /// Service start outside `[a_i, b_i]`, or late return (customer 0).
    Window { route: usize, customer: NodeId, time: f64 },
    /// Service starts before the vehicle can arrive from its predecessor.
    Chronology {
        route: usize,
        customer: NodeId,
        time: f64,
        earliest: f64,
    },
    /// Cached route data disagrees with a recomputation.
    Cache { route: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Coverage { customer, issue } => {
                write!(f, "coverage: customer {customer} {issue}")
            }
            Violation::Capacity {
                route,
                load,
                capacity,
            } => write!(f, "capacity: route {route} carries {load} > {capacity}"),
            Violation::Window {
                route,
                customer: 0,
                time,
            } => write!(f, "window: route {route} returns to the depot late ({time})"),
            Violation::Window {
                route,
                customer,
                time,
            } => write!(f, "window: route {route}, customer {customer} served at {time}"),
            Violation::Chronology {
                route,
                customer,
                time,
                earliest,
            } => write!(
                f,
                "chronology: route {route}, customer {customer} at {time} before {earliest}"
            ),
            Violation::Cache { route } => write!(f, "cache: route {route} is stale"),
        }
    }
}

/// Lists every broken solution constraint. Empty iff the solution is valid.
pub fn validate(inst: &Instance, sol: &Solution) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = inst.n();
    let mut seen = vec![0usize; n + 1];

    for (r, route) in sol.routes().iter().enumerate() {
        let nodes = route.nodes();
        let mut in_range = true;
        for &c in nodes {
            if c == DEPOT || c > n {
                out.push(Violation::Coverage {
                    customer: c,
                    issue: "is not a customer id",
                });
                in_range = false;
            } else {
                seen[c] += 1;
            }
        }
        if !in_range {
            continue;
        }
        let load: u32 = nodes.iter().map(|&c| inst.demand(c)).sum();
        if load > inst.capacity() {
            out.push(Violation::Capacity {
                route: r,
                load,
                capacity: inst.capacity(),
            });
        }
        let times = route.start_times();
        if times.len() != nodes.len()
            || load != route.load()
            || (tour_length(inst, nodes) - route.length()).abs() > 1e-6
        {
            out.push(Violation::Cache { route: r });
            continue;
        }
        let mut prev = DEPOT;
        let mut depart = inst.ready(DEPOT);
        for (&c, &t) in nodes.iter().zip(times) {
            if t < inst.ready(c) - TIME_TOL || t > inst.due(c) + TIME_TOL {
                out.push(Violation::Window {
                    route: r,
                    customer: c,
                    time: t,
                });
            }
            let earliest = depart + inst.distance(prev, c);
            if t < earliest - TIME_TOL {
                out.push(Violation::Chronology {
                    route: r,
                    customer: c,
                    time: t,
                    earliest,
                });
            }
            depart = t + inst.service(c);
            prev = c;
        }
        let back = depart + inst.distance(prev, DEPOT);
        if !nodes.is_empty() && back > inst.due(DEPOT) + TIME_TOL {
            out.push(Violation::Window {
                route: r,
                customer: DEPOT,
                time: back,
            });
        }
    }

    for c in 1..=n {
        let pooled = sol.unassigned().contains(&c);
        match (seen[c], pooled) {
            (0, false) => out.push(Violation::Coverage {
                customer: c,
                issue: "is neither routed nor unassigned",
            }),
            (1, true) => out.push(Violation::Coverage {
                customer: c,
                issue: "is both routed and unassigned",
            }),
            (k, _) if k > 1 => out.push(Violation::Coverage {
                customer: c,
                issue: "appears in more than one route slot",
            }),
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::line_instance;

    #[test]
    fn duplicate_customer_is_one_coverage_violation() {
        let inst = line_instance(3);
        let good = Solution::from_routes(&inst, vec![vec![1, 2], vec![3]]);
        assert!(validate(&inst, &good).is_empty());
        let dup = Solution::from_parts(
            &inst,
            vec![vec![1, 2], vec![3, 2]],
            vec![
                good.route(0).start_times().to_vec(),
                vec![good.route(1).start_times()[0], 1.0e9],
            ],
            &[],
        );
        let v: Vec<_> = validate(&inst, &dup)
            .into_iter()
            .filter(|v| matches!(v, Violation::Coverage { .. }))
            .collect();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn overload_is_one_capacity_violation() {
        let inst = line_instance(4);
        // line_instance uses demand 10 and capacity 30
        let sol = Solution::from_routes(&inst, vec![vec![1, 2, 3, 4]]);
        let v = validate(&inst, &sol);
        assert_eq!(
            v,
            vec![Violation::Capacity {
                route: 0,
                load: 40,
                capacity: 30
            }]
        );
    }

    #[test]
    fn early_service_is_a_chronology_violation() {
        let inst = line_instance(2);
        let sol = Solution::from_parts(&inst, vec![vec![1, 2]], vec![vec![0.0, 0.0]], &[]);
        let v = validate(&inst, &sol);
        assert!(v.iter().any(|x| matches!(x, Violation::Chronology { customer: 1, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::Chronology { customer: 2, .. })));
    }

    #[test]
    fn unknown_and_missing_customers() {
        let inst = line_instance(2);
        let sol = Solution::from_parts(&inst, vec![vec![1, 9]], vec![vec![1.0, 2.0]], &[]);
        let v = validate(&inst, &sol);
        assert!(v.contains(&Violation::Coverage {
            customer: 9,
            issue: "is not a customer id"
        }));
        assert!(v.contains(&Violation::Coverage {
            customer: 2,
            issue: "is neither routed nor unassigned"
        }));
    }
}
