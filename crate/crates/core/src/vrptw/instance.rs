//! Immutable VRPTW problem data and the Solomon text reader.

use std::fmt;

use thiserror::Error;

/// Node index: 0 is the depot, customers are `1..=n`.
pub type NodeId = usize;

pub const DEPOT: NodeId = 0;

/// Number of nearest customers cached per node.
const NEIGHBOR_CACHE: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Site {
    pub x: f64,
    pub y: f64,
    pub demand: u32,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("instance needs a depot row")]
    NoDepot,
    #[error("depot must have zero demand and zero service time")]
    BadDepot,
    #[error("node {node}: due date {due} precedes ready time {ready}")]
    InvertedWindow { node: NodeId, ready: f64, due: f64 },
    #[error("node {node}: negative or non-finite field")]
    BadValue { node: NodeId },
    #[error("node {node}: demand {demand} exceeds vehicle capacity {capacity}")]
    OverCapacity {
        node: NodeId,
        demand: u32,
        capacity: u32,
    },
}

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// A VRPTW instance. Distances are Euclidean and double precision.
#[derive(Clone)]
pub struct Instance {
    id: String,
    sites: Vec<Site>,
    capacity: u32,
    fleet_limit: usize,
    e_opt: Option<usize>,
    dist: Vec<f64>,
    neighbors: Vec<Vec<NodeId>>,
    diameter: f64,
    total_service: f64,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Instance")
            .field("id", &self.id)
            .field("n", &self.n())
            .field("capacity", &self.capacity)
            .field("fleet_limit", &self.fleet_limit)
            .field("e_opt", &self.e_opt)
            .finish()
    }
}

impl Instance {
    /// Builds an instance from its sites; `sites[0]` is the depot.
    pub fn new(
        id: impl Into<String>,
        sites: Vec<Site>,
        capacity: u32,
        fleet_limit: usize,
    ) -> Result<Self, InstanceError> {
        let depot = sites.first().ok_or(InstanceError::NoDepot)?;
        if depot.demand != 0 || depot.service != 0.0 {
            return Err(InstanceError::BadDepot);
        }
        for (node, s) in sites.iter().enumerate() {
            let fields = [s.x, s.y, s.ready, s.due, s.service];
            if fields.iter().any(|v| !v.is_finite()) || s.ready < 0.0 || s.service < 0.0 {
                return Err(InstanceError::BadValue { node });
            }
            if s.due < s.ready {
                return Err(InstanceError::InvertedWindow {
                    node,
                    ready: s.ready,
                    due: s.due,
                });
            }
            if s.demand > capacity {
                return Err(InstanceError::OverCapacity {
                    node,
                    demand: s.demand,
                    capacity,
                });
            }
        }

        let size = sites.len();
        let mut dist = vec![0.0; size * size];
        let mut diameter: f64 = 0.0;
        for i in 0..size {
            for j in 0..size {
                let dx = sites[i].x - sites[j].x;
                let dy = sites[i].y - sites[j].y;
                let d = (dx * dx + dy * dy).sqrt();
                dist[i * size + j] = d;
                diameter = diameter.max(d);
            }
        }

        let mut neighbors = Vec::with_capacity(size);
        for i in 0..size {
            let mut others: Vec<NodeId> = (1..size).filter(|&j| j != i).collect();
            others.sort_by(|&a, &b| dist[i * size + a].total_cmp(&dist[i * size + b]).then(a.cmp(&b)));
            others.truncate(NEIGHBOR_CACHE);
            neighbors.push(others);
        }
        let total_service = sites.iter().skip(1).map(|s| s.service).sum();

        Ok(Instance {
            id: id.into(),
            sites,
            capacity,
            fleet_limit,
            e_opt: None,
            dist,
            neighbors,
            diameter,
            total_service,
        })
    }

    pub fn with_e_opt(mut self, e_opt: Option<usize>) -> Self {
        self.e_opt = e_opt;
        self
    }

    pub fn set_e_opt(&mut self, e_opt: Option<usize>) {
        self.e_opt = e_opt;
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Number of customers (depot excluded).
    pub fn n(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn customers(&self) -> impl Iterator<Item = NodeId> + Clone {
        1..self.sites.len()
    }

    pub fn site(&self, i: NodeId) -> &Site {
        &self.sites[i]
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn fleet_limit(&self) -> usize {
        self.fleet_limit
    }

    pub fn e_opt(&self) -> Option<usize> {
        self.e_opt
    }

    #[inline]
    pub fn distance(&self, i: NodeId, j: NodeId) -> f64 {
        let size = self.sites.len();
        assert!(i < size && j < size, "node id out of range: ({i}, {j})");
        self.dist[i * size + j]
    }

    #[inline]
    pub fn demand(&self, i: NodeId) -> u32 {
        self.sites[i].demand
    }

    #[inline]
    pub fn ready(&self, i: NodeId) -> f64 {
        self.sites[i].ready
    }

    #[inline]
    pub fn due(&self, i: NodeId) -> f64 {
        self.sites[i].due
    }

    #[inline]
    pub fn service(&self, i: NodeId) -> f64 {
        self.sites[i].service
    }

    /// Sum of service durations over all customers.
    pub fn total_service(&self) -> f64 {
        self.total_service
    }

    /// Largest pairwise node distance.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Up to `k` nearest customers of `i`, closest first (ties by id).
    pub fn nearest(&self, i: NodeId, k: usize) -> &[NodeId] {
        let list = &self.neighbors[i];
        &list[..k.min(list.len())]
    }

    /// Customers sorted by due date, ties broken by id.
    pub fn due_date_order(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = self.customers().collect();
        order.sort_by(|&a, &b| self.due(a).total_cmp(&self.due(b)).then(a.cmp(&b)));
        order
    }
}

/// Reads the standard Solomon layout: a name line, a VEHICLE block with
/// NUMBER and CAPACITY, then a CUSTOMER table whose row 0 is the depot.
pub fn parse_solomon(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (_, name) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty file"))?;
    let name = name.to_string();

    let (line, tok) = lines
        .next()
        .ok_or_else(|| ParseError::new(2, "missing VEHICLE section"))?;
    if !tok.eq_ignore_ascii_case("VEHICLE") {
        return Err(ParseError::new(line, format!("expected VEHICLE, found {tok:?}")));
    }
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(line + 1, "missing NUMBER/CAPACITY header"))?;
    let upper = header.to_ascii_uppercase();
    if !(upper.contains("NUMBER") && upper.contains("CAPACITY")) {
        return Err(ParseError::new(line, "expected NUMBER CAPACITY header"));
    }
    let (line, values) = lines
        .next()
        .ok_or_else(|| ParseError::new(line + 1, "missing vehicle numbers"))?;
    let nums = numbers(line, values)?;
    if nums.len() != 2 {
        return Err(ParseError::new(line, "expected vehicle NUMBER and CAPACITY"));
    }
    let fleet_limit = as_count(line, nums[0])?;
    let capacity = as_count(line, nums[1])? as u32;

    let (line, tok) = lines
        .next()
        .ok_or_else(|| ParseError::new(line + 1, "missing CUSTOMER section"))?;
    if !tok.eq_ignore_ascii_case("CUSTOMER") {
        return Err(ParseError::new(line, format!("expected CUSTOMER, found {tok:?}")));
    }
    let (line, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(line + 1, "missing customer table header"))?;
    if !header.to_ascii_uppercase().starts_with("CUST") {
        return Err(ParseError::new(line, "expected customer table header"));
    }

    let mut rows: Vec<Option<(usize, Site)>> = Vec::new();
    for (line, row) in lines {
        let nums = numbers(line, row)?;
        if nums.len() != 7 {
            return Err(ParseError::new(
                line,
                format!("expected 7 columns, found {}", nums.len()),
            ));
        }
        let id = as_count(line, nums[0])?;
        let site = Site {
            x: nums[1],
            y: nums[2],
            demand: as_count(line, nums[3])? as u32,
            ready: nums[4],
            due: nums[5],
            service: nums[6],
        };
        if site.due < site.ready {
            return Err(ParseError::new(
                line,
                format!("customer {id}: DUE DATE {} < READY TIME {}", site.due, site.ready),
            ));
        }
        if site.ready < 0.0 || site.service < 0.0 {
            return Err(ParseError::new(line, format!("customer {id}: negative field")));
        }
        if id == 0 && (site.demand != 0 || site.service != 0.0) {
            return Err(ParseError::new(line, "depot with nonzero demand or service"));
        }
        if site.demand > capacity {
            return Err(ParseError::new(
                line,
                format!("customer {id}: demand exceeds capacity {capacity}"),
            ));
        }
        if rows.len() <= id {
            rows.resize(id + 1, None);
        }
        if rows[id].is_some() {
            return Err(ParseError::new(line, format!("duplicate customer id {id}")));
        }
        rows[id] = Some((line, site));
    }
    if rows.is_empty() {
        return Err(ParseError::new(0, "customer table is empty"));
    }
    let mut sites = Vec::with_capacity(rows.len());
    for (id, row) in rows.into_iter().enumerate() {
        match row {
            Some((_, site)) => sites.push(site),
            None => return Err(ParseError::new(0, format!("customer id {id} missing"))),
        }
    }
    Instance::new(name, sites, capacity, fleet_limit).map_err(|e| ParseError::new(0, e.to_string()))
}

fn numbers(line: usize, row: &str) -> Result<Vec<f64>, ParseError> {
    row.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| ParseError::new(line, format!("non-numeric field {tok:?}")))
        })
        .collect()
}

fn as_count(line: usize, v: f64) -> Result<usize, ParseError> {
    if v < 0.0 || v.fract() != 0.0 || !v.is_finite() {
        return Err(ParseError::new(line, format!("expected a non-negative integer, found {v}")));
    }
    Ok(v as usize)
}
