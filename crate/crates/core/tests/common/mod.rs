//! Exhaustive oracles on tiny instances, shared by the oracle tests and
//! the acceptance suite. The helpers below recompute
//! schedules and lengths from the raw sites instead of calling the
//! library's own feasibility code.

use hybridvrp::local_opt::{best_chain_transfer, best_node_transfer};
use hybridvrp::metaheur::ejection_chain_search;
use hybridvrp::testing::random_instance;
use hybridvrp::vrptw::{push, validate, EvalContext, Instance, NodeId, ObjectiveConfig, Solution};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-7;

fn dist(inst: &Instance, a: NodeId, b: NodeId) -> f64 {
    let (p, q) = (&inst.sites()[a], &inst.sites()[b]);
    ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt()
}

fn length(inst: &Instance, tour: &[NodeId]) -> f64 {
    if tour.is_empty() {
        return 0.0;
    }
    let mut path = vec![0];
    path.extend_from_slice(tour);
    path.push(0);
    path.windows(2).map(|w| dist(inst, w[0], w[1])).sum()
}

fn feasible(inst: &Instance, tour: &[NodeId]) -> bool {
    let s = inst.sites();
    let load: u32 = tour.iter().map(|&c| s[c].demand).sum();
    if load > inst.capacity() {
        return false;
    }
    let (mut t, mut at) = (s[0].ready, 0);
    for &c in tour {
        t = (t + dist(inst, at, c)).max(s[c].ready);
        if t > s[c].due {
            return false;
        }
        t += s[c].service;
        at = c;
    }
    t + dist(inst, at, 0) <= s[0].due
}

/// Cheapest feasible way to put `c` into `tour`: (new tour, length change).
fn best_insert(inst: &Instance, tour: &[NodeId], c: NodeId) -> Option<(Vec<NodeId>, f64)> {
    let base = length(inst, tour);
    (0..=tour.len())
        .filter_map(|p| {
            let mut t = tour.to_vec();
            t.insert(p, c);
            feasible(inst, &t).then(|| {
                let d = length(inst, &t) - base;
                (t, d)
            })
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn rebuild(inst: &Instance, id: &str, fleet: usize) -> Instance {
    Instance::new(id, inst.sites().to_vec(), inst.capacity(), fleet).unwrap()
}

/// Random feasible tours over a shuffled subset of customers; customers
/// that fit nowhere (or are skipped) stay unassigned.
fn random_tours(inst: &Instance, routes: usize, skip: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<NodeId>> {
    let mut tours = vec![Vec::new(); routes];
    let mut order: Vec<NodeId> = inst.customers().collect();
    order.shuffle(rng);
    for c in order {
        if rng.gen_bool(skip) {
            continue;
        }
        let r = rng.gen_range(0..routes);
        for k in 0..routes {
            let t = &mut tours[(r + k) % routes];
            let p = rng.gen_range(0..=t.len());
            t.insert(p, c);
            if feasible(inst, t) {
                break;
            }
            t.remove(p);
        }
    }
    tours.retain(|t| !t.is_empty());
    tours
}

/// Returns (cases checked, mismatch descriptions).
pub fn push_cases() -> (usize, Vec<String>) {
    let mut bad = Vec::new();
    let mut checked = 0;
    for seed in 0..400u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=6);
        let fleet = rng.gen_range(1..=3);
        let inst = rebuild(&random_instance(n, seed, seed % 3 != 0), "push", fleet);
        let tours = random_tours(&inst, fleet, 0.3, &mut rng);
        let sol = Solution::from_routes(&inst, tours.clone());
        let Some(&c) = sol.unassigned().iter().next() else {
            continue;
        };
        let mut oracle: Option<f64> = tours
            .iter()
            .filter_map(|t| best_insert(&inst, t, c).map(|x| x.1))
            .min_by(f64::total_cmp);
        if tours.len() < fleet {
            if let Some((_, d)) = best_insert(&inst, &[], c) {
                oracle = Some(oracle.map_or(d, |o| o.min(d)));
            }
        }
        let mut s = sol.clone();
        let mut ctx = EvalContext::new(ObjectiveConfig::travel(), seed);
        match (push(&inst, &mut s, c, &mut ctx), oracle) {
            (Ok(rep), Some(best)) => {
                if (rep.delta - best).abs() >= TOL || !validate(&inst, &s).is_empty() {
                    bad.push(format!("seed {seed}: push {} vs {best}", rep.delta));
                }
            }
            (Err(_), None) => {}
            (got, want) => bad.push(format!("seed {seed}: push {got:?} vs oracle {want:?}")),
        }
        checked += 1;
    }
    (checked, bad)
}

/// Every relocation of `1..=max_len` consecutive customers into another
/// non-empty route; the best strictly improving length change.
fn best_relocation(inst: &Instance, tours: &[Vec<NodeId>], max_len: usize) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (b, tb) in tours.iter().enumerate() {
        for (a, ta) in tours.iter().enumerate() {
            if a == b || ta.is_empty() {
                continue;
            }
            for len in 1..=max_len.min(tb.len()) {
                for start in 0..=tb.len() - len {
                    let chain = &tb[start..start + len];
                    let mut nb = tb[..start].to_vec();
                    nb.extend_from_slice(&tb[start + len..]);
                    for anchor in 0..=ta.len() {
                        let mut na = ta[..anchor].to_vec();
                        na.extend_from_slice(chain);
                        na.extend_from_slice(&ta[anchor..]);
                        if !feasible(inst, &na) || !feasible(inst, &nb) {
                            continue;
                        }
                        let d = length(inst, &na) + length(inst, &nb) - length(inst, ta) - length(inst, tb);
                        if d < -1e-9 && best.map_or(true, |x| d < x) {
                            best = Some(d);
                        }
                    }
                }
            }
        }
    }
    best
}

/// Returns (cases checked, improving cases, mismatches).
pub fn transfer_cases() -> (usize, usize, Vec<String>) {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut improving = 0;
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(3..=6);
        let inst = random_instance(n, 1000 + seed, seed % 2 == 0);
        let tours = random_tours(&inst, rng.gen_range(2..=3), 0.0, &mut rng);
        if tours.len() < 2 {
            continue;
        }
        let sol = Solution::from_routes(&inst, tours.clone());
        for max_len in 1..=3 {
            let got = best_chain_transfer(&inst, &sol, max_len).map(|m| m.5);
            let want = best_relocation(&inst, &tours, max_len);
            match (got, want) {
                (Some(g), Some(w)) if (g - w).abs() < TOL => {}
                (None, None) => {}
                _ => bad.push(format!("seed {seed} len {max_len}: {got:?} vs {want:?}")),
            }
            improving += want.is_some() as usize;
        }
        let node = best_node_transfer(&inst, &sol).map(|m| m.3);
        let want = best_relocation(&inst, &tours, 1);
        let agree = match (node, want) {
            (Some(g), Some(w)) => (g - w).abs() < TOL,
            (g, w) => g.is_none() && w.is_none(),
        };
        if !agree {
            bad.push(format!("seed {seed} node transfer: {node:?} vs {want:?}"));
        }
        checked += 1;
    }
    (checked, improving, bad)
}

/// Cheapest ejection chain by exhaustive recursion: `a` goes into an
/// unused route, either freely or by ejecting one of its customers, who
/// continues the chain.
fn brute_chain(
    inst: &Instance,
    tours: &[Vec<NodeId>],
    fresh_ok: bool,
    a: NodeId,
    used: &mut Vec<usize>,
    cost: f64,
    depth: usize,
    best: &mut Option<f64>,
) {
    let offer = |c: f64, best: &mut Option<f64>| {
        if best.map_or(true, |b| c < b) {
            *best = Some(c);
        }
    };
    for (r, t) in tours.iter().enumerate() {
        if used.contains(&r) || t.is_empty() {
            continue;
        }
        if let Some((_, d)) = best_insert(inst, t, a) {
            offer(cost + d, best);
        }
    }
    if fresh_ok {
        if let Some((_, d)) = best_insert(inst, &[], a) {
            offer(cost + d, best);
        }
    }
    if depth == 3 {
        return;
    }
    for (r, t) in tours.iter().enumerate() {
        if used.contains(&r) {
            continue;
        }
        for pos in 0..t.len() {
            let mut rest = t.clone();
            let b = rest.remove(pos);
            let Some((nt, _)) = best_insert(inst, &rest, a) else {
                continue;
            };
            let d = length(inst, &nt) - length(inst, t);
            used.push(r);
            brute_chain(inst, tours, fresh_ok, b, used, cost + d, depth + 1, best);
            used.pop();
        }
    }
}

/// Returns (cases checked, chains with ejections, mismatches).
pub fn chain_cases() -> (usize, usize, Vec<String>) {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut ejecting = 0;
    for seed in 0..400u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
        let n = rng.gen_range(3..=8);
        let fleet = rng.gen_range(2..=3);
        let inst = rebuild(&random_instance(n, 5000 + seed, seed % 4 != 0), "chain", fleet);
        let tours = random_tours(&inst, 2, 0.1, &mut rng);
        let sol = Solution::from_routes(&inst, tours.clone());
        let Some(&root) = sol.unassigned().iter().next() else {
            continue;
        };
        let fresh_ok = tours.len() < fleet;
        let mut want = None;
        brute_chain(&inst, &tours, fresh_ok, root, &mut Vec::new(), 0.0, 0, &mut want);
        let mut ctx = EvalContext::new(ObjectiveConfig::travel(), seed);
        let got = ejection_chain_search(&inst, &sol, root, &mut ctx);
        match (&got, want) {
            (Some(ch), Some(w)) => {
                let mut s = sol.clone();
                let before = s.total_length();
                ch.apply(&inst, &mut s);
                let applied = s.is_assigned(root)
                    && (s.total_length() - before - ch.cost).abs() < 1e-6
                    && validate(&inst, &s).is_empty();
                if (ch.cost - w).abs() >= 1e-6 || !applied {
                    bad.push(format!("seed {seed}: {} vs {w}", ch.cost));
                }
                ejecting += !ch.is_empty() as usize;
            }
            (None, None) => {}
            _ => bad.push(format!("seed {seed}: {got:?} vs {want:?}")),
        }
        checked += 1;
    }
    (checked, ejecting, bad)
}
