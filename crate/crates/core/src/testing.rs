//! Small synthetic instances for tests and examples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::vrptw::{Instance, Site};

fn depot(due: f64) -> Site {
    Site {
        x: 0.0,
        y: 0.0,
        demand: 0,
        ready: 0.0,
        due,
        service: 0.0,
    }
}

/// Customers at `(i, 0)` for `i = 1..=n`, demand 10, capacity 30, wide
/// windows and unit service time.
pub fn line_instance(n: usize) -> Instance {
    let mut sites = vec![depot(10_000.0)];
    for i in 1..=n {
        sites.push(Site {
            x: i as f64,
            y: 0.0,
            demand: 10,
            ready: 0.0,
            due: 5_000.0,
            service: 1.0,
        });
    }
    Instance::new(format!("line{n}"), sites, 30, n.max(1)).unwrap()
}

/// Random instance on a 100x100 square with the depot in the centre.
/// With `windows`, every customer gets a reachable window of width 20-80.
pub fn random_instance(n: usize, seed: u64, windows: bool) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = 400.0;
    let mut sites = vec![Site {
        x: 50.0,
        y: 50.0,
        ..depot(horizon)
    }];
    for _ in 0..n {
        let x: f64 = rng.gen_range(0.0..100.0_f64).round();
        let y: f64 = rng.gen_range(0.0..100.0_f64).round();
        let d0 = ((x - 50.0).powi(2) + (y - 50.0).powi(2)).sqrt();
        let service = 10.0;
        let (ready, due) = if windows {
            let latest = horizon - d0 - service;
            let centre = rng.gen_range(d0..latest);
            let half = rng.gen_range(10.0..40.0);
            let ready = (centre - half).max(0.0).round();
            let due = (centre + half).min(latest).floor().max(d0.ceil()).max(ready);
            (ready, due)
        } else {
            (0.0, horizon - d0 - service)
        };
        sites.push(Site {
            x,
            y,
            demand: rng.gen_range(1..=20),
            ready,
            due,
            service,
        });
    }
    Instance::new(format!("rand{n}-{seed}"), sites, 60, n.max(1)).unwrap()
}

/// Random instance without time windows or capacity pressure: a set of
/// points for pure tour-length checks.
pub fn open_instance(n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites = vec![depot(1.0e9)];
    for _ in 0..n {
        sites.push(Site {
            x: rng.gen_range(0.0..100.0),
            y: rng.gen_range(0.0..100.0),
            demand: 1,
            ready: 0.0,
            due: 1.0e8,
            service: 0.0,
        });
    }
    Instance::new(format!("open{n}-{seed}"), sites, n as u32 + 1, n.max(1)).unwrap()
}
