use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use hybridvrp::algebra::{estimate_complexity, parse_term, parse_term_file, run, Sort, Term};
use hybridvrp::learning::{
    aggregate_stats, learning_run, penalized_value, preset, LearningConfig, TermStats,
};
use hybridvrp::vrptw::{
    dataset_value, derive_seed, validate as check, EvalContext, Instance, ObjectiveConfig,
    SolutionRecord,
};

use crate::data::{load_dataset, read_instance};
use crate::{EstimateArgs, Failure, Format, LearnArgs, SolveArgs, ValidateArgs};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Row {
    instance: String,
    term: String,
    run: usize,
    seed: u64,
    #[serde(rename = "E")]
    routes: usize,
    #[serde(rename = "D")]
    distance: f64,
    value: f64,
    unassigned: usize,
    insertions: u64,
}

#[derive(Serialize)]
struct TermSummary {
    term: String,
    complexity: u64,
    value: f64,
    routes: f64,
    distance: f64,
    insertions: f64,
    unassigned: usize,
}

#[derive(Serialize)]
struct SolveReport {
    version: &'static str,
    seed: u64,
    objective: ObjectiveConfig,
    runs: usize,
    summary: Vec<TermSummary>,
    rows: Vec<Row>,
}

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure::data(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_err(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_text<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn collect_terms(a: &SolveArgs) -> Result<Vec<Term>, Failure> {
    let mut terms = Vec::new();
    for text in &a.term {
        terms.push(parse_term(text).map_err(|e| Failure::usage(format!("term {text:?}: {e}")))?);
    }
    if let Some(p) = &a.term_file {
        let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
        let parsed = parse_term_file(&text)
            .map_err(|(line, e)| Failure::data(format!("{}: line {line}: {e}", p.display())))?;
        terms.extend(parsed);
    }
    if terms.is_empty() {
        return Err(Failure::usage("no term given: use --term or --term-file"));
    }
    if let Some(t) = terms.iter().find(|t| t.sort() != Sort::Build) {
        return Err(Failure::usage(format!(
            "{t} is an optimizer; solve needs a Build term such as DO(INSERT(3),{t})"
        )));
    }
    Ok(terms)
}

pub fn solve(a: SolveArgs) -> Result<(), Failure> {
    if a.runs == 0 {
        return Err(Failure::usage("--runs must be at least 1"));
    }
    let terms = collect_terms(&a)?;
    let c = &a.common;
    let dataset = load_dataset(&c.data, c.mode(), c.eopt_file.as_deref())?;
    let objective = c.objective();
    if let Some(dir) = &a.solutions {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }

    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for t in &terms {
        let cells = a.runs * dataset.len();
        let results: Vec<(Row, SolutionRecord)> = (0..cells)
            .into_par_iter()
            .map(|cell| {
                let (r, j) = (cell / dataset.len(), cell % dataset.len());
                let inst = &dataset[j];
                let seed = derive_seed(c.seed, &[r as u64, j as u64]);
                let mut ctx = EvalContext::new(objective, seed);
                let rep = run(t, inst, &mut ctx, None);
                let row = Row {
                    instance: inst.id().to_string(),
                    term: t.to_string(),
                    run: r,
                    seed,
                    routes: rep.solution.route_count(),
                    distance: rep.solution.total_length(),
                    value: rep.value,
                    unassigned: rep.solution.unassigned().len(),
                    insertions: rep.insertions_used,
                };
                (row, SolutionRecord::new(inst, &rep.solution, rep.value))
            })
            .collect();
        let mean_of = |f: &dyn Fn(&Row) -> f64| dataset_value(&results.iter().map(|(r, _)| f(r)).collect::<Vec<_>>());
        summary.push(TermSummary {
            term: t.to_string(),
            complexity: estimate_complexity(t),
            value: mean_of(&|r| penalized_value(r.value, r.unassigned)),
            routes: mean_of(&|r| r.routes as f64),
            distance: mean_of(&|r| r.distance),
            insertions: mean_of(&|r| r.insertions as f64),
            unassigned: results.iter().map(|(r, _)| r.unassigned).sum(),
        });
        if let Some(dir) = &a.solutions {
            let k = summary.len() - 1;
            for (row, rec) in &results {
                let p = dir.join(format!("{}-t{k}-r{}.json", rec.instance, row.run));
                let json = serde_json::to_string_pretty(rec).expect("record serializes");
                fs::write(&p, json).map_err(|e| io_err(&p, e))?;
            }
        }
        rows.extend(results.into_iter().map(|(r, _)| r));
    }

    for s in &summary {
        eprintln!(
            "{}  value {:.2}  routes {:.2}  D {:.2}  insertions {:.0}  unassigned {}",
            s.term, s.value, s.routes, s.distance, s.insertions, s.unassigned
        );
    }
    let text = match c.format {
        Format::Csv => {
            let header = format!(
                "# hybridvrp {VERSION} seed {} mode {} scale {} runs {}\n",
                c.seed, objective.mode, objective.scale, a.runs
            );
            header + &csv_text(&rows)
        }
        Format::Json => {
            let report = SolveReport {
                version: VERSION,
                seed: c.seed,
                objective,
                runs: a.runs,
                summary,
                rows,
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
    };
    emit(c.out.as_deref(), &text)
}

#[derive(Serialize)]
struct HistoryCsv {
    run: usize,
    round: usize,
    iteration: usize,
    best_value: f64,
    best_score: f64,
    insertions: f64,
    best_term: String,
}

#[derive(Serialize)]
struct RunResult {
    run: usize,
    seed: u64,
    best_term: String,
    value: f64,
    sigma: f64,
    score: f64,
    insertions: f64,
}

#[derive(Serialize)]
struct LearnReport {
    version: &'static str,
    seed: u64,
    config: LearningConfig,
    instances: Vec<String>,
    runs: Vec<RunResult>,
    stats: TermStats,
}

fn learning_config(a: &LearnArgs) -> Result<LearningConfig, Failure> {
    let p = preset(&a.preset).ok_or_else(|| {
        Failure::usage(format!("unknown preset {:?} (al2, am2, ag2, ai2, ap0, ap1, ap2)", a.preset))
    })?;
    let mut cfg = LearningConfig::from_preset(p, a.complexity_goal, a.common.seed);
    if let Some(m) = a.pool {
        cfg.pool_size = m;
    }
    if let Some(k) = a.excellent {
        cfg.mutate_k = k;
        cfg.cross_k = k;
    }
    if let Some(k) = a.mutate_k {
        cfg.mutate_k = k;
    }
    if let Some(k) = a.cross_k {
        cfg.cross_k = k;
    }
    if let Some(n) = a.iterations {
        cfg.iterations = n;
    }
    if let Some(d) = a.diet_bound {
        cfg.diet_bound = d;
    }
    cfg.runs_per_eval = a.runs_per_eval;
    cfg.objective = a.common.objective();
    if cfg.complexity_goal < 1000 {
        return Err(Failure::usage("--complexity-goal must be at least 1000"));
    }
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    Ok(cfg)
}

pub fn learn(a: LearnArgs) -> Result<(), Failure> {
    if a.runs == 0 {
        return Err(Failure::usage("--runs must be at least 1"));
    }
    let base = learning_config(&a)?;
    let c = &a.common;
    let dataset: Vec<Instance> = load_dataset(&c.data, c.mode(), c.eopt_file.as_deref())?;

    let mut results = Vec::new();
    let mut history = Vec::new();
    for l in 0..a.runs {
        let cfg = LearningConfig {
            seed: derive_seed(c.seed, &[l as u64]),
            ..base.clone()
        };
        let out = learning_run(&cfg, &dataset).map_err(|e| Failure::usage(e.to_string()))?;
        eprintln!(
            "run {l}: {}  value {:.2}  sigma {:.2}  insertions {:.0}",
            out.best, out.eval.value, out.eval.sigma, out.eval.insertions
        );
        history.extend(out.history.iter().map(|h| HistoryCsv {
            run: l,
            round: h.round,
            iteration: h.iteration,
            best_value: h.best_value,
            best_score: h.best_score,
            insertions: h.insertions,
            best_term: h.best_term.to_string(),
        }));
        results.push(RunResult {
            run: l,
            seed: cfg.seed,
            best_term: out.best.to_string(),
            value: out.eval.value,
            sigma: out.eval.sigma,
            score: out.score,
            insertions: out.eval.insertions,
        });
    }
    let values: Vec<f64> = results.iter().map(|r| r.value).collect();
    let sigmas: Vec<f64> = results.iter().map(|r| r.sigma).collect();
    let stats = aggregate_stats(&values, &sigmas);
    eprintln!("E(v) {:.2}  sigma(v) {:.2}  E(sigma) {:.2}", stats.mean, stats.std_dev, stats.mean_sigma);

    if let Some(p) = &a.history {
        fs::write(p, csv_text(&history)).map_err(|e| io_err(p, e))?;
    }
    if let Some(p) = &a.library {
        let mut f = OpenOptions::new().create(true).append(true).open(p).map_err(|e| io_err(p, e))?;
        for r in &results {
            writeln!(f, "{}  # value {:.2} seed {}", r.best_term, r.value, r.seed).map_err(|e| io_err(p, e))?;
        }
    }
    let text = match c.format {
        Format::Csv => {
            let mut s = format!("# hybridvrp {VERSION} seed {} preset {}\n", c.seed, a.preset);
            s += &csv_text(&results);
            s += &format!(
                "# E(v) {} sigma(v) {} E(sigma) {}\n",
                stats.mean, stats.std_dev, stats.mean_sigma
            );
            s
        }
        Format::Json => {
            let report = LearnReport {
                version: VERSION,
                seed: c.seed,
                config: base,
                instances: dataset.iter().map(|i| i.id().to_string()).collect(),
                runs: results,
                stats,
            };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
    };
    emit(c.out.as_deref(), &text)
}

pub fn estimate(a: EstimateArgs) -> Result<(), Failure> {
    let texts: Vec<&String> = a.terms.iter().chain(&a.term).collect();
    if texts.is_empty() {
        return Err(Failure::usage("no term given"));
    }
    for text in texts {
        let t = parse_term(text).map_err(|e| Failure::usage(format!("term {text:?}: {e}")))?;
        println!("{}\t{}", estimate_complexity(&t), t);
    }
    Ok(())
}

pub fn validate(a: ValidateArgs) -> Result<(), Failure> {
    let inst = read_instance(&a.instance)?;
    let text = fs::read_to_string(&a.solution).map_err(|e| io_err(&a.solution, e))?;
    let rec: SolutionRecord = serde_json::from_str(&text)
        .map_err(|e| Failure::data(format!("{}: {e}", a.solution.display())))?;
    if !rec.instance.eq_ignore_ascii_case(inst.id()) {
        return Err(Failure::data(format!(
            "solution is for {} but the instance is {}",
            rec.instance,
            inst.id()
        )));
    }
    let n = inst.n();
    if let Some(&c) = rec.routes.iter().flatten().chain(&rec.unassigned).find(|&&c| c == 0 || c > n) {
        return Err(Failure::invalid(format!("node {c} is not a customer of {}", inst.id())));
    }
    if rec.routes.iter().zip(&rec.times).any(|(r, t)| r.len() != t.len()) || rec.routes.len() != rec.times.len() {
        return Err(Failure::invalid("routes and times differ in shape"));
    }
    let violations = check(&inst, &rec.to_solution(&inst));
    if violations.is_empty() {
        println!("{}: ok ({} routes, D {:.2})", inst.id(), rec.e, rec.d);
        Ok(())
    } else {
        for v in &violations {
            println!("{v}");
        }
        Err(Failure::invalid(format!("{} violation(s)", violations.len())))
    }
}
