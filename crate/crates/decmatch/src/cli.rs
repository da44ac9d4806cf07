//! Run modes, file formats and instance generation behind the `decmatch`
//! binary. Reports are JSON lines: one config record, one record per
//! step, a deterministic summary, then a timing record (the only
//! non-reproducible line).

use crate::congestion::{self, CongestionConfig, MOrEOutcome};
use crate::engine::{EngineConfig, EngineState, EngineStatus};
use crate::frac;
use crate::graph::{
    matching_weight, parse_deletions, CapacityFn, EdgeId, WeightedMultigraph,
};
use crate::oracle;
use crate::rational::{rat_display, rat_int, rat_to_f64, Rat};
use crate::reduction::{Orchestrator, OrchestratorConfig};
use crate::rng::subrng;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Solver(#[from] crate::frac::SolverError),
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
    #[error(transparent)]
    Congestion(#[from] crate::congestion::CongestionError),
    #[error(transparent)]
    Engine(#[from] crate::engine::EngineError),
    #[error(transparent)]
    Orchestrator(#[from] crate::reduction::OrchestratorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    FracSolve,
    MOrE,
    Engine,
    Orchestrate,
    Verify,
}

impl RunMode {
    pub fn parse(s: &str) -> Result<RunMode, CliError> {
        match s {
            "frac_solve" => Ok(RunMode::FracSolve),
            "m_or_e" => Ok(RunMode::MOrE),
            "engine" => Ok(RunMode::Engine),
            "orchestrate" => Ok(RunMode::Orchestrate),
            "verify" => Ok(RunMode::Verify),
            other => Err(CliError::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    Off,
    /// Oracle comparison after every step, skipped when n > 16.
    Guarded,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: RunMode,
    pub graph_path: PathBuf,
    pub deletions_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub eps: Rat,
    pub alpha: Rat,
    pub rho: Rat,
    pub lambda: usize,
    pub theta: Rat,
    pub seed: u64,
    /// Uniform capacity for frac_solve mode; engine modes initialize
    /// capacities themselves.
    pub kappa: Option<Rat>,
    pub oracle: OracleMode,
    /// Dump the solver's per-iteration trace records.
    pub trace: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if crate::rational::eps_denominator(&self.eps).is_none() {
            return Err(CliError::Config(
                "epsilon must be 1/k for integer k >= 2".into(),
            ));
        }
        // cross-module constraint: 1/alpha <= theta
        let inv_alpha = rat_int(1) / &self.alpha;
        if inv_alpha > self.theta {
            return Err(CliError::Config(format!(
                "constraint violated: 1/alpha = {} > theta = {}",
                rat_display(&inv_alpha),
                rat_display(&self.theta)
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub deleted_edge: Option<EdgeId>,
    pub matching_weight: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_weight: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub mode: String,
    pub steps: usize,
    pub min_ratio: Option<f64>,
    pub phases: Option<usize>,
    pub m_or_e_calls: Option<usize>,
    pub restarts: Option<usize>,
    /// False when any asserted invariant failed anywhere in the run.
    pub ok: bool,
}

#[derive(Debug)]
pub struct RunReport {
    pub config_line: serde_json::Value,
    pub steps: Vec<StepRecord>,
    pub events: Vec<serde_json::Value>,
    pub summary: RunSummary,
    pub wall_time_ms: u128,
}

impl RunReport {
    /// JSON lines: config, step*, event*, summary, timing.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", json!({"type": "config", "data": self.config_line}));
        for s in &self.steps {
            let _ = writeln!(
                out,
                "{}",
                json!({"type": "step", "data": serde_json::to_value(s).unwrap()})
            );
        }
        for e in &self.events {
            let _ = writeln!(out, "{}", json!({"type": "event", "data": e}));
        }
        let _ = writeln!(
            out,
            "{}",
            json!({"type": "summary", "data": serde_json::to_value(&self.summary).unwrap()})
        );
        let _ = writeln!(
            out,
            "{}",
            json!({"type": "timing", "wall_time_ms": self.wall_time_ms})
        );
        out
    }

    /// Deterministic portion: everything but the timing line.
    pub fn deterministic_jsonl(&self) -> String {
        self.to_jsonl()
            .lines()
            .filter(|l| !l.contains("\"timing\""))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn config_json(config: &RunConfig) -> serde_json::Value {
    json!({
        "mode": format!("{:?}", config.mode),
        "eps": rat_display(&config.eps),
        "alpha": rat_display(&config.alpha),
        "rho": rat_display(&config.rho),
        "lambda": config.lambda,
        "theta": rat_display(&config.theta),
        "seed": config.seed,
        "graph": config.graph_path.display().to_string(),
    })
}

/// Executes the configured mode. The report's `summary.ok` is the
/// exit-code contract: false whenever an asserted invariant failed.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let started = Instant::now();
    let text = std::fs::read_to_string(&config.graph_path)?;
    let graph = WeightedMultigraph::from_text(&text)?;
    let deletions: Vec<EdgeId> = match &config.deletions_path {
        Some(p) => parse_deletions(&std::fs::read_to_string(p)?)?,
        None => Vec::new(),
    };
    let mut report = match config.mode {
        RunMode::FracSolve => run_frac_solve(config, graph)?,
        RunMode::MOrE => run_m_or_e(config, graph)?,
        RunMode::Engine => run_engine(config, graph, &deletions)?,
        RunMode::Orchestrate => run_orchestrate(config, graph, &deletions, false)?,
        RunMode::Verify => run_orchestrate(config, graph, &deletions, true)?,
    };
    report.wall_time_ms = started.elapsed().as_millis();
    if let Some(path) = &config.report_path {
        std::fs::write(path, report.to_jsonl())?;
    }
    Ok(report)
}

fn run_frac_solve(config: &RunConfig, graph: WeightedMultigraph) -> Result<RunReport, CliError> {
    let kappa_val = config.kappa.clone().unwrap_or_else(|| rat_int(1));
    let kappa = CapacityFn::uniform(&graph, &kappa_val);
    let sol = frac::weighted_frac_match(&graph, &kappa, &config.eps)?;
    let invariants_ok = sol.trace.iter().all(|r| r.invariants.all());
    let mut oracle_weight = None;
    let mut ratio = None;
    if config.oracle == OracleMode::Guarded && graph.n() <= oracle::MAX_ORACLE_VERTICES {
        let opt = oracle::exact_bipartite_frac_opt(&graph, &kappa)?;
        ratio = Some(if opt.value == rat_int(0) {
            1.0
        } else {
            rat_to_f64(&(&sol.value / &opt.value))
        });
        oracle_weight = Some(rat_to_f64(&opt.value) as u64);
    }
    let events = if config.trace {
        sol.trace
            .iter()
            .map(|t| serde_json::to_value(t).unwrap())
            .collect()
    } else {
        Vec::new()
    };
    let steps = vec![StepRecord {
        step: 0,
        deleted_edge: None,
        matching_weight: rat_to_f64(&sol.value) as u64,
        oracle_weight,
        ratio,
        counters: Some(json!({
            "value": rat_display(&sol.value),
            "iterations": sol.iterations,
            "support": sol.x.support_size(),
        })),
    }];
    Ok(RunReport {
        config_line: config_json(config),
        steps,
        events,
        summary: RunSummary {
            mode: "frac_solve".into(),
            steps: 1,
            min_ratio: ratio,
            phases: None,
            m_or_e_calls: None,
            restarts: None,
            ok: invariants_ok && ratio.is_none_or(|r| r <= 1.0 + 1e-12),
        },
        wall_time_ms: 0,
    })
}

fn run_m_or_e(config: &RunConfig, graph: WeightedMultigraph) -> Result<RunReport, CliError> {
    // engine-style initial capacities
    let n = graph.n().max(2);
    let mut kappa_init = rat_int(1);
    let mut power = rat_int(1);
    while power < rat_int(n as i64) {
        power *= &config.alpha;
        kappa_init /= &config.alpha;
    }
    let kappa = config
        .kappa
        .clone()
        .map(|k| CapacityFn::uniform(&graph, &k))
        .unwrap_or_else(|| CapacityFn::uniform(&graph, &kappa_init));
    let cert = crate::stat::static_weighted_match(&graph, &config.eps, false);
    let mu = rat_int(matching_weight(&graph, &cert.matching) as i64);
    let ccfg = CongestionConfig {
        eps: config.eps.clone(),
        alpha: config.alpha.clone(),
        rho: config.rho.clone(),
        seed: config.seed,
    };
    let mut rng = subrng(config.seed, "m_or_e", 0);
    let outcome = congestion::weighted_m_or_estar(&graph, &kappa, &mu, &ccfg, &mut rng)?;
    let (counters, ok) = match &outcome {
        MOrEOutcome::Matching(m) => {
            let structure =
                congestion::check_matching_structure(&graph, &kappa, &config.alpha, m);
            (
                json!({
                    "branch": "matching",
                    "value": rat_display(&m.value),
                    "sampled_weight": m.sampled_weight,
                    "structure_ok": structure.is_ok(),
                }),
                structure.is_ok(),
            )
        }
        MOrEOutcome::Bottleneck(b) => {
            let all_below_one = b.edges.iter().all(|&e| *kappa.get(e) < rat_int(1));
            (
                json!({
                    "branch": "bottleneck",
                    "edges": b.edges.len(),
                    "budget": rat_display(&b.capacitated_weight),
                    "kappa_below_one": all_below_one,
                }),
                all_below_one,
            )
        }
    };
    Ok(RunReport {
        config_line: config_json(config),
        steps: vec![StepRecord {
            step: 0,
            deleted_edge: None,
            matching_weight: 0,
            oracle_weight: None,
            ratio: None,
            counters: Some(counters),
        }],
        events: Vec::new(),
        summary: RunSummary {
            mode: "m_or_e".into(),
            steps: 1,
            min_ratio: None,
            phases: None,
            m_or_e_calls: Some(1),
            restarts: None,
            ok,
        },
        wall_time_ms: 0,
    })
}

fn run_engine(
    config: &RunConfig,
    graph: WeightedMultigraph,
    deletions: &[EdgeId],
) -> Result<RunReport, CliError> {
    let ecfg = EngineConfig {
        eps: config.eps.clone(),
        alpha: config.alpha.clone(),
        rho: config.rho.clone(),
        theta: config.theta.clone(),
        seed: config.seed,
    };
    let cert = crate::stat::static_weighted_match(&graph, &config.eps, false);
    let mu = rat_int(matching_weight(&graph, &cert.matching) as i64);
    let oracle_on =
        config.oracle == OracleMode::Guarded && graph.n() <= oracle::MAX_ORACLE_VERTICES;
    let (mut engine, mut status) = EngineState::new(graph, mu.clone(), ecfg)?;
    let mut steps = Vec::new();
    let mut min_ratio: Option<f64> = None;
    let mut ok = true;
    let mut push = |engine: &EngineState,
                    status: &EngineStatus,
                    step: usize,
                    deleted: Option<EdgeId>,
                    min_ratio: &mut Option<f64>,
                    ok: &mut bool| {
        let w = engine.matching_weight();
        let mut oracle_weight = None;
        let mut ratio = None;
        if oracle_on {
            if let Ok(opt) = oracle::exact_mwm(engine.graph()) {
                oracle_weight = Some(opt.value);
                let r = if opt.value == 0 {
                    1.0
                } else {
                    w as f64 / opt.value as f64
                };
                ratio = Some(r);
                if r > 1.0 + 1e-12 {
                    *ok = false;
                }
                *min_ratio = Some(min_ratio.map_or(r, |m: f64| m.min(r)));
            }
        }
        if !crate::graph::is_matching(engine.graph(), engine.matching()) {
            *ok = false;
        }
        steps.push(StepRecord {
            step,
            deleted_edge: deleted,
            matching_weight: w,
            oracle_weight,
            ratio,
            counters: Some(json!({
                "status": format!("{status:?}"),
                "phase": engine.phase(),
                "phi_del": rat_display(engine.phi_del()),
            })),
        });
    };
    push(&engine, &status, 0, None, &mut min_ratio, &mut ok);
    for (i, &e) in deletions.iter().enumerate() {
        status = engine.delete(e)?;
        push(&engine, &status, i + 1, Some(e), &mut min_ratio, &mut ok);
    }
    let instr = engine.instrumentation();
    let events = engine
        .events
        .iter()
        .map(|e| serde_json::to_value(e).unwrap())
        .collect();
    Ok(RunReport {
        config_line: config_json(config),
        steps,
        events,
        summary: RunSummary {
            mode: "engine".into(),
            steps: deletions.len(),
            min_ratio,
            phases: Some(instr.phases),
            m_or_e_calls: Some(instr.calls_to_m_or_e),
            restarts: None,
            ok,
        },
        wall_time_ms: 0,
    })
}

fn run_orchestrate(
    config: &RunConfig,
    graph: WeightedMultigraph,
    deletions: &[EdgeId],
    verify: bool,
) -> Result<RunReport, CliError> {
    let n = graph.n();
    let ocfg = OrchestratorConfig {
        eps: config.eps.clone(),
        lambda: config.lambda,
        tau_override: None,
        small_threshold: OrchestratorConfig::desk_defaults(n, config.seed).small_threshold,
        alpha: config.alpha.clone(),
        rho: config.rho.clone(),
        theta: config.theta.clone(),
        seed: config.seed,
    };
    let oracle_on = (verify || config.oracle == OracleMode::Guarded)
        && n <= oracle::MAX_ORACLE_VERTICES;
    let mut orch = Orchestrator::new(graph, ocfg)?;
    let mut steps = Vec::new();
    let mut min_ratio: Option<f64> = None;
    let mut ok = true;
    let mut record = |orch: &Orchestrator,
                      step: usize,
                      deleted: Option<EdgeId>,
                      min_ratio: &mut Option<f64>,
                      ok: &mut bool| {
        let m = orch.current_matching();
        if !crate::graph::is_matching(orch.graph(), &m) {
            *ok = false;
        }
        let w = matching_weight(orch.graph(), &m);
        let mut oracle_weight = None;
        let mut ratio = None;
        if oracle_on {
            if let Ok(opt) = oracle::exact_mwm(orch.graph()) {
                oracle_weight = Some(opt.value);
                let r = if opt.value == 0 {
                    1.0
                } else {
                    w as f64 / opt.value as f64
                };
                if r > 1.0 + 1e-12 {
                    *ok = false;
                }
                ratio = Some(r);
                *min_ratio = Some(min_ratio.map_or(r, |m: f64| m.min(r)));
            }
        }
        steps.push(StepRecord {
            step,
            deleted_edge: deleted,
            matching_weight: w,
            oracle_weight,
            ratio,
            counters: Some(json!({
                "restarts": orch.restarts(),
                "small_mode": orch.is_small_mode(),
            })),
        });
    };
    record(&orch, 0, None, &mut min_ratio, &mut ok);
    for (i, &e) in deletions.iter().enumerate() {
        orch.delete(e)?;
        record(&orch, i + 1, Some(e), &mut min_ratio, &mut ok);
    }
    let events = orch
        .events
        .iter()
        .map(|e| serde_json::to_value(e).unwrap())
        .collect();
    Ok(RunReport {
        config_line: config_json(config),
        steps,
        events,
        summary: RunSummary {
            mode: if verify { "verify" } else { "orchestrate" }.into(),
            steps: deletions.len(),
            min_ratio,
            phases: None,
            m_or_e_calls: None,
            restarts: Some(orch.restarts()),
            ok,
        },
        wall_time_ms: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    RandomBipartite,
    RandomGeneral,
    DisjointMatching,
    Star,
    ParallelHeavy,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family, CliError> {
        match s {
            "random_bipartite" => Ok(Family::RandomBipartite),
            "random_general" => Ok(Family::RandomGeneral),
            "disjoint_matching" => Ok(Family::DisjointMatching),
            "star" => Ok(Family::Star),
            "parallel_heavy" => Ok(Family::ParallelHeavy),
            other => Err(CliError::Config(format!("unknown family `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub w_max: u64,
}

/// Deterministic instance + deletion-order generation: same spec and seed
/// give byte-identical files.
pub fn gen_instance(spec: &InstanceSpec, seed: u64) -> Result<(String, String), CliError> {
    let mut rng = subrng(seed, "gen", 0);
    let mut g = match spec.family {
        Family::DisjointMatching => {
            let k = (spec.n / 2).max(1);
            let mut g = WeightedMultigraph::new(2 * k, spec.w_max);
            for i in 0..k {
                g.add_edge(2 * i, 2 * i + 1, spec.w_max)
                    .expect("disjoint edges");
            }
            g
        }
        Family::Star => {
            let n = spec.n.max(2);
            let mut g = WeightedMultigraph::new(n, spec.w_max);
            for leaf in 1..n {
                let w = rng.gen_range(1..=spec.w_max);
                g.add_edge(0, leaf, w).expect("star edge");
            }
            g
        }
        Family::RandomBipartite => {
            let half = (spec.n / 2).max(1);
            let mut g = WeightedMultigraph::new(2 * half, spec.w_max);
            for _ in 0..spec.m {
                let u = rng.gen_range(0..half);
                let v = half + rng.gen_range(0..half);
                let w = rng.gen_range(1..=spec.w_max);
                g.add_edge(u, v, w).expect("bipartite edge");
            }
            g
        }
        Family::RandomGeneral => {
            let n = spec.n.max(2);
            let mut g = WeightedMultigraph::new(n, spec.w_max);
            for _ in 0..spec.m {
                let u = rng.gen_range(0..n);
                let mut v = rng.gen_range(0..n);
                while v == u {
                    v = rng.gen_range(0..n);
                }
                let w = rng.gen_range(1..=spec.w_max);
                g.add_edge(u, v, w).expect("general edge");
            }
            g
        }
        Family::ParallelHeavy => {
            let n = spec.n.max(4);
            let pairs = (n / 2).clamp(1, 4);
            let mut g = WeightedMultigraph::new(n, spec.w_max);
            let mut added = 0;
            while added < spec.m {
                let p = rng.gen_range(0..pairs);
                let w = rng.gen_range(1..=spec.w_max);
                g.add_edge(2 * p, 2 * p + 1, w).expect("parallel edge");
                added += 1;
            }
            g
        }
    };
    if g.alive_count() == 0 && spec.m > 0 {
        g.add_edge(0, 1, 1).expect("fallback edge");
    }
    let mut order: Vec<EdgeId> = g.alive_edges().collect();
    order.shuffle(&mut rng);
    let deletions = order
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    Ok((g.to_text(), deletions + "\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn write_temp(name: &str, contents: &str) -> PathBuf {
        let dir = std::env::temp_dir().join("decmatch-cli-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }

    fn base_config(mode: RunMode, graph: PathBuf) -> RunConfig {
        RunConfig {
            mode,
            graph_path: graph,
            deletions_path: None,
            report_path: None,
            eps: rat(1, 8),
            alpha: rat_int(8),
            rho: rat_int(8),
            lambda: 4,
            theta: rat(1, 8),
            seed: 7,
            kappa: None,
            oracle: OracleMode::Guarded,
            trace: false,
        }
    }

    #[test]
    fn constraint_violation_names_inequality() {
        let path = write_temp("c.graph", "2 1 1\n0 1 1\n");
        let mut cfg = base_config(RunMode::FracSolve, path);
        cfg.theta = rat(1, 100);
        let err = run(&cfg).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("1/alpha"), "message was {msg}");
    }

    #[test]
    fn corrupt_graph_file_names_line() {
        let path = write_temp("bad.graph", "2 2 1\n0 1 1\n");
        let cfg = base_config(RunMode::FracSolve, path);
        let err = run(&cfg).unwrap_err();
        assert!(format!("{err}").contains("line"));
    }

    #[test]
    fn frac_solve_reports_ratio() {
        let (gtext, _) = gen_instance(
            &InstanceSpec {
                family: Family::RandomBipartite,
                n: 12,
                m: 14,
                w_max: 4,
            },
            3,
        )
        .unwrap();
        let path = write_temp("bip.graph", &gtext);
        let mut cfg = base_config(RunMode::FracSolve, path);
        cfg.kappa = Some(rat(1, 2));
        let report = run(&cfg).unwrap();
        assert!(report.summary.ok);
        let ratio = report.summary.min_ratio.unwrap();
        // (1 - 5 eps) at eps = 1/8
        assert!(ratio >= 1.0 - 5.0 / 8.0);
        assert!(ratio <= 1.0 + 1e-12);
    }

    #[test]
    fn verify_mode_empty_script_single_snapshot() {
        let (gtext, _) = gen_instance(
            &InstanceSpec {
                family: Family::DisjointMatching,
                n: 6,
                m: 3,
                w_max: 3,
            },
            5,
        )
        .unwrap();
        let path = write_temp("dm.graph", &gtext);
        let mut cfg = base_config(RunMode::Verify, path);
        cfg.eps = rat(1, 40);
        cfg.alpha = rat_int(40);
        cfg.theta = rat(1, 40);
        let report = run(&cfg).unwrap();
        assert_eq!(report.steps.len(), 1);
        assert!(report.summary.ok);
    }

    #[test]
    fn gen_is_deterministic() {
        let spec = InstanceSpec {
            family: Family::RandomGeneral,
            n: 12,
            m: 20,
            w_max: 4,
        };
        let a = gen_instance(&spec, 9).unwrap();
        let b = gen_instance(&spec, 9).unwrap();
        assert_eq!(a, b);
        let c = gen_instance(&spec, 10).unwrap();
        assert_ne!(a, c);
        // oracle sanity: nonempty graphs have positive mwm
        let g = WeightedMultigraph::from_text(&a.0).unwrap();
        assert!(oracle::exact_mwm(&g).unwrap().value > 0);
    }

    #[test]
    fn disjoint_matching_instance_shape() {
        let (gtext, dels) = gen_instance(
            &InstanceSpec {
                family: Family::DisjointMatching,
                n: 10,
                m: 5,
                w_max: 3,
            },
            1,
        )
        .unwrap();
        let g = WeightedMultigraph::from_text(&gtext).unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.alive_count(), 5);
        assert_eq!(oracle::exact_mwm(&g).unwrap().value, 15);
        assert_eq!(parse_deletions(&dels).unwrap().len(), 5);
    }

    #[test]
    fn m_or_e_mode_reports_branch() {
        let (gtext, _) = gen_instance(
            &InstanceSpec {
                family: Family::RandomGeneral,
                n: 10,
                m: 16,
                w_max: 3,
            },
            13,
        )
        .unwrap();
        let path = write_temp("moe.graph", &gtext);
        let cfg = base_config(RunMode::MOrE, path);
        let report = run(&cfg).unwrap();
        assert!(report.summary.ok);
        let counters = report.steps[0].counters.as_ref().unwrap();
        let branch = counters.get("branch").unwrap().as_str().unwrap();
        assert!(branch == "matching" || branch == "bottleneck");
    }

    #[test]
    fn orchestrate_mode_runs_scripts() {
        let (gtext, dels) = gen_instance(
            &InstanceSpec {
                family: Family::RandomGeneral,
                n: 10,
                m: 14,
                w_max: 3,
            },
            31,
        )
        .unwrap();
        let gpath = write_temp("orch.graph", &gtext);
        let dpath = write_temp("orch.dels", &dels);
        let mut cfg = base_config(RunMode::Orchestrate, gpath);
        cfg.deletions_path = Some(dpath);
        cfg.eps = rat(1, 40);
        cfg.alpha = rat_int(40);
        cfg.theta = rat(1, 40);
        cfg.lambda = 4;
        let report = run(&cfg).unwrap();
        assert!(report.summary.ok);
        assert_eq!(report.steps.len(), 15); // snapshot + one per deletion
        // report path round trip
        let rpath = write_temp("orch.jsonl", "");
        cfg.report_path = Some(rpath.clone());
        run(&cfg).unwrap();
        let written = std::fs::read_to_string(&rpath).unwrap();
        assert!(written.lines().any(|l| l.contains("\"summary\"")));
    }

    #[test]
    fn engine_mode_full_run() {
        let (gtext, dels) = gen_instance(
            &InstanceSpec {
                family: Family::RandomGeneral,
                n: 8,
                m: 12,
                w_max: 3,
            },
            21,
        )
        .unwrap();
        let gpath = write_temp("eng.graph", &gtext);
        let dpath = write_temp("eng.dels", &dels);
        let mut cfg = base_config(RunMode::Engine, gpath);
        cfg.deletions_path = Some(dpath);
        cfg.eps = rat(1, 40);
        cfg.alpha = rat_int(40);
        cfg.theta = rat(1, 40);
        let report = run(&cfg).unwrap();
        assert!(report.summary.ok, "engine run failed invariants");
        assert!(report.summary.phases.unwrap() >= 1);
        // replay determinism
        let replay = run(&cfg).unwrap();
        assert_eq!(report.deterministic_jsonl(), replay.deterministic_jsonl());
    }
}
