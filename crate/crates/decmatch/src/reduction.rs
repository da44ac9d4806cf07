//! Vertex reduction into small multigraphs and the top-level
//! orchestrator: lambda parallel decremental engines over reduced
//! instances, a `cur` pointer onto the first live one, global restarts
//! with a fresh estimate, and the small-matching fallback.

use crate::engine::{EngineConfig, EngineError, EngineState, EngineStatus};
use crate::graph::{matching_weight, EdgeId, GraphError, WeightedMultigraph};
use crate::rational::{rat_ceil, rat_int, Rat};
use crate::rng::subrng;
use crate::small::{SmallEngine, SmallMatchError};
use crate::stat;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrchestratorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Small(#[from] SmallMatchError),
    #[error("no active instance after {0} consecutive restarts")]
    RestartStorm(usize),
}

/// A multigraph on tau bins plus the projection maps back to the source.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    pub graph: WeightedMultigraph,
    pub bin_of: Vec<usize>,
    /// source edge id -> reduced edge id (cross-bin edges only)
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    /// reduced edge id -> source edge id
    pub source_of: Vec<EdgeId>,
}

/// Uniform random binning; edges inside one bin are dropped, cross-bin
/// edges keep their weight and become parallel edges of the bin graph.
pub fn vertex_red_basic(
    g: &WeightedMultigraph,
    tau: usize,
    rng: &mut ChaCha8Rng,
) -> ReducedGraph {
    assert!(tau >= 2, "need at least two bins");
    let bin_of: Vec<usize> = (0..g.n()).map(|_| rng.gen_range(0..tau)).collect();
    let mut graph = WeightedMultigraph::new(tau, g.max_weight().max(1));
    let mut edge_map = BTreeMap::new();
    let mut source_of = Vec::new();
    for e in g.alive_edges() {
        let (u, v) = g.endpoints(e);
        if bin_of[u] != bin_of[v] {
            let re = graph
                .add_edge(bin_of[u], bin_of[v], g.weight(e))
                .expect("cross-bin edge");
            edge_map.insert(e, re);
            source_of.push(e);
        }
    }
    ReducedGraph {
        graph,
        bin_of,
        edge_map,
        source_of,
    }
}

/// tau = ceil(4 (1+delta) W mu / delta), at least 2.
pub fn reduction_bins(mu_estimate: &Rat, w_max: u64, delta: &Rat) -> usize {
    let tau = rat_int(4) * (rat_int(1) + delta) * rat_int(w_max as i64) * mu_estimate / delta;
    let t = rat_ceil(&tau).to_string().parse::<usize>().unwrap_or(2);
    t.max(2)
}

/// lambda independent draws of `vertex_red_basic`.
pub fn vertex_red(
    g: &WeightedMultigraph,
    mu_estimate: &Rat,
    delta: &Rat,
    lambda: usize,
    tau_override: Option<usize>,
    seed: u64,
    epoch: u64,
) -> Vec<ReducedGraph> {
    let tau = tau_override.unwrap_or_else(|| reduction_bins(mu_estimate, g.max_weight(), delta));
    (0..lambda)
        .map(|i| {
            let mut rng = subrng(seed, "vertex_red", epoch * 1_000 + i as u64);
            vertex_red_basic(g, tau, &mut rng)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct OrchestratorConfig {
    pub eps: Rat,
    pub lambda: usize,
    pub tau_override: Option<usize>,
    /// Switch to the core-graph fallback when the estimate drops to this.
    pub small_threshold: u64,
    pub alpha: Rat,
    pub rho: Rat,
    pub theta: Rat,
    pub seed: u64,
}

impl OrchestratorConfig {
    pub fn desk_defaults(n: usize, seed: u64) -> Self {
        let log_n = usize::BITS - n.max(2).leading_zeros();
        OrchestratorConfig {
            eps: crate::rational::rat(1, 5),
            lambda: 16,
            tau_override: None,
            small_threshold: 3 * log_n as u64,
            alpha: rat_int(8),
            rho: rat_int(8),
            theta: crate::rational::rat(1, 8),
            seed,
        }
    }

    fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            eps: self.eps.clone(),
            alpha: self.alpha.clone(),
            rho: self.rho.clone(),
            theta: self.theta.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrchestratorEvent {
    Restart {
        epoch: usize,
        mu: String,
        active_instances: usize,
    },
    SwitchToSmall {
        mu: u64,
    },
    CurAdvance {
        cur: usize,
    },
    InstanceDown {
        index: usize,
    },
}

struct Instance {
    reduced: ReducedGraph,
    active: bool,
    engine: Option<EngineState>,
}

#[allow(clippy::large_enum_variant)] // one orchestrator, one mode
enum Mode {
    Empty,
    Engines(Vec<Instance>),
    Small(SmallEngine),
}

pub struct Orchestrator {
    graph: WeightedMultigraph,
    cfg: OrchestratorConfig,
    mu: Rat,
    mode: Mode,
    cur: usize,
    restarts: usize,
    epoch: u64,
    pub events: Vec<OrchestratorEvent>,
}

impl Orchestrator {
    pub fn new(
        graph: WeightedMultigraph,
        cfg: OrchestratorConfig,
    ) -> Result<Orchestrator, OrchestratorError> {
        let mut o = Orchestrator {
            graph,
            cfg,
            mu: rat_int(0),
            mode: Mode::Empty,
            cur: 0,
            restarts: 0,
            epoch: 0,
            events: Vec::new(),
        };
        o.restart()?;
        Ok(o)
    }

    pub fn mu(&self) -> &Rat {
        &self.mu
    }

    pub fn restarts(&self) -> usize {
        self.restarts
    }

    pub fn graph(&self) -> &WeightedMultigraph {
        &self.graph
    }

    pub fn cur(&self) -> Option<usize> {
        match &self.mode {
            Mode::Engines(instances) if self.cur < instances.len() => Some(self.cur),
            _ => None,
        }
    }

    pub fn is_small_mode(&self) -> bool {
        matches!(self.mode, Mode::Small(_))
    }

    /// Fresh estimate, fresh reduced instances, fresh engines. Invoked at
    /// construction and whenever every instance has gone down.
    fn restart(&mut self) -> Result<(), OrchestratorError> {
        // Re-draw the binning when every instance starts inactive; each
        // retry increments the observable restart counter.
        for _attempt in 0..8 {
            self.epoch += 1;
            let cert = stat::static_weighted_match(&self.graph, &self.cfg.eps, false);
            let mu_int = matching_weight(&self.graph, &cert.matching);
            self.mu = rat_int(mu_int as i64);
            if mu_int == 0 {
                self.mode = Mode::Empty;
                self.cur = 0;
                self.events.push(OrchestratorEvent::Restart {
                    epoch: self.epoch as usize,
                    mu: "0".into(),
                    active_instances: 0,
                });
                return Ok(());
            }
            if mu_int <= self.cfg.small_threshold {
                let engine = SmallEngine::new(
                    self.graph.clone(),
                    &self.cfg.eps,
                    self.cfg.small_threshold,
                )?;
                self.mode = Mode::Small(engine);
                self.events.push(OrchestratorEvent::SwitchToSmall { mu: mu_int });
                return Ok(());
            }
            // Desk cap: the retention formula for tau explodes at small eps and
            // a bin count beyond ~2n only adds isolated bins. Retention at
            // the formula's tau is exercised by its own Monte-Carlo tests.
            let tau = self.cfg.tau_override.unwrap_or_else(|| {
                reduction_bins(&self.mu, self.graph.max_weight(), &self.cfg.eps)
                    .min(2 * self.graph.n().max(2))
            });
            let reduced = vertex_red(
                &self.graph,
                &self.mu,
                &self.cfg.eps,
                self.cfg.lambda,
                Some(tau),
                self.cfg.seed,
                self.epoch,
            );
            let one_minus = rat_int(1) - &self.cfg.eps;
            let target = &one_minus * &self.mu;
            let mut instances = Vec::new();
            for r in reduced {
                let est = stat::static_weighted_match(&r.graph, &self.cfg.eps, false);
                let est_w = rat_int(matching_weight(&r.graph, &est.matching) as i64);
                if est_w < (rat_int(1) - &self.cfg.eps) * &self.mu {
                    instances.push(Instance {
                        reduced: r,
                        active: false,
                        engine: None,
                    });
                    continue;
                }
                let (engine, status) = EngineState::new(
                    r.graph.clone(),
                    target.clone(),
                    self.cfg.engine_config(),
                )?;
                instances.push(Instance {
                    reduced: r,
                    active: status == EngineStatus::Active,
                    engine: Some(engine),
                });
            }
            let cur = instances.iter().position(|i| i.active);
            let count = instances.iter().filter(|i| i.active).count();
            self.events.push(OrchestratorEvent::Restart {
                epoch: self.epoch as usize,
                mu: crate::rational::rat_display(&self.mu),
                active_instances: count,
            });
            if let Some(c) = cur {
                self.cur = c;
                self.mode = Mode::Engines(instances);
                return Ok(());
            }
            self.restarts += 1;
        }
        Err(OrchestratorError::RestartStorm(8))
    }

    /// Current output matching, as source-graph edge ids.
    pub fn current_matching(&self) -> Vec<EdgeId> {
        match &self.mode {
            Mode::Empty => Vec::new(),
            Mode::Small(engine) => engine.matching().to_vec(),
            Mode::Engines(instances) => {
                if self.cur >= instances.len() {
                    return Vec::new();
                }
                let inst = &instances[self.cur];
                let engine = inst.engine.as_ref().expect("active instance has engine");
                engine
                    .matching()
                    .iter()
                    .map(|&re| inst.reduced.source_of[re])
                    .collect()
            }
        }
    }

    pub fn current_weight(&self) -> u64 {
        matching_weight(&self.graph, &self.current_matching())
    }

    /// Fans a deletion out to the active instances, advances `cur` past
    /// dead ones, and restarts with a fresh estimate when all are down.
    pub fn delete(&mut self, e: EdgeId) -> Result<Vec<EdgeId>, OrchestratorError> {
        if !self.graph.is_alive(e) {
            self.graph.delete_edge(e)?;
            unreachable!("delete_edge must fail on a dead edge");
        }
        self.graph.delete_edge(e)?;
        let mut needs_restart = false;
        match &mut self.mode {
            Mode::Empty => {}
            Mode::Small(engine) => {
                engine.delete(e)?;
            }
            Mode::Engines(instances) => {
                for (idx, inst) in instances.iter_mut().enumerate() {
                    if !inst.active {
                        continue;
                    }
                    if let Some(&re) = inst.reduced.edge_map.get(&e) {
                        let engine = inst.engine.as_mut().expect("active engine");
                        if engine.graph().is_alive(re) {
                            let status = engine.delete(re)?;
                            if status == EngineStatus::No {
                                inst.active = false;
                                self.events
                                    .push(OrchestratorEvent::InstanceDown { index: idx });
                            }
                        }
                    }
                }
                // advance cur monotonically within this epoch
                let old_cur = self.cur;
                while self.cur < instances.len() && !instances[self.cur].active {
                    self.cur += 1;
                }
                if self.cur != old_cur {
                    self.events.push(OrchestratorEvent::CurAdvance { cur: self.cur });
                }
                if self.cur >= instances.len() {
                    needs_restart = true;
                }
            }
        }
        if needs_restart {
            self.restarts += 1;
            self.restart()?;
        }
        Ok(self.current_matching())
    }
}
