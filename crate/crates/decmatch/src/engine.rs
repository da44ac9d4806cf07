//! Decremental matching engine: phases, capacity boosting along
//! bottleneck sets, deletion counters, and the sparsifier-backed output
//! matching. One engine owns one multigraph and processes a serialized
//! deletion stream until it can certify that the matching weight has
//! dropped below (1 - 2 eps) mu, at which point it reports `No`.

use crate::congestion::{
    weighted_m_or_estar, CongestionConfig, CongestionError, MOrEOutcome,
};
use crate::graph::{
    collapse, matching_weight, CapacityFn, CollapsedMatching, EdgeId, FractionalMatching,
    GraphError, WeightedMultigraph,
};
use crate::rational::{rat_display, rat_int, rat_zero, Rat};
use crate::rng::subrng;
use crate::sparsify::{round_to_integral, Sparsifier, SparsifierUpdate, SparsifyError};
use crate::stat;
use num::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Congestion(#[from] CongestionError),
    #[error(transparent)]
    Sparsify(#[from] SparsifyError),
    #[error("engine stalled: bottleneck branch returned an empty E*")]
    Stalled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineStatus {
    Active,
    No,
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub eps: Rat,
    pub alpha: Rat,
    pub rho: Rat,
    /// Sparsifier entry threshold; the engine guarantees collapsed
    /// fractional entries at most 1/alpha, so 1/alpha <= theta is required
    /// for the sparsifier to be enabled.
    pub theta: Rat,
    pub seed: u64,
}

impl EngineConfig {
    pub fn desk_defaults(seed: u64) -> Self {
        EngineConfig {
            eps: crate::rational::rat(1, 5),
            alpha: rat_int(8),
            rho: rat_int(8),
            theta: crate::rational::rat(1, 8),
            seed,
        }
    }

    pub fn congestion(&self) -> CongestionConfig {
        CongestionConfig {
            eps: self.eps.clone(),
            alpha: self.alpha.clone(),
            rho: self.rho.clone(),
            seed: self.seed,
        }
    }

    pub fn sparsifier_enabled(&self) -> bool {
        rat_int(1) / &self.alpha <= self.theta
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Instrumentation {
    pub calls_to_m_or_e: usize,
    pub phases: usize,
    pub capacity_boosts: u64,
    /// Capacitated weight of the initial edge set, with deleted edges
    /// frozen at their pre-deletion capacity.
    pub w_kappa_e0: String,
    /// Sum of kappa(e) w(e) over deleted edges, at deletion-time kappa.
    pub phi_del: String,
    pub sparsifier_enabled: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EngineEvent {
    PhaseStart {
        phase: usize,
        mu_prime: String,
        counter_x: String,
        phi_del: String,
    },
    Boost {
        phase: usize,
        edges: usize,
        budget: String,
    },
    Rebuild {
        phase: usize,
        matching_weight: u64,
    },
    Delete {
        edge: EdgeId,
        matching_weight: u64,
    },
    NoSignal {
        phase: usize,
        mu_prime: String,
    },
}

/// One emitted bottleneck set, with enough context to replay the
/// bottleneck-hit analysis offline.
#[derive(Debug, Clone)]
pub struct BottleneckRecord {
    pub estar: std::collections::BTreeSet<EdgeId>,
    pub sampled: std::collections::BTreeSet<EdgeId>,
    pub alive: std::collections::BTreeSet<EdgeId>,
    pub all_kappa_below_one: bool,
}

pub struct EngineState {
    graph: WeightedMultigraph,
    kappa: CapacityFn,
    mu: Rat,
    cfg: EngineConfig,
    /// Full fractional matching of the current phase, by physical edge.
    x: FractionalMatching,
    integral_part: FractionalMatching,
    fractional_part: FractionalMatching,
    z_collapsed: CollapsedMatching,
    y_collapsed: CollapsedMatching,
    sparsifier: Option<Sparsifier>,
    matching: Vec<EdgeId>,
    counter_m: u64,
    counter_x: Rat,
    phase: usize,
    terminated: bool,
    calls: usize,
    boosts: u64,
    w_kappa_e0: Rat,
    phi_del: Rat,
    pub events: Vec<EngineEvent>,
    pub bottlenecks: Vec<BottleneckRecord>,
}

impl EngineState {
    /// Builds the engine and runs the first phase. `mu` is the caller's
    /// estimate with mu >= (1 - eps) mwm(H); a bad estimate makes the
    /// first phase return `No` immediately.
    pub fn new(
        graph: WeightedMultigraph,
        mu: Rat,
        cfg: EngineConfig,
    ) -> Result<(EngineState, EngineStatus), EngineError> {
        cfg.congestion().validate().map_err(|e| match e {
            CongestionError::BadConfig(m) => EngineError::BadConfig(m),
            other => other.into(),
        })?;
        if !cfg.eps.is_positive() || !mu.is_positive() && graph.alive_count() > 0 {
            return Err(EngineError::BadConfig(
                "mu must be positive on a nonempty graph".into(),
            ));
        }
        // kappa(e) = alpha^{-ceil(log_alpha n)} on every edge
        let n = graph.n().max(2);
        let mut levels = 0u32;
        let mut power = rat_int(1);
        while power < rat_int(n as i64) {
            power *= &cfg.alpha;
            levels += 1;
        }
        let mut kappa_init = rat_int(1);
        for _ in 0..levels {
            kappa_init /= &cfg.alpha;
        }
        let kappa = CapacityFn::uniform(&graph, &kappa_init);
        let w_kappa_e0 = graph
            .alive_edges()
            .map(|e| rat_int(graph.weight(e) as i64) * kappa.get(e))
            .sum();
        let mut state = EngineState {
            graph,
            kappa,
            mu,
            cfg,
            x: FractionalMatching::new(),
            integral_part: FractionalMatching::new(),
            fractional_part: FractionalMatching::new(),
            z_collapsed: CollapsedMatching::new(),
            y_collapsed: CollapsedMatching::new(),
            sparsifier: None,
            matching: Vec::new(),
            counter_m: 0,
            counter_x: rat_zero(),
            phase: 0,
            terminated: false,
            calls: 0,
            boosts: 0,
            w_kappa_e0,
            phi_del: rat_zero(),
            events: Vec::new(),
            bottlenecks: Vec::new(),
        };
        let status = state.start_phase()?;
        Ok((state, status))
    }

    pub fn status(&self) -> EngineStatus {
        if self.terminated {
            EngineStatus::No
        } else {
            EngineStatus::Active
        }
    }

    pub fn matching(&self) -> &[EdgeId] {
        &self.matching
    }

    pub fn matching_weight(&self) -> u64 {
        matching_weight(&self.graph, &self.matching)
    }

    pub fn graph(&self) -> &WeightedMultigraph {
        &self.graph
    }

    pub fn kappa(&self) -> &CapacityFn {
        &self.kappa
    }

    pub fn mu(&self) -> &Rat {
        &self.mu
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn instrumentation(&self) -> Instrumentation {
        Instrumentation {
            calls_to_m_or_e: self.calls,
            phases: self.phase,
            capacity_boosts: self.boosts,
            w_kappa_e0: rat_display(&self.w_kappa_e0),
            phi_del: rat_display(&self.phi_del),
            sparsifier_enabled: self.cfg.sparsifier_enabled(),
        }
    }

    pub fn phi_del(&self) -> &Rat {
        &self.phi_del
    }

    pub fn w_kappa_e0(&self) -> &Rat {
        &self.w_kappa_e0
    }

    fn start_phase(&mut self) -> Result<EngineStatus, EngineError> {
        self.phase += 1;
        self.events.push(EngineEvent::PhaseStart {
            phase: self.phase,
            mu_prime: String::new(),
            counter_x: rat_display(&self.counter_x),
            phi_del: rat_display(&self.phi_del),
        });
        let eps = self.cfg.eps.clone();
        let cert = stat::static_weighted_match(&self.graph, &eps, false);
        let mu_prime = rat_int(matching_weight(&self.graph, &cert.matching) as i64);
        if let Some(EngineEvent::PhaseStart { mu_prime: slot, .. }) = self.events.last_mut()
        {
            *slot = rat_display(&mu_prime);
        }
        let no_threshold = (rat_int(1) - rat_int(3) * &eps) * &self.mu;
        if mu_prime <= no_threshold {
            self.terminated = true;
            self.matching.clear();
            self.events.push(EngineEvent::NoSignal {
                phase: self.phase,
                mu_prime: rat_display(&mu_prime),
            });
            return Ok(EngineStatus::No);
        }

        // Congestion balancing: boost along E* until the matching branch.
        let ccfg = self.cfg.congestion();
        let boost_guard = self.graph.alive_count() * 64 + 4;
        let mut outcome = None;
        for _ in 0..boost_guard {
            let mut rng = subrng(self.cfg.seed, "m_or_e", self.calls as u64);
            self.calls += 1;
            match weighted_m_or_estar(&self.graph, &self.kappa, &mu_prime, &ccfg, &mut rng)?
            {
                MOrEOutcome::Bottleneck(b) => {
                    if b.edges.is_empty() {
                        return Err(EngineError::Stalled);
                    }
                    self.bottlenecks.push(BottleneckRecord {
                        estar: b.edges.clone(),
                        sampled: b.sampled.clone(),
                        alive: self.graph.alive_edges().collect(),
                        all_kappa_below_one: b
                            .edges
                            .iter()
                            .all(|&e| *self.kappa.get(e) < rat_int(1)),
                    });
                    for &e in &b.edges {
                        debug_assert!(*self.kappa.get(e) < rat_int(1));
                        let old = self.kappa.get(e).clone();
                        self.kappa.boost(e, &self.cfg.alpha);
                        let delta = self.kappa.get(e) - &old;
                        self.w_kappa_e0 +=
                            rat_int(self.graph.weight(e) as i64) * delta;
                        self.boosts += 1;
                    }
                    self.events.push(EngineEvent::Boost {
                        phase: self.phase,
                        edges: b.edges.len(),
                        budget: rat_display(&b.capacitated_weight),
                    });
                }
                MOrEOutcome::Matching(m) => {
                    outcome = Some(m);
                    break;
                }
            }
        }
        let m = outcome.ok_or(EngineError::Stalled)?;

        self.x = m.x;
        self.integral_part = m.integral_part;
        self.fractional_part = m.fractional_part;
        self.z_collapsed = collapse(&self.graph, &self.integral_part);
        self.y_collapsed = collapse(&self.graph, &self.fractional_part);
        self.sparsifier = if self.cfg.sparsifier_enabled() {
            let entries = self
                .y_collapsed
                .iter()
                .map(|(k, v)| (*k, v.clone()))
                .collect();
            Some(Sparsifier::new(
                &entries,
                &eps,
                &self.cfg.theta,
                self.graph.n(),
                self.graph.max_weight(),
                self.cfg.seed ^ (self.phase as u64).wrapping_mul(0x9e37),
            )?)
        } else {
            None
        };
        self.counter_m = 0;
        self.counter_x = rat_zero();
        self.rebuild_matching()?;
        Ok(EngineStatus::Active)
    }

    fn rebuild_matching(&mut self) -> Result<(), EngineError> {
        let k_entries: Vec<(crate::graph::GroupKey, Rat)> = match &self.sparsifier {
            Some(s) => s.current_k(),
            // sparsifier disabled: round the whole fractional support
            None => self
                .y_collapsed
                .iter()
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        };
        self.matching =
            round_to_integral(&self.graph, &k_entries, &self.z_collapsed, &self.cfg.eps)?;
        debug_assert!(crate::graph::is_matching(&self.graph, &self.matching));
        self.events.push(EngineEvent::Rebuild {
            phase: self.phase,
            matching_weight: self.matching_weight(),
        });
        Ok(())
    }

    /// Processes one adversarial deletion and returns the engine status.
    /// After `No`, deletions still update the graph and the deletion
    /// ledger (phi_del freezes kappa at deletion time) but no matching is
    /// maintained.
    pub fn delete(&mut self, e: EdgeId) -> Result<EngineStatus, EngineError> {
        if !self.graph.is_alive(e) {
            // delegate for the precise error (unknown id vs double delete)
            self.graph.delete_edge(e)?;
            unreachable!("delete_edge must fail on a dead edge");
        }
        let w = rat_int(self.graph.weight(e) as i64);
        self.phi_del += &w * self.kappa.get(e);
        self.graph.delete_edge(e)?;
        if self.terminated {
            return Ok(EngineStatus::No);
        }

        let xe = self.x.get(e);
        if xe.is_positive() {
            self.x.remove(e);
            let key = {
                // group key survives deletion; endpoints/weight are stable
                let (u, v) = self.graph.endpoints(e);
                crate::graph::group_key(u, v, self.graph.weight(e))
            };
            if self.integral_part.get(e).is_positive() {
                self.integral_part.remove(e);
                let next = self.z_collapsed.get(&key) - &xe;
                self.z_collapsed.set(key, next.max(rat_zero()));
            } else {
                self.fractional_part.remove(e);
                let next = self.y_collapsed.get(&key) - &xe;
                let next = next.max(rat_zero());
                self.y_collapsed.set(key, next.clone());
                if let Some(s) = self.sparsifier.as_mut() {
                    let update = if next.is_zero() {
                        SparsifierUpdate::Remove(key)
                    } else {
                        SparsifierUpdate::Decrease(key, next)
                    };
                    s.update(update)?;
                }
            }
            self.counter_x += &w * &xe;
        }

        if self.counter_x > &self.cfg.eps * &self.mu {
            // end of phase: the adversary has destroyed eps mu of
            // fractional weight since the last rebuild from scratch
            let status = self.start_phase()?;
            self.events.push(EngineEvent::Delete {
                edge: e,
                matching_weight: self.matching_weight(),
            });
            return Ok(status);
        }

        if let Some(pos) = self.matching.iter().position(|&m| m == e) {
            self.matching.remove(pos);
            self.counter_m += self.graph.weight(e);
            if rat_int(self.counter_m as i64) > &self.cfg.eps * &self.mu {
                self.counter_m = 0;
                self.rebuild_matching()?;
            }
        }
        self.events.push(EngineEvent::Delete {
            edge: e,
            matching_weight: self.matching_weight(),
        });
        Ok(EngineStatus::Active)
    }
}
