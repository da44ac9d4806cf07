//! Single-scale primal-dual solver for maximum-weight capacitated
//! fractional matching on bipartite multigraphs, plus the double-cover
//! lift to general graphs.
//!
//! The solver maintains a fractional matching x and duals (y, z) with
//! five invariants (granularity, domination, tightness, free duals,
//! complementary slackness), checked after every iteration. Each
//! iteration: clear z on eligible backward edges, augment along a maximal
//! set of paths in the eligible residual graph, then shift duals by eps
//! across the reachability cut.

use crate::graph::{
    bipartition, double_cover, support_vertices, CapacityFn, EdgeId, FractionalMatching,
    VertexId, WeightedMultigraph,
};
use crate::rational::{eps_denominator, is_multiple_of, rat_int, rat_zero, Rat};
use num::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("input graph is not bipartite")]
    NonBipartite,
    #[error("epsilon must be 1/k for an integer k >= 2")]
    BadEpsilon,
    #[error("group capacity above threshold for {0:?}")]
    GroupCapacityTooLarge(crate::graph::GroupKey),
    #[error("invariant `{invariant}` violated at iteration {iteration}")]
    InvariantViolation {
        invariant: &'static str,
        iteration: usize,
        trace: Vec<IterationRecord>,
    },
}

/// Per-iteration invariant snapshot; all flags must hold every iteration.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InvariantFlags {
    pub granularity: bool,
    pub domination: bool,
    pub tightness: bool,
    pub free_duals: bool,
    pub complementary_slackness: bool,
    pub eligible_exclusive: bool,
    pub eligible_acyclic: bool,
    pub no_augmenting_path: bool,
    pub feasible: bool,
}

impl InvariantFlags {
    pub fn all(&self) -> bool {
        self.granularity
            && self.domination
            && self.tightness
            && self.free_duals
            && self.complementary_slackness
            && self.eligible_exclusive
            && self.eligible_acyclic
            && self.no_augmenting_path
            && self.feasible
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Common dual of the free left vertices, as `p/q`.
    pub free_left_dual: String,
    pub support_size: usize,
    pub invariants: InvariantFlags,
}

#[derive(Debug, Clone)]
pub struct FracSolution {
    pub x: FractionalMatching,
    pub y: Vec<Rat>,
    pub z: BTreeMap<EdgeId, Rat>,
    pub value: Rat,
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
}

/// One directed arc of the eligible residual graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EligibleArc {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub forward: bool,
}

/// Eligible subgraph: forward arcs with yz = w - eps and residual
/// headroom, backward arcs with yz = w + eps and positive value.
#[derive(Debug, Clone, Default)]
pub struct EligibleGraph {
    pub arcs: Vec<EligibleArc>,
}

impl EligibleGraph {
    fn out_arcs(&self, n: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for (i, a) in self.arcs.iter().enumerate() {
            adj[a.from].push(i);
        }
        adj
    }

    /// Kahn topological check over the vertices touched by arcs.
    pub fn is_acyclic(&self, n: usize) -> bool {
        let mut indeg = vec![0usize; n];
        for a in &self.arcs {
            indeg[a.to] += 1;
        }
        let adj = self.out_arcs(n);
        let mut stack: Vec<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &ai in &adj[v] {
                let t = self.arcs[ai].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    stack.push(t);
                }
            }
        }
        seen == n
    }
}

/// Live state of the solver; `step` applies one while-loop iteration.
pub struct SolverState<'a> {
    g: &'a WeightedMultigraph,
    kappa: &'a CapacityFn,
    /// side[v] = true for right vertices.
    side: Vec<bool>,
    pub x: FractionalMatching,
    pub y: Vec<Rat>,
    pub z: BTreeMap<EdgeId, Rat>,
    eps: Rat,
    pub iteration: usize,
    pub trace: Vec<IterationRecord>,
    mass: Vec<Rat>,
}

impl<'a> SolverState<'a> {
    pub fn new(
        g: &'a WeightedMultigraph,
        kappa: &'a CapacityFn,
        eps: &Rat,
    ) -> Result<Self, SolverError> {
        eps_denominator(eps).ok_or(SolverError::BadEpsilon)?;
        let side = bipartition(g).ok_or(SolverError::NonBipartite)?;
        let w = rat_int(g.max_weight() as i64);
        let mut y = vec![rat_zero(); g.n()];
        for (v, item) in y.iter_mut().enumerate() {
            if !side[v] {
                *item = &w - eps;
            }
        }
        Ok(SolverState {
            g,
            kappa,
            side,
            x: FractionalMatching::new(),
            y,
            z: BTreeMap::new(),
            eps: eps.clone(),
            iteration: 0,
            trace: Vec::new(),
            mass: vec![rat_zero(); g.n()],
        })
    }

    fn z_of(&self, e: EdgeId) -> Rat {
        self.z.get(&e).cloned().unwrap_or_else(rat_zero)
    }

    /// yz(e) = y(u) + y(v) + z(e).
    pub fn yz(&self, e: EdgeId) -> Rat {
        let (u, v) = self.g.endpoints(e);
        &self.y[u] + &self.y[v] + self.z_of(e)
    }

    fn is_free(&self, v: VertexId) -> bool {
        self.mass[v] < rat_int(1)
    }

    /// Left vertices that are free; their duals are equal throughout.
    pub fn free_left(&self) -> Vec<VertexId> {
        (0..self.g.n())
            .filter(|&v| !self.side[v] && self.is_free(v))
            .collect()
    }

    pub fn active(&self) -> bool {
        self.free_left().iter().any(|&v| self.y[v].is_positive())
    }

    /// Eligible residual graph of the current state.
    pub fn eligible(&self) -> Result<EligibleGraph, SolverError> {
        let mut arcs = Vec::new();
        for e in self.g.alive_edges() {
            let (a, b) = self.g.endpoints(e);
            let (l, r) = if self.side[a] { (b, a) } else { (a, b) };
            let w = rat_int(self.g.weight(e) as i64);
            let yz = self.yz(e);
            let xe = self.x.get(e);
            let fwd = yz == &w - &self.eps && *self.kappa.get(e) > xe;
            let bwd = yz == &w + &self.eps && xe.is_positive();
            if fwd && bwd {
                return Err(self.violation("eligible_exclusive"));
            }
            if fwd {
                arcs.push(EligibleArc {
                    edge: e,
                    from: l,
                    to: r,
                    forward: true,
                });
            }
            if bwd {
                arcs.push(EligibleArc {
                    edge: e,
                    from: r,
                    to: l,
                    forward: false,
                });
            }
        }
        Ok(EligibleGraph { arcs })
    }

    fn violation(&self, invariant: &'static str) -> SolverError {
        SolverError::InvariantViolation {
            invariant,
            iteration: self.iteration,
            trace: self.trace.clone(),
        }
    }

    /// One full while-loop iteration: z fixup, augmentation, dual shift.
    pub fn step(&mut self) -> Result<(), SolverError> {
        let eps = self.eps.clone();
        // z fixup on eligible backward edges carrying positive z: after
        // this, either z(e) = 0 or the edge has left the eligible graph.
        let eligible = self.eligible()?;
        for arc in &eligible.arcs {
            if arc.forward {
                continue;
            }
            let e = arc.edge;
            let z = self.z_of(e);
            if z.is_positive() {
                let w = rat_int(self.g.weight(e) as i64);
                let drop = z.clone().min(self.yz(e) - &w + &eps);
                let next = &z - &drop;
                if next.is_zero() {
                    self.z.remove(&e);
                } else {
                    self.z.insert(e, next);
                }
            }
        }

        let eligible = self.eligible()?;
        if !eligible.is_acyclic(self.g.n()) {
            return Err(self.violation("eligible_acyclic"));
        }
        self.augment_maximally(&eligible)?;

        // Dual adjustment across the cut around Z, the set reachable from
        // free left vertices in the post-augmentation eligible graph. The
        // blocking property is checked here: no free right vertex may be
        // reachable once augmentation has finished.
        let eligible = self.eligible()?;
        let in_z = self.reachable_from_free_left(&eligible);
        for (v, &reachable) in in_z.iter().enumerate() {
            if reachable && self.side[v] && self.is_free(v) {
                return Err(self.violation("no_augmenting_path"));
            }
        }
        for e in self.g.alive_edges() {
            let (a, b) = self.g.endpoints(e);
            let (l, r) = if self.side[a] { (b, a) } else { (a, b) };
            if in_z[l] && !in_z[r] && self.x.get(e).is_positive() {
                let w = rat_int(self.g.weight(e) as i64);
                if self.yz(e) == &w - &eps {
                    let z = self.z_of(e) + &eps;
                    self.z.insert(e, z);
                }
            }
        }
        for (v, &reachable) in in_z.iter().enumerate() {
            if !reachable {
                continue;
            }
            if self.side[v] {
                self.y[v] += &eps;
            } else {
                self.y[v] -= &eps;
            }
        }

        self.iteration += 1;
        let flags = self.check_invariants()?;
        let free_dual = self
            .free_left()
            .first()
            .map(|&v| self.y[v].clone())
            .unwrap_or_else(rat_zero);
        self.trace.push(IterationRecord {
            iteration: self.iteration,
            free_left_dual: crate::rational::rat_display(&free_dual),
            support_size: self.x.support_size(),
            invariants: flags,
        });
        Ok(())
    }

    fn reachable_from_free_left(&self, eligible: &EligibleGraph) -> Vec<bool> {
        let mut in_z = vec![false; self.g.n()];
        let mut stack: Vec<VertexId> = self.free_left();
        for &v in &stack {
            in_z[v] = true;
        }
        let adj = eligible.out_arcs(self.g.n());
        while let Some(v) = stack.pop() {
            for &ai in &adj[v] {
                let t = eligible.arcs[ai].to;
                if !in_z[t] {
                    in_z[t] = true;
                    stack.push(t);
                }
            }
        }
        in_z
    }

    /// Blocking augmentation: extract free-left -> free-right paths from
    /// the eligible graph, push the bottleneck, drop saturated arcs, and
    /// repeat until no augmenting path remains.
    fn augment_maximally(&mut self, eligible: &EligibleGraph) -> Result<(), SolverError> {
        let n = self.g.n();
        let one = rat_int(1);
        // residual per arc: headroom forward, current value backward
        let mut residual: Vec<Rat> = eligible
            .arcs
            .iter()
            .map(|a| {
                if a.forward {
                    self.kappa.get(a.edge) - self.x.get(a.edge)
                } else {
                    self.x.get(a.edge)
                }
            })
            .collect();
        let adj = eligible.out_arcs(n);
        let guard = 2 * eligible.arcs.len() + n + 2;
        for _ in 0..=guard {
            // DFS for a simple path from a free left vertex to a free
            // right vertex over arcs with positive residual.
            let mut parent_arc: Vec<Option<usize>> = vec![None; n];
            let mut visited = vec![false; n];
            let mut stack: Vec<VertexId> = Vec::new();
            for v in (0..n).rev() {
                if !self.side[v] && self.is_free(v) {
                    visited[v] = true;
                    stack.push(v);
                }
            }
            let mut target: Option<VertexId> = None;
            'search: while let Some(v) = stack.pop() {
                if self.side[v] && self.is_free(v) {
                    target = Some(v);
                    break 'search;
                }
                for &ai in &adj[v] {
                    let t = eligible.arcs[ai].to;
                    if !visited[t] && residual[ai].is_positive() {
                        visited[t] = true;
                        parent_arc[t] = Some(ai);
                        stack.push(t);
                    }
                }
            }
            let Some(end) = target else {
                return Ok(());
            };
            // Walk back to the start, collecting arcs.
            let mut path = Vec::new();
            let mut cur = end;
            while let Some(ai) = parent_arc[cur] {
                path.push(ai);
                cur = eligible.arcs[ai].from;
            }
            let start = cur;
            let mut delta = (&one - &self.mass[start]).min(&one - &self.mass[end]);
            for &ai in &path {
                delta = delta.min(residual[ai].clone());
            }
            if !delta.is_positive() {
                return Err(self.violation("positive_augmentation"));
            }
            for &ai in &path {
                let arc = eligible.arcs[ai];
                residual[ai] -= &delta;
                let cur = self.x.get(arc.edge);
                let next = if arc.forward { cur + &delta } else { cur - &delta };
                self.x.set(arc.edge, next);
            }
            self.mass[start] += &delta;
            self.mass[end] += &delta;
        }
        Err(self.violation("augmentation_terminates"))
    }

    /// All five solver invariants plus the structural eligible-graph
    /// checks; called after every iteration.
    pub fn check_invariants(&self) -> Result<InvariantFlags, SolverError> {
        let eps = &self.eps;
        let one = rat_int(1);
        let mut flags = InvariantFlags {
            granularity: true,
            domination: true,
            tightness: true,
            free_duals: true,
            complementary_slackness: true,
            eligible_exclusive: true,
            eligible_acyclic: true,
            no_augmenting_path: true,
            feasible: true,
        };
        for v in 0..self.g.n() {
            if !(self.y[v].is_zero() || is_multiple_of(&self.y[v], eps)) {
                flags.granularity = false;
            }
        }
        for z in self.z.values() {
            if !(z.is_zero() || is_multiple_of(z, eps)) {
                flags.granularity = false;
            }
        }
        for e in self.g.alive_edges() {
            let w = rat_int(self.g.weight(e) as i64);
            let yz = self.yz(e);
            let xe = self.x.get(e);
            let ke = self.kappa.get(e);
            if xe.is_negative() || xe > *ke {
                flags.feasible = false;
            }
            let forward_resident = *ke > xe;
            let backward_resident = xe.is_positive();
            if (forward_resident || backward_resident) && yz < &w - eps {
                flags.domination = false;
            }
            if backward_resident && yz > &w + eps {
                flags.tightness = false;
            }
            if self.z_of(e).is_positive() && xe != *ke {
                flags.complementary_slackness = false;
            }
        }
        let mut free_left_duals: Vec<&Rat> = Vec::new();
        let mut other_left_min: Option<&Rat> = None;
        for v in 0..self.g.n() {
            if self.mass[v] > one {
                flags.feasible = false;
            }
            if self.side[v] {
                if self.is_free(v) && !self.y[v].is_zero() {
                    flags.free_duals = false;
                }
            } else if self.is_free(v) {
                free_left_duals.push(&self.y[v]);
            } else {
                other_left_min = Some(match other_left_min {
                    Some(m) if m <= &self.y[v] => m,
                    _ => &self.y[v],
                });
            }
        }
        if let Some(first) = free_left_duals.first() {
            if !free_left_duals.iter().all(|d| d == first) {
                flags.free_duals = false;
            }
            if let Some(m) = other_left_min {
                if *first > m {
                    flags.free_duals = false;
                }
            }
        }
        // no_augmenting_path is a post-augmentation property and is
        // checked inside `step`; after the dual adjustment the frontier
        // legitimately opens new paths for the next iteration.
        match self.eligible() {
            Ok(eligible) => {
                if !eligible.is_acyclic(self.g.n()) {
                    flags.eligible_acyclic = false;
                }
            }
            Err(_) => flags.eligible_exclusive = false,
        }
        if !flags.all() {
            // surface the first failing flag by name
            let name = if !flags.granularity {
                "granularity"
            } else if !flags.domination {
                "domination"
            } else if !flags.tightness {
                "tightness"
            } else if !flags.free_duals {
                "free_duals"
            } else if !flags.complementary_slackness {
                "complementary_slackness"
            } else if !flags.eligible_exclusive {
                "eligible_exclusive"
            } else if !flags.eligible_acyclic {
                "eligible_acyclic"
            } else if !flags.no_augmenting_path {
                "no_augmenting_path"
            } else {
                "feasible"
            };
            return Err(self.violation(name));
        }
        Ok(flags)
    }

    pub fn into_solution(self) -> FracSolution {
        let value = self.x.weighted_value(self.g);
        FracSolution {
            x: self.x,
            y: self.y,
            z: self.z,
            value,
            iterations: self.iteration,
            trace: self.trace,
        }
    }
}

/// Runs the solver to termination. The iteration count is bounded by
/// W/eps + 1; the free left duals drop by eps every iteration.
pub fn weighted_frac_match(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    eps: &Rat,
) -> Result<FracSolution, SolverError> {
    let mut state = SolverState::new(g, kappa, eps)?;
    let bound = {
        let k = eps_denominator(eps).ok_or(SolverError::BadEpsilon)? as usize;
        g.max_weight() as usize * k + 1
    };
    let mut steps = 0usize;
    while state.active() {
        state.step()?;
        steps += 1;
        if steps > bound {
            return Err(state.violation("iteration_bound"));
        }
    }
    // Invariants hold at termination too (vacuous when zero iterations).
    state.check_invariants()?;
    Ok(state.into_solution())
}

/// General-graph solve through the bipartite double cover. Requires every
/// weight-class group to satisfy kappa(D_i(u,v)) <= `group_cap`; the
/// returned x obeys kappa and its (1+eps)-scaled form satisfies the odd
/// set constraints whenever the per-pair capacity totals stay below eps.
pub fn weighted_frac_match_general(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    eps: &Rat,
    group_cap: &Rat,
) -> Result<FracSolution, SolverError> {
    for (key, members) in g.groups() {
        let total = kappa.group_capacity(&members);
        if total > *group_cap {
            return Err(SolverError::GroupCapacityTooLarge(key));
        }
    }
    let cover = double_cover(g, kappa);
    let inner = weighted_frac_match(&cover.graph, &cover.kappa, eps)?;
    let mut x = FractionalMatching::new();
    for e in g.alive_edges() {
        let (e1, e2) = cover.twins(e);
        let avg = (inner.x.get(e1) + inner.x.get(e2)) / rat_int(2);
        x.set(e, avg);
    }
    let value = x.weighted_value(g);
    Ok(FracSolution {
        x,
        y: inner.y,
        z: inner.z,
        value,
        iterations: inner.iterations,
        trace: inner.trace,
    })
}

/// Standalone blocking augmentation over caller-supplied duals: builds
/// the eligible graph, asserts acyclicity, then pushes paths until none
/// remain; returns the updated matching.
pub fn maximal_augmenting_paths(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    eps: &Rat,
    x: FractionalMatching,
    y: Vec<Rat>,
    z: BTreeMap<EdgeId, Rat>,
) -> Result<FractionalMatching, SolverError> {
    let mut state = SolverState::new(g, kappa, eps)?;
    state.x = x;
    state.y = y;
    state.z = z;
    state.mass = (0..g.n())
        .map(|v| state.x.vertex_mass(g, v))
        .collect();
    let eligible = state.eligible()?;
    if !eligible.is_acyclic(g.n()) {
        return Err(state.violation("eligible_acyclic"));
    }
    state.augment_maximally(&eligible)?;
    let eligible = state.eligible()?;
    let in_z = state.reachable_from_free_left(&eligible);
    for (v, &reachable) in in_z.iter().enumerate() {
        if reachable && state.side[v] && state.is_free(v) {
            return Err(state.violation("no_augmenting_path"));
        }
    }
    Ok(state.x)
}

/// Vertices not saturated by x.
pub fn free_vertices(g: &WeightedMultigraph, x: &FractionalMatching) -> Vec<VertexId> {
    let verts = support_vertices(g, x);
    (0..g.n())
        .filter(|&v| !verts.contains(&v) || x.vertex_mass(g, v) < rat_int(1))
        .collect()
}
