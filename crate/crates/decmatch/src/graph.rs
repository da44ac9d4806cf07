//! Weighted multigraph with tombstone deletions, per-edge capacities,
//! fractional matchings, collapse/distribute transforms, the bipartite
//! double cover and the feasibility checkers shared by every other module.

use crate::rational::{rat, rat_int, rat_zero, Rat};
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Key of a parallel-edge group: endpoints (normalized `u < v`) plus
/// weight class.
pub type GroupKey = (VertexId, VertexId, u64);

pub fn group_key(u: VertexId, v: VertexId, weight: u64) -> GroupKey {
    if u < v {
        (u, v, weight)
    } else {
        (v, u, weight)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("weight {weight} outside 1..={max}")]
    WeightOutOfRange { weight: u64, max: u64 },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {0} already deleted")]
    DoubleDelete(EdgeId),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("capacity for edge {0} must lie in (0, 1]")]
    BadCapacity(EdgeId),
    #[error("group {0:?} has zero capacity but positive collapsed mass")]
    ZeroGroupCapacity(GroupKey),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct EdgeRecord {
    u: VertexId,
    v: VertexId,
    weight: u64,
}

/// Multigraph with integer weights in `1..=W`. Edge ids are stable:
/// deletion is a tombstone, never a renumbering, so deletion logs replay.
#[derive(Debug, Clone)]
pub struct WeightedMultigraph {
    n: usize,
    max_weight: u64,
    edges: Vec<EdgeRecord>,
    alive: Vec<bool>,
    alive_count: usize,
}

impl WeightedMultigraph {
    pub fn new(n: usize, max_weight: u64) -> Self {
        assert!(max_weight >= 1, "W must be at least 1");
        WeightedMultigraph {
            n,
            max_weight,
            edges: Vec::new(),
            alive: Vec::new(),
            alive_count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    /// Total number of edges ever added (dead ones included).
    pub fn edge_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, weight: u64) -> Result<EdgeId, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v));
        }
        if weight == 0 || weight > self.max_weight {
            return Err(GraphError::WeightOutOfRange {
                weight,
                max: self.max_weight,
            });
        }
        let id = self.edges.len();
        self.edges.push(EdgeRecord { u, v, weight });
        self.alive.push(true);
        self.alive_count += 1;
        Ok(id)
    }

    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        if e >= self.edges.len() {
            return Err(GraphError::UnknownEdge(e));
        }
        if !self.alive[e] {
            return Err(GraphError::DoubleDelete(e));
        }
        self.alive[e] = false;
        self.alive_count -= 1;
        Ok(())
    }

    pub fn is_alive(&self, e: EdgeId) -> bool {
        e < self.alive.len() && self.alive[e]
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let r = &self.edges[e];
        (r.u, r.v)
    }

    pub fn weight(&self, e: EdgeId) -> u64 {
        self.edges[e].weight
    }

    pub fn group_of(&self, e: EdgeId) -> GroupKey {
        let r = &self.edges[e];
        group_key(r.u, r.v, r.weight)
    }

    /// Alive edges in id order.
    pub fn alive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).filter(move |&e| self.alive[e])
    }

    /// Alive members of D_i(u, v), in id order.
    pub fn group(&self, u: VertexId, v: VertexId, weight: u64) -> Vec<EdgeId> {
        let key = group_key(u, v, weight);
        self.alive_edges()
            .filter(|&e| self.group_of(e) == key)
            .collect()
    }

    /// All nonempty parallel-edge groups of the alive graph.
    pub fn groups(&self) -> BTreeMap<GroupKey, Vec<EdgeId>> {
        let mut out: BTreeMap<GroupKey, Vec<EdgeId>> = BTreeMap::new();
        for e in self.alive_edges() {
            out.entry(self.group_of(e)).or_default().push(e);
        }
        out
    }

    /// Alive edges incident to `v`, in id order.
    pub fn incident(&self, v: VertexId) -> Vec<EdgeId> {
        self.alive_edges()
            .filter(|&e| {
                let (a, b) = self.endpoints(e);
                a == v || b == v
            })
            .collect()
    }

    /// Restriction to the alive edges whose ids are in `keep`, preserving
    /// ids (edges outside `keep` appear dead in the copy).
    pub fn restrict(&self, keep: &BTreeSet<EdgeId>) -> WeightedMultigraph {
        let mut g = self.clone();
        for e in 0..g.edges.len() {
            if g.alive[e] && !keep.contains(&e) {
                g.alive[e] = false;
                g.alive_count -= 1;
            }
        }
        g
    }

    /// Text format: header `n m W`, then `m` lines `u v w`. Edge id equals
    /// line order. Dead edges are not representable; this encodes the alive
    /// graph of a fresh instance.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.n, self.alive_count, self.max_weight);
        for e in self.alive_edges() {
            let (u, v) = self.endpoints(e);
            let _ = writeln!(s, "{} {} {}", u, v, self.weight(e));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<WeightedMultigraph, GraphError> {
        let mut lines = text.lines().enumerate();
        let (first_no, first) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "empty file".into(),
        })?;
        let head: Vec<&str> = first.split_whitespace().collect();
        if head.len() != 3 {
            return Err(GraphError::Parse {
                line: first_no + 1,
                msg: "expected header `n m W`".into(),
            });
        }
        let parse = |s: &str, line: usize| -> Result<u64, GraphError> {
            s.parse::<u64>().map_err(|_| GraphError::Parse {
                line,
                msg: format!("bad integer `{s}`"),
            })
        };
        let n = parse(head[0], first_no + 1)? as usize;
        let m = parse(head[1], first_no + 1)? as usize;
        let w = parse(head[2], first_no + 1)?;
        let mut g = WeightedMultigraph::new(n, w);
        let mut count = 0usize;
        for (no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(GraphError::Parse {
                    line: no + 1,
                    msg: "expected `u v w`".into(),
                });
            }
            let u = parse(parts[0], no + 1)? as usize;
            let v = parse(parts[1], no + 1)? as usize;
            let wt = parse(parts[2], no + 1)?;
            g.add_edge(u, v, wt).map_err(|e| GraphError::Parse {
                line: no + 1,
                msg: e.to_string(),
            })?;
            count += 1;
        }
        if count != m {
            return Err(GraphError::Parse {
                line: count + 1,
                msg: format!("header promised {m} edges, found {count}"),
            });
        }
        Ok(g)
    }
}

/// Per-edge capacity in (0, 1].
#[derive(Debug, Clone, Default)]
pub struct CapacityFn {
    kappa: BTreeMap<EdgeId, Rat>,
}

impl CapacityFn {
    pub fn new() -> Self {
        CapacityFn::default()
    }

    /// Same capacity on every alive edge.
    pub fn uniform(g: &WeightedMultigraph, kappa: &Rat) -> Self {
        let mut c = CapacityFn::new();
        for e in g.alive_edges() {
            c.set(e, kappa.clone()).expect("uniform capacity in range");
        }
        c
    }

    pub fn set(&mut self, e: EdgeId, kappa: Rat) -> Result<(), GraphError> {
        if !kappa.is_positive() || kappa > rat_int(1) {
            return Err(GraphError::BadCapacity(e));
        }
        self.kappa.insert(e, kappa);
        Ok(())
    }

    pub fn get(&self, e: EdgeId) -> &Rat {
        self.kappa
            .get(&e)
            .unwrap_or_else(|| panic!("no capacity for edge {e}"))
    }

    pub fn try_get(&self, e: EdgeId) -> Option<&Rat> {
        self.kappa.get(&e)
    }

    /// Multiplies kappa(e) by `factor`, clamping at 1.
    pub fn boost(&mut self, e: EdgeId, factor: &Rat) {
        let cur = self.get(e).clone();
        let next = (&cur * factor).min(rat_int(1));
        self.kappa.insert(e, next);
    }

    /// kappa(D) for a set of edges.
    pub fn group_capacity(&self, edges: &[EdgeId]) -> Rat {
        edges.iter().map(|&e| self.get(e).clone()).sum()
    }
}

/// Nonnegative edge values; the support is exactly the positive entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FractionalMatching {
    x: BTreeMap<EdgeId, Rat>,
}

impl FractionalMatching {
    pub fn new() -> Self {
        FractionalMatching::default()
    }

    pub fn set(&mut self, e: EdgeId, value: Rat) {
        assert!(!value.is_negative(), "matching values are nonnegative");
        if value.is_zero() {
            self.x.remove(&e);
        } else {
            self.x.insert(e, value);
        }
    }

    pub fn get(&self, e: EdgeId) -> Rat {
        self.x.get(&e).cloned().unwrap_or_else(rat_zero)
    }

    pub fn remove(&mut self, e: EdgeId) -> Rat {
        self.x.remove(&e).unwrap_or_else(rat_zero)
    }

    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.x.keys().copied()
    }

    pub fn support_size(&self) -> usize {
        self.x.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &Rat)> {
        self.x.iter().map(|(&e, v)| (e, v))
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Sum of w(e) * x(e).
    pub fn weighted_value(&self, g: &WeightedMultigraph) -> Rat {
        self.x
            .iter()
            .map(|(&e, v)| rat_int(g.weight(e) as i64) * v)
            .sum()
    }

    /// Fractional degree of `v`.
    pub fn vertex_mass(&self, g: &WeightedMultigraph, v: VertexId) -> Rat {
        self.x
            .iter()
            .filter(|(&e, _)| {
                let (a, b) = g.endpoints(e);
                a == v || b == v
            })
            .map(|(_, val)| val.clone())
            .sum()
    }

    /// Pointwise sum; supports must not both assign the same edge unless
    /// the caller wants真 addition (used to merge vertex-disjoint parts).
    pub fn merged_with(&self, other: &FractionalMatching) -> FractionalMatching {
        let mut out = self.clone();
        for (e, v) in other.iter() {
            let cur = out.get(e);
            out.set(e, cur + v.clone());
        }
        out
    }

    /// Pointwise scaling by a nonnegative factor.
    pub fn scaled(&self, factor: &Rat) -> FractionalMatching {
        let mut out = FractionalMatching::new();
        for (e, v) in self.iter() {
            out.set(e, v * factor);
        }
        out
    }
}

/// Per-(pair, weight-class) aggregate of a multigraph fractional matching.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollapsedMatching {
    entries: BTreeMap<GroupKey, Rat>,
}

impl CollapsedMatching {
    pub fn new() -> Self {
        CollapsedMatching::default()
    }

    pub fn set(&mut self, key: GroupKey, value: Rat) {
        assert!(!value.is_negative());
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn get(&self, key: &GroupKey) -> Rat {
        self.entries.get(key).cloned().unwrap_or_else(rat_zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupKey, &Rat)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of i * xC_i(u, v).
    pub fn weighted_value(&self) -> Rat {
        self.entries
            .iter()
            .map(|(&(_, _, i), v)| rat_int(i as i64) * v)
            .sum()
    }

    pub fn vertex_mass(&self, v: VertexId) -> Rat {
        self.entries
            .iter()
            .filter(|(&(a, b, _), _)| a == v || b == v)
            .map(|(_, val)| val.clone())
            .sum()
    }

    /// Vertices touched by the support.
    pub fn support_vertices(&self) -> BTreeSet<VertexId> {
        let mut s = BTreeSet::new();
        for &(u, v, _) in self.entries.keys() {
            s.insert(u);
            s.insert(v);
        }
        s
    }
}

/// xC_i(u,v) = sum of x(e) over e in D_i(u,v).
pub fn collapse(g: &WeightedMultigraph, x: &FractionalMatching) -> CollapsedMatching {
    let mut out = CollapsedMatching::new();
    for (e, v) in x.iter() {
        let key = g.group_of(e);
        let cur = out.get(&key);
        out.set(key, cur + v.clone());
    }
    out
}

/// y^D(e) = y_i(u,v) * kappa(e) / kappa(D_i(u,v)).
///
/// Errors when a positive collapsed entry sits on a group with zero alive
/// capacity. Round trip with `collapse` is exact in rational arithmetic.
pub fn distribute(
    g: &WeightedMultigraph,
    y: &CollapsedMatching,
    kappa: &CapacityFn,
) -> Result<FractionalMatching, GraphError> {
    let mut out = FractionalMatching::new();
    for (&(u, v, i), mass) in y.iter() {
        let members = g.group(u, v, i);
        let total = kappa.group_capacity(&members);
        if total.is_zero() {
            return Err(GraphError::ZeroGroupCapacity((u, v, i)));
        }
        for e in members {
            out.set(e, mass * kappa.get(e) / &total);
        }
    }
    Ok(out)
}

/// Bipartite double cover: left copies are the original vertex ids,
/// right copies are shifted by n. Every source edge (u,v) yields the twin
/// cover edges (u, v+n) and (v, u+n) with the source weight and capacity.
#[derive(Debug, Clone)]
pub struct BipartiteDoubleCover {
    pub graph: WeightedMultigraph,
    pub kappa: CapacityFn,
    /// Cover edge id -> source edge id. Twins of source edge e are
    /// 2e and 2e+1 by construction.
    pub source_of: Vec<EdgeId>,
    pub source_n: usize,
}

impl BipartiteDoubleCover {
    pub fn twins(&self, source_edge: EdgeId) -> (EdgeId, EdgeId) {
        (2 * source_edge, 2 * source_edge + 1)
    }
}

pub fn double_cover(g: &WeightedMultigraph, kappa: &CapacityFn) -> BipartiteDoubleCover {
    let n = g.n();
    let mut cover = WeightedMultigraph::new(2 * n, g.max_weight());
    let mut ck = CapacityFn::new();
    let mut source_of = Vec::new();
    // Twin ids must stay aligned with source ids even after deletions, so
    // dead source edges are materialized then tombstoned.
    for e in 0..g.edge_bound() {
        let (u, v) = g.endpoints(e);
        let w = g.weight(e);
        let e1 = cover.add_edge(u, n + v, w).expect("cover edge");
        let e2 = cover.add_edge(v, n + u, w).expect("cover edge");
        source_of.push(e);
        source_of.push(e);
        if g.is_alive(e) {
            let k = kappa.get(e).clone();
            ck.set(e1, k.clone()).expect("capacity copies");
            ck.set(e2, k).expect("capacity copies");
        } else {
            cover.delete_edge(e1).expect("fresh edge");
            cover.delete_edge(e2).expect("fresh edge");
        }
    }
    BipartiteDoubleCover {
        graph: cover,
        kappa: ck,
        source_of,
        source_n: n,
    }
}

/// One violated constraint found by `check_fractional`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionalViolation {
    Vertex { v: VertexId, mass: Rat },
    Capacity { e: EdgeId, value: Rat, bound: Rat },
}

/// Checks vertex constraints and, when capacities are given, the per-edge
/// bound x(e) <= kappa(e) * slack. `slack` parameterizes the congestion
/// overshoot (alpha^2 in engine outputs, 1 for strict feasibility).
pub fn check_fractional(
    g: &WeightedMultigraph,
    x: &FractionalMatching,
    kappa: Option<(&CapacityFn, &Rat)>,
) -> Vec<FractionalViolation> {
    let mut out = Vec::new();
    let mut mass: BTreeMap<VertexId, Rat> = BTreeMap::new();
    for (e, v) in x.iter() {
        let (a, b) = g.endpoints(e);
        *mass.entry(a).or_insert_with(rat_zero) += v;
        *mass.entry(b).or_insert_with(rat_zero) += v;
        if let Some((k, slack)) = kappa {
            let bound = k.get(e) * slack;
            if *v > bound {
                out.push(FractionalViolation::Capacity {
                    e,
                    value: v.clone(),
                    bound,
                });
            }
        }
    }
    for (v, m) in mass {
        if m > rat_int(1) {
            out.push(FractionalViolation::Vertex { v, mass: m });
        }
    }
    out
}

/// Odd-set report from exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct OddSetReport {
    /// Size cap actually enumerated: min(1/eps, ODD_SET_DESK_CAP).
    pub size_cap: usize,
    /// Sets violating sum x(G[B]) <= (|B|-1)/2, with their mass.
    pub violations: Vec<(Vec<VertexId>, Rat)>,
}

impl OddSetReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exponential enumeration is capped at this set size at desk scale.
pub const ODD_SET_DESK_CAP: usize = 9;

/// Enumerates every odd set B with 3 <= |B| <= min(1/eps, 9) over the
/// vertices carrying x-mass and reports violations of
/// sum_{e in G[B]} x(e) <= (|B|-1)/2.
pub fn check_small_odd_sets(
    g: &WeightedMultigraph,
    x: &FractionalMatching,
    eps: &Rat,
) -> OddSetReport {
    assert!(eps.is_positive() && *eps < rat(1, 2), "eps in (0, 1/2)");
    let inv_eps = (rat_int(1) / eps).floor().to_integer();
    let cap = usize::try_from(num::ToPrimitive::to_u64(&inv_eps).unwrap_or(u64::MAX))
        .unwrap_or(usize::MAX)
        .min(ODD_SET_DESK_CAP);

    // Pair flows restricted to the support keep the enumeration small.
    let mut pair_flow: BTreeMap<(VertexId, VertexId), Rat> = BTreeMap::new();
    let mut verts: BTreeSet<VertexId> = BTreeSet::new();
    for (e, v) in x.iter() {
        let (a, b) = g.endpoints(e);
        let key = if a < b { (a, b) } else { (b, a) };
        *pair_flow.entry(key).or_insert_with(rat_zero) += v;
        verts.insert(a);
        verts.insert(b);
    }
    let verts: Vec<VertexId> = verts.into_iter().collect();
    let mut violations = Vec::new();
    let mut subset: Vec<VertexId> = Vec::new();
    enumerate_odd_sets(&verts, 0, &mut subset, cap, &mut |set| {
        let mut total = rat_zero();
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                let key = if set[i] < set[j] {
                    (set[i], set[j])
                } else {
                    (set[j], set[i])
                };
                if let Some(f) = pair_flow.get(&key) {
                    total += f;
                }
            }
        }
        let bound = rat_int((set.len() as i64 - 1) / 2);
        if total > bound {
            violations.push((set.to_vec(), total));
        }
    });
    OddSetReport {
        size_cap: cap,
        violations,
    }
}

fn enumerate_odd_sets(
    verts: &[VertexId],
    start: usize,
    subset: &mut Vec<VertexId>,
    cap: usize,
    visit: &mut impl FnMut(&[VertexId]),
) {
    if subset.len() >= 3 && subset.len() % 2 == 1 {
        visit(subset);
    }
    if subset.len() == cap {
        return;
    }
    for i in start..verts.len() {
        subset.push(verts[i]);
        enumerate_odd_sets(verts, i + 1, subset, cap, visit);
        subset.pop();
    }
}

/// Splits x by group mass: groups with x(D_i) > 1/alpha^2 go to the
/// integral side, the rest to the fractional side.
pub fn split_integral_fractional(
    g: &WeightedMultigraph,
    x: &FractionalMatching,
    alpha: &Rat,
) -> (FractionalMatching, FractionalMatching) {
    let collapsed = collapse(g, x);
    let threshold = rat_int(1) / (alpha * alpha);
    let mut xi = FractionalMatching::new();
    let mut xf = FractionalMatching::new();
    for (e, v) in x.iter() {
        let mass = collapsed.get(&g.group_of(e));
        if mass > threshold {
            xi.set(e, v.clone());
        } else {
            xf.set(e, v.clone());
        }
    }
    (xi, xf)
}

/// Inserts an edge and registers its capacity in one step.
pub fn add_edge_with_capacity(
    g: &mut WeightedMultigraph,
    kappa: &mut CapacityFn,
    u: VertexId,
    v: VertexId,
    weight: u64,
    cap: Rat,
) -> Result<EdgeId, GraphError> {
    let e = g.add_edge(u, v, weight)?;
    kappa.set(e, cap)?;
    Ok(e)
}

/// Vertices touched by the support of x.
pub fn support_vertices(g: &WeightedMultigraph, x: &FractionalMatching) -> BTreeSet<VertexId> {
    let mut s = BTreeSet::new();
    for (e, _) in x.iter() {
        let (u, v) = g.endpoints(e);
        s.insert(u);
        s.insert(v);
    }
    s
}

/// True iff `edges` form an integral matching of alive edges.
pub fn is_matching(g: &WeightedMultigraph, edges: &[EdgeId]) -> bool {
    let mut used = BTreeSet::new();
    for &e in edges {
        if !g.is_alive(e) {
            return false;
        }
        let (u, v) = g.endpoints(e);
        if !used.insert(u) || !used.insert(v) {
            return false;
        }
    }
    true
}

pub fn matching_weight(g: &WeightedMultigraph, edges: &[EdgeId]) -> u64 {
    edges.iter().map(|&e| g.weight(e)).sum()
}

/// Greedy 2-coloring; `None` when an odd cycle exists.
pub fn bipartition(g: &WeightedMultigraph) -> Option<Vec<bool>> {
    let mut color: Vec<Option<bool>> = vec![None; g.n()];
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); g.n()];
    for e in g.alive_edges() {
        let (u, v) = g.endpoints(e);
        adj[u].push(v);
        adj[v].push(u);
    }
    for s in 0..g.n() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let cu = color[u].unwrap();
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        stack.push(v);
                    }
                    Some(cv) if cv == cu => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
}

/// Parses a deletion script: one edge id per line, blank lines skipped.
pub fn parse_deletions(text: &str) -> Result<Vec<EdgeId>, GraphError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let id = t.parse::<usize>().map_err(|_| GraphError::Parse {
            line: no + 1,
            msg: format!("bad edge id `{t}`"),
        })?;
        out.push(id);
    }
    Ok(out)
}
