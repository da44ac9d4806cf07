//! Decremental fallback for graphs whose matching weight is small: a
//! vertex cover taken from one maximal matching anchors a core graph that
//! preserves mwm exactly, and the output matching is recomputed on the
//! core only when a matched edge dies.

use crate::graph::{matching_weight, EdgeId, GraphError, VertexId, WeightedMultigraph};
use crate::rational::Rat;
use crate::stat;
use num::Signed;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SmallMatchError {
    #[error("matching weight {got} exceeds the small-matching threshold {threshold}")]
    ThresholdExceeded { got: u64, threshold: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Core graph engine. The cover S is fixed at construction (deletions
/// never uncover an edge); per cover vertex a sorted list of cross edges
/// feeds replacements as kept edges die.
pub struct SmallEngine {
    graph: WeightedMultigraph,
    cover: BTreeSet<VertexId>,
    /// Cross-edge lists per cover vertex, heaviest first (ties by id);
    /// `heads` marks how many entries are currently kept in the core.
    cross: BTreeMap<VertexId, Vec<EdgeId>>,
    kept: BTreeSet<EdgeId>,
    matching: Vec<EdgeId>,
    eps: Rat,
}

impl SmallEngine {
    /// `threshold` caps the matching weight this engine accepts; larger
    /// instances belong to the congestion-balancing path.
    pub fn new(
        graph: WeightedMultigraph,
        eps: &Rat,
        threshold: u64,
    ) -> Result<SmallEngine, SmallMatchError> {
        assert!(eps.is_positive());
        // greedy maximal matching -> vertex cover from both endpoints
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        let mut cover: BTreeSet<VertexId> = BTreeSet::new();
        for e in graph.alive_edges() {
            let (u, v) = graph.endpoints(e);
            if !used.contains(&u) && !used.contains(&v) {
                used.insert(u);
                used.insert(v);
                cover.insert(u);
                cover.insert(v);
            }
        }
        let mut engine = SmallEngine {
            graph,
            cover,
            cross: BTreeMap::new(),
            kept: BTreeSet::new(),
            matching: Vec::new(),
            eps: eps.clone(),
        };
        engine.build_core();
        engine.recompute_matching();
        let got = matching_weight(&engine.graph, &engine.matching);
        if got > threshold {
            return Err(SmallMatchError::ThresholdExceeded { got, threshold });
        }
        Ok(engine)
    }

    fn build_core(&mut self) {
        let limit = self.cover.len() + 1;
        self.cross.clear();
        self.kept.clear();
        for &v in &self.cover.clone() {
            let mut edges: Vec<EdgeId> = self
                .graph
                .incident(v)
                .into_iter()
                .filter(|&e| {
                    let (a, b) = self.graph.endpoints(e);
                    let other = if a == v { b } else { a };
                    !self.cover.contains(&other)
                })
                .collect();
            edges.sort_by_key(|&e| (std::cmp::Reverse(self.graph.weight(e)), e));
            for &e in edges.iter().take(limit) {
                self.kept.insert(e);
            }
            self.cross.insert(v, edges);
        }
    }

    /// Core graph H = G[S] plus the kept cross edges.
    pub fn core_edges(&self) -> BTreeSet<EdgeId> {
        let mut core = self.kept.clone();
        for e in self.graph.alive_edges() {
            let (u, v) = self.graph.endpoints(e);
            if self.cover.contains(&u) && self.cover.contains(&v) {
                core.insert(e);
            }
        }
        core
    }

    pub fn core_graph(&self) -> WeightedMultigraph {
        self.graph.restrict(&self.core_edges())
    }

    pub fn graph(&self) -> &WeightedMultigraph {
        &self.graph
    }

    pub fn cover(&self) -> &BTreeSet<VertexId> {
        &self.cover
    }

    pub fn matching(&self) -> &[EdgeId] {
        &self.matching
    }

    pub fn matching_weight(&self) -> u64 {
        matching_weight(&self.graph, &self.matching)
    }

    fn recompute_matching(&mut self) {
        let core = self.core_graph();
        let cert = stat::static_weighted_match(&core, &self.eps, false);
        self.matching = cert.matching;
    }

    /// Deletion: non-core edges only shrink the sorted lists; a kept cross
    /// edge pulls the next-heaviest alive replacement; a matched edge
    /// forces a recompute on the core.
    pub fn delete(&mut self, e: EdgeId) -> Result<&[EdgeId], SmallMatchError> {
        if !self.graph.is_alive(e) {
            self.graph.delete_edge(e)?;
            unreachable!("delete_edge must fail on a dead edge");
        }
        let (u, v) = self.graph.endpoints(e);
        self.graph.delete_edge(e)?;
        let was_kept = self.kept.remove(&e);
        if was_kept {
            // pull the next-heaviest alive cross edge of the same cover
            // vertex into the core
            let anchor = if self.cover.contains(&u) { u } else { v };
            if let Some(list) = self.cross.get(&anchor) {
                let next = list
                    .iter()
                    .copied()
                    .find(|&c| self.graph.is_alive(c) && !self.kept.contains(&c));
                if let Some(c) = next {
                    self.kept.insert(c);
                }
            }
        }
        if let Some(pos) = self.matching.iter().position(|&m| m == e) {
            self.matching.remove(pos);
            self.recompute_matching();
        }
        Ok(&self.matching)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rational::rat;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge_core() {
        let mut g = WeightedMultigraph::new(2, 3);
        let e = g.add_edge(0, 1, 3).unwrap();
        let engine = SmallEngine::new(g, &rat(1, 4), 100).unwrap();
        assert_eq!(engine.cover().len(), 2);
        assert_eq!(engine.matching(), &[e]);
        assert_eq!(engine.core_edges().len(), 1);
    }

    #[test]
    fn star_keeps_top_cross_edges() {
        let mut g = WeightedMultigraph::new(6, 8);
        for (i, w) in [(1, 3), (2, 8), (3, 5), (4, 7), (5, 2)] {
            g.add_edge(0, i, w).unwrap();
        }
        let opt = oracle::exact_mwm(&g).unwrap();
        let engine = SmallEngine::new(g, &rat(1, 4), 100).unwrap();
        // cover = both endpoints of the first maximal-matching edge
        assert_eq!(engine.cover().len(), 2);
        // |S|+1 = 3 heaviest cross edges per cover vertex survive, and
        // the core preserves the optimum exactly
        let core_opt = oracle::exact_mwm(&engine.core_graph()).unwrap();
        assert_eq!(core_opt.value, opt.value);
    }

    #[test]
    fn threshold_guard() {
        let mut g = WeightedMultigraph::new(4, 8);
        g.add_edge(0, 1, 8).unwrap();
        g.add_edge(2, 3, 8).unwrap();
        assert!(matches!(
            SmallEngine::new(g, &rat(1, 4), 10),
            Err(SmallMatchError::ThresholdExceeded { got: 16, .. })
        ));
    }

    #[test]
    fn core_equality_under_scripted_deletions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for round in 0..8 {
            let n = 8 + (round % 6);
            let mut g = WeightedMultigraph::new(n, 4);
            for _ in 0..(3 * n) {
                let u = rng.gen_range(0..n);
                let mut v = rng.gen_range(0..n);
                while v == u {
                    v = rng.gen_range(0..n);
                }
                g.add_edge(u, v, rng.gen_range(1..=4)).unwrap();
            }
            let mut order: Vec<EdgeId> = g.alive_edges().collect();
            order.shuffle(&mut rng);
            let mut engine = SmallEngine::new(g, &rat(1, 4), 1_000).unwrap();
            for e in order {
                engine.delete(e).unwrap();
                let g_opt = oracle::exact_mwm(engine.graph()).unwrap();
                let h_opt = oracle::exact_mwm(&engine.core_graph()).unwrap();
                assert_eq!(g_opt.value, h_opt.value, "core graph lost optimum");
                // cover stays a cover: every alive edge touches S
                for e in engine.graph().alive_edges() {
                    let (u, v) = engine.graph().endpoints(e);
                    assert!(engine.cover().contains(&u) || engine.cover().contains(&v));
                }
                // output matching stays exact on the core
                assert_eq!(engine.matching_weight(), h_opt.value);
            }
        }
    }

    #[test]
    fn core_size_bound() {
        // |E(H)| <= |S|^2 + |S| (|S|+1)
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let n = 12;
            let mut g = WeightedMultigraph::new(n, 4);
            for _ in 0..40 {
                let u = rng.gen_range(0..n);
                let mut v = rng.gen_range(0..n);
                while v == u {
                    v = rng.gen_range(0..n);
                }
                g.add_edge(u, v, rng.gen_range(1..=4)).unwrap();
            }
            let engine = SmallEngine::new(g, &rat(1, 4), 10_000).unwrap();
            let s = engine.cover().len();
            assert!(engine.core_edges().len() <= s * s + s * (s + 1));
        }
    }

    #[test]
    fn non_core_deletion_keeps_core() {
        let mut g = WeightedMultigraph::new(8, 4);
        g.add_edge(0, 1, 4).unwrap();
        for i in 2..8 {
            g.add_edge(0, i, (i % 4) as u64 + 1).unwrap();
        }
        let mut engine = SmallEngine::new(g, &rat(1, 4), 100).unwrap();
        let core_before = engine.core_edges();
        // find an alive non-core edge, if any
        let spare = engine
            .graph()
            .alive_edges()
            .find(|e| !core_before.contains(e));
        if let Some(e) = spare {
            let m_before = engine.matching().to_vec();
            engine.delete(e).unwrap();
            assert_eq!(engine.core_edges(), core_before);
            assert_eq!(engine.matching(), &m_before[..]);
        }
    }
}
