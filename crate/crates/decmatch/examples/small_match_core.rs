//! Core-graph fallback for small matchings: the cover-anchored subgraph
//! preserves the optimum exactly through a full deletion schedule.
//!
//!     cargo run --example small_match_core

use decmatch::graph::WeightedMultigraph;
use decmatch::oracle::exact_mwm;
use decmatch::rational::rat;
use decmatch::small::SmallEngine;

fn main() {
    let mut g = WeightedMultigraph::new(9, 4);
    for (u, v, w) in [
        (0, 1, 4),
        (0, 2, 3),
        (0, 3, 2),
        (0, 4, 1),
        (1, 5, 2),
        (1, 6, 4),
        (2, 7, 1),
        (2, 8, 3),
        (3, 4, 2),
        (5, 6, 1),
    ] {
        g.add_edge(u, v, w).unwrap();
    }
    let order: Vec<usize> = g.alive_edges().collect();
    let mut engine = SmallEngine::new(g, &rat(1, 4), 100).unwrap();
    println!("cover S = {:?}", engine.cover());
    println!(
        "core edges = {:?} (|E(H)| bound: |S|^2 + |S|(|S|+1))",
        engine.core_edges()
    );
    for e in order {
        engine.delete(e).unwrap();
        let g_opt = exact_mwm(engine.graph()).unwrap().value;
        let h_opt = exact_mwm(&engine.core_graph()).unwrap().value;
        println!(
            "deleted {e}: mwm(G) = {g_opt}, mwm(core) = {h_opt}, output = {}",
            engine.matching_weight()
        );
        assert_eq!(g_opt, h_opt);
    }
}
