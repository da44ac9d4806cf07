//! Vertex reduction: bin a graph into a small multigraph and measure how
//! often a fixed matching survives with most of its weight.
//!
//!     cargo run --example vertex_reduction

use decmatch::graph::WeightedMultigraph;
use decmatch::rational::{rat, rat_int};
use decmatch::reduction::{reduction_bins, vertex_red, vertex_red_basic};
use decmatch::rng::subrng;

fn main() {
    // a perfect matching of six weight-2 edges
    let mut g = WeightedMultigraph::new(12, 2);
    let mut matching = Vec::new();
    for i in 0..6 {
        matching.push(g.add_edge(2 * i, 2 * i + 1, 2).unwrap());
    }
    let eps = rat(1, 4);
    let tau = reduction_bins(&rat_int(12), g.max_weight(), &eps);
    println!("bins from the formula: tau = {tau}");

    let trials = 500u64;
    let mut kept_full = 0u32;
    for seed in 0..trials {
        let mut rng = subrng(seed, "demo", 0);
        let r = vertex_red_basic(&g, tau, &mut rng);
        // the matching survives whole iff all its endpoints got distinct bins
        let mut bins = std::collections::BTreeSet::new();
        let distinct = matching.iter().all(|&e| {
            let (u, v) = g.endpoints(e);
            bins.insert(r.bin_of[u]) && bins.insert(r.bin_of[v])
        });
        if distinct {
            kept_full += 1;
        }
    }
    println!(
        "matching survived intact in {kept_full}/{trials} draws ({:.1}%)",
        100.0 * kept_full as f64 / trials as f64
    );

    // lambda independent draws: a small multigraph per instance
    let hs = vertex_red(&g, &rat_int(12), &eps, 4, Some(24), 3, 0);
    for (i, h) in hs.iter().enumerate() {
        println!(
            "H_{i}: {} bins, {} cross edges",
            h.graph.n(),
            h.graph.alive_count()
        );
    }
}
