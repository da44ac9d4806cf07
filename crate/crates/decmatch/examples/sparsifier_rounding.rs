//! The rounding sparsifier: value buckets, per-bucket edge coloring,
//! color sampling, updates, and the final rounding to an integral
//! matching.
//!
//!     cargo run --example sparsifier_rounding

use decmatch::graph::{CollapsedMatching, GroupKey, WeightedMultigraph};
use decmatch::rational::{rat, rat_display, Rat};
use decmatch::sparsify::{round_to_integral, Sparsifier, SparsifierUpdate};
use std::collections::BTreeMap;

fn main() {
    // a collapsed fractional matching with one entry per pair
    let mut g = WeightedMultigraph::new(10, 3);
    let mut entries: BTreeMap<GroupKey, Rat> = BTreeMap::new();
    for (u, v, w, num, den) in [
        (0usize, 1usize, 3u64, 1i64, 10i64),
        (1, 2, 2, 1, 12),
        (2, 3, 3, 1, 9),
        (4, 5, 1, 1, 20),
        (5, 6, 2, 1, 16),
        (6, 7, 3, 1, 11),
    ] {
        g.add_edge(u, v, w).unwrap();
        entries.insert((u, v, w), rat(num, den));
    }
    let eps = rat(1, 5);
    let theta = rat(1, 8);
    let mut s = Sparsifier::new(&entries, &eps, &theta, g.n(), g.max_weight(), 11).unwrap();
    println!("entries = {}, sample size 3*ceil(d) = {}", s.entry_count(), s.sample_size());
    println!("K at construction:");
    for (key, v) in s.current_k() {
        println!("  {key:?} -> {}", rat_display(&v));
    }

    // a removal and a decrease
    let changed = s.update(SparsifierUpdate::Remove((0, 1, 3))).unwrap();
    println!("removed (0,1,3): K changes {changed:?}");
    let changed = s
        .update(SparsifierUpdate::Decrease((2, 3, 3), rat(1, 40)))
        .unwrap();
    println!("decreased (2,3,3) to 1/40: K changes {changed:?}");
    println!("coloring proper = {}", s.coloring_is_proper());

    // round the surviving sparse subgraph together with an integral part
    // on vertex-disjoint support
    let mut zc = CollapsedMatching::new();
    g.add_edge(8, 9, 3).unwrap();
    zc.set((8, 9, 3), rat(1, 1));
    let m = round_to_integral(&g, &s.current_k(), &zc, &eps).unwrap();
    println!("rounded matching:");
    for e in m {
        let (u, v) = g.endpoints(e);
        println!("  edge {e} = ({u}, {v}) w = {}", g.weight(e));
    }
}
