//! Instance generation: every family the harness knows, written to a
//! temp directory in the graph/deletion text formats.
//!
//!     cargo run --example gen_instances

use decmatch::cli::{gen_instance, Family, InstanceSpec};
use decmatch::graph::WeightedMultigraph;
use decmatch::oracle::exact_mwm;

fn main() {
    let dir = std::env::temp_dir().join("decmatch-instances");
    std::fs::create_dir_all(&dir).unwrap();
    let families = [
        ("random_bipartite", Family::RandomBipartite),
        ("random_general", Family::RandomGeneral),
        ("disjoint_matching", Family::DisjointMatching),
        ("star", Family::Star),
        ("parallel_heavy", Family::ParallelHeavy),
    ];
    for (name, family) in families {
        let spec = InstanceSpec {
            family,
            n: 12,
            m: 20,
            w_max: 4,
        };
        let (graph_text, deletions) = gen_instance(&spec, 7).unwrap();
        let gpath = dir.join(format!("{name}.graph"));
        let dpath = dir.join(format!("{name}.dels"));
        std::fs::write(&gpath, &graph_text).unwrap();
        std::fs::write(&dpath, &deletions).unwrap();
        let g = WeightedMultigraph::from_text(&graph_text).unwrap();
        let opt = if g.n() <= 16 {
            exact_mwm(&g).unwrap().value.to_string()
        } else {
            "n/a".into()
        };
        println!(
            "{name:<18} n = {:>2}, m = {:>2}, mwm = {opt:>3}  -> {}",
            g.n(),
            g.alive_count(),
            gpath.display()
        );
    }
    println!("\nreplay e.g.:");
    println!(
        "  decmatch --mode verify --graph {}/random_general.graph --deletions {}/random_general.dels --epsilon 1/40 --alpha 40 --theta 1/40",
        dir.display(),
        dir.display()
    );
}
