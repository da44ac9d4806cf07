//! Full pipeline: vertex reduction into parallel engines, the cur
//! pointer, restarts, and the small-matching fallback as the graph
//! shrinks — verified against the exact optimum after every deletion.
//!
//!     cargo run --example orchestrate_run

use decmatch::graph::{matching_weight, WeightedMultigraph};
use decmatch::oracle::exact_mwm;
use decmatch::rational::{rat, rat_int};
use decmatch::reduction::{Orchestrator, OrchestratorConfig};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let n = 10;
    let mut g = WeightedMultigraph::new(n, 3);
    for _ in 0..18 {
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n);
        while v == u {
            v = rng.gen_range(0..n);
        }
        g.add_edge(u, v, rng.gen_range(1..=3)).unwrap();
    }
    let mut order: Vec<usize> = g.alive_edges().collect();
    order.shuffle(&mut rng);

    let cfg = OrchestratorConfig {
        eps: rat(1, 40),
        lambda: 6,
        tau_override: None,
        small_threshold: 4,
        alpha: rat_int(40),
        rho: rat_int(8),
        theta: rat(1, 40),
        seed: 99,
    };
    let mut orch = Orchestrator::new(g, cfg).unwrap();
    println!(
        "initial: mu = {}, weight = {}, small mode = {}",
        orch.mu(),
        orch.current_weight(),
        orch.is_small_mode()
    );
    for e in order {
        let m = orch.delete(e).unwrap();
        let w = matching_weight(orch.graph(), &m);
        let opt = exact_mwm(orch.graph()).unwrap().value;
        println!(
            "deleted {e:>2}: weight {w:>2} / optimum {opt:>2}  (restarts {}, small {})",
            orch.restarts(),
            orch.is_small_mode()
        );
    }
    println!("events:");
    for ev in &orch.events {
        println!("  {}", serde_json::to_string(ev).unwrap());
    }
}
