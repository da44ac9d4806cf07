//! The decremental engine under an adversarial deletion schedule, with
//! the event log and the exact optimum printed at every step.
//!
//!     cargo run --example engine_deletions

use decmatch::engine::{EngineConfig, EngineState, EngineStatus};
use decmatch::graph::WeightedMultigraph;
use decmatch::oracle::exact_mwm;
use decmatch::rational::{rat, rat_int};

fn main() {
    let mut g = WeightedMultigraph::new(8, 3);
    let edges = [
        (0, 1, 3),
        (2, 3, 3),
        (4, 5, 3),
        (6, 7, 3),
        (1, 2, 1),
        (3, 4, 2),
        (5, 6, 1),
        (0, 7, 2),
    ];
    for (u, v, w) in edges {
        g.add_edge(u, v, w).unwrap();
    }
    let mu = rat_int(exact_mwm(&g).unwrap().value as i64);
    let cfg = EngineConfig {
        eps: rat(1, 40),
        alpha: rat_int(40),
        rho: rat_int(8),
        theta: rat(1, 40),
        seed: 7,
    };
    let (mut engine, status) = EngineState::new(g, mu.clone(), cfg).unwrap();
    println!("mu = {mu}, initial status {status:?}");
    println!(
        "initial matching weight = {}",
        engine.matching_weight()
    );

    // delete the heavy edges first
    for e in [0usize, 2, 1, 4, 5, 3, 6, 7] {
        match engine.delete(e) {
            Ok(EngineStatus::Active) => {
                let opt = exact_mwm(engine.graph()).unwrap().value;
                println!(
                    "deleted {e}: weight {} vs optimum {opt} (phase {})",
                    engine.matching_weight(),
                    engine.phase()
                );
            }
            Ok(EngineStatus::No) => {
                let opt = exact_mwm(engine.graph()).unwrap().value;
                println!("deleted {e}: engine says No (optimum now {opt})");
            }
            Err(err) => {
                println!("deleted {e}: {err}");
                break;
            }
        }
    }
    let instr = engine.instrumentation();
    println!("instrumentation: {}", serde_json::to_string(&instr).unwrap());
    for ev in &engine.events {
        println!("  event {}", serde_json::to_string(ev).unwrap());
    }
}
