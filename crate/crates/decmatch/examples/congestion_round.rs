//! One congestion-balancing loop by hand: call WeightedM-or-E*, boost
//! capacities along every returned bottleneck set, and stop at the first
//! matching branch.
//!
//!     cargo run --example congestion_round

use decmatch::congestion::{weighted_m_or_estar, CongestionConfig, MOrEOutcome};
use decmatch::graph::{CapacityFn, WeightedMultigraph};
use decmatch::oracle::exact_mwm;
use decmatch::rational::{rat, rat_display, rat_int};
use decmatch::rng::subrng;

fn main() {
    let mut g = WeightedMultigraph::new(10, 3);
    for i in 0..5 {
        g.add_edge(2 * i, 2 * i + 1, 3).unwrap();
    }
    g.add_edge(0, 2, 1).unwrap();
    g.add_edge(4, 6, 2).unwrap();

    // engine-style initial capacities: alpha^{-ceil(log_alpha n)}
    let mut kappa = CapacityFn::uniform(&g, &rat(1, 64));
    let mu = rat_int(exact_mwm(&g).unwrap().value as i64);
    let cfg = CongestionConfig {
        eps: rat(1, 8),
        alpha: rat_int(8),
        rho: rat_int(8),
        seed: 2,
    };

    for round in 0.. {
        let mut rng = subrng(cfg.seed, "example", round);
        match weighted_m_or_estar(&g, &kappa, &mu, &cfg, &mut rng).unwrap() {
            MOrEOutcome::Bottleneck(b) => {
                println!(
                    "round {round}: bottleneck with {} edges, budget w(kappa(E*)) = {}",
                    b.edges.len(),
                    rat_display(&b.capacitated_weight)
                );
                for &e in &b.edges {
                    kappa.boost(e, &cfg.alpha);
                }
            }
            MOrEOutcome::Matching(m) => {
                println!(
                    "round {round}: matching branch, value {} (sampled static weight {})",
                    rat_display(&m.value),
                    m.sampled_weight
                );
                println!(
                    "  integral part: {} edges, fractional part: {} edges",
                    m.integral_part.support_size(),
                    m.fractional_part.support_size()
                );
                break;
            }
        }
    }
}
