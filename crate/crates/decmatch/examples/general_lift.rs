//! Fractional matching on a general (non-bipartite) multigraph through
//! the bipartite double cover, with the odd-set feasibility check.
//!
//!     cargo run --example general_lift

use decmatch::frac::weighted_frac_match_general;
use decmatch::graph::{check_small_odd_sets, CapacityFn, WeightedMultigraph};
use decmatch::rational::{rat, rat_display, rat_int};

fn main() {
    // two triangles joined by a bridge: odd cycles force the cover lift
    let mut g = WeightedMultigraph::new(6, 3);
    for (u, v, w) in [
        (0, 1, 3),
        (1, 2, 3),
        (0, 2, 3),
        (2, 3, 1),
        (3, 4, 2),
        (4, 5, 2),
        (3, 5, 2),
    ] {
        g.add_edge(u, v, w).unwrap();
    }
    let kappa = CapacityFn::uniform(&g, &rat(1, 16));

    let eps = rat(1, 8);
    let group_cap = rat(1, 8);
    let sol = weighted_frac_match_general(&g, &kappa, &eps, &group_cap).unwrap();
    println!("value = {}", rat_display(&sol.value));
    for (e, x) in sol.x.iter() {
        let (u, v) = g.endpoints(e);
        println!("  x[{u}-{v}] = {}", rat_display(x));
    }

    // x obeys kappa; x / (1 + eps) satisfies every small odd set
    let scaled = sol.x.scaled(&(rat_int(1) / (rat_int(1) + &eps)));
    let report = check_small_odd_sets(&g, &scaled, &eps);
    println!(
        "odd sets up to size {}: {}",
        report.size_cap,
        if report.ok() { "all satisfied" } else { "violated" }
    );
    assert!(report.ok());
}
