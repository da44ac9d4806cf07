//! Capacitated fractional matching on a bipartite multigraph: solve,
//! print the per-iteration trace, and compare against the exact LP.
//!
//!     cargo run --example frac_solve

use decmatch::frac::weighted_frac_match;
use decmatch::graph::{CapacityFn, WeightedMultigraph};
use decmatch::oracle::exact_bipartite_frac_opt;
use decmatch::rational::{rat, rat_display};

fn main() {
    // left vertices 0..3, right vertices 3..6
    let mut g = WeightedMultigraph::new(6, 4);
    let mut kappa = CapacityFn::new();
    for (u, v, w, num, den) in [
        (0, 3, 4, 1, 2),
        (0, 4, 2, 3, 4),
        (1, 3, 3, 1, 4),
        (1, 5, 1, 1, 1),
        (2, 4, 4, 1, 8),
        (2, 5, 2, 1, 2),
        (0, 3, 2, 1, 8), // parallel to the first pair, lighter
    ] {
        let e = g.add_edge(u, v, w).unwrap();
        kappa.set(e, rat(num, den)).unwrap();
    }

    let eps = rat(1, 8);
    let sol = weighted_frac_match(&g, &kappa, &eps).unwrap();
    println!("value  = {}", rat_display(&sol.value));
    println!("iters  = {}", sol.iterations);
    for rec in &sol.trace {
        println!(
            "  iter {:>2}: free dual {:>5}, support {:>2}, invariants ok = {}",
            rec.iteration,
            rec.free_left_dual,
            rec.support_size,
            rec.invariants.all()
        );
    }
    for (e, x) in sol.x.iter() {
        let (u, v) = g.endpoints(e);
        println!(
            "  x[{u}-{v} w={}] = {} (kappa {})",
            g.weight(e),
            rat_display(x),
            rat_display(kappa.get(e))
        );
    }

    let opt = exact_bipartite_frac_opt(&g, &kappa).unwrap();
    println!("exact LP optimum = {}", rat_display(&opt.value));
    let ratio = &sol.value / &opt.value;
    println!("ratio = {} (guarantee: >= 1 - 5 eps)", rat_display(&ratio));
    assert!(sol.value >= (rat(3, 8)) * &opt.value);
}
