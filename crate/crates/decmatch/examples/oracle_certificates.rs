//! The desk-scale oracles: exact integral matching by enumeration and the
//! exact capacitated bipartite LP with a zero-gap dual certificate.
//!
//!     cargo run --example oracle_certificates

use decmatch::graph::{CapacityFn, WeightedMultigraph};
use decmatch::oracle::{exact_bipartite_frac_opt, exact_mwm};
use decmatch::rational::{rat, rat_display};

fn main() {
    // integral side: a blossom-shaped general graph
    let mut g = WeightedMultigraph::new(5, 9);
    for (u, v, w) in [(0, 1, 8), (0, 2, 9), (1, 2, 9), (2, 3, 7), (3, 4, 6)] {
        g.add_edge(u, v, w).unwrap();
    }
    let opt = exact_mwm(&g).unwrap();
    println!("exact mwm = {} via edges {:?}", opt.value, opt.matching);

    // fractional side: capacitated bipartite LP with duals
    let mut b = WeightedMultigraph::new(6, 4);
    let mut kappa = CapacityFn::new();
    for (u, v, w, num, den) in [
        (0, 3, 4, 1, 3),
        (0, 4, 2, 1, 2),
        (1, 3, 3, 2, 3),
        (1, 5, 1, 1, 1),
        (2, 4, 4, 1, 4),
    ] {
        let e = b.add_edge(u, v, w).unwrap();
        kappa.set(e, rat(num, den)).unwrap();
    }
    let lp = exact_bipartite_frac_opt(&b, &kappa).unwrap();
    println!("LP optimum = {}", rat_display(&lp.value));
    for (e, x) in lp.x.iter() {
        let (u, v) = b.endpoints(e);
        println!("  x[{u}-{v}] = {}", rat_display(x));
    }
    for (v, y) in lp.duals.y.iter().enumerate() {
        println!("  y({v}) = {}", rat_display(y));
    }
    for (e, z) in &lp.duals.z {
        println!("  z({e}) = {}", rat_display(z));
    }
    let dual_obj = lp.duals.objective(&kappa);
    println!(
        "dual objective = {} (gap = {})",
        rat_display(&dual_obj),
        rat_display(&(&dual_obj - &lp.value))
    );
    assert_eq!(dual_obj, lp.value);
}
