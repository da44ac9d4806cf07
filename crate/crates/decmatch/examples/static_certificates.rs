//! Static weighted matching with dual certificates: optimal matching,
//! vertex duals, laminar blossom family, and the itemized verification.
//!
//!     cargo run --example static_certificates

use decmatch::graph::{matching_weight, WeightedMultigraph};
use decmatch::rational::{rat, rat_display};
use decmatch::stat::{static_weighted_match, verify_certificate};

fn main() {
    // a 9-cycle with a pendant: the odd cycle produces a blossom dual
    let mut g = WeightedMultigraph::new(10, 5);
    for i in 0..9 {
        g.add_edge(i, (i + 1) % 9, 4).unwrap();
    }
    g.add_edge(0, 9, 5).unwrap();

    let eps = rat(1, 4);
    let cert = static_weighted_match(&g, &eps, false);
    println!("matching weight = {}", matching_weight(&g, &cert.matching));
    println!("dual objective  = {}", rat_display(&cert.f));
    for (v, y) in cert.duals.y.iter().enumerate() {
        println!("  y({v}) = {}", rat_display(y));
    }
    for set in &cert.duals.omega {
        println!(
            "  blossom {:?} with r = {}",
            set.vertices,
            rat_display(&set.r)
        );
    }

    let report = verify_certificate(&g, &cert, &eps);
    println!("coverage ok      = {}", report.coverage_ok);
    println!("laminar ok       = {}", report.laminar_ok);
    println!("small sets ok    = {}", report.small_sets_ok);
    println!("approx ok        = {:?}", report.approx_ok);
    println!("dual bound ok    = {:?}", report.dual_bound_ok);
    assert!(report.all_ok());

    // grid mode rounds duals up to the eps lattice and reports inflation
    let grid = static_weighted_match(&g, &eps, true);
    println!(
        "grid mode: f = {} (inflation {})",
        rat_display(&grid.f),
        rat_display(&grid.f_inflation)
    );
}
