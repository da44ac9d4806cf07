//! One congestion-balancing round: sample the graph by capacity, run the
//! static matcher on the sample, and either assemble a near-optimal
//! fractional matching (heavy branch) or extract the bottleneck edge set
//! E* from the under-covered edges (light branch).

use crate::frac::{self, SolverError};
use crate::graph::{
    collapse, distribute, support_vertices, CapacityFn, CollapsedMatching, EdgeId,
    FractionalMatching, WeightedMultigraph,
};
use crate::rational::{rat_int, rat_zero, Rat};
use crate::stat::{self, CertifiedMatching};
use num::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CongestionError {
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Knobs of one WeightedM-or-E* call. `alpha` and `rho` stand in for the
/// astronomically large analysis constants; the structural invariants stay exact at any
/// setting while the probabilistic coverage becomes a measured quantity.
#[derive(Debug, Clone)]
pub struct CongestionConfig {
    pub eps: Rat,
    pub alpha: Rat,
    pub rho: Rat,
    pub seed: u64,
}

impl CongestionConfig {
    pub fn desk_defaults(seed: u64) -> Self {
        CongestionConfig {
            eps: crate::rational::rat(1, 5),
            alpha: rat_int(8),
            rho: rat_int(8),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), CongestionError> {
        if crate::rational::eps_denominator(&self.eps).is_none() {
            return Err(CongestionError::BadConfig("eps must be 1/k".into()));
        }
        let min_alpha = rat_int(2).max(rat_int(1) / &self.eps);
        if self.alpha < min_alpha {
            return Err(CongestionError::BadConfig(format!(
                "alpha must be at least max(2, 1/eps) = {min_alpha}"
            )));
        }
        if self.rho <= rat_int(1) {
            return Err(CongestionError::BadConfig("rho must exceed 1".into()));
        }
        Ok(())
    }
}

/// Heavy-branch output: the assembled fractional matching together with
/// its two vertex-disjoint regimes.
#[derive(Debug, Clone)]
pub struct MOrEMatching {
    /// Full matching x = integral part + fractional part.
    pub x: FractionalMatching,
    /// Groups with mass exactly 1 (distributed static-matching edges).
    pub integral_part: FractionalMatching,
    /// Low-capacity groups filled by the fractional solver.
    pub fractional_part: FractionalMatching,
    /// Weight of the static matching on the sampled graph.
    pub sampled_weight: u64,
    pub value: Rat,
}

/// Light-branch output: the bottleneck set with its capacitated weight.
#[derive(Debug, Clone)]
pub struct BottleneckSet {
    pub edges: BTreeSet<EdgeId>,
    /// w(kappa(E*)) = sum of w(e) kappa(e), the budget the analysis tracks.
    pub capacitated_weight: Rat,
    pub sampled_weight: u64,
    /// The sampled edge set G_s that produced the certificate.
    pub sampled: BTreeSet<EdgeId>,
}

#[derive(Debug, Clone)]
pub enum MOrEOutcome {
    Matching(MOrEMatching),
    Bottleneck(BottleneckSet),
}

/// Includes each alive edge independently with p(e) = min(1, kappa(e) rho).
pub fn sample_graph(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    rho: &Rat,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<EdgeId> {
    let mut sampled = BTreeSet::new();
    for e in g.alive_edges() {
        let p = kappa.get(e) * rho;
        if p >= rat_int(1) || bernoulli(rng, &p) {
            sampled.insert(e);
        }
    }
    sampled
}

/// Exact Bernoulli(p) for rational p in [0, 1): draws settle the
/// comparison digit by digit in base 2^32.
fn bernoulli(rng: &mut ChaCha8Rng, p: &Rat) -> bool {
    if !p.is_positive() {
        return false;
    }
    // compare a uniform real in [0,1) against p via its binary expansion
    let mut num = p.numer().clone();
    let den = p.denom().clone();
    for _ in 0..8 {
        // extract next 32 bits of p and of the uniform draw
        num <<= 32;
        let digit: num::BigInt = &num / &den;
        num -= &digit * &den;
        let p_digit = digit
            .to_string()
            .parse::<u64>()
            .expect("digit below 2^32") as u32;
        let u_digit = rng.gen::<u32>();
        if u_digit < p_digit {
            return true;
        }
        if u_digit > p_digit {
            return false;
        }
    }
    // 256 bits of agreement: call it equal
    false
}

/// E_L and the boosted capacities kappa+: edges whose weight-class group
/// capacity is at most 1/alpha^2, with kappa+(e) = kappa(e) alpha on them.
pub fn low_capacity_edges(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    alpha: &Rat,
) -> (BTreeSet<EdgeId>, CapacityFn) {
    let threshold = rat_int(1) / (alpha * alpha);
    let mut low = BTreeSet::new();
    let mut boosted = CapacityFn::new();
    for (_key, members) in g.groups() {
        let total = kappa.group_capacity(&members);
        if total <= threshold {
            for e in members {
                low.insert(e);
                let k = (kappa.get(e) * alpha).min(rat_int(1));
                boosted.set(e, k).expect("boosted capacity in range");
            }
        }
    }
    (low, boosted)
}

/// The under-covered alive edges of `g` with respect to duals computed on
/// the sampled subgraph: E* = { e : yr(e) < (1-eps) w(e) }.
pub fn extract_estar(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    cert: &CertifiedMatching,
    eps: &Rat,
) -> BottleneckSet {
    let one_minus = rat_int(1) - eps;
    let mut edges = BTreeSet::new();
    let mut budget = rat_zero();
    for e in g.alive_edges() {
        let (u, v) = g.endpoints(e);
        let yr = cert.duals.cover(u, v);
        if yr < &one_minus * rat_int(g.weight(e) as i64) {
            edges.insert(e);
            budget += kappa.get(e) * rat_int(g.weight(e) as i64);
        }
    }
    BottleneckSet {
        edges,
        capacitated_weight: budget,
        sampled_weight: 0,
        sampled: BTreeSet::new(),
    }
}

/// One full WeightedM-or-E* call. `mu` is the caller's lower estimate of
/// mwm; the heavy/light test compares the sampled static matching against
/// (1-6 eps) mu.
pub fn weighted_m_or_estar(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    mu: &Rat,
    cfg: &CongestionConfig,
    rng: &mut ChaCha8Rng,
) -> Result<MOrEOutcome, CongestionError> {
    cfg.validate()?;
    let eps = &cfg.eps;

    // Phase 1: sample by capacity and match statically.
    let sampled = sample_graph(g, kappa, &cfg.rho, rng);
    let gs = g.restrict(&sampled);
    let cert = stat::static_weighted_match(&gs, eps, false);
    let sampled_weight = crate::graph::matching_weight(&gs, &cert.matching);

    let threshold = (rat_int(1) - rat_int(6) * eps) * mu;
    if rat_int(sampled_weight as i64) <= threshold {
        // Phase 3: bottleneck extraction from the under-covered edges.
        let mut bottleneck = extract_estar(g, kappa, &cert, eps);
        bottleneck.sampled_weight = sampled_weight;
        bottleneck.sampled = sampled;
        return Ok(MOrEOutcome::Bottleneck(bottleneck));
    }

    // Phase 2: keep the high-capacity matched edges integrally, solve the
    // low-capacity remainder fractionally under boosted capacities.
    let (low, boosted) = low_capacity_edges(g, kappa, &cfg.alpha);
    let m_high: Vec<EdgeId> = cert
        .matching
        .iter()
        .copied()
        .filter(|e| !low.contains(e))
        .collect();
    let m_low: Vec<EdgeId> = cert
        .matching
        .iter()
        .copied()
        .filter(|e| low.contains(e))
        .collect();

    // Distribute each matched high-capacity pair over its weight group.
    let mut collapsed = CollapsedMatching::new();
    for &e in &m_high {
        collapsed.set(g.group_of(e), rat_int(1));
    }
    let integral_part =
        distribute(g, &collapsed, kappa).expect("matched groups are alive");

    // Low-capacity side: induced subgraph on the endpoints of M cap E_L,
    // restricted to low-capacity edges.
    let v_low: BTreeSet<usize> = m_low
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.endpoints(e);
            [u, v]
        })
        .collect();
    let solver_edges: BTreeSet<EdgeId> = low
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            v_low.contains(&u) && v_low.contains(&v)
        })
        .collect();
    let sub = g.restrict(&solver_edges);
    let group_cap = rat_int(1) / &cfg.alpha;
    let fractional_part = if solver_edges.is_empty() {
        FractionalMatching::new()
    } else {
        frac::weighted_frac_match_general(&sub, &boosted, eps, &group_cap)?.x
    };

    debug_assert!(support_vertices(g, &integral_part)
        .is_disjoint(&support_vertices(g, &fractional_part)));

    let x = integral_part.merged_with(&fractional_part);
    let value = x.weighted_value(g);
    Ok(MOrEOutcome::Matching(MOrEMatching {
        x,
        integral_part,
        fractional_part,
        sampled_weight,
        value,
    }))
}

/// Structural checks on a heavy-branch outcome (per-group regimes,
/// vertex-disjoint parts, per-edge caps). Used by tests and verify mode.
pub fn check_matching_structure(
    g: &WeightedMultigraph,
    kappa: &CapacityFn,
    alpha: &Rat,
    out: &MOrEMatching,
) -> Result<(), String> {
    let collapsed_int = collapse(g, &out.integral_part);
    for (key, mass) in collapsed_int.iter() {
        if *mass != rat_int(1) {
            return Err(format!("integral group {key:?} has mass {mass}"));
        }
        let members = g.group(key.0, key.1, key.2);
        let total = kappa.group_capacity(&members);
        for e in members {
            let expected = kappa.get(e) / &total;
            if out.integral_part.get(e) != expected {
                return Err(format!("edge {e} not proportionally distributed"));
            }
        }
    }
    let collapsed_frac = collapse(g, &out.fractional_part);
    for (key, mass) in collapsed_frac.iter() {
        let members = g.group(key.0, key.1, key.2);
        let cap = kappa.group_capacity(&members) * alpha;
        if *mass > cap {
            return Err(format!("fractional group {key:?} above kappa(D) alpha"));
        }
    }
    for (e, v) in out.fractional_part.iter() {
        if *v > kappa.get(e) * alpha {
            return Err(format!("edge {e} above kappa alpha"));
        }
    }
    // per-edge global cap from the two regimes combined
    let alpha_sq = alpha * alpha;
    for (e, v) in out.x.iter() {
        if *v > kappa.get(e) * &alpha_sq {
            return Err(format!("edge {e} above kappa alpha^2"));
        }
    }
    let vi = support_vertices(g, &out.integral_part);
    let vf = support_vertices(g, &out.fractional_part);
    if !vi.is_disjoint(&vf) {
        return Err("integral and fractional supports share a vertex".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rational::rat;
    use crate::rng::subrng;
    use num::Zero;

    fn cfg(seed: u64) -> CongestionConfig {
        CongestionConfig::desk_defaults(seed)
    }

    #[test]
    fn sampling_probability_edges() {
        let mut g = WeightedMultigraph::new(2, 1);
        let e = g.add_edge(0, 1, 1).unwrap();
        // kappa rho >= 1: always sampled
        let kappa = CapacityFn::uniform(&g, &rat(1, 2));
        let mut rng = subrng(1, "s", 0);
        for _ in 0..10 {
            assert!(sample_graph(&g, &kappa, &rat_int(2), &mut rng).contains(&e));
        }
        // boundary p = 1 via kappa = 1/rho
        let kappa = CapacityFn::uniform(&g, &rat(1, 8));
        for _ in 0..10 {
            assert!(sample_graph(&g, &kappa, &rat_int(8), &mut rng).contains(&e));
        }
    }

    #[test]
    fn sampling_rate_monte_carlo() {
        // p = 1/4 over 10^4 trials: empirical rate within +-0.02
        let mut g = WeightedMultigraph::new(2, 1);
        let e = g.add_edge(0, 1, 1).unwrap();
        let kappa = CapacityFn::uniform(&g, &rat(1, 32));
        let rho = rat_int(8);
        let mut hits = 0u32;
        for trial in 0..10_000u64 {
            let mut rng = subrng(99, "rate", trial);
            if sample_graph(&g, &kappa, &rho, &mut rng).contains(&e) {
                hits += 1;
            }
        }
        let rate = hits as f64 / 10_000.0;
        assert!((rate - 0.25).abs() < 0.02, "rate {rate}");
    }

    #[test]
    fn low_capacity_partition() {
        let mut g = WeightedMultigraph::new(4, 2);
        let a = g.add_edge(0, 1, 1).unwrap(); // group capacity 1/128 <= 1/64
        let b = g.add_edge(2, 3, 1).unwrap(); // group capacity 1 > 1/64
        let mut kappa = CapacityFn::new();
        kappa.set(a, rat(1, 128)).unwrap();
        kappa.set(b, rat_int(1)).unwrap();
        let alpha = rat_int(8);
        let (low, boosted) = low_capacity_edges(&g, &kappa, &alpha);
        assert!(low.contains(&a));
        assert!(!low.contains(&b));
        assert_eq!(boosted.get(a), &rat(1, 16));
        // every alive edge classified exactly once by its group
        for e in g.alive_edges() {
            let members = g.group_of(e);
            let total = kappa.group_capacity(&g.group(members.0, members.1, members.2));
            assert_eq!(low.contains(&e), total <= rat(1, 64));
        }
    }

    #[test]
    fn full_capacities_take_heavy_branch() {
        let mut rng_build = subrng(5, "g", 0);
        for round in 0..10 {
            let n = 6 + (round % 5);
            let mut g = WeightedMultigraph::new(n, 4);
            for _ in 0..(2 * n) {
                let u = rng_build.gen_range(0..n);
                let mut v = rng_build.gen_range(0..n);
                while v == u {
                    v = rng_build.gen_range(0..n);
                }
                g.add_edge(u, v, rng_build.gen_range(1..=4)).unwrap();
            }
            let kappa = CapacityFn::uniform(&g, &rat_int(1));
            let opt = oracle::exact_mwm(&g).unwrap();
            let mu = rat_int(opt.value as i64);
            let c = cfg(round as u64);
            let mut rng = subrng(c.seed, "m_or_e", 0);
            match weighted_m_or_estar(&g, &kappa, &mu, &c, &mut rng).unwrap() {
                MOrEOutcome::Matching(m) => {
                    check_matching_structure(&g, &kappa, &c.alpha, &m).unwrap();
                    // kappa = 1 everywhere: G_s = G, exact static match
                    let bound = (rat_int(1) - &c.eps) * &mu;
                    assert!(m.value >= bound, "value {} below {}", m.value, bound);
                }
                MOrEOutcome::Bottleneck(_) => panic!("expected heavy branch"),
            }
        }
    }

    #[test]
    fn tiny_capacities_take_bottleneck_branch() {
        let mut g = WeightedMultigraph::new(8, 2);
        for i in 0..4 {
            g.add_edge(2 * i, 2 * i + 1, 2).unwrap();
        }
        // alpha^{-ceil(log_alpha n)} = 1/64 for alpha = 8, n = 8
        let kappa = CapacityFn::uniform(&g, &rat(1, 64));
        let mu = rat_int(8);
        let mut c = cfg(3);
        c.eps = rat(1, 8); // keeps the (1-6 eps) mu threshold positive
        // rho small relative to capacities: sampling nearly empty
        let mut rng = subrng(c.seed, "m_or_e", 0);
        match weighted_m_or_estar(&g, &kappa, &mu, &c, &mut rng).unwrap() {
            MOrEOutcome::Bottleneck(b) => {
                assert!(!b.edges.is_empty());
                for &e in &b.edges {
                    assert!(*kappa.get(e) < rat_int(1));
                }
            }
            MOrEOutcome::Matching(_) => panic!("expected bottleneck"),
        }
    }

    #[test]
    fn boosting_along_estar_flips_branch() {
        let mut g = WeightedMultigraph::new(8, 2);
        for i in 0..4 {
            g.add_edge(2 * i, 2 * i + 1, 2).unwrap();
        }
        let mut kappa = CapacityFn::uniform(&g, &rat(1, 64));
        let mu = rat_int(8);
        let mut c = cfg(11);
        c.eps = rat(1, 8);
        let max_rounds = 4 * g.alive_count(); // ceil(log_alpha n) per edge
        let mut flipped = false;
        for round in 0..max_rounds as u64 {
            let mut rng = subrng(c.seed, "m_or_e", round);
            match weighted_m_or_estar(&g, &kappa, &mu, &c, &mut rng).unwrap() {
                MOrEOutcome::Bottleneck(b) => {
                    assert!(!b.edges.is_empty(), "empty E* cannot make progress");
                    for &e in &b.edges {
                        kappa.boost(e, &c.alpha);
                    }
                }
                MOrEOutcome::Matching(m) => {
                    check_matching_structure(&g, &kappa, &c.alpha, &m).unwrap();
                    flipped = true;
                    break;
                }
            }
        }
        assert!(flipped, "capacity boosting must reach the matching branch");
    }

    #[test]
    fn estar_covers_uncovered_edges_only() {
        let mut g = WeightedMultigraph::new(4, 3);
        g.add_edge(0, 1, 3).unwrap();
        g.add_edge(2, 3, 3).unwrap();
        let kappa = CapacityFn::uniform(&g, &rat(1, 2));
        let eps = rat(1, 5);
        // certificate from the full graph covers everything: E* empty
        let cert = stat::static_weighted_match(&g, &eps, false);
        let b = extract_estar(&g, &kappa, &cert, &eps);
        assert!(b.edges.is_empty());
        assert!(b.capacitated_weight.is_zero());
        // zero duals: every edge lands in E*, budget = sum w kappa
        let empty = stat::static_weighted_match(
            &WeightedMultigraph::new(4, 3),
            &eps,
            false,
        );
        let b = extract_estar(&g, &kappa, &empty, &eps);
        assert_eq!(b.edges.len(), 2);
        assert_eq!(b.capacitated_weight, rat_int(3));
    }
}
