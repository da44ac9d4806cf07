//! Rounding sparsifier for the collapsed fractional matching: bucket the
//! entries by value, keep a proper edge coloring per bucket, sample a
//! fixed set of colors per bucket once at construction, and maintain the
//! union K of the sampled color classes under removals and decreases.

use crate::graph::{GroupKey, VertexId};
use crate::rational::{rat_int, rat_to_f64, Rat};
use crate::rng::subrng;
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparsifyError {
    #[error("entries above threshold theta: {0:?}")]
    ThresholdBreach(Vec<GroupKey>),
    #[error("unknown entry {0:?}")]
    UnknownEntry(GroupKey),
    #[error("increase attempted on {0:?}")]
    IncreaseAttempted(GroupKey),
    #[error("bucket {bucket} palette exhausted")]
    PaletteExhausted { bucket: usize },
    #[error("sparsifier and integral supports overlap at {0:?}")]
    SupportOverlap(Vec<GroupKey>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SparsifierUpdate {
    Remove(GroupKey),
    Decrease(GroupKey, Rat),
}

#[derive(Debug, Clone)]
struct Entry {
    value: Rat,
    /// None when the value fell below the bucket floor (dropped edges).
    bucket: Option<usize>,
    color: usize,
}

/// Bucket state is materialized lazily: palettes deep in the value range
/// are huge and almost always untouched.
#[derive(Debug, Clone, Default)]
struct Bucket {
    palette: usize,
    sampled: BTreeSet<usize>,
    materialized: bool,
    /// colors in use at each vertex, for the greedy smallest-free rule
    used: BTreeMap<VertexId, BTreeSet<usize>>,
    members: BTreeSet<GroupKey>,
}

impl Bucket {
    fn smallest_free_color(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let empty = BTreeSet::new();
        let at_u = self.used.get(&u).unwrap_or(&empty);
        let at_v = self.used.get(&v).unwrap_or(&empty);
        (0..self.palette).find(|c| !at_u.contains(c) && !at_v.contains(c))
    }

    fn occupy(&mut self, u: VertexId, v: VertexId, color: usize) {
        self.used.entry(u).or_default().insert(color);
        self.used.entry(v).or_default().insert(color);
    }

    fn release(&mut self, u: VertexId, v: VertexId, color: usize) {
        if let Some(s) = self.used.get_mut(&u) {
            s.remove(&color);
        }
        if let Some(s) = self.used.get_mut(&v) {
            s.remove(&color);
        }
    }

    /// Proper-coloring recheck, used by tests and verify mode.
    fn coloring_is_proper(&self, colors: &BTreeMap<GroupKey, usize>) -> bool {
        let mut seen: BTreeMap<(VertexId, usize), GroupKey> = BTreeMap::new();
        for key in &self.members {
            let c = colors[key];
            if c >= self.palette {
                return false;
            }
            for v in [key.0, key.1] {
                if let Some(prev) = seen.insert((v, c), *key) {
                    if prev != *key {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Sparsifier over collapsed entries (one logical edge per pair and
/// weight class). Buckets are [ (1+eps)^-i, (1+eps)^-i+1 ); colors are
/// sampled once, so K membership follows an entry through recolorings.
#[derive(Debug, Clone)]
pub struct Sparsifier {
    theta: Rat,
    /// 3 * ceil(d) with d = 4 ln(2/eps) / eps^2.
    sample_size: usize,
    /// powers[i] = (1+eps)^i, i up to the bucket floor.
    powers: Vec<Rat>,
    buckets: Vec<Bucket>,
    entries: BTreeMap<GroupKey, Entry>,
    seed: u64,
    /// total entry weight dropped below the floor, for reporting
    pub dropped_mass: Rat,
}

/// d = 4 ln(2/eps) / eps^2; ceil taken in f64 (d is never near an
/// integer for the eps values in use).
pub fn sample_degree(eps: &Rat) -> f64 {
    let e = rat_to_f64(eps);
    4.0 * (2.0 / e).ln() / (e * e)
}

impl Sparsifier {
    /// Builds buckets, colorings and samples for every entry of `x`.
    /// Every entry must be at most `theta`.
    pub fn new(
        x: &BTreeMap<GroupKey, Rat>,
        eps: &Rat,
        theta: &Rat,
        n: usize,
        w_max: u64,
        seed: u64,
    ) -> Result<Sparsifier, SparsifyError> {
        let offenders: Vec<GroupKey> = x
            .iter()
            .filter(|(_, v)| *v > theta)
            .map(|(k, _)| *k)
            .collect();
        if !offenders.is_empty() {
            return Err(SparsifyError::ThresholdBreach(offenders));
        }
        let d = sample_degree(eps);
        let sample_size = 3 * d.ceil() as usize;
        // bucket index range: 2 log_{1+eps}(n W / eps)
        let ratio = rat_int(n as i64) * rat_int(w_max as i64) / eps;
        let one_plus = rat_int(1) + eps;
        let mut powers = vec![rat_int(1)];
        let mut log = 0usize;
        while powers[log] < ratio {
            let next = &powers[log] * &one_plus;
            powers.push(next);
            log += 1;
        }
        let max_bucket = 2 * log;
        while powers.len() <= max_bucket {
            let next = powers.last().unwrap() * &one_plus;
            powers.push(next);
        }
        let mut s = Sparsifier {
            theta: theta.clone(),
            sample_size,
            powers,
            buckets: vec![Bucket::default(); max_bucket + 1],
            entries: BTreeMap::new(),
            seed,
            dropped_mass: Rat::zero(),
        };
        for (key, value) in x {
            s.insert_entry(*key, value.clone())?;
        }
        Ok(s)
    }

    /// Fixes palette size and the once-drawn color sample of a bucket.
    /// The draw depends only on (seed, bucket), never on insertion order.
    fn materialize_bucket(&mut self, i: usize) {
        if self.buckets[i].materialized {
            return;
        }
        let palette = 3 * crate::rational::rat_ceil(&self.powers[i])
            .to_string()
            .parse::<usize>()
            .expect("palette fits usize");
        let take = self.sample_size.min(palette);
        let mut rng = subrng(self.seed, "colors", i as u64);
        let sampled = rand::seq::index::sample(&mut rng, palette, take)
            .into_iter()
            .collect();
        let b = &mut self.buckets[i];
        b.palette = palette;
        b.sampled = sampled;
        b.materialized = true;
    }

    /// Bucket index for a value: smallest i with value >= (1+eps)^-i,
    /// None when the value lies below the floor.
    fn bucket_of(&self, value: &Rat) -> Option<usize> {
        let max_bucket = self.buckets.len() - 1;
        // value >= (1+eps)^-i  <=>  value * (1+eps)^i >= 1
        (1..=max_bucket).find(|&i| value * &self.powers[i] >= rat_int(1))
    }

    fn insert_entry(&mut self, key: GroupKey, value: Rat) -> Result<(), SparsifyError> {
        debug_assert!(value.is_positive());
        match self.bucket_of(&value) {
            Some(b) => {
                self.materialize_bucket(b);
                let color = self.buckets[b]
                    .smallest_free_color(key.0, key.1)
                    .ok_or(SparsifyError::PaletteExhausted { bucket: b })?;
                // smallest-free is blocked by at most deg(u) + deg(v)
                // colors, the 2 Delta - 1 guarantee at insertion time
                debug_assert!({
                    let empty = BTreeSet::new();
                    let du = self.buckets[b].used.get(&key.0).unwrap_or(&empty).len();
                    let dv = self.buckets[b].used.get(&key.1).unwrap_or(&empty).len();
                    color <= du + dv
                });
                self.buckets[b].occupy(key.0, key.1, color);
                self.buckets[b].members.insert(key);
                self.entries.insert(
                    key,
                    Entry {
                        value,
                        bucket: Some(b),
                        color,
                    },
                );
            }
            None => {
                self.dropped_mass += rat_int(key.2 as i64) * &value;
                self.entries.insert(
                    key,
                    Entry {
                        value,
                        bucket: None,
                        color: 0,
                    },
                );
            }
        }
        Ok(())
    }

    fn detach(&mut self, key: &GroupKey) -> Option<Entry> {
        let entry = self.entries.remove(key)?;
        if let Some(b) = entry.bucket {
            self.buckets[b].release(key.0, key.1, entry.color);
            self.buckets[b].members.remove(key);
        }
        Some(entry)
    }

    pub fn in_k(&self, key: &GroupKey) -> bool {
        match self.entries.get(key) {
            Some(Entry {
                bucket: Some(b),
                color,
                ..
            }) => self.buckets[*b].sampled.contains(color),
            _ => false,
        }
    }

    /// Current sparse subgraph: sampled entries with their values.
    pub fn current_k(&self) -> Vec<(GroupKey, Rat)> {
        self.entries
            .iter()
            .filter(|(k, _)| self.in_k(k))
            .map(|(k, e)| (*k, e.value.clone()))
            .collect()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn sample_size(&self) -> usize {
        self.sample_size
    }

    pub fn sampled_count(&self, bucket: usize) -> usize {
        self.buckets[bucket].sampled.len()
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len() - 1
    }

    pub fn theta(&self) -> &Rat {
        &self.theta
    }

    /// Applies a removal or decrease; returns the K-membership changes as
    /// (key, now_in_k) pairs.
    pub fn update(
        &mut self,
        u: SparsifierUpdate,
    ) -> Result<Vec<(GroupKey, bool)>, SparsifyError> {
        match u {
            SparsifierUpdate::Remove(key) => {
                let was = self.in_k(&key);
                self.detach(&key)
                    .ok_or(SparsifyError::UnknownEntry(key))?;
                Ok(if was { vec![(key, false)] } else { vec![] })
            }
            SparsifierUpdate::Decrease(key, new_value) => {
                let entry = self
                    .entries
                    .get(&key)
                    .ok_or(SparsifyError::UnknownEntry(key))?;
                if new_value >= entry.value {
                    return Err(SparsifyError::IncreaseAttempted(key));
                }
                if new_value.is_zero() || new_value.is_negative() {
                    return self.update(SparsifierUpdate::Remove(key));
                }
                let was = self.in_k(&key);
                let old_bucket = entry.bucket;
                let new_bucket = self.bucket_of(&new_value);
                if old_bucket == new_bucket {
                    // same bucket: keep the color, no migration
                    self.entries.get_mut(&key).unwrap().value = new_value;
                } else {
                    self.detach(&key);
                    self.insert_entry(key, new_value)?;
                }
                let now = self.in_k(&key);
                Ok(if was != now {
                    vec![(key, now)]
                } else {
                    vec![]
                })
            }
        }
    }

    /// Full proper-coloring recheck across all buckets.
    pub fn coloring_is_proper(&self) -> bool {
        let colors: BTreeMap<GroupKey, usize> = self
            .entries
            .iter()
            .filter(|(_, e)| e.bucket.is_some())
            .map(|(k, e)| (*k, e.color))
            .collect();
        self.buckets
            .iter()
            .all(|b| b.coloring_is_proper(&colors))
    }

    /// Explicit size bound from the construction:
    /// |E(K)| <= (buckets) * (colors per bucket) * max color-class size,
    /// where a color class is a matching (<= n/2 entries).
    pub fn size_bound(&self, n: usize) -> usize {
        self.bucket_count() * self.sample_size * n.div_ceil(2)
    }
}

/// Rounds the sparsifier output to an integral matching and joins it with
/// the support of the collapsed integral part: M = static match of K,
/// union one physical edge per z^C pair. The two supports must be vertex
/// disjoint.
pub fn round_to_integral(
    g: &crate::graph::WeightedMultigraph,
    k_entries: &[(GroupKey, Rat)],
    zc: &crate::graph::CollapsedMatching,
    eps: &Rat,
) -> Result<Vec<crate::graph::EdgeId>, SparsifyError> {
    let mut k_vertices: BTreeSet<VertexId> = BTreeSet::new();
    for ((u, v, _), _) in k_entries {
        k_vertices.insert(*u);
        k_vertices.insert(*v);
    }
    let z_vertices = zc.support_vertices();
    if !k_vertices.is_disjoint(&z_vertices) {
        let shared: Vec<GroupKey> = k_entries
            .iter()
            .filter(|((u, v, _), _)| z_vertices.contains(u) || z_vertices.contains(v))
            .map(|(k, _)| *k)
            .collect();
        return Err(SparsifyError::SupportOverlap(shared));
    }
    // physical realization: lowest alive edge id per group
    let realize = |key: &GroupKey| -> Option<crate::graph::EdgeId> {
        g.group(key.0, key.1, key.2).into_iter().next()
    };
    // static match over the sparse subgraph, one logical edge per entry
    let mut sub = crate::graph::WeightedMultigraph::new(g.n(), g.max_weight().max(1));
    let mut back: Vec<GroupKey> = Vec::new();
    for (key, _) in k_entries {
        sub.add_edge(key.0, key.1, key.2).expect("entry is a valid edge");
        back.push(*key);
    }
    let cert = crate::stat::static_weighted_match(&sub, eps, false);
    let mut out = Vec::new();
    for &te in &cert.matching {
        let key = back[te];
        if let Some(e) = realize(&key) {
            out.push(e);
        }
    }
    for (key, _) in zc.iter() {
        if let Some(e) = realize(key) {
            out.push(e);
        }
    }
    out.sort_unstable();
    debug_assert!(crate::graph::is_matching(g, &out));
    Ok(out)
}
