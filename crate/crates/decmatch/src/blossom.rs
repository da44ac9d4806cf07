//! Exact maximum-weight matching on general graphs with LP duals.
//!
//! Primal-dual blossom search in the classic Galil / van Rantwijk
//! arrangement: vertices 0..n, non-trivial blossoms n..2n, endpoint
//! encoding 2k / 2k+1 for edge k. Dual variables are exact rationals and
//! keep the doubled convention of the reference implementations
//! (dualvar[v] = 2*y(v) for vertices, dualvar[b] = r(b) for blossoms), so
//! every update rule matches the well-studied integer version line for
//! line. The delta searches are plain O(m) scans per substage; the
//! least-slack caches of the O(n^3) version are not worth their
//! bookkeeping at the scales this crate targets.

use crate::rational::{rat_int, rat_zero, Rat};
use num::{Signed, Zero};

const NONE: usize = usize::MAX;

/// Result of one exact solve.
#[derive(Debug, Clone)]
pub struct BlossomSolution {
    /// mate[v] = partner vertex, or None if v is single.
    pub mate: Vec<Option<usize>>,
    /// Indices into the input edge list that form the matching.
    pub matched_edges: Vec<usize>,
    /// Exact vertex duals y(v) (true units, halved out of the doubled form).
    pub y: Vec<Rat>,
    /// Final blossom forest: (sorted member vertices, r(B) >= 0), laminar.
    pub blossoms: Vec<(Vec<usize>, Rat)>,
}

pub fn max_weight_matching(n: usize, edges: &[(usize, usize, i64)]) -> BlossomSolution {
    if edges.is_empty() {
        return BlossomSolution {
            mate: vec![None; n],
            matched_edges: Vec::new(),
            y: vec![rat_zero(); n],
            blossoms: Vec::new(),
        };
    }
    let mut solver = Solver::new(n, edges);
    solver.solve();
    solver.verify_optimum();
    solver.extract()
}

struct Solver {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>, // endpoint encoding, NONE when single
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<Rat>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl Solver {
    fn new(n: usize, edges: &[(usize, usize, i64)]) -> Solver {
        let nedge = edges.len();
        let maxweight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let endpoint: Vec<usize> = (0..2 * nedge)
            .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
            .collect();
        let mut neighbend: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            assert!(i != j, "self-loops are not matchable");
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![rat_int(maxweight); n];
        dualvar.extend(std::iter::repeat_n(rat_zero(), n));
        Solver {
            n,
            edges: edges.to_vec(),
            endpoint,
            neighbend,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            labelend: vec![NONE; 2 * n],
            inblossom: (0..n).collect(),
            blossomparent: vec![NONE; 2 * n],
            blossomchilds: vec![Vec::new(); 2 * n],
            blossombase: (0..n).chain(std::iter::repeat_n(NONE, n)).collect(),
            blossomendps: vec![Vec::new(); 2 * n],
            unusedblossoms: (n..2 * n).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    /// 2 * slack of edge k; not meaningful for edges inside one blossom.
    fn slack(&self, k: usize) -> Rat {
        let (i, j, wt) = self.edges[k];
        &self.dualvar[i] + &self.dualvar[j] - rat_int(2 * wt)
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut leaves = Vec::new();
        if b < self.n {
            leaves.push(b);
        } else {
            for &t in &self.blossomchilds[b] {
                if t < self.n {
                    leaves.push(t);
                } else {
                    leaves.extend(self.blossom_leaves(t));
                }
            }
        }
        leaves
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        if t == 1 {
            self.queue.extend(self.blossom_leaves(b));
        } else if t == 2 {
            let base = self.blossombase[b];
            assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let ep = self.endpoint[mbase];
            self.assign_label(ep, 1, mbase ^ 1);
        }
    }

    /// Trace back from v and w; returns the base of a new blossom or NONE
    /// when the paths lead to different roots (an augmenting path).
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        while v != NONE || w != NONE {
            if v != NONE {
                let mut b = self.inblossom[v];
                if self.label[b] & 4 != 0 {
                    base = self.blossombase[b];
                    break;
                }
                assert_eq!(self.label[b], 1);
                path.push(b);
                self.label[b] = 5;
                assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
                if self.labelend[b] == NONE {
                    v = NONE;
                } else {
                    v = self.endpoint[self.labelend[b]];
                    b = self.inblossom[v];
                    assert_eq!(self.label[b], 2);
                    assert!(self.labelend[b] != NONE);
                    v = self.endpoint[self.labelend[b]];
                }
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("free blossom slot");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            self.blossomchilds[b].push(bv);
            self.blossomendps[b].push(self.labelend[bv]);
            assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        self.blossomchilds[b].push(bb);
        self.blossomchilds[b].reverse();
        self.blossomendps[b].reverse();
        self.blossomendps[b].push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            self.blossomchilds[b].push(bw);
            self.blossomendps[b].push(self.labelend[bw] ^ 1);
            assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = rat_zero();
        for v in self.blossom_leaves(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.blossomchilds[b].clone() {
            self.blossomparent[s] = NONE;
            if s < self.n {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s].is_zero() {
                self.expand_blossom(s, endstage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.inblossom[v] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let mut j = self.blossomchilds[b]
                .iter()
                .position(|&r| r == entrychild)
                .expect("entry child present") as i32;
            let (jstep, endptrick): (i32, usize) = if j & 1 != 0 {
                j -= self.blossomchilds[b].len() as i32;
                (1, 0)
            } else {
                (-1, 1)
            };
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = pos_neg(&self.blossomendps[b], j - endptrick as i32) ^ endptrick;
                self.label[self.endpoint[q ^ 1]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                self.allowedge[q / 2] = true;
                j += jstep;
                p = pos_neg(&self.blossomendps[b], j - endptrick as i32) ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = pos_neg(&self.blossomchilds[b], j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            j += jstep;
            while pos_neg(&self.blossomchilds[b], j) != entrychild {
                let bv = pos_neg(&self.blossomchilds[b], j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut reached = NONE;
                for v in self.blossom_leaves(bv) {
                    if self.label[v] != 0 {
                        reached = v;
                        break;
                    }
                }
                if reached != NONE {
                    assert_eq!(self.label[reached], 2);
                    assert_eq!(self.inblossom[reached], bv);
                    self.label[reached] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                    let lblend = self.labelend[reached];
                    self.assign_label(reached, 2, lblend);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.blossombase[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b]
            .iter()
            .position(|&r| r == t)
            .expect("sub-blossom present");
        let mut j = i as i32;
        let (jstep, endptrick): (i32, usize) = if i & 1 != 0 {
            j -= self.blossomchilds[b].len() as i32;
            (1, 0)
        } else {
            (-1, 1)
        };
        while j != 0 {
            j += jstep;
            let mut t = pos_neg(&self.blossomchilds[b], j);
            let p = pos_neg(&self.blossomendps[b], j - endptrick as i32) ^ endptrick;
            if t >= self.n {
                let endp = self.endpoint[p];
                self.augment_blossom(t, endp);
            }
            j += jstep;
            t = pos_neg(&self.blossomchilds[b], j);
            if t >= self.n {
                let endp = self.endpoint[p ^ 1];
                self.augment_blossom(t, endp);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i);
        self.blossomendps[b].rotate_left(i);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                assert_eq!(self.label[bs], 1);
                assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                assert_eq!(self.label[bt], 2);
                assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                assert_eq!(self.blossombase[bt], t);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _stage in 0..self.n {
            self.label = vec![0; 2 * self.n];
            self.allowedge = vec![false; self.edges.len()];
            self.queue.clear();
            for v in 0..self.n {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = if augmented { None } else { self.queue.pop() } {
                    assert_eq!(self.label[self.inblossom[v]], 1);
                    for p in self.neighbend[v].clone() {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        if !self.allowedge[k] && !self.slack(k).is_positive() {
                            self.allowedge[k] = true;
                        }
                        if !self.allowedge[k] {
                            continue;
                        }
                        if self.label[self.inblossom[w]] == 0 {
                            self.assign_label(w, 2, p ^ 1);
                        } else if self.label[self.inblossom[w]] == 1 {
                            let base = self.scan_blossom(v, w);
                            if base != NONE {
                                self.add_blossom(base, k);
                            } else {
                                self.augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if self.label[w] == 0 {
                            assert_eq!(self.label[self.inblossom[w]], 2);
                            self.label[w] = 2;
                            self.labelend[w] = p ^ 1;
                        }
                    }
                }
                if augmented {
                    break;
                }

                // Dual adjustment. Slacks and vertex duals are doubled, so
                // delta1/delta2 read off directly and delta3 halves.
                let d1 = self.dualvar[..self.n].iter().min().cloned().unwrap();
                let mut delta: Option<Rat> = Some(d1);
                let mut deltatype = 1u8;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;

                for k in 0..self.edges.len() {
                    let (i, j, _) = self.edges[k];
                    let bi = self.inblossom[i];
                    let bj = self.inblossom[j];
                    if bi == bj {
                        continue;
                    }
                    let li = self.label[bi];
                    let lj = self.label[bj];
                    if (li == 1 && lj == 0) || (li == 0 && lj == 1) {
                        let d = self.slack(k);
                        if delta.as_ref().is_none_or(|cur| d < *cur) {
                            delta = Some(d);
                            deltatype = 2;
                            deltaedge = k;
                        }
                    } else if li == 1 && lj == 1 {
                        let d = self.slack(k) / rat_int(2);
                        if delta.as_ref().is_none_or(|cur| d < *cur) {
                            delta = Some(d);
                            deltatype = 3;
                            deltaedge = k;
                        }
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                    {
                        let d = self.dualvar[b].clone();
                        if delta.as_ref().is_none_or(|cur| d < *cur) {
                            delta = Some(d);
                            deltatype = 4;
                            deltablossom = b;
                        }
                    }
                }
                let delta = delta.expect("delta1 always available");

                for v in 0..self.n {
                    match self.label[self.inblossom[v]] {
                        0 => {}
                        1 => self.dualvar[v] -= &delta,
                        2 => self.dualvar[v] += &delta,
                        other => panic!("unexpected vertex label {other}"),
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dualvar[b] += &delta,
                            2 => self.dualvar[b] -= &delta,
                            other => panic!("unexpected blossom label {other}"),
                        }
                    }
                }

                match deltatype {
                    1 => break, // optimum reached
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(deltablossom, false),
                    other => panic!("unexpected delta type {other}"),
                }
            }
            if !augmented {
                break;
            }
            for b in self.n..2 * self.n {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b].is_zero()
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// LP optimality: nonnegative slacks, tight matched edges, zero duals
    /// on single vertices, full blossoms behind positive duals.
    fn verify_optimum(&self) {
        for k in 0..self.edges.len() {
            let (i, j, wt) = self.edges[k];
            let mut s = &self.dualvar[i] + &self.dualvar[j] - rat_int(2 * wt);
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                let last = *iblossoms.last().unwrap();
                iblossoms.push(self.blossomparent[last]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                let last = *jblossoms.last().unwrap();
                jblossoms.push(self.blossomparent[last]);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (&bi, &bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += rat_int(2) * &self.dualvar[bi];
            }
            assert!(!s.is_negative(), "edge {k} has negative slack");
            if self.mate[i] / 2 == k || self.mate[j] / 2 == k {
                assert!(self.mate[i] / 2 == k && self.mate[j] / 2 == k);
                assert!(s.is_zero(), "matched edge {k} not tight");
            }
        }
        for v in 0..self.n {
            assert!(
                self.mate[v] != NONE || self.dualvar[v].is_zero(),
                "single vertex {v} has positive dual"
            );
        }
        for b in self.n..2 * self.n {
            if self.blossombase[b] != NONE && self.dualvar[b].is_positive() {
                assert!(self.blossomendps[b].len() % 2 == 1);
                for (ix, &p) in self.blossomendps[b].iter().enumerate() {
                    if ix % 2 == 1 {
                        assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                        assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                    }
                }
            }
        }
    }

    fn extract(&self) -> BlossomSolution {
        let mate: Vec<Option<usize>> = (0..self.n)
            .map(|v| {
                if self.mate[v] == NONE {
                    None
                } else {
                    Some(self.endpoint[self.mate[v]])
                }
            })
            .collect();
        let mut matched_edges = Vec::new();
        for k in 0..self.edges.len() {
            let (i, j, _) = self.edges[k];
            if self.mate[i] / 2 == k && self.mate[i] != NONE && self.mate[j] / 2 == k {
                matched_edges.push(k);
            }
        }
        let y: Vec<Rat> = self.dualvar[..self.n]
            .iter()
            .map(|d| d / rat_int(2))
            .collect();
        let mut blossoms = Vec::new();
        for b in self.n..2 * self.n {
            if self.blossombase[b] != NONE {
                let mut members = self.blossom_leaves(b);
                members.sort_unstable();
                blossoms.push((members, self.dualvar[b].clone()));
            }
        }
        BlossomSolution {
            mate,
            matched_edges,
            y,
            blossoms,
        }
    }
}

fn pos_neg(v: &[usize], index: i32) -> usize {
    if index >= 0 {
        v[index as usize]
    } else {
        v[v.len() - (-index) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mates(n: usize, edges: &[(usize, usize, i64)]) -> Vec<Option<usize>> {
        max_weight_matching(n, edges).mate
    }

    fn m(pairs: &[(usize, usize)], n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for &(a, b) in pairs {
            out[a] = Some(b);
            out[b] = Some(a);
        }
        out
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(mates(0, &[]), vec![]);
        assert_eq!(mates(2, &[(0, 1, 1)]), m(&[(0, 1)], 2));
        assert_eq!(
            mates(4, &[(1, 2, 10), (2, 3, 11)]),
            m(&[(2, 3)], 4)
        );
        assert_eq!(
            mates(5, &[(1, 2, 5), (2, 3, 11), (3, 4, 5)]),
            m(&[(2, 3)], 5)
        );
    }

    #[test]
    fn s_blossom_augmentation() {
        assert_eq!(
            mates(5, &[(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7)]),
            m(&[(1, 2), (3, 4)], 5)
        );
        assert_eq!(
            mates(
                7,
                &[(1, 2, 8), (1, 3, 9), (2, 3, 10), (3, 4, 7), (1, 6, 5), (4, 5, 6)]
            ),
            m(&[(1, 6), (2, 3), (4, 5)], 7)
        );
    }

    #[test]
    fn s_t_relabel_augmentation() {
        assert_eq!(
            mates(
                7,
                &[(1, 2, 9), (1, 3, 8), (2, 3, 10), (1, 4, 5), (4, 5, 4), (1, 6, 3)]
            ),
            m(&[(1, 6), (2, 3), (4, 5)], 7)
        );
        assert_eq!(
            mates(
                7,
                &[(1, 2, 9), (1, 3, 8), (2, 3, 10), (1, 4, 5), (4, 5, 3), (3, 6, 4)]
            ),
            m(&[(1, 2), (3, 6), (4, 5)], 7)
        );
    }

    #[test]
    fn nested_s_blossom_augmentation() {
        assert_eq!(
            mates(
                7,
                &[
                    (1, 2, 9),
                    (1, 3, 9),
                    (2, 3, 10),
                    (2, 4, 8),
                    (3, 5, 8),
                    (4, 5, 10),
                    (5, 6, 6)
                ]
            ),
            m(&[(1, 3), (2, 4), (5, 6)], 7)
        );
    }

    #[test]
    fn s_blossom_relabel_expand() {
        assert_eq!(
            mates(
                9,
                &[
                    (1, 2, 23),
                    (1, 5, 22),
                    (1, 6, 15),
                    (2, 3, 25),
                    (3, 4, 22),
                    (4, 5, 25),
                    (4, 8, 14),
                    (5, 7, 13)
                ]
            ),
            m(&[(1, 6), (2, 3), (4, 8), (5, 7)], 9)
        );
    }

    #[test]
    fn nested_s_blossom_relabel_expand() {
        assert_eq!(
            mates(
                9,
                &[
                    (1, 2, 19),
                    (1, 3, 20),
                    (1, 8, 8),
                    (2, 3, 25),
                    (2, 4, 18),
                    (3, 5, 18),
                    (4, 5, 13),
                    (4, 7, 7),
                    (5, 6, 7)
                ]
            ),
            m(&[(1, 8), (2, 3), (4, 7), (5, 6)], 9)
        );
    }

    #[test]
    fn tricky_t_blossom_expansions() {
        assert_eq!(
            mates(
                11,
                &[
                    (1, 2, 45),
                    (1, 5, 45),
                    (2, 3, 50),
                    (3, 4, 45),
                    (4, 5, 50),
                    (1, 6, 30),
                    (3, 9, 35),
                    (4, 8, 35),
                    (5, 7, 26),
                    (9, 10, 5)
                ]
            ),
            m(&[(1, 6), (2, 3), (4, 8), (5, 7), (9, 10)], 11)
        );
        assert_eq!(
            mates(
                11,
                &[
                    (1, 2, 45),
                    (1, 5, 45),
                    (2, 3, 50),
                    (3, 4, 45),
                    (4, 5, 50),
                    (1, 6, 30),
                    (3, 9, 35),
                    (4, 8, 26),
                    (5, 7, 40),
                    (9, 10, 5)
                ]
            ),
            m(&[(1, 6), (2, 3), (4, 8), (5, 7), (9, 10)], 11)
        );
        assert_eq!(
            mates(
                11,
                &[
                    (1, 2, 45),
                    (1, 5, 45),
                    (2, 3, 50),
                    (3, 4, 45),
                    (4, 5, 50),
                    (1, 6, 30),
                    (3, 9, 35),
                    (4, 8, 28),
                    (5, 7, 26),
                    (9, 10, 5)
                ]
            ),
            m(&[(1, 6), (2, 3), (4, 8), (5, 7), (9, 10)], 11)
        );
    }

    #[test]
    fn nasty_nested_expansion() {
        assert_eq!(
            mates(
                13,
                &[
                    (1, 2, 45),
                    (1, 7, 45),
                    (2, 3, 50),
                    (3, 4, 45),
                    (4, 5, 95),
                    (4, 6, 94),
                    (5, 6, 94),
                    (6, 7, 50),
                    (1, 8, 30),
                    (3, 11, 35),
                    (5, 9, 36),
                    (7, 10, 26),
                    (11, 12, 5)
                ]
            ),
            m(&[(1, 8), (2, 3), (4, 6), (5, 9), (7, 10), (11, 12)], 13)
        );
        assert_eq!(
            mates(
                11,
                &[
                    (1, 2, 40),
                    (1, 3, 40),
                    (2, 3, 60),
                    (2, 4, 55),
                    (3, 5, 55),
                    (4, 5, 50),
                    (1, 8, 15),
                    (5, 7, 30),
                    (7, 6, 10),
                    (8, 10, 10),
                    (4, 9, 30)
                ]
            ),
            m(&[(1, 2), (3, 5), (4, 9), (7, 6), (8, 10)], 11)
        );
    }

    #[test]
    fn duals_certify_zero_gap() {
        // dual objective equals matching weight on blossom-heavy instances
        type Case = (usize, Vec<(usize, usize, i64)>);
        let cases: Vec<Case> = vec![
            (3, vec![(0, 1, 2), (1, 2, 2), (0, 2, 2)]),
            (
                7,
                vec![
                    (1, 2, 9),
                    (1, 3, 9),
                    (2, 3, 10),
                    (2, 4, 8),
                    (3, 5, 8),
                    (4, 5, 10),
                    (5, 6, 6),
                ],
            ),
        ];
        for (n, edges) in cases {
            let sol = max_weight_matching(n, &edges);
            let weight: i64 = sol.matched_edges.iter().map(|&k| edges[k].2).sum();
            let mut dual = sol.y.iter().cloned().sum::<Rat>();
            for (members, r) in &sol.blossoms {
                dual += r * rat_int((members.len() as i64 - 1) / 2);
            }
            assert_eq!(dual, rat_int(weight));
        }
    }
}
