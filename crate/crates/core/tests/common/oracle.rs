//! Slow reference implementations. Everything here works from a dense
//! adjacency matrix and the raw feature rows, enumerating triples and
//! evaluating each formula term by term.

use tricomm::{AttributedGraph, CommunityCollection, FeatureKind, NodeId, TfMode};

pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub kind: FeatureKind,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub t: u64,
    pub vt: u64,
    pub tf: u64,
    pub vtf: u64,
}

impl Dense {
    pub fn new(g: &AttributedGraph) -> Self {
        let n = g.node_count();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in g.edges() {
            adj[a as usize][b as usize] = true;
            adj[b as usize][a as usize] = true;
        }
        let rows = (0..n as NodeId)
            .map(|v| {
                if g.feature_dim() == 0 {
                    Vec::new()
                } else {
                    g.features().row(v).to_vec()
                }
            })
            .collect();
        Dense {
            n,
            adj,
            kind: g.feature_kind(),
            rows,
        }
    }

    pub fn p(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&x| x).count()
    }

    pub fn m(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    fn argmax(row: &[f64]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (l, &x) in row.iter().enumerate() {
            match best {
                Some(b) if row[b] >= x => {}
                _ => best = Some(l),
            }
        }
        best.filter(|&b| row[b] > 0.0)
    }

    pub fn shares_feature(&self, x: usize, y: usize, z: usize) -> bool {
        match self.kind {
            FeatureKind::None => false,
            FeatureKind::Binary => {
                (0..self.p()).any(|l| self.rows[x][l] == 1.0 && self.rows[y][l] == 1.0 && self.rows[z][l] == 1.0)
            }
            FeatureKind::Continuous => {
                let a = Self::argmax(&self.rows[x]);
                a.is_some() && a == Self::argmax(&self.rows[y]) && a == Self::argmax(&self.rows[z])
            }
        }
    }

    fn edges_in(&self, x: usize, y: usize, z: usize) -> u8 {
        self.adj[x][y] as u8 + self.adj[x][z] as u8 + self.adj[y][z] as u8
    }

    /// Triangle counts around `i` over pairs drawn from `set`.
    pub fn counts(&self, i: usize, set: &[bool], mfe: u8, mode: TfMode) -> Counts {
        let mut c = Counts {
            t: 0,
            vt: 0,
            tf: 0,
            vtf: 0,
        };
        let mut in_topo = vec![false; self.n];
        let mut in_any = vec![false; self.n];
        for j in 0..self.n {
            for l in j + 1..self.n {
                if j == i || l == i || !set[j] || !set[l] {
                    continue;
                }
                let e = self.edges_in(i, j, l);
                let topo = e == 3;
                let feat = e >= mfe && self.shares_feature(i, j, l);
                if topo {
                    c.t += 1;
                    in_topo[j] = true;
                    in_topo[l] = true;
                }
                c.tf += match mode {
                    TfMode::Sum => topo as u64 + feat as u64,
                    TfMode::Union => (topo || feat) as u64,
                };
                if topo || feat {
                    in_any[j] = true;
                    in_any[l] = true;
                }
            }
        }
        c.vt = in_topo.iter().filter(|&&x| x).count() as u64;
        c.vtf = in_any.iter().filter(|&&x| x).count() as u64;
        c
    }

    pub fn mask(&self, members: &[NodeId]) -> Vec<bool> {
        let mut m = vec![false; self.n];
        for &v in members {
            m[v as usize] = true;
        }
        m
    }

    fn size_without(set: &[bool], i: usize) -> f64 {
        (set.iter().filter(|&&x| x).count() - set[i] as usize) as f64
    }

    fn ratio(a: f64, b: f64, c: f64, d: f64) -> f64 {
        if b == 0.0 || d == 0.0 {
            0.0
        } else {
            (a / b) * (c / d)
        }
    }

    pub fn wcc(&self, i: usize, c: &[bool]) -> f64 {
        let all = vec![true; self.n];
        let outside: Vec<bool> = c.iter().map(|&x| !x).collect();
        let whole = self.counts(i, &all, 3, TfMode::Sum);
        let inside = self.counts(i, c, 3, TfMode::Sum);
        let out = self.counts(i, &outside, 3, TfMode::Sum);
        Self::ratio(
            inside.t as f64,
            whole.t as f64,
            whole.vt as f64,
            Self::size_without(c, i) + out.vt as f64,
        )
    }

    pub fn wcc_partition(&self, communities: &CommunityCollection) -> f64 {
        let mut total = 0.0;
        for c in communities.iter() {
            let mask = self.mask(c);
            for &v in c {
                total += self.wcc(v as usize, &mask);
            }
        }
        total / self.n as f64
    }

    pub fn wcc_star(&self, i: usize, c: &[bool], mfe: u8, mode: TfMode) -> f64 {
        let nbrs = self.adj[i].clone();
        let nc: Vec<bool> = (0..self.n).map(|v| nbrs[v] || c[v]).collect();
        let inside = self.counts(i, c, mfe, mode);
        let around = self.counts(i, &nc, mfe, mode);
        let hood = self.counts(i, &nbrs, mfe, mode);
        Self::ratio(
            inside.tf as f64,
            around.tf as f64,
            around.vtf as f64,
            Self::size_without(c, i) + hood.vtf as f64,
        )
    }

    pub fn tightness(&self, i: usize, c: &[bool]) -> f64 {
        let d = self.degree(i);
        let size = c.iter().filter(|&&x| x).count();
        if d == 0 || size == 0 {
            return 0.0;
        }
        let inside = (0..self.n).filter(|&u| c[u] && self.adj[i][u]).count();
        inside as f64 / (d as f64 * size as f64)
    }

    pub fn homogeneity(&self, i: usize, c: &[bool]) -> f64 {
        let p = self.p();
        let size = c.iter().filter(|&&x| x).count();
        if p == 0 || size == 0 {
            return 0.0;
        }
        let mut total = 0.0;
        for (u, &member) in c.iter().enumerate() {
            if member {
                for l in 0..p {
                    total += (self.rows[i][l] - self.rows[u][l]).abs();
                }
            }
        }
        total / (p as f64 * size as f64)
    }

    /// `(wcc_star, tightness, homogeneity, utility)` with `i` added to `c`.
    pub fn utility(&self, i: usize, c: &[bool], mfe: u8, mode: TfMode) -> (f64, f64, f64, f64) {
        let mut joined = c.to_vec();
        joined[i] = true;
        let w = self.wcc_star(i, &joined, mfe, mode);
        let t = self.tightness(i, &joined);
        let h = self.homogeneity(i, &joined);
        (w, t, h, w + t - h)
    }

    pub fn objective(&self, communities: &CommunityCollection, mfe: u8, mode: TfMode) -> f64 {
        let mut total = 0.0;
        for c in communities.iter() {
            let mask = self.mask(c);
            for &v in c {
                total += self.utility(v as usize, &mask, mfe, mode).3;
            }
        }
        total
    }

    pub fn modularity(&self, communities: &CommunityCollection) -> f64 {
        let m = self.m() as f64;
        let mut belong = vec![vec![0.0; communities.len()]; self.n];
        for (k, c) in communities.iter().enumerate() {
            for &v in c {
                belong[v as usize][k] = 1.0;
            }
        }
        for row in &mut belong {
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                row.iter_mut().for_each(|x| *x /= s);
            }
        }
        let mut q = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let shared: f64 = (0..communities.len()).map(|k| belong[i][k] * belong[j][k]).sum();
                let a = self.adj[i][j] as u8 as f64;
                let expected = self.degree(i) as f64 * self.degree(j) as f64 / (2.0 * m);
                q += (a - expected) * shared;
            }
        }
        q / (2.0 * m)
    }

    pub fn density(&self, members: &[NodeId]) -> f64 {
        let k = members.len();
        if k < 2 {
            return 0.0;
        }
        let mut e = 0;
        for a in 0..k {
            for b in a + 1..k {
                if self.adj[members[a] as usize][members[b] as usize] {
                    e += 1;
                }
            }
        }
        2.0 * e as f64 / (k * (k - 1)) as f64
    }

    pub fn entropy(&self, members: &[NodeId]) -> f64 {
        let size = members.len() as f64;
        let mut h = 0.0;
        for l in 0..self.p() {
            let have = members.iter().filter(|&&v| self.rows[v as usize][l] > 0.0).count();
            let frac = have as f64 / size;
            if frac > 0.0 {
                h -= frac * frac.ln();
            }
        }
        size / self.n as f64 * h
    }

    /// `(topo_in_gt, topo_same, feat_in_gt, feat_same, breakdown)`.
    pub fn census(&self, truth: &CommunityCollection, mfe: u8) -> (u64, u64, u64, u64, [u64; 4]) {
        let memberships = truth.memberships(self.n);
        let in_gt = |v: usize| !memberships[v].is_empty();
        let same = |x: usize, y: usize, z: usize| {
            memberships[x]
                .iter()
                .any(|k| memberships[y].contains(k) && memberships[z].contains(k))
        };
        let mut out = (0, 0, 0, 0, [0u64; 4]);
        for x in 0..self.n {
            for y in x + 1..self.n {
                for z in y + 1..self.n {
                    if !(in_gt(x) && in_gt(y) && in_gt(z)) {
                        continue;
                    }
                    let e = self.edges_in(x, y, z);
                    let s = same(x, y, z);
                    if e == 3 {
                        out.0 += 1;
                        out.1 += s as u64;
                    }
                    if e >= mfe && self.shares_feature(x, y, z) {
                        out.2 += 1;
                        if s {
                            out.3 += 1;
                            out.4[e as usize] += 1;
                        }
                    }
                }
            }
        }
        out
    }
}

fn f1(a: &[NodeId], b: &[NodeId]) -> f64 {
    let common = a.iter().filter(|v| b.contains(v)).count() as f64;
    if common == 0.0 {
        return 0.0;
    }
    let precision = common / a.len() as f64;
    let recall = common / b.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

pub fn avg_f1(detected: &CommunityCollection, truth: &CommunityCollection) -> f64 {
    let side = |x: &CommunityCollection, y: &CommunityCollection| {
        x.iter()
            .map(|c| y.iter().map(|d| f1(c, d)).fold(0.0, f64::max))
            .sum::<f64>()
            / x.len() as f64
    };
    0.5 * side(detected, truth) + 0.5 * side(truth, detected)
}
