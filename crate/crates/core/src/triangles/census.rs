//! Whole-graph triangle census against a ground-truth cover.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, CommunityCollection, Features, NodeId};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    /// Topological triangles whose three nodes all appear in the ground truth.
    pub topo_in_groundtruth: u64,
    /// Topological triangles whose three nodes share a ground-truth community.
    pub topo_same_community: u64,
    pub feat_in_groundtruth: u64,
    pub feat_same_community: u64,
    /// Same-community feature triangles with exactly 0, 1, 2 and 3 edges.
    /// Buckets below `min_feature_edges` are zero.
    pub feat_edge_breakdown: [u64; 4],
    pub min_feature_edges: u8,
}

/// Counts topological and feature triangles inside the ground truth.
///
/// Feature triangles are triples of distinct nodes that share a feature and
/// contain at least `min_feature_edges` edges. A triple lying in several
/// communities is counted once.
pub fn census(
    graph: &AttributedGraph,
    ground_truth: &CommunityCollection,
    min_feature_edges: u8,
) -> Result<CensusReport> {
    if graph.features().is_empty() {
        return Err(Error::Unsupported("the census needs node features".into()));
    }
    if min_feature_edges > 3 {
        return Err(Error::Validation(format!(
            "min_feature_edges must be in 0..=3, got {min_feature_edges}"
        )));
    }
    ground_truth.validate(graph.node_count())?;
    let memberships = ground_truth.memberships(graph.node_count());
    let in_gt: Vec<bool> = memberships.iter().map(|m| !m.is_empty()).collect();

    let [topo_in, topo_same] = topological(graph, &memberships, &in_gt);
    let feat_in = feature_in_groundtruth(graph, &in_gt, min_feature_edges);
    let mut breakdown = feature_same_community(graph, ground_truth, &memberships);
    for (k, b) in breakdown.iter_mut().enumerate() {
        if k < min_feature_edges as usize {
            *b = 0;
        }
    }
    Ok(CensusReport {
        topo_in_groundtruth: topo_in,
        topo_same_community: topo_same,
        feat_in_groundtruth: feat_in,
        feat_same_community: breakdown.iter().sum(),
        feat_edge_breakdown: breakdown,
        min_feature_edges,
    })
}

fn share_community(a: &[u32], b: &[u32], c: &[u32]) -> bool {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() && k < c.len() {
        let m = a[i].max(b[j]).max(c[k]);
        if a[i] == m && b[j] == m && c[k] == m {
            return true;
        }
        if a[i] < m {
            i += 1;
        }
        if b[j] < m {
            j += 1;
        }
        if c[k] < m {
            k += 1;
        }
    }
    false
}

fn topological(graph: &AttributedGraph, memberships: &[Vec<u32>], in_gt: &[bool]) -> [u64; 2] {
    par::sum_arrays(graph.node_count(), |a| {
        let a = a as NodeId;
        let mut out = [0u64; 2];
        if !in_gt[a as usize] {
            return out;
        }
        let na = graph.neighbors(a);
        for &b in na.iter().filter(|&&b| b > a && in_gt[b as usize]) {
            let nb = graph.neighbors(b);
            let (mut x, mut y) = (0, 0);
            while x < na.len() && y < nb.len() {
                match na[x].cmp(&nb[y]) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        let c = na[x];
                        if c > b && in_gt[c as usize] {
                            out[0] += 1;
                            if share_community(
                                &memberships[a as usize],
                                &memberships[b as usize],
                                &memberships[c as usize],
                            ) {
                                out[1] += 1;
                            }
                        }
                        x += 1;
                        y += 1;
                    }
                }
            }
        }
        out
    })
}

/// Fixed-length bitset over `len` positions.
#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn or_from(&mut self, other: &Bits, from_word: usize) {
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a |= b;
        }
    }

    /// Clears positions `< i`.
    fn clear_below(&mut self, i: usize) {
        let w = i / 64;
        for x in &mut self.words[..w] {
            *x = 0;
        }
        if w < self.words.len() {
            self.words[w] &= !0u64 << (i % 64);
        }
    }

    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    fn count_and(&self, other: &Bits) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    fn count_and3(&self, b: &Bits, c: &Bits) -> u64 {
        self.words
            .iter()
            .zip(&b.words)
            .zip(&c.words)
            .map(|((x, y), z)| (x & y & z).count_ones() as u64)
            .sum()
    }

    fn and_not(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }
}

/// Indices of the set bits of `sig_a & sig_b`.
fn common_features(features: &Features, a: NodeId, b: NodeId, out: &mut Vec<usize>) {
    out.clear();
    for (w, (x, y)) in features.signature(a).iter().zip(features.signature(b)).enumerate() {
        let mut m = x & y;
        while m != 0 {
            out.push(w * 64 + m.trailing_zeros() as usize);
            m &= m - 1;
        }
    }
}

/// Per signature bit, the set of nodes (restricted to `keep`) carrying it.
fn feature_columns(features: &Features, nodes: &[NodeId]) -> Vec<Option<Bits>> {
    let bits = features.signature_words() * 64;
    let mut cols: Vec<Option<Bits>> = vec![None; bits];
    for (pos, &v) in nodes.iter().enumerate() {
        for (w, &x) in features.signature(v).iter().enumerate() {
            let mut m = x;
            while m != 0 {
                let l = w * 64 + m.trailing_zeros() as usize;
                cols[l].get_or_insert_with(|| Bits::new(nodes.len())).set(pos);
                m &= m - 1;
            }
        }
    }
    cols
}

fn feature_in_groundtruth(graph: &AttributedGraph, in_gt: &[bool], mfe: u8) -> u64 {
    let features = graph.features();
    let n = graph.node_count();
    let all: Vec<NodeId> = graph.nodes().collect();
    let mut cols = feature_columns(features, &all);
    let mut gt_bits = Bits::new(n);
    for (v, _) in in_gt.iter().enumerate().filter(|(_, &inside)| inside) {
        gt_bits.set(v);
    }
    for c in cols.iter_mut().flatten() {
        for (a, b) in c.words.iter_mut().zip(&gt_bits.words) {
            *a &= b;
        }
    }

    if mfe == 0 {
        // All GT triples x < y < z sharing a feature.
        let [total] = par::sum_arrays(n, |x| {
            let mut out = [0u64];
            if !in_gt[x] {
                return out;
            }
            let mut common = Vec::new();
            let mut cand = Bits::new(n);
            for (y, _) in in_gt.iter().enumerate().skip(x + 1).filter(|(_, &inside)| inside) {
                common_features(features, x as NodeId, y as NodeId, &mut common);
                if common.is_empty() {
                    continue;
                }
                let from = (y + 1) / 64;
                cand.words.iter_mut().for_each(|w| *w = 0);
                for &l in &common {
                    if let Some(c) = &cols[l] {
                        cand.or_from(c, from);
                    }
                }
                cand.clear_below(y + 1);
                out[0] += cand.count();
            }
            out
        });
        return total;
    }

    // Triples with at least one edge: visit each edge and every third node,
    // bucket by edge count, then divide out the multiplicity.
    let edges: Vec<(NodeId, NodeId)> = graph
        .edges()
        .filter(|&(a, b)| in_gt[a as usize] && in_gt[b as usize])
        .collect();
    let buckets = par::sum_arrays(edges.len(), |e| {
        let (x, y) = edges[e];
        let mut out = [0u64; 4];
        let mut common = Vec::new();
        common_features(features, x, y, &mut common);
        if common.is_empty() {
            return out;
        }
        let mut cand = Bits::new(n);
        for &l in &common {
            if let Some(c) = &cols[l] {
                cand.or_from(c, 0);
            }
        }
        // x and y carry every common feature, so both are in `cand`.
        let total = cand.count() - 2;
        let nx = graph
            .neighbors(x)
            .iter()
            .filter(|&&z| z != y && cand.get(z as usize))
            .count() as u64;
        let ny = graph
            .neighbors(y)
            .iter()
            .filter(|&&z| z != x && cand.get(z as usize))
            .count() as u64;
        let both = intersect_count(graph.neighbors(x), graph.neighbors(y), |z| cand.get(z as usize));
        out[3] += both;
        out[2] += nx + ny - 2 * both;
        out[1] += total + both - nx - ny;
        out
    });
    let exact = [0, buckets[1], buckets[2] / 2, buckets[3] / 3];
    exact[mfe as usize..].iter().sum()
}

fn intersect_count(a: &[NodeId], b: &[NodeId], keep: impl Fn(NodeId) -> bool) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if keep(a[i]) {
                    c += 1;
                }
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Edge-count histogram of feature triples inside communities, each triple
/// attributed to the lowest-indexed community containing it.
fn feature_same_community(
    graph: &AttributedGraph,
    ground_truth: &CommunityCollection,
    memberships: &[Vec<u32>],
) -> [u64; 4] {
    let features = graph.features();
    let mut total = [0u64; 4];
    for (k, members) in ground_truth.iter().enumerate() {
        if members.len() < 3 {
            continue;
        }
        let size = members.len();
        let local = |v: NodeId| members.binary_search(&v).ok();
        let cols = feature_columns(features, members);
        let adjacency: Vec<Bits> = members
            .iter()
            .map(|&v| {
                let mut b = Bits::new(size);
                for &u in graph.neighbors(v) {
                    if let Some(p) = local(u) {
                        b.set(p);
                    }
                }
                b
            })
            .collect();
        // Overlap with each earlier community, projected onto local positions.
        let mut earlier: std::collections::BTreeMap<u32, Bits> = Default::default();
        for (p, &v) in members.iter().enumerate() {
            for &other in memberships[v as usize].iter().take_while(|&&o| (o as usize) < k) {
                earlier.entry(other).or_insert_with(|| Bits::new(size)).set(p);
            }
        }

        let part = par::sum_arrays(size, |a| {
            let mut out = [0u64; 4];
            let mut common = Vec::new();
            let mut cand = Bits::new(size);
            let va = members[a];
            for b in a + 1..size {
                let vb = members[b];
                common_features(features, va, vb, &mut common);
                if common.is_empty() {
                    continue;
                }
                cand.words.iter_mut().for_each(|w| *w = 0);
                for &l in &common {
                    if let Some(c) = &cols[l] {
                        cand.or_from(c, (b + 1) / 64);
                    }
                }
                cand.clear_below(b + 1);
                for (other, proj) in &earlier {
                    if memberships[va as usize].binary_search(other).is_ok()
                        && memberships[vb as usize].binary_search(other).is_ok()
                    {
                        cand.and_not(proj);
                    }
                }
                let ab = adjacency[a].get(b) as usize;
                let all = cand.count();
                let na = cand.count_and(&adjacency[a]);
                let nb = cand.count_and(&adjacency[b]);
                let both = cand.count_and3(&adjacency[a], &adjacency[b]);
                out[ab] += all + both - na - nb;
                out[ab + 1] += na + nb - 2 * both;
                out[ab + 2] += both;
            }
            out
        });
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total
}
