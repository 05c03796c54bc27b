//! Attributed network data model.
//!
//! Topology is stored as a compressed sparse row structure with sorted
//! neighbor lists. Node ids are compacted to `0..n` in ascending order of
//! the original ids; the original ids are kept for output.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Binary,
    Continuous,
    None,
}

/// Node-feature matrix plus a bit signature per node used for the
/// shared-feature test on triples.
///
/// For binary features the signature has bit `l` set iff `B[v][l] = 1`.
/// For continuous features it has a single bit at the row's argmax
/// (lowest index on ties) when that maximum is positive, and no bits
/// otherwise. Three nodes form a feature triangle iff the AND of their
/// signatures is non-zero.
#[derive(Clone, Debug)]
pub struct Features {
    kind: FeatureKind,
    dim: usize,
    values: Vec<f64>,
    words: usize,
    signatures: Vec<u64>,
}

impl Features {
    pub fn none() -> Self {
        Features {
            kind: FeatureKind::None,
            dim: 0,
            values: Vec::new(),
            words: 0,
            signatures: Vec::new(),
        }
    }

    /// Builds a dense row-major `node_count × dim` matrix, validating entries
    /// against `kind`.
    pub fn new(kind: FeatureKind, node_count: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if kind == FeatureKind::None {
            if dim != 0 || !values.is_empty() {
                return Err(Error::Validation(
                    "feature kind none cannot carry feature values".into(),
                ));
            }
            return Ok(Features::none());
        }
        if values.len() != node_count * dim {
            return Err(Error::Validation(format!(
                "feature matrix has {} entries, expected {node_count}x{dim}",
                values.len()
            )));
        }
        for (idx, &x) in values.iter().enumerate() {
            let ok = match kind {
                FeatureKind::Binary => x == 0.0 || x == 1.0,
                FeatureKind::Continuous => x.is_finite() && x >= 0.0,
                FeatureKind::None => unreachable!(),
            };
            if !ok {
                let (row, col) = (idx / dim.max(1), idx % dim.max(1));
                return Err(Error::Validation(format!(
                    "feature value {x} at node {row}, dimension {col} is not valid for {kind:?} features"
                )));
            }
        }
        let words = dim.div_ceil(64);
        let mut signatures = vec![0u64; node_count * words];
        for v in 0..node_count {
            let row = &values[v * dim..(v + 1) * dim];
            let sig = &mut signatures[v * words..(v + 1) * words];
            match kind {
                FeatureKind::Binary => {
                    for (l, &x) in row.iter().enumerate() {
                        if x == 1.0 {
                            sig[l / 64] |= 1 << (l % 64);
                        }
                    }
                }
                FeatureKind::Continuous => {
                    if let Some(l) = argmax_lowest(row) {
                        if row[l] > 0.0 {
                            sig[l / 64] |= 1 << (l % 64);
                        }
                    }
                }
                FeatureKind::None => unreachable!(),
            }
        }
        Ok(Features {
            kind,
            dim,
            values,
            words,
            signatures,
        })
    }

    pub fn kind(&self) -> FeatureKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.kind == FeatureKind::None || self.dim == 0
    }

    pub fn row(&self, v: NodeId) -> &[f64] {
        let v = v as usize;
        &self.values[v * self.dim..(v + 1) * self.dim]
    }

    pub fn signature_words(&self) -> usize {
        self.words
    }

    pub fn signature(&self, v: NodeId) -> &[u64] {
        let v = v as usize;
        &self.signatures[v * self.words..(v + 1) * self.words]
    }

    /// Whether a feature dimension is "present" for `v` (binary: value 1,
    /// continuous: value > 0).
    pub fn is_present(&self, v: NodeId, l: usize) -> bool {
        self.row(v)[l] > 0.0
    }

    pub fn shares_feature(&self, x: NodeId, y: NodeId, z: NodeId) -> bool {
        let (sx, sy, sz) = (self.signature(x), self.signature(y), self.signature(z));
        sx.iter().zip(sy).zip(sz).any(|((a, b), c)| a & b & c != 0)
    }

    pub fn pair_signature_overlaps(&self, x: NodeId, y: NodeId) -> bool {
        self.signature(x).iter().zip(self.signature(y)).any(|(a, b)| a & b != 0)
    }

    /// L1 distance between two feature rows.
    pub fn l1_distance(&self, x: NodeId, y: NodeId) -> f64 {
        self.row(x).iter().zip(self.row(y)).map(|(a, b)| (a - b).abs()).sum()
    }

    fn select(&self, order: &[usize], dim: usize) -> Features {
        if self.kind == FeatureKind::None {
            return Features::none();
        }
        let mut values = vec![0.0; order.len() * dim];
        for (new, &old) in order.iter().enumerate() {
            if old != usize::MAX {
                values[new * dim..new * dim + self.dim]
                    .copy_from_slice(&self.values[old * self.dim..(old + 1) * self.dim]);
            }
        }
        Features::new(self.kind, order.len(), dim, values).expect("re-indexed features stay valid")
    }
}

fn argmax_lowest(row: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (l, &x) in row.iter().enumerate() {
        match best {
            Some(b) if row[b] >= x => {}
            _ => best = Some(l),
        }
    }
    best
}

/// Immutable undirected simple graph with node features.
#[derive(Clone, Debug)]
pub struct AttributedGraph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    original_ids: Vec<u64>,
    index: HashMap<u64, NodeId>,
    features: Features,
}

impl AttributedGraph {
    /// Graph over nodes `0..node_count` whose original ids equal the compact
    /// ids. Self-loops are dropped and duplicate edges collapsed.
    ///
    /// Panics if an endpoint is `>= node_count`.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let ids: Vec<u64> = (0..node_count as u64).collect();
        let edges: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .inspect(|&(a, b)| {
                assert!(
                    (a as usize) < node_count && (b as usize) < node_count,
                    "edge ({a}, {b}) out of range for {node_count} nodes"
                )
            })
            .collect();
        Self::build(ids, &edges, Features::none())
    }

    /// Builds from original ids; compact ids follow ascending original id.
    pub(crate) fn from_original(mut ids: Vec<u64>, original_edges: &[(u64, u64)]) -> Self {
        ids.sort_unstable();
        ids.dedup();
        let index: HashMap<u64, NodeId> = ids.iter().enumerate().map(|(i, &o)| (o, i as NodeId)).collect();
        let edges: Vec<(NodeId, NodeId)> = original_edges.iter().map(|(a, b)| (index[a], index[b])).collect();
        Self::build(ids, &edges, Features::none())
    }

    fn build(original_ids: Vec<u64>, edges: &[(NodeId, NodeId)], features: Features) -> Self {
        let n = original_ids.len();
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(edges.len() * 2);
        for &(a, b) in edges {
            if a != b {
                pairs.push((a, b));
                pairs.push((b, a));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &pairs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.into_iter().map(|(_, b)| b).collect();
        let index = original_ids
            .iter()
            .enumerate()
            .map(|(i, &o)| (o, i as NodeId))
            .collect();
        AttributedGraph {
            offsets,
            targets,
            original_ids,
            index,
            features,
        }
    }

    /// Replaces the feature matrix (row-major, one row per compact node id).
    pub fn with_features(mut self, kind: FeatureKind, dim: usize, values: Vec<f64>) -> Result<Self> {
        self.features = Features::new(kind, self.node_count(), dim, values)?;
        Ok(self)
    }

    /// Adds isolated nodes for original ids not yet present, re-compacting so
    /// that compact ids keep following ascending original id.
    pub(crate) fn with_extra_nodes(self, extra: impl IntoIterator<Item = u64>) -> Self {
        let mut ids = self.original_ids.clone();
        let before = ids.len();
        ids.extend(extra.into_iter().filter(|o| !self.index.contains_key(o)));
        if ids.len() == before {
            return self;
        }
        ids.sort_unstable();
        ids.dedup();
        let edges: Vec<(u64, u64)> = self
            .edges()
            .map(|(a, b)| (self.original_ids[a as usize], self.original_ids[b as usize]))
            .collect();
        let order: Vec<usize> = ids
            .iter()
            .map(|o| self.index.get(o).map_or(usize::MAX, |&v| v as usize))
            .collect();
        let features = self.features.select(&order, self.features.dim);
        let mut graph = Self::from_original(ids, &edges);
        graph.features = features;
        graph
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count() as NodeId
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        let (short, other) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.neighbors(short).binary_search(&other).is_ok()
    }

    /// Each undirected edge once, as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |a| {
            self.neighbors(a)
                .iter()
                .copied()
                .filter(move |&b| b > a)
                .map(move |b| (a, b))
        })
    }

    pub fn features(&self) -> &Features {
        &self.features
    }

    pub fn feature_kind(&self) -> FeatureKind {
        self.features.kind
    }

    pub fn feature_dim(&self) -> usize {
        self.features.dim
    }

    pub fn original_id(&self, v: NodeId) -> u64 {
        self.original_ids[v as usize]
    }

    pub fn compact_id(&self, original: u64) -> Option<NodeId> {
        self.index.get(&original).copied()
    }

    /// Re-checks the structural invariants: symmetric adjacency, no
    /// self-loops or duplicates, degree sum `2m`, valid feature values, and a
    /// bijective id map.
    pub fn check_invariants(&self) -> Result<()> {
        let mut degree_sum = 0;
        for v in self.nodes() {
            let nbrs = self.neighbors(v);
            degree_sum += nbrs.len();
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!("neighbor list of {v} not strictly sorted")));
            }
            for &u in nbrs {
                if u == v {
                    return Err(Error::Validation(format!("self-loop on {v}")));
                }
                if self.neighbors(u).binary_search(&v).is_err() {
                    return Err(Error::Validation(format!("edge ({v}, {u}) is not symmetric")));
                }
            }
        }
        if degree_sum != 2 * self.edge_count() {
            return Err(Error::Validation("degree sum differs from 2m".into()));
        }
        if self.index.len() != self.original_ids.len()
            || self
                .original_ids
                .iter()
                .enumerate()
                .any(|(i, o)| self.index.get(o) != Some(&(i as NodeId)))
        {
            return Err(Error::Validation("id map is not a bijection".into()));
        }
        Ok(())
    }
}

/// A list of communities, each a sorted set of compact node ids. Nodes may
/// belong to several communities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommunityCollection {
    communities: Vec<Vec<NodeId>>,
}

impl CommunityCollection {
    /// Sorts and de-duplicates each community. Empty communities are rejected.
    pub fn new(communities: Vec<Vec<NodeId>>) -> Result<Self> {
        let mut out = Vec::with_capacity(communities.len());
        for (k, mut c) in communities.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::Validation(format!("community {k} is empty")));
            }
            c.sort_unstable();
            c.dedup();
            out.push(c);
        }
        Ok(CommunityCollection { communities: out })
    }

    /// Checks that every member id is a node of a graph with `node_count`
    /// nodes.
    pub fn validate(&self, node_count: usize) -> Result<()> {
        for c in &self.communities {
            if let Some(&v) = c.iter().find(|&&v| v as usize >= node_count) {
                return Err(Error::Validation(format!("unknown node id {v}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn get(&self, k: usize) -> &[NodeId] {
        &self.communities[k]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[NodeId]> {
        self.communities.iter().map(Vec::as_slice)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.communities.iter().map(Vec::len).collect()
    }

    /// Per node, the indices of the communities containing it (ascending).
    pub fn memberships(&self, node_count: usize) -> Vec<Vec<u32>> {
        let mut m = vec![Vec::new(); node_count];
        for (k, c) in self.communities.iter().enumerate() {
            for &v in c {
                m[v as usize].push(k as u32);
            }
        }
        m
    }

    /// Whether every node lies in exactly one community.
    pub fn is_partition_of(&self, node_count: usize) -> bool {
        self.memberships(node_count).iter().all(|m| m.len() == 1)
    }

    /// Whether every node lies in at least one community.
    pub fn covers(&self, node_count: usize) -> bool {
        self.memberships(node_count).iter().all(|m| !m.is_empty())
    }

    pub fn into_inner(self) -> Vec<Vec<NodeId>> {
        self.communities
    }
}
