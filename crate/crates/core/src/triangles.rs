//! Closed topological and closed feature triangles around an anchor node.
//!
//! A pair `{j, l}` drawn from a node set (anchor excluded) closes a
//! topological triangle with anchor `i` when all three edges exist. It
//! closes a feature triangle when the three nodes share a feature and the
//! triple contains at least `min_feature_edges` of its three possible edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, FeatureKind, NodeId};

pub mod census;

pub const DEFAULT_MIN_FEATURE_EDGES: u8 = 2;

/// How `tf` treats a triple that is both a topological and a feature
/// triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TfMode {
    /// Counted once per type.
    #[default]
    Sum,
    /// Counted once.
    Union,
}

/// A set of nodes used as the counting domain of a query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeSet {
    /// Every node of a graph with this many nodes.
    All(usize),
    /// The listed nodes (sorted, unique).
    Only(Vec<NodeId>),
    /// Every node of the graph except the listed ones (sorted, unique).
    Except(usize, Vec<NodeId>),
}

impl NodeSet {
    pub fn only(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut v: Vec<NodeId> = nodes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet::Only(v)
    }

    pub fn except(node_count: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut v: Vec<NodeId> = nodes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet::Except(node_count, v)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        match self {
            NodeSet::All(n) => (v as usize) < *n,
            NodeSet::Only(s) => s.binary_search(&v).is_ok(),
            NodeSet::Except(n, s) => (v as usize) < *n && s.binary_search(&v).is_err(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            NodeSet::All(n) => *n,
            NodeSet::Only(s) => s.len(),
            NodeSet::Except(n, s) => n - s.iter().filter(|&&v| (v as usize) < *n).count(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> Vec<NodeId> {
        match self {
            NodeSet::All(n) => (0..*n as NodeId).collect(),
            NodeSet::Only(s) => s.clone(),
            NodeSet::Except(n, s) => (0..*n as NodeId).filter(|v| s.binary_search(v).is_err()).collect(),
        }
    }

    /// `self ∪ other` materialised as a sorted list.
    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet::only(self.members().into_iter().chain(other.members()))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TriangleQuery<'a> {
    pub anchor: NodeId,
    pub node_set: &'a NodeSet,
    pub min_feature_edges: u8,
}

impl<'a> TriangleQuery<'a> {
    pub fn new(anchor: NodeId, node_set: &'a NodeSet) -> Self {
        TriangleQuery {
            anchor,
            node_set,
            min_feature_edges: DEFAULT_MIN_FEATURE_EDGES,
        }
    }

    pub fn min_feature_edges(mut self, k: u8) -> Self {
        self.min_feature_edges = k;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleCounts {
    pub t: u64,
    pub vt: u64,
    pub tf: u64,
    pub vtf: u64,
}

/// Whether three distinct nodes close a feature triangle: they share a binary
/// feature, or (continuous) share the same positive argmax dimension.
pub fn is_feature_triangle(graph: &AttributedGraph, x: NodeId, y: NodeId, z: NodeId) -> Result<bool> {
    if graph.feature_kind() == FeatureKind::None {
        return Err(Error::Unsupported("feature triangles need node features".into()));
    }
    if x == y || y == z || x == z {
        return Err(Error::Validation(format!(
            "feature triangle needs three distinct nodes, got ({x}, {y}, {z})"
        )));
    }
    Ok(graph.features().shares_feature(x, y, z))
}

/// A qualifying pair around an anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnchorPair {
    /// Always a neighbor of the anchor.
    pub j: NodeId,
    pub l: NodeId,
    /// Whether `l` is also a neighbor of the anchor.
    pub l_adjacent: bool,
    pub topo: bool,
    pub feature: bool,
}

impl AnchorPair {
    pub fn weight(&self, mode: TfMode) -> u64 {
        match mode {
            TfMode::Sum => self.topo as u64 + self.feature as u64,
            TfMode::Union => (self.topo || self.feature) as u64,
        }
    }
}

/// Every pair of nodes in the whole graph that closes a topological or a
/// feature triangle with `anchor`, when that set is reachable through the
/// anchor's neighborhood: that is the case when the graph has no features or
/// `min_feature_edges >= 2`. Returns `None` otherwise.
///
/// Each pair appears once. Pairs with both members adjacent to the anchor
/// have `j < l`.
pub fn anchor_pairs(graph: &AttributedGraph, anchor: NodeId, min_feature_edges: u8) -> Option<Vec<AnchorPair>> {
    let has_features = !graph.features().is_empty();
    if has_features && min_feature_edges < 2 {
        return None;
    }
    let mut out = Vec::new();
    for_each_neighborhood_pair(graph, anchor, min_feature_edges, |_, p| {
        out.push(p);
    });
    Some(out)
}

/// Walks the neighborhood-reachable pairs. `keep(j)`/`keep(l)` filtering is
/// left to the caller; `accept` receives pairs with either flag set.
fn for_each_neighborhood_pair<F>(graph: &AttributedGraph, i: NodeId, mfe: u8, mut accept: F)
where
    F: FnMut(&AttributedGraph, AnchorPair),
{
    let features = graph.features();
    let has_features = !features.is_empty();
    let nbrs = graph.neighbors(i);
    for (idx, &j) in nbrs.iter().enumerate() {
        let nj = graph.neighbors(j);
        // l adjacent to both: merge-intersect the tails.
        let tail = &nbrs[idx + 1..];
        let (mut a, mut b) = (0, 0);
        for &l in tail {
            while b < nj.len() && nj[b] < l {
                b += 1;
            }
            let topo = b < nj.len() && nj[b] == l;
            let edges = 2 + topo as u8;
            let feature = has_features && edges >= mfe && features.shares_feature(i, j, l);
            if topo || feature {
                accept(
                    graph,
                    AnchorPair {
                        j,
                        l,
                        l_adjacent: true,
                        topo,
                        feature,
                    },
                );
            }
        }
        if has_features && mfe <= 2 {
            // l adjacent to j only: a two-edge path i - j - l.
            for &l in nj {
                if l == i {
                    continue;
                }
                while a < nbrs.len() && nbrs[a] < l {
                    a += 1;
                }
                if a < nbrs.len() && nbrs[a] == l {
                    continue;
                }
                if features.shares_feature(i, j, l) {
                    accept(
                        graph,
                        AnchorPair {
                            j,
                            l,
                            l_adjacent: false,
                            topo: false,
                            feature: true,
                        },
                    );
                }
            }
        }
    }
}

#[derive(Default)]
struct Tally {
    t: u64,
    feature: u64,
    either: u64,
    topo_nodes: Vec<NodeId>,
    any_nodes: Vec<NodeId>,
}

impl Tally {
    fn record(&mut self, j: NodeId, l: NodeId, topo: bool, feature: bool) {
        if topo {
            self.t += 1;
            self.topo_nodes.extend([j, l]);
        }
        if feature {
            self.feature += 1;
        }
        if topo || feature {
            self.either += 1;
            self.any_nodes.extend([j, l]);
        }
    }

    fn finish(mut self, mode: TfMode) -> TriangleCounts {
        let distinct = |v: &mut Vec<NodeId>| {
            v.sort_unstable();
            v.dedup();
            v.len() as u64
        };
        TriangleCounts {
            t: self.t,
            vt: distinct(&mut self.topo_nodes),
            tf: match mode {
                TfMode::Sum => self.t + self.feature,
                TfMode::Union => self.either,
            },
            vtf: distinct(&mut self.any_nodes),
        }
    }
}

/// Computes `t`, `vt`, `tf` and `vtf` for one query in a single pass.
///
/// With `min_feature_edges >= 2` (or no features) the pairs are found by
/// walking the anchor's neighbors and their neighbors. Lower thresholds admit
/// triples with no edge to the anchor and fall back to scanning all pairs of
/// the node set.
pub fn count(graph: &AttributedGraph, query: &TriangleQuery<'_>, mode: TfMode) -> TriangleCounts {
    let i = query.anchor;
    let set = query.node_set;
    let mfe = query.min_feature_edges;
    let features = graph.features();
    let mut tally = Tally::default();

    if features.is_empty() || mfe >= 2 {
        for_each_neighborhood_pair(graph, i, mfe, |_, p| {
            if set.contains(p.j) && set.contains(p.l) {
                tally.record(p.j, p.l, p.topo, p.feature);
            }
        });
    } else {
        let nbrs = graph.neighbors(i);
        let members: Vec<NodeId> = set.members().into_iter().filter(|&v| v != i).collect();
        for (a, &j) in members.iter().enumerate() {
            let ij = nbrs.binary_search(&j).is_ok();
            for &l in &members[a + 1..] {
                let il = nbrs.binary_search(&l).is_ok();
                let jl = graph.has_edge(j, l);
                let topo = ij && il && jl;
                let edges = ij as u8 + il as u8 + jl as u8;
                let feature = edges >= mfe && features.shares_feature(i, j, l);
                tally.record(j, l, topo, feature);
            }
        }
    }
    tally.finish(mode)
}

pub fn count_t(graph: &AttributedGraph, query: &TriangleQuery<'_>) -> u64 {
    count(graph, query, TfMode::Sum).t
}

pub fn count_vt(graph: &AttributedGraph, query: &TriangleQuery<'_>) -> u64 {
    count(graph, query, TfMode::Sum).vt
}

pub fn count_tf(graph: &AttributedGraph, query: &TriangleQuery<'_>, mode: TfMode) -> u64 {
    count(graph, query, mode).tf
}

pub fn count_vtf(graph: &AttributedGraph, query: &TriangleQuery<'_>) -> u64 {
    count(graph, query, TfMode::Sum).vtf
}
