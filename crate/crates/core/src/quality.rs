//! Node-level community quality: WCC, the feature-aware WCC*, the tightness
//! and homogeneity constraints, node utility and the global objective.
//!
//! These functions evaluate one node against one explicit node set and are
//! the reference path. The local search uses an incremental evaluator that
//! must agree with [`node_utility`].

use serde::{Deserialize, Serialize};

use crate::graph::{AttributedGraph, CommunityCollection, NodeId};
use crate::par;
use crate::triangles::{count, NodeSet, TfMode, TriangleQuery, DEFAULT_MIN_FEATURE_EDGES};

/// How triangles are counted inside WCC*.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingRule {
    pub min_feature_edges: u8,
    pub tf_mode: TfMode,
}

impl Default for CountingRule {
    fn default() -> Self {
        CountingRule {
            min_feature_edges: DEFAULT_MIN_FEATURE_EDGES,
            tf_mode: TfMode::Sum,
        }
    }
}

impl CountingRule {
    pub fn with_min_feature_edges(min_feature_edges: u8) -> Self {
        CountingRule {
            min_feature_edges,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct UtilityBreakdown {
    pub wcc_star: f64,
    pub tightness: f64,
    pub homogeneity: f64,
    pub utility: f64,
}

impl UtilityBreakdown {
    pub fn new(wcc_star: f64, tightness: f64, homogeneity: f64) -> Self {
        UtilityBreakdown {
            wcc_star,
            tightness,
            homogeneity,
            utility: wcc_star + tightness - homogeneity,
        }
    }
}

fn size_without(set: &NodeSet, v: NodeId) -> usize {
    set.len() - set.contains(v) as usize
}

/// Combines the two WCC factors, returning 0 on either zero denominator.
pub(crate) fn wcc_ratio(
    inside: u64,
    around: u64,
    nodes_around: u64,
    size_without_node: usize,
    nodes_outside: u64,
) -> f64 {
    if around == 0 {
        return 0.0;
    }
    let denom = size_without_node as f64 + nodes_outside as f64;
    if denom == 0.0 {
        return 0.0;
    }
    (inside as f64 / around as f64) * (nodes_around as f64 / denom)
}

/// Degree to which `v` belongs to `community`, from topological triangles.
pub fn wcc_node(graph: &AttributedGraph, v: NodeId, community: &NodeSet) -> f64 {
    // Feature triangles are irrelevant here; a threshold of 3 skips the
    // two-edge path scan.
    let topo = |set: &NodeSet| count(graph, &TriangleQuery::new(v, set).min_feature_edges(3), TfMode::Sum);
    let all = topo(&NodeSet::All(graph.node_count()));
    if all.t == 0 {
        return 0.0;
    }
    let inside = topo(community);
    let outside = topo(&NodeSet::except(graph.node_count(), community.members()));
    wcc_ratio(inside.t, all.t, all.vt, size_without(community, v), outside.vt)
}

/// Size-weighted mean of per-community WCC over all nodes.
pub fn wcc_partition(graph: &AttributedGraph, communities: &CommunityCollection) -> f64 {
    let n = graph.node_count();
    if n == 0 {
        return 0.0;
    }
    let sets: Vec<NodeSet> = communities.iter().map(|c| NodeSet::Only(c.to_vec())).collect();
    let per_community = par::map_slice(&sets, |set| {
        let members = set.members();
        if members.is_empty() {
            return 0.0;
        }
        let mean = members.iter().map(|&v| wcc_node(graph, v, set)).sum::<f64>() / members.len() as f64;
        members.len() as f64 * mean
    });
    per_community.iter().sum::<f64>() / n as f64
}

/// WCC counted over topological plus feature triangles, with the neighborhood
/// united with the community as the reference set.
pub fn wcc_star_node(graph: &AttributedGraph, v: NodeId, community: &NodeSet, rule: CountingRule) -> f64 {
    let query = |set: &NodeSet| {
        count(
            graph,
            &TriangleQuery::new(v, set).min_feature_edges(rule.min_feature_edges),
            rule.tf_mode,
        )
    };
    let nbrs = NodeSet::Only(graph.neighbors(v).to_vec());
    let around_set = nbrs.union(community);
    let around = query(&around_set);
    if around.tf == 0 {
        return 0.0;
    }
    let inside = query(community);
    let neighborhood = query(&nbrs);
    wcc_ratio(
        inside.tf,
        around.tf,
        around.vtf,
        size_without(community, v),
        neighborhood.vtf,
    )
}

/// Share of the community reachable by a direct edge from `v`, normalised by
/// `v`'s degree.
pub fn tightness(graph: &AttributedGraph, v: NodeId, community: &NodeSet) -> f64 {
    let degree = graph.degree(v);
    let size = community.len();
    if degree == 0 || size == 0 {
        return 0.0;
    }
    let inside = graph.neighbors(v).iter().filter(|&&u| community.contains(u)).count();
    inside as f64 / (degree * size) as f64
}

/// Mean L1 feature distance from `v` to the members, per feature dimension.
pub fn homogeneity(graph: &AttributedGraph, v: NodeId, community: &NodeSet) -> f64 {
    let p = graph.feature_dim();
    let size = community.len();
    if p == 0 || size == 0 {
        return 0.0;
    }
    let features = graph.features();
    let total: f64 = community
        .members()
        .into_iter()
        .map(|u| features.l1_distance(v, u))
        .sum();
    total / (p * size) as f64
}

/// Utility of `v` in `community`, with `v` taken as a member.
pub fn node_utility(graph: &AttributedGraph, v: NodeId, community: &NodeSet, rule: CountingRule) -> UtilityBreakdown {
    let joined = community.union(&NodeSet::Only(vec![v]));
    UtilityBreakdown::new(
        wcc_star_node(graph, v, &joined, rule),
        tightness(graph, v, &joined),
        homogeneity(graph, v, &joined),
    )
}

/// Sum of member utilities over every (node, community) membership.
pub fn objective(graph: &AttributedGraph, communities: &CommunityCollection, rule: CountingRule) -> f64 {
    let sets: Vec<NodeSet> = communities.iter().map(|c| NodeSet::Only(c.to_vec())).collect();
    par::map_slice(&sets, |set| {
        set.members()
            .into_iter()
            .map(|v| node_utility(graph, v, set, rule).utility)
            .sum::<f64>()
    })
    .into_iter()
    .sum()
}
