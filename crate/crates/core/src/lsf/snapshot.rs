//! Read-only view of one round's communities, with per-community feature
//! aggregates so node utilities can be evaluated without rescanning members.

use std::collections::HashMap;

use crate::graph::{AttributedGraph, FeatureKind, NodeId};
use crate::quality::{wcc_ratio, CountingRule, UtilityBreakdown};
use crate::triangles::{anchor_pairs, count, NodeSet, TriangleQuery};

use super::Label;

/// Feature sums over a community, answering `Σ_j |f_v - f_j|` per query.
enum FeatureAggregate {
    /// Per dimension, how many members have the feature.
    Binary { total_ones: u64, ones: HashMap<u32, u32> },
    /// Per dimension, sorted member values and their prefix sums.
    Continuous {
        sorted: Vec<Vec<f64>>,
        prefix: Vec<Vec<f64>>,
    },
}

impl FeatureAggregate {
    fn build(graph: &AttributedGraph, members: &[NodeId]) -> Option<Self> {
        let features = graph.features();
        let p = features.dim();
        match features.kind() {
            FeatureKind::None => None,
            _ if p == 0 => None,
            FeatureKind::Binary => {
                let mut ones: HashMap<u32, u32> = HashMap::new();
                let mut total_ones = 0;
                for &v in members {
                    for (l, &x) in features.row(v).iter().enumerate() {
                        if x == 1.0 {
                            *ones.entry(l as u32).or_default() += 1;
                            total_ones += 1;
                        }
                    }
                }
                Some(FeatureAggregate::Binary { total_ones, ones })
            }
            FeatureKind::Continuous => {
                let mut sorted = Vec::with_capacity(p);
                let mut prefix = Vec::with_capacity(p);
                for l in 0..p {
                    let mut col: Vec<f64> = members.iter().map(|&v| features.row(v)[l]).collect();
                    col.sort_by(f64::total_cmp);
                    let mut acc = 0.0;
                    let mut pre = Vec::with_capacity(col.len() + 1);
                    pre.push(0.0);
                    for &x in &col {
                        acc += x;
                        pre.push(acc);
                    }
                    sorted.push(col);
                    prefix.push(pre);
                }
                Some(FeatureAggregate::Continuous { sorted, prefix })
            }
        }
    }

    /// Total L1 distance from `row` to every member.
    fn distance_sum(&self, row: &[f64], size: usize) -> f64 {
        match self {
            FeatureAggregate::Binary { total_ones, ones } => {
                // Σ_l [x_l = 1](size - ones_l) + [x_l = 0] ones_l
                let mut sum = *total_ones as f64;
                for (l, &x) in row.iter().enumerate() {
                    if x == 1.0 {
                        let c = ones.get(&(l as u32)).copied().unwrap_or(0) as f64;
                        sum += size as f64 - 2.0 * c;
                    }
                }
                sum
            }
            FeatureAggregate::Continuous { sorted, prefix } => {
                let mut sum = 0.0;
                for (l, &x) in row.iter().enumerate() {
                    let col = &sorted[l];
                    let pre = &prefix[l];
                    let below = col.partition_point(|&y| y < x);
                    let above = col.len() - below;
                    let low = x * below as f64 - pre[below];
                    let high = (pre[col.len()] - pre[below]) - x * above as f64;
                    sum += low + high;
                }
                sum
            }
        }
    }
}

pub(crate) struct Snapshot<'g> {
    graph: &'g AttributedGraph,
    rule: CountingRule,
    memberships: &'g [Vec<Label>],
    members: Vec<Vec<NodeId>>,
    aggregates: Vec<Option<FeatureAggregate>>,
}

impl<'g> Snapshot<'g> {
    pub(crate) fn build(graph: &'g AttributedGraph, memberships: &'g [Vec<Label>], rule: CountingRule) -> Self {
        let n = graph.node_count();
        let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (v, labels) in memberships.iter().enumerate() {
            for &k in labels {
                members[k as usize].push(v as NodeId);
            }
        }
        let aggregates = crate::par::map_slice(&members, |m| {
            if m.is_empty() {
                None
            } else {
                FeatureAggregate::build(graph, m)
            }
        });
        Snapshot {
            graph,
            rule,
            memberships,
            members,
            aggregates,
        }
    }

    pub(crate) fn members(&self, label: Label) -> &[NodeId] {
        &self.members[label as usize]
    }

    /// Labels of communities holding at least one neighbor of `v`, ascending.
    pub(crate) fn neighbor_labels(&self, v: NodeId) -> Vec<Label> {
        let mut labels: Vec<Label> = self
            .graph
            .neighbors(v)
            .iter()
            .flat_map(|&u| self.memberships[u as usize].iter().copied())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Utility of `v` in each listed community, with `v` treated as a member.
    /// `labels` must be sorted and unique.
    pub(crate) fn utilities(&self, v: NodeId, labels: &[Label]) -> Vec<UtilityBreakdown> {
        let graph = self.graph;
        let slot = |k: Label| labels.binary_search(&k).ok();
        let s = labels.len();

        let mut in_edges = vec![0usize; s];
        for &u in graph.neighbors(v) {
            for &k in &self.memberships[u as usize] {
                if let Some(i) = slot(k) {
                    in_edges[i] += 1;
                }
            }
        }
        let own = &self.memberships[v as usize];
        let size_without: Vec<usize> = labels
            .iter()
            .map(|&k| self.members[k as usize].len() - own.binary_search(&k).is_ok() as usize)
            .collect();

        let wcc = self.wcc_star_terms(v, labels, &size_without);

        let degree = graph.degree(v);
        let p = graph.feature_dim();
        let row = if p > 0 { graph.features().row(v) } else { &[][..] };
        labels
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let joined = size_without[i] + 1;
                let tightness = if degree == 0 {
                    0.0
                } else {
                    in_edges[i] as f64 / (degree * joined) as f64
                };
                let homogeneity = match &self.aggregates[k as usize] {
                    Some(agg) if p > 0 => {
                        let members = self.members[k as usize].len();
                        agg.distance_sum(row, members) / (p * joined) as f64
                    }
                    _ => 0.0,
                };
                UtilityBreakdown::new(wcc[i], tightness, homogeneity)
            })
            .collect()
    }

    fn wcc_star_terms(&self, v: NodeId, labels: &[Label], size_without: &[usize]) -> Vec<f64> {
        let graph = self.graph;
        let rule = self.rule;
        let s = labels.len();
        let slot = |k: Label| labels.binary_search(&k).ok();

        let Some(pairs) = anchor_pairs(graph, v, rule.min_feature_edges) else {
            return self.wcc_star_terms_direct(v, labels, size_without);
        };

        let mut base_tf = 0u64;
        let mut base_nodes: Vec<NodeId> = Vec::new();
        let mut tf_inside = vec![0u64; s];
        let mut tf_extra = vec![0u64; s];
        let mut extra_nodes: Vec<(usize, NodeId)> = Vec::new();
        for p in &pairs {
            let w = p.weight(rule.tf_mode);
            let mj = &self.memberships[p.j as usize];
            let ml = &self.memberships[p.l as usize];
            if p.l_adjacent {
                base_tf += w;
                base_nodes.extend([p.j, p.l]);
            } else {
                for &k in ml {
                    if let Some(i) = slot(k) {
                        tf_extra[i] += w;
                        extra_nodes.push((i, p.j));
                        extra_nodes.push((i, p.l));
                    }
                }
            }
            // Labels shared by j and l.
            let (mut a, mut b) = (0, 0);
            while a < mj.len() && b < ml.len() {
                match mj[a].cmp(&ml[b]) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        if let Some(i) = slot(mj[a]) {
                            tf_inside[i] += w;
                        }
                        a += 1;
                        b += 1;
                    }
                }
            }
        }
        base_nodes.sort_unstable();
        base_nodes.dedup();
        extra_nodes.sort_unstable();
        extra_nodes.dedup();
        let mut extra_count = vec![0u64; s];
        for &(i, u) in &extra_nodes {
            if base_nodes.binary_search(&u).is_err() {
                extra_count[i] += 1;
            }
        }
        let vtf_neighborhood = base_nodes.len() as u64;
        (0..s)
            .map(|i| {
                wcc_ratio(
                    tf_inside[i],
                    base_tf + tf_extra[i],
                    vtf_neighborhood + extra_count[i],
                    size_without[i],
                    vtf_neighborhood,
                )
            })
            .collect()
    }

    /// Per-community counting for thresholds below two edges, where
    /// qualifying triples need not touch the anchor's neighborhood.
    fn wcc_star_terms_direct(&self, v: NodeId, labels: &[Label], size_without: &[usize]) -> Vec<f64> {
        let graph = self.graph;
        let rule = self.rule;
        let q = |set: &NodeSet| {
            count(
                graph,
                &TriangleQuery::new(v, set).min_feature_edges(rule.min_feature_edges),
                rule.tf_mode,
            )
        };
        let nbrs = NodeSet::Only(graph.neighbors(v).to_vec());
        let neighborhood = q(&nbrs);
        labels
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let inside_set = NodeSet::only(self.members(k).iter().copied());
                let around_set = nbrs.union(&inside_set);
                let around = q(&around_set);
                if around.tf == 0 {
                    return 0.0;
                }
                let inside = q(&inside_set);
                wcc_ratio(inside.tf, around.tf, around.vtf, size_without[i], neighborhood.vtf)
            })
            .collect()
    }
}
