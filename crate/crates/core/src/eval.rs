//! Evaluation measures for detected communities: average F1 against a
//! ground truth, overlap-aware modularity, internal edge density, and
//! feature entropy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, CommunityCollection, NodeId};
use crate::par;

fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// For each community of `from`, the best F1 against any community of `to`.
fn best_f1(from: &CommunityCollection, to: &CommunityCollection) -> Vec<f64> {
    let max_node = to.iter().flat_map(|c| c.iter()).max().map_or(0, |&v| v as usize + 1);
    let index = to.memberships(max_node);
    let from_list: Vec<&[NodeId]> = from.iter().collect();
    par::map_slice(&from_list, |c| {
        let mut touched: Vec<u32> = c
            .iter()
            .filter(|&&v| (v as usize) < max_node)
            .flat_map(|&v| index[v as usize].iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        touched
            .into_iter()
            .map(|k| {
                let other = to.get(k as usize);
                let common = sorted_intersection_len(c, other);
                2.0 * common as f64 / (c.len() + other.len()) as f64
            })
            .fold(0.0, f64::max)
    })
}

/// Symmetric best-match F1: half the mean best F1 of `detected` against
/// `truth`, plus half the reverse.
pub fn avg_f1(detected: &CommunityCollection, truth: &CommunityCollection) -> Result<f64> {
    if detected.is_empty() || truth.is_empty() {
        return Err(Error::UndefinedMetric(
            "average F1 needs two non-empty collections".into(),
        ));
    }
    let mean = |v: Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    Ok(0.5 * mean(best_f1(detected, truth)) + 0.5 * mean(best_f1(truth, detected)))
}

/// Modularity where a node in `r` communities belongs to each with weight
/// `1/r`. On partitions this is Newman's modularity.
pub fn modularity(graph: &AttributedGraph, communities: &CommunityCollection) -> Result<f64> {
    let m = graph.edge_count();
    if m == 0 {
        return Err(Error::UndefinedMetric("modularity needs at least one edge".into()));
    }
    communities.validate(graph.node_count())?;
    let memberships = communities.memberships(graph.node_count());
    let belonging = |v: NodeId| {
        let r = memberships[v as usize].len();
        if r == 0 {
            0.0
        } else {
            1.0 / r as f64
        }
    };
    let two_m = 2.0 * m as f64;

    // Σ_k Σ_{i,j} A_ij c_ik c_jk over ordered pairs.
    let mut internal = 0.0;
    for (a, b) in graph.edges() {
        let shared = sorted_intersection_len_u32(&memberships[a as usize], &memberships[b as usize]);
        internal += 2.0 * shared as f64 * belonging(a) * belonging(b);
    }
    // Σ_k (Σ_i d_i c_ik)^2
    let mut strength = vec![0.0; communities.len()];
    for v in graph.nodes() {
        let w = graph.degree(v) as f64 * belonging(v);
        for &k in &memberships[v as usize] {
            strength[k as usize] += w;
        }
    }
    let expected: f64 = strength.iter().map(|s| s * s).sum::<f64>() / two_m;
    Ok((internal - expected) / two_m)
}

fn sorted_intersection_len_u32(a: &[u32], b: &[u32]) -> usize {
    sorted_intersection_len(a, b)
}

/// Fraction of member pairs joined by an edge; 0 for singletons.
pub fn density(graph: &AttributedGraph, members: &[NodeId]) -> f64 {
    let size = members.len();
    if size < 2 {
        return 0.0;
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let twice_internal: usize = sorted
        .iter()
        .map(|&v| sorted_intersection_len(graph.neighbors(v), &sorted))
        .sum();
    twice_internal as f64 / (sorted.len() * (sorted.len() - 1)) as f64
}

/// Size-weighted feature entropy of one community (natural log). A feature
/// counts as present when its value is positive.
pub fn entropy(graph: &AttributedGraph, members: &[NodeId]) -> Result<f64> {
    let p = graph.feature_dim();
    if p == 0 {
        return Err(Error::UndefinedMetric("entropy needs node features".into()));
    }
    let n = graph.node_count();
    if members.is_empty() {
        return Ok(0.0);
    }
    let features = graph.features();
    let mut present = vec![0usize; p];
    for &v in members {
        for (l, &x) in features.row(v).iter().enumerate() {
            if x > 0.0 {
                present[l] += 1;
            }
        }
    }
    let size = members.len() as f64;
    let h: f64 = present
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let frac = c as f64 / size;
            frac * frac.ln()
        })
        .sum();
    Ok(-(size / n as f64) * h)
}

/// Mean number of communities per node.
pub fn overlaps_stat(communities: &CommunityCollection, node_count: usize) -> f64 {
    if node_count == 0 {
        return 0.0;
    }
    communities.sizes().iter().sum::<usize>() as f64 / node_count as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub avg_f1: f64,
    /// `None` when the graph has no edges.
    pub modularity_q: Option<f64>,
    pub density_per_community: Vec<f64>,
    pub density_weighted_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub entropy_per_community: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub entropy_total: Option<f64>,
    pub community_count: usize,
    pub overlaps: f64,
}

/// All measures for `detected`. Entropy is left out when the graph carries
/// no features.
pub fn evaluate(
    graph: &AttributedGraph,
    detected: &CommunityCollection,
    truth: &CommunityCollection,
) -> Result<MetricsReport> {
    detected.validate(graph.node_count())?;
    truth.validate(graph.node_count())?;
    let avg_f1 = avg_f1(detected, truth)?;
    let modularity_q = match modularity(graph, detected) {
        Ok(q) => Some(q),
        Err(Error::UndefinedMetric(_)) => None,
        Err(e) => return Err(e),
    };
    let list: Vec<&[NodeId]> = detected.iter().collect();
    let density_per_community = par::map_slice(&list, |c| density(graph, c));
    let total_size: usize = detected.sizes().iter().sum();
    let density_weighted_mean = if total_size == 0 {
        0.0
    } else {
        list.iter()
            .zip(&density_per_community)
            .map(|(c, d)| c.len() as f64 * d)
            .sum::<f64>()
            / total_size as f64
    };
    let (entropy_per_community, entropy_total) = if graph.feature_dim() > 0 {
        let e = par::map_slice(&list, |c| entropy(graph, c))
            .into_iter()
            .collect::<Result<Vec<f64>>>()?;
        let total = e.iter().sum();
        (Some(e), Some(total))
    } else {
        (None, None)
    };
    Ok(MetricsReport {
        avg_f1,
        modularity_q,
        density_per_community,
        density_weighted_mean,
        entropy_per_community,
        entropy_total,
        community_count: detected.len(),
        overlaps: overlaps_stat(detected, graph.node_count()),
    })
}
