//! Compares the library against the oracle on one random graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricomm::lsf::{update_cumulative_utilities, Lsf};
use tricomm::triangles::{count, NodeSet, TfMode, TriangleQuery};
use tricomm::{census, eval, quality, CountingRule, FeatureKind, LsfConfig, Mode, NodeId};

use super::oracle::{self, Dense};
use super::{random_cover, random_graph, random_subset, rel_close};

pub const TOLERANCE: f64 = 1e-9;

/// Number of individual comparisons made, or the first mismatch.
pub fn check_seed(seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=30);
    let edge_p = rng.gen_range(0.1..0.6);
    let kind = if seed.is_multiple_of(2) {
        FeatureKind::Binary
    } else {
        FeatureKind::Continuous
    };
    let dim = rng.gen_range(1..=6);
    let g = random_graph(seed, n, edge_p, kind, dim);
    let d = Dense::new(&g);
    let checks = std::cell::Cell::new(0usize);

    let close = |what: &str, got: f64, want: f64| -> Result<(), String> {
        checks.set(checks.get() + 1);
        if rel_close(got, want, TOLERANCE) {
            Ok(())
        } else {
            Err(format!("seed {seed}: {what}: library {got} vs oracle {want}"))
        }
    };

    let cover = random_cover(seed, n, rng.gen_range(1..=4), seed.is_multiple_of(3));
    let truth = random_cover(seed.wrapping_add(7), n, rng.gen_range(1..=4), seed.is_multiple_of(5));
    let subsets = [
        (0..n as NodeId).collect::<Vec<_>>(),
        random_subset(seed, n, 0.5),
        random_subset(seed.wrapping_add(1), n, 0.25),
        cover.get(0).to_vec(),
    ];

    for i in 0..n as NodeId {
        for members in &subsets {
            let set = NodeSet::only(members.iter().copied());
            let mask = d.mask(members);
            for mfe in 0..=3u8 {
                for mode in [TfMode::Sum, TfMode::Union] {
                    let got = count(&g, &TriangleQuery::new(i, &set).min_feature_edges(mfe), mode);
                    let want = d.counts(i as usize, &mask, mfe, mode);
                    checks.set(checks.get() + 1);
                    if (got.t, got.vt, got.tf, got.vtf) != (want.t, want.vt, want.tf, want.vtf) {
                        return Err(format!(
                            "seed {seed}: counts at {i}, mfe {mfe}, {mode:?}: {got:?} vs {want:?}"
                        ));
                    }
                    let rule = CountingRule {
                        min_feature_edges: mfe,
                        tf_mode: mode,
                    };
                    close(
                        "wcc_star",
                        quality::wcc_star_node(&g, i, &set, rule),
                        d.wcc_star(i as usize, &mask, mfe, mode),
                    )?;
                    let u = quality::node_utility(&g, i, &set, rule);
                    let (w, t, h, total) = d.utility(i as usize, &mask, mfe, mode);
                    close("utility wcc_star", u.wcc_star, w)?;
                    close("utility tightness", u.tightness, t)?;
                    close("utility homogeneity", u.homogeneity, h)?;
                    close("utility", u.utility, total)?;
                }
            }
            close("wcc", quality::wcc_node(&g, i, &set), d.wcc(i as usize, &mask))?;
            close(
                "tightness",
                quality::tightness(&g, i, &set),
                d.tightness(i as usize, &mask),
            )?;
            close(
                "homogeneity",
                quality::homogeneity(&g, i, &set),
                d.homogeneity(i as usize, &mask),
            )?;
        }
    }

    let rule = CountingRule::default();
    close(
        "wcc_partition",
        quality::wcc_partition(&g, &cover),
        d.wcc_partition(&cover),
    )?;
    close(
        "objective",
        quality::objective(&g, &cover, rule),
        d.objective(&cover, rule.min_feature_edges, rule.tf_mode),
    )?;
    close(
        "avg_f1",
        eval::avg_f1(&cover, &truth).unwrap(),
        oracle::avg_f1(&cover, &truth),
    )?;
    if d.m() > 0 {
        close(
            "modularity",
            eval::modularity(&g, &cover).unwrap(),
            d.modularity(&cover),
        )?;
    }
    for c in cover.iter() {
        close("density", eval::density(&g, c), d.density(c))?;
        close("entropy", eval::entropy(&g, c).unwrap(), d.entropy(c))?;
    }
    for mfe in 0..=3u8 {
        let got = census(&g, &truth, mfe).unwrap();
        let want = d.census(&truth, mfe);
        checks.set(checks.get() + 1);
        let got_tuple = (
            got.topo_in_groundtruth,
            got.topo_same_community,
            got.feat_in_groundtruth,
            got.feat_same_community,
            got.feat_edge_breakdown,
        );
        if got_tuple != want {
            return Err(format!("seed {seed}: census mfe {mfe}: {got_tuple:?} vs {want:?}"));
        }
    }

    // Cumulative-utility updates against literal utilities over primary
    // labels, on the initial state and after a couple of rounds.
    for mode in [Mode::Partition, Mode::Overlap] {
        let config = LsfConfig {
            mode,
            ..LsfConfig::default()
        };
        let mut lsf = Lsf::new(&g, config).unwrap();
        for _ in 0..3 {
            let state = lsf.state();
            let updates = update_cumulative_utilities(&g, state, &config);
            let mut by_label: std::collections::BTreeMap<u32, Vec<NodeId>> = Default::default();
            for (v, &k) in state.primary.iter().enumerate() {
                by_label.entry(k).or_default().push(v as NodeId);
            }
            for (v, update) in updates.iter().enumerate() {
                let current = state.primary[v];
                let mut expected_labels: Vec<u32> = g
                    .neighbors(v as NodeId)
                    .iter()
                    .map(|&u| state.primary[u as usize])
                    .filter(|&k| k != current)
                    .collect();
                expected_labels.sort_unstable();
                expected_labels.dedup();
                let labels: Vec<u32> = update.updated.iter().map(|u| u.0).collect();
                if labels != expected_labels {
                    return Err(format!(
                        "seed {seed}: candidate labels of {v}: {labels:?} vs {expected_labels:?}"
                    ));
                }
                let base = d
                    .utility(v, &d.mask(&by_label[&current]), rule.min_feature_edges, rule.tf_mode)
                    .3;
                let prev = state.ledger[v].get(&current).copied().unwrap_or(0.0);
                for &(k, value) in &update.updated {
                    let gain = d
                        .utility(v, &d.mask(&by_label[&k]), rule.min_feature_edges, rule.tf_mode)
                        .3
                        - base;
                    close(
                        "cumulative utility",
                        value,
                        config.alpha * gain + (1.0 - config.alpha) * prev,
                    )?;
                }
            }
            if !lsf.should_continue() {
                break;
            }
            lsf.step();
        }
    }
    Ok(checks.get())
}
