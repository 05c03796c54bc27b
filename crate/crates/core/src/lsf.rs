//! Round-synchronous local search over node utilities.
//!
//! Every node starts in its own community. In each round, every node looks
//! at the communities of its neighbors, smooths the utility gain of moving
//! there into a cumulative score, keeps the candidates that do not fall
//! below its current score, and drops the weakest one. The survivors are its
//! overlapping memberships; the best of them is its primary label. The
//! search itself moves on primary labels only, so memberships are what the
//! overlapping output reports. All nodes read the previous round's state and
//! commit together, so the result does not depend on processing order or on
//! the number of worker threads.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval;
use crate::graph::{AttributedGraph, CommunityCollection, NodeId};
use crate::par;
use crate::quality::CountingRule;
use crate::triangles::TfMode;

mod snapshot;

pub(crate) use snapshot::Snapshot;

/// Community label. Labels start as node ids and are never reused.
pub type Label = u32;

pub const DEFAULT_ALPHA: f64 = 0.2;
pub const DEFAULT_MAX_ROUNDS: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Partition,
    Overlap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LsfConfig {
    /// Weight of the current gain against the cumulative history.
    pub alpha: f64,
    pub max_rounds: usize,
    pub mode: Mode,
    pub min_feature_edges: u8,
    pub tf_mode: TfMode,
}

impl Default for LsfConfig {
    fn default() -> Self {
        LsfConfig {
            alpha: DEFAULT_ALPHA,
            max_rounds: DEFAULT_MAX_ROUNDS,
            mode: Mode::Partition,
            min_feature_edges: crate::triangles::DEFAULT_MIN_FEATURE_EDGES,
            tf_mode: TfMode::Sum,
        }
    }
}

impl LsfConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Validation(format!(
                "alpha must be in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.max_rounds < 1 {
            return Err(Error::Validation("max_rounds must be at least 1".into()));
        }
        if self.min_feature_edges > 3 {
            return Err(Error::Validation(format!(
                "min_feature_edges must be in 0..=3, got {}",
                self.min_feature_edges
            )));
        }
        Ok(())
    }

    pub fn counting_rule(&self) -> CountingRule {
        CountingRule {
            min_feature_edges: self.min_feature_edges,
            tf_mode: self.tf_mode,
        }
    }
}

/// Assignment of nodes to labels plus each node's cumulative utilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommunityState {
    pub primary: Vec<Label>,
    /// Sorted label set per node; always contains the primary label.
    pub memberships: Vec<Vec<Label>>,
    /// Cumulative utility per node and label.
    pub ledger: Vec<BTreeMap<Label, f64>>,
    pub round: usize,
    pub changed_count: usize,
}

impl CommunityState {
    /// Cumulative utility of `v` in its primary community.
    pub fn current_cumulative(&self, v: NodeId) -> f64 {
        let k = self.primary[v as usize];
        self.ledger[v as usize].get(&k).copied().unwrap_or(0.0)
    }

    /// Primary labels of `v`'s neighbors, ascending.
    pub fn candidate_labels(&self, graph: &AttributedGraph, v: NodeId) -> Vec<Label> {
        let mut labels: Vec<Label> = graph.neighbors(v).iter().map(|&u| self.primary[u as usize]).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Live communities in ascending label order, built from memberships.
    pub fn communities(&self) -> CommunityCollection {
        let mut by_label: BTreeMap<Label, Vec<NodeId>> = BTreeMap::new();
        for (v, labels) in self.memberships.iter().enumerate() {
            for &k in labels {
                by_label.entry(k).or_default().push(v as NodeId);
            }
        }
        CommunityCollection::new(by_label.into_values().collect()).expect("live labels have members")
    }

    /// Live communities built from primary labels only.
    pub fn partition(&self) -> CommunityCollection {
        let mut by_label: BTreeMap<Label, Vec<NodeId>> = BTreeMap::new();
        for (v, &k) in self.primary.iter().enumerate() {
            by_label.entry(k).or_default().push(v as NodeId);
        }
        CommunityCollection::new(by_label.into_values().collect()).expect("live labels have members")
    }
}

/// Every node in its own community with a zero ledger.
pub fn initialize(graph: &AttributedGraph) -> CommunityState {
    let n = graph.node_count();
    CommunityState {
        primary: (0..n as Label).collect(),
        memberships: (0..n as Label).map(|k| vec![k]).collect(),
        ledger: (0..n as Label).map(|k| BTreeMap::from([(k, 0.0)])).collect(),
        round: 0,
        changed_count: 0,
    }
}

/// Exponential smoothing of a utility gain into the cumulative history.
pub fn cumulative_update(alpha: f64, gain: f64, previous: f64) -> f64 {
    alpha * gain + (1.0 - alpha) * previous
}

/// Updated cumulative utilities for one node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeUpdate {
    pub current: Label,
    pub current_cumulative: f64,
    /// `(label, new cumulative utility)` for each candidate other than the
    /// current label, ascending by label.
    pub updated: Vec<(Label, f64)>,
}

/// Computes each node's updated cumulative utilities against the snapshot
/// in `state`. The state is not modified.
pub fn update_cumulative_utilities(
    graph: &AttributedGraph,
    state: &CommunityState,
    config: &LsfConfig,
) -> Vec<NodeUpdate> {
    let search: Vec<Vec<Label>> = state.primary.iter().map(|&k| vec![k]).collect();
    let snapshot = Snapshot::build(graph, &search, config.counting_rule());
    par::map_range(graph.node_count(), |v| {
        node_update(&snapshot, state, config, v as NodeId)
    })
}

fn node_update(snapshot: &Snapshot<'_>, state: &CommunityState, config: &LsfConfig, v: NodeId) -> NodeUpdate {
    let current = state.primary[v as usize];
    let current_cumulative = state.current_cumulative(v);
    let mut labels = snapshot.neighbor_labels(v);
    if let Err(pos) = labels.binary_search(&current) {
        labels.insert(pos, current);
    }
    let utilities = snapshot.utilities(v, &labels);
    let here = labels.binary_search(&current).expect("current label is evaluated");
    let base = utilities[here].utility;
    let updated = labels
        .iter()
        .zip(&utilities)
        .filter(|(&k, _)| k != current)
        .map(|(&k, u)| (k, cumulative_update(config.alpha, u.utility - base, current_cumulative)))
        .collect();
    NodeUpdate {
        current,
        current_cumulative,
        updated,
    }
}

/// Candidates whose new cumulative utility is at least the current one,
/// plus the current label at its present value; sorted by value descending,
/// then label ascending.
pub fn filter_candidates(current: Label, current_cumulative: f64, updated: &[(Label, f64)]) -> Vec<(Label, f64)> {
    let mut list: Vec<(Label, f64)> = updated
        .iter()
        .copied()
        .filter(|&(k, u)| k != current && u >= current_cumulative)
        .collect();
    list.push((current, current_cumulative));
    list.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    list
}

/// Drops the last label of a sorted candidate list (unless it is the only
/// one). Returns the primary label and the sorted membership set.
pub fn assign_labels(candidates: &[(Label, f64)], mode: Mode) -> (Label, Vec<Label>) {
    assert!(!candidates.is_empty(), "candidate list always holds the current label");
    let primary = candidates[0].0;
    let keep = if candidates.len() >= 2 { candidates.len() - 1 } else { 1 };
    let memberships = match mode {
        Mode::Partition => vec![primary],
        Mode::Overlap => {
            let mut m: Vec<Label> = candidates[..keep].iter().map(|c| c.0).collect();
            m.sort_unstable();
            m
        }
    };
    (primary, memberships)
}

/// One line of the per-round trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub changed_count: usize,
    /// `None` on graphs without edges.
    pub modularity: Option<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug)]
pub struct LsfOutcome {
    pub communities: CommunityCollection,
    pub trace: Vec<RoundTrace>,
    pub state: CommunityState,
}

/// Stepwise driver for the local search.
pub struct Lsf<'g> {
    graph: &'g AttributedGraph,
    config: LsfConfig,
    state: CommunityState,
}

impl<'g> Lsf<'g> {
    pub fn new(graph: &'g AttributedGraph, config: LsfConfig) -> Result<Self> {
        config.validate()?;
        Ok(Lsf {
            graph,
            config,
            state: initialize(graph),
        })
    }

    pub fn state(&self) -> &CommunityState {
        &self.state
    }

    pub fn config(&self) -> &LsfConfig {
        &self.config
    }

    /// Whether another round should run.
    pub fn should_continue(&self) -> bool {
        self.graph.node_count() > 0
            && self.state.round < self.config.max_rounds
            && (self.state.round == 0 || self.state.changed_count > 0)
    }

    /// Runs one round and commits it.
    pub fn step(&mut self) -> RoundTrace {
        let updates = update_cumulative_utilities(self.graph, &self.state, &self.config);
        let mode = self.config.mode;
        let decisions = par::map_slice(&updates, |u| {
            let cl = filter_candidates(u.current, u.current_cumulative, &u.updated);
            assign_labels(&cl, mode)
        });

        let state = &mut self.state;
        let mut changed = 0;
        for (v, (update, (primary, memberships))) in updates.into_iter().zip(decisions).enumerate() {
            let ledger = &mut state.ledger[v];
            ledger.extend(update.updated);
            if primary != state.primary[v] {
                changed += 1;
            }
            state.primary[v] = primary;
            state.memberships[v] = memberships;
        }
        // Labels nobody holds as primary no longer name a community.
        let mut alive = vec![false; self.graph.node_count()];
        for &k in &state.primary {
            alive[k as usize] = true;
        }
        for labels in &mut state.memberships {
            labels.retain(|&k| alive[k as usize]);
        }
        for ledger in &mut state.ledger {
            ledger.retain(|k, _| alive[*k as usize]);
        }
        state.round += 1;
        state.changed_count = changed;

        let communities = self.output();
        RoundTrace {
            round: self.state.round,
            changed_count: changed,
            modularity: eval::modularity(self.graph, &communities).ok(),
            objective: self.objective(),
        }
    }

    /// Objective of the current state, summed over every membership.
    pub fn objective(&self) -> f64 {
        let snapshot = Snapshot::build(self.graph, &self.state.memberships, self.config.counting_rule());
        par::map_range(self.graph.node_count(), |v| {
            let labels = &self.state.memberships[v];
            snapshot
                .utilities(v as NodeId, labels)
                .iter()
                .map(|u| u.utility)
                .sum::<f64>()
        })
        .into_iter()
        .sum()
    }

    /// Current communities in the configured mode.
    pub fn output(&self) -> CommunityCollection {
        match self.config.mode {
            Mode::Partition => self.state.partition(),
            Mode::Overlap => self.state.communities(),
        }
    }

    pub fn run(mut self) -> LsfOutcome {
        let mut trace = Vec::new();
        while self.should_continue() {
            trace.push(self.step());
        }
        LsfOutcome {
            communities: self.output(),
            trace,
            state: self.state,
        }
    }
}

/// Runs the local search to convergence or the round cap.
pub fn run(graph: &AttributedGraph, config: &LsfConfig) -> Result<LsfOutcome> {
    Ok(Lsf::new(graph, *config)?.run())
}
