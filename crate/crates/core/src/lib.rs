//! Triangle-oriented community detection in attributed networks.
//!
//! The crate loads attributed graphs, counts closed topological and feature
//! triangles, scores node-community fit with a feature-aware weighted
//! community clustering plus tightness and homogeneity terms, and searches
//! for non-overlapping or overlapping communities with a round-synchronous
//! local search. Evaluation measures and a ground-truth triangle census are
//! included.
//!
//! With the default `parallel` feature, per-node work runs on rayon; disable
//! it for a purely sequential build. Output is identical either way.

pub mod error;
pub mod eval;
pub mod graph;
pub mod io;
pub mod lsf;
mod par;
pub mod quality;
pub mod triangles;

pub use error::{Error, Result};
pub use eval::MetricsReport;
pub use graph::{AttributedGraph, CommunityCollection, FeatureKind, NodeId};
pub use lsf::{LsfConfig, LsfOutcome, Mode, RoundTrace};
pub use quality::{CountingRule, UtilityBreakdown};
pub use triangles::census::{census, CensusReport};
pub use triangles::{NodeSet, TfMode, TriangleCounts, TriangleQuery};
