use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use tricomm::{FeatureKind, LsfConfig};

#[derive(Clone, Debug, Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detected: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
}

/// What produced a report: inputs, settings, tool version and wall time.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub inputs: Inputs,
    pub feature_kind: FeatureKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<LsfConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_feature_edges: Option<u8>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(
        command: &'static str,
        inputs: Inputs,
        feature_kind: FeatureKind,
        config: Option<LsfConfig>,
        min_feature_edges: Option<u8>,
        start: Instant,
    ) -> Self {
        RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            inputs,
            feature_kind,
            config,
            min_feature_edges,
            duration_seconds: start.elapsed().as_secs_f64(),
        }
    }
}
