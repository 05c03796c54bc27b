//! `tricomm`: detect communities, evaluate them, and take a triangle census
//! of an attributed network.

mod manifest;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tricomm::lsf::{self, Lsf};
use tricomm::triangles::DEFAULT_MIN_FEATURE_EDGES;
use tricomm::{eval, io, AttributedGraph, FeatureKind, LsfConfig, Mode, TfMode};

use manifest::{Inputs, RunManifest};

#[derive(Parser)]
#[command(
    name = "tricomm",
    version,
    about = "Triangle-oriented community detection in attributed networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the local search and write one community per line.
    Detect(DetectArgs),
    /// Score detected communities against a ground truth.
    Eval(EvalArgs),
    /// Count closed topological and feature triangles inside a ground truth.
    Stats(StatsArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list, two node ids per line.
    #[arg(long)]
    edges: PathBuf,
    /// Feature file, dense or sparse rows.
    #[arg(long, requires = "feature_kind")]
    features: Option<PathBuf>,
    #[arg(long, value_enum, requires = "features")]
    feature_kind: Option<KindArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Binary,
    Continuous,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Partition,
    Overlap,
}

#[derive(Clone, Copy, ValueEnum)]
enum TfModeArg {
    Sum,
    Union,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum, default_value = "partition")]
    mode: ModeArg,
    #[arg(long, default_value_t = lsf::DEFAULT_ALPHA, value_parser = parse_alpha)]
    alpha: f64,
    #[arg(long, default_value_t = lsf::DEFAULT_MAX_ROUNDS, value_parser = parse_rounds)]
    max_rounds: usize,
    #[arg(long, default_value_t = DEFAULT_MIN_FEATURE_EDGES, value_parser = clap::value_parser!(u8).range(0..=3))]
    min_feature_edges: u8,
    /// How a triple that is both a topological and a feature triangle counts.
    #[arg(long, value_enum, default_value = "sum")]
    tf_mode: TfModeArg,
    /// Community file to write.
    #[arg(long)]
    out: PathBuf,
    /// JSON-lines round trace; defaults to `<out>.trace.jsonl`.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    detected: PathBuf,
    #[arg(long)]
    ground_truth: PathBuf,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long, value_enum)]
    feature_kind: KindArg,
    #[arg(long)]
    ground_truth: PathBuf,
    /// Minimum number of edges in a counted feature triangle.
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=3))]
    min_feature_edges: u8,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&alpha) {
        Ok(alpha)
    } else {
        Err(format!("alpha must be within [0, 1], got {alpha}"))
    }
}

fn parse_rounds(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("max-rounds must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(format!("{e}")),
    }
}

impl From<KindArg> for FeatureKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Binary => FeatureKind::Binary,
            KindArg::Continuous => FeatureKind::Continuous,
        }
    }
}

fn load_graph(edges: &Path, features: Option<(&Path, FeatureKind)>) -> Result<AttributedGraph> {
    let graph = io::load_edge_list(edges)?;
    match features {
        Some((path, kind)) => Ok(io::attach_features(graph, path, kind)?),
        None => Ok(graph),
    }
}

impl GraphArgs {
    fn load(&self) -> Result<AttributedGraph> {
        let features = self.features.as_deref().zip(self.feature_kind.map(FeatureKind::from));
        load_graph(&self.edges, features)
    }

    fn inputs(&self) -> Inputs {
        Inputs {
            edges: Some(self.edges.clone()),
            features: self.features.clone(),
            ..Inputs::default()
        }
    }

    fn kind(&self) -> FeatureKind {
        self.feature_kind.map_or(FeatureKind::None, FeatureKind::from)
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    manifest: &'a RunManifest,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn emit<T: Serialize>(body: &T, manifest: &RunManifest, out: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(&Report { body, manifest })?;
    match out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn detect(args: DetectArgs) -> Result<()> {
    let start = Instant::now();
    let graph = args.graph.load()?;
    let config = LsfConfig {
        alpha: args.alpha,
        max_rounds: args.max_rounds,
        mode: match args.mode {
            ModeArg::Partition => Mode::Partition,
            ModeArg::Overlap => Mode::Overlap,
        },
        min_feature_edges: args.min_feature_edges,
        tf_mode: match args.tf_mode {
            TfModeArg::Sum => TfMode::Sum,
            TfModeArg::Union => TfMode::Union,
        },
    };
    let trace_path = args.trace.clone().unwrap_or_else(|| {
        let mut name = args.out.clone().into_os_string();
        name.push(".trace.jsonl");
        PathBuf::from(name)
    });

    let mut trace = create(&trace_path)?;
    let mut search = Lsf::new(&graph, config)?;
    while search.should_continue() {
        let round = search.step();
        writeln!(trace, "{}", serde_json::to_string(&round)?)?;
    }
    let communities = search.output();
    io::save_communities(&args.out, &communities, &graph)?;

    let manifest = RunManifest::new(
        "detect",
        Inputs {
            out: Some(args.out.clone()),
            trace: Some(trace_path.clone()),
            ..args.graph.inputs()
        },
        args.graph.kind(),
        Some(config),
        None,
        start,
    );
    writeln!(
        trace,
        "{}",
        serde_json::to_string(&serde_json::json!({ "manifest": manifest }))?
    )?;
    trace.flush()?;
    eprintln!(
        "{} communities after {} rounds -> {}",
        communities.len(),
        search.state().round,
        args.out.display()
    );
    Ok(())
}

fn evaluate(args: EvalArgs) -> Result<()> {
    let start = Instant::now();
    let graph = args.graph.load()?;
    let detected = io::load_communities(&args.detected, &graph)?;
    let truth = io::load_communities(&args.ground_truth, &graph)?;
    let report = eval::evaluate(&graph, &detected, &truth)?;
    let manifest = RunManifest::new(
        "eval",
        Inputs {
            detected: Some(args.detected.clone()),
            ground_truth: Some(args.ground_truth.clone()),
            out: args.out.clone(),
            ..args.graph.inputs()
        },
        args.graph.kind(),
        None,
        None,
        start,
    );
    emit(&report, &manifest, args.out.as_deref())
}

fn stats(args: StatsArgs) -> Result<()> {
    let start = Instant::now();
    let kind = FeatureKind::from(args.feature_kind);
    let graph = load_graph(&args.edges, Some((&args.features, kind)))?;
    let truth = io::load_communities(&args.ground_truth, &graph)?;
    let report = tricomm::census(&graph, &truth, args.min_feature_edges)?;
    let manifest = RunManifest::new(
        "stats",
        Inputs {
            edges: Some(args.edges.clone()),
            features: Some(args.features.clone()),
            ground_truth: Some(args.ground_truth.clone()),
            out: args.out.clone(),
            ..Inputs::default()
        },
        kind,
        None,
        Some(args.min_feature_edges),
        start,
    );
    emit(&report, &manifest, args.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Eval(a) => evaluate(a),
        Command::Stats(a) => stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
