//! Text formats: SNAP-style edge lists, dense or sparse feature rows, and
//! one-community-per-line files. Lines starting with `#` are comments; tabs
//! and spaces both separate tokens. All ids in files are original ids.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, CommunityCollection, FeatureKind, NodeId};

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Yields `(line_number, trimmed_line)` for non-blank, non-comment lines.
fn content_lines<'a, R: BufRead + 'a>(reader: R, path: &'a Path) -> impl Iterator<Item = Result<(usize, String)>> + 'a {
    reader.lines().enumerate().filter_map(move |(i, line)| match line {
        Err(e) => Some(Err(Error::io(path, e))),
        Ok(line) => {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, t.to_string())))
            }
        }
    })
}

fn parse_id(tok: &str, path: &Path, line: usize) -> Result<u64> {
    tok.parse::<u64>()
        .map_err(|_| Error::parse(path, line, format!("invalid node id {tok:?}")))
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<AttributedGraph> {
    let path = path.as_ref();
    read_edge_list(open(path)?, path)
}

/// Parses an edge list from any reader; `path` is only used in messages.
pub fn read_edge_list<R: BufRead>(reader: R, path: &Path) -> Result<AttributedGraph> {
    let mut ids = Vec::new();
    let mut edges = Vec::new();
    for item in content_lines(reader, path) {
        let (line, text) = item?;
        let mut toks = text.split_whitespace();
        let (a, b) = match (toks.next(), toks.next()) {
            (Some(a), Some(b)) => (parse_id(a, path, line)?, parse_id(b, path, line)?),
            _ => return Err(Error::parse(path, line, "expected two node ids")),
        };
        ids.push(a);
        ids.push(b);
        edges.push((a, b));
    }
    let graph = AttributedGraph::from_original(ids, &edges);
    graph.check_invariants()?;
    Ok(graph)
}

pub fn attach_features(graph: AttributedGraph, path: impl AsRef<Path>, kind: FeatureKind) -> Result<AttributedGraph> {
    let path = path.as_ref();
    read_features(graph, open(path)?, path, kind)
}

/// Reads feature rows, either dense (`id v_1 ... v_p`) or sparse
/// (`id idx:val ...`, zero-based indices). The dimension is the widest row
/// observed; absent nodes get all-zero rows and ids unknown to the graph
/// become isolated nodes.
pub fn read_features<R: BufRead>(
    graph: AttributedGraph,
    reader: R,
    path: &Path,
    kind: FeatureKind,
) -> Result<AttributedGraph> {
    if kind == FeatureKind::None {
        return Err(Error::Unsupported("cannot attach features of kind none".into()));
    }
    let mut rows: Vec<(u64, Vec<(usize, f64)>)> = Vec::new();
    let mut dense_width: Option<(usize, usize)> = None;
    let mut dim = 0usize;
    for item in content_lines(reader, path) {
        let (line, text) = item?;
        let mut toks = text.split_whitespace();
        let id = parse_id(toks.next().expect("content line is non-empty"), path, line)?;
        let rest: Vec<&str> = toks.collect();
        let sparse = rest.iter().any(|t| t.contains(':'));
        let mut entries = Vec::with_capacity(rest.len());
        if sparse {
            for tok in &rest {
                let (idx, val) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::parse(path, line, format!("expected idx:val, got {tok:?}")))?;
                let idx: usize = idx
                    .parse()
                    .map_err(|_| Error::parse(path, line, format!("invalid feature index {idx:?}")))?;
                let val = parse_value(val, path, line)?;
                dim = dim.max(idx + 1);
                entries.push((idx, val));
            }
        } else {
            match dense_width {
                Some((w, first)) if w != rest.len() => {
                    return Err(Error::parse(
                        path,
                        line,
                        format!("row has {} values but line {first} has {w}", rest.len()),
                    ))
                }
                None => dense_width = Some((rest.len(), line)),
                _ => {}
            }
            for (idx, tok) in rest.iter().enumerate() {
                entries.push((idx, parse_value(tok, path, line)?));
            }
            dim = dim.max(rest.len());
        }
        rows.push((id, entries));
    }

    let graph = graph.with_extra_nodes(rows.iter().map(|(id, _)| *id));
    let n = graph.node_count();
    let mut values = vec![0.0; n * dim];
    for (id, entries) in rows {
        let v = graph.compact_id(id).expect("feature ids were added to the graph") as usize;
        for (idx, val) in entries {
            values[v * dim + idx] = val;
        }
    }
    graph.with_features(kind, dim, values)
}

fn parse_value(tok: &str, path: &Path, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::parse(path, line, format!("invalid feature value {tok:?}")))
}

pub fn load_communities(path: impl AsRef<Path>, graph: &AttributedGraph) -> Result<CommunityCollection> {
    let path = path.as_ref();
    read_communities(open(path)?, path, graph)
}

/// One community per line in original ids. Line order is preserved; a node
/// may appear on several lines.
pub fn read_communities<R: BufRead>(reader: R, path: &Path, graph: &AttributedGraph) -> Result<CommunityCollection> {
    let mut communities = Vec::new();
    for item in content_lines(reader, path) {
        let (line, text) = item?;
        let mut members = Vec::new();
        for tok in text.split_whitespace() {
            let id = parse_id(tok, path, line)?;
            let v = graph
                .compact_id(id)
                .ok_or_else(|| Error::Validation(format!("{}:{line}: unknown node id {id}", path.display())))?;
            members.push(v);
        }
        communities.push(members);
    }
    CommunityCollection::new(communities)
}

pub fn write_communities<W: Write>(
    mut out: W,
    communities: &CommunityCollection,
    graph: &AttributedGraph,
) -> std::io::Result<()> {
    for c in communities.iter() {
        let mut ids: Vec<u64> = c.iter().map(|&v| graph.original_id(v)).collect();
        ids.sort_unstable();
        let line: Vec<String> = ids.iter().map(u64::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn save_communities(
    path: impl AsRef<Path>,
    communities: &CommunityCollection,
    graph: &AttributedGraph,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_communities(&mut out, communities, graph)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Compact ids of a community, translated back to original ids.
pub fn original_ids(graph: &AttributedGraph, members: &[NodeId]) -> Vec<u64> {
    members.iter().map(|&v| graph.original_id(v)).collect()
}
