//! Ingestion of edge-list graphs and dense vector datasets, the dataset
//! preprocessing used by the experiments, and deterministic subsampling.
//!
//! Edge lists follow the SNAP convention: UTF-8 text, one edge per line as
//! two whitespace-separated integers, `#`-prefixed comment lines. Raw node
//! ids may be sparse; they are remapped to dense `0..n-1` (sorted by
//! original id) and the mapping can be persisted as a two-column
//! `original_id dense_id` sidecar.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::objectives::domset::Graph;
use crate::objectives::exemplar::VectorDataset;

/// Loaded graph plus the dense-id → original-id mapping.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `id_map[dense] = original`.
    pub id_map: Vec<u64>,
}

pub fn load_edge_list(path: &Path, directed: bool) -> Result<LoadedGraph> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text, directed, path)
}

fn parse_edge_list(text: &str, directed: bool, path: &Path) -> Result<LoadedGraph> {
    let mut raw_edges: Vec<(u64, u64)> = Vec::new();
    let mut ids: BTreeSet<u64> = BTreeSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u64> {
            tok.ok_or(())
                .and_then(|t| t.parse::<u64>().map_err(|_| ()))
                .map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    message: format!("expected two integer node ids, got {line:?}"),
                })
        };
        let u = parse(tokens.next())?;
        let v = parse(tokens.next())?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("expected two integer node ids, got {line:?}"),
            });
        }
        ids.insert(u);
        ids.insert(v);
        raw_edges.push((u, v));
    }
    if ids.is_empty() {
        return Err(Error::Domain(format!(
            "edge list {} holds no edges",
            path.display()
        )));
    }
    let id_map: Vec<u64> = ids.into_iter().collect();
    let dense =
        |orig: u64| -> u32 { id_map.binary_search(&orig).expect("id collected above") as u32 };
    let edges: Vec<(u32, u32)> = raw_edges
        .into_iter()
        .map(|(u, v)| (dense(u), dense(v)))
        .collect();
    let graph = Graph::from_edges(id_map.len(), &edges, directed)?;
    Ok(LoadedGraph { graph, id_map })
}

/// Writes a graph back out in edge-list form (dense ids, one edge per
/// line; undirected edges once with `u < v`). Reloading yields an
/// identical adjacency structure for graphs without isolated nodes.
pub fn write_edge_list(graph: &Graph, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").expect("string write cannot fail");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Persists the dense-id mapping as `original_id dense_id` lines.
pub fn write_id_map(id_map: &[u64], path: &Path) -> Result<()> {
    let mut out = String::new();
    for (dense, original) in id_map.iter().enumerate() {
        writeln!(out, "{original} {dense}").expect("string write cannot fail");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Column preprocessing applied after loading a vector dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Preprocessing {
    #[default]
    None,
    /// Subtract the column-wise mean.
    MeanShift,
    /// Subtract the column-wise mean, then scale each row to unit L2 norm
    /// (zero rows stay zero).
    MeanShiftUnitNorm,
}

pub fn load_vectors(
    path: &Path,
    delimiter: char,
    preprocessing: Preprocessing,
) -> Result<VectorDataset> {
    let text = fs::read_to_string(path)?;
    parse_vectors(&text, delimiter, preprocessing, path)
}

fn parse_vectors(
    text: &str,
    delimiter: char,
    preprocessing: Preprocessing,
    path: &Path,
) -> Result<VectorDataset> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (col, token) in line.split(delimiter).enumerate() {
            let token = token.trim();
            let value: f64 = token.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("column {}: {token:?} is not a number", col + 1),
            })?;
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno + 1,
                    message: format!("row has {} columns, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    let dataset = VectorDataset::from_rows(rows)?;
    Ok(preprocess(dataset, preprocessing))
}

pub fn preprocess(dataset: VectorDataset, preprocessing: Preprocessing) -> VectorDataset {
    match preprocessing {
        Preprocessing::None => dataset,
        Preprocessing::MeanShift => mean_shift(dataset),
        Preprocessing::MeanShiftUnitNorm => unit_norm(mean_shift(dataset)),
    }
}

fn mean_shift(dataset: VectorDataset) -> VectorDataset {
    let mean = dataset.mean();
    let n = dataset.len();
    let dim = dataset.dim();
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        for (x, m) in dataset.row(i).iter().zip(&mean) {
            data.push(x - m);
        }
    }
    VectorDataset::new(n, dim, data).expect("shape preserved")
}

fn unit_norm(dataset: VectorDataset) -> VectorDataset {
    let n = dataset.len();
    let dim = dataset.dim();
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        let row = dataset.row(i);
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            data.extend_from_slice(row);
        } else {
            data.extend(row.iter().map(|x| x / norm));
        }
    }
    VectorDataset::new(n, dim, data).expect("shape preserved")
}

/// Uniform sample of `size` ids from `0..n` without replacement, sorted
/// ascending, deterministic for a fixed seed.
pub fn subsample(n: usize, size: usize, seed: u64) -> Result<Vec<u32>> {
    if size > n {
        return Err(Error::Domain(format!(
            "cannot sample {size} ids from a universe of {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ids: Vec<u32> = rand::seq::index::sample(&mut rng, n, size)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    ids.sort_unstable();
    Ok(ids)
}
