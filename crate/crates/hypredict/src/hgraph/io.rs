//! Hypergraph and split (de)serialisation, plus the citation-file converter.
//!
//! The on-disk hypergraph format is a UTF-8 JSON document:
//!
//! ```json
//! {
//!   "num_nodes": 2,
//!   "features": [[1.0], [2.0]],
//!   "hyperedges": [[0, 1]],
//!   "edge_weights": [1.0],      // optional, defaults to all 1.0
//!   "node_labels": ["a", "b"]   // optional, original ids for round-tripping
//! }
//! ```
//!
//! Splits are `{"seed": .., "train": [..], "val": [..], "test": [..]}`.
//!
//! [`ingest_citation`] converts the classic citation-network layout — a
//! `.content` file of `id <TAB> f_1 .. f_F <TAB> class` rows and a `.cites`
//! file of `cited citing` pairs — into a hypergraph where each document that
//! cites anything forms one hyperedge containing itself and everything it
//! cites.  Documents appearing only in `.cites` but not `.content` are
//! skipped (counted as dangling), duplicate hyperedges are merged, and
//! single-member hyperedges are kept and reported rather than silently
//! dropped.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hgraph::{Hypergraph, SplitSpec};

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphFile {
    num_nodes: usize,
    features: Vec<Vec<f64>>,
    hyperedges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node_labels: Option<Vec<String>>,
}

/// Reads and validates a hypergraph JSON file.
pub fn load_hypergraph(path: &Path) -> Result<Hypergraph> {
    let file = File::open(path)
        .map_err(|e| Error::Usage(format!("cannot open {}: {e}", path.display())))?;
    let parsed: HypergraphFile = serde_json::from_reader(BufReader::new(file))?;
    Hypergraph::with_parts(
        parsed.num_nodes,
        parsed.hyperedges,
        parsed.features,
        parsed.edge_weights,
        parsed.node_labels,
    )
}

/// Writes a hypergraph as JSON with dense feature rows.
pub fn save_hypergraph(h: &Hypergraph, path: &Path) -> Result<()> {
    let mut features = Vec::with_capacity(h.num_nodes());
    for i in 0..h.num_nodes() {
        let mut row = vec![0.0; h.feature_dim()];
        let (cols, vals) = h.features().fwd.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            row[c] = v;
        }
        features.push(row);
    }
    let doc = HypergraphFile {
        num_nodes: h.num_nodes(),
        features,
        hyperedges: h.edges().to_vec(),
        edge_weights: if h.edge_weights().iter().all(|&w| w == 1.0) {
            None
        } else {
            Some(h.edge_weights().to_vec())
        },
        node_labels: h.node_labels().map(<[String]>::to_vec),
    };
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, &doc)?;
    out.flush()?;
    Ok(())
}

/// Reads a split file and checks it partitions `0..num_edges`.
pub fn load_split(path: &Path, num_edges: usize) -> Result<SplitSpec> {
    let file = File::open(path)
        .map_err(|e| Error::Usage(format!("cannot open {}: {e}", path.display())))?;
    let split: SplitSpec = serde_json::from_reader(BufReader::new(file))?;
    split.validate(num_edges)?;
    Ok(split)
}

/// Writes a split file.
pub fn save_split(split: &SplitSpec, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer(&mut out, split)?;
    out.flush()?;
    Ok(())
}

/// What [`ingest_citation`] found, for the CLI summary line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    /// Documents with a feature row.
    pub num_nodes: usize,
    /// Hyperedges after merging duplicates.
    pub num_edges: usize,
    /// Feature dimension.
    pub feature_dim: usize,
    /// Hyperedges with exactly one member (kept).
    pub singleton_edges: usize,
    /// Identical hyperedges merged away.
    pub duplicate_edges_merged: usize,
    /// Citation endpoints with no `.content` row, skipped.
    pub dangling_refs: usize,
}

/// Converts a `.content` + `.cites` pair into a hypergraph.
pub fn ingest_citation(content: &Path, cites: &Path) -> Result<(Hypergraph, IngestSummary)> {
    let content_file = File::open(content)
        .map_err(|e| Error::Usage(format!("cannot open {}: {e}", content.display())))?;

    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut features: Vec<Vec<f64>> = Vec::new();
    let mut feature_dim: Option<usize> = None;

    for (lineno, line) in BufReader::new(content_file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::Usage(format!(
                "{}: row {} has {} fields; expected id, features, class",
                content.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let id = fields[0].to_string();
        let raw = &fields[1..fields.len() - 1];
        if let Some(dim) = feature_dim {
            if raw.len() != dim {
                return Err(Error::Usage(format!(
                    "{}: row {} has {} features; expected {dim}",
                    content.display(),
                    lineno + 1,
                    raw.len()
                )));
            }
        } else {
            feature_dim = Some(raw.len());
        }
        let mut row = Vec::with_capacity(raw.len());
        for v in raw {
            row.push(v.parse::<f64>().map_err(|_| {
                Error::Usage(format!(
                    "{}: row {} has non-numeric feature value {v:?}",
                    content.display(),
                    lineno + 1
                ))
            })?);
        }
        if index.insert(id.clone(), ids.len()).is_some() {
            return Err(Error::Usage(format!(
                "{}: row {} repeats document id {id:?}",
                content.display(),
                lineno + 1
            )));
        }
        ids.push(id);
        features.push(row);
    }
    if ids.is_empty() {
        return Err(Error::Usage(format!("{}: no document rows", content.display())));
    }

    // One hyperedge per citing document: itself plus everything it cites.
    let cites_file =
        File::open(cites).map_err(|e| Error::Usage(format!("cannot open {}: {e}", cites.display())))?;
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut dangling = 0usize;
    for (lineno, line) in BufReader::new(cites_file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Usage(format!(
                "{}: row {} has {} fields; expected cited and citing ids",
                cites.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let (cited, citing) = (fields[0], fields[1]);
        match (index.get(cited), index.get(citing)) {
            (Some(&cited_ix), Some(&citing_ix)) => {
                groups.entry(citing_ix).or_insert_with(|| vec![citing_ix]).push(cited_ix);
            }
            _ => dangling += 1,
        }
    }

    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
    let mut keys: Vec<usize> = groups.keys().copied().collect();
    keys.sort_unstable();
    for k in keys {
        let mut members = groups.remove(&k).unwrap();
        members.sort_unstable();
        members.dedup();
        edges.push(members);
    }
    let before = edges.len();
    edges.sort();
    edges.dedup();
    let duplicate_edges_merged = before - edges.len();
    let singleton_edges = edges.iter().filter(|e| e.len() == 1).count();

    let summary = IngestSummary {
        num_nodes: ids.len(),
        num_edges: edges.len(),
        feature_dim: feature_dim.unwrap_or(0),
        singleton_edges,
        duplicate_edges_merged,
        dangling_refs: dangling,
    };
    let h = Hypergraph::with_parts(ids.len(), edges, features, None, Some(ids))?;
    Ok((h, summary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn tiny_graph() -> Hypergraph {
        Hypergraph::with_parts(
            3,
            vec![vec![0, 1], vec![1, 2]],
            vec![vec![1.0, 0.0], vec![0.0, 0.5], vec![2.0, 0.0]],
            None,
            Some(vec!["a".into(), "b".into(), "c".into()]),
        )
        .unwrap()
    }

    #[test]
    fn hypergraph_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        let h = tiny_graph();
        save_hypergraph(&h, &path).unwrap();
        let back = load_hypergraph(&path).unwrap();
        assert_eq!(back.num_nodes(), 3);
        assert_eq!(back.edges(), h.edges());
        assert_eq!(back.feature_matrix(), h.feature_matrix());
        assert_eq!(back.node_labels(), h.node_labels());
    }

    #[test]
    fn split_roundtrip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let split = SplitSpec { seed: 9, train: vec![1], val: vec![0], test: vec![2] };
        save_split(&split, &path).unwrap();
        assert_eq!(load_split(&path, 3).unwrap(), split);
        // Wrong edge count is rejected.
        assert!(load_split(&path, 4).is_err());
    }

    #[test]
    fn malformed_json_is_a_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{\"num_nodes\": 2,").unwrap();
        let err = load_hypergraph(&path).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        // serde_json reports the position of the failure.
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn duplicate_member_in_file_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.json");
        fs::write(
            &path,
            r#"{"num_nodes": 2, "features": [[1.0],[2.0]], "hyperedges": [[0,0]]}"#,
        )
        .unwrap();
        let err = load_hypergraph(&path).unwrap_err();
        assert!(err.to_string().contains("duplicate member"), "{err}");
    }

    #[test]
    fn ingest_builds_co_citation_hyperedges() {
        let dir = tempfile::tempdir().unwrap();
        let content = dir.path().join("x.content");
        let cites = dir.path().join("x.cites");
        fs::write(
            &content,
            "p1\t1\t0\t0\tAI\np2\t0\t1\t0\tML\np3\t0\t0\t1\tAI\np4\t1\t1\t0\tDB\n",
        )
        .unwrap();
        // p2 cites p1 and p3; p4 cites p1; p9 is dangling.
        fs::write(&cites, "p1 p2\np3 p2\np1 p4\np9 p2\n").unwrap();
        let (h, summary) = ingest_citation(&content, &cites).unwrap();

        assert_eq!(summary.num_nodes, 4);
        assert_eq!(summary.feature_dim, 3);
        assert_eq!(summary.dangling_refs, 1);
        assert_eq!(summary.num_edges, 2);
        assert_eq!(summary.singleton_edges, 0);
        // p2's hyperedge is {p1, p2, p3}; p4's is {p1, p4}.
        assert!(h.contains_edge(&[0, 1, 2]));
        assert!(h.contains_edge(&[0, 3]));
        assert_eq!(h.node_labels().unwrap()[1], "p2");
    }

    #[test]
    fn ingest_merges_duplicate_hyperedges() {
        let dir = tempfile::tempdir().unwrap();
        let content = dir.path().join("x.content");
        let cites = dir.path().join("x.cites");
        fs::write(&content, "a\t1\tX\nb\t0\tX\n").unwrap();
        // a cites b and b cites a: both hyperedges are {a, b}.
        fs::write(&cites, "b a\na b\n").unwrap();
        let (h, summary) = ingest_citation(&content, &cites).unwrap();
        assert_eq!(h.num_edges(), 1);
        assert_eq!(summary.duplicate_edges_merged, 1);
    }

    #[test]
    fn ingest_names_malformed_row() {
        let dir = tempfile::tempdir().unwrap();
        let content = dir.path().join("x.content");
        fs::write(&content, "a\t1\t0\tX\nb\t1\toops\tX\n").unwrap();
        let cites = dir.path().join("x.cites");
        fs::write(&cites, "").unwrap();
        let err = ingest_citation(&content, &cites).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }
}
