//! Hypergraph data model: incidence structure, degrees, clique expansion,
//! and train/validation/test splits.
//!
//! A [`Hypergraph`] is immutable after construction and validated up front:
//! dense 0-based node ids, no duplicate members within a hyperedge, no empty
//! hyperedges, one feature row per node.  Node features are held sparsely
//! (bag-of-words features are overwhelmingly zero) with the dense view
//! available for small instances via [`Hypergraph::feature_matrix`].
//!
//! The message-passing operators the encoder consumes — the degree-normalised
//! incidence in both directions — are built by [`message_ops`], which also
//! serves augmented views: a view is just a different membership list over
//! the same node index space.

pub mod io;
pub mod synth;

use std::collections::HashSet;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{Csr, Mat, SparseMat};
use crate::rng::SeedTree;

/// An immutable, validated hypergraph.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    num_nodes: usize,
    /// Member lists, each sorted ascending.
    edges: Vec<Vec<usize>>,
    feature_dim: usize,
    /// `|V|×F` node features, sparse with precomputed transpose.
    features: Rc<SparseMat>,
    /// `|V|×|E|` incidence with precomputed transpose.
    incidence: Rc<SparseMat>,
    edge_weights: Vec<f64>,
    node_labels: Option<Vec<String>>,
    /// Sorted member lists of every observed hyperedge, for O(1) collision
    /// checks by the negative samplers.
    observed: HashSet<Vec<usize>>,
}

impl Hypergraph {
    /// Builds and validates a hypergraph with unit edge weights and no
    /// labels.  `features` is one row per node.
    pub fn new(
        num_nodes: usize,
        hyperedges: Vec<Vec<usize>>,
        features: Vec<Vec<f64>>,
    ) -> Result<Hypergraph> {
        Hypergraph::with_parts(num_nodes, hyperedges, features, None, None)
    }

    /// Full constructor with optional per-hyperedge weights and node labels.
    pub fn with_parts(
        num_nodes: usize,
        hyperedges: Vec<Vec<usize>>,
        features: Vec<Vec<f64>>,
        edge_weights: Option<Vec<f64>>,
        node_labels: Option<Vec<String>>,
    ) -> Result<Hypergraph> {
        if features.len() != num_nodes {
            return Err(Error::InvalidHypergraph(format!(
                "feature rows ({}) must equal num_nodes ({num_nodes})",
                features.len()
            )));
        }
        let feature_dim = features.first().map_or(0, Vec::len);
        let mut sparse_rows = Vec::with_capacity(features.len());
        for (i, row) in features.iter().enumerate() {
            if row.len() != feature_dim {
                return Err(Error::InvalidHypergraph(format!(
                    "feature row {i} has length {} but row 0 has {feature_dim}",
                    row.len()
                )));
            }
            sparse_rows.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(c, &v)| (c, v))
                    .collect(),
            );
        }
        Hypergraph::from_sparse_features(
            num_nodes,
            hyperedges,
            feature_dim,
            sparse_rows,
            edge_weights,
            node_labels,
        )
    }

    /// Constructor taking features as per-node `(column, value)` lists, for
    /// large mostly-zero feature matrices that should never exist densely.
    pub fn from_sparse_features(
        num_nodes: usize,
        hyperedges: Vec<Vec<usize>>,
        feature_dim: usize,
        features: Vec<Vec<(usize, f64)>>,
        edge_weights: Option<Vec<f64>>,
        node_labels: Option<Vec<String>>,
    ) -> Result<Hypergraph> {
        if features.len() != num_nodes {
            return Err(Error::InvalidHypergraph(format!(
                "feature rows ({}) must equal num_nodes ({num_nodes})",
                features.len()
            )));
        }
        for (i, row) in features.iter().enumerate() {
            for &(c, v) in row {
                if c >= feature_dim {
                    return Err(Error::InvalidHypergraph(format!(
                        "feature row {i} references column {c} but the dimension is {feature_dim}"
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::InvalidHypergraph(format!(
                        "feature row {i} contains non-finite value {v}"
                    )));
                }
            }
        }

        let mut edges = hyperedges;
        for (j, members) in edges.iter_mut().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidHypergraph(format!("hyperedge {j} is empty")));
            }
            members.sort_unstable();
            if members.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidHypergraph(format!(
                    "hyperedge {j} has a duplicate member"
                )));
            }
            if let Some(&max) = members.last() {
                if max >= num_nodes {
                    return Err(Error::InvalidHypergraph(format!(
                        "hyperedge {j} references node {max} but num_nodes is {num_nodes}"
                    )));
                }
            }
        }

        let edge_weights = match edge_weights {
            Some(w) => {
                if w.len() != edges.len() {
                    return Err(Error::InvalidHypergraph(format!(
                        "edge_weights length ({}) must equal hyperedge count ({})",
                        w.len(),
                        edges.len()
                    )));
                }
                if let Some(bad) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                    return Err(Error::InvalidHypergraph(format!(
                        "edge weight {bad} is not a positive finite number"
                    )));
                }
                w
            }
            None => vec![1.0; edges.len()],
        };

        if let Some(labels) = &node_labels {
            if labels.len() != num_nodes {
                return Err(Error::InvalidHypergraph(format!(
                    "node_labels length ({}) must equal num_nodes ({num_nodes})",
                    labels.len()
                )));
            }
        }

        let mut feat_triplets = Vec::new();
        for (i, row) in features.iter().enumerate() {
            for &(c, v) in row {
                if v != 0.0 {
                    feat_triplets.push((i, c, v));
                }
            }
        }
        let features = Rc::new(SparseMat::new(Csr::from_triplets(
            num_nodes,
            feature_dim,
            &feat_triplets,
        )));

        let mut inc_triplets = Vec::new();
        for (j, members) in edges.iter().enumerate() {
            for &i in members {
                inc_triplets.push((i, j, 1.0));
            }
        }
        let incidence = Rc::new(SparseMat::new(Csr::from_triplets(
            num_nodes,
            edges.len(),
            &inc_triplets,
        )));

        let observed = edges.iter().cloned().collect();

        Ok(Hypergraph {
            num_nodes,
            edges,
            feature_dim,
            features,
            incidence,
            edge_weights,
            node_labels,
            observed,
        })
    }

    /// Number of nodes `|V|`.
    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// Number of hyperedges `|E|`.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Feature dimension `F`.
    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    /// Sorted member list of hyperedge `j`.
    pub fn edge(&self, j: usize) -> &[usize] {
        &self.edges[j]
    }

    /// All member lists.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Per-hyperedge weights (all 1.0 unless supplied).
    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    /// Original node labels, if the source recorded any.
    pub fn node_labels(&self) -> Option<&[String]> {
        self.node_labels.as_deref()
    }

    /// The `|V|×|E|` incidence matrix (with its transpose).
    pub fn incidence(&self) -> &Rc<SparseMat> {
        &self.incidence
    }

    /// The `|V|×F` sparse feature matrix (with its transpose).
    pub fn features(&self) -> &Rc<SparseMat> {
        &self.features
    }

    /// Dense copy of the features.  Only sensible for small instances.
    pub fn feature_matrix(&self) -> Mat {
        self.features.fwd.to_dense()
    }

    /// True iff `members` (any order, no duplicates) is an observed
    /// hyperedge.
    pub fn contains_edge(&self, members: &[usize]) -> bool {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        self.observed.contains(&sorted)
    }

    /// Sorted member lists of all observed hyperedges, for collision checks.
    pub fn observed_set(&self) -> &HashSet<Vec<usize>> {
        &self.observed
    }

    /// The hypergraph restricted to the hyperedges in `keep` (in that
    /// order), over the unchanged node set and features.  Used to hide
    /// held-out hyperedges from the encoder during training.
    pub fn edge_subgraph(&self, keep: &[usize]) -> Hypergraph {
        let edges: Vec<Vec<usize>> = keep.iter().map(|&j| self.edges[j].clone()).collect();
        let edge_weights: Vec<f64> = keep.iter().map(|&j| self.edge_weights[j]).collect();

        let mut inc_triplets = Vec::new();
        for (j, members) in edges.iter().enumerate() {
            for &i in members {
                inc_triplets.push((i, j, 1.0));
            }
        }
        let incidence = Rc::new(SparseMat::new(Csr::from_triplets(
            self.num_nodes,
            edges.len(),
            &inc_triplets,
        )));
        let observed = edges.iter().cloned().collect();

        Hypergraph {
            num_nodes: self.num_nodes,
            edges,
            feature_dim: self.feature_dim,
            features: Rc::clone(&self.features),
            incidence,
            edge_weights,
            node_labels: self.node_labels.clone(),
            observed,
        }
    }
}

/// Node and hyperedge degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeVectors {
    /// Weighted node degrees: `node_deg[i] = Σ_j w_j · h_ij`.
    pub node_deg: Vec<f64>,
    /// Hyperedge degrees: member counts.
    pub edge_deg: Vec<usize>,
}

/// Degrees of a hypergraph.
pub fn degrees(h: &Hypergraph) -> DegreeVectors {
    degrees_of(h.num_nodes, &h.edges, &h.edge_weights)
}

/// Degrees of an arbitrary membership list over `num_nodes` nodes — also
/// serves augmented views, where empty member lists are permitted and yield
/// zero degrees.
pub fn degrees_of(num_nodes: usize, edges: &[Vec<usize>], weights: &[f64]) -> DegreeVectors {
    let mut node_deg = vec![0.0; num_nodes];
    let mut edge_deg = Vec::with_capacity(edges.len());
    for (j, members) in edges.iter().enumerate() {
        edge_deg.push(members.len());
        for &i in members {
            node_deg[i] += weights[j];
        }
    }
    DegreeVectors { node_deg, edge_deg }
}

/// The degree-normalised message-passing operators of a membership list.
#[derive(Debug, Clone)]
pub struct MessageOps {
    /// `|E|×|V|` matrix `D_E⁻¹·𝐇ᵀ`: averages member-node rows per hyperedge.
    pub edge_from_node: Rc<SparseMat>,
    /// `|V|×|E|` matrix `D_V⁻¹·𝐇·W`: averages incident-hyperedge rows per
    /// node, each row weighted by its hyperedge weight.
    pub node_from_edge: Rc<SparseMat>,
}

/// Builds [`MessageOps`] for a membership list over `num_nodes` nodes.
///
/// A zero degree (possible in augmented views) yields an all-zero operator
/// row: the aggregated message for that node/hyperedge is zero rather than
/// undefined.
pub fn message_ops(num_nodes: usize, edges: &[Vec<usize>], weights: &[f64]) -> MessageOps {
    let deg = degrees_of(num_nodes, edges, weights);

    let mut efn = Vec::new();
    for (j, members) in edges.iter().enumerate() {
        let inv = if deg.edge_deg[j] == 0 { 0.0 } else { 1.0 / deg.edge_deg[j] as f64 };
        for &i in members {
            efn.push((j, i, inv));
        }
    }

    let mut nfe = Vec::new();
    for (j, members) in edges.iter().enumerate() {
        for &i in members {
            let inv = if deg.node_deg[i] == 0.0 { 0.0 } else { weights[j] / deg.node_deg[i] };
            nfe.push((i, j, inv));
        }
    }

    MessageOps {
        edge_from_node: Rc::new(SparseMat::new(Csr::from_triplets(edges.len(), num_nodes, &efn))),
        node_from_edge: Rc::new(SparseMat::new(Csr::from_triplets(num_nodes, edges.len(), &nfe))),
    }
}

/// A disjoint train/validation/test partition of hyperedge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Seed the partition was drawn from.
    pub seed: u64,
    /// Training hyperedge indices.
    pub train: Vec<usize>,
    /// Validation hyperedge indices.
    pub val: Vec<usize>,
    /// Test hyperedge indices.
    pub test: Vec<usize>,
}

impl SplitSpec {
    /// Checks that the three lists partition `0..num_edges` exactly.
    pub fn validate(&self, num_edges: usize) -> Result<()> {
        let mut seen = vec![false; num_edges];
        for &idx in self.train.iter().chain(&self.val).chain(&self.test) {
            if idx >= num_edges {
                return Err(Error::Usage(format!(
                    "split references hyperedge {idx} but the hypergraph has {num_edges}"
                )));
            }
            if seen[idx] {
                return Err(Error::Usage(format!("split lists hyperedge {idx} twice")));
            }
            seen[idx] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::Usage(format!("split omits hyperedge {missing}")));
        }
        Ok(())
    }
}

/// Uniformly random disjoint 3-way partition of the hyperedges.
///
/// Bucket sizes are floors of `ratios · |E|` with every leftover index going
/// to train, so the partition is exact and deterministic given `seed`.
pub fn split(h: &Hypergraph, seed: u64, ratios: (f64, f64, f64)) -> Result<SplitSpec> {
    let (rt, rv, rs) = ratios;
    for r in [rt, rv, rs] {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Usage(format!("split ratio {r} outside (0, 1)")));
        }
    }
    if (rt + rv + rs - 1.0).abs() > 1e-9 {
        return Err(Error::Usage(format!("split ratios sum to {}, not 1", rt + rv + rs)));
    }

    let n = h.num_edges();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = SeedTree::new(seed).stream("split");
    use rand::seq::SliceRandom;
    order.shuffle(&mut rng);

    let n_val = (rv * n as f64).floor() as usize;
    let n_test = (rs * n as f64).floor() as usize;
    let n_train = n - n_val - n_test;

    Ok(SplitSpec {
        seed,
        train: order[..n_train].to_vec(),
        val: order[n_train..n_train + n_val].to_vec(),
        test: order[n_train + n_val..].to_vec(),
    })
}

/// Pairwise co-occurrence graph of a hypergraph: `(u, v)` are adjacent iff
/// some hyperedge contains both.
#[derive(Debug, Clone)]
pub struct CliqueExpansion {
    /// Sorted, deduplicated neighbour lists; no self loops.
    neighbors: Vec<Vec<usize>>,
}

/// Builds the clique expansion.
pub fn clique_expand(h: &Hypergraph) -> CliqueExpansion {
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); h.num_nodes()];
    for members in h.edges() {
        for (a, &u) in members.iter().enumerate() {
            for &v in &members[a + 1..] {
                neighbors[u].push(v);
                neighbors[v].push(u);
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
        list.dedup();
    }
    CliqueExpansion { neighbors }
}

impl CliqueExpansion {
    /// Number of nodes.
    pub fn num_nodes(&self) -> usize {
        self.neighbors.len()
    }

    /// Sorted neighbours of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[u]
    }

    /// True iff `u` and `v` co-occur in some hyperedge.
    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// Number of undirected pairs.
    pub fn pair_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }
}
