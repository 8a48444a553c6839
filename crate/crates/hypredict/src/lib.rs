//! Hyperedge prediction for hypergraph-structured data.
//!
//! A hypergraph generalises a graph by letting a single edge join any number
//! of nodes: a paper with five authors, a transaction with three parties, an
//! email thread with a dozen recipients.  Predicting *hyperedges* — "will this
//! particular group of nodes form an interaction?" — is therefore a set-level
//! question, and this crate implements a full pipeline for answering it:
//!
//! * [`hgraph`] — hypergraph container, incidence structure, JSON/sparse I/O,
//!   and seeded synthetic dataset generators.
//! * [`numkit`] — the numeric core: CSR sparse matrices, a reverse-mode
//!   autodiff tape over dense matrices, the Adam optimiser, and a
//!   finite-difference gradient checker.
//! * [`encoder`] — a two-stage message-passing encoder that alternates
//!   node→hyperedge and hyperedge→node aggregation to produce embeddings for
//!   both nodes and hyperedges.
//! * [`scorer`] — turns the node embeddings of a candidate group into a single
//!   probability, either by attention-weighted aggregation with max-pooling or
//!   by a simpler max-min pooling baseline.
//! * [`augment`] — hyperedge-aware augmentation: builds corrupted views of the
//!   hypergraph by deleting a controlled fraction of each hyperedge's members
//!   and masking feature columns.
//! * [`contrast`] — the dual contrastive objective that pulls the two views'
//!   node embeddings (and hyperedge embeddings) towards each other.
//! * [`negsample`] — sized negative sampling: uniform groups, motif-style
//!   neighbourhood growth, and clique-adjacent single-node substitutions.
//! * [`trainer`] — batching, the combined loss, ranking metrics (AUROC /
//!   average precision), the train/validation/test protocol, and checkpoints.
//! * [`cli`] — the `hypredict` command-line front end over the above.
//!
//! The crate is self-contained and single-threaded by design; every run is
//! reproducible from one integer seed (see [`rng`]).
//!
//! # Quick taste
//!
//! ```
//! use hypredict::encoder::encode;
//! use hypredict::hgraph::{message_ops, Hypergraph};
//! use hypredict::model::{init_model, stage_frozen, ModelConfig};
//! use hypredict::numkit::Tape;
//!
//! // Four nodes with 3-dim features, two hyperedges.
//! let hg = Hypergraph::new(
//!     4,
//!     vec![vec![0, 1, 2], vec![2, 3]],
//!     vec![vec![1.0, 0.0, 0.0]; 4],
//! )
//! .unwrap();
//!
//! let cfg = ModelConfig::new(hg.feature_dim(), 8, 1);
//! let params = init_model(cfg, 7);
//!
//! let mut tape = Tape::new();
//! let staged = stage_frozen(&mut tape, &params);
//! let ops = message_ops(hg.num_nodes(), hg.edges(), hg.edge_weights());
//! let out = encode(&mut tape, &staged, &cfg.encoder(), &ops, hg.features(), None);
//! assert_eq!(tape.value(out.nodes).nrows(), 4);
//! assert_eq!(tape.value(out.edges).nrows(), 2);
//! ```

pub mod augment;
pub mod cli;
pub mod contrast;
pub mod encoder;
pub mod error;
pub mod hgraph;
pub mod model;
pub mod negsample;
pub mod numkit;
pub mod rng;
pub mod scorer;
pub mod trainer;

pub use error::{Error, Result};
