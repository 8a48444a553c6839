//! Model assembly: every trainable parameter, tape staging, and checkpoints.
//!
//! The full model is the union of three parameter families, all living in
//! one flat [`ParamMap`] keyed by dotted names:
//!
//! * `enc.l{k}.*` — encoder weights, biases, and PReLU slopes per layer;
//! * `agg.*`, `pred.*` — candidate-scoring aggregator and probability head;
//! * `proj.{v,e}.*` — node and hyperedge projection heads for contrast.
//!
//! [`init_model`] draws them all from the `"init"` stream of one seed, in a
//! fixed order, so a seed pins every initial weight.  Staging puts the map
//! onto a tape either as leaves (training: gradients flow) or constants
//! (evaluation: the tape skips their backward work), and
//! [`collect_grads`] gathers gradients back under the same names for the
//! optimizer.
//!
//! Checkpoints are versioned JSON documents mapping each name to its shape
//! and row-major values.  Values survive a save/load cycle bit-exactly;
//! non-finite parameters are refused at save time since JSON cannot
//! round-trip them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contrast::{self, ProjectorConfig};
use crate::encoder::{self, EncoderConfig};
use crate::error::{Error, Result};
use crate::numkit::{Grads, Mat, ParamMap, Tape, TensorId};
use crate::rng::SeedTree;
use crate::scorer;

/// Shape of the whole model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelConfig {
    /// Raw feature dimension `F` (encoder input).
    pub in_dim: usize,
    /// Embedding dimension `d`.
    pub dim: usize,
    /// Encoder layers (full node→edge→node passes).
    pub layers: usize,
    /// Projector hidden width; conventionally `d`.
    pub d_proj: usize,
}

impl ModelConfig {
    /// Standard configuration: `d_proj = d`.
    pub fn new(in_dim: usize, dim: usize, layers: usize) -> Self {
        ModelConfig { in_dim, dim, layers, d_proj: dim }
    }

    /// The encoder slice of this configuration.
    pub fn encoder(&self) -> EncoderConfig {
        EncoderConfig { in_dim: self.in_dim, dim: self.dim, layers: self.layers }
    }

    /// The projector slice of this configuration.
    pub fn projector(&self) -> ProjectorConfig {
        ProjectorConfig { dim: self.dim, d_proj: self.d_proj }
    }
}

/// Every parameter name and shape the configuration implies, in name order.
pub fn shape_spec(cfg: ModelConfig) -> BTreeMap<String, (usize, usize)> {
    let mut spec = BTreeMap::new();
    for k in 0..cfg.layers {
        let input = if k == 0 { cfg.in_dim } else { cfg.dim };
        spec.insert(format!("enc.l{k}.w_e"), (input, cfg.dim));
        spec.insert(format!("enc.l{k}.b_e"), (1, cfg.dim));
        spec.insert(format!("enc.l{k}.w_v"), (cfg.dim, cfg.dim));
        spec.insert(format!("enc.l{k}.b_v"), (1, cfg.dim));
        spec.insert(format!("enc.l{k}.slope"), (1, 1));
    }
    spec.insert("agg.w_prime".into(), (cfg.dim, cfg.dim));
    spec.insert("agg.w_dprime".into(), (cfg.dim, cfg.dim));
    spec.insert("agg.query".into(), (1, cfg.dim));
    spec.insert("pred.w".into(), (cfg.dim, 1));
    spec.insert("pred.b".into(), (1, 1));
    for h in ["proj.v", "proj.e"] {
        spec.insert(format!("{h}.w1"), (cfg.dim, cfg.d_proj));
        spec.insert(format!("{h}.b1"), (1, cfg.d_proj));
        spec.insert(format!("{h}.w2"), (cfg.d_proj, cfg.dim));
        spec.insert(format!("{h}.b2"), (1, cfg.dim));
    }
    spec
}

/// Draws a complete fresh parameter set from `seed` (via the `"init"`
/// stream): encoder, then scorer, then projectors, in a fixed order.
pub fn init_model(cfg: ModelConfig, seed: u64) -> ParamMap {
    let mut rng = SeedTree::new(seed).stream("init");
    let mut params = ParamMap::new();
    encoder::init_params(&cfg.encoder(), &mut rng, &mut params);
    scorer::init_params(cfg.dim, &mut rng, &mut params);
    contrast::init_params(cfg.projector(), &mut rng, &mut params);
    params
}

/// Checks that `params` has exactly the names and shapes `cfg` implies.
pub fn validate_params(params: &ParamMap, cfg: ModelConfig) -> Result<()> {
    let spec = shape_spec(cfg);
    for (name, &(r, c)) in &spec {
        match params.get(name) {
            None => {
                return Err(Error::Checkpoint(format!("missing parameter {name:?}")));
            }
            Some(m) if m.dim() != (r, c) => {
                return Err(Error::Checkpoint(format!(
                    "parameter {name:?} has shape {:?}, expected ({r}, {c})",
                    m.dim()
                )));
            }
            Some(_) => {}
        }
    }
    if let Some(extra) = params.keys().find(|k| !spec.contains_key(*k)) {
        return Err(Error::Checkpoint(format!("unexpected parameter {extra:?}")));
    }
    Ok(())
}

/// Stages every parameter as a gradient-carrying leaf; returns name → id.
pub fn stage_trainable(tape: &mut Tape, params: &ParamMap) -> BTreeMap<String, TensorId> {
    params.iter().map(|(n, v)| (n.clone(), tape.leaf(v.clone()))).collect()
}

/// Stages every parameter as a constant (no gradient bookkeeping);
/// returns name → id.  Use for evaluation passes.
pub fn stage_frozen(tape: &mut Tape, params: &ParamMap) -> BTreeMap<String, TensorId> {
    params.iter().map(|(n, v)| (n.clone(), tape.constant(v.clone()))).collect()
}

/// Gathers gradients for staged parameters back under their names.
/// Parameters the loss never touched are absent from the result.
pub fn collect_grads(grads: &Grads, staged: &BTreeMap<String, TensorId>) -> ParamMap {
    staged
        .iter()
        .filter_map(|(name, &id)| grads.get(id).map(|g| (name.clone(), g.clone())))
        .collect()
}

/// On-disk checkpoint format version this build reads and writes.
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CheckpointEntry {
    shape: (usize, usize),
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    version: u32,
    params: BTreeMap<String, CheckpointEntry>,
}

/// Writes `params` to `path` as a versioned JSON checkpoint.
///
/// Fails on non-finite values: JSON has no NaN/∞ literal, so such a
/// checkpoint could not round-trip.
pub fn save_checkpoint(path: &Path, params: &ParamMap) -> Result<()> {
    let mut file = CheckpointFile { version: CHECKPOINT_VERSION, params: BTreeMap::new() };
    for (name, m) in params {
        if let Some(bad) = m.iter().find(|v| !v.is_finite()) {
            return Err(Error::Checkpoint(format!(
                "parameter {name:?} contains non-finite value {bad}"
            )));
        }
        file.params.insert(
            name.clone(),
            CheckpointEntry { shape: m.dim(), values: m.iter().copied().collect() },
        );
    }
    std::fs::write(path, serde_json::to_vec_pretty(&file)?)?;
    Ok(())
}

/// Reads a checkpoint written by [`save_checkpoint`].  Values are restored
/// bit-exactly.
pub fn load_checkpoint(path: &Path) -> Result<ParamMap> {
    let bytes = std::fs::read(path)?;
    let file: CheckpointFile = serde_json::from_slice(&bytes).map_err(|e| {
        Error::Checkpoint(format!("{}: not a readable checkpoint: {e}", path.display()))
    })?;
    if file.version != CHECKPOINT_VERSION {
        return Err(Error::Checkpoint(format!(
            "{}: version {} unsupported (this build reads {CHECKPOINT_VERSION})",
            path.display(),
            file.version
        )));
    }
    let mut params = ParamMap::new();
    for (name, entry) in file.params {
        let (r, c) = entry.shape;
        if entry.values.len() != r * c {
            return Err(Error::Checkpoint(format!(
                "parameter {name:?} declares shape ({r}, {c}) but carries {} values",
                entry.values.len()
            )));
        }
        let m = Mat::from_shape_vec((r, c), entry.values)
            .map_err(|e| Error::Checkpoint(format!("parameter {name:?}: {e}")))?;
        params.insert(name, m);
    }
    Ok(params)
}
