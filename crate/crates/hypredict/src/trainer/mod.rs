//! Training loop, losses, evaluation protocol, and model selection.
//!
//! One training run is a pure function of `(hypergraph, split, config)`:
//!
//! 1. Message passing only ever sees the **training subgraph** — validation
//!    and test hyperedges are hidden from the encoder so their prediction
//!    stays honest.
//! 2. Per step: a shuffled batch of positive hyperedges is paired 1:1 with
//!    motif (MNS) negatives grown on the training subgraph's clique
//!    expansion, every candidate is scored, and the binary cross-entropy
//!    [`prediction_loss`] is taken over the batch.  When contrastive
//!    learning is enabled, a fresh pair of masked views is drawn, encoded
//!    with the **same** weights, projected, and `β·L_con` joins the
//!    objective ([`total_loss`]).  One Adam step follows.
//! 3. After each epoch the four validation regimes (SNS/MNS/CNS/MIX
//!    negatives, fixed once per run at a 1:1 ratio) are scored; the
//!    checkpoint with the best regime-averaged validation AUROC is kept and
//!    the final report evaluates it on the four test regimes.
//!
//! The ablation grid from the experiments maps onto two internal gates —
//! which pooling the scorer uses and which augmentation (if any) feeds the
//! contrast branch — see [`Ablation::gates`].  With `β = 0` the contrast
//! branch is skipped entirely, including its random draws, so the loss
//! trajectory matches an attention-only run exactly.
//!
//! Per-epoch rows ([`EpochRow`], rendered by [`metrics_csv`]) carry the
//! mean prediction and contrast losses plus per-regime validation AUROC;
//! with a fixed seed the CSV is byte-identical across runs.

pub mod metrics;

pub use metrics::{auroc, average_precision};

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::augment::{make_views, AugmentKind};
use crate::encoder::{encode, EncoderConfig};
use crate::error::{Error, Result};
use crate::hgraph::{clique_expand, message_ops, Hypergraph, MessageOps, SplitSpec};
use crate::model::{
    collect_grads, init_model, stage_frozen, stage_trainable, ModelConfig,
};
use crate::negsample::{build_eval_sets, fill, NegativeSet, Regime};
use crate::numkit::{Adam, ParamMap, Tape, TensorId};
use crate::rng::SeedTree;
use crate::scorer::{score_candidate, Pooling};

/// Which parts of the full method a run enables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ablation {
    /// Max-min pooling, no contrastive learning.
    No,
    /// Max-min pooling, contrast over per-membership Bernoulli views.
    #[serde(rename = "CL")]
    Cl,
    /// Max-min pooling, contrast over hyperedge-aware (floor-rule) views.
    #[serde(rename = "HCL")]
    Hcl,
    /// Attention aggregation and hyperedge-aware contrast — the full model.
    #[serde(rename = "ALL")]
    All,
}

impl Ablation {
    /// Canonical spelling used on the command line and in files.
    pub fn tag(self) -> &'static str {
        match self {
            Ablation::No => "No",
            Ablation::Cl => "CL",
            Ablation::Hcl => "HCL",
            Ablation::All => "ALL",
        }
    }

    /// The internal switches this mode stands for.
    pub fn gates(self) -> Gates {
        match self {
            Ablation::No => Gates { attention: false, augment: None },
            Ablation::Cl => Gates { attention: false, augment: Some(AugmentKind::Bernoulli) },
            Ablation::Hcl => Gates { attention: false, augment: Some(AugmentKind::ExactFloor) },
            Ablation::All => Gates { attention: true, augment: Some(AugmentKind::ExactFloor) },
        }
    }
}

impl std::fmt::Display for Ablation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Ablation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "NO" => Ok(Ablation::No),
            "CL" => Ok(Ablation::Cl),
            "HCL" => Ok(Ablation::Hcl),
            "ALL" => Ok(Ablation::All),
            other => Err(Error::Usage(format!(
                "unknown ablation mode {other:?}; expected No, CL, HCL, or ALL"
            ))),
        }
    }
}

/// The two switches the ablation modes control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gates {
    /// `true`: attention aggregation; `false`: max-min pooling baseline.
    pub attention: bool,
    /// Augmentation feeding the contrast branch; `None` disables contrast.
    pub augment: Option<AugmentKind>,
}

fn default_batch() -> usize {
    32
}
fn default_dim() -> usize {
    64
}
fn default_layers() -> usize {
    1
}
fn default_lr() -> f64 {
    5e-3
}
fn default_wd() -> f64 {
    5e-4
}
fn default_beta() -> f64 {
    0.5
}
fn default_rate() -> f64 {
    0.5
}
fn default_epochs() -> usize {
    100
}
fn default_ablation() -> Ablation {
    Ablation::All
}

/// Hyperparameters of one training run.
///
/// Deserialisation treats every field as optional (missing fields take the
/// defaults below) but rejects unknown keys, so config-file typos fail loudly
/// instead of silently training with defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    /// Positives per step (negatives are paired 1:1).
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    /// Embedding dimension `d`.
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Encoder layers.
    #[serde(default = "default_layers")]
    pub layers: usize,
    /// Projector hidden width; omitted means `dim`.
    #[serde(default)]
    pub d_proj: Option<usize>,
    /// Adam learning rate.
    #[serde(default = "default_lr")]
    pub lr: f64,
    /// L2 weight-decay coefficient added to gradients.
    #[serde(default = "default_wd")]
    pub weight_decay: f64,
    /// Weight of the contrastive term.
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Membership mask rate for views.
    #[serde(default = "default_rate")]
    pub p_m: f64,
    /// Feature mask rate for views.
    #[serde(default = "default_rate")]
    pub p_f: f64,
    /// Fixed epoch budget (no early stopping).
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    /// Root seed; every random stream derives from it.
    #[serde(default)]
    pub seed: u64,
    /// Which parts of the method to enable.
    #[serde(default = "default_ablation")]
    pub ablation: Ablation,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: default_batch(),
            dim: default_dim(),
            layers: default_layers(),
            d_proj: None,
            lr: default_lr(),
            weight_decay: default_wd(),
            beta: default_beta(),
            p_m: default_rate(),
            p_f: default_rate(),
            epochs: default_epochs(),
            seed: 0,
            ablation: default_ablation(),
        }
    }
}

impl TrainConfig {
    /// Validates ranges; every violation is a usage error.
    pub fn validate(&self) -> Result<()> {
        fn bad(msg: String) -> Result<()> {
            Err(Error::Usage(msg))
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1".into());
        }
        if self.dim == 0 || self.layers == 0 || self.epochs == 0 {
            return bad("dim, layers, and epochs must all be at least 1".into());
        }
        if self.d_proj == Some(0) {
            return bad("d_proj must be at least 1 when given".into());
        }
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return bad(format!("lr must be a positive finite number, got {}", self.lr));
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return bad(format!("weight_decay must be ≥ 0, got {}", self.weight_decay));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return bad(format!("beta must be ≥ 0, got {}", self.beta));
        }
        for (name, p) in [("p_m", self.p_m), ("p_f", self.p_f)] {
            if !(0.0..1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1), got {p}"));
            }
        }
        Ok(())
    }

    /// Full model shape for a dataset with `in_dim` features.
    pub fn model_config(&self, in_dim: usize) -> ModelConfig {
        ModelConfig {
            in_dim,
            dim: self.dim,
            layers: self.layers,
            d_proj: self.d_proj.unwrap_or(self.dim),
        }
    }

    fn encoder_config(&self, in_dim: usize) -> EncoderConfig {
        EncoderConfig { in_dim, dim: self.dim, layers: self.layers }
    }
}

/// Binary cross-entropy over scored candidates:
/// `−(1/n) Σ [y·log ŷ + (1−y)·log(1−ŷ)]`, with `ŷ` clamped into
/// `[1e-12, 1−1e-12]` before the logarithms.
///
/// `scored` pairs each candidate's `1×1` probability tensor with its label.
///
/// # Panics
/// If `scored` is empty.
pub fn prediction_loss(tape: &mut Tape, scored: &[(TensorId, bool)]) -> TensorId {
    assert!(!scored.is_empty(), "prediction loss needs at least one candidate");
    let mut acc: Option<TensorId> = None;
    for &(y_hat, label) in scored {
        let clamped = tape.clamp(y_hat, 1e-12, 1.0 - 1e-12);
        let prob = if label {
            clamped
        } else {
            let neg = tape.scale(clamped, -1.0);
            tape.add_scalar(neg, 1.0)
        };
        let lg = tape.log(prob);
        acc = Some(match acc {
            None => lg,
            Some(prev) => tape.add(prev, lg),
        });
    }
    tape.scale(acc.unwrap(), -1.0 / scored.len() as f64)
}

/// The unified objective `L = L_pred + β·L_con`.
pub fn total_loss(tape: &mut Tape, l_pred: TensorId, l_con: TensorId, beta: f64) -> TensorId {
    let scaled = tape.scale(l_con, beta);
    tape.add(l_pred, scaled)
}

/// AUROC and average precision of one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeMetrics {
    /// Area under the ROC curve (ties ½).
    pub auroc: f64,
    /// Average precision.
    pub ap: f64,
}

/// Version tag written into report JSON.
pub const REPORT_VERSION: u32 = 1;

/// Final evaluation of a checkpoint on the four regimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Schema version of this document.
    pub version: u32,
    /// 1-based epoch whose checkpoint is reported; absent when evaluating
    /// a stored checkpoint of unknown provenance.
    pub best_epoch: Option<usize>,
    /// Validation metrics per regime (regimes whose sampler exhausted are
    /// absent).
    pub val: BTreeMap<Regime, RegimeMetrics>,
    /// Mean over available validation regimes.
    pub val_average: Option<RegimeMetrics>,
    /// Test metrics per regime.
    pub test: BTreeMap<Regime, RegimeMetrics>,
    /// Mean over available test regimes.
    pub test_average: Option<RegimeMetrics>,
    /// One line per unavailable regime.
    pub warnings: Vec<String>,
}

/// Renders the report as an aligned text table: regime columns plus the
/// average, one AUROC block and one AP block.
pub fn render_report(report: &EvalReport) -> String {
    let mut out = String::new();
    let cell = |v: Option<f64>| match v {
        Some(v) => format!("{v:>8.4}"),
        None => format!("{:>8}", "-"),
    };
    out.push_str(&format!("{:<6}", ""));
    for regime in Regime::ALL {
        out.push_str(&format!("{:>8}", regime.tag()));
    }
    out.push_str(&format!("{:>9}\n", "Average"));
    for (block, pick) in [
        ("AUROC", Box::new(|m: &RegimeMetrics| m.auroc) as Box<dyn Fn(&RegimeMetrics) -> f64>),
        ("AP", Box::new(|m: &RegimeMetrics| m.ap)),
    ] {
        out.push_str(block);
        out.push('\n');
        for (name, half, avg) in [
            ("val", &report.val, report.val_average),
            ("test", &report.test, report.test_average),
        ] {
            out.push_str(&format!("  {name:<4}"));
            for regime in Regime::ALL {
                out.push_str(&cell(half.get(&regime).map(&pick)));
            }
            out.push_str(&format!(" {}\n", cell(avg.as_ref().map(&pick))));
        }
    }
    out
}

/// One epoch's log line: mean losses and per-regime validation AUROC.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochRow {
    /// 1-based epoch number.
    pub epoch: usize,
    /// Mean prediction loss over the epoch's steps.
    pub l_pred: f64,
    /// Mean contrastive loss over the epoch's steps (0 when contrast is
    /// off).
    pub l_con: f64,
    /// Validation AUROC in regime order SNS, MNS, CNS, MIX; `None` when
    /// that regime's negatives were unavailable.
    pub val_auroc: [Option<f64>; 4],
    /// Mean over available regimes.
    pub val_auroc_avg: Option<f64>,
}

/// Renders per-epoch rows as the fixed-column metrics CSV:
/// `epoch,l_pred,l_con,val_auroc_sns,val_auroc_mns,val_auroc_cns,val_auroc_mix,val_auroc_avg`.
pub fn metrics_csv(rows: &[EpochRow]) -> String {
    let mut out = String::from(
        "epoch,l_pred,l_con,val_auroc_sns,val_auroc_mns,val_auroc_cns,val_auroc_mix,val_auroc_avg\n",
    );
    let cell = |v: Option<f64>| v.map_or_else(|| "nan".to_string(), |v| v.to_string());
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.epoch,
            row.l_pred,
            row.l_con,
            cell(row.val_auroc[0]),
            cell(row.val_auroc[1]),
            cell(row.val_auroc[2]),
            cell(row.val_auroc[3]),
            cell(row.val_auroc_avg),
        ));
    }
    out
}

/// Everything a finished run produces.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters of the best-validation epoch.
    pub params: ParamMap,
    /// Test-set report for those parameters.
    pub report: EvalReport,
    /// One row per epoch, in order.
    pub rows: Vec<EpochRow>,
    /// Wall-clock seconds spent in each epoch's optimisation steps
    /// (validation excluded).
    pub train_secs: Vec<f64>,
}

/// Trains with the gates implied by `cfg.ablation`.  See [`train_with_gates`].
pub fn train(h: &Hypergraph, split: &SplitSpec, cfg: &TrainConfig) -> Result<TrainOutcome> {
    train_with_gates(h, split, cfg, cfg.ablation.gates())
}

/// Trains with explicit gates (exposed so gating identities — e.g. `β = 0`
/// equals attention-without-contrast — can be checked directly).
pub fn train_with_gates(
    h: &Hypergraph,
    split: &SplitSpec,
    cfg: &TrainConfig,
    gates: Gates,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    split.validate(h.num_edges())?;
    if split.train.is_empty() || split.val.is_empty() || split.test.is_empty() {
        return Err(Error::Usage(
            "training needs non-empty train, validation, and test splits".into(),
        ));
    }

    let contrast_on = gates.augment.is_some() && cfg.beta > 0.0;
    let pooling = if gates.attention { Pooling::Attention } else { Pooling::MaxMin };
    let ecfg = cfg.encoder_config(h.feature_dim());

    // Message passing sees training hyperedges only.
    let h_train = h.edge_subgraph(&split.train);
    let ops_train = message_ops(h.num_nodes(), h_train.edges(), h_train.edge_weights());
    let exp_train = clique_expand(&h_train);
    let exp_full = clique_expand(h);
    let eval_sets = build_eval_sets(h, &exp_full, split, cfg.seed);
    if eval_sets.val.is_empty() || eval_sets.test.is_empty() {
        return Err(Error::Sampler(format!(
            "no evaluation regime could be built: {}",
            eval_sets.warnings.join("; ")
        )));
    }

    let mut params = init_model(cfg.model_config(h.feature_dim()), cfg.seed);
    let mut adam = Adam::new(cfg.lr).with_weight_decay(cfg.weight_decay);
    let tree = SeedTree::new(cfg.seed);
    let mut view_seeds = tree.stream("augment");

    let mut rows = Vec::with_capacity(cfg.epochs);
    let mut train_secs = Vec::with_capacity(cfg.epochs);
    let mut best: Option<(f64, usize, ParamMap)> = None;
    let mut global_step: u64 = 0;

    for epoch in 1..=cfg.epochs {
        let started = Instant::now();
        let mut pool = split.train.clone();
        pool.shuffle(&mut tree.stream_indexed("shuffle", epoch as u64));

        let mut l_pred_sum = 0.0;
        let mut l_con_sum = 0.0;
        let mut steps = 0usize;
        for batch in pool.chunks(cfg.batch_size) {
            let sizes: Vec<usize> = batch.iter().map(|&j| h.edge(j).len().max(2)).collect();
            let negatives = fill(
                h,
                &exp_train,
                Regime::Mns,
                &sizes,
                &mut tree.stream_indexed("mns", global_step),
            )?;

            let mut tape = Tape::new();
            let staged = stage_trainable(&mut tape, &params);
            let enc = encode(&mut tape, &staged, &ecfg, &ops_train, h.features(), None);

            let mut scored = Vec::with_capacity(batch.len() + negatives.len());
            for &j in batch {
                let s = score_candidate(&mut tape, &staged, enc.nodes, h.edge(j), pooling);
                scored.push((s.y_hat, true));
            }
            for members in &negatives {
                let s = score_candidate(&mut tape, &staged, enc.nodes, members, pooling);
                scored.push((s.y_hat, false));
            }
            let l_pred = prediction_loss(&mut tape, &scored);

            let loss = if contrast_on {
                let kind = gates.augment.expect("contrast_on implies a view kind");
                let (va, vb) =
                    make_views(&h_train, cfg.p_m, cfg.p_f, kind, view_seeds.gen())?;
                let ops_a = message_ops(h.num_nodes(), &va.edges, h_train.edge_weights());
                let ops_b = message_ops(h.num_nodes(), &vb.edges, h_train.edge_weights());
                let enc_a = encode(
                    &mut tape,
                    &staged,
                    &ecfg,
                    &ops_a,
                    h.features(),
                    Some(&va.feature_mask),
                );
                let enc_b = encode(
                    &mut tape,
                    &staged,
                    &ecfg,
                    &ops_b,
                    h.features(),
                    Some(&vb.feature_mask),
                );
                let (z1v, z1e) = crate::contrast::project(&mut tape, &staged, enc_a.nodes, enc_a.edges);
                let (z2v, z2e) = crate::contrast::project(&mut tape, &staged, enc_b.nodes, enc_b.edges);
                let l_con =
                    crate::contrast::dual_contrastive_loss(&mut tape, z1v, z2v, z1e, z2e);
                l_con_sum += tape.value(l_con)[[0, 0]];
                total_loss(&mut tape, l_pred, l_con, cfg.beta)
            } else {
                l_pred
            };

            l_pred_sum += tape.value(l_pred)[[0, 0]];
            let loss_value = tape.value(loss)[[0, 0]];
            if !loss_value.is_finite() {
                return Err(Error::Numeric(format!(
                    "non-finite loss {loss_value} at epoch {epoch}, step {steps}"
                )));
            }
            let grads = collect_grads(&tape.backward(loss), &staged);
            for (name, g) in &grads {
                if let Some(bad) = g.iter().find(|v| !v.is_finite()) {
                    return Err(Error::Numeric(format!(
                        "non-finite gradient {bad} for {name:?} at epoch {epoch}, step {steps}"
                    )));
                }
            }
            adam.step(&mut params, &grads);
            global_step += 1;
            steps += 1;
        }
        train_secs.push(started.elapsed().as_secs_f64());

        let val = half_metrics(
            h,
            &ops_train,
            &ecfg,
            &params,
            &split.val,
            &eval_sets.val,
            pooling,
        )?;
        let mut val_auroc = [None; 4];
        for (slot, regime) in Regime::ALL.into_iter().enumerate() {
            val_auroc[slot] = val.get(&regime).map(|m| m.auroc);
        }
        let val_auroc_avg = mean_of(val_auroc.iter().flatten().copied());
        rows.push(EpochRow {
            epoch,
            l_pred: l_pred_sum / steps as f64,
            l_con: l_con_sum / steps as f64,
            val_auroc,
            val_auroc_avg,
        });

        let avg = val_auroc_avg.expect("validation regimes checked non-empty");
        if best.as_ref().is_none_or(|(b, _, _)| avg > *b) {
            best = Some((avg, epoch, params.clone()));
        }
    }

    let (_, best_epoch, best_params) = best.expect("at least one epoch ran");
    let val = half_metrics(
        h,
        &ops_train,
        &ecfg,
        &best_params,
        &split.val,
        &eval_sets.val,
        pooling,
    )?;
    let test = half_metrics(
        h,
        &ops_train,
        &ecfg,
        &best_params,
        &split.test,
        &eval_sets.test,
        pooling,
    )?;
    let report = EvalReport {
        version: REPORT_VERSION,
        best_epoch: Some(best_epoch),
        val_average: average_metrics(&val),
        val,
        test_average: average_metrics(&test),
        test,
        warnings: eval_sets.warnings.clone(),
    };
    Ok(TrainOutcome { params: best_params, report, rows, train_secs })
}

/// Evaluates stored parameters under `cfg`'s protocol (same split, same
/// seed-derived evaluation negatives) without training.
pub fn evaluate(
    h: &Hypergraph,
    split: &SplitSpec,
    cfg: &TrainConfig,
    params: &ParamMap,
) -> Result<EvalReport> {
    cfg.validate()?;
    split.validate(h.num_edges())?;
    crate::model::validate_params(params, cfg.model_config(h.feature_dim()))?;
    let pooling =
        if cfg.ablation.gates().attention { Pooling::Attention } else { Pooling::MaxMin };
    let ecfg = cfg.encoder_config(h.feature_dim());
    let h_train = h.edge_subgraph(&split.train);
    let ops_train = message_ops(h.num_nodes(), h_train.edges(), h_train.edge_weights());
    let exp_full = clique_expand(h);
    let eval_sets = build_eval_sets(h, &exp_full, split, cfg.seed);
    let val = half_metrics(h, &ops_train, &ecfg, params, &split.val, &eval_sets.val, pooling)?;
    let test =
        half_metrics(h, &ops_train, &ecfg, params, &split.test, &eval_sets.test, pooling)?;
    Ok(EvalReport {
        version: REPORT_VERSION,
        best_epoch: None,
        val_average: average_metrics(&val),
        val,
        test_average: average_metrics(&test),
        test,
        warnings: eval_sets.warnings,
    })
}

fn mean_of(values: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        None
    } else {
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}

fn average_metrics(half: &BTreeMap<Regime, RegimeMetrics>) -> Option<RegimeMetrics> {
    let auroc = mean_of(half.values().map(|m| m.auroc))?;
    let ap = mean_of(half.values().map(|m| m.ap))?;
    Some(RegimeMetrics { auroc, ap })
}

/// Scores one split half's positives against every regime's negatives with
/// frozen parameters and returns AUROC + AP per regime.
fn half_metrics(
    h: &Hypergraph,
    ops: &MessageOps,
    ecfg: &EncoderConfig,
    params: &ParamMap,
    positives: &[usize],
    negatives: &BTreeMap<Regime, NegativeSet>,
    pooling: Pooling,
) -> Result<BTreeMap<Regime, RegimeMetrics>> {
    let mut tape = Tape::new();
    let staged = stage_frozen(&mut tape, params);
    let enc = encode(&mut tape, &staged, ecfg, ops, h.features(), None);
    let pos_scores: Vec<f64> = positives
        .iter()
        .map(|&j| {
            let s = score_candidate(&mut tape, &staged, enc.nodes, h.edge(j), pooling);
            tape.value(s.y_hat)[[0, 0]]
        })
        .collect();

    let mut out = BTreeMap::new();
    for (&regime, set) in negatives {
        let mut scores = pos_scores.clone();
        let mut labels = vec![true; scores.len()];
        for members in &set.candidates {
            let s = score_candidate(&mut tape, &staged, enc.nodes, members, pooling);
            scores.push(tape.value(s.y_hat)[[0, 0]]);
            labels.push(false);
        }
        out.insert(
            regime,
            RegimeMetrics {
                auroc: auroc(&scores, &labels)?,
                ap: average_precision(&scores, &labels)?,
            },
        );
    }
    Ok(out)
}
