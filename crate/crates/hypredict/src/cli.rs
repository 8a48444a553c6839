//! Command-line front end: reproducible pipeline runs over plain files.
//!
//! Every subcommand reads and writes ordinary files — hypergraphs, splits,
//! negative sets, augmented views, checkpoints, reports — so whole
//! experiments can be scripted and replayed.  All randomness flows from the
//! single `--seed` of each invocation through named derived streams; given
//! identical inputs and seed, every command rewrites byte-identical outputs.
//!
//! `train` and `evaluate` collect their artifacts in one run directory per
//! invocation (`--out-dir`): the fully resolved configuration, the split
//! actually used, the best checkpoint, the per-epoch metrics CSV, and the
//! final report as both JSON and an aligned text table.  A run directory is
//! self-contained — rerunning with only its `config.json`, `split.json`, and
//! the dataset file reproduces it exactly.
//!
//! Configuration resolves in three layers: built-in defaults, then the
//! `--config` JSON file, then explicit flags (`--seed`, `--ablation`,
//! `--beta`, `--pm`, `--pf`, `--dim`, `--epochs`), later layers winning.
//!
//! Exit codes are a stable contract for scripts: `0` success, `1` validation
//! error (bad flags, malformed or inconsistent input files), `2` runtime
//! failure (numeric divergence, sampler exhaustion, I/O breakage mid-run).

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;

use crate::augment::{augment, make_views, AugmentKind, AugmentedView};
use crate::encoder::{encode, EncoderConfig};
use crate::error::{Error, Result};
use crate::hgraph::io::{ingest_citation, load_hypergraph, load_split, save_hypergraph, save_split};
use crate::hgraph::split as split_hyperedges;
use crate::hgraph::synth::{generate, SynthConfig};
use crate::hgraph::{clique_expand, message_ops, Hypergraph, MessageOps, SplitSpec};
use crate::model::{
    collect_grads, init_model, load_checkpoint, save_checkpoint, stage_frozen, stage_trainable,
    ModelConfig,
};
use crate::negsample::{fill, sample_set, Regime};
use crate::numkit::fdcheck::check_grads;
use crate::numkit::{ParamMap, Tape};
use crate::rng::SeedTree;
use crate::scorer::{score_candidate, Pooling};
use crate::trainer::{
    evaluate as evaluate_checkpoint, metrics_csv, prediction_loss, render_report, total_loss,
    train, Ablation, TrainConfig,
};

/// Top-level argument parser for the `hypredict` binary.
#[derive(Debug, Parser)]
#[command(
    name = "hypredict",
    version,
    about = "Hyperedge prediction: datasets, sampling, training, evaluation, verification"
)]
pub struct Cli {
    /// Which pipeline stage to run.
    #[command(subcommand)]
    pub command: Command,
}

/// One subcommand per pipeline stage.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded synthetic hypergraph with planted communities.
    Synth(SynthArgs),
    /// Convert citation-layout raw files into a hypergraph file.
    Ingest(IngestArgs),
    /// Partition hyperedges into train/validation/test uniformly at random.
    Split(SplitArgs),
    /// Draw negative candidate hyperedges under one sampling regime.
    SampleNegatives(SampleNegativesArgs),
    /// Draw one masked view of a hypergraph (membership + feature masking).
    Augment(AugmentArgs),
    /// Train a model and write checkpoint, metrics, and report to a run dir.
    Train(RunArgs),
    /// Score a stored checkpoint under the evaluation protocol.
    Evaluate(EvaluateArgs),
    /// Finite-difference check of every parameter group's gradient.
    Gradcheck(GradcheckArgs),
}

/// Arguments of `synth`.
#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Preset shape: tiny, cocitation-desk, or authorship-desk.
    #[arg(long, value_parser = parse_preset)]
    preset: Preset,
    /// Seed for the generator.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output hypergraph JSON file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// Arguments of `ingest`.
#[derive(Debug, Args)]
pub struct IngestArgs {
    /// `.content` file: one `id <TAB> f_1 .. f_F <TAB> class` row per document.
    #[arg(long, value_name = "FILE")]
    content: PathBuf,
    /// `.cites` file: one `cited citing` pair per row.
    #[arg(long, value_name = "FILE")]
    cites: PathBuf,
    /// Output hypergraph JSON file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// Arguments of `split`.
#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Hypergraph JSON file.
    #[arg(long, value_name = "FILE")]
    dataset: PathBuf,
    /// Seed for the shuffle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Train, validation, and test fractions (must sum to 1).
    #[arg(long, value_parser = parse_ratios, default_value = "0.6,0.2,0.2")]
    ratios: (f64, f64, f64),
    /// Output split JSON file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// Arguments of `sample-negatives`.
#[derive(Debug, Args)]
pub struct SampleNegativesArgs {
    /// Hypergraph JSON file.
    #[arg(long, value_name = "FILE")]
    dataset: PathBuf,
    /// Sampling regime: SNS, MNS, CNS, or MIX.
    #[arg(long, value_parser = parse_regime)]
    regime: Regime,
    /// How many candidates to draw.
    #[arg(long)]
    count: usize,
    /// Target candidate size (≥ 2; CNS inherits sizes from swapped hyperedges).
    #[arg(long)]
    size: usize,
    /// Seed for the draws.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output negative-set JSON file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// Arguments of `augment`.
#[derive(Debug, Args)]
pub struct AugmentArgs {
    /// Hypergraph JSON file.
    #[arg(long, value_name = "FILE")]
    dataset: PathBuf,
    /// Membership mask rate in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    pm: f64,
    /// Feature mask rate in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    pf: f64,
    /// Membership rule: exact-floor (default) or bernoulli.
    #[arg(long, value_parser = parse_kind, default_value = "exact-floor")]
    kind: AugmentKind,
    /// Seed for the masks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output view JSON file.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

/// Shared arguments of `train` and `evaluate`.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Hypergraph JSON file.
    #[arg(long, value_name = "FILE")]
    dataset: PathBuf,
    /// Split JSON file; omitted → a fresh 60/20/20 split derived from the
    /// effective seed (and echoed into the run directory).
    #[arg(long, value_name = "FILE")]
    split_file: Option<PathBuf>,
    /// JSON file with any subset of the training-config fields.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Root seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Ablation mode: No, CL, HCL, or ALL (overrides the config file).
    #[arg(long, value_parser = parse_ablation)]
    ablation: Option<Ablation>,
    /// Contrastive-loss weight β (overrides the config file).
    #[arg(long)]
    beta: Option<f64>,
    /// Membership mask rate p_m (overrides the config file).
    #[arg(long)]
    pm: Option<f64>,
    /// Feature mask rate p_f (overrides the config file).
    #[arg(long)]
    pf: Option<f64>,
    /// Embedding dimension d (overrides the config file).
    #[arg(long)]
    dim: Option<usize>,
    /// Epoch budget (overrides the config file).
    #[arg(long)]
    epochs: Option<usize>,
    /// Run directory for artifacts; created if absent.
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,
}

/// Arguments of `evaluate`.
#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Parameter checkpoint to score.
    #[arg(long, value_name = "FILE")]
    checkpoint: PathBuf,
}

/// Arguments of `gradcheck`.
#[derive(Debug, Args)]
pub struct GradcheckArgs {
    /// First seed of the sweep.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How many consecutive seeds to check.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Embedding dimension of the checked model.
    #[arg(long, default_value_t = 8)]
    dim: usize,
    /// Encoder layers of the checked model.
    #[arg(long, default_value_t = 1)]
    layers: usize,
    /// Central-difference step size.
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
    /// Maximum tolerated relative error.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Self-test hook: negate the analytic gradient of one parameter group
    /// so the check must fail naming exactly that group.
    #[arg(long, hide = true, value_name = "GROUP")]
    flip_grad: Option<String>,
}

/// Executes a parsed invocation, writing human-readable progress to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Synth(args) => cmd_synth(args, out),
        Command::Ingest(args) => cmd_ingest(args, out),
        Command::Split(args) => cmd_split(args, out),
        Command::SampleNegatives(args) => cmd_sample_negatives(args, out),
        Command::Augment(args) => cmd_augment(args, out),
        Command::Train(args) => cmd_train(args, out),
        Command::Evaluate(args) => cmd_evaluate(args, out),
        Command::Gradcheck(args) => cmd_gradcheck(args, out),
    }
}

/// Synthetic dataset presets exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Preset {
    Tiny,
    CocitationDesk,
    AuthorshipDesk,
}

impl Preset {
    fn config(self, seed: u64) -> SynthConfig {
        match self {
            Preset::Tiny => SynthConfig::tiny(seed),
            Preset::CocitationDesk => SynthConfig::cocitation_desk(seed),
            Preset::AuthorshipDesk => SynthConfig::authorship_desk(seed),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Preset::Tiny => "tiny",
            Preset::CocitationDesk => "cocitation-desk",
            Preset::AuthorshipDesk => "authorship-desk",
        }
    }
}

fn parse_preset(s: &str) -> Result<Preset> {
    match s.to_ascii_lowercase().as_str() {
        "tiny" => Ok(Preset::Tiny),
        "cocitation-desk" => Ok(Preset::CocitationDesk),
        "authorship-desk" => Ok(Preset::AuthorshipDesk),
        other => Err(Error::Usage(format!(
            "unknown preset {other:?}; expected tiny, cocitation-desk, or authorship-desk"
        ))),
    }
}

fn parse_ratios(s: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Usage(format!(
            "ratios must be three comma-separated numbers, got {s:?}"
        )));
    }
    let mut vals = [0.0; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<f64>().map_err(|_| {
            Error::Usage(format!("ratio component {part:?} is not a number"))
        })?;
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn parse_regime(s: &str) -> Result<Regime> {
    s.parse()
}

fn parse_kind(s: &str) -> Result<AugmentKind> {
    s.parse()
}

fn parse_ablation(s: &str) -> Result<Ablation> {
    s.parse()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_json_pretty<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.preset.config(args.seed);
    let h = generate(&cfg)?;
    save_hypergraph(&h, &args.out)?;
    writeln!(out, "generated {} hypergraph (seed {})", args.preset.tag(), args.seed)?;
    writeln!(
        out,
        "nodes / hyperedges / features: {} / {} / {}",
        h.num_nodes(),
        h.num_edges(),
        h.feature_dim()
    )?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

fn cmd_ingest(args: &IngestArgs, out: &mut dyn Write) -> Result<()> {
    let (h, summary) = ingest_citation(&args.content, &args.cites)?;
    save_hypergraph(&h, &args.out)?;
    writeln!(out, "ingested {} + {}", args.content.display(), args.cites.display())?;
    writeln!(
        out,
        "nodes / hyperedges / features: {} / {} / {}",
        summary.num_nodes, summary.num_edges, summary.feature_dim
    )?;
    writeln!(
        out,
        "singletons kept {}, duplicates merged {}, dangling citations {}",
        summary.singleton_edges, summary.duplicate_edges_merged, summary.dangling_refs
    )?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

fn cmd_split(args: &SplitArgs, out: &mut dyn Write) -> Result<()> {
    let h = load_hypergraph(&args.dataset)?;
    let split = split_hyperedges(&h, args.seed, args.ratios)?;
    save_split(&split, &args.out)?;
    writeln!(
        out,
        "split {} hyperedges (seed {}): train {}, val {}, test {}",
        h.num_edges(),
        args.seed,
        split.train.len(),
        split.val.len(),
        split.test.len()
    )?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

fn cmd_sample_negatives(args: &SampleNegativesArgs, out: &mut dyn Write) -> Result<()> {
    let h = load_hypergraph(&args.dataset)?;
    let expansion = clique_expand(&h);
    let sizes = vec![args.size; args.count];
    let set = sample_set(&h, &expansion, args.regime, &sizes, args.seed)?;
    write_json_pretty(&args.out, &set)?;
    writeln!(
        out,
        "sampled {} {} negatives of size {} (seed {})",
        set.candidates.len(),
        args.regime,
        args.size,
        args.seed
    )?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

fn cmd_augment(args: &AugmentArgs, out: &mut dyn Write) -> Result<()> {
    let h = load_hypergraph(&args.dataset)?;
    let view = augment(&h, args.pm, args.pf, args.kind, args.seed)?;
    write_json_pretty(&args.out, &view_document(&view))?;
    let total: usize = h.edges().iter().map(Vec::len).sum();
    let kept: usize = view.edges.iter().map(Vec::len).sum();
    let masked = view.feature_mask.iter().filter(|&&m| m == 0.0).count();
    writeln!(
        out,
        "augmented view (seed {}, {}, p_m {}, p_f {})",
        args.seed, args.kind, args.pm, args.pf
    )?;
    writeln!(
        out,
        "memberships kept {kept} of {total}, feature columns masked {masked} of {}",
        h.feature_dim()
    )?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(())
}

/// JSON form of an augmented view (views share the original index spaces,
/// so hyperedge `j` here corresponds to hyperedge `j` of the input).
fn view_document(view: &AugmentedView) -> serde_json::Value {
    serde_json::json!({
        "seed": view.seed,
        "kind": view.kind.tag(),
        "p_m": view.mask_rates.0,
        "p_f": view.mask_rates.1,
        "hyperedges": view.edges,
        "removed": view.removed,
        "feature_mask": &*view.feature_mask,
    })
}

impl RunArgs {
    /// Defaults, then the config file, then explicit flags.
    fn resolve_config(&self) -> Result<TrainConfig> {
        let mut cfg: TrainConfig = match &self.config {
            Some(path) => serde_json::from_str(&read_text(path)?)?,
            None => TrainConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.ablation {
            cfg.ablation = v;
        }
        if let Some(v) = self.beta {
            cfg.beta = v;
        }
        if let Some(v) = self.pm {
            cfg.p_m = v;
        }
        if let Some(v) = self.pf {
            cfg.p_f = v;
        }
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = self.epochs {
            cfg.epochs = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads the dataset and the split (given or seed-derived).
    fn load_inputs(&self, cfg: &TrainConfig) -> Result<(Hypergraph, SplitSpec)> {
        let h = load_hypergraph(&self.dataset)?;
        let split = match &self.split_file {
            Some(path) => load_split(path, h.num_edges())?,
            None => split_hyperedges(&h, cfg.seed, (0.6, 0.2, 0.2))?,
        };
        Ok((h, split))
    }

    /// Writes the resolved config and effective split into the run directory.
    fn echo_inputs(&self, cfg: &TrainConfig, split: &SplitSpec) -> Result<()> {
        fs::create_dir_all(&self.out_dir)?;
        write_json_pretty(&self.out_dir.join("config.json"), cfg)?;
        save_split(split, &self.out_dir.join("split.json"))?;
        Ok(())
    }
}

fn cmd_train(args: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.resolve_config()?;
    let (h, split) = args.load_inputs(&cfg)?;
    args.echo_inputs(&cfg, &split)?;

    writeln!(
        out,
        "dataset {}: {} nodes, {} hyperedges, {} features",
        args.dataset.display(),
        h.num_nodes(),
        h.num_edges(),
        h.feature_dim()
    )?;
    writeln!(
        out,
        "split: train {}, val {}, test {}",
        split.train.len(),
        split.val.len(),
        split.test.len()
    )?;
    writeln!(
        out,
        "config: ablation {}, beta {}, dim {}, epochs {}, seed {}",
        cfg.ablation, cfg.beta, cfg.dim, cfg.epochs, cfg.seed
    )?;
    out.flush()?;

    let outcome = train(&h, &split, &cfg)?;

    save_checkpoint(&args.out_dir.join("checkpoint.json"), &outcome.params)?;
    fs::write(args.out_dir.join("metrics.csv"), metrics_csv(&outcome.rows))?;
    write_json_pretty(&args.out_dir.join("report.json"), &outcome.report)?;
    let table = render_report(&outcome.report);
    fs::write(args.out_dir.join("report.txt"), &table)?;

    let step_secs: f64 = outcome.train_secs.iter().sum();
    writeln!(out, "trained {} epochs in {step_secs:.1}s of optimisation", outcome.rows.len())?;
    if let (Some(epoch), Some(avg)) = (outcome.report.best_epoch, outcome.report.val_average) {
        writeln!(out, "best epoch {epoch} (validation AUROC {:.4})", avg.auroc)?;
    }
    write!(out, "{table}")?;
    for warning in &outcome.report.warnings {
        writeln!(out, "warning: {warning}")?;
    }
    writeln!(out, "run artifacts in {}", args.out_dir.display())?;
    Ok(())
}

fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.run.resolve_config()?;
    let (h, split) = args.run.load_inputs(&cfg)?;
    let params = load_checkpoint(&args.checkpoint)?;
    let report = evaluate_checkpoint(&h, &split, &cfg, &params)?;

    args.run.echo_inputs(&cfg, &split)?;
    write_json_pretty(&args.run.out_dir.join("report.json"), &report)?;
    let table = render_report(&report);
    fs::write(args.run.out_dir.join("report.txt"), &table)?;

    writeln!(
        out,
        "checkpoint {}: {} parameter groups",
        args.checkpoint.display(),
        params.len()
    )?;
    write!(out, "{table}")?;
    for warning in &report.warnings {
        writeln!(out, "warning: {warning}")?;
    }
    writeln!(out, "run artifacts in {}", args.run.out_dir.display())?;
    Ok(())
}

/// A fixed tiny scoring problem whose total loss is a pure function of the
/// parameter map, so central differences are well-defined.
///
/// Everything randomness touches — the graph, the negatives, the two views —
/// is drawn once at construction; the loss then exercises every parameter
/// group: encoder weights/biases/slopes through three encoding passes,
/// attention and predictor through candidate scoring, and both projector
/// heads through the contrastive term.
struct GradcheckInstance {
    h: Hypergraph,
    ops: MessageOps,
    negatives: Vec<Vec<usize>>,
    views: (AugmentedView, AugmentedView),
    view_ops: (MessageOps, MessageOps),
    cfg: ModelConfig,
    beta: f64,
}

impl GradcheckInstance {
    const NUM_NODES: usize = 8;
    const NUM_EDGES: usize = 6;
    const FEATURE_DIM: usize = 5;

    fn build(seed: u64, dim: usize, layers: usize) -> Result<GradcheckInstance> {
        let tree = SeedTree::new(seed);
        let mut rng = tree.stream("gradcheck");

        let mut edges: Vec<Vec<usize>> = Vec::new();
        while edges.len() < Self::NUM_EDGES {
            let size = rng.gen_range(2..=4);
            let mut members = BTreeSet::new();
            while members.len() < size {
                members.insert(rng.gen_range(0..Self::NUM_NODES));
            }
            let members: Vec<usize> = members.into_iter().collect();
            if !edges.contains(&members) {
                edges.push(members);
            }
        }
        let features: Vec<Vec<f64>> = (0..Self::NUM_NODES)
            .map(|_| (0..Self::FEATURE_DIM).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let h = Hypergraph::new(Self::NUM_NODES, edges, features)?;

        let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
        let expansion = clique_expand(&h);
        let sizes: Vec<usize> = (0..4).map(|_| rng.gen_range(2..=4)).collect();
        let negatives = fill(&h, &expansion, Regime::Sns, &sizes, &mut rng)?;
        let views = make_views(&h, 0.3, 0.3, AugmentKind::ExactFloor, seed)?;
        let view_ops = (
            message_ops(h.num_nodes(), &views.0.edges, h.edge_weights()),
            message_ops(h.num_nodes(), &views.1.edges, h.edge_weights()),
        );
        Ok(GradcheckInstance {
            h,
            ops,
            negatives,
            views,
            view_ops,
            cfg: ModelConfig::new(Self::FEATURE_DIM, dim, layers),
            beta: 0.5,
        })
    }

    /// Distance from `params` to the nearest PReLU kink across every
    /// activation of the three encoding passes.
    ///
    /// Central differences are only meaningful where the loss is smooth
    /// within the probe interval, and PReLU is the one place it is not.
    /// PReLU is invertible (`pre = out` when `out ≥ 0`, `|out|/slope`
    /// otherwise), so the distance is recoverable from layer outputs alone;
    /// truncated-depth encodes expose every intermediate layer.
    fn kink_distance(&self, params: &ParamMap) -> f64 {
        let mut dist = f64::INFINITY;
        for layers in 1..=self.cfg.layers {
            let sub = EncoderConfig { in_dim: self.cfg.in_dim, dim: self.cfg.dim, layers };
            let slope = params[&format!("enc.l{}.slope", layers - 1)][[0, 0]]
                .abs()
                .max(1e-12);
            for (ops, mask) in [
                (&self.ops, None),
                (&self.view_ops.0, Some(&self.views.0.feature_mask)),
                (&self.view_ops.1, Some(&self.views.1.feature_mask)),
            ] {
                let mut tape = Tape::new();
                let staged = stage_frozen(&mut tape, params);
                let out = encode(&mut tape, &staged, &sub, ops, self.h.features(), mask);
                for id in [out.nodes, out.edges] {
                    for &v in tape.value(id) {
                        let pre = if v >= 0.0 { v } else { -v / slope };
                        dist = dist.min(pre);
                    }
                }
            }
        }
        dist
    }

    /// Total loss at `params`; analytic gradients too when `want_grads`.
    fn loss(&self, params: &ParamMap, want_grads: bool) -> (f64, ParamMap) {
        let mut tape = Tape::new();
        let staged = if want_grads {
            stage_trainable(&mut tape, params)
        } else {
            stage_frozen(&mut tape, params)
        };
        let ecfg = self.cfg.encoder();
        let enc = encode(&mut tape, &staged, &ecfg, &self.ops, self.h.features(), None);

        let mut scored = Vec::new();
        for j in 0..self.h.num_edges() {
            let s =
                score_candidate(&mut tape, &staged, enc.nodes, self.h.edge(j), Pooling::Attention);
            scored.push((s.y_hat, true));
        }
        for members in &self.negatives {
            let s = score_candidate(&mut tape, &staged, enc.nodes, members, Pooling::Attention);
            scored.push((s.y_hat, false));
        }
        let l_pred = prediction_loss(&mut tape, &scored);

        let enc_a = encode(
            &mut tape,
            &staged,
            &ecfg,
            &self.view_ops.0,
            self.h.features(),
            Some(&self.views.0.feature_mask),
        );
        let enc_b = encode(
            &mut tape,
            &staged,
            &ecfg,
            &self.view_ops.1,
            self.h.features(),
            Some(&self.views.1.feature_mask),
        );
        let (z1v, z1e) = crate::contrast::project(&mut tape, &staged, enc_a.nodes, enc_a.edges);
        let (z2v, z2e) = crate::contrast::project(&mut tape, &staged, enc_b.nodes, enc_b.edges);
        let l_con = crate::contrast::dual_contrastive_loss(&mut tape, z1v, z2v, z1e, z2e);
        let loss = total_loss(&mut tape, l_pred, l_con, self.beta);

        let value = tape.value(loss)[[0, 0]];
        let grads = if want_grads {
            collect_grads(&tape.backward(loss), &staged)
        } else {
            ParamMap::new()
        };
        (value, grads)
    }
}

fn cmd_gradcheck(args: &GradcheckArgs, out: &mut dyn Write) -> Result<()> {
    if args.dim == 0 || args.layers == 0 || args.seeds == 0 {
        return Err(Error::Usage("dim, layers, and seeds must all be at least 1".into()));
    }
    if !(args.step.is_finite() && args.step > 0.0) || !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Error::Usage(format!(
            "step and tol must be positive finite numbers, got {} and {}",
            args.step, args.tol
        )));
    }

    let mut first_failure: Option<(u64, String, f64)> = None;
    for seed in args.seed..args.seed + args.seeds {
        let instance = GradcheckInstance::build(seed, args.dim, args.layers)?;
        // Check at a generic point.  A fresh init puts zero-degree rows
        // exactly on the PReLU kink (pre-activation = bias = 0), and any
        // point whose nearest kink lies inside the ±step probe interval
        // makes central differences measure the kink instead of the
        // gradient.  Jitter the parameters, deterministically redrawing
        // until every activation clears the kink by a 10·step margin.
        let base = init_model(instance.cfg, seed);
        let mut jitter = SeedTree::new(seed).stream("gradcheck-jitter");
        let params;
        let mut attempts = 0;
        loop {
            let mut candidate = base.clone();
            for theta in candidate.values_mut() {
                theta.mapv_inplace(|v| v + jitter.gen_range(-0.05..0.05));
            }
            if instance.kink_distance(&candidate) > 10.0 * args.step {
                params = candidate;
                break;
            }
            attempts += 1;
            if attempts > 50 {
                return Err(Error::Numeric(format!(
                    "seed {seed}: no jitter of the initial parameters cleared the activation \
                     kinks by 10x the step {:.0e}; try a smaller --step",
                    args.step
                )));
            }
        }
        let (_, mut analytic) = instance.loss(&params, true);
        if let Some(group) = &args.flip_grad {
            let grad = analytic.get_mut(group.as_str()).ok_or_else(|| {
                Error::Usage(format!(
                    "unknown parameter group {group:?}; available: {}",
                    params.keys().cloned().collect::<Vec<_>>().join(", ")
                ))
            })?;
            grad.mapv_inplace(|v| -v);
        }
        let mut f = |p: &ParamMap| instance.loss(p, false).0;
        let report = check_grads(&mut f, &params, &analytic, args.step);

        writeln!(
            out,
            "seed {seed}: |V|={} |E|={} F={} d={}",
            instance.h.num_nodes(),
            instance.h.num_edges(),
            instance.h.feature_dim(),
            args.dim
        )?;
        for group in &report.groups {
            writeln!(out, "  {:<14} max rel err {:.3e}", group.name, group.max_rel_err)?;
        }
        if report.passes(args.tol) {
            writeln!(
                out,
                "  PASS (max rel err {:.3e} <= tol {:.0e})",
                report.max_rel_err, args.tol
            )?;
        } else {
            let worst = report
                .groups
                .iter()
                .find(|g| g.name == report.worst_group)
                .expect("worst group is one of the groups");
            writeln!(
                out,
                "  FAIL: group {} rel err {:.3e} exceeds tol {:.0e} \
                 (entry {}: analytic {:.6e}, numeric {:.6e})",
                report.worst_group,
                report.max_rel_err,
                args.tol,
                worst.worst_index,
                worst.analytic,
                worst.numeric
            )?;
            if first_failure.is_none() {
                first_failure = Some((seed, report.worst_group.clone(), report.max_rel_err));
            }
        }
    }

    match first_failure {
        Some((seed, group, err)) => Err(Error::Numeric(format!(
            "gradient check failed: group {group:?} at seed {seed} has relative error {err:.3e} \
             above tolerance {:.0e}",
            args.tol
        ))),
        None => {
            writeln!(out, "gradcheck passed for {} seed(s)", args.seeds)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).expect("arguments should parse")
    }

    fn run_to_string(args: &[&str]) -> Result<String> {
        let mut buf = Vec::new();
        run(parse(args), &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn flags_override_config_file_which_overrides_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("c.json");
        fs::write(&cfg_path, r#"{"dim": 16, "beta": 0.9, "epochs": 3}"#).unwrap();
        let cli = parse(&[
            "hypredict",
            "train",
            "--dataset",
            "g.json",
            "--config",
            cfg_path.to_str().unwrap(),
            "--beta",
            "0.1",
            "--seed",
            "5",
            "--out-dir",
            "runs/x",
        ]);
        let Command::Train(args) = cli.command else { panic!("expected train") };
        let cfg = args.resolve_config().unwrap();
        assert_eq!(cfg.dim, 16); // from file
        assert_eq!(cfg.beta, 0.1); // flag wins
        assert_eq!(cfg.epochs, 3); // from file
        assert_eq!(cfg.seed, 5); // flag
        assert_eq!(cfg.batch_size, 32); // default untouched
    }

    #[test]
    fn bad_ratio_strings_are_usage_errors() {
        assert!(parse_ratios("0.6,0.2,0.2").is_ok());
        for bad in ["0.6,0.4", "a,b,c", "0.6;0.2;0.2"] {
            assert!(matches!(parse_ratios(bad), Err(Error::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn synth_split_sample_augment_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let graph = dir.path().join("g.json");
        let split = dir.path().join("s.json");
        let negs = dir.path().join("n.json");
        let view = dir.path().join("v.json");

        let text = run_to_string(&[
            "hypredict", "synth", "--preset", "tiny", "--seed", "7", "--out",
            graph.to_str().unwrap(),
        ])
        .unwrap();
        assert!(text.contains("60 / 45 / 40"), "{text}");

        let text = run_to_string(&[
            "hypredict", "split", "--dataset", graph.to_str().unwrap(), "--seed", "4", "--out",
            split.to_str().unwrap(),
        ])
        .unwrap();
        assert!(text.contains("train 27, val 9, test 9"), "{text}");
        let loaded = load_split(&split, 45).unwrap();
        assert_eq!(loaded.seed, 4);

        let text = run_to_string(&[
            "hypredict", "sample-negatives", "--dataset", graph.to_str().unwrap(), "--regime",
            "mix", "--count", "6", "--size", "3", "--seed", "9", "--out", negs.to_str().unwrap(),
        ])
        .unwrap();
        assert!(text.contains("sampled 6 MIX negatives"), "{text}");
        let set: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&negs).unwrap()).unwrap();
        assert_eq!(set["regime"], "MIX");
        assert_eq!(set["candidates"].as_array().unwrap().len(), 6);

        let text = run_to_string(&[
            "hypredict", "augment", "--dataset", graph.to_str().unwrap(), "--pm", "0.5", "--pf",
            "0.25", "--seed", "3", "--out", view.to_str().unwrap(),
        ])
        .unwrap();
        assert!(text.contains("exact-floor"), "{text}");
        let doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&view).unwrap()).unwrap();
        assert_eq!(doc["hyperedges"].as_array().unwrap().len(), 45);
        assert_eq!(doc["removed"].as_array().unwrap().len(), 45);
        assert_eq!(doc["feature_mask"].as_array().unwrap().len(), 40);
    }

    #[test]
    fn gradcheck_command_passes_and_reports_every_group() {
        let text = run_to_string(&["hypredict", "gradcheck", "--seed", "1"]).unwrap();
        for group in ["enc.l0.w_e", "enc.l0.slope", "agg.query", "pred.w", "proj.e.w2"] {
            assert!(text.contains(group), "missing {group} in:\n{text}");
        }
        assert!(text.contains("PASS"), "{text}");
    }

    #[test]
    fn gradcheck_fault_injection_names_the_broken_group() {
        let mut buf = Vec::new();
        let err = run(
            parse(&["hypredict", "gradcheck", "--seed", "1", "--flip-grad", "agg.query"]),
            &mut buf,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("agg.query"), "{err}");
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("FAIL: group agg.query"), "{text}");
    }

    #[test]
    fn gradcheck_rejects_an_unknown_flip_group() {
        let mut buf = Vec::new();
        let err = run(
            parse(&["hypredict", "gradcheck", "--flip-grad", "no.such.group"]),
            &mut buf,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("no.such.group"), "{err}");
    }

    #[test]
    fn missing_dataset_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut buf = Vec::new();
        let err = run(
            parse(&[
                "hypredict",
                "train",
                "--dataset",
                dir.path().join("absent.json").to_str().unwrap(),
                "--out-dir",
                dir.path().join("runs").to_str().unwrap(),
            ]),
            &mut buf,
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
