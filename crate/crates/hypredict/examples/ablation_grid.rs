//! Runs the four ablation settings on one small graph and compares them.
//!
//! The grid switches two gates independently: candidate pooling
//! (attention vs max-min) and view augmentation (none, per-membership
//! coin flips, or exact-floor removal, the latter two feeding the
//! contrastive term):
//!
//! * `No`  — max-min pooling, no views, no contrastive term;
//! * `CL`  — max-min pooling, coin-flip views;
//! * `HCL` — max-min pooling, exact-floor views;
//! * `ALL` — attention pooling, exact-floor views.
//!
//! One short run per setting is noisy — the paired-seed comparisons that
//! actually separate the settings live in the acceptance tests — but the
//! mechanics (which losses appear, what gets evaluated) are visible here.
//!
//! ```text
//! cargo run --release --example ablation_grid
//! ```

use hypredict::hgraph::synth::{generate, SynthConfig};
use hypredict::hgraph::split;
use hypredict::trainer::{train, Ablation, TrainConfig};
use hypredict::Result;

fn main() -> Result<()> {
    let h = generate(&SynthConfig::tiny(2))?;
    let sp = split(&h, 2, (0.6, 0.2, 0.2))?;

    println!("{:<5} {:>9} {:>10} {:>10} {:>10}", "run", "best", "l_con@best", "val avg", "test avg");
    for ablation in [Ablation::No, Ablation::Cl, Ablation::Hcl, Ablation::All] {
        let cfg = TrainConfig {
            dim: 16,
            epochs: 10,
            batch_size: 8,
            seed: 3,
            ablation,
            ..TrainConfig::default()
        };
        let outcome = train(&h, &sp, &cfg)?;
        let report = &outcome.report;
        let best = report.best_epoch.expect("training always records a best epoch");
        let fmt = |m: &Option<hypredict::trainer::RegimeMetrics>| {
            m.as_ref().map_or_else(|| "-".into(), |m| format!("{:.4}", m.auroc))
        };
        println!(
            "{:<5} {:>9} {:>10.4} {:>10} {:>10}",
            ablation.tag(),
            best,
            outcome.rows[best - 1].l_con,
            fmt(&report.val_average),
            fmt(&report.test_average),
        );
    }
    println!("(l_con is identically zero when no views are drawn, as in the No row)");
    Ok(())
}
