//! Exercises the ranking metrics on small hand-checkable inputs.
//!
//! AUROC is the probability that a random positive outranks a random
//! negative, with ties counted half; it is computed exactly from tie-group
//! rank sums, not from a thresholded curve.  Average precision summarises
//! the precision at each positive's rank.
//!
//! ```text
//! cargo run --example ranking_metrics
//! ```

use hypredict::trainer::{auroc, average_precision};
use hypredict::Result;

fn main() -> Result<()> {
    // Perfect ranking: every positive above every negative.
    let scores = [0.9, 0.8, 0.3, 0.1];
    let labels = [true, true, false, false];
    println!("perfect ranking: AUROC {}, AP {}", auroc(&scores, &labels)?, average_precision(&scores, &labels)?);

    // Reversed ranking: AUROC 0, and AP at its floor for this class balance.
    let labels_rev = [false, false, true, true];
    println!("reversed:        AUROC {}, AP {}", auroc(&scores, &labels_rev)?, average_precision(&scores, &labels_rev)?);

    // All scores equal: a coin flip, AUROC exactly 1/2 by the tie rule.
    // AP breaks score ties by input position (stable order), so here the
    // positives, listed first, still come out on top.
    let tied = [0.5, 0.5, 0.5, 0.5];
    println!("all tied:        AUROC {}, AP {} (tie order favours earlier indices)", auroc(&tied, &labels)?, average_precision(&tied, &labels)?);

    // A mixed case with a partial tie straddling the classes:
    // positive 0.7; then {positive, negative} tied at 0.4; negative 0.2.
    // Pairs: (0.7 beats both negatives) = 2, (0.4 vs 0.4 tie) = 1/2,
    // (0.4 beats 0.2) = 1, so AUROC = 3.5 / 4 = 0.875.
    let scores_tie = [0.7, 0.4, 0.4, 0.2];
    let labels_tie = [true, true, false, false];
    println!("partial tie:     AUROC {}, AP {}", auroc(&scores_tie, &labels_tie)?, average_precision(&scores_tie, &labels_tie)?);

    // Single-class inputs have no ranking to measure and are rejected.
    let err = auroc(&[0.5, 0.6], &[true, true]).unwrap_err();
    println!("one class only:  {err}");
    Ok(())
}
