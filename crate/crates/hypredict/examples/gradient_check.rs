//! Verifies reverse-mode gradients against central finite differences.
//!
//! The check perturbs every parameter entry by ±h, re-evaluates the loss,
//! and compares the numeric slope with the taped gradient.  Here the loss is
//! the attention scorer head on fixed embeddings — smooth in every
//! parameter, so the check is valid at any point.  The full-model variant
//! (which must also steer clear of PReLU kinks) runs as
//! `hypredict gradcheck`.
//!
//! ```text
//! cargo run --example gradient_check
//! ```

use hypredict::model::{collect_grads, stage_trainable};
use hypredict::numkit::{check_grads, Mat, ParamMap, Tape};
use hypredict::rng::SeedTree;
use hypredict::scorer::{self, score_candidate, Pooling};
use hypredict::trainer::prediction_loss;
use rand::Rng;

/// Attention-scores two positives and two negatives over fixed embeddings
/// and returns their joint prediction loss (with taped gradients on demand).
fn loss(embeddings: &Mat, params: &ParamMap, want_grads: bool) -> (f64, Option<ParamMap>) {
    let mut tape = Tape::new();
    let staged = stage_trainable(&mut tape, params);
    let p = tape.constant(embeddings.clone());

    let candidates: [(&[usize], bool); 4] =
        [(&[0, 1, 2], true), (&[3, 4], true), (&[0, 4], false), (&[1, 3, 5], false)];
    let scored: Vec<_> = candidates
        .iter()
        .map(|&(members, label)| {
            (score_candidate(&mut tape, &staged, p, members, Pooling::Attention).y_hat, label)
        })
        .collect();
    let l = prediction_loss(&mut tape, &scored);

    let value = tape.value(l)[(0, 0)];
    let grads = want_grads.then(|| collect_grads(&tape.backward(l), &staged));
    (value, grads)
}

fn main() {
    let dim = 6;
    let tree = SeedTree::new(2718);
    let mut rng = tree.stream("init");

    // Fixed node embeddings standing in for an encoder's output.
    let mut embeddings = Mat::zeros((6, dim));
    let mut params = ParamMap::new();
    scorer::init_params(dim, &mut rng, &mut params);
    for v in embeddings.iter_mut() {
        *v = rng.gen_range(-1.0..1.0);
    }

    let (value, analytic) = loss(&embeddings, &params, true);
    let analytic = analytic.expect("gradients were requested");
    println!("loss at the checked point: {value:.6}");

    let report = check_grads(
        &mut |p: &ParamMap| loss(&embeddings, p, false).0,
        &params,
        &analytic,
        1e-5,
    );
    for group in &report.groups {
        println!("  {:<10} max rel err {:.3e}", group.name, group.max_rel_err);
    }
    println!("agree to 1e-6: {}", report.passes(1e-6));

    // Corrupt one analytic entry and the same check pinpoints the group.
    let mut broken = analytic.clone();
    if let Some(g) = broken.get_mut("agg.query") {
        g[(0, 0)] += 0.5;
    }
    let report = check_grads(
        &mut |p: &ParamMap| loss(&embeddings, p, false).0,
        &params,
        &broken,
        1e-5,
    );
    println!(
        "after corrupting one entry: worst group {:?} at rel err {:.3e}",
        report.worst_group, report.max_rel_err
    );
}
