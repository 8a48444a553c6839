//! Candidate scoring: context-aware aggregation and the probability head.
//!
//! Given node embeddings `P` and a candidate node set `e′`, the scorer
//! produces the probability that `e′` forms a hyperedge:
//!
//! ```text
//! α_i  = softmax_i( p_i·W″·xᵀ )            attention over members
//! p*_j = Σ_i α_i · (p_i·W′)                influence-reflected embeddings
//! q*   = elementwise-max over rows of P*   pooled group embedding
//! ŷ    = sigmoid( q*·w + b )               fully-connected head
//! ```
//!
//! The attention weight α depends only on the member `i` — the formula has
//! no per-target term — so every row of `P*` is identical and the max pool
//! acts on identical rows.  The pooling is kept anyway: it makes the
//! implementation follow the formulas one-to-one and leaves room for
//! per-target attention variants.
//!
//! The ablation baseline replaces all of the above with max-min pooling over
//! the raw member embeddings: `q* = max_i(p_i) − min_i(p_i)` elementwise.

use std::collections::BTreeMap;
use std::rc::Rc;

use rand::Rng;

use crate::encoder::{glorot_init, staged};
use crate::numkit::{Mat, ParamMap, Tape, TensorId};

/// How a candidate's member embeddings are pooled into one vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pooling {
    /// Attention-weighted aggregation (the full model).
    Attention,
    /// Elementwise max minus min over raw member embeddings (baseline).
    MaxMin,
}

/// Tensors recorded for one scored candidate.
#[derive(Debug, Clone, Copy)]
pub struct CandidateScore {
    /// `1×d` pooled group embedding `q*`.
    pub q_star: TensorId,
    /// `1×1` pre-sigmoid logit.
    pub logit: TensorId,
    /// `1×1` probability `ŷ`.
    pub y_hat: TensorId,
}

/// Inserts freshly initialised aggregator + predictor parameters for
/// dimension `d` into `params`.
pub fn init_params(dim: usize, rng: &mut impl Rng, params: &mut ParamMap) {
    params.insert("agg.w_prime".into(), glorot_init(dim, dim, rng));
    params.insert("agg.w_dprime".into(), glorot_init(dim, dim, rng));
    params.insert("agg.query".into(), glorot_init(1, dim, rng));
    params.insert("pred.w".into(), glorot_init(dim, 1, rng));
    params.insert("pred.b".into(), Mat::zeros((1, 1)));
}

/// Attention weights over the member rows `p_sub` (`m×d`), as an `m×1`
/// probability column.
///
/// # Panics
/// If `p_sub` has no rows (empty candidate).
pub fn attention_weights(
    tape: &mut Tape,
    params: &BTreeMap<String, TensorId>,
    p_sub: TensorId,
) -> TensorId {
    assert!(tape.value(p_sub).nrows() >= 1, "candidate must have at least one member");
    let w_dprime = staged(params, "agg.w_dprime");
    let query = staged(params, "agg.query");
    let keys = tape.matmul(p_sub, w_dprime); // m×d
    let scores = tape.matmul_tb(keys, query); // m×1
    tape.softmax_cols(scores)
}

/// Influence-reflected member embeddings: every row `j` is
/// `Σ_i α_i·(p_i·W′)`, so all rows are identical by construction.
pub fn influence_embeddings(
    tape: &mut Tape,
    params: &BTreeMap<String, TensorId>,
    p_sub: TensorId,
    alpha: TensorId,
) -> TensorId {
    let w_prime = staged(params, "agg.w_prime");
    let projected = tape.matmul(p_sub, w_prime); // m×d
    let pooled = tape.matmul_ta(alpha, projected); // 1×d
    let m = tape.value(p_sub).nrows();
    tape.gather_rows(pooled, Rc::new(vec![0; m])) // m identical rows
}

/// Scores one candidate from full node embeddings `p` (`|V|×d`).
///
/// # Panics
/// If `members` is empty or contains an out-of-range node id.
pub fn score_candidate(
    tape: &mut Tape,
    params: &BTreeMap<String, TensorId>,
    p: TensorId,
    members: &[usize],
    pooling: Pooling,
) -> CandidateScore {
    assert!(!members.is_empty(), "candidate must have at least one member");
    let n = tape.value(p).nrows();
    assert!(members.iter().all(|&v| v < n), "candidate references an out-of-range node");

    let p_sub = tape.gather_rows(p, Rc::new(members.to_vec()));
    let q_star = match pooling {
        Pooling::Attention => {
            let alpha = attention_weights(tape, params, p_sub);
            let p_star = influence_embeddings(tape, params, p_sub, alpha);
            tape.max_rows(p_star)
        }
        Pooling::MaxMin => {
            let hi = tape.max_rows(p_sub);
            let lo = tape.min_rows(p_sub);
            let neg_lo = tape.scale(lo, -1.0);
            tape.add(hi, neg_lo)
        }
    };
    let w = staged(params, "pred.w");
    let b = staged(params, "pred.b");
    let raw = tape.matmul(q_star, w); // 1×1
    let logit = tape.add(raw, b);
    let y_hat = tape.sigmoid(logit);
    CandidateScore { q_star, logit, y_hat }
}
