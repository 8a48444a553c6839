//! Projection heads and the dual contrastive loss over two views.
//!
//! Contrastive training encodes two masked views of the hypergraph with
//! shared weights, pushes the embeddings through small projection heads,
//! and rewards agreement between aligned rows (the same node, or the same
//! hyperedge, seen through different masks):
//!
//! ```text
//! Z_V = g_V(P)          two-layer head, ELU between the layers
//! Z_E = g_E(Q)
//! s_M = clamp( meanᵣ (1 + cos(z¹ᵣ, z²ᵣ)) / 2 , 1e-8, 1 )
//! L_con = −log s_V − log s_E
//! ```
//!
//! The node head `g_V` and hyperedge head `g_E` have independent
//! parameters.  The per-row cosine is rescaled to `[0, 1]` and averaged so
//! the logarithm is total: perfectly aligned views give a loss of exactly
//! zero and anti-aligned views are caught by the clamp instead of
//! producing `log 0`.  A zero row (e.g. a fully-masked isolated node)
//! contributes cosine 0 — neutral, neither attracting nor repelling.

use std::collections::BTreeMap;

use rand::Rng;

use crate::encoder::{glorot_init, staged};
use crate::numkit::{Mat, ParamMap, Tape, TensorId};

/// Shapes of the two projection heads.
#[derive(Debug, Clone, Copy)]
pub struct ProjectorConfig {
    /// Embedding dimension `d` (input and output of each head).
    pub dim: usize,
    /// Hidden width between the two layers; defaults to `d`.
    pub d_proj: usize,
}

impl ProjectorConfig {
    /// Square heads: hidden width equal to the embedding dimension.
    pub fn square(dim: usize) -> Self {
        ProjectorConfig { dim, d_proj: dim }
    }
}

/// Inserts freshly initialised node/edge projector parameters into
/// `params` (weights Glorot-uniform, biases zero).
pub fn init_params(cfg: ProjectorConfig, rng: &mut impl Rng, params: &mut ParamMap) {
    for head in ["proj.v", "proj.e"] {
        params.insert(format!("{head}.w1"), glorot_init(cfg.dim, cfg.d_proj, rng));
        params.insert(format!("{head}.b1"), Mat::zeros((1, cfg.d_proj)));
        params.insert(format!("{head}.w2"), glorot_init(cfg.d_proj, cfg.dim, rng));
        params.insert(format!("{head}.b2"), Mat::zeros((1, cfg.dim)));
    }
}

fn head(
    tape: &mut Tape,
    params: &BTreeMap<String, TensorId>,
    prefix: &str,
    x: TensorId,
) -> TensorId {
    let w1 = staged(params, &format!("{prefix}.w1"));
    let b1 = staged(params, &format!("{prefix}.b1"));
    let w2 = staged(params, &format!("{prefix}.w2"));
    let b2 = staged(params, &format!("{prefix}.b2"));
    let h = tape.matmul(x, w1);
    let h = tape.add(h, b1);
    let h = tape.elu(h);
    let z = tape.matmul(h, w2);
    tape.add(z, b2)
}

/// Projects node embeddings `p` and hyperedge embeddings `q` through their
/// heads, returning `(Z_V, Z_E)`.
pub fn project(
    tape: &mut Tape,
    params: &BTreeMap<String, TensorId>,
    p: TensorId,
    q: TensorId,
) -> (TensorId, TensorId) {
    (head(tape, params, "proj.v", p), head(tape, params, "proj.e", q))
}

/// One modality's agreement term: `−log clamp(mean (1+cos)/2, 1e-8, 1)`.
fn agreement_term(tape: &mut Tape, z1: TensorId, z2: TensorId) -> TensorId {
    let cos = tape.row_cosine(z1, z2);
    let half = tape.scale(cos, 0.5);
    let sim = tape.add_scalar(half, 0.5);
    let s = tape.mean_all(sim);
    let s = tape.clamp(s, 1e-8, 1.0);
    let lg = tape.log(s);
    tape.scale(lg, -1.0)
}

/// Dual contrastive loss over aligned projected views:
/// `−log s_V − log s_E` (a `1×1` tensor).
///
/// Rows must be aligned — row `r` of `z1v` and `z2v` is the same node seen
/// through the two views, and likewise for hyperedges.
pub fn dual_contrastive_loss(
    tape: &mut Tape,
    z1v: TensorId,
    z2v: TensorId,
    z1e: TensorId,
    z2e: TensorId,
) -> TensorId {
    let lv = agreement_term(tape, z1v, z2v);
    let le = agreement_term(tape, z1e, z2e);
    tape.add(lv, le)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::check_grads;
    use crate::rng::SeedTree;
    use ndarray::array;

    fn stage_all(tape: &mut Tape, params: &ParamMap) -> BTreeMap<String, TensorId> {
        params.iter().map(|(n, v)| (n.clone(), tape.leaf(v.clone()))).collect()
    }

    fn identity_heads(dim: usize) -> ParamMap {
        let mut p = ParamMap::new();
        for head in ["proj.v", "proj.e"] {
            p.insert(format!("{head}.w1"), Mat::eye(dim));
            p.insert(format!("{head}.b1"), Mat::zeros((1, dim)));
            p.insert(format!("{head}.w2"), Mat::eye(dim));
            p.insert(format!("{head}.b2"), Mat::zeros((1, dim)));
        }
        p
    }

    #[test]
    fn zero_input_with_zero_biases_projects_to_zero() {
        let mut rng = SeedTree::new(1).stream("init");
        let mut params = ParamMap::new();
        init_params(ProjectorConfig::square(3), &mut rng, &mut params);
        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &params);
        let p = tape.constant(Mat::zeros((2, 3)));
        let q = tape.constant(Mat::zeros((4, 3)));
        let (zv, ze) = project(&mut tape, &staged, p, q);
        assert_eq!(tape.value(zv), &Mat::zeros((2, 3)));
        assert_eq!(tape.value(ze), &Mat::zeros((4, 3)));
    }

    #[test]
    fn identity_heads_pass_positive_inputs_through() {
        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &identity_heads(2));
        let p = tape.constant(array![[1.0, 2.0], [0.5, 3.0]]);
        let q = tape.constant(array![[4.0, 0.25]]);
        let (zv, ze) = project(&mut tape, &staged, p, q);
        assert_eq!(tape.value(zv), &array![[1.0, 2.0], [0.5, 3.0]]);
        assert_eq!(tape.value(ze), &array![[4.0, 0.25]]);
    }

    #[test]
    fn identical_views_have_exactly_zero_loss() {
        let mut tape = Tape::new();
        let z = tape.constant(array![[0.3, -0.7], [1.1, 0.2], [-0.5, 0.9]]);
        let ze = tape.constant(array![[2.0, 1.0]]);
        let loss = dual_contrastive_loss(&mut tape, z, z, ze, ze);
        assert_eq!(tape.value(loss)[[0, 0]], 0.0);
    }

    #[test]
    fn orthogonal_single_rows_give_log_two() {
        // cos = 0 → s_V = 0.5; identical single-edge rows → s_E = 1.
        let mut tape = Tape::new();
        let z1v = tape.constant(array![[1.0, 0.0]]);
        let z2v = tape.constant(array![[0.0, 1.0]]);
        let ze = tape.constant(array![[1.0, 1.0]]);
        let loss = dual_contrastive_loss(&mut tape, z1v, z2v, ze, ze);
        let l = tape.value(loss)[[0, 0]];
        assert!((l - 2f64.ln()).abs() < 1e-15, "loss {l}");
    }

    #[test]
    fn anti_aligned_rows_are_clamped_finite() {
        // cos = −1 → raw similarity 0, clamped to 1e-8 → −ln(1e-8).
        let mut tape = Tape::new();
        let z1v = tape.constant(array![[2.0, 0.0]]);
        let z2v = tape.constant(array![[-1.0, 0.0]]);
        let ze = tape.constant(array![[1.0, 1.0]]);
        let loss = dual_contrastive_loss(&mut tape, z1v, z2v, ze, ze);
        let l = tape.value(loss)[[0, 0]];
        assert!(l.is_finite());
        assert!((l - (-(1e-8f64).ln())).abs() < 1e-12, "loss {l}");
    }

    #[test]
    fn zero_rows_contribute_neutral_half_similarity() {
        // Row 0 aligned (cos 1), row 1 zero on one side (cos 0):
        // s_V = mean(1, 0.5) = 0.75.
        let mut tape = Tape::new();
        let z1v = tape.constant(array![[1.0, 0.0], [0.0, 0.0]]);
        let z2v = tape.constant(array![[2.0, 0.0], [0.3, 0.4]]);
        let ze = tape.constant(array![[1.0, 1.0]]);
        let loss = dual_contrastive_loss(&mut tape, z1v, z2v, ze, ze);
        let l = tape.value(loss)[[0, 0]];
        assert!((l - (-(0.75f64.ln()))).abs() < 1e-15, "loss {l}");
    }

    #[test]
    fn loss_is_nonnegative_and_scale_invariant() {
        let mut rng = SeedTree::new(5).stream("init");
        for _ in 0..20 {
            let a = glorot(&mut rng, 4, 3);
            let b = glorot(&mut rng, 4, 3);
            let c = glorot(&mut rng, 2, 3);
            let d = glorot(&mut rng, 2, 3);

            let mut tape = Tape::new();
            let (ta, tb, tc, td) = (
                tape.constant(a.clone()),
                tape.constant(b.clone()),
                tape.constant(c.clone()),
                tape.constant(d.clone()),
            );
            let loss = dual_contrastive_loss(&mut tape, ta, tb, tc, td);
            let l = tape.value(loss)[[0, 0]];
            assert!(l >= 0.0);

            // Rescaling rows by positive factors leaves every cosine alone.
            let mut a2 = a.clone();
            for (i, mut row) in a2.rows_mut().into_iter().enumerate() {
                row.mapv_inplace(|v| v * (1.0 + i as f64) * 3.7);
            }
            let mut tape = Tape::new();
            let (ta, tb, tc, td) = (
                tape.constant(a2),
                tape.constant(b),
                tape.constant(c),
                tape.constant(d),
            );
            let loss2 = dual_contrastive_loss(&mut tape, ta, tb, tc, td);
            let l2 = tape.value(loss2)[[0, 0]];
            assert!((l - l2).abs() < 1e-12, "{l} vs {l2}");
        }
    }

    fn glorot(rng: &mut impl Rng, r: usize, c: usize) -> Mat {
        crate::encoder::glorot_init(r, c, rng)
    }

    #[test]
    fn projection_and_loss_pass_finite_difference_check() {
        let mut rng = SeedTree::new(31).stream("init");
        let mut params = ParamMap::new();
        init_params(ProjectorConfig { dim: 3, d_proj: 2 }, &mut rng, &mut params);
        let p1 = glorot(&mut rng, 4, 3);
        let p2 = glorot(&mut rng, 4, 3);
        let q1 = glorot(&mut rng, 2, 3);
        let q2 = glorot(&mut rng, 2, 3);

        let run = |params: &ParamMap, want_grads: bool| {
            let mut tape = Tape::new();
            let staged = stage_all(&mut tape, params);
            let tp1 = tape.constant(p1.clone());
            let tp2 = tape.constant(p2.clone());
            let tq1 = tape.constant(q1.clone());
            let tq2 = tape.constant(q2.clone());
            let (z1v, z1e) = project(&mut tape, &staged, tp1, tq1);
            let (z2v, z2e) = project(&mut tape, &staged, tp2, tq2);
            let loss = dual_contrastive_loss(&mut tape, z1v, z2v, z1e, z2e);
            let value = tape.value(loss)[[0, 0]];
            let mut grads = ParamMap::new();
            if want_grads {
                let g = tape.backward(loss);
                for (name, id) in &staged {
                    if let Some(gm) = g.get(*id) {
                        grads.insert(name.clone(), gm.clone());
                    }
                }
            }
            (value, grads)
        };
        let (_, analytic) = run(&params, true);
        let mut f = |p: &ParamMap| run(p, false).0;
        let report = check_grads(&mut f, &params, &analytic, 1e-5);
        assert!(
            report.passes(1e-5),
            "worst {} rel err {:.3e}",
            report.worst_group,
            report.max_rel_err
        );
    }
}
