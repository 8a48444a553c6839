//! Two-stage hypergraph encoder.
//!
//! One layer performs a full node→hyperedge→node pass over the incidence
//! structure:
//!
//! ```text
//! Q = σ( D_E⁻¹·𝐇ᵀ·P_in·W_E + b_E )      hyperedges aggregate their members
//! P = σ( D_V⁻¹·𝐇·Q·W_V + b_V )          nodes aggregate their hyperedges
//! ```
//!
//! with `P_in = X` (raw features) at the first layer and σ a PReLU with one
//! learnable slope per layer.  The degree-normalised operators come from
//! [`crate::hgraph::message_ops`]; the same parameters encode the original
//! graph and any augmented view (weights are shared across views).
//!
//! Implementation notes, both exact rewrites rather than approximations:
//! the first layer computes `D_E⁻¹𝐇ᵀ·(X·W_E)` so the sparse feature matrix
//! multiplies the thin weight matrix directly, and a 0/1 feature-column mask
//! is applied as a row scaling of `W_E` (`(X·diag(m))·W = X·(diag(m)·W)`,
//! bit-exact for 0/1 masks).

use std::collections::BTreeMap;
use std::rc::Rc;

use rand::Rng;

use crate::hgraph::MessageOps;
use crate::numkit::{Mat, ParamMap, SparseMat, Tape, TensorId};

/// Shape of the encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderConfig {
    /// Input feature dimension `F`.
    pub in_dim: usize,
    /// Hidden/output dimension `d`.
    pub dim: usize,
    /// Number of full two-stage layers (≥ 1).
    pub layers: usize,
}

/// Node and hyperedge embedding tensors produced by [`encode`].
#[derive(Debug, Clone, Copy)]
pub struct EncodeOut {
    /// `|V|×d` node embeddings.
    pub nodes: TensorId,
    /// `|E|×d` hyperedge embeddings.
    pub edges: TensorId,
}

/// Uniform Glorot-style initialisation bound for a `fan_in×fan_out` matrix.
pub fn glorot_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

/// Fills a matrix with uniform draws in `±glorot_bound`.
pub fn glorot_init(rows: usize, cols: usize, rng: &mut impl Rng) -> Mat {
    let bound = glorot_bound(rows, cols);
    let mut m = Mat::zeros((rows, cols));
    for v in m.iter_mut() {
        *v = rng.gen_range(-bound..bound);
    }
    m
}

/// Inserts freshly initialised encoder parameters into `params`.
///
/// Weight matrices use Glorot-uniform draws (consumed from `rng` in a fixed
/// order), biases start at zero, PReLU slopes at 0.25.
pub fn init_params(cfg: &EncoderConfig, rng: &mut impl Rng, params: &mut ParamMap) {
    assert!(cfg.layers >= 1, "encoder needs at least one layer");
    for k in 0..cfg.layers {
        let in_dim = if k == 0 { cfg.in_dim } else { cfg.dim };
        params.insert(format!("enc.l{k}.w_e"), glorot_init(in_dim, cfg.dim, rng));
        params.insert(format!("enc.l{k}.b_e"), Mat::zeros((1, cfg.dim)));
        params.insert(format!("enc.l{k}.w_v"), glorot_init(cfg.dim, cfg.dim, rng));
        params.insert(format!("enc.l{k}.b_v"), Mat::zeros((1, cfg.dim)));
        params.insert(format!("enc.l{k}.slope"), Mat::from_elem((1, 1), 0.25));
    }
}

/// Looks up a staged tensor by parameter name.
pub(crate) fn staged(map: &BTreeMap<String, TensorId>, name: &str) -> TensorId {
    *map.get(name).unwrap_or_else(|| panic!("parameter '{name}' not staged"))
}

/// Runs the encoder over one graph (or view).
///
/// * `ops` — the view's degree-normalised incidence operators;
/// * `x` — the `|V|×F` sparse feature matrix (always the original features);
/// * `feature_mask` — optional 0/1 column mask applied to the features,
///   realised as a row scaling of the first-layer weights.
pub fn encode(
    tape: &mut Tape,
    params: &BTreeMap<String, TensorId>,
    cfg: &EncoderConfig,
    ops: &MessageOps,
    x: &Rc<SparseMat>,
    feature_mask: Option<&Rc<Vec<f64>>>,
) -> EncodeOut {
    assert_eq!(x.ncols(), cfg.in_dim, "feature dimension mismatch");
    let mut nodes: Option<TensorId> = None;
    let mut edges: Option<TensorId> = None;

    for k in 0..cfg.layers {
        let w_e = staged(params, &format!("enc.l{k}.w_e"));
        let b_e = staged(params, &format!("enc.l{k}.b_e"));
        let w_v = staged(params, &format!("enc.l{k}.w_v"));
        let b_v = staged(params, &format!("enc.l{k}.b_v"));
        let slope = staged(params, &format!("enc.l{k}.slope"));

        // Member features projected then averaged per hyperedge.
        let t_e = match nodes {
            None => {
                let w = match feature_mask {
                    Some(mask) => tape.row_scale(w_e, Rc::clone(mask)),
                    None => w_e,
                };
                tape.spmm(x, w)
            }
            Some(p_prev) => tape.matmul(p_prev, w_e),
        };
        let q_agg = tape.spmm(&ops.edge_from_node, t_e);
        let q_lin = tape.add(q_agg, b_e);
        let q = tape.prelu(q_lin, slope);

        // Hyperedge embeddings projected then averaged per node.
        let t_v = tape.matmul(q, w_v);
        let p_agg = tape.spmm(&ops.node_from_edge, t_v);
        let p_lin = tape.add(p_agg, b_v);
        let p = tape.prelu(p_lin, slope);

        nodes = Some(p);
        edges = Some(q);
    }

    EncodeOut { nodes: nodes.unwrap(), edges: edges.unwrap() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgraph::{message_ops, Hypergraph};
    use crate::numkit::Tape;
    use ndarray::array;

    /// Stages every parameter as a differentiable leaf.
    fn stage_all(tape: &mut Tape, params: &ParamMap) -> BTreeMap<String, TensorId> {
        params
            .iter()
            .map(|(name, value)| (name.clone(), tape.leaf(value.clone())))
            .collect()
    }

    /// Hand-built identity-ish parameters: W = I, b = 0, slope 1 makes the
    /// PReLU linear.
    fn linear_identity_params(in_dim: usize, dim: usize) -> ParamMap {
        let mut params = ParamMap::new();
        params.insert("enc.l0.w_e".into(), Mat::eye(in_dim.max(dim)).slice_move(ndarray::s![..in_dim, ..dim]));
        params.insert("enc.l0.b_e".into(), Mat::zeros((1, dim)));
        params.insert("enc.l0.w_v".into(), Mat::eye(dim));
        params.insert("enc.l0.b_v".into(), Mat::zeros((1, dim)));
        params.insert("enc.l0.slope".into(), Mat::from_elem((1, 1), 1.0));
        params
    }

    #[test]
    fn single_self_edge_identity_configuration() {
        // 1 node in 1 hyperedge, X = [[1]], identity weights, linear σ.
        let h = Hypergraph::new(1, vec![vec![0]], vec![vec![1.0]]).unwrap();
        let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
        let cfg = EncoderConfig { in_dim: 1, dim: 1, layers: 1 };
        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &linear_identity_params(1, 1));
        let out = encode(&mut tape, &staged, &cfg, &ops, h.features(), None);
        assert_eq!(tape.value(out.nodes), &array![[1.0]]);
        assert_eq!(tape.value(out.edges), &array![[1.0]]);
    }

    #[test]
    fn two_nodes_one_edge_averages() {
        // X = [[1],[3]]: the edge averages to 2, then both nodes read it back.
        let h = Hypergraph::new(2, vec![vec![0, 1]], vec![vec![1.0], vec![3.0]]).unwrap();
        let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
        let cfg = EncoderConfig { in_dim: 1, dim: 1, layers: 1 };
        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &linear_identity_params(1, 1));
        let out = encode(&mut tape, &staged, &cfg, &ops, h.features(), None);
        assert_eq!(tape.value(out.edges), &array![[2.0]]);
        assert_eq!(tape.value(out.nodes), &array![[2.0], [2.0]]);
    }

    #[test]
    fn isolated_node_gets_bias_only() {
        // Node 2 belongs to nothing: its pre-activation is exactly b_v.
        let h = Hypergraph::new(
            3,
            vec![vec![0, 1]],
            vec![vec![1.0], vec![3.0], vec![5.0]],
        )
        .unwrap();
        let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
        let cfg = EncoderConfig { in_dim: 1, dim: 1, layers: 1 };
        let mut params = linear_identity_params(1, 1);
        params.insert("enc.l0.b_v".into(), array![[0.75]]);
        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &params);
        let out = encode(&mut tape, &staged, &cfg, &ops, h.features(), None);
        assert_eq!(tape.value(out.nodes)[[2, 0]], 0.75);
    }

    #[test]
    fn feature_mask_matches_explicitly_masked_features() {
        let h = Hypergraph::new(
            3,
            vec![vec![0, 1], vec![1, 2]],
            vec![vec![1.0, 2.0, 0.0], vec![0.0, 1.0, 4.0], vec![2.0, 0.0, 1.0]],
        )
        .unwrap();
        let masked = Hypergraph::new(
            3,
            vec![vec![0, 1], vec![1, 2]],
            // Column 1 zeroed by hand.
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 4.0], vec![2.0, 0.0, 1.0]],
        )
        .unwrap();
        let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
        let cfg = EncoderConfig { in_dim: 3, dim: 2, layers: 1 };

        let mut rng = crate::rng::SeedTree::new(5).stream("init");
        let mut params = ParamMap::new();
        init_params(&cfg, &mut rng, &mut params);

        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &params);
        let mask = Rc::new(vec![1.0, 0.0, 1.0]);
        let via_mask = encode(&mut tape, &staged, &cfg, &ops, h.features(), Some(&mask));
        let via_features = encode(&mut tape, &staged, &cfg, &ops, masked.features(), None);
        assert_eq!(tape.value(via_mask.nodes), tape.value(via_features.nodes));
        assert_eq!(tape.value(via_mask.edges), tape.value(via_features.edges));
    }

    #[test]
    fn gradients_flow_to_all_encoder_params() {
        let h = Hypergraph::new(
            4,
            vec![vec![0, 1, 2], vec![2, 3]],
            vec![
                vec![0.4, -1.0],
                vec![1.2, 0.3],
                vec![-0.7, 0.9],
                vec![0.1, 0.1],
            ],
        )
        .unwrap();
        let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
        let cfg = EncoderConfig { in_dim: 2, dim: 3, layers: 2 };
        let mut rng = crate::rng::SeedTree::new(1).stream("init");
        let mut params = ParamMap::new();
        init_params(&cfg, &mut rng, &mut params);

        let mut tape = Tape::new();
        let staged = stage_all(&mut tape, &params);
        let out = encode(&mut tape, &staged, &cfg, &ops, h.features(), None);
        let sp = tape.sum(out.nodes);
        let sq = tape.sum(out.edges);
        let loss = tape.add(sp, sq);
        let grads = tape.backward(loss);
        for (name, id) in &staged {
            assert!(grads.get(*id).is_some(), "no gradient for {name}");
        }
    }

    #[test]
    fn init_respects_glorot_bounds_and_layer_shapes() {
        let cfg = EncoderConfig { in_dim: 7, dim: 4, layers: 2 };
        let mut rng = crate::rng::SeedTree::new(2).stream("init");
        let mut params = ParamMap::new();
        init_params(&cfg, &mut rng, &mut params);
        assert_eq!(params["enc.l0.w_e"].dim(), (7, 4));
        assert_eq!(params["enc.l1.w_e"].dim(), (4, 4));
        let bound = glorot_bound(7, 4);
        for &v in params["enc.l0.w_e"].iter() {
            assert!(v.abs() < bound);
        }
        assert_eq!(params["enc.l0.slope"], array![[0.25]]);
        assert_eq!(params["enc.l1.b_v"], Mat::zeros((1, 4)));
    }
}
