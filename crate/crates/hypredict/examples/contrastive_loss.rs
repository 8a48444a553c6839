//! Computes the dual contrastive loss between two augmented views.
//!
//! Both views are encoded with shared weights, projected through separate
//! node and hyperedge heads, and compared row-wise by cosine agreement
//! rescaled to `[0, 1]`.  When every node sits in some hyperedge, identical
//! views agree perfectly and the loss is exactly zero — a useful sanity
//! anchor — while genuinely different views pay a positive penalty that
//! training then minimises.
//!
//! Isolated nodes are the one exception: they embed and project to zero
//! rows, whose cosine is defined as 0 (neutral), so they neither attract
//! nor repel — but they do keep the mean agreement strictly below one.
//!
//! ```text
//! cargo run --example contrastive_loss
//! ```

use hypredict::augment::{make_views, AugmentKind, AugmentedView};
use hypredict::contrast::{dual_contrastive_loss, project};
use hypredict::encoder::encode;
use hypredict::hgraph::{message_ops, Hypergraph};
use hypredict::model::{init_model, stage_frozen, ModelConfig};
use hypredict::numkit::Tape;
use hypredict::Result;

/// Loss between the two views of `h` drawn at the given rates.
fn view_loss(h: &Hypergraph, p_m: f64, p_f: f64) -> Result<f64> {
    let cfg = ModelConfig::new(h.feature_dim(), 8, 1);
    let params = init_model(cfg, 5);
    let (va, vb) = make_views(h, p_m, p_f, AugmentKind::ExactFloor, 13)?;

    let mut tape = Tape::new();
    let staged = stage_frozen(&mut tape, &params);
    let enc = cfg.encoder();
    let encode_view = |tape: &mut Tape, view: &AugmentedView| {
        let ops = message_ops(h.num_nodes(), &view.edges, h.edge_weights());
        encode(tape, &staged, &enc, &ops, h.features(), Some(&view.feature_mask))
    };
    let ea = encode_view(&mut tape, &va);
    let eb = encode_view(&mut tape, &vb);

    let (za_v, za_e) = project(&mut tape, &staged, ea.nodes, ea.edges);
    let (zb_v, zb_e) = project(&mut tape, &staged, eb.nodes, eb.edges);
    let loss = dual_contrastive_loss(&mut tape, za_v, zb_v, za_e, zb_e);
    Ok(tape.value(loss)[(0, 0)])
}

fn main() -> Result<()> {
    // Six nodes, four hyperedges, every node covered.
    let features: Vec<Vec<f64>> = (0..6).map(|i| vec![1.0, (i % 3) as f64, (i / 3) as f64]).collect();
    let h = Hypergraph::new(
        6,
        vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5]],
        features.clone(),
    )?;

    let zero = view_loss(&h, 0.0, 0.0)?;
    println!("identical views (p_m = p_f = 0): loss == 0.0 exactly: {}", zero == 0.0);

    let stochastic = view_loss(&h, 0.5, 0.5)?;
    println!("independent views at p_m = p_f = 0.5: loss = {stochastic:.6}");

    // The same graph plus one node no hyperedge touches: its zero rows hold
    // perfect agreement just out of reach, even for identical views.
    let mut features_iso = features;
    features_iso.push(vec![1.0, 0.0, 2.0]);
    let h_iso = Hypergraph::new(
        7,
        vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5]],
        features_iso,
    )?;
    let iso = view_loss(&h_iso, 0.0, 0.0)?;
    println!("with one isolated node, identical views: loss = {iso:.6}");
    println!("  equals -ln(mean node agreement) = -ln(6.5/7) = {:.6}", -(6.5f64 / 7.0).ln());
    Ok(())
}
