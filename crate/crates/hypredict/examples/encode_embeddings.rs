//! Runs the two-phase hypergraph encoder on a hand-built graph.
//!
//! Each layer first averages member-node rows into hyperedge embeddings,
//! then averages incident-hyperedge rows back into node embeddings, with a
//! learned linear map and PReLU at both phases.  The same weights serve any
//! membership structure over the same node set, which is what lets augmented
//! views share the encoder.
//!
//! ```text
//! cargo run --example encode_embeddings
//! ```

use hypredict::encoder::encode;
use hypredict::hgraph::{message_ops, Hypergraph};
use hypredict::model::{init_model, stage_frozen, ModelConfig};
use hypredict::numkit::Tape;
use hypredict::Result;

fn main() -> Result<()> {
    // Five nodes, three hyperedges, three-dimensional indicator features.
    let h = Hypergraph::new(
        5,
        vec![vec![0, 1, 2], vec![1, 2, 3], vec![3, 4]],
        vec![
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ],
    )?;

    let cfg = ModelConfig::new(h.feature_dim(), 4, 2);
    let params = init_model(cfg, 42);

    let mut tape = Tape::new();
    let staged = stage_frozen(&mut tape, &params);
    let ops = message_ops(h.num_nodes(), h.edges(), h.edge_weights());
    let out = encode(&mut tape, &staged, &cfg.encoder(), &ops, h.features(), None);

    let p = tape.value(out.nodes);
    let q = tape.value(out.edges);
    println!("node embeddings ({}x{}):", p.nrows(), p.ncols());
    for (i, row) in p.rows().into_iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:+.4}")).collect();
        println!("  v{i}: [{}]", cells.join(", "));
    }
    println!("hyperedge embeddings ({}x{}):", q.nrows(), q.ncols());
    for (j, row) in q.rows().into_iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:+.4}")).collect();
        println!("  e{j}: [{}]", cells.join(", "));
    }

    // Nodes 1 and 2 sit in exactly the same hyperedges and share a feature
    // row, so the encoder cannot tell them apart.
    let same = p.row(1).iter().zip(p.row(2)).all(|(a, b)| a == b);
    println!("v1 and v2 are structurally identical; embeddings equal: {same}");

    // Re-encoding a reduced membership list through the same staged weights:
    // drop node 3 from hyperedge 1 and the now-distinguished rows diverge.
    let p_before = p.row(3).to_owned();
    let mut edges = h.edges().to_vec();
    edges[1] = vec![1, 2];
    let view_ops = message_ops(h.num_nodes(), &edges, h.edge_weights());
    let out_view = encode(&mut tape, &staged, &cfg.encoder(), &view_ops, h.features(), None);
    let moved = tape.value(out_view.nodes).row(3) != p_before;
    println!("after removing v3 from e1, v3's embedding changed: {moved}");
    Ok(())
}
