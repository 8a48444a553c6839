//! Generates the bundled synthetic datasets and inspects their shape.
//!
//! Every dataset is a pure function of its configuration (which includes a
//! seed), so the numbers printed here are identical on every run.
//!
//! ```text
//! cargo run --example synth_dataset
//! ```

use hypredict::hgraph::synth::{generate, SynthConfig};
use hypredict::hgraph::{degrees, split};
use hypredict::Result;

fn describe(name: &str, cfg: &SynthConfig) -> Result<()> {
    let h = generate(cfg)?;
    let deg = degrees(&h);

    let mut size_hist = std::collections::BTreeMap::new();
    for &s in &deg.edge_deg {
        *size_hist.entry(s).or_insert(0usize) += 1;
    }
    let isolated = deg.node_deg.iter().filter(|&&d| d == 0.0).count();
    let mean_size =
        deg.edge_deg.iter().sum::<usize>() as f64 / deg.edge_deg.len().max(1) as f64;

    println!("{name}");
    println!("  nodes / hyperedges / features: {} / {} / {}", h.num_nodes(), h.num_edges(), h.feature_dim());
    println!("  mean hyperedge size {mean_size:.2}, isolated nodes {isolated}");
    print!("  size histogram:");
    for (size, count) in &size_hist {
        print!(" {size}:{count}");
    }
    println!();

    // A fresh 60/20/20 split of the hyperedges, reproducible from its seed.
    let sp = split(&h, 7, (0.6, 0.2, 0.2))?;
    println!("  split seed 7: train {}, val {}, test {}", sp.train.len(), sp.val.len(), sp.test.len());
    println!();
    Ok(())
}

fn main() -> Result<()> {
    describe("tiny (unit-test scale)", &SynthConfig::tiny(0))?;
    describe("cocitation desk (co-citation scale)", &SynthConfig::cocitation_desk(0))?;

    // The authorship-scale preset is larger; generating it still takes well
    // under a second, so print its headline numbers too.
    let h = generate(&SynthConfig::authorship_desk(0))?;
    println!("authorship desk (authorship scale)");
    println!("  nodes / hyperedges / features: {} / {} / {}", h.num_nodes(), h.num_edges(), h.feature_dim());
    Ok(())
}
