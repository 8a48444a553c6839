//! Draws negatives from all four sampling regimes and shows what makes
//! each hard or easy.
//!
//! * `SNS` — uniform node sets: easy, usually far from any structure;
//! * `MNS` — connected sets grown along clique-expansion edges;
//! * `CNS` — an observed hyperedge with one member swapped for another
//!   node adjacent to everything kept: the hardest family;
//! * `MIX` — one third from each of the above.
//!
//! ```text
//! cargo run --example negative_samplers
//! ```

use hypredict::hgraph::synth::{generate, SynthConfig};
use hypredict::hgraph::clique_expand;
use hypredict::negsample::{sample_set, Regime};
use hypredict::Result;

fn main() -> Result<()> {
    let h = generate(&SynthConfig::tiny(1))?;
    let expansion = clique_expand(&h);
    println!(
        "graph: {} nodes, {} hyperedges, {} clique-expansion pairs",
        h.num_nodes(),
        h.num_edges(),
        expansion.pair_count()
    );

    let sizes = vec![3usize; 60];
    for regime in Regime::ALL {
        let set = sample_set(&h, &expansion, regime, &sizes, 2024)?;

        // How many candidates are fully connected in the clique expansion,
        // and how close each is to an observed hyperedge (max overlap).
        let connected = set
            .candidates
            .iter()
            .filter(|c| {
                c.iter().all(|&u| c.iter().all(|&v| u == v || expansion.contains(u, v)))
            })
            .count();
        let mean_overlap: f64 = set
            .candidates
            .iter()
            .map(|c| {
                (0..h.num_edges())
                    .map(|j| c.iter().filter(|v| h.edge(j).contains(v)).count())
                    .max()
                    .unwrap_or(0) as f64
            })
            .sum::<f64>()
            / set.candidates.len() as f64;

        println!(
            "{regime}: first {:?}, fully connected {}/{}, mean max-overlap with an observed hyperedge {:.2}",
            set.candidates[0],
            connected,
            set.candidates.len(),
            mean_overlap
        );
    }
    println!("(no candidate duplicates an observed hyperedge; the samplers reject those)");
    Ok(())
}
