//! Hyperedge-aware augmentation: masked views for contrastive learning.
//!
//! A view masks the hypergraph in two places:
//!
//! * **Membership masking** removes members from each hyperedge.  The
//!   default rule removes exactly `floor(p_m·s)` uniformly chosen members
//!   from a size-`s` hyperedge, so every hyperedge keeps at least one member
//!   and all group-wise relations survive in both views.  A per-membership
//!   Bernoulli variant (each membership dropped independently with
//!   probability `p_m`) is available behind [`AugmentKind::Bernoulli`]; it
//!   cannot guarantee survival and may empty a hyperedge.
//! * **Feature masking** draws one Bernoulli(`1−p_f`) 0/1 vector over
//!   feature dimensions and zeroes the masked columns for *all* nodes.
//!
//! The node and hyperedge index spaces are never compacted: a node that
//! loses all memberships stays in place with zero incidence, so the rows of
//! two views stay aligned for node-level contrast.
//!
//! Views are cheap: they store the surviving member lists and the feature
//! mask, not a copied feature matrix.  Masking 0/1 columns commutes with the
//! encoder's first projection — scaling the rows of `W` by the mask gives
//! bit-identical results to materialising `X·diag(mask)` — so consumers can
//! apply [`AugmentedView::feature_mask`] without touching `X`.

use std::rc::Rc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hgraph::Hypergraph;
use crate::rng::SeedTree;

/// Which membership-masking rule a view was drawn with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentKind {
    /// Remove exactly `floor(p_m·s)` members per size-`s` hyperedge
    /// (default; guarantees ≥ 1 survivor).
    ExactFloor,
    /// Drop each membership independently with probability `p_m`
    /// (may empty a hyperedge).
    Bernoulli,
}

impl AugmentKind {
    /// Spelling used on the command line and in files.
    pub fn tag(self) -> &'static str {
        match self {
            AugmentKind::ExactFloor => "exact-floor",
            AugmentKind::Bernoulli => "bernoulli",
        }
    }
}

impl std::fmt::Display for AugmentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for AugmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact-floor" => Ok(AugmentKind::ExactFloor),
            "bernoulli" => Ok(AugmentKind::Bernoulli),
            other => Err(Error::Usage(format!(
                "unknown augmentation kind {other:?}; expected exact-floor or bernoulli"
            ))),
        }
    }
}

/// One masked view of a hypergraph.
///
/// Shares the original node and hyperedge index spaces: `edges.len()`
/// equals the original hyperedge count and node ids are untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedView {
    /// Surviving members per hyperedge, sorted ascending.
    pub edges: Vec<Vec<usize>>,
    /// Members removed per hyperedge, sorted ascending.
    pub removed: Vec<Vec<usize>>,
    /// F-length 0/1 column mask; `0.0` columns are zeroed for every node.
    pub feature_mask: Rc<Vec<f64>>,
    /// `(p_m, p_f)` the view was drawn with.
    pub mask_rates: (f64, f64),
    /// Seed the view derives from.
    pub seed: u64,
    /// Masking rule used for memberships.
    pub kind: AugmentKind,
}

impl AugmentedView {
    /// Masked dense feature matrix (original features with masked columns
    /// zeroed).  Intended for inspection and file output; the training path
    /// applies the mask to the projection weights instead.
    pub fn masked_features(&self, h: &Hypergraph) -> crate::numkit::Mat {
        let mut x = h.feature_matrix();
        for (c, &m) in self.feature_mask.iter().enumerate() {
            if m == 0.0 {
                x.column_mut(c).fill(0.0);
            }
        }
        x
    }
}

fn check_rates(p_m: f64, p_f: f64) -> Result<()> {
    for (name, p) in [("p_m", p_m), ("p_f", p_f)] {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Usage(format!(
                "mask rate {name} must lie in [0, 1), got {p}"
            )));
        }
    }
    Ok(())
}

/// Number of members to remove from a size-`s` hyperedge under the floor
/// rule.  The tiny offset keeps products like `0.3·10` (which rounds to
/// `2.999…96` in binary) from flooring one short of the intended count.
fn floor_removals(p_m: f64, s: usize) -> usize {
    (p_m * s as f64 + 1e-9).floor() as usize
}

fn augment_with(
    h: &Hypergraph,
    p_m: f64,
    p_f: f64,
    kind: AugmentKind,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<AugmentedView> {
    check_rates(p_m, p_f)?;
    let mut edges = Vec::with_capacity(h.num_edges());
    let mut removed = Vec::with_capacity(h.num_edges());
    for members in h.edges() {
        let s = members.len();
        let mut drop: Vec<usize> = match kind {
            AugmentKind::ExactFloor => {
                // Partial Fisher–Yates: the first `r` slots end up holding a
                // uniform r-subset.
                let r = floor_removals(p_m, s);
                let mut pool = members.clone();
                for i in 0..r {
                    let j = rng.gen_range(i..s);
                    pool.swap(i, j);
                }
                pool.truncate(r);
                pool
            }
            AugmentKind::Bernoulli => {
                members.iter().copied().filter(|_| rng.gen::<f64>() < p_m).collect()
            }
        };
        drop.sort_unstable();
        let keep: Vec<usize> =
            members.iter().copied().filter(|v| drop.binary_search(v).is_err()).collect();
        edges.push(keep);
        removed.push(drop);
    }
    let feature_mask: Vec<f64> =
        (0..h.feature_dim()).map(|_| if rng.gen::<f64>() < p_f { 0.0 } else { 1.0 }).collect();
    Ok(AugmentedView {
        edges,
        removed,
        feature_mask: Rc::new(feature_mask),
        mask_rates: (p_m, p_f),
        seed,
        kind,
    })
}

/// Draws one masked view, deterministically from `seed` (via the
/// `"augment"` stream).  Fails if either rate is outside `[0, 1)`.
pub fn augment(
    h: &Hypergraph,
    p_m: f64,
    p_f: f64,
    kind: AugmentKind,
    seed: u64,
) -> Result<AugmentedView> {
    let mut rng = SeedTree::new(seed).stream("augment");
    augment_with(h, p_m, p_f, kind, seed, &mut rng)
}

/// Draws a pair of independent views from split streams of `seed`, sharing
/// index spaces so row-wise contrast alignment is well-defined.
pub fn make_views(
    h: &Hypergraph,
    p_m: f64,
    p_f: f64,
    kind: AugmentKind,
    seed: u64,
) -> Result<(AugmentedView, AugmentedView)> {
    let tree = SeedTree::new(seed);
    let a = augment_with(h, p_m, p_f, kind, seed, &mut tree.stream_indexed("augment", 0))?;
    let b = augment_with(h, p_m, p_f, kind, seed, &mut tree.stream_indexed("augment", 1))?;
    Ok((a, b))
}
