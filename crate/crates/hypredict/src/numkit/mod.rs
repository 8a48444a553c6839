//! Numeric core: sparse matrices, reverse-mode autodiff, optimisation.
//!
//! Everything downstream (encoder, scorer, losses) is written against this
//! module.  The design is deliberately small and auditable:
//!
//! * [`sparse`] — compressed sparse row matrices, plus a paired
//!   forward/transpose form ([`sparse::SparseMat`]) so sparse×dense products
//!   can be differentiated without re-transposing on every step.
//! * [`tape`] — an index-based reverse-mode tape over dense `f64` matrices.
//!   Values are computed eagerly on recording; [`tape::Tape::backward`] walks
//!   the tape once in reverse and returns gradients for every recorded leaf.
//! * [`adam`] — the Adam optimiser with classic L2 weight decay folded into
//!   the gradient.
//! * [`fdcheck`] — central-difference gradient checking used by the test
//!   suite and the `gradcheck` CLI command to validate the tape end to end.

pub mod adam;
pub mod fdcheck;
pub mod sparse;
pub mod tape;

pub use adam::Adam;
pub use adam::ParamMap;
pub use fdcheck::{check_grads, check_grads_floor, GradCheckReport};
pub use sparse::{Csr, SparseMat};
pub use tape::{Grads, Mat, Tape, TensorId};
