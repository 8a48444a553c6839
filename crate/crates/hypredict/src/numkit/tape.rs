//! Reverse-mode automatic differentiation over dense `f64` matrices.
//!
//! The tape is a flat `Vec` of nodes.  Recording an operation computes its
//! value eagerly and appends one node; [`Tape::backward`] walks the vector
//! once from the loss down to index 0, accumulating gradients.  Every tensor
//! is a 2-D matrix ([`Mat`]); scalars are `1×1`, row vectors `1×d`.
//!
//! Two kinds of inputs exist: [`Tape::leaf`] records a differentiable input
//! (a model parameter), [`Tape::constant`] a fixed one (features, masks).
//! Each node carries a `needs_grad` flag — true iff some leaf is among its
//! ancestors — and the backward pass skips gradient work for everything else,
//! so large constant inputs cost nothing extra.
//!
//! A training step builds a fresh tape, stages the current parameters as
//! leaves, records the forward pass, calls `backward`, and hands the
//! per-leaf gradients to the optimiser.  Nothing is retained across steps.

use std::rc::Rc;

use ndarray::{Array2, Axis};

use super::sparse::SparseMat;

/// Dense matrix type used throughout the crate.
pub type Mat = Array2<f64>;

/// Handle to a tensor recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TensorId(usize);

impl TensorId {
    /// Position of the tensor in its tape.
    pub fn index(&self) -> usize {
        self.0
    }
}

/// One recorded operation.
#[derive(Debug, Clone)]
enum Op {
    /// Input tensor; no backward.
    Input,
    /// Elementwise sum; `b` may be `1×c` and is then broadcast over rows.
    Add(TensorId, TensorId),
    /// Elementwise (Hadamard) product of equal shapes.
    Mul(TensorId, TensorId),
    /// Multiplication by a compile-time constant.
    Scale(TensorId, f64),
    /// Addition of a constant to every entry; the constant itself is not
    /// needed after the eager forward evaluation.
    AddScalar(TensorId),
    /// `op(a) · op(b)` where `op` is optional transposition.
    MatMul { a: TensorId, b: TensorId, ta: bool, tb: bool },
    /// Sparse × dense.  The sparse side is a constant of the graph.
    Spmm { sp: Rc<SparseMat>, b: TensorId },
    /// Row `i` multiplied by constant `scale[i]`.
    RowScale { x: TensorId, scale: Rc<Vec<f64>> },
    /// `max(x, 0) + slope · min(x, 0)` with a learnable `1×1` slope.
    Prelu { x: TensorId, slope: TensorId },
    /// `x` for `x ≥ 0`, `exp(x) − 1` otherwise.
    Elu(TensorId),
    /// Logistic function.
    Sigmoid(TensorId),
    /// Softmax computed independently down each column.
    SoftmaxCols(TensorId),
    /// Column-wise maximum over rows, yielding `1×d`; ties resolve to the
    /// lowest row index.
    MaxRows(TensorId),
    /// Column-wise minimum over rows, same tie rule.
    MinRows(TensorId),
    /// Row selection: output row `t` is input row `rows[t]`.
    GatherRows { x: TensorId, rows: Rc<Vec<usize>> },
    /// Sum of all entries, yielding `1×1`.
    Sum(TensorId),
    /// Mean of all entries, yielding `1×1`.
    MeanAll(TensorId),
    /// Clamp into `[lo, hi]`; gradient passes where `lo ≤ x ≤ hi`.
    Clamp { x: TensorId, lo: f64, hi: f64 },
    /// Natural logarithm (inputs must be positive; clamp first).
    Log(TensorId),
    /// Row-wise cosine similarity of two equal-shape matrices, yielding
    /// `n×1`.  A zero row on either side yields 0 with zero gradient.
    RowCosine(TensorId, TensorId),
}

#[derive(Debug)]
struct Node {
    op: Op,
    value: Mat,
    needs_grad: bool,
}

/// Gradients returned by [`Tape::backward`], addressable by tensor id.
#[derive(Debug)]
pub struct Grads {
    store: Vec<Option<Mat>>,
}

impl Grads {
    /// Gradient of the loss with respect to `id`, if it received any.
    pub fn get(&self, id: TensorId) -> Option<&Mat> {
        self.store.get(id.0).and_then(|g| g.as_ref())
    }

    /// Like [`Grads::get`] but falls back to a zero matrix of shape `shape`.
    pub fn get_or_zeros(&self, id: TensorId, shape: (usize, usize)) -> Mat {
        match self.get(id) {
            Some(g) => g.clone(),
            None => Mat::zeros(shape),
        }
    }
}

/// The recording tape.  See the module docs for the lifecycle.
#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    /// An empty tape.
    pub fn new() -> Tape {
        Tape { nodes: Vec::new() }
    }

    /// Number of recorded nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether nothing has been recorded yet.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Value of a recorded tensor.
    pub fn value(&self, id: TensorId) -> &Mat {
        &self.nodes[id.0].value
    }

    fn push(&mut self, op: Op, value: Mat, needs_grad: bool) -> TensorId {
        self.nodes.push(Node { op, value, needs_grad });
        TensorId(self.nodes.len() - 1)
    }

    fn ng(&self, id: TensorId) -> bool {
        self.nodes[id.0].needs_grad
    }

    /// Records a differentiable input (a parameter).
    pub fn leaf(&mut self, value: Mat) -> TensorId {
        self.push(Op::Input, value, true)
    }

    /// Records a constant input; no gradient is ever computed for it or for
    /// subtrees made only of constants.
    pub fn constant(&mut self, value: Mat) -> TensorId {
        self.push(Op::Input, value, false)
    }

    /// `a + b`.  Shapes must match, or `b` must be `1×c` with `c` matching
    /// `a`'s columns (row broadcast, e.g. a bias row).
    pub fn add(&mut self, a: TensorId, b: TensorId) -> TensorId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        let value = if va.dim() == vb.dim() {
            va + vb
        } else {
            assert_eq!(vb.nrows(), 1, "add: rhs must match lhs or be a 1-row broadcast");
            assert_eq!(vb.ncols(), va.ncols(), "add: broadcast column mismatch");
            va + &vb.row(0)
        };
        let needs = self.ng(a) || self.ng(b);
        self.push(Op::Add(a, b), value, needs)
    }

    /// Elementwise product of equal shapes.
    pub fn mul(&mut self, a: TensorId, b: TensorId) -> TensorId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.dim(), vb.dim(), "mul: shape mismatch");
        let value = va * vb;
        let needs = self.ng(a) || self.ng(b);
        self.push(Op::Mul(a, b), value, needs)
    }

    /// `c · x` for a constant `c`.
    pub fn scale(&mut self, x: TensorId, c: f64) -> TensorId {
        let value = self.nodes[x.0].value.mapv(|v| c * v);
        let needs = self.ng(x);
        self.push(Op::Scale(x, c), value, needs)
    }

    /// `x + c` applied to every entry.
    pub fn add_scalar(&mut self, x: TensorId, c: f64) -> TensorId {
        let value = self.nodes[x.0].value.mapv(|v| v + c);
        let needs = self.ng(x);
        self.push(Op::AddScalar(x), value, needs)
    }

    /// `a · b`.
    pub fn matmul(&mut self, a: TensorId, b: TensorId) -> TensorId {
        self.matmul_t(a, b, false, false)
    }

    /// `aᵀ · b`.
    pub fn matmul_ta(&mut self, a: TensorId, b: TensorId) -> TensorId {
        self.matmul_t(a, b, true, false)
    }

    /// `a · bᵀ`.
    pub fn matmul_tb(&mut self, a: TensorId, b: TensorId) -> TensorId {
        self.matmul_t(a, b, false, true)
    }

    /// Matrix product with optional transposition of either side.
    pub fn matmul_t(&mut self, a: TensorId, b: TensorId, ta: bool, tb: bool) -> TensorId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        let av = if ta { va.t() } else { va.view() };
        let bv = if tb { vb.t() } else { vb.view() };
        assert_eq!(av.ncols(), bv.nrows(), "matmul: inner dimension mismatch");
        let value = av.dot(&bv);
        let needs = self.ng(a) || self.ng(b);
        self.push(Op::MatMul { a, b, ta, tb }, value, needs)
    }

    /// Sparse × dense product `sp.fwd · b`.
    pub fn spmm(&mut self, sp: &Rc<SparseMat>, b: TensorId) -> TensorId {
        let vb = &self.nodes[b.0].value;
        let value = sp.fwd.mul_dense(&vb.view());
        let needs = self.ng(b);
        self.push(Op::Spmm { sp: Rc::clone(sp), b }, value, needs)
    }

    /// Multiplies row `i` by `scale[i]` (a constant vector).
    pub fn row_scale(&mut self, x: TensorId, scale: Rc<Vec<f64>>) -> TensorId {
        let vx = &self.nodes[x.0].value;
        assert_eq!(scale.len(), vx.nrows(), "row_scale: length mismatch");
        let mut value = vx.clone();
        for (i, mut row) in value.rows_mut().into_iter().enumerate() {
            row.mapv_inplace(|v| v * scale[i]);
        }
        let needs = self.ng(x);
        self.push(Op::RowScale { x, scale }, value, needs)
    }

    /// Parametric ReLU with a learnable `1×1` slope for the negative part.
    pub fn prelu(&mut self, x: TensorId, slope: TensorId) -> TensorId {
        assert_eq!(self.nodes[slope.0].value.dim(), (1, 1), "prelu: slope must be 1x1");
        let a = self.nodes[slope.0].value[[0, 0]];
        let value = self.nodes[x.0].value.mapv(|v| if v >= 0.0 { v } else { a * v });
        let needs = self.ng(x) || self.ng(slope);
        self.push(Op::Prelu { x, slope }, value, needs)
    }

    /// Exponential linear unit (`α = 1`).
    pub fn elu(&mut self, x: TensorId) -> TensorId {
        let value = self.nodes[x.0].value.mapv(|v| if v >= 0.0 { v } else { v.exp() - 1.0 });
        let needs = self.ng(x);
        self.push(Op::Elu(x), value, needs)
    }

    /// Logistic sigmoid.
    pub fn sigmoid(&mut self, x: TensorId) -> TensorId {
        let value = self.nodes[x.0].value.mapv(sigmoid);
        let needs = self.ng(x);
        self.push(Op::Sigmoid(x), value, needs)
    }

    /// Numerically stable softmax down each column.
    pub fn softmax_cols(&mut self, x: TensorId) -> TensorId {
        let vx = &self.nodes[x.0].value;
        let mut value = vx.clone();
        for mut col in value.columns_mut().into_iter() {
            let max = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            col.mapv_inplace(|v| (v - max).exp());
            let sum: f64 = col.sum();
            col.mapv_inplace(|v| v / sum);
        }
        let needs = self.ng(x);
        self.push(Op::SoftmaxCols(x), value, needs)
    }

    /// Column-wise max over rows (`n×d → 1×d`).
    pub fn max_rows(&mut self, x: TensorId) -> TensorId {
        let vx = &self.nodes[x.0].value;
        assert!(vx.nrows() > 0, "max_rows: empty input");
        let mut value = Mat::zeros((1, vx.ncols()));
        for c in 0..vx.ncols() {
            value[[0, c]] = vx.column(c).iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        }
        let needs = self.ng(x);
        self.push(Op::MaxRows(x), value, needs)
    }

    /// Column-wise min over rows (`n×d → 1×d`).
    pub fn min_rows(&mut self, x: TensorId) -> TensorId {
        let vx = &self.nodes[x.0].value;
        assert!(vx.nrows() > 0, "min_rows: empty input");
        let mut value = Mat::zeros((1, vx.ncols()));
        for c in 0..vx.ncols() {
            value[[0, c]] = vx.column(c).iter().cloned().fold(f64::INFINITY, f64::min);
        }
        let needs = self.ng(x);
        self.push(Op::MinRows(x), value, needs)
    }

    /// Selects rows by index; duplicates are allowed.
    pub fn gather_rows(&mut self, x: TensorId, rows: Rc<Vec<usize>>) -> TensorId {
        let vx = &self.nodes[x.0].value;
        let mut value = Mat::zeros((rows.len(), vx.ncols()));
        for (t, &r) in rows.iter().enumerate() {
            value.row_mut(t).assign(&vx.row(r));
        }
        let needs = self.ng(x);
        self.push(Op::GatherRows { x, rows }, value, needs)
    }

    /// Sum of all entries (`1×1`).
    pub fn sum(&mut self, x: TensorId) -> TensorId {
        let s = self.nodes[x.0].value.sum();
        let needs = self.ng(x);
        self.push(Op::Sum(x), Mat::from_elem((1, 1), s), needs)
    }

    /// Mean of all entries (`1×1`).  Computed as one sum and one division,
    /// so `n` identical entries average to exactly their common value.
    pub fn mean_all(&mut self, x: TensorId) -> TensorId {
        let vx = &self.nodes[x.0].value;
        let m = vx.sum() / vx.len() as f64;
        let needs = self.ng(x);
        self.push(Op::MeanAll(x), Mat::from_elem((1, 1), m), needs)
    }

    /// Clamps every entry into `[lo, hi]`.
    pub fn clamp(&mut self, x: TensorId, lo: f64, hi: f64) -> TensorId {
        assert!(lo <= hi, "clamp: lo must not exceed hi");
        let value = self.nodes[x.0].value.mapv(|v| v.clamp(lo, hi));
        let needs = self.ng(x);
        self.push(Op::Clamp { x, lo, hi }, value, needs)
    }

    /// Natural log of every entry.
    pub fn log(&mut self, x: TensorId) -> TensorId {
        let value = self.nodes[x.0].value.mapv(f64::ln);
        let needs = self.ng(x);
        self.push(Op::Log(x), value, needs)
    }

    /// Cosine similarity of matching rows of `a` and `b` (`n×d, n×d → n×1`).
    pub fn row_cosine(&mut self, a: TensorId, b: TensorId) -> TensorId {
        let (va, vb) = (&self.nodes[a.0].value, &self.nodes[b.0].value);
        assert_eq!(va.dim(), vb.dim(), "row_cosine: shape mismatch");
        let mut value = Mat::zeros((va.nrows(), 1));
        for i in 0..va.nrows() {
            let u = va.row(i);
            let v = vb.row(i);
            let (uu, vv) = (u.dot(&u), v.dot(&v));
            // sqrt(uu·vv) rather than sqrt(uu)·sqrt(vv): for bitwise-equal
            // rows the dot, uu, and vv coincide, and IEEE sqrt(fl(s·s)) = s,
            // so identical rows get a cosine of exactly 1.
            value[[i, 0]] =
                if uu == 0.0 || vv == 0.0 { 0.0 } else { u.dot(&v) / (uu * vv).sqrt() };
        }
        let needs = self.ng(a) || self.ng(b);
        self.push(Op::RowCosine(a, b), value, needs)
    }

    /// Runs the backward pass from `loss` (which must be `1×1`) and returns
    /// the gradient of every tensor that both needs one and received one.
    pub fn backward(&self, loss: TensorId) -> Grads {
        assert_eq!(self.nodes[loss.0].value.dim(), (1, 1), "backward: loss must be scalar");
        let mut store: Vec<Option<Mat>> = (0..self.nodes.len()).map(|_| None).collect();
        store[loss.0] = Some(Mat::from_elem((1, 1), 1.0));

        for i in (0..=loss.0).rev() {
            if !self.nodes[i].needs_grad || store[i].is_none() {
                continue;
            }
            let g = store[i].take().unwrap();
            self.accumulate(i, &g, &mut store);
            store[i] = Some(g);
        }
        Grads { store }
    }

    /// Routes the gradient `g` of node `i` into the gradients of its inputs.
    fn accumulate(&self, i: usize, g: &Mat, store: &mut [Option<Mat>]) {
        let node = &self.nodes[i];
        match &node.op {
            Op::Input => {}
            Op::Add(a, b) => {
                if self.ng(*a) {
                    acc(store, *a, g);
                }
                if self.ng(*b) {
                    let vb = &self.nodes[b.0].value;
                    if vb.dim() == g.dim() {
                        acc(store, *b, g);
                    } else {
                        let summed = g.sum_axis(Axis(0)).insert_axis(Axis(0));
                        acc(store, *b, &summed);
                    }
                }
            }
            Op::Mul(a, b) => {
                if self.ng(*a) {
                    acc(store, *a, &(g * &self.nodes[b.0].value));
                }
                if self.ng(*b) {
                    acc(store, *b, &(g * &self.nodes[a.0].value));
                }
            }
            Op::Scale(x, c) => {
                if self.ng(*x) {
                    acc(store, *x, &g.mapv(|v| c * v));
                }
            }
            Op::AddScalar(x) => {
                if self.ng(*x) {
                    acc(store, *x, g);
                }
            }
            Op::MatMul { a, b, ta, tb } => {
                let va = &self.nodes[a.0].value;
                let vb = &self.nodes[b.0].value;
                let av = if *ta { va.t() } else { va.view() };
                let bv = if *tb { vb.t() } else { vb.view() };
                if self.ng(*a) {
                    // dA' = g · B'ᵀ; transpose back if the op transposed a.
                    let d = if *ta { bv.dot(&g.t()) } else { g.dot(&bv.t()) };
                    acc(store, *a, &d);
                }
                if self.ng(*b) {
                    // dB' = A'ᵀ · g.
                    let d = if *tb { g.t().dot(&av) } else { av.t().dot(g) };
                    acc(store, *b, &d);
                }
            }
            Op::Spmm { sp, b } => {
                if self.ng(*b) {
                    acc(store, *b, &sp.bwd.mul_dense(&g.view()));
                }
            }
            Op::RowScale { x, scale } => {
                if self.ng(*x) {
                    let mut d = g.clone();
                    for (r, mut row) in d.rows_mut().into_iter().enumerate() {
                        row.mapv_inplace(|v| v * scale[r]);
                    }
                    acc(store, *x, &d);
                }
            }
            Op::Prelu { x, slope } => {
                let vx = &self.nodes[x.0].value;
                let a = self.nodes[slope.0].value[[0, 0]];
                if self.ng(*x) {
                    let mut d = g.clone();
                    d.zip_mut_with(vx, |gv, &xv| {
                        if xv < 0.0 {
                            *gv *= a;
                        }
                    });
                    acc(store, *x, &d);
                }
                if self.ng(*slope) {
                    let mut ds = 0.0;
                    for (gv, &xv) in g.iter().zip(vx.iter()) {
                        if xv < 0.0 {
                            ds += gv * xv;
                        }
                    }
                    acc(store, *slope, &Mat::from_elem((1, 1), ds));
                }
            }
            Op::Elu(x) => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let vy = &node.value;
                    let mut d = g.clone();
                    for ((gv, &xv), &yv) in d.iter_mut().zip(vx.iter()).zip(vy.iter()) {
                        if xv < 0.0 {
                            *gv *= yv + 1.0;
                        }
                    }
                    acc(store, *x, &d);
                }
            }
            Op::Sigmoid(x) => {
                if self.ng(*x) {
                    let vy = &node.value;
                    let d = g * &vy.mapv(|y| y * (1.0 - y));
                    acc(store, *x, &d);
                }
            }
            Op::SoftmaxCols(x) => {
                if self.ng(*x) {
                    let vy = &node.value;
                    let mut d = Mat::zeros(g.dim());
                    for c in 0..g.ncols() {
                        let yc = vy.column(c);
                        let gc = g.column(c);
                        let dot: f64 = yc.iter().zip(gc.iter()).map(|(y, gv)| y * gv).sum();
                        for r in 0..g.nrows() {
                            d[[r, c]] = yc[r] * (gc[r] - dot);
                        }
                    }
                    acc(store, *x, &d);
                }
            }
            Op::MaxRows(x) => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let mut d = Mat::zeros(vx.dim());
                    for c in 0..vx.ncols() {
                        let col = vx.column(c);
                        let mut best = 0usize;
                        for r in 1..col.len() {
                            if col[r] > col[best] {
                                best = r;
                            }
                        }
                        d[[best, c]] = g[[0, c]];
                    }
                    acc(store, *x, &d);
                }
            }
            Op::MinRows(x) => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let mut d = Mat::zeros(vx.dim());
                    for c in 0..vx.ncols() {
                        let col = vx.column(c);
                        let mut best = 0usize;
                        for r in 1..col.len() {
                            if col[r] < col[best] {
                                best = r;
                            }
                        }
                        d[[best, c]] = g[[0, c]];
                    }
                    acc(store, *x, &d);
                }
            }
            Op::GatherRows { x, rows } => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let mut d = Mat::zeros(vx.dim());
                    for (t, &r) in rows.iter().enumerate() {
                        let mut dst = d.row_mut(r);
                        dst += &g.row(t);
                    }
                    acc(store, *x, &d);
                }
            }
            Op::Sum(x) => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let d = Mat::from_elem(vx.dim(), g[[0, 0]]);
                    acc(store, *x, &d);
                }
            }
            Op::MeanAll(x) => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let d = Mat::from_elem(vx.dim(), g[[0, 0]] / vx.len() as f64);
                    acc(store, *x, &d);
                }
            }
            Op::Clamp { x, lo, hi } => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let mut d = g.clone();
                    d.zip_mut_with(vx, |gv, &xv| {
                        if xv < *lo || xv > *hi {
                            *gv = 0.0;
                        }
                    });
                    acc(store, *x, &d);
                }
            }
            Op::Log(x) => {
                if self.ng(*x) {
                    let vx = &self.nodes[x.0].value;
                    let d = g / vx;
                    acc(store, *x, &d);
                }
            }
            Op::RowCosine(a, b) => {
                let va = &self.nodes[a.0].value;
                let vb = &self.nodes[b.0].value;
                let vy = &node.value;
                let want_a = self.ng(*a);
                let want_b = self.ng(*b);
                let mut da = want_a.then(|| Mat::zeros(va.dim()));
                let mut db = want_b.then(|| Mat::zeros(vb.dim()));
                for i in 0..va.nrows() {
                    let u = va.row(i);
                    let v = vb.row(i);
                    let nu = u.dot(&u).sqrt();
                    let nv = v.dot(&v).sqrt();
                    if nu == 0.0 || nv == 0.0 {
                        continue;
                    }
                    let c = vy[[i, 0]];
                    let gi = g[[i, 0]];
                    if let Some(da) = da.as_mut() {
                        let mut row = da.row_mut(i);
                        for j in 0..u.len() {
                            row[j] = gi * (v[j] / (nu * nv) - c * u[j] / (nu * nu));
                        }
                    }
                    if let Some(db) = db.as_mut() {
                        let mut row = db.row_mut(i);
                        for j in 0..v.len() {
                            row[j] = gi * (u[j] / (nu * nv) - c * v[j] / (nv * nv));
                        }
                    }
                }
                if let Some(da) = da {
                    acc(store, *a, &da);
                }
                if let Some(db) = db {
                    acc(store, *b, &db);
                }
            }
        }
    }
}

/// Adds `delta` into the gradient slot for `id`.
fn acc(store: &mut [Option<Mat>], id: TensorId, delta: &Mat) {
    match &mut store[id.0] {
        Some(g) => *g += delta,
        slot @ None => *slot = Some(delta.clone()),
    }
}

/// Scalar logistic function, shared with the non-tape eval path.
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}
