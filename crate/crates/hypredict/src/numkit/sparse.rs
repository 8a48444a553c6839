//! Compressed sparse row (CSR) matrices.
//!
//! Used for the hypergraph incidence matrix and its transpose, and for sparse
//! node-feature matrices (bag-of-words features are typically >99% zero).
//! The only dense interaction the pipeline needs is `sparse × dense`, which
//! [`Csr::mul_dense`] provides; [`SparseMat`] pairs a matrix with its
//! transpose so the backward pass of that product never has to transpose on
//! the fly.

use ndarray::{Array2, ArrayView2};

/// A read-only CSR matrix over `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    nrows: usize,
    ncols: usize,
    /// `indptr[i]..indptr[i + 1]` spans row `i` in `indices` / `values`.
    indptr: Vec<usize>,
    /// Column index of each stored entry, ascending within a row.
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl Csr {
    /// Builds a CSR matrix from `(row, col, value)` triplets.  Duplicate
    /// coordinates are summed; explicit zeros are kept (they do not change
    /// products but do count towards `nnz`).
    ///
    /// # Panics
    /// If any coordinate is out of range.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Csr {
        for &(r, c, _) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of {nrows}x{ncols}");
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(r, c, _)| (r, c));

        let mut indptr = vec![0usize; nrows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        let mut prev: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if prev == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                prev = Some((r, c));
            }
            indptr[r + 1] = indices.len();
        }
        // Rows with no entries inherit the running offset.
        for i in 1..=nrows {
            indptr[i] = indptr[i].max(indptr[i - 1]);
        }
        Csr { nrows, ncols, indptr, indices, values }
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    /// The transpose, as a new CSR matrix (counting sort over columns).
    pub fn transpose(&self) -> Csr {
        let mut indptr = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            indptr[c + 1] += 1;
        }
        for i in 0..self.ncols {
            indptr[i + 1] += indptr[i];
        }
        let mut cursor = indptr.clone();
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![0f64; self.nnz()];
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                let dst = cursor[c];
                indices[dst] = r;
                values[dst] = v;
                cursor[c] += 1;
            }
        }
        Csr { nrows: self.ncols, ncols: self.nrows, indptr, indices, values }
    }

    /// Returns a copy with row `i` multiplied by `scale[i]`.
    ///
    /// # Panics
    /// If `scale.len() != nrows`.
    pub fn row_scaled(&self, scale: &[f64]) -> Csr {
        assert_eq!(scale.len(), self.nrows, "scale length must equal row count");
        let mut out = self.clone();
        for r in 0..self.nrows {
            for idx in out.indptr[r]..out.indptr[r + 1] {
                out.values[idx] *= scale[r];
            }
        }
        out
    }

    /// Dense product `self · b`.
    ///
    /// # Panics
    /// On inner-dimension mismatch.
    pub fn mul_dense(&self, b: &ArrayView2<f64>) -> Array2<f64> {
        assert_eq!(self.ncols, b.nrows(), "inner dimensions must agree");
        let mut out = Array2::zeros((self.nrows, b.ncols()));
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            let mut out_row = out.row_mut(r);
            for (&c, &v) in cols.iter().zip(vals) {
                out_row.scaled_add(v, &b.row(c));
            }
        }
        out
    }

    /// Dense copy, for tests and tiny reference computations.
    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.nrows, self.ncols));
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                out[[r, c]] += v;
            }
        }
        out
    }

    /// Builds a CSR matrix keeping every non-zero entry of `dense`.
    pub fn from_dense(dense: &ArrayView2<f64>) -> Csr {
        let mut triplets = Vec::new();
        for ((r, c), &v) in dense.indexed_iter() {
            if v != 0.0 {
                triplets.push((r, c, v));
            }
        }
        Csr::from_triplets(dense.nrows(), dense.ncols(), &triplets)
    }
}

/// A sparse matrix bundled with its transpose.
///
/// The autodiff tape multiplies by `fwd` on the forward pass and by `bwd`
/// (= `fwd` transposed) on the backward pass, so both orientations are built
/// exactly once per graph construction rather than once per training step.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMat {
    /// The matrix itself.
    pub fwd: Csr,
    /// Its transpose.
    pub bwd: Csr,
}

impl SparseMat {
    /// Wraps `m`, precomputing the transpose.
    pub fn new(m: Csr) -> SparseMat {
        let bwd = m.transpose();
        SparseMat { fwd: m, bwd }
    }

    /// Rows of the forward orientation.
    pub fn nrows(&self) -> usize {
        self.fwd.nrows()
    }

    /// Columns of the forward orientation.
    pub fn ncols(&self) -> usize {
        self.fwd.ncols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn triplets_roundtrip_dense() {
        let m = Csr::from_triplets(2, 3, &[(0, 1, 2.0), (1, 0, -1.0), (1, 2, 4.0)]);
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.to_dense(), array![[0.0, 2.0, 0.0], [-1.0, 0.0, 4.0]]);
    }

    #[test]
    fn duplicate_triplets_are_summed() {
        let m = Csr::from_triplets(1, 2, &[(0, 1, 2.0), (0, 1, 3.0), (0, 0, 1.0)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.to_dense(), array![[1.0, 5.0]]);
    }

    #[test]
    fn empty_rows_are_fine() {
        let m = Csr::from_triplets(3, 2, &[(2, 0, 7.0)]);
        assert_eq!(m.row(0), (&[][..], &[][..]));
        assert_eq!(m.row(1), (&[][..], &[][..]));
        assert_eq!(m.row(2), (&[0][..], &[7.0][..]));
    }

    #[test]
    fn transpose_matches_dense_transpose() {
        let m = Csr::from_triplets(2, 3, &[(0, 1, 2.0), (1, 0, -1.0), (1, 2, 4.0)]);
        assert_eq!(m.transpose().to_dense(), m.to_dense().t().to_owned());
    }

    #[test]
    fn row_scaled_sparse_product_hand_value() {
        // [[1, 1]] scaled by 0.5, times [[1], [3]]  ->  [[2.0]]
        let h = Csr::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]);
        let scaled = h.row_scaled(&[0.5]);
        let b = array![[1.0], [3.0]];
        let out = scaled.mul_dense(&b.view());
        assert_eq!(out, array![[2.0]]);
    }

    #[test]
    fn mul_dense_matches_dense_matmul() {
        let dense = array![[0.0, 2.0, 0.0], [1.5, 0.0, -3.0], [0.0, 0.0, 0.5]];
        let sp = Csr::from_dense(&dense.view());
        let b = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        assert_eq!(sp.mul_dense(&b.view()), dense.dot(&b));
    }

    #[test]
    fn sparse_mat_orientations_agree() {
        let m = Csr::from_triplets(2, 3, &[(0, 2, 1.0), (1, 1, 5.0)]);
        let pair = SparseMat::new(m.clone());
        assert_eq!(pair.fwd.to_dense(), m.to_dense());
        assert_eq!(pair.bwd.to_dense(), m.to_dense().t().to_owned());
        assert_eq!(pair.nrows(), 2);
        assert_eq!(pair.ncols(), 3);
    }
}
