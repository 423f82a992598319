use nalgebra::DMatrix;

use crate::C64;

/// Square complex matrix in compressed sparse row form.
///
/// `support` lists the mode labels the operator acts on nontrivially.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
    pub support: Vec<u8>,
}

impl SparseOp {
    /// Duplicate entries are summed; exact zeros are dropped.
    pub fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, C64)>, support: Vec<u8>) -> SparseOp {
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<C64> = Vec::with_capacity(entries.len());
        let mut rows = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside dimension {dim}");
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        let mut keep_cols = Vec::with_capacity(cols.len());
        let mut keep_vals = Vec::with_capacity(vals.len());
        for ((r, c), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != C64::new(0.0, 0.0) {
                row_ptr[r + 1] += 1;
                keep_cols.push(c);
                keep_vals.push(v);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut support = support;
        support.sort_unstable();
        support.dedup();
        SparseOp { dim, row_ptr, cols: keep_cols, vals: keep_vals, support }
    }

    pub fn identity(dim: usize) -> SparseOp {
        SparseOp::from_triplets(dim, (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect(), Vec::new())
    }

    pub fn zero(dim: usize) -> SparseOp {
        SparseOp::from_triplets(dim, Vec::new(), Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    fn merged_support(&self, other: &SparseOp) -> Vec<u8> {
        self.support.iter().chain(other.support.iter()).copied().collect()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        (0..self.dim)
            .map(|r| {
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(|k| self.vals[k] * v[self.cols[k]])
                    .sum()
            })
            .collect()
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseOp) -> SparseOp {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = vec![C64::new(0.0, 0.0); self.dim];
        let mut touched = vec![false; self.dim];
        let mut entries = Vec::new();
        for r in 0..self.dim {
            let mut cols_here = Vec::new();
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let (mid, a) = (self.cols[k], self.vals[k]);
                for j in other.row_ptr[mid]..other.row_ptr[mid + 1] {
                    let c = other.cols[j];
                    if !touched[c] {
                        touched[c] = true;
                        cols_here.push(c);
                    }
                    acc[c] += a * other.vals[j];
                }
            }
            cols_here.sort_unstable();
            for c in cols_here {
                entries.push((r, c, acc[c]));
                acc[c] = C64::new(0.0, 0.0);
                touched[c] = false;
            }
        }
        SparseOp::from_triplets(self.dim, entries, self.merged_support(other))
    }

    pub fn adjoint(&self) -> SparseOp {
        let entries = self.triplets().map(|(r, c, v)| (c, r, v.conj())).collect();
        SparseOp::from_triplets(self.dim, entries, self.support.clone())
    }

    pub fn add(&self, other: &SparseOp) -> SparseOp {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let entries = self.triplets().chain(other.triplets()).collect();
        SparseOp::from_triplets(self.dim, entries, self.merged_support(other))
    }

    pub fn sub(&self, other: &SparseOp) -> SparseOp {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> SparseOp {
        let entries = self.triplets().map(|(r, c, v)| (r, c, v * s)).collect();
        SparseOp::from_triplets(self.dim, entries, self.support.clone())
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &SparseOp) -> SparseOp {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<C64>, support: Vec<u8>) -> SparseOp {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        let mut entries = Vec::new();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if m[(r, c)] != C64::new(0.0, 0.0) {
                    entries.push((r, c, m[(r, c)]));
                }
            }
        }
        SparseOp::from_triplets(m.nrows(), entries, support)
    }

    /// Largest absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let mut sums = vec![0.0; self.dim];
        for (_, c, v) in self.triplets() {
            sums[c] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Largest entry-wise difference.
    pub fn max_abs_diff(&self, other: &SparseOp) -> f64 {
        self.sub(other).vals.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `exp(self) v` by Taylor series over substeps of unit norm.
    pub fn expm_action(&self, v: &[C64]) -> Vec<C64> {
        let steps = self.norm_1().ceil().max(1.0) as usize;
        let inv = 1.0 / steps as f64;
        let mut out = v.to_vec();
        for _ in 0..steps {
            let mut term = out.clone();
            let mut acc = out.clone();
            for k in 1..=200 {
                term = self.apply(&term);
                let f = inv / k as f64;
                term.iter_mut().for_each(|t| *t *= f);
                let mut tn = 0.0;
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += *t;
                    tn += t.norm_sqr();
                }
                let an: f64 = acc.iter().map(|a| a.norm_sqr()).sum();
                if tn <= 1e-34 * an.max(1e-300) {
                    break;
                }
            }
            out = acc;
        }
        out
    }
}
