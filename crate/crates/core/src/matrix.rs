//! Sparse non-negative square matrices in compressed-row form.
//!
//! Every matrix in the pipeline (transition, joint, tensored, restricted,
//! Hadamard power) is a [`NonnegMatrix`]. Only strictly positive entries
//! are stored, so the stored pattern is exactly the associated graph.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct NonnegMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

fn check_entry(row: usize, col: usize, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFiniteEntry { row, col });
    }
    if value < 0.0 {
        return Err(Error::NegativeEntry { row, col, value });
    }
    Ok(())
}

impl NonnegMatrix {
    pub fn zeros(dim: usize) -> Self {
        NonnegMatrix {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        NonnegMatrix {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim).collect(),
            vals: vec![1.0; dim],
        }
    }

    /// Builds a matrix from dense rows. Zeros are dropped; negative or
    /// non-finite values are rejected.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: dim,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                check_entry(i, j, v)?;
                if v > 0.0 {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(NonnegMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        })
    }

    /// Builds a matrix from per-row `(column, value)` lists. Columns within
    /// a row may come in any order; duplicates are summed.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if rows.len() != dim {
            return Err(Error::DimensionMismatch {
                what: "row count",
                expected: dim,
                found: rows.len(),
            });
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|&(c, _)| c);
            let start = cols.len();
            for (j, v) in row {
                if j >= dim {
                    return Err(Error::DimensionMismatch {
                        what: "column index",
                        expected: dim,
                        found: j,
                    });
                }
                check_entry(i, j, v)?;
                if v == 0.0 {
                    continue;
                }
                if cols.len() > start && cols[cols.len() - 1] == j {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                }
            }
            row_ptr.push(cols.len());
        }
        Ok(NonnegMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (strictly positive) entries.
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.row_ptr[i + 1] - self.row_ptr[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    /// Iterates over all stored entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).map(|(_, v)| v).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.row_sum(i)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for (i, j, v) in self.entries() {
            out[i][j] = v;
        }
        out
    }

    /// Row-vector product `out = w^T A`.
    pub fn left_mul_into(&self, w: &[f64], out: &mut [f64]) {
        debug_assert_eq!(w.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        out.fill(0.0);
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0.0 {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.cols[k]] += wi * self.vals[k];
            }
        }
    }

    pub fn left_mul(&self, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.left_mul_into(w, &mut out);
        out
    }

    /// Column-vector product `A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).map(|(j, v)| v * x[j]).sum())
            .collect()
    }

    /// Principal submatrix on `nodes`, in the order given.
    pub fn principal_submatrix(&self, nodes: &[usize]) -> NonnegMatrix {
        let mut position = vec![usize::MAX; self.dim];
        for (k, &n) in nodes.iter().enumerate() {
            position[n] = k;
        }
        let rows = nodes
            .iter()
            .map(|&n| {
                self.row(n)
                    .filter_map(|(j, v)| {
                        let p = position[j];
                        (p != usize::MAX).then_some((p, v))
                    })
                    .collect()
            })
            .collect();
        NonnegMatrix::from_rows(nodes.len(), rows).expect("submatrix of a valid matrix")
    }

    /// Entrywise map preserving the sparsity pattern; `f` must return a
    /// positive value for positive input.
    pub(crate) fn map_values(&self, f: impl Fn(f64) -> f64) -> NonnegMatrix {
        NonnegMatrix {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Scales rows whose sum is further than `slack` from 1 to unit sum.
    /// Rows summing to zero are left alone.
    pub(crate) fn normalize_rows(&mut self, slack: f64) {
        for i in 0..self.dim {
            let range = self.row_ptr[i]..self.row_ptr[i + 1];
            let s: f64 = self.vals[range.clone()].iter().sum();
            if s > 0.0 && (s - 1.0).abs() > slack {
                for v in &mut self.vals[range] {
                    *v /= s;
                }
            }
        }
    }
}

/// Non-square stochastic kernel (used for emissions), stored densely since
/// alphabets are small.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn from_dense(rows: &[Vec<f64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "kernel row",
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                check_entry(i, j, v)?;
                data.push(v);
            }
        }
        Ok(Kernel {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}
