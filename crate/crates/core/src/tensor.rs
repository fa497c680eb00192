//! Sparse symmetric quadratic tensors.
//!
//! Row `i` of a [`QuadTensor`] holds the coefficients of the quadratic form
//! `Σ_{j≤k} c_{i,jk} x_j x_k`, so mixed terms carry the full coefficient of
//! the monomial `x_j x_k` (not half of it).

use nalgebra::DMatrix;

use crate::error::{check_dim, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadTensor {
    n: usize,
    rows: Vec<Vec<Entry>>,
}

impl QuadTensor {
    pub fn zeros(n: usize) -> Self {
        Self { n, rows: vec![Vec::new(); n] }
    }

    /// Builds a tensor from `f(i, j, k)` evaluated for every `j ≤ k`.
    /// Exact zeros are not stored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut row = Vec::new();
                for j in 0..n {
                    for k in j..n {
                        let value = f(i, j, k);
                        if value != 0.0 {
                            row.push(Entry { j, k, value });
                        }
                    }
                }
                row
            })
            .collect();
        Self { n, rows }
    }

    /// Builds a tensor from `(i, j, k, value)` triples; index order of `j, k`
    /// is irrelevant and duplicates are summed.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, usize, f64)>) -> Self {
        let mut t = Self::zeros(n);
        for (i, j, k, v) in entries {
            t.add(i, j, k, v);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Entry] {
        &self.rows[i]
    }

    pub fn add(&mut self, i: usize, j: usize, k: usize, value: f64) {
        assert!(i < self.n && j < self.n && k < self.n, "tensor index out of range");
        let (j, k) = if j <= k { (j, k) } else { (k, j) };
        let row = &mut self.rows[i];
        match row.binary_search_by(|e| (e.j, e.k).cmp(&(j, k))) {
            Ok(pos) => row[pos].value += value,
            Err(pos) => row.insert(pos, Entry { j, k, value }),
        }
    }

    /// Coefficient of `x_j x_k` in row `i` (order of `j, k` irrelevant).
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        let (j, k) = if j <= k { (j, k) } else { (k, j) };
        self.rows[i]
            .binary_search_by(|e| (e.j, e.k).cmp(&(j, k)))
            .map(|pos| self.rows[i][pos].value)
            .unwrap_or(0.0)
    }

    /// All stored entries as `(i, j, k, value)` with `j ≤ k`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |e| (i, e.j, e.k, e.value)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().fold(0.0, |m, (_, _, _, v)| m.max(v.abs()))
    }

    /// Drops every entry with `|value| < threshold`.
    pub fn prune(&mut self, threshold: f64) {
        for row in &mut self.rows {
            row.retain(|e| e.value.abs() >= threshold && e.value.is_finite());
        }
    }

    /// `out_i = Σ_{j≤k} c_{i,jk} x_j x_k`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().map(|e| e.value * x[e.j] * x[e.k]).sum();
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, x.len())?;
        let mut out = vec![0.0; self.n];
        self.eval_into(x, &mut out);
        Ok(out)
    }

    /// Jacobian `∂/∂x_m Σ c_{i,jk} x_j x_k`.
    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for e in row {
                jac[(i, e.j)] += e.value * x[e.k];
                jac[(i, e.k)] += e.value * x[e.j];
            }
        }
        jac
    }

    /// Linear change of variables `x = A y` followed by premultiplication
    /// with `B`: returns the tensor of `y ↦ B · Q(A y)`.
    pub fn transform(&self, b: &DMatrix<f64>, a: &DMatrix<f64>) -> Self {
        let n_out = b.nrows();
        let m = a.ncols();
        assert_eq!(b.ncols(), self.n);
        assert_eq!(a.nrows(), self.n);
        // Per source row r: the symmetric bilinear pullback, in upper-triangular packed form.
        let packed = m * (m + 1) / 2;
        let idx = |j: usize, k: usize| j * m - j * (j + 1) / 2 + k;
        let mut pulled = vec![vec![0.0; packed]; self.n];
        for (r, row) in self.rows.iter().enumerate() {
            let acc = &mut pulled[r];
            for e in row {
                for j in 0..m {
                    let aj_j = a[(e.j, j)];
                    let ak_j = a[(e.k, j)];
                    if aj_j == 0.0 && ak_j == 0.0 {
                        continue;
                    }
                    for k in j..m {
                        let v = if j == k {
                            aj_j * ak_j
                        } else {
                            aj_j * a[(e.k, k)] + a[(e.j, k)] * ak_j
                        };
                        acc[idx(j, k)] += e.value * v;
                    }
                }
            }
        }
        let mut out = Self::zeros(n_out);
        for i in 0..n_out {
            let mut dense = vec![0.0; packed];
            for (r, src) in pulled.iter().enumerate() {
                let w = b[(i, r)];
                if w == 0.0 {
                    continue;
                }
                for (d, s) in dense.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
            let mut row = Vec::new();
            for j in 0..m {
                for k in j..m {
                    let value = dense[idx(j, k)];
                    if value != 0.0 {
                        row.push(Entry { j, k, value });
                    }
                }
            }
            out.rows[i] = row;
        }
        out
    }

    /// Tensor of the rescaled variables `x_i = s_i y_i`:
    /// `c'_{i,jk} = c_{i,jk} s_j s_k / s_i`.
    pub fn rescaled(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.n);
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|e| Entry { value: e.value * s[e.j] * s[e.k] / s[i], ..*e })
                    .collect()
            })
            .collect();
        Self { n: self.n, rows }
    }

    /// Renumbers modes: new index `a` refers to old index `order[a]`.
    /// `order` may select a subset, which restricts the tensor to those rows
    /// and drops every entry touching an unselected mode.
    pub fn select(&self, order: &[usize]) -> Self {
        let mut new_of_old = vec![usize::MAX; self.n];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let mut out = Self::zeros(order.len());
        for (new_i, &old_i) in order.iter().enumerate() {
            for e in &self.rows[old_i] {
                let (j, k) = (new_of_old[e.j], new_of_old[e.k]);
                if j != usize::MAX && k != usize::MAX {
                    out.add(new_i, j, k, e.value);
                }
            }
        }
        out
    }
}
