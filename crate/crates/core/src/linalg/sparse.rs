//! Compressed sparse row storage for symmetric real matrices.

use nalgebra::DMatrix;

/// Symmetric matrix stored with both triangles in CSR form.
///
/// Construction always goes through [`SymmetricMatrix::from_upper`], which
/// mirrors every off-diagonal entry, so the stored matrix equals its own
/// transpose bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from upper-triangle entries `(i, j, v)` with `i <= j`.
    ///
    /// Repeated coordinates are summed in input order. Explicit zeros are dropped.
    pub fn from_upper(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut upper: Vec<(usize, usize, f64)> = entries.into_iter().collect();
        for &(i, j, _) in &upper {
            assert!(i <= j && j < n, "entry ({i}, {j}) is not in the upper triangle of a {n}x{n} matrix");
        }
        upper.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(upper.len());
        for (i, j, v) in upper {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        merged.retain(|e| e.2 != 0.0);

        let mut full: Vec<(usize, usize, f64)> = Vec::with_capacity(merged.len() * 2);
        for &(i, j, v) in &merged {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        full.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; n + 1];
        for &(i, _, _) in &full {
            row_ptr[i + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = full.iter().map(|e| e.1).collect();
        let values = full.iter().map(|e| e.2).collect();
        Self { n, row_ptr, col_idx, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero entries `(column, value)` of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(pos) => self.values[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// `y = A x`
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `x^T A x`
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, v)| self.get(j, i) == v))
    }

    /// Upper bound on the spectral radius (maximum absolute row sum).
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Connected components of the off-diagonal sparsity pattern.
    ///
    /// Components are listed by their smallest index; members are ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            label[start] = id;
            stack.push(start);
            while let Some(i) = stack.pop() {
                for (j, _) in self.row(i) {
                    if label[j] == usize::MAX {
                        label[j] = id;
                        members.push(j);
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    /// Principal submatrix on `indices` (which must be ascending and unique).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let mut local = vec![usize::MAX; self.n];
        for (k, &i) in indices.iter().enumerate() {
            local[i] = k;
        }
        let mut entries = Vec::new();
        for (a, &i) in indices.iter().enumerate() {
            for (j, v) in self.row(i) {
                let b = local[j];
                if b != usize::MAX && a <= b {
                    entries.push((a, b, v));
                }
            }
        }
        Self::from_upper(indices.len(), entries)
    }
}
