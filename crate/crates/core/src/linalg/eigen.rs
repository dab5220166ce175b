//! Smallest eigenpairs of sparse symmetric matrices.
//!
//! The matrix is split into the connected components of its sparsity pattern
//! and each block is solved on its own, so eigenvalue multiplicities coming
//! from disconnected pieces are recovered exactly. Blocks up to
//! [`DENSE_LIMIT`] rows go through a dense symmetric QR solve; larger blocks use
//! Lanczos with full reorthogonalization.

use super::SymmetricMatrix;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DENSE_LIMIT: usize = 2000;

/// Eigenpairs sorted by ascending eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// `n x d`, column `j` is the unit eigenvector of `values[j]`.
    pub vectors: DMatrix<f64>,
}

pub fn smallest_eigenpairs(a: &SymmetricMatrix, d: usize, tol: f64) -> Result<EigenPairs> {
    smallest_eigenpairs_with_limit(a, d, tol, DENSE_LIMIT)
}

/// As [`smallest_eigenpairs`], with an explicit block-size switch between the
/// dense and Lanczos paths.
pub fn smallest_eigenpairs_with_limit(a: &SymmetricMatrix, d: usize, tol: f64, dense_limit: usize) -> Result<EigenPairs> {
    let n = a.n();
    if d > n {
        return Err(Error::EmbeddingDimension { dim: d, nodes: n });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig(format!("eigen tolerance must be positive, got {tol}")));
    }

    struct Candidate {
        value: f64,
        comp: usize,
        rank: usize,
        vector: Vec<f64>,
    }

    let comps = a.components();
    let mut candidates = Vec::new();
    for (c, members) in comps.iter().enumerate() {
        let want = d.min(members.len());
        let block = a.principal_submatrix(members);
        let (values, vectors) = if members.len() <= dense_limit {
            dense_smallest(&block, want)
        } else {
            lanczos_smallest(&block, want, tol)?
        };
        for (rank, (value, vector)) in values.into_iter().zip(vectors).enumerate() {
            candidates.push(Candidate { value, comp: c, rank, vector });
        }
    }
    candidates.sort_by(|x, y| x.value.total_cmp(&y.value).then(x.comp.cmp(&y.comp)).then(x.rank.cmp(&y.rank)));
    candidates.truncate(d);

    let mut vectors = DMatrix::zeros(n, d);
    let mut values = Vec::with_capacity(d);
    for (j, cand) in candidates.into_iter().enumerate() {
        for (&i, &x) in comps[cand.comp].iter().zip(&cand.vector) {
            vectors[(i, j)] = x;
        }
        values.push(cand.value);
    }
    Ok(EigenPairs { values, vectors })
}

/// Unit length, and the first entry of largest magnitude made positive.
fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    let mut pivot = 0.0f64;
    for &x in v.iter() {
        if x.abs() > pivot.abs() + 1e-12 {
            pivot = x;
        }
    }
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn dense_smallest(a: &SymmetricMatrix, want: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(a.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    order
        .into_iter()
        .take(want)
        .map(|j| {
            let mut v: Vec<f64> = eig.eigenvectors.column(j).iter().copied().collect();
            normalize_sign(&mut v);
            (eig.eigenvalues[j], v)
        })
        .unzip()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Orthogonalize `w` against every vector in `basis`, two passes of classical Gram-Schmidt.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(w, b);
            w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
        }
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
        reorthogonalize(&mut v, basis);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return Some(v);
        }
    }
    None
}

/// Lanczos with full reorthogonalization for the `want` smallest eigenpairs.
///
/// The Krylov basis grows until every wanted Ritz pair has residual below
/// `tol`, checking at doubling basis sizes. On breakdown (an invariant
/// subspace) the recurrence restarts from a fresh vector orthogonal to the
/// basis, which is what lets repeated eigenvalues surface.
pub fn lanczos_smallest(a: &SymmetricMatrix, want: usize, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = a.n();
    if want == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let scale = a.gershgorin_bound().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a4c_205e);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut q = random_unit(n, &mut rng, &basis).expect("nonzero dimension");
    let mut w = vec![0.0; n];
    let mut next_check = (2 * want + 40).min(n);

    loop {
        a.mul_vec_into(&q, &mut w);
        alpha.push(dot(&w, &q));
        basis.push(q);
        reorthogonalize(&mut w, &basis);
        let b = norm(&w);
        let m = basis.len();
        let breakdown = b <= 1e-10 * scale;

        if m == n || (m >= next_check && !breakdown) {
            let mut t = DMatrix::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
            let chosen = &order[..want.min(m)];
            let estimates_ok = m == n || chosen.iter().all(|&j| (b * eig.eigenvectors[(m - 1, j)]).abs() < 0.5 * tol);
            if chosen.len() == want && estimates_ok {
                let mut values = Vec::with_capacity(want);
                let mut vectors = Vec::with_capacity(want);
                let mut worst: f64 = 0.0;
                for &j in chosen {
                    let s = eig.eigenvectors.column(j);
                    let mut v = vec![0.0; n];
                    for (k, bk) in basis.iter().enumerate() {
                        let c = s[k];
                        v.iter_mut().zip(bk).for_each(|(vi, bi)| *vi += c * bi);
                    }
                    normalize_sign(&mut v);
                    let av = a.mul_vec(&v);
                    let lambda = dot(&av, &v);
                    let resid = av.iter().zip(&v).map(|(x, y)| (x - lambda * y).powi(2)).sum::<f64>().sqrt();
                    worst = worst.max(resid);
                    values.push(lambda);
                    vectors.push(v);
                }
                if worst <= tol {
                    return Ok((values, vectors));
                }
                if m == n {
                    return Err(Error::Eigen(format!("full Krylov basis reached with residual {worst:e} > {tol:e}")));
                }
            }
            next_check = (next_check * 2).min(n);
        }
        if m == n {
            return Err(Error::Eigen("Krylov basis exhausted".into()));
        }

        if breakdown {
            beta.push(0.0);
            q = random_unit(n, &mut rng, &basis)
                .ok_or_else(|| Error::Eigen("could not extend Krylov basis after breakdown".into()))?;
        } else {
            beta.push(b);
            q = w.iter().map(|x| x / b).collect();
        }
    }
}
