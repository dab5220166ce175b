use super::Partition;
use crate::error::{Error, Result};
use crate::graph::SignedDiGraph;
use crate::linalg::{kmeans, smallest_eigenpairs, EigenPairs, KMeansConfig, SymmetricMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub k: usize,
    pub embedding_dim: usize,
    pub kmeans_seed: u64,
    pub kmeans_restarts: usize,
    pub eig_tolerance: f64,
}

impl SpectralConfig {
    /// `k` clusters over a `k`-dimensional embedding, 10 k-means restarts.
    pub fn new(k: usize, seed: u64) -> Self {
        Self { k, embedding_dim: k, kmeans_seed: seed, kmeans_restarts: 10, eig_tolerance: 1e-8 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidConfig(format!("spectral clustering needs k >= 2, got {}", self.k)));
        }
        if self.embedding_dim == 0 {
            return Err(Error::InvalidConfig("embedding dimension must be at least 1".into()));
        }
        if self.kmeans_restarts == 0 {
            return Err(Error::InvalidConfig("k-means restarts must be at least 1".into()));
        }
        if !(self.eig_tolerance > 0.0) {
            return Err(Error::InvalidConfig("eigen tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// `D̄ - A` over the symmetrized adjacency, with `D̄_ii = Σ_j |A_ij|`.
pub fn signed_laplacian(g: &SignedDiGraph) -> SymmetricMatrix {
    let a = g.symmetrize();
    let n = a.n();
    let mut upper = Vec::with_capacity(a.nnz() / 2 + n);
    for i in 0..n {
        let mut degree = 0.0;
        for (j, w) in a.row(i) {
            degree += w.abs();
            if i < j {
                upper.push((i, j, -w));
            }
        }
        upper.push((i, i, degree));
    }
    SymmetricMatrix::from_upper(n, upper)
}

/// Eigenvectors of the `dim` smallest eigenvalues, one unit-length column each.
/// Row `i` of `vectors` is the embedding of dense node `i`.
pub fn spectral_embed(laplacian: &SymmetricMatrix, dim: usize, tol: f64) -> Result<EigenPairs> {
    smallest_eigenpairs(laplacian, dim, tol)
}

/// k-means over the signed spectral embedding.
pub fn spectral_cluster(g: &SignedDiGraph, cfg: &SpectralConfig) -> Result<Partition> {
    cfg.validate()?;
    let n = g.node_count();
    if n < cfg.k {
        return Err(Error::TooFewNodes { need: cfg.k, have: n });
    }
    let embedding = spectral_embed(&signed_laplacian(g), cfg.embedding_dim, cfg.eig_tolerance)?;
    let points: Vec<Vec<f64>> = embedding.vectors.row_iter().map(|r| r.iter().copied().collect()).collect();
    let km_cfg = KMeansConfig { restarts: cfg.kmeans_restarts, ..KMeansConfig::new(cfg.k, cfg.kmeans_seed) };
    let result = kmeans(&points, &km_cfg)?;
    Ok(Partition::from_labels(g.nodes().to_vec(), &result.labels))
}
