//! Numerical building blocks: sparse symmetric storage, an eigensolver, k-means.

pub mod eigen;
pub mod kmeans;
mod sparse;

pub use eigen::{smallest_eigenpairs, EigenPairs};
pub use kmeans::{kmeans, KMeansConfig, KMeansResult};
pub use sparse::SymmetricMatrix;
