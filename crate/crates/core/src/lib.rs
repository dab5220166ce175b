//! Trustworthiness of communities in signed, weighted, directed trust
//! networks, and a resiliency score obtained by removing the most
//! trustworthy community and measuring the drop in total trust.
//!
//! The pipeline is: ingest ([`graph`]) → fairness/goodness link prediction
//! and densification ([`linkpred`]) → signed spectral or correlation
//! clustering ([`cluster`]) → per-community trust ([`trust`]) → disruption and
//! re-analysis ([`resiliency`]).

pub mod cluster;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod linkpred;
pub mod resiliency;
pub mod trust;

pub use cluster::{correlation_cluster, disagreements, spectral_cluster, CorrelationConfig, Partition, SpectralConfig};
pub use error::{Error, Result};
pub use graph::{NodeId, Sample, SignedDiGraph, SignedEdge};
pub use linkpred::{densify, fairness_goodness, DensifyMode, FGConfig, FGScores};
pub use resiliency::{run_pipeline, ClusterMethod, PipelineConfig, ResiliencyReport};
pub use trust::{cluster_trust, trust_report, ClusterTrustRow, TrustReport};
