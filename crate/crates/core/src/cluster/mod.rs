//! Signed community detection.

mod correlation;
mod spectral;

pub use correlation::{correlation_cluster, CorrelationConfig, PivotOrder, SignView};
pub use spectral::{signed_laplacian, spectral_cluster, spectral_embed, SpectralConfig};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SignedDiGraph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Assignment of every node to exactly one of `num_clusters` non-empty clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    nodes: Vec<NodeId>,
    assignment: Vec<usize>,
    num_clusters: usize,
}

impl Partition {
    /// `nodes` ascending and unique; `assignment` uses every index in `0..max+1`.
    pub fn new(nodes: Vec<NodeId>, assignment: Vec<usize>) -> Result<Self> {
        if nodes.len() != assignment.len() {
            return Err(Error::InvalidConfig("node and assignment lengths differ".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("partition nodes must be ascending and unique".into()));
        }
        let num_clusters = assignment.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; num_clusters];
        for &c in &assignment {
            seen[c] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidConfig("cluster indices must be contiguous".into()));
        }
        Ok(Self { nodes, assignment, num_clusters })
    }

    /// Relabels arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels(nodes: Vec<NodeId>, labels: &[usize]) -> Self {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let assignment = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self::new(nodes, assignment).expect("relabelled assignment is contiguous")
    }

    /// From `(node, label)` pairs in any order; distinct labels are mapped to
    /// `0..k` in ascending label order, so already-contiguous labels are kept.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (NodeId, usize)>) -> Result<Self> {
        let mut by_node: BTreeMap<NodeId, usize> = BTreeMap::new();
        for (node, label) in pairs {
            if by_node.insert(node, label).is_some() {
                return Err(Error::PartitionCoverage(format!("node {node} assigned twice")));
            }
        }
        let mut labels: Vec<usize> = by_node.values().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        let assignment = by_node.values().map(|l| labels.binary_search(l).expect("present")).collect();
        Self::new(by_node.into_keys().collect(), assignment)
    }

    pub fn single_cluster(nodes: &[NodeId]) -> Self {
        Self::new(nodes.to_vec(), vec![0; nodes.len()]).expect("valid")
    }

    pub fn singletons(nodes: &[NodeId]) -> Self {
        Self::new(nodes.to_vec(), (0..nodes.len()).collect()).expect("valid")
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, node: NodeId) -> Option<usize> {
        self.nodes.binary_search(&node).ok().map(|i| self.assignment[i])
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_clusters];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn members(&self, cluster: usize) -> Vec<NodeId> {
        self.nodes.iter().zip(&self.assignment).filter(|(_, &c)| c == cluster).map(|(&n, _)| n).collect()
    }

    /// Cluster of each dense graph node, checking the node sets agree.
    pub fn labels_for(&self, g: &SignedDiGraph) -> Result<Vec<usize>> {
        if self.nodes.as_slice() == g.nodes() {
            return Ok(self.assignment.clone());
        }
        if let Some(missing) = g.nodes().iter().find(|n| self.cluster_of(**n).is_none()) {
            return Err(Error::PartitionCoverage(format!(
                "node {missing} has no cluster ({} of {} graph nodes assigned)",
                g.nodes().iter().filter(|n| self.cluster_of(**n).is_some()).count(),
                g.node_count()
            )));
        }
        let extra = self.nodes.iter().find(|n| !g.contains(**n)).expect("sets differ");
        Err(Error::PartitionCoverage(format!("node {extra} is not in the graph")))
    }
}

/// Correlation-clustering objective over observed edges: the absolute weight
/// of negative edges inside clusters plus the weight of positive edges
/// between clusters.
pub fn disagreements(g: &SignedDiGraph, p: &Partition) -> Result<f64> {
    let labels = p.labels_for(g)?;
    let mut total = 0.0;
    for (k, e) in g.edges().iter().enumerate() {
        if e.predicted {
            continue;
        }
        let (s, d) = g.endpoints(k);
        let same = labels[s] == labels[d];
        if same && e.weight < 0.0 {
            total += -e.weight;
        } else if !same && e.weight > 0.0 {
            total += e.weight;
        }
    }
    Ok(total)
}
