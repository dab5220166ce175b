//! Community trustworthiness.
//!
//! For a cluster `C` in a network of `N` nodes:
//!
//! ```text
//! trust(C) = (Σ w over positive edges inside C + Σ |w| over negative edges crossing C)
//!            / max(|C|, N - |C|)
//! ```
//!
//! Only observed edges count. Direction is ignored when classifying an edge
//! as inside or crossing, and a crossing negative edge counts toward both of
//! its clusters.

use crate::cluster::Partition;
use crate::error::{Error, Result};
use crate::graph::SignedDiGraph;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterTrustRow {
    pub cluster_index: usize,
    pub num_nodes: usize,
    pub inside_positive_count: usize,
    pub outside_negative_count: usize,
    pub inside_positive_weight_sum: f64,
    pub outside_negative_abs_weight_sum: f64,
    pub trust: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustReport {
    /// Sorted by trust descending, then cluster index ascending.
    pub rows: Vec<ClusterTrustRow>,
    pub total_nodes: usize,
    pub total_trust: f64,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    inside_count: usize,
    inside_sum: f64,
    outside_count: usize,
    outside_sum: f64,
}

fn tally(g: &SignedDiGraph, labels: &[usize], num_clusters: usize) -> Vec<Tally> {
    let mut t = vec![Tally::default(); num_clusters];
    for (k, e) in g.edges().iter().enumerate() {
        if e.predicted {
            continue;
        }
        let (s, d) = g.endpoints(k);
        let (cs, cd) = (labels[s], labels[d]);
        if cs == cd && e.weight > 0.0 {
            t[cs].inside_count += 1;
            t[cs].inside_sum += e.weight;
        } else if cs != cd && e.weight < 0.0 {
            for c in [cs, cd] {
                t[c].outside_count += 1;
                t[c].outside_sum += -e.weight;
            }
        }
    }
    t
}

fn row(index: usize, size: usize, total: usize, t: Tally) -> ClusterTrustRow {
    let denominator = size.max(total - size) as f64;
    ClusterTrustRow {
        cluster_index: index,
        num_nodes: size,
        inside_positive_count: t.inside_count,
        outside_negative_count: t.outside_count,
        inside_positive_weight_sum: t.inside_sum,
        outside_negative_abs_weight_sum: t.outside_sum,
        trust: (t.inside_sum + t.outside_sum) / denominator,
    }
}

/// Trustworthiness of one cluster.
pub fn cluster_trust(g: &SignedDiGraph, p: &Partition, cluster: usize) -> Result<ClusterTrustRow> {
    let labels = p.labels_for(g)?;
    if cluster >= p.num_clusters() {
        return Err(Error::UnknownCluster(cluster));
    }
    let t = tally(g, &labels, p.num_clusters());
    Ok(row(cluster, p.sizes()[cluster], g.node_count(), t[cluster]))
}

/// One row per cluster; the network total is the sum of the rows in report order.
pub fn trust_report(g: &SignedDiGraph, p: &Partition) -> Result<TrustReport> {
    let labels = p.labels_for(g)?;
    let sizes = p.sizes();
    let t = tally(g, &labels, p.num_clusters());
    let mut rows: Vec<ClusterTrustRow> =
        (0..p.num_clusters()).map(|c| row(c, sizes[c], g.node_count(), t[c])).collect();
    rows.sort_by(|a, b| b.trust.total_cmp(&a.trust).then(a.cluster_index.cmp(&b.cluster_index)));
    let total_trust = rows.iter().map(|r| r.trust).sum();
    Ok(TrustReport { rows, total_nodes: g.node_count(), total_trust })
}

impl TrustReport {
    /// Index of the most trustworthy cluster, ties to the smaller index.
    pub fn best_community(&self) -> Result<usize> {
        self.rows
            .iter()
            .min_by(|a, b| b.trust.total_cmp(&a.trust).then(a.cluster_index.cmp(&b.cluster_index)))
            .map(|r| r.cluster_index)
            .ok_or(Error::EmptyReport)
    }

    pub fn row(&self, cluster: usize) -> Option<&ClusterTrustRow> {
        self.rows.iter().find(|r| r.cluster_index == cluster)
    }
}
