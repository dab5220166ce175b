//! CSV projections of the JSON reports, and readers for each of them.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;
use trustnet_core::resiliency::{LinkPredictionEval, YearwiseSeries};
use trustnet_core::{FGScores, NodeId, Partition, ResiliencyReport, SignedEdge, TrustReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub node: NodeId,
    pub fairness: f64,
    pub goodness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: f64,
    pub timestamp: i64,
    pub predicted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub node: NodeId,
    pub cluster: usize,
}

/// Columns follow the per-cluster trust tables: cluster, size, edge counts, trust.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustRow {
    pub cluster: usize,
    pub nodes: usize,
    pub inside_positive_edges: usize,
    pub outside_negative_edges: usize,
    pub inside_positive_weight: f64,
    pub outside_negative_weight: f64,
    pub trust: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResiliencyRow {
    pub method: String,
    pub trust_original: f64,
    pub trust_disrupted: f64,
    pub r_minus: f64,
    pub mae_baseline: f64,
    pub removed_cluster_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkPredictionRow {
    pub train_fraction: f64,
    pub train_edges: usize,
    pub test_edges: usize,
    pub num_predicted: usize,
    pub unpredictable: usize,
    pub mae: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalRow {
    pub variant: String,
    pub clusters: usize,
    pub total_trust: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearRow {
    pub year: i32,
    pub r_minus: f64,
    pub mae: f64,
}

pub fn write<T: Serialize>(path: &Path, rows: &[T]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read<T: DeserializeOwned>(path: &Path) -> anyhow::Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<Result<Vec<T>, _>>()?;
    Ok(rows)
}

pub fn score_rows(s: &FGScores) -> Vec<ScoreRow> {
    s.rows().map(|(node, fairness, goodness)| ScoreRow { node, fairness, goodness }).collect()
}

pub fn edge_rows(edges: &[SignedEdge]) -> Vec<EdgeRow> {
    edges
        .iter()
        .map(|e| EdgeRow { src: e.src, dst: e.dst, weight: e.weight, timestamp: e.timestamp, predicted: e.predicted })
        .collect()
}

pub fn edges_from_rows(rows: &[EdgeRow]) -> Vec<SignedEdge> {
    rows.iter()
        .map(|r| SignedEdge { src: r.src, dst: r.dst, weight: r.weight, timestamp: r.timestamp, predicted: r.predicted })
        .collect()
}

pub fn partition_rows(p: &Partition) -> Vec<PartitionRow> {
    p.nodes().iter().zip(p.assignment()).map(|(&node, &cluster)| PartitionRow { node, cluster }).collect()
}

pub fn trust_rows(r: &TrustReport) -> Vec<TrustRow> {
    r.rows
        .iter()
        .map(|r| TrustRow {
            cluster: r.cluster_index,
            nodes: r.num_nodes,
            inside_positive_edges: r.inside_positive_count,
            outside_negative_edges: r.outside_negative_count,
            inside_positive_weight: r.inside_positive_weight_sum,
            outside_negative_weight: r.outside_negative_abs_weight_sum,
            trust: r.trust,
        })
        .collect()
}

pub fn resiliency_row(r: &ResiliencyReport) -> ResiliencyRow {
    ResiliencyRow {
        method: r.method.clone(),
        trust_original: r.trust_original,
        trust_disrupted: r.trust_disrupted,
        r_minus: r.r_minus,
        mae_baseline: r.mae_baseline,
        removed_cluster_nodes: r.removed_cluster.num_nodes,
    }
}

pub fn link_prediction_row(e: &LinkPredictionEval) -> LinkPredictionRow {
    LinkPredictionRow {
        train_fraction: e.train_fraction,
        train_edges: e.train_edges,
        test_edges: e.test_edges,
        num_predicted: e.num_predicted,
        unpredictable: e.unpredictable,
        mae: e.mae,
    }
}

pub fn year_rows(s: &YearwiseSeries) -> Vec<YearRow> {
    s.entries.iter().map(|e| YearRow { year: e.year, r_minus: e.r_minus, mae: e.mae }).collect()
}
