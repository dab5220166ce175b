//! Disruption pipeline, resiliency scores and evaluation experiments.
//!
//! A run scores the communities of a network, deletes the most trustworthy
//! one, re-predicts and re-clusters the survivors, and reports the drop in
//! total trust (`r_minus`). The link-prediction MAE between the two phases is
//! reported alongside as a baseline resiliency signal.

use crate::cluster::{correlation_cluster, spectral_cluster, CorrelationConfig, Partition, SpectralConfig};
use crate::error::{Error, Result};
use crate::graph::{NodeId, Sample, SignedDiGraph};
use crate::linkpred::{densify, fairness_goodness, DensifyMode, FGConfig, FGScores};
use crate::trust::{trust_report, TrustReport};
use chrono::{DateTime, Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// One clustering algorithm with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum ClusterMethod {
    Spectral(SpectralConfig),
    Correlation(CorrelationConfig),
}

impl ClusterMethod {
    pub fn cluster(&self, g: &SignedDiGraph) -> Result<Partition> {
        match self {
            ClusterMethod::Spectral(cfg) => spectral_cluster(g, cfg),
            ClusterMethod::Correlation(cfg) => correlation_cluster(g, cfg),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClusterMethod::Spectral(_) => "spectral",
            ClusterMethod::Correlation(_) => "correlation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Clustering before the disruption.
    pub original: ClusterMethod,
    /// Clustering after the disruption; must use the same algorithm.
    pub disrupted: ClusterMethod,
    pub fg: FGConfig,
    /// `None` clusters the observed graph as is.
    pub densify: Option<DensifyMode>,
    pub sample: Option<Sample>,
}

impl PipelineConfig {
    /// Same method parameters in both phases, densification of missing pairs, no sampling.
    pub fn uniform(method: ClusterMethod) -> Self {
        Self { original: method, disrupted: method, fg: FGConfig::default(), densify: Some(DensifyMode::MissingOnly), sample: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.original.name() != self.disrupted.name() {
            return Err(Error::InvalidConfig("both phases must use the same clustering method".into()));
        }
        self.fg.validate()
    }
}

/// Link prediction, clustering and trust scoring of one graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseAnalysis {
    pub scores: FGScores,
    pub partition: Partition,
    pub report: TrustReport,
    /// Edges of the graph that was clustered (observed plus predicted).
    pub clustered_edges: usize,
}

/// Scores `g` (observed edges only) after clustering its densified version.
pub fn analyze(g: &SignedDiGraph, method: &ClusterMethod, fg: &FGConfig, mode: Option<DensifyMode>) -> Result<PhaseAnalysis> {
    let scores = fairness_goodness(g, fg)?;
    let clustered = match mode {
        Some(mode) => densify(g, &scores, mode)?,
        None => g.clone(),
    };
    let partition = method.cluster(&clustered)?;
    let report = trust_report(g, &partition)?;
    Ok(PhaseAnalysis { scores, partition, report, clustered_edges: clustered.edge_count() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovedCluster {
    pub index: usize,
    pub num_nodes: usize,
    pub trust: f64,
    pub nodes: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResiliencyReport {
    pub method: String,
    pub trust_original: f64,
    pub trust_disrupted: f64,
    /// `trust_original - trust_disrupted`.
    pub r_minus: f64,
    pub removed_cluster: RemovedCluster,
    pub mae_baseline: f64,
    pub nodes_original: usize,
    pub edges_original: usize,
    pub nodes_disrupted: usize,
    pub edges_disrupted: usize,
    pub fg_converged_original: bool,
    pub fg_converged_disrupted: bool,
    pub original: TrustReport,
    pub disrupted: TrustReport,
}

/// Full disruption experiment on `g` (after applying `cfg.sample`).
pub fn run_pipeline(g: &SignedDiGraph, cfg: &PipelineConfig) -> Result<ResiliencyReport> {
    cfg.validate()?;
    let g = match &cfg.sample {
        Some(spec) => g.sample(spec),
        None => g.observed_only(),
    };
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let before = analyze(&g, &cfg.original, &cfg.fg, cfg.densify)?;
    let best = before.report.best_community()?;
    let victims: Vec<NodeId> = before.partition.members(best);
    let survivors = g.remove_nodes(&victims.iter().copied().collect::<BTreeSet<_>>())?;
    if survivors.is_empty() {
        return Err(Error::DisruptionEmptiedNetwork);
    }
    let after = analyze(&survivors, &cfg.disrupted, &cfg.fg, cfg.densify)?;
    let mae_baseline = mae_between(&before.scores, &after.scores, &survivors)?;

    let trust_original = before.report.total_trust;
    let trust_disrupted = after.report.total_trust;
    Ok(ResiliencyReport {
        method: cfg.original.name().to_string(),
        trust_original,
        trust_disrupted,
        r_minus: trust_original - trust_disrupted,
        removed_cluster: RemovedCluster {
            index: best,
            num_nodes: victims.len(),
            trust: before.report.row(best).map_or(0.0, |r| r.trust),
            nodes: victims,
        },
        mae_baseline,
        nodes_original: g.node_count(),
        edges_original: g.edge_count(),
        nodes_disrupted: survivors.node_count(),
        edges_disrupted: survivors.edge_count(),
        fg_converged_original: before.scores.converged,
        fg_converged_disrupted: after.scores.converged,
        original: before.report,
        disrupted: after.report,
    })
}

/// Mean `|E_before(u,v) - E_after(u,v)|` over the observed edges of `after`.
fn mae_between(before: &FGScores, after: &FGScores, g_after: &SignedDiGraph) -> Result<f64> {
    let mut total = 0.0;
    let mut count = 0usize;
    for e in g_after.edges().iter().filter(|e| !e.predicted) {
        total += (before.predict_edge(e.src, e.dst)? - after.predict_edge(e.src, e.dst)?).abs();
        count += 1;
    }
    if count == 0 {
        return Err(Error::NoSurvivingEdges);
    }
    Ok(total / count as f64)
}

/// Baseline resiliency: how much the link predictions for the surviving
/// edges move when the predictor is refit after a disruption.
pub fn mae_baseline(g_before: &SignedDiGraph, g_after: &SignedDiGraph, fg: &FGConfig) -> Result<f64> {
    if let Some(stray) = g_after.nodes().iter().find(|n| !g_before.contains(**n)) {
        return Err(Error::UnknownNode(*stray));
    }
    if g_after.is_empty() {
        return Err(Error::NoSurvivingEdges);
    }
    let before = fairness_goodness(g_before, fg)?;
    let after = fairness_goodness(g_after, fg)?;
    mae_between(&before, &after, g_after)
}

/// Temporal hold-out evaluation of the fairness/goodness predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkPredictionEval {
    pub train_fraction: f64,
    pub train_edges: usize,
    pub test_edges: usize,
    /// Test edges with both endpoints seen in training.
    pub num_predicted: usize,
    /// Test edges with an endpoint absent from training; excluded from the MAE.
    pub unpredictable: usize,
    pub mae: f64,
    pub fg_converged: bool,
}

/// Fits on the earliest `floor(train_fraction * E)` edges and scores the rest.
pub fn eval_link_prediction(g: &SignedDiGraph, train_fraction: f64, fg: &FGConfig) -> Result<LinkPredictionEval> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!("train fraction must lie in (0, 1), got {train_fraction}")));
    }
    let ordered: Vec<_> = g.edges_by_time().into_iter().filter(|e| !e.predicted).copied().collect();
    let split = (train_fraction * ordered.len() as f64).floor() as usize;
    let (train, test) = ordered.split_at(split);
    if train.is_empty() {
        return Err(Error::EmptySplit("training prefix has no edges".into()));
    }
    let train_graph = SignedDiGraph::new([], train.iter().copied())?;
    let scores = fairness_goodness(&train_graph, fg)?;

    let mut total = 0.0;
    let mut num_predicted = 0usize;
    let mut unpredictable = 0usize;
    for e in test {
        if train_graph.contains(e.src) && train_graph.contains(e.dst) {
            total += (scores.predict_edge(e.src, e.dst)? - e.weight).abs();
            num_predicted += 1;
        } else {
            unpredictable += 1;
        }
    }
    if num_predicted == 0 {
        return Err(Error::EmptySplit("no test edge has both endpoints in the training prefix".into()));
    }
    Ok(LinkPredictionEval {
        train_fraction,
        train_edges: train.len(),
        test_edges: test.len(),
        num_predicted,
        unpredictable,
        mae: total / num_predicted as f64,
        fg_converged: scores.converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub k: usize,
    pub trust_positive_only: f64,
    pub trust_signed: f64,
    /// Nodes with at least one positive edge.
    pub positive_nodes: usize,
    /// Nodes with only negative edges, placed in singleton clusters for the positive-only run.
    pub negative_only_nodes: usize,
    pub positive_only: TrustReport,
    pub signed: TrustReport,
}

/// Spectral clustering of the positive-edge subgraph versus the signed graph,
/// both scored on the full observed graph.
pub fn eval_positive_only_ablation(g: &SignedDiGraph, cfg: &SpectralConfig) -> Result<AblationReport> {
    let g = g.observed_only();
    let positive = g.positive_subgraph();
    if positive.node_count() < cfg.k {
        return Err(Error::TooFewNodes { need: cfg.k, have: positive.node_count() });
    }
    let pos_partition = spectral_cluster(&positive, cfg)?;
    let mut next = pos_partition.num_clusters();
    let pairs = g.nodes().iter().map(|&n| {
        let label = pos_partition.cluster_of(n).unwrap_or_else(|| {
            next += 1;
            next - 1
        });
        (n, label)
    });
    let pos_partition = Partition::from_pairs(pairs.collect::<Vec<_>>())?;
    let signed_partition = spectral_cluster(&g, cfg)?;

    let positive_only = trust_report(&g, &pos_partition)?;
    let signed = trust_report(&g, &signed_partition)?;
    Ok(AblationReport {
        k: cfg.k,
        trust_positive_only: positive_only.total_trust,
        trust_signed: signed.total_trust,
        positive_nodes: positive.node_count(),
        negative_only_nodes: g.node_count() - positive.node_count(),
        positive_only,
        signed,
    })
}

/// Total trust under both clustering methods with shared trust accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodComparison {
    pub trust_spectral: f64,
    pub trust_correlation: f64,
    pub clusters_spectral: usize,
    pub clusters_correlation: usize,
    pub correlation_at_least_spectral: bool,
    /// Present when spectral clustering scored higher.
    pub flag: Option<String>,
}

pub fn compare_methods(
    g: &SignedDiGraph,
    spectral: &SpectralConfig,
    correlation: &CorrelationConfig,
    fg: &FGConfig,
    mode: Option<DensifyMode>,
) -> Result<MethodComparison> {
    let g = g.observed_only();
    let s = analyze(&g, &ClusterMethod::Spectral(*spectral), fg, mode)?;
    let c = analyze(&g, &ClusterMethod::Correlation(*correlation), fg, mode)?;
    let ok = c.report.total_trust >= s.report.total_trust;
    Ok(MethodComparison {
        trust_spectral: s.report.total_trust,
        trust_correlation: c.report.total_trust,
        clusters_spectral: s.partition.num_clusters(),
        clusters_correlation: c.partition.num_clusters(),
        correlation_at_least_spectral: ok,
        flag: (!ok).then(|| {
            format!(
                "correlation clustering total trust {} is below spectral clustering total trust {}",
                c.report.total_trust, s.report.total_trust
            )
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YearwiseMode {
    /// Network as of the end of each year.
    Cumulative,
    /// Only the edges created during each year.
    Slice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearEntry {
    pub year: i32,
    pub r_minus: f64,
    pub mae: f64,
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedYear {
    pub year: i32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearwiseSeries {
    pub mode: YearwiseMode,
    pub entries: Vec<YearEntry>,
    pub skipped: Vec<SkippedYear>,
}

impl YearwiseSeries {
    /// Rank correlation between the `r_minus` and `mae` columns.
    pub fn spearman(&self) -> Option<f64> {
        let r: Vec<f64> = self.entries.iter().map(|e| e.r_minus).collect();
        let m: Vec<f64> = self.entries.iter().map(|e| e.mae).collect();
        spearman(&r, &m)
    }
}

/// UTC calendar year of an epoch-seconds timestamp.
pub fn utc_year(timestamp: i64) -> i32 {
    DateTime::from_timestamp(timestamp, 0).map_or(1970, |d| d.year())
}

fn year_start(year: i32) -> i64 {
    NaiveDate::from_ymd_opt(year, 1, 1).expect("valid year").and_hms_opt(0, 0, 0).expect("midnight").and_utc().timestamp()
}

/// Runs the pipeline once per calendar year that has edges.
///
/// Years whose pipeline fails (too few nodes for the configured `k`, a
/// disruption that empties the network, ...) are recorded in `skipped`.
pub fn yearwise(g: &SignedDiGraph, cfg: &PipelineConfig, mode: YearwiseMode) -> Result<YearwiseSeries> {
    cfg.validate()?;
    let g = match &cfg.sample {
        Some(spec) => g.sample(spec),
        None => g.observed_only(),
    };
    let per_year = PipelineConfig { sample: None, ..cfg.clone() };
    let years: BTreeSet<i32> = g.edges().iter().map(|e| utc_year(e.timestamp)).collect();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for year in years {
        let end = year_start(year + 1) - 1;
        let sub = match mode {
            YearwiseMode::Cumulative => g.subgraph_by_time(end),
            YearwiseMode::Slice => g.subgraph_by_time_range(year_start(year), end),
        };
        match run_pipeline(&sub, &per_year) {
            Ok(report) => entries.push(YearEntry {
                year,
                r_minus: report.r_minus,
                mae: report.mae_baseline,
                nodes: sub.node_count(),
                edges: sub.edge_count(),
            }),
            Err(err) => {
                log::warn!("skipping {year}: {err}");
                skipped.push(SkippedYear { year, reason: err.to_string() });
            }
        }
    }
    Ok(YearwiseSeries { mode, entries, skipped })
}

/// Fractional ranks (ties share their mean rank), 1-based.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `None` for fewer than two points or a constant series.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}
