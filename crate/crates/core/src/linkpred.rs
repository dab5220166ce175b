//! Fairness/goodness scores and edge-weight prediction.
//!
//! Goodness of `v` is the fairness-weighted mean rating it receives; fairness
//! of `u` is one minus the mean of `|W(u,v) * g(v)| / R` over the ratings it
//! gives. Both are found by synchronous fixed-point iteration from `f = g = 1`.
//! A predicted rating is `E(u,v) = f(u) * g(v)`.

use crate::error::{Error, Result};
use crate::graph::{NodeId, SignedDiGraph, SignedEdge};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FGConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    /// Range normalizer `R` in the fairness update (1 after rescaling to `[-1, 1]`).
    pub range: f64,
    /// Step length of the fairness relaxation, in `(0, 1]`. `1` is the plain
    /// Jacobi update, which oscillates on some graphs (a single `+1` edge).
    pub relaxation: f64,
}

impl Default for FGConfig {
    fn default() -> Self {
        Self { max_iterations: 100, tolerance: 1e-6, range: 1.0, relaxation: 0.5 }
    }
}

impl FGConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig("tolerance must be positive".into()));
        }
        if !(self.range > 0.0) {
            return Err(Error::InvalidConfig("range constant must be positive".into()));
        }
        if !(self.relaxation > 0.0 && self.relaxation <= 1.0) {
            return Err(Error::InvalidConfig("relaxation must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Per-node scores, indexed like the graph they were computed on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FGScores {
    nodes: Vec<NodeId>,
    pub fairness: Vec<f64>,
    pub goodness: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
    pub range: f64,
}

impl FGScores {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    fn position(&self, node: NodeId) -> Result<usize> {
        self.nodes.binary_search(&node).map_err(|_| Error::UnknownNode(node))
    }

    pub fn fairness_of(&self, node: NodeId) -> Result<f64> {
        Ok(self.fairness[self.position(node)?])
    }

    pub fn goodness_of(&self, node: NodeId) -> Result<f64> {
        Ok(self.goodness[self.position(node)?])
    }

    /// `E(u, v) = f(u) * g(v)`.
    pub fn predict_edge(&self, u: NodeId, v: NodeId) -> Result<f64> {
        if u == v {
            return Err(Error::InvalidEdge(format!("cannot predict a self-rating of {u}")));
        }
        Ok(self.fairness_of(u)? * self.goodness_of(v)?)
    }

    /// Rows `(node, fairness, goodness)` in node order.
    pub fn rows(&self) -> impl Iterator<Item = (NodeId, f64, f64)> + '_ {
        self.nodes.iter().zip(&self.fairness).zip(&self.goodness).map(|((&n, &f), &g)| (n, f, g))
    }

    /// Largest change produced by one more synchronous goodness-then-fairness update.
    pub fn residual(&self, g: &SignedDiGraph) -> f64 {
        let goodness = goodness_update(g, &self.fairness);
        let fairness = fairness_update(g, &goodness, self.range);
        max_abs_diff(&goodness, &self.goodness).max(max_abs_diff(&fairness, &self.fairness))
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Goodness from fairness. Nodes nobody rates get 0.
fn goodness_update(g: &SignedDiGraph, fairness: &[f64]) -> Vec<f64> {
    let edges = g.edges();
    (0..g.node_count())
        .map(|v| {
            let ins = g.in_edge_ids(v);
            if ins.is_empty() {
                return 0.0;
            }
            let sum: f64 = ins.iter().map(|&k| fairness[g.endpoints(k).0] * edges[k].weight).sum();
            (sum / ins.len() as f64).clamp(-1.0, 1.0)
        })
        .collect()
}

/// Fairness from goodness. Nodes that rate nobody keep 1.
fn fairness_update(g: &SignedDiGraph, goodness: &[f64], range: f64) -> Vec<f64> {
    let edges = g.edges();
    (0..g.node_count())
        .map(|u| {
            let outs = g.out_edge_ids(u);
            if outs.is_empty() {
                return 1.0;
            }
            let sum: f64 = outs.iter().map(|&k| (edges[k].weight * goodness[g.endpoints(k).1]).abs() / range).sum();
            (1.0 - sum / outs.len() as f64).clamp(0.0, 1.0)
        })
        .collect()
}

/// Iterates the fairness/goodness equations to a fixed point.
///
/// Each iteration recomputes all goodness values from the previous fairness,
/// then a fairness proposal from the new goodness; fairness moves a
/// `relaxation` fraction of the way to its proposal. Stops once neither the
/// goodness change nor the fairness proposal's distance exceeds `tolerance`.
/// The returned goodness is recomputed from the final fairness, so the two are
/// always mutually consistent.
pub fn fairness_goodness(g: &SignedDiGraph, cfg: &FGConfig) -> Result<FGScores> {
    cfg.validate()?;
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let n = g.node_count();
    let mut fairness = vec![1.0; n];
    let mut goodness = vec![1.0; n];
    let mut converged = false;
    let mut iterations_run = 0;

    while iterations_run < cfg.max_iterations {
        iterations_run += 1;
        let next_goodness = goodness_update(g, &fairness);
        let proposal = fairness_update(g, &next_goodness, cfg.range);
        let delta_g = max_abs_diff(&next_goodness, &goodness);
        let delta_f = max_abs_diff(&proposal, &fairness);
        for (f, p) in fairness.iter_mut().zip(&proposal) {
            *f = (*f + cfg.relaxation * (p - *f)).clamp(0.0, 1.0);
        }
        goodness = next_goodness;
        if delta_f < cfg.tolerance && delta_g < cfg.tolerance {
            converged = true;
            break;
        }
    }
    let goodness = goodness_update(g, &fairness);
    Ok(FGScores { nodes: g.nodes().to_vec(), fairness, goodness, iterations_run, converged, range: cfg.range })
}

/// Which unobserved pairs receive a predicted edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensifyMode {
    /// Unlinked pairs within undirected distance 2.
    MissingOnly,
    /// Every unlinked pair, refused when `N * (N - 1)` exceeds `budget`.
    AllPairsCapped { budget: u64 },
}

pub const DEFAULT_PAIR_BUDGET: u64 = 4_000_000;

/// Adds predicted edges for node pairs with no observed edge in either direction.
///
/// Both directions of such a pair are predicted separately. Predictions that
/// come out exactly 0 carry no signal and are not added. Added edges have
/// `predicted = true` and timestamp 0.
pub fn densify(g: &SignedDiGraph, scores: &FGScores, mode: DensifyMode) -> Result<SignedDiGraph> {
    if scores.nodes() != g.nodes() {
        return Err(Error::InvalidConfig("scores were computed on a different graph".into()));
    }
    let n = g.node_count();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    match mode {
        DensifyMode::MissingOnly => {
            let nbrs = g.undirected_neighbors();
            let mut stamp = vec![usize::MAX; n];
            for u in 0..n {
                stamp[u] = u;
                let mut reach: Vec<usize> = Vec::new();
                for &w in &nbrs[u] {
                    stamp[w] = u;
                }
                for &w in &nbrs[u] {
                    for &x in &nbrs[w] {
                        if x > u && stamp[x] != u {
                            stamp[x] = u;
                            reach.push(x);
                        }
                    }
                }
                reach.sort_unstable();
                pairs.extend(reach.into_iter().map(|v| (u, v)));
            }
        }
        DensifyMode::AllPairsCapped { budget } => {
            let needed = n as u128 * n.saturating_sub(1) as u128;
            if needed > budget as u128 {
                return Err(Error::DensifyBudget { nodes: n, pairs: needed, budget });
            }
            for u in 0..n {
                for v in u + 1..n {
                    if !g.has_edge_between(u, v) {
                        pairs.push((u, v));
                    }
                }
            }
        }
    }

    let nodes = g.nodes();
    let mut added = Vec::with_capacity(pairs.len() * 2);
    for (u, v) in pairs {
        for (a, b) in [(u, v), (v, u)] {
            let w = scores.fairness[a] * scores.goodness[b];
            if w != 0.0 {
                added.push(SignedEdge { src: nodes[a], dst: nodes[b], weight: w, timestamp: 0, predicted: true });
            }
        }
    }
    Ok(g.with_added_edges(added))
}
