//! Cautious correlation clustering on the sign pattern of a trust graph.
//!
//! Each round picks a pivot `v`, starts from `{v} ∪ N⁺(v)`, drops members
//! that are not `3δ`-good with respect to the candidate set, then adds every
//! remaining node that is `7δ`-good with respect to it. Positive
//! neighborhoods include the node itself. Non-edges are neither positive nor
//! negative.

use super::Partition;
use crate::error::{Error, Result};
use crate::graph::{NodeId, SignedDiGraph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PivotOrder {
    /// Highest positive degree first, ties by node id.
    MaxPositiveDegree,
    NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationConfig {
    pub delta: f64,
    pub pivot_order: PivotOrder,
}

impl CorrelationConfig {
    pub fn new(delta: f64) -> Self {
        Self { delta, pivot_order: PivotOrder::MaxPositiveDegree }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidConfig(format!("delta must be positive, got {}", self.delta)));
        }
        if self.delta >= 1.0 / 14.0 {
            log::warn!("delta {} >= 1/14: the 7-delta addition threshold exceeds 1/2", self.delta);
        }
        Ok(())
    }
}

/// Positive-sign neighborhoods of the symmetrized graph.
#[derive(Debug, Clone)]
pub struct SignView {
    nodes: Vec<NodeId>,
    /// Dense positive neighbors, ascending, excluding the node itself.
    positive: Vec<Vec<usize>>,
}

fn is_good(inside: usize, outside: usize, size: usize, threshold: f64) -> bool {
    let size = size as f64;
    inside as f64 >= (1.0 - threshold) * size && outside as f64 <= threshold * size
}

impl SignView {
    pub fn new(g: &SignedDiGraph) -> Self {
        let a = g.symmetrize();
        let positive = (0..a.n()).map(|i| a.row(i).filter(|&(_, w)| w > 0.0).map(|(j, _)| j).collect()).collect();
        Self { nodes: g.nodes().to_vec(), positive }
    }

    pub fn positive_neighbors(&self, i: usize) -> &[usize] {
        &self.positive[i]
    }

    /// Whether `u` has at least `(1-δ)|C|` positive neighbors in `cluster` and
    /// at most `δ|C|` outside it, counting `u` as its own positive neighbor.
    pub fn is_delta_good(&self, u: NodeId, cluster: &BTreeSet<NodeId>, delta: f64) -> Result<bool> {
        let i = self.nodes.binary_search(&u).map_err(|_| Error::UnknownNode(u))?;
        let member = |j: usize| cluster.contains(&self.nodes[j]);
        let inside = self.positive[i].iter().filter(|&&j| member(j)).count() + usize::from(member(i));
        let outside = self.positive[i].len() + 1 - inside;
        Ok(is_good(inside, outside, cluster.len(), delta))
    }

    fn pivot_order(&self, order: PivotOrder) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.nodes.len()).collect();
        if order == PivotOrder::MaxPositiveDegree {
            idx.sort_by_key(|&i| (std::cmp::Reverse(self.positive[i].len()), i));
        }
        idx
    }
}

struct Cautious<'a> {
    view: &'a SignView,
    delta: f64,
    alive: Vec<bool>,
    in_set: Vec<bool>,
    /// `|N⁺(x) ∩ A|`, maintained for members of the candidate set.
    inside: Vec<usize>,
}

impl Cautious<'_> {
    /// `|N⁺(x)|` restricted to unclustered nodes, self included.
    fn alive_degree(&self, x: usize) -> usize {
        1 + self.view.positive[x].iter().filter(|&&y| self.alive[y]).count()
    }

    /// Runs removal and addition from pivot `v`; returns the cluster (possibly empty).
    fn grow(&mut self, v: usize) -> Vec<usize> {
        let three = 3.0 * self.delta;
        let seven = 7.0 * self.delta;
        let mut members: Vec<usize> = std::iter::once(v)
            .chain(self.view.positive[v].iter().copied().filter(|&u| self.alive[u]))
            .collect();
        members.sort_unstable();
        for &x in &members {
            self.in_set[x] = true;
        }
        for &x in &members {
            self.inside[x] = 1 + self.view.positive[x].iter().filter(|&&y| self.in_set[y]).count();
        }
        let degrees: Vec<usize> = members.iter().map(|&x| self.alive_degree(x)).collect();
        let mut present = vec![true; members.len()];
        let mut size = members.len();

        // Vertex removal: drop the first 3δ-bad member until none is left.
        loop {
            let bad = (0..members.len()).find(|&k| {
                present[k] && {
                    let x = members[k];
                    !is_good(self.inside[x], degrees[k] - self.inside[x], size, three)
                }
            });
            let Some(k) = bad else { break };
            let x = members[k];
            present[k] = false;
            self.in_set[x] = false;
            size -= 1;
            for &y in &self.view.positive[x] {
                if self.in_set[y] {
                    self.inside[y] -= 1;
                }
            }
        }
        let mut cluster: Vec<usize> = members.iter().zip(&present).filter(|(_, &p)| p).map(|(&x, _)| x).collect();

        // Vertex addition: every unclustered node that is 7δ-good w.r.t. the set.
        if !cluster.is_empty() {
            let mut candidates: Vec<usize> = cluster
                .iter()
                .flat_map(|&x| self.view.positive[x].iter().copied())
                .filter(|&y| self.alive[y] && !self.in_set[y])
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
            let added: Vec<usize> = candidates
                .into_iter()
                .filter(|&y| {
                    let inside = self.view.positive[y].iter().filter(|&&z| self.in_set[z]).count();
                    is_good(inside, self.alive_degree(y) - inside, size, seven)
                })
                .collect();
            cluster.extend(added);
            cluster.sort_unstable();
        }
        for &x in &members {
            self.in_set[x] = false;
        }
        cluster
    }
}

/// Cautious correlation clustering. Deterministic for a given configuration.
///
/// Rounds sweep the pivot order, emitting a cluster whenever a pivot yields a
/// non-empty set. Sweeping stops when a whole round emits nothing; the nodes
/// still unclustered then become singletons.
pub fn correlation_cluster(g: &SignedDiGraph, cfg: &CorrelationConfig) -> Result<Partition> {
    cfg.validate()?;
    let view = SignView::new(g);
    let n = g.node_count();
    let order = view.pivot_order(cfg.pivot_order);
    let mut state = Cautious { view: &view, delta: cfg.delta, alive: vec![true; n], in_set: vec![false; n], inside: vec![0; n] };
    let mut labels = vec![usize::MAX; n];
    let mut next_label = 0;

    loop {
        let mut emitted = false;
        for &v in &order {
            if !state.alive[v] {
                continue;
            }
            let cluster = state.grow(v);
            if cluster.is_empty() {
                continue;
            }
            for &x in &cluster {
                state.alive[x] = false;
                labels[x] = next_label;
            }
            next_label += 1;
            emitted = true;
        }
        if !emitted {
            break;
        }
    }
    for label in labels.iter_mut().filter(|l| **l == usize::MAX) {
        *label = next_label;
        next_label += 1;
    }
    Partition::new(g.nodes().to_vec(), labels)
}
