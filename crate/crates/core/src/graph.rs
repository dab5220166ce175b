//! Signed, weighted, directed trust graph.
//!
//! Nodes keep the raw integer labels of the input data ([`NodeId`]). Internally
//! every graph also carries a dense index `0..N` assigned in ascending label
//! order, so traversal order (and therefore every floating-point reduction
//! downstream) is fixed by the node set alone.

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

/// Largest absolute rating accepted from the edge-list format.
pub const MAX_RATING: i64 = 10;

/// Default divisor mapping integer ratings onto `[-1, 1]`.
pub const DEFAULT_WEIGHT_DIVISOR: f64 = 10.0;

/// Raw node label from the input data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for NodeId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.trim().parse().map(NodeId)
    }
}

/// A rating of `dst` by `src`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedEdge {
    pub src: NodeId,
    pub dst: NodeId,
    /// Rescaled rating in `[-1, 1]`.
    pub weight: f64,
    /// Epoch seconds.
    pub timestamp: i64,
    /// Set on edges added by link-prediction densification.
    #[serde(default)]
    pub predicted: bool,
}

impl SignedEdge {
    pub fn observed(src: u64, dst: u64, weight: f64, timestamp: i64) -> Self {
        Self { src: NodeId(src), dst: NodeId(dst), weight, timestamp, predicted: false }
    }
}

/// Immutable signed digraph.
#[derive(Debug, Clone)]
pub struct SignedDiGraph {
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    /// Sorted by `(src, dst)`.
    edges: Vec<SignedEdge>,
    endpoints: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl PartialEq for SignedDiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

/// Counts reported after ingest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub positive_edges: usize,
    pub negative_edges: usize,
    pub positive_fraction: f64,
    pub predicted_edges: usize,
    pub min_timestamp: Option<i64>,
    pub max_timestamp: Option<i64>,
}

impl SignedDiGraph {
    /// Builds a graph from an explicit node set and edge list.
    ///
    /// Edge endpoints are added to the node set. Duplicate `(src, dst)` pairs
    /// keep the edge with the greatest timestamp (the later one on ties).
    pub fn new(nodes: impl IntoIterator<Item = NodeId>, edges: impl IntoIterator<Item = SignedEdge>) -> Result<Self> {
        let mut latest: HashMap<(NodeId, NodeId), SignedEdge> = HashMap::new();
        for e in edges {
            if e.src == e.dst {
                return Err(Error::SelfLoop { line: 0, node: e.src });
            }
            if !e.weight.is_finite() || !(-1.0..=1.0).contains(&e.weight) {
                return Err(Error::InvalidEdge(format!("{} -> {} has weight {} outside [-1, 1]", e.src, e.dst, e.weight)));
            }
            match latest.get(&(e.src, e.dst)) {
                Some(prev) if prev.timestamp > e.timestamp => {}
                _ => {
                    latest.insert((e.src, e.dst), e);
                }
            }
        }
        let mut edges: Vec<SignedEdge> = latest.into_values().collect();
        edges.sort_by_key(|e| (e.src, e.dst));

        let mut node_set: BTreeSet<NodeId> = nodes.into_iter().collect();
        for e in &edges {
            node_set.insert(e.src);
            node_set.insert(e.dst);
        }
        Ok(Self::from_sorted(node_set.into_iter().collect(), edges))
    }

    /// `nodes` ascending and unique, `edges` sorted by `(src, dst)` without duplicates.
    fn from_sorted(nodes: Vec<NodeId>, edges: Vec<SignedEdge>) -> Self {
        let index: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        let mut endpoints = Vec::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            let (s, d) = (index[&e.src], index[&e.dst]);
            endpoints.push((s, d));
            out_adj[s].push(k);
            in_adj[d].push(k);
        }
        Self { nodes, index, edges, endpoints, out_adj, in_adj }
    }

    pub fn empty() -> Self {
        Self::from_sorted(Vec::new(), Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node labels in dense-index order (ascending).
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.edges
    }

    pub fn index_of(&self, node: NodeId) -> Option<usize> {
        self.index.get(&node).copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.index.contains_key(&node)
    }

    /// Dense `(src, dst)` indices of edge `k`.
    pub fn endpoints(&self, k: usize) -> (usize, usize) {
        self.endpoints[k]
    }

    /// Indices into [`edges`](Self::edges) of the out-edges of dense node `i`, ascending by target.
    pub fn out_edge_ids(&self, i: usize) -> &[usize] {
        &self.out_adj[i]
    }

    /// Indices of the in-edges of dense node `i`, ascending by source.
    pub fn in_edge_ids(&self, i: usize) -> &[usize] {
        &self.in_adj[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_adj[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_adj[i].len()
    }

    pub fn edge(&self, src: NodeId, dst: NodeId) -> Option<&SignedEdge> {
        let s = self.index_of(src)?;
        let d = self.index_of(dst)?;
        let out = &self.out_adj[s];
        out.binary_search_by_key(&d, |&k| self.endpoints[k].1).ok().map(|p| &self.edges[out[p]])
    }

    pub fn has_edge_between(&self, a: usize, b: usize) -> bool {
        let find = |s: usize, d: usize| self.out_adj[s].binary_search_by_key(&d, |&k| self.endpoints[k].1).is_ok();
        find(a, b) || find(b, a)
    }

    /// Undirected neighbor lists (dense indices, ascending, no duplicates).
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.nodes.len()];
        for &(s, d) in &self.endpoints {
            nbrs[s].push(d);
            nbrs[d].push(s);
        }
        for list in &mut nbrs {
            list.sort_unstable();
            list.dedup();
        }
        nbrs
    }

    /// Edges in temporal order, ties broken by `(src, dst)`.
    pub fn edges_by_time(&self) -> Vec<&SignedEdge> {
        let mut sorted: Vec<&SignedEdge> = self.edges.iter().collect();
        sorted.sort_by_key(|e| (e.timestamp, e.src, e.dst));
        sorted
    }

    pub fn summary(&self) -> GraphSummary {
        let positive_edges = self.edges.iter().filter(|e| e.weight > 0.0).count();
        let negative_edges = self.edges.iter().filter(|e| e.weight < 0.0).count();
        let predicted_edges = self.edges.iter().filter(|e| e.predicted).count();
        let positive_fraction =
            if self.edges.is_empty() { 0.0 } else { positive_edges as f64 / self.edges.len() as f64 };
        GraphSummary {
            nodes: self.nodes.len(),
            edges: self.edges.len(),
            positive_edges,
            negative_edges,
            positive_fraction,
            predicted_edges,
            min_timestamp: self.edges.iter().map(|e| e.timestamp).min(),
            max_timestamp: self.edges.iter().map(|e| e.timestamp).max(),
        }
    }

    /// Keeps edges satisfying `keep` and the nodes incident to them.
    fn edge_subgraph(&self, keep: impl Fn(&SignedEdge) -> bool) -> Self {
        let edges: Vec<SignedEdge> = self.edges.iter().filter(|e| keep(e)).copied().collect();
        let mut nodes: Vec<NodeId> = edges.iter().flat_map(|e| [e.src, e.dst]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        Self::from_sorted(nodes, edges)
    }

    /// Keeps the nodes flagged in `keep` (dense order) and the edges among them.
    fn induced(&self, keep: &[bool]) -> Self {
        let nodes = self.nodes.iter().zip(keep).filter(|(_, &k)| k).map(|(&n, _)| n).collect();
        let edges = self
            .edges
            .iter()
            .zip(&self.endpoints)
            .filter(|(_, &(s, d))| keep[s] && keep[d])
            .map(|(e, _)| *e)
            .collect();
        Self::from_sorted(nodes, edges)
    }

    /// Edges with `timestamp <= cutoff` and the nodes incident to them.
    pub fn subgraph_by_time(&self, cutoff: i64) -> Self {
        self.edge_subgraph(|e| e.timestamp <= cutoff)
    }

    /// Edges with `start <= timestamp <= end` and the nodes incident to them.
    pub fn subgraph_by_time_range(&self, start: i64, end: i64) -> Self {
        self.edge_subgraph(|e| (start..=end).contains(&e.timestamp))
    }

    /// The first `count` edges in temporal order and their endpoints.
    pub fn temporal_prefix(&self, count: usize) -> Self {
        let mut chosen: Vec<SignedEdge> = self.edges_by_time().into_iter().take(count).copied().collect();
        chosen.sort_by_key(|e| (e.src, e.dst));
        let mut nodes: Vec<NodeId> = chosen.iter().flat_map(|e| [e.src, e.dst]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        Self::from_sorted(nodes, chosen)
    }

    /// Positive-weight edges only, restricted to their endpoints.
    pub fn positive_subgraph(&self) -> Self {
        self.edge_subgraph(|e| e.weight > 0.0)
    }

    /// Drops predicted edges, keeping every node.
    pub fn observed_only(&self) -> Self {
        let edges = self.edges.iter().filter(|e| !e.predicted).copied().collect();
        Self::from_sorted(self.nodes.clone(), edges)
    }

    /// Removes `victims` and every edge touching one of them.
    pub fn remove_nodes(&self, victims: &BTreeSet<NodeId>) -> Result<Self> {
        let mut keep = vec![true; self.nodes.len()];
        for &v in victims {
            let i = self.index_of(v).ok_or(Error::UnknownNode(v))?;
            keep[i] = false;
        }
        Ok(self.induced(&keep))
    }

    /// Adds edges to a copy of this graph. Endpoints must already exist and
    /// no added pair may already carry an edge.
    pub(crate) fn with_added_edges(&self, added: Vec<SignedEdge>) -> Self {
        let mut edges = self.edges.clone();
        edges.extend(added);
        edges.sort_by_key(|e| (e.src, e.dst));
        debug_assert!(edges.windows(2).all(|w| (w[0].src, w[0].dst) != (w[1].src, w[1].dst)));
        Self::from_sorted(self.nodes.clone(), edges)
    }

    /// Symmetric weighted adjacency over dense indices.
    ///
    /// `A(u,v)` is the mean of whichever of `W(u,v)`, `W(v,u)` exist. Pairs whose
    /// two directions cancel to exactly zero carry no entry.
    pub fn symmetrize(&self) -> SymmetricMatrix {
        let mut pairs: Vec<(usize, usize, f64)> = self
            .endpoints
            .iter()
            .zip(&self.edges)
            .map(|(&(s, d), e)| (s.min(d), s.max(d), e.weight))
            .collect();
        pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut upper = Vec::with_capacity(pairs.len());
        let mut k = 0;
        while k < pairs.len() {
            let (a, b, w) = pairs[k];
            if k + 1 < pairs.len() && pairs[k + 1].0 == a && pairs[k + 1].1 == b {
                upper.push((a, b, (w + pairs[k + 1].2) / 2.0));
                k += 2;
            } else {
                upper.push((a, b, w));
                k += 1;
            }
        }
        SymmetricMatrix::from_upper(self.nodes.len(), upper)
    }

    /// Applies a sampling scheme.
    pub fn sample(&self, spec: &Sample) -> Self {
        match *spec {
            Sample::Temporal { fraction } => {
                let count = (fraction * self.edges.len() as f64).floor() as usize;
                self.temporal_prefix(count)
            }
            Sample::Node { fraction, seed } => {
                let n = self.nodes.len();
                let amount = ((fraction * n as f64).round() as usize).min(n);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut keep = vec![false; n];
                for i in index::sample(&mut rng, n, amount) {
                    keep[i] = true;
                }
                self.induced(&keep)
            }
        }
    }

    /// Reads a `SOURCE,TARGET,RATING,TIME` edge list, optionally gzip-compressed.
    pub fn ingest_csv(path: impl AsRef<Path>, weight_divisor: f64) -> Result<Self> {
        let path = path.as_ref();
        let io_err = |source| Error::Io { path: path.to_path_buf(), source };
        let file = std::fs::File::open(path).map_err(io_err)?;
        let mut reader = BufReader::new(file);
        let gzipped = reader.fill_buf().map_err(io_err)?.starts_with(&[0x1f, 0x8b]);
        if gzipped {
            Self::ingest_reader(flate2::read::MultiGzDecoder::new(reader), weight_divisor)
        } else {
            Self::ingest_reader(reader, weight_divisor)
        }
    }

    /// Parses edge-list CSV from any reader. A non-numeric first row is taken as a header.
    pub fn ingest_reader(reader: impl Read, weight_divisor: f64) -> Result<Self> {
        if !(weight_divisor.is_finite() && weight_divisor > 0.0) {
            return Err(Error::InvalidDivisor(weight_divisor));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);

        let mut edges = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(row as u64 + 1);
            if row == 0 && record.get(0).is_some_and(|f| f.parse::<i64>().is_err()) {
                continue;
            }
            if record.len() != 4 {
                return Err(Error::Parse { line, message: format!("expected 4 fields, found {}", record.len()) });
            }
            let field = |i: usize, name: &str| -> Result<i64> {
                record[i].parse::<i64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("{name} {:?} is not an integer", &record[i]),
                })
            };
            let src = field(0, "SOURCE")?;
            let dst = field(1, "TARGET")?;
            let rating = field(2, "RATING")?;
            let timestamp = field(3, "TIME")?;
            let (src, dst) = match (u64::try_from(src), u64::try_from(dst)) {
                (Ok(s), Ok(d)) => (NodeId(s), NodeId(d)),
                _ => return Err(Error::Parse { line, message: "node labels must be non-negative".into() }),
            };
            if !(-MAX_RATING..=MAX_RATING).contains(&rating) {
                return Err(Error::RatingRange { line, rating });
            }
            if rating == 0 {
                return Err(Error::ZeroRating { line });
            }
            if src == dst {
                return Err(Error::SelfLoop { line, node: src });
            }
            let weight = rating as f64 / weight_divisor;
            if weight.abs() > 1.0 {
                return Err(Error::InvalidEdge(format!(
                    "line {line}: rating {rating} / divisor {weight_divisor} leaves [-1, 1]"
                )));
            }
            edges.push(SignedEdge { src, dst, weight, timestamp, predicted: false });
        }
        Self::new(std::iter::empty(), edges)
    }

    /// Writes observed edges back out as `SOURCE,TARGET,RATING,TIME` (no header).
    ///
    /// Ratings are `weight * weight_divisor` rounded to the nearest integer.
    pub fn write_csv(&self, writer: impl Write, weight_divisor: f64) -> std::io::Result<()> {
        let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for e in self.edges.iter().filter(|e| !e.predicted) {
            let rating = (e.weight * weight_divisor).round() as i64;
            wtr.write_record([e.src.to_string(), e.dst.to_string(), rating.to_string(), e.timestamp.to_string()])?;
        }
        wtr.flush()
    }
}

/// Subsampling scheme applied before analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sample {
    /// Earliest `floor(fraction * E)` edges.
    Temporal { fraction: f64 },
    /// Subgraph induced by `round(fraction * N)` uniformly drawn nodes.
    Node { fraction: f64, seed: u64 },
}

impl FromStr for Sample {
    type Err = Error;

    /// `temporal:<fraction>` or `node:<fraction>:<seed>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSample(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let fraction = |p: &str| -> Result<f64> {
            let f: f64 = p.parse().map_err(|_| bad())?;
            if f > 0.0 && f <= 1.0 {
                Ok(f)
            } else {
                Err(bad())
            }
        };
        match parts.as_slice() {
            ["temporal", f] => Ok(Sample::Temporal { fraction: fraction(f)? }),
            ["node", f, seed] => Ok(Sample::Node { fraction: fraction(f)?, seed: seed.parse().map_err(|_| bad())? }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sample::Temporal { fraction } => write!(f, "temporal:{fraction}"),
            Sample::Node { fraction, seed } => write!(f, "node:{fraction}:{seed}"),
        }
    }
}
