#![allow(dead_code)]

use rand::Rng;
use std::collections::BTreeMap;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trustnet_core::{NodeId, SignedDiGraph, SignedEdge};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rating in [-10, 10] scaled to [-1, 1].
pub fn random_weight(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let r: i64 = rng.gen_range(-10..=10);
        if r != 0 {
            return r as f64 / 10.0;
        }
    }
}

/// Each ordered pair gets an edge with probability `p`; every node is kept.
pub fn random_graph(rng: &mut ChaCha8Rng, n: u64, p: f64) -> SignedDiGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                let w = random_weight(rng);
                edges.push(SignedEdge::observed(a, b, w, rng.gen_range(0..1_000)));
            }
        }
    }
    SignedDiGraph::new((0..n).map(NodeId), edges).unwrap()
}

/// Like `random_graph` but with weights of magnitude one.
pub fn random_sign_graph(rng: &mut ChaCha8Rng, n: u64, p: f64) -> SignedDiGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                let w = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                edges.push(SignedEdge::observed(a, b, w, 0));
            }
        }
    }
    SignedDiGraph::new((0..n).map(NodeId), edges).unwrap()
}

/// Two positive cliques `0..m` and `m..2m` with every cross pair negative.
pub fn double_clique(m: u64) -> SignedDiGraph {
    let mut edges = Vec::new();
    for a in 0..2 * m {
        for b in a + 1..2 * m {
            let w = if (a < m) == (b < m) { 1.0 } else { -1.0 };
            edges.push(SignedEdge::observed(a, b, w, (a * 2 * m + b) as i64));
        }
    }
    SignedDiGraph::new([], edges).unwrap()
}

pub fn clique_labels(m: usize) -> Vec<usize> {
    (0..2 * m).map(|i| usize::from(i >= m)).collect()
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max + 1 {
            if prefix.is_empty() && label > 0 {
                break;
            }
            prefix.push(label);
            let next = if prefix.len() == 1 { 0 } else { max.max(label) };
            go(prefix, next, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
    } else {
        go(&mut Vec::new(), 0, n, &mut out);
    }
    out
}

/// Labels grouped into the same blocks regardless of label names.
pub fn same_grouping(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Fixed-point equations evaluated straight from the edge list.
pub fn equation_residual(g: &SignedDiGraph, f: &BTreeMap<NodeId, f64>, gd: &BTreeMap<NodeId, f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for &v in g.nodes() {
        let ins: Vec<&SignedEdge> = g.edges().iter().filter(|e| e.dst == v).collect();
        let want = if ins.is_empty() { 0.0 } else { ins.iter().map(|e| f[&e.src] * e.weight).sum::<f64>() / ins.len() as f64 };
        worst = worst.max((want - gd[&v]).abs());
        let outs: Vec<&SignedEdge> = g.edges().iter().filter(|e| e.src == v).collect();
        let want =
            if outs.is_empty() { 1.0 } else { 1.0 - outs.iter().map(|e| (e.weight * gd[&e.dst]).abs()).sum::<f64>() / outs.len() as f64 };
        worst = worst.max((want - f[&v]).abs());
    }
    worst
}

/// Long damped iteration over maps keyed by node id.
pub fn oracle(g: &SignedDiGraph, steps: usize) -> (BTreeMap<NodeId, f64>, BTreeMap<NodeId, f64>) {
    let mut f: BTreeMap<NodeId, f64> = g.nodes().iter().map(|&n| (n, 1.0)).collect();
    let mut gd: BTreeMap<NodeId, f64> = f.clone();
    for _ in 0..steps {
        let mut sums: BTreeMap<NodeId, (f64, usize)> = BTreeMap::new();
        for e in g.edges() {
            let s = sums.entry(e.dst).or_default();
            s.0 += f[&e.src] * e.weight;
            s.1 += 1;
        }
        for (&n, v) in gd.iter_mut() {
            *v = sums.get(&n).map_or(0.0, |&(s, c)| s / c as f64);
        }
        let mut err: BTreeMap<NodeId, (f64, usize)> = BTreeMap::new();
        for e in g.edges() {
            let s = err.entry(e.src).or_default();
            s.0 += (e.weight * gd[&e.dst]).abs();
            s.1 += 1;
        }
        for (&n, v) in f.iter_mut() {
            let target = err.get(&n).map_or(1.0, |&(s, c)| 1.0 - s / c as f64);
            *v = 0.5 * *v + 0.5 * target;
        }
    }
    for (&n, v) in gd.iter_mut() {
        let ins: Vec<&SignedEdge> = g.edges().iter().filter(|e| e.dst == n).collect();
        *v = if ins.is_empty() { 0.0 } else { ins.iter().map(|e| f[&e.src] * e.weight).sum::<f64>() / ins.len() as f64 };
    }
    (f, gd)
}

/// `f(u) g(v)` from the oracle maps.
pub fn oracle_prediction(o: &(BTreeMap<NodeId, f64>, BTreeMap<NodeId, f64>), u: NodeId, v: NodeId) -> f64 {
    o.0[&u] * o.1[&v]
}
