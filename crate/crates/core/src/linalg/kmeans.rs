//! Seeded Lloyd k-means with k-means++ initialization.

use crate::error::{Error, Result};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMeansConfig {
    pub k: usize,
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Stop once the relative WCSS improvement of an iteration drops below this.
    pub relative_tolerance: f64,
}

impl KMeansConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self { k, restarts: 10, seed, max_iterations: 300, relative_tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub wcss: f64,
    /// Seed of the winning run.
    pub seed: u64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid, ties to the lower index.
fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, mu) in centroids.iter().enumerate() {
        let d = sq_dist(p, mu);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centroids = vec![points[first].clone()];
    let mut dist: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    while centroids.len() < k {
        let next = match WeightedIndex::new(&dist) {
            Ok(w) => w.sample(rng),
            // Every point sits on a centroid already.
            Err(_) => (0..n).find(|&i| !chosen[i]).expect("k <= n"),
        };
        chosen[next] = true;
        centroids.push(points[next].clone());
        for (d, p) in dist.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &points[next]));
        }
    }
    centroids
}

/// One seeded Lloyd run; the flag is false when a cluster ends up empty.
fn lloyd(points: &[Vec<f64>], cfg: &KMeansConfig, seed: u64) -> (KMeansResult, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = points[0].len();
    let mut centroids = plus_plus_init(points, cfg.k, &mut rng);
    let mut labels = vec![0usize; points.len()];
    let mut prev_wcss = f64::INFINITY;

    for _ in 0..cfg.max_iterations {
        let mut wcss = 0.0;
        for (label, p) in labels.iter_mut().zip(points) {
            let (c, d) = nearest(p, &centroids);
            *label = c;
            wcss += d;
        }
        let mut sums = vec![vec![0.0; dim]; cfg.k];
        let mut counts = vec![0usize; cfg.k];
        for (&c, p) in labels.iter().zip(points) {
            counts[c] += 1;
            sums[c].iter_mut().zip(p).for_each(|(s, x)| *s += x);
        }
        for c in 0..cfg.k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        let improvement = prev_wcss - wcss;
        if wcss == 0.0 || (prev_wcss.is_finite() && improvement <= cfg.relative_tolerance * prev_wcss) {
            break;
        }
        prev_wcss = wcss;
    }
    // Final assignment against the final centroids.
    let mut wcss = 0.0;
    let mut counts = vec![0usize; cfg.k];
    for (label, p) in labels.iter_mut().zip(points) {
        let (c, d) = nearest(p, &centroids);
        *label = c;
        counts[c] += 1;
        wcss += d;
    }
    let complete = counts.iter().all(|&c| c > 0);
    (KMeansResult { labels, centroids, wcss, seed }, complete)
}

/// Moves the point farthest from its centroid (within a cluster of size > 1)
/// into each empty cluster.
fn fill_empty(points: &[Vec<f64>], result: &mut KMeansResult, k: usize) {
    loop {
        let mut counts = vec![0usize; k];
        for &c in &result.labels {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else { break };
        let (victim, _) = result
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &c)| counts[c] > 1)
            .map(|(i, &c)| (i, sq_dist(&points[i], &result.centroids[c])))
            .fold((usize::MAX, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        result.labels[victim] = empty;
        result.centroids[empty] = points[victim].clone();
    }
    result.wcss = result.labels.iter().zip(points).map(|(&c, p)| sq_dist(p, &result.centroids[c])).sum();
}

/// Best of `cfg.restarts` seeded runs by within-cluster sum of squares.
///
/// Run `r` uses seed `cfg.seed + r`. Runs that leave a cluster empty are
/// discarded and replaced by the next seed, up to `cfg.restarts` extra seeds;
/// if none of those succeed either, the best run has its empty clusters
/// filled with the farthest points.
pub fn kmeans(points: &[Vec<f64>], cfg: &KMeansConfig) -> Result<KMeansResult> {
    if cfg.k == 0 || cfg.restarts == 0 || cfg.max_iterations == 0 {
        return Err(Error::InvalidConfig("k, restarts and max_iterations must be positive".into()));
    }
    if points.len() < cfg.k {
        return Err(Error::TooFewNodes { need: cfg.k, have: points.len() });
    }
    let mut best: Option<KMeansResult> = None;
    let mut fallback: Option<KMeansResult> = None;
    let mut valid_runs = 0;
    let mut offset = 0u64;
    while valid_runs < cfg.restarts && offset < 2 * cfg.restarts as u64 {
        let (run, complete) = lloyd(points, cfg, cfg.seed.wrapping_add(offset));
        offset += 1;
        let slot = if complete {
            valid_runs += 1;
            &mut best
        } else {
            &mut fallback
        };
        if slot.as_ref().is_none_or(|b| run.wcss < b.wcss) {
            *slot = Some(run);
        }
    }
    Ok(match best {
        Some(b) => b,
        None => {
            let mut b = fallback.expect("at least one run");
            fill_empty(points, &mut b, cfg.k);
            b
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separates_blobs() {
        let mut pts = Vec::new();
        for i in 0..10 {
            pts.push(vec![0.0 + i as f64 * 0.01, 0.0]);
            pts.push(vec![5.0, 5.0 + i as f64 * 0.01]);
        }
        let r = kmeans(&pts, &KMeansConfig::new(2, 42)).unwrap();
        for i in (0..20).step_by(2) {
            assert_eq!(r.labels[i], r.labels[0]);
            assert_eq!(r.labels[i + 1], r.labels[1]);
        }
        assert_ne!(r.labels[0], r.labels[1]);
        assert_eq!(r, kmeans(&pts, &KMeansConfig::new(2, 42)).unwrap());
    }

    #[test]
    fn duplicate_points_still_fill_k_clusters() {
        let pts = vec![vec![1.0], vec![1.0], vec![1.0], vec![2.0]];
        let r = kmeans(&pts, &KMeansConfig::new(3, 0)).unwrap();
        let mut counts = [0; 3];
        for &l in &r.labels {
            counts[l] += 1;
        }
        assert!(counts.iter().all(|&c| c > 0));
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(kmeans(&[vec![0.0]], &KMeansConfig::new(2, 0)), Err(Error::TooFewNodes { need: 2, have: 1 })));
    }
}
