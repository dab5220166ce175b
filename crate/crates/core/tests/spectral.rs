mod common;

use nalgebra::{DMatrix, DVector};
use trustnet_core::cluster::{signed_laplacian, spectral_embed};
use trustnet_core::linalg::eigen::smallest_eigenpairs_with_limit;
use trustnet_core::SignedDiGraph;

/// Symmetrized adjacency built from the edge list: mean of the directions present.
fn symmetric_adjacency(g: &SignedDiGraph) -> DMatrix<f64> {
    let n = g.node_count();
    let pos = |id| g.index_of(id).unwrap();
    let mut sum = DMatrix::<f64>::zeros(n, n);
    let mut count = DMatrix::<f64>::zeros(n, n);
    for e in g.edges() {
        let (i, j) = (pos(e.src), pos(e.dst));
        for (a, b) in [(i, j), (j, i)] {
            sum[(a, b)] += e.weight;
            count[(a, b)] += 1.0;
        }
    }
    sum.zip_map(&count, |s, c| if c > 0.0 { s / c } else { 0.0 })
}

#[test]
fn laplacian_matches_dense_construction() {
    let mut rng = common::rng(1);
    for _ in 0..30 {
        let g = common::random_graph(&mut rng, 12, 0.25);
        let a = symmetric_adjacency(&g);
        let degree = DMatrix::from_diagonal(&DVector::from_iterator(a.nrows(), a.row_iter().map(|r| r.abs().sum())));
        let expected = degree - &a;
        let got = signed_laplacian(&g).to_dense();
        assert!((got - expected).abs().max() < 1e-12);
    }
}

#[test]
fn psd_and_quadratic_form_identity() {
    let mut rng = common::rng(2);
    for _ in 0..50 {
        let g = common::random_graph(&mut rng, 15, 0.2);
        let l = signed_laplacian(&g);
        assert!(l.is_symmetric());
        let min = l.to_dense().symmetric_eigen().eigenvalues.min();
        assert!(min > -1e-9, "min eigenvalue {min}");

        let a = symmetric_adjacency(&g);
        let x: Vec<f64> = (0..g.node_count()).map(|_| common::random_weight(&mut rng)).collect();
        let mut expected = 0.0;
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                let w = a[(i, j)];
                if w != 0.0 {
                    expected += w.abs() * (x[i] - w.signum() * x[j]).powi(2);
                }
            }
        }
        assert!((l.quadratic_form(&x) - expected).abs() < 1e-9);
    }
}

#[test]
fn full_embedding_reconstructs_laplacian() {
    let mut rng = common::rng(3);
    for _ in 0..10 {
        let g = common::random_graph(&mut rng, 10, 0.3);
        let l = signed_laplacian(&g);
        let e = spectral_embed(&l, g.node_count(), 1e-12).unwrap();
        let v = &e.vectors;
        let rebuilt = v * DMatrix::from_diagonal(&DVector::from_vec(e.values.clone())) * v.transpose();
        assert!((rebuilt - l.to_dense()).abs().max() < 1e-9);
        assert!((v.transpose() * v - DMatrix::identity(v.ncols(), v.ncols())).abs().max() < 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}

#[test]
fn iterative_solver_agrees_with_dense() {
    let mut rng = common::rng(4);
    for _ in 0..5 {
        let g = common::random_graph(&mut rng, 60, 0.05);
        let l = signed_laplacian(&g);
        let dense = smallest_eigenpairs_with_limit(&l, 5, 1e-10, usize::MAX).unwrap();
        let sparse = smallest_eigenpairs_with_limit(&l, 5, 1e-10, 0).unwrap();
        for (a, b) in dense.values.iter().zip(&sparse.values) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        for (k, &lambda) in sparse.values.iter().enumerate() {
            let v: Vec<f64> = sparse.vectors.column(k).iter().copied().collect();
            let lv = l.mul_vec(&v);
            let res = lv.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            assert!(res < 1e-6, "residual {res}");
        }
    }
}
