//! Grid bookkeeping: construction limits, index arithmetic, and the sampled
//! neighbourhood K.

use num_complex::Complex64;
use proptest::prelude::*;
use wfscope::{Grid, Regularization, SampledSignal};

#[test]
fn grid_construction_limits() {
    assert!(Grid::new(1, 64, 0.5, vec![-16.0]).is_ok());
    assert!(Grid::new(3, 64, 0.5, vec![0.0, 0.0, 0.0]).is_err());
    assert!(Grid::new(1, 8, 0.5, vec![0.0]).is_err()); // below the minimum
    assert!(Grid::new(1, 100, 0.5, vec![0.0]).is_err()); // not a power of two
    assert!(Grid::new(1, 64, 0.0, vec![0.0]).is_err());
    assert!(Grid::new(1, 64, -0.5, vec![0.0]).is_err());
    assert!(Grid::new(2, 64, 0.5, vec![0.0]).is_err()); // origin arity
}

#[test]
fn grid_coordinates() {
    let g = Grid::new(1, 64, 0.25, vec![-8.0]).unwrap();
    assert_eq!(g.len(), 64);
    assert_eq!(g.coord(0, 0), -8.0);
    assert_eq!(g.coord(0, 32), 0.0);
    assert_eq!(g.max_coord(0), -8.0 + 63.0 * 0.25);
    let g2 = Grid::new(2, 32, 0.5, vec![-8.0, 0.0]).unwrap();
    assert_eq!(g2.len(), 1024);
    assert_eq!(g2.point(0), vec![-8.0, 0.0]);
    assert_eq!(g2.point(33), vec![-7.5, 0.5]);
}

#[test]
fn index_roundtrip() {
    let g2 = Grid::new(2, 32, 0.5, vec![-8.0, -8.0]).unwrap();
    for ix in [0usize, 1, 31, 32, 1000, 1023] {
        assert_eq!(g2.ravel(g2.unravel(ix)), ix);
    }
    let g1 = Grid::new(1, 64, 0.5, vec![-16.0]).unwrap();
    assert_eq!(g1.unravel(17), [17, 0]);
    assert_eq!(g1.ravel([17, 0]), 17);
}

#[test]
fn ball_nodes_1d() {
    let g = Grid::new(1, 32, 0.125, vec![-2.0]).unwrap();
    let nodes = g.ball_nodes(&[0.0], 0.25);
    // -0.25, -0.125, 0, 0.125, 0.25: the boundary is included
    assert_eq!(nodes.len(), 5);
    assert_eq!(nodes[0], vec![-0.25]);
    assert_eq!(nodes[4], vec![0.25]);
    for w in nodes.windows(2) {
        assert!(w[1][0] > w[0][0]);
    }
    // a center off the lattice still collects its neighbours
    let off = g.ball_nodes(&[0.06, ], 0.1);
    assert_eq!(off, vec![vec![0.0], vec![0.125]]);
    // radius smaller than the spacing can still catch one node
    assert_eq!(g.ball_nodes(&[0.001], 0.01), vec![vec![0.0]]);
}

#[test]
fn ball_nodes_2d_euclidean() {
    let g = Grid::new(2, 64, 0.125, vec![-4.0, -4.0]).unwrap();
    let nodes = g.ball_nodes(&[0.0, 0.0], 0.25);
    // 1 center + 4 at distance 0.125 + 4 diagonals at 0.177 + 4 at 0.25
    assert_eq!(nodes.len(), 13);
    for p in &nodes {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        assert!(r <= 0.25 + 1e-9);
    }
    // the corner (0.25, 0.25) lies outside the euclidean ball
    assert!(!nodes.contains(&vec![0.25, 0.25]));
}

#[test]
fn ball_nodes_clip_at_the_grid_edge() {
    let g = Grid::new(1, 32, 0.125, vec![-2.0]).unwrap();
    let near_edge = g.ball_nodes(&[-2.0], 0.3);
    assert_eq!(near_edge[0], vec![-2.0]);
    assert!(near_edge.iter().all(|p| p[0] >= -2.0));
    let outside = g.ball_nodes(&[10.0], 0.25);
    assert!(outside.is_empty());
}

#[test]
fn sampled_signal_validation() {
    let g = Grid::new(1, 32, 0.125, vec![-2.0]).unwrap();
    let zeros = vec![Complex64::new(0.0, 0.0); 32];
    assert!(SampledSignal::new(g.clone(), zeros.clone(), "ok", None).is_ok());
    assert!(SampledSignal::new(g.clone(), zeros[..31].to_vec(), "short", None).is_err());
    let bad_reg = Regularization { kind: "point-mass".into(), epsilon: 0.0 };
    assert!(SampledSignal::new(g, zeros, "bad", Some(bad_reg)).is_err());
}

proptest! {
    #[test]
    fn ball_nodes_exactly_the_near_nodes(center in -1.0f64..1.0, radius in 0.01f64..0.75) {
        let g = Grid::new(1, 64, 0.125, vec![-4.0]).unwrap();
        let nodes = g.ball_nodes(&[center], radius);
        // compare against the brute-force filter over all nodes
        let brute: Vec<Vec<f64>> = (0..g.len())
            .map(|k| vec![g.coord(0, k)])
            .filter(|p| (p[0] - center).abs() <= radius + 1e-12)
            .collect();
        prop_assert_eq!(nodes, brute);
    }
}
