//! Sanity checks for the brute-force oracles on hand-worked examples.
//!
//! The oracles earn their role as referees here, on graphs small enough to
//! verify by eye, before the acceptance suite uses them on random inputs.

mod common;

use common::{h0_oracle, h1_oracle, wasserstein_oracle};
use ndarray::array;
use persnet::graph::WeightedMatrix;

fn matrix(entries: ndarray::Array2<f64>, cap: f64) -> WeightedMatrix {
    WeightedMatrix::new(entries, cap).unwrap()
}

#[test]
fn h0_oracle_on_weighted_triangle() {
    let w = matrix(
        array![[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [2.0, 3.0, 0.0]],
        3.0,
    );
    assert_eq!(h0_oracle(&w, 3.0), vec![(0.0, 1.0), (0.0, 2.0), (0.0, 3.0)]);
}

#[test]
fn h0_oracle_counts_isolated_vertices() {
    let s = 3.0;
    let w = matrix(array![[0.0, s, s], [s, 0.0, s], [s, s, 0.0]], 2.0);
    assert_eq!(h0_oracle(&w, 2.0), vec![(0.0, 2.0); 3]);
}

#[test]
fn h1_oracle_finds_the_square_hole() {
    let s = 3.0;
    let w = matrix(
        array![
            [0.0, 1.0, s, 1.0],
            [1.0, 0.0, 1.0, s],
            [s, 1.0, 0.0, 1.0],
            [1.0, s, 1.0, 0.0]
        ],
        2.0,
    );
    assert_eq!(h1_oracle(&w, 2.0), vec![(1.0, 2.0)]);
}

#[test]
fn h1_oracle_sees_filled_triangle_as_trivial() {
    let w = matrix(
        array![[0.0, 1.0, 1.5], [1.0, 0.0, 2.0], [1.5, 2.0, 0.0]],
        2.0,
    );
    assert_eq!(h1_oracle(&w, 2.0), Vec::<(f64, f64)>::new());
}

#[test]
fn h1_oracle_on_square_with_filled_diagonal() {
    // square 0-1-2-3 plus diagonal 0-2: the diagonal splits the square into
    // two triangles, so the hole born when the cycle closes at weight 1 dies
    // when the heavier triangle fills at weight 2
    let s = 9.0;
    let w = matrix(
        array![
            [0.0, 1.0, 2.0, 1.0],
            [1.0, 0.0, 1.0, s],
            [2.0, 1.0, 0.0, 1.0],
            [1.0, s, 1.0, 0.0]
        ],
        8.0,
    );
    assert_eq!(h1_oracle(&w, 8.0), vec![(1.0, 2.0)]);
}

#[test]
fn wasserstein_oracle_single_point_to_empty() {
    let d = wasserstein_oracle(&[(0.0, 2.0)], &[], 2.0);
    assert!((d - 2.0_f64.sqrt()).abs() < 1e-12);
}

#[test]
fn wasserstein_oracle_prefers_direct_match() {
    // matching (0,1) to (0,3) costs 2; routing both through the diagonal
    // costs sqrt(0.5 + 4.5) which is worse
    let d = wasserstein_oracle(&[(0.0, 1.0)], &[(0.0, 3.0)], 2.0);
    assert!((d - 2.0).abs() < 1e-12);
}

#[test]
fn wasserstein_oracle_prefers_diagonal_when_cheaper() {
    // two tiny features far apart: matching directly costs 10 in W1 terms,
    // dropping both onto the diagonal costs 2 * 0.1 / sqrt(2)
    let d = wasserstein_oracle(&[(0.0, 0.1)], &[(10.0, 10.1)], 1.0);
    let expected = 2.0 * 0.1 / 2.0_f64.sqrt();
    assert!((d - expected).abs() < 1e-12, "{d} vs {expected}");
}

#[test]
fn wasserstein_oracle_identical_diagrams() {
    let pts = [(0.1, 0.5), (0.3, 1.9), (0.0, 2.0)];
    assert_eq!(wasserstein_oracle(&pts, &pts, 2.0), 0.0);
}

#[test]
fn wasserstein_oracle_common_points_do_not_cancel() {
    // sharing the point (0, 1) does not reduce to comparing {} vs {(1, 2)}:
    // the optimal matching reroutes the shared point
    let d1 = [(0.0, 1.0)];
    let d2 = [(0.0, 1.0), (1.0, 2.0)];
    let with_common = wasserstein_oracle(&d1, &d2, 2.0);
    let cancelled = wasserstein_oracle(&[], &[(1.0, 2.0)], 2.0);
    assert!(with_common <= cancelled + 1e-12);
}
