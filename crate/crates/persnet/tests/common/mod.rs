//! Brute-force oracles used to validate the persistence and matching code.
//!
//! Everything here is written for clarity over speed and shares no code with
//! the implementations under test: components are counted by flood fill,
//! homology ranks come from fresh GF(2) eliminations at every threshold, and
//! matchings are enumerated exhaustively.

#![allow(dead_code)]

use persnet::graph::WeightedMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Number of connected components of the subgraph with edges of weight `<= a`.
pub fn components_at(w: &WeightedMatrix, a: f64) -> usize {
    let n = w.n();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for (v, seen_v) in seen.iter_mut().enumerate() {
                if !*seen_v && w.is_edge(u, v) && w.get(u, v) <= a {
                    *seen_v = true;
                    stack.push(v);
                }
            }
        }
    }
    components
}

/// Dimension-0 persistence pairs by repeated flood fill.
///
/// Walks the distinct edge weights in ascending order; every drop in the
/// component count at weight `a` contributes that many `(0, a)` pairs, and
/// components still alive at the end contribute `(0, max_scale)`.
pub fn h0_oracle(w: &WeightedMatrix, max_scale: f64) -> Vec<(f64, f64)> {
    let mut weights: Vec<f64> = w
        .finite_edges()
        .into_iter()
        .map(|(_, _, wgt)| wgt)
        .filter(|&wgt| wgt <= max_scale)
        .collect();
    weights.sort_by(f64::total_cmp);
    weights.dedup();

    let mut pairs = Vec::new();
    let mut alive = w.n();
    for &a in &weights {
        let now = components_at(w, a);
        for _ in now..alive {
            pairs.push((0.0, a));
        }
        alive = now;
    }
    for _ in 0..alive {
        pairs.push((0.0, max_scale));
    }
    sort_pairs(&mut pairs);
    pairs
}

/// Online GF(2) Gaussian elimination over bitmask-encoded vectors.
#[derive(Default)]
struct Gf2Basis {
    rows: Vec<(u64, u64)>, // (pivot bit, reduced vector)
}

impl Gf2Basis {
    /// Inserts a vector; returns true when it was independent of the basis.
    fn insert(&mut self, mut v: u64) -> bool {
        for &(pivot, row) in &self.rows {
            if v & pivot != 0 {
                v ^= row;
            }
        }
        if v == 0 {
            return false;
        }
        self.rows.push((v & v.wrapping_neg(), v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn gf2_rank(vectors: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = Gf2Basis::default();
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

/// Basis of the cycle space of the edges with value `<= a`, each cycle a
/// bitmask over the full edge index space.
fn cycle_space(edges: &[(usize, usize, f64)], a: f64) -> Vec<u64> {
    // eliminate in vertex space while carrying companion edge-space vectors;
    // an edge whose endpoints are already connected closes a cycle
    let mut vertex_basis: Vec<(u64, u64, u64)> = Vec::new(); // (pivot, vertex vec, companion)
    let mut cycles = Vec::new();
    for (idx, &(u, v, wgt)) in edges.iter().enumerate() {
        if wgt > a {
            continue;
        }
        let mut vert = (1_u64 << u) | (1 << v);
        let mut comp = 1_u64 << idx;
        for &(pivot, row, row_comp) in &vertex_basis {
            if vert & pivot != 0 {
                vert ^= row;
                comp ^= row_comp;
            }
        }
        if vert == 0 {
            cycles.push(comp);
        } else {
            vertex_basis.push((vert & vert.wrapping_neg(), vert, comp));
        }
    }
    cycles
}

/// Boundaries of the triangles with value `<= a`, as edge-space bitmasks.
fn boundary_space(triangles: &[(u64, f64)], a: f64) -> Vec<u64> {
    triangles
        .iter()
        .filter(|&&(_, val)| val <= a)
        .map(|&(mask, _)| mask)
        .collect()
}

/// Dimension-1 persistence pairs from ranks of GF(2) boundary matrices.
///
/// For every pair of distinct weights `a_i <= a_j` the persistent Betti
/// number is `dim Z1(a_i) - dim(Z1(a_i) ∩ B1(a_j))`, with the intersection
/// rank obtained from `rank(A) + rank(B) - rank(A ∪ B)`. The diagram follows
/// by inclusion-exclusion over consecutive thresholds. Supports up to 64
/// edges, plenty for the n <= 8 graphs this oracle is used on.
pub fn h1_oracle(w: &WeightedMatrix, max_scale: f64) -> Vec<(f64, f64)> {
    let edges: Vec<(usize, usize, f64)> = w
        .finite_edges()
        .into_iter()
        .filter(|&(_, _, wgt)| wgt <= max_scale)
        .collect();
    assert!(edges.len() <= 64, "oracle supports at most 64 edges");

    // triangle boundaries as edge bitmasks, valued at their heaviest edge
    let edge_index = |a: usize, b: usize| edges.iter().position(|&(u, v, _)| u == a && v == b);
    let n = w.n();
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let (Some(e1), Some(e2), Some(e3)) =
                    (edge_index(i, j), edge_index(i, k), edge_index(j, k))
                {
                    let val = edges[e1].2.max(edges[e2].2).max(edges[e3].2);
                    triangles.push(((1_u64 << e1) | (1 << e2) | (1 << e3), val));
                }
            }
        }
    }

    let mut thresholds: Vec<f64> = edges.iter().map(|&(_, _, wgt)| wgt).collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let p = thresholds.len();
    if p == 0 {
        return Vec::new();
    }

    // betti[i][j] for i <= j: rank of H1(K_i) -> H1(K_j)
    let persistent_betti = |i: usize, j: usize| -> usize {
        let z = cycle_space(&edges, thresholds[i]);
        let b = boundary_space(&triangles, thresholds[j]);
        let rank_z = gf2_rank(z.iter().copied());
        let rank_b = gf2_rank(b.iter().copied());
        let rank_union = gf2_rank(z.iter().chain(b.iter()).copied());
        let dim_intersection = rank_z + rank_b - rank_union;
        rank_z - dim_intersection
    };
    let mut betti = vec![vec![0_usize; p]; p];
    for (i, row) in betti.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate().skip(i) {
            *cell = persistent_betti(i, j);
        }
    }
    let b = |i: isize, j: usize| -> isize {
        if i < 0 {
            0
        } else {
            betti[i as usize][j] as isize
        }
    };

    let mut pairs = Vec::new();
    for i in 0..p {
        // finite pairs (a_i, a_j), born at i and dead entering j
        for j in i + 1..p {
            let mult = b(i as isize, j - 1) - b(i as isize, j) - b(i as isize - 1, j - 1)
                + b(i as isize - 1, j);
            for _ in 0..mult {
                pairs.push((thresholds[i], thresholds[j]));
            }
        }
        // classes still alive at the last threshold are essential
        let essential = b(i as isize, p - 1) - b(i as isize - 1, p - 1);
        for _ in 0..essential {
            pairs.push((thresholds[i], max_scale));
        }
    }
    sort_pairs(&mut pairs);
    pairs
}

/// Exact minimum-cost perfect matching by exhaustive search with pruning.
fn min_matching_cost(cost: &[Vec<f64>]) -> f64 {
    fn recurse(cost: &[Vec<f64>], row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
        if acc >= *best {
            return;
        }
        if row == cost.len() {
            *best = acc;
            return;
        }
        for col in 0..cost.len() {
            if !used[col] {
                used[col] = true;
                recurse(cost, row + 1, used, acc + cost[row][col], best);
                used[col] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; cost.len()];
    recurse(cost, 0, &mut used, 0.0, &mut best);
    best
}

/// Exact p-Wasserstein distance between two diagrams given as (birth, death)
/// lists, by enumerating every augmented perfect matching.
///
/// Each diagram is padded with one diagonal slot per point of the other
/// side; matching a point to a diagonal slot costs its distance to the
/// diagonal, `|death - birth| / sqrt(2)`, and diagonal-diagonal matches are
/// free.
pub fn wasserstein_oracle(d1: &[(f64, f64)], d2: &[(f64, f64)], p: f64) -> f64 {
    let (k1, k2) = (d1.len(), d2.len());
    let size = k1 + k2;
    if size == 0 {
        return 0.0;
    }
    let diag_cost = |(b, d): (f64, f64)| ((d - b).abs() / 2.0_f64.sqrt()).powf(p);
    let pair_cost = |(b1, d1): (f64, f64), (b2, d2): (f64, f64)| {
        ((b1 - b2).powi(2) + (d1 - d2).powi(2)).sqrt().powf(p)
    };
    let mut cost = vec![vec![0.0; size]; size];
    for i in 0..size {
        for j in 0..size {
            cost[i][j] = match (i < k1, j < k2) {
                (true, true) => pair_cost(d1[i], d2[j]),
                (true, false) => diag_cost(d1[i]),
                (false, true) => diag_cost(d2[j]),
                (false, false) => 0.0,
            };
        }
    }
    min_matching_cost(&cost).powf(1.0 / p)
}

pub fn sort_pairs(pairs: &mut [(f64, f64)]) {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
}

/// Asserts exact multiset equality of two pair lists.
pub fn assert_same_pairs(actual: &[(f64, f64)], expected: &[(f64, f64)], context: &str) {
    let mut a = actual.to_vec();
    let mut e = expected.to_vec();
    sort_pairs(&mut a);
    sort_pairs(&mut e);
    assert_eq!(a, e, "pair multisets differ: {context}");
}

/// Seeded random weight matrix: edge density `density`, weights in
/// `(0, cap]`, occasionally snapped to a coarse grid to exercise ties.
pub fn random_matrix(rng: &mut ChaCha12Rng, n: usize, density: f64, cap: f64) -> WeightedMatrix {
    let mut entries = ndarray::Array2::zeros((n, n));
    let sentinel = cap + 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let w = if rng.random::<f64>() < density {
                let raw = rng.random::<f64>() * cap;
                if rng.random::<f64>() < 0.5 {
                    // snap to multiples of cap/8 so equal weights occur
                    (raw / (cap / 8.0)).ceil() * (cap / 8.0)
                } else {
                    raw.max(cap * 1e-3)
                }
            } else {
                sentinel
            };
            entries[[i, j]] = w;
            entries[[j, i]] = w;
        }
    }
    WeightedMatrix::new(entries, cap).unwrap()
}

/// Seeded random diagram with up to `max_points` points above the diagonal.
pub fn random_diagram(rng: &mut ChaCha12Rng, max_points: usize, scale: f64) -> Vec<(f64, f64)> {
    let count = rng.random_range(0..=max_points);
    (0..count)
        .map(|_| {
            let b = rng.random::<f64>() * scale;
            let d = b + rng.random::<f64>() * (scale - b).max(0.0);
            (b, d)
        })
        .collect()
}

pub fn seeded(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}
