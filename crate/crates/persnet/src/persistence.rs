//! Persistence diagrams of the clique (Vietoris-Rips) filtration.
//!
//! The filtration of a [`WeightedMatrix`] enters every vertex at scale 0,
//! every finite edge at its weight, and every triangle at the weight of its
//! heaviest edge, truncated at the configured max-scale. Classes that never
//! die are reported with their death capped at the max-scale and flagged
//! essential.
//!
//! Dimension 0 is computed by a union-find sweep over the weight-sorted edge
//! list; [`rips_diagrams`] runs the standard left-to-right boundary-matrix
//! reduction over GF(2) and also covers dimension 1.

use std::collections::HashMap;

use crate::graph::WeightedMatrix;
use crate::{Error, Result};

/// Scale and dimension limits of a filtration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiltrationConfig {
    /// Largest scale considered; essential classes die here.
    pub max_scale: f64,
    /// Highest homology dimension computed (0 or 1).
    pub max_dim: usize,
}

impl FiltrationConfig {
    /// Dimension-0 filtration over the full weight range of a matrix.
    pub fn for_matrix(w: &WeightedMatrix) -> Self {
        FiltrationConfig {
            max_scale: w.cap(),
            max_dim: 0,
        }
    }

    pub fn with_max_dim(self, max_dim: usize) -> Self {
        FiltrationConfig { max_dim, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !self.max_scale.is_finite() || self.max_scale <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "max_scale must be positive and finite, got {}",
                self.max_scale
            )));
        }
        if self.max_dim > 1 {
            return Err(Error::InvalidConfig(format!(
                "max_dim must be 0 or 1, got {}",
                self.max_dim
            )));
        }
        Ok(())
    }
}

/// One birth-death pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    /// True when the class outlived the filtration and its death is the
    /// max-scale cap rather than an actual merge or fill-in.
    pub essential: bool,
}

/// All pairs of one homology dimension, sorted by (birth, death).
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceDiagram {
    dim: usize,
    pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    fn new(dim: usize, mut pairs: Vec<PersistencePair>) -> Self {
        pairs.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
                .then(a.essential.cmp(&b.essential))
        });
        debug_assert!(pairs.iter().all(|p| p.birth <= p.death));
        PersistenceDiagram { dim, pairs }
    }

    /// Builds a diagram from raw (birth, death) tuples, none marked
    /// essential.
    pub fn from_pairs(dim: usize, pairs: Vec<(f64, f64)>) -> Result<Self> {
        for &(b, d) in &pairs {
            if !b.is_finite() || !d.is_finite() || d < b {
                return Err(Error::InvalidInput(format!(
                    "invalid diagram pair ({b}, {d})"
                )));
            }
        }
        Ok(PersistenceDiagram::new(
            dim,
            pairs
                .into_iter()
                .map(|(birth, death)| PersistencePair {
                    birth,
                    death,
                    essential: false,
                })
                .collect(),
        ))
    }

    /// Homology dimension of the diagram.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Pairs sorted by (birth, death).
    pub fn pairs(&self) -> &[PersistencePair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The pairs as plain (birth, death) tuples, sorted.
    pub fn as_tuples(&self) -> Vec<(f64, f64)> {
        self.pairs.iter().map(|p| (p.birth, p.death)).collect()
    }

    /// Number of classes alive at scale `a`.
    ///
    /// A pair is alive when `birth <= a` and either `a < death` or the pair
    /// is essential (an essential class is still alive at the cap itself).
    pub fn betti_at(&self, a: f64) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.birth <= a && (a < p.death || p.essential))
            .count()
    }

    /// JSON value `{"dim": d, "pairs": [[b, d], ...]}` with sorted pairs.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "pairs": self.pairs.iter().map(|p| [p.birth, p.death]).collect::<Vec<_>>(),
        })
    }
}

/// Disjoint-set forest with path halving.
struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Merges the two sets; keeps the smaller root as representative.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, absorb) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[absorb as usize] = keep;
        true
    }
}

/// Dimension-0 diagram by a union-find sweep over weight-sorted edges.
///
/// Every vertex is born at 0; each merge of two components contributes a
/// `(0, weight)` pair, and every component alive at the end contributes an
/// essential `(0, max_scale)` pair, so the diagram always has exactly `n`
/// pairs.
pub fn h0_diagram(w: &WeightedMatrix, cfg: &FiltrationConfig) -> Result<PersistenceDiagram> {
    cfg.validate()?;
    let n = w.n();
    let mut edges: Vec<(f64, u32, u32)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let wgt = w.get(i, j);
            if wgt <= w.cap() && wgt <= cfg.max_scale {
                edges.push((wgt, i as u32, j as u32));
            }
        }
    }
    edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut uf = UnionFind::new(n);
    let mut pairs = Vec::with_capacity(n);
    for &(wgt, i, j) in &edges {
        if uf.union(i, j) {
            pairs.push(PersistencePair {
                birth: 0.0,
                death: wgt,
                essential: false,
            });
        }
    }
    let survivors = n - pairs.len();
    for _ in 0..survivors {
        pairs.push(PersistencePair {
            birth: 0.0,
            death: cfg.max_scale,
            essential: true,
        });
    }
    Ok(PersistenceDiagram::new(0, pairs))
}

/// A simplex of the clique filtration, identified by its sorted vertices.
struct Simplex {
    value: f64,
    dim: u8,
    verts: [u32; 3],
}

/// Persistence diagrams of dimensions `0..=max_dim` by boundary-matrix
/// reduction.
///
/// Simplices are ordered by (value, dimension, vertex tuple) and columns are
/// reduced left to right over GF(2). The dimension-0 result always equals
/// [`h0_diagram`]; dimension-1 pairs with zero persistence are dropped
/// unless essential.
pub fn rips_diagrams(
    w: &WeightedMatrix,
    cfg: &FiltrationConfig,
) -> Result<Vec<PersistenceDiagram>> {
    cfg.validate()?;
    let n = w.n();
    let in_range = |wgt: f64| wgt <= w.cap() && wgt <= cfg.max_scale;

    let mut simplices: Vec<Simplex> = Vec::new();
    for v in 0..n as u32 {
        simplices.push(Simplex {
            value: 0.0,
            dim: 0,
            verts: [v, 0, 0],
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let wgt = w.get(i, j);
            if in_range(wgt) {
                simplices.push(Simplex {
                    value: wgt,
                    dim: 1,
                    verts: [i as u32, j as u32, 0],
                });
            }
        }
    }
    if cfg.max_dim >= 1 {
        // triangles via sorted adjacency intersection
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, neighbors) in adjacency.iter_mut().enumerate() {
            for j in i + 1..n {
                if in_range(w.get(i, j)) {
                    neighbors.push(j as u32);
                }
            }
        }
        for i in 0..n {
            for (a, &j) in adjacency[i].iter().enumerate() {
                for &k in &adjacency[i][a + 1..] {
                    if adjacency[j as usize].binary_search(&k).is_ok() {
                        let value = w
                            .get(i, j as usize)
                            .max(w.get(i, k as usize))
                            .max(w.get(j as usize, k as usize));
                        simplices.push(Simplex {
                            value,
                            dim: 2,
                            verts: [i as u32, j, k],
                        });
                    }
                }
            }
        }
    }

    simplices.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then(a.dim.cmp(&b.dim))
            .then(a.verts.cmp(&b.verts))
    });

    // vertex v sits at index v because all vertices share (value 0, dim 0)
    let mut edge_index: HashMap<(u32, u32), u32> = HashMap::new();
    for (idx, s) in simplices.iter().enumerate() {
        if s.dim == 1 {
            edge_index.insert((s.verts[0], s.verts[1]), idx as u32);
        }
    }

    let total = simplices.len();
    let mut owner: Vec<Option<u32>> = vec![None; total];
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(total);
    for (j, s) in simplices.iter().enumerate() {
        let mut col: Vec<u32> = match s.dim {
            0 => Vec::new(),
            1 => vec![s.verts[0], s.verts[1]],
            _ => {
                let mut c = vec![
                    edge_index[&(s.verts[0], s.verts[1])],
                    edge_index[&(s.verts[0], s.verts[2])],
                    edge_index[&(s.verts[1], s.verts[2])],
                ];
                c.sort_unstable();
                c
            }
        };
        while let Some(&low) = col.last() {
            match owner[low as usize] {
                None => break,
                Some(k) => col = add_columns(&col, &reduced[k as usize]),
            }
        }
        if let Some(&low) = col.last() {
            owner[low as usize] = Some(j as u32);
        }
        reduced.push(col);
    }

    let mut diagrams: Vec<Vec<PersistencePair>> = vec![Vec::new(); cfg.max_dim + 1];
    for (j, s) in simplices.iter().enumerate() {
        if let Some(&low) = reduced[j].last() {
            // column j kills the class created by simplex `low`
            let creator = &simplices[low as usize];
            let dim = creator.dim as usize;
            if dim <= cfg.max_dim && (dim == 0 || creator.value != s.value) {
                diagrams[dim].push(PersistencePair {
                    birth: creator.value,
                    death: s.value,
                    essential: false,
                });
            }
        } else if owner[j].is_none() && (s.dim as usize) <= cfg.max_dim {
            diagrams[s.dim as usize].push(PersistencePair {
                birth: s.value,
                death: cfg.max_scale,
                essential: true,
            });
        }
    }
    Ok(diagrams
        .into_iter()
        .enumerate()
        .map(|(dim, pairs)| PersistenceDiagram::new(dim, pairs))
        .collect())
}

/// Symmetric difference of two ascending index lists.
fn add_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => {
                out.push(a[x]);
                x += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[y]);
                y += 1;
            }
            std::cmp::Ordering::Equal => {
                x += 1;
                y += 1;
            }
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
    out
}
