//! Named graph families with frozen vertex and edge numbering.
//!
//! * `path(n)`: vertices `0..n` in order, edges `(i, i+1)`.
//! * `cycle(n)`: the path plus the closing edge `(n-1, 0)`.
//! * `complete(n)`: edges `(i, j)` for `i < j` in lexicographic order.
//! * `complete_multipartite(sizes)`: parts are consecutive blocks in the
//!   given order; edges `(i, j)`, `i < j`, between different blocks, in
//!   lexicographic order.
//! * `grid(rows, cols)`: vertex `(r, c)` (0-based) is `r * cols + c`. All
//!   horizontal edges `(v, v+1)` row by row come first, then all vertical
//!   edges `(v, v+cols)` row by row.
//! * `hypercube(d)`: vertex ids are the binary words; edge `(x, x | 1<<i)`
//!   for every `x` with bit `i` clear, ordered by `x` then `i`.
//! * `banana(k)`: two vertices joined by `k` parallel edges `(0, 1)`.
//! * `tree(seed, n)`: vertex `i >= 1` hangs off a uniformly random earlier
//!   vertex, drawn from a ChaCha8 stream seeded with `seed`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphError, MultiGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    RandomTree { seed: u64, n: usize },
    Path(usize),
    Cycle(usize),
    Complete(usize),
    CompleteMultipartite(Vec<usize>),
    Grid { rows: usize, cols: usize },
    Hypercube(u32),
    Banana(usize),
}

impl FamilySpec {
    pub fn generate(&self) -> Result<MultiGraph, FamilyError> {
        match self {
            FamilySpec::RandomTree { seed, n } => random_tree(*seed, *n),
            FamilySpec::Path(n) => path(*n),
            FamilySpec::Cycle(n) => cycle(*n),
            FamilySpec::Complete(n) => complete(*n),
            FamilySpec::CompleteMultipartite(sizes) => complete_multipartite(sizes),
            FamilySpec::Grid { rows, cols } => grid(*rows, *cols),
            FamilySpec::Hypercube(d) => hypercube(*d),
            FamilySpec::Banana(k) => banana(*k),
        }
    }
}

fn invalid(msg: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParameters(msg.into())
}

pub fn path(n: usize) -> Result<MultiGraph, FamilyError> {
    if n == 0 {
        return Err(invalid("path needs at least one vertex"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(MultiGraph::new(n, &edges)?)
}

pub fn cycle(n: usize) -> Result<MultiGraph, FamilyError> {
    if n < 3 {
        return Err(invalid("cycle needs at least three vertices"));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Ok(MultiGraph::new(n, &edges)?)
}

pub fn complete(n: usize) -> Result<MultiGraph, FamilyError> {
    if n == 0 {
        return Err(invalid("complete graph needs at least one vertex"));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j));
        }
    }
    Ok(MultiGraph::new(n, &edges)?)
}

/// First vertex id of each part of `complete_multipartite(sizes)`.
pub fn part_offsets(sizes: &[usize]) -> Vec<Vertex> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect()
}

pub fn complete_multipartite(sizes: &[usize]) -> Result<MultiGraph, FamilyError> {
    if sizes.len() < 2 {
        return Err(invalid("complete multipartite graph needs at least two parts"));
    }
    if sizes.contains(&0) {
        return Err(invalid("every part must be nonempty"));
    }
    let n: usize = sizes.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (p, &s) in sizes.iter().enumerate() {
        part.extend(std::iter::repeat(p).take(s));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if part[i] != part[j] {
                edges.push((i, j));
            }
        }
    }
    Ok(MultiGraph::new(n, &edges)?)
}

pub fn grid(rows: usize, cols: usize) -> Result<MultiGraph, FamilyError> {
    if rows == 0 || cols == 0 {
        return Err(invalid("grid dimensions must be positive"));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols - 1 {
            edges.push((id(r, c), id(r, c + 1)));
        }
    }
    for r in 0..rows - 1 {
        for c in 0..cols {
            edges.push((id(r, c), id(r + 1, c)));
        }
    }
    Ok(MultiGraph::new(rows * cols, &edges)?)
}

pub fn hypercube(d: u32) -> Result<MultiGraph, FamilyError> {
    if d == 0 || d > 16 {
        return Err(invalid("hypercube dimension must be in 1..=16"));
    }
    let n = 1usize << d;
    let mut edges = Vec::new();
    for x in 0..n {
        for i in 0..d {
            let bit = 1usize << i;
            if x & bit == 0 {
                edges.push((x, x | bit));
            }
        }
    }
    Ok(MultiGraph::new(n, &edges)?)
}

pub fn banana(k: usize) -> Result<MultiGraph, FamilyError> {
    if k == 0 {
        return Err(invalid("banana graph needs at least one edge"));
    }
    Ok(MultiGraph::new(2, &vec![(0, 1); k])?)
}

pub fn random_tree(seed: u64, n: usize) -> Result<MultiGraph, FamilyError> {
    if n == 0 {
        return Err(invalid("tree needs at least one vertex"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    Ok(MultiGraph::new(n, &edges)?)
}

/// A random connected multigraph with `n` vertices and `m >= n - 1` edges:
/// a random spanning tree plus `m - n + 1` extra edges. With `simple`, extra
/// edges avoid existing adjacencies (and `m` is capped at `n(n-1)/2`).
/// Vertex ids are shuffled and every edge gets a random orientation.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, m: usize, simple: bool) -> MultiGraph {
    assert!(n >= 1);
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(Vertex, Vertex)> = (1..n).map(|i| (perm[rng.gen_range(0..i)], perm[i])).collect();
    let cap = if simple { n * (n - 1) / 2 } else { usize::MAX };
    let target = m.max(n - 1).min(cap);
    if n >= 2 {
        while edges.len() < target {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u == v {
                continue;
            }
            if simple && edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)) {
                continue;
            }
            edges.push((u, v));
        }
    }
    edges.shuffle(rng);
    for e in edges.iter_mut() {
        if rng.gen_bool(0.5) {
            *e = (e.1, e.0);
        }
    }
    MultiGraph::new(n, &edges).expect("generated edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let g = grid(2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
        let oct = complete_multipartite(&[2, 2, 2]).unwrap();
        assert_eq!((oct.vertex_count(), oct.edge_count()), (6, 12));
        let q3 = hypercube(3).unwrap();
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));
        assert!(q3.edges().iter().all(|e| (e.tail ^ e.head).count_ones() == 1));
        assert_eq!(banana(3).unwrap().circuit_rank(), 2);
        assert_eq!(complete(5).unwrap().edge_count(), 10);
        assert_eq!(cycle(4).unwrap().circuit_rank(), 1);
    }

    #[test]
    fn grid_numbering_is_row_major() {
        let g = grid(2, 3).unwrap();
        assert_eq!(g.edge_pairs(), vec![(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]);
    }

    #[test]
    fn random_trees_are_reproducible() {
        let a = random_tree(7, 10).unwrap();
        let b = random_tree(7, 10).unwrap();
        assert_eq!(a, b);
        assert!(a.is_connected());
        assert_eq!(a.circuit_rank(), 0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(complete_multipartite(&[3]), Err(FamilyError::InvalidParameters(_))));
        assert!(matches!(complete_multipartite(&[1, 0]), Err(FamilyError::InvalidParameters(_))));
        assert!(matches!(grid(0, 3), Err(FamilyError::InvalidParameters(_))));
        assert!(matches!(cycle(2), Err(FamilyError::InvalidParameters(_))));
    }

    #[test]
    fn random_connected_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = random_connected(&mut rng, 6, 9, true);
            assert!(g.is_connected());
            assert!(g.is_simple());
            assert_eq!(g.edge_count(), 9);
            let h = random_connected(&mut rng, 4, 8, false);
            assert!(h.is_connected());
            assert_eq!(h.edge_count(), 8);
        }
    }
}
