//! Exact treewidth by dynamic programming over sets of eliminated vertices.
//!
//! For an elimination order, the width is the largest number of
//! not-yet-eliminated neighbours a vertex has in the fill-in graph at the
//! moment it is eliminated; the fill-in graph is a chordal extension whose
//! clique number is the width plus one, and the minimum over orders is the
//! treewidth. For a set `S` already eliminated and a vertex `v ∉ S`, the
//! fill-in neighbourhood of `v` consists of the vertices outside `S ∪ {v}`
//! reachable from `v` through `S`, so
//! `TW(S ∪ {v}) = min over v of max(TW(S), |Q(S, v)|)`.
//!
//! A min-fill elimination order gives an upper bound, and brambles passed as
//! hints together with the degeneracy give a lower bound; when they meet no
//! search is needed. States whose value reaches the upper bound are dropped.

use thiserror::Error;

use crate::bramble::{self, Bramble, BrambleError};
use crate::graph::{MultiGraph, Vertex};

/// Largest vertex count the subset table supports.
pub const HARD_LIMIT: usize = 24;
pub const DEFAULT_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreewidthError {
    #[error("graph has {n} vertices; the exact solver is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("elimination order is not a permutation of the vertices")]
    InvalidOrder,
    #[error("bramble hint {index}: {source}")]
    BadHint { index: usize, source: BrambleError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<Vertex>,
    pub width: usize,
}

/// Adjacency of the underlying simple graph as bit masks.
fn adjacency_masks(g: &MultiGraph) -> Vec<u32> {
    let mut adj = vec![0u32; g.vertex_count()];
    for e in g.edges() {
        adj[e.tail] |= 1 << e.head;
        adj[e.head] |= 1 << e.tail;
    }
    adj
}

/// Width of `order` on `g`, by explicit fill-in simulation.
pub fn elimination_width(g: &MultiGraph, order: &[Vertex]) -> Result<usize, TreewidthError> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(TreewidthError::InvalidOrder);
    }
    let mut adj = vec![vec![false; n]; n];
    for e in g.edges() {
        adj[e.tail][e.head] = true;
        adj[e.head][e.tail] = true;
    }
    let mut gone = vec![false; n];
    let mut width = 0;
    for &v in order {
        let nbrs: Vec<Vertex> = (0..n).filter(|&u| !gone[u] && u != v && adj[v][u]).collect();
        width = width.max(nbrs.len());
        for &a in &nbrs {
            for &b in &nbrs {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        gone[v] = true;
    }
    Ok(width)
}

/// The fill-in graph of `order` (simple, edges `(min, max)` sorted).
pub fn chordal_extension(g: &MultiGraph, order: &[Vertex]) -> Result<MultiGraph, TreewidthError> {
    elimination_width(g, order)?;
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for e in g.edges() {
        adj[e.tail][e.head] = true;
        adj[e.head][e.tail] = true;
    }
    let mut gone = vec![false; n];
    for &v in order {
        let nbrs: Vec<Vertex> = (0..n).filter(|&u| !gone[u] && u != v && adj[v][u]).collect();
        for &a in &nbrs {
            for &b in &nbrs {
                if a != b {
                    adj[a][b] = true;
                }
            }
        }
        gone[v] = true;
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if adj[a][b] {
                pairs.push((a, b));
            }
        }
    }
    Ok(MultiGraph::new(n, &pairs).expect("fill-in of a valid graph is valid"))
}

/// Greedy min-fill order (ties to the smaller vertex).
fn min_fill_order(g: &MultiGraph) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut adj = adjacency_masks(g);
    let mut alive: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut order = Vec::with_capacity(n);
    while alive != 0 {
        let mut best = (usize::MAX, 0);
        for v in 0..n {
            if alive & (1 << v) == 0 {
                continue;
            }
            let nb = adj[v] & alive;
            let mut fill = 0;
            for a in 0..n {
                if nb & (1 << a) != 0 {
                    fill += (nb & !adj[a] & !(1 << a)).count_ones() as usize;
                }
            }
            if fill < best.0 {
                best = (fill, v);
            }
        }
        let v = best.1;
        let nb = adj[v] & alive;
        for a in 0..n {
            if nb & (1 << a) != 0 {
                adj[a] |= nb & !(1 << a);
            }
        }
        alive &= !(1 << v);
        order.push(v);
    }
    order
}

/// Maximum over the min-degree deletion sequence of the minimum degree.
fn degeneracy(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let mut alive: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = 0;
    while alive != 0 {
        let (d, v) = (0..n)
            .filter(|&v| alive & (1 << v) != 0)
            .map(|v| ((adj[v] & alive).count_ones() as usize, v))
            .min()
            .expect("alive is nonempty");
        best = best.max(d);
        alive &= !(1 << v);
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreewidthOptions {
    pub max_vertices: usize,
}

impl Default for TreewidthOptions {
    fn default() -> Self {
        TreewidthOptions { max_vertices: DEFAULT_LIMIT }
    }
}

/// Exact treewidth with an optimal elimination order, using the default
/// vertex limit.
pub fn treewidth_exact(g: &MultiGraph, hints: &[Bramble]) -> Result<(usize, EliminationOrder), TreewidthError> {
    treewidth_with(g, hints, TreewidthOptions::default())
}

pub fn treewidth_with(
    g: &MultiGraph,
    hints: &[Bramble],
    options: TreewidthOptions,
) -> Result<(usize, EliminationOrder), TreewidthError> {
    let n = g.vertex_count();
    let limit = options.max_vertices.min(HARD_LIMIT);
    if n > limit {
        return Err(TreewidthError::TooLarge { n, limit });
    }
    let mut lower = degeneracy(g);
    for (index, hint) in hints.iter().enumerate() {
        let (order, _) = bramble::bramble_order(g, hint).map_err(|source| TreewidthError::BadHint { index, source })?;
        lower = lower.max(order.saturating_sub(1));
    }
    let heuristic = min_fill_order(g);
    let upper = elimination_width(g, &heuristic)?;
    if lower >= upper || n <= 1 {
        return Ok((upper, EliminationOrder { order: heuristic, width: upper }));
    }

    let adj = adjacency_masks(g);
    let size = 1usize << n;
    const UNSEEN: u8 = u8::MAX;
    // tw[S] < upper, and the vertex eliminated last to reach S.
    let mut tw = vec![UNSEEN; size];
    let mut last = vec![0u8; size];
    tw[0] = 0;
    let full = (size - 1) as u32;
    for s in 0..size {
        let cur = tw[s];
        if cur == UNSEEN {
            continue;
        }
        let s = s as u32;
        if s == full {
            break;
        }
        for v in 0..n {
            let bit = 1u32 << v;
            if s & bit != 0 {
                continue;
            }
            let q = fill_degree(&adj, s, v);
            let val = cur.max(q as u8);
            if (val as usize) >= upper {
                continue;
            }
            let t = (s | bit) as usize;
            if val < tw[t] {
                tw[t] = val;
                last[t] = v as u8;
            }
        }
    }
    if tw[full as usize] == UNSEEN {
        return Ok((upper, EliminationOrder { order: heuristic, width: upper }));
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let width = tw[full as usize] as usize;
    debug_assert_eq!(elimination_width(g, &order), Ok(width));
    Ok((width, EliminationOrder { order, width }))
}

/// `|Q(S, v)|`: vertices outside `S ∪ {v}` adjacent to the component of `v`
/// in `G[S ∪ {v}]`.
fn fill_degree(adj: &[u32], s: u32, v: usize) -> u32 {
    let mut comp = 1u32 << v;
    let mut frontier = comp;
    let mut reach = 0u32;
    while frontier != 0 {
        let mut nb = 0u32;
        let mut f = frontier;
        while f != 0 {
            let u = f.trailing_zeros() as usize;
            f &= f - 1;
            nb |= adj[u];
        }
        reach |= nb;
        frontier = nb & s & !comp;
        comp |= frontier;
    }
    (reach & !s & !(1u32 << v)).count_ones()
}
