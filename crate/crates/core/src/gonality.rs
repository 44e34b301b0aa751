//! Exact divisorial gonality.
//!
//! Every positive-rank class of degree `k` contains exactly one
//! `q`-reduced divisor, and that divisor has a chip on `q`. So degree `k` is
//! decided by scanning the effective degree-`k` chip vectors with `D(q) >= 1`
//! in lexicographic order, keeping the `q`-reduced ones and testing each for
//! positive rank. Degrees are processed in increasing order; within a degree
//! candidates are checked in parallel and the lexicographically first witness
//! wins, so the result does not depend on scheduling.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::chipfire::{self, ChipError, Divisor};
use crate::graph::{GraphError, MultiGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GonalityError {
    #[error(transparent)]
    Chip(#[from] ChipError),
    #[error("no positive-rank divisor of degree <= {cap} (examined {examined} candidates)")]
    CapExceeded { cap: i64, examined: u64 },
}

impl From<GraphError> for GonalityError {
    fn from(e: GraphError) -> Self {
        GonalityError::Chip(e.into())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Effective chip vectors generated (before the reducedness filter).
    pub generated: u64,
    /// Reduced candidates tested for positive rank.
    pub examined: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GonalityResult {
    pub value: i64,
    pub witness: Divisor,
    pub stats: SearchStats,
}

/// Iterator over the `q`-reduced effective divisors of degree `k` with at
/// least one chip on `q`, in lexicographic order of chip vectors.
pub struct ReducedDivisors<'g> {
    graph: &'g MultiGraph,
    q: Vertex,
    /// Next chip vector to consider, in descending-lexicographic
    /// composition order; `None` once exhausted.
    next: Option<Vec<i64>>,
    generated: u64,
}

impl<'g> ReducedDivisors<'g> {
    pub fn generated(&self) -> u64 {
        self.generated
    }
}

/// Successor of a composition of `k` into `n` parts in the order
/// `(k,0,..,0), (k-1,1,0,..), ...`, i.e. decreasing lexicographic.
fn next_composition(c: &mut [i64]) -> bool {
    let n = c.len();
    if n < 2 {
        return false;
    }
    // Find the rightmost position (excluding the last) with a positive entry.
    let last = c[n - 1];
    c[n - 1] = 0;
    let Some(i) = (0..n - 1).rev().find(|&i| c[i] > 0) else {
        c[n - 1] = last;
        return false;
    };
    c[i] -= 1;
    c[i + 1] = last + 1;
    true
}

impl Iterator for ReducedDivisors<'_> {
    type Item = Divisor;

    fn next(&mut self) -> Option<Divisor> {
        loop {
            let cur = self.next.as_mut()?;
            let candidate = cur.clone();
            if !next_composition(cur) {
                self.next = None;
            }
            self.generated += 1;
            if candidate[self.q] < 1 {
                continue;
            }
            let d = Divisor::new(candidate);
            if chipfire::is_reduced(self.graph, &d, self.q).expect("validated graph and divisor") {
                return Some(d);
            }
        }
    }
}

/// The `q`-reduced effective divisors of degree `k` with a chip on `q`.
pub fn enumerate_reduced_divisors(g: &MultiGraph, q: Vertex, k: i64) -> Result<ReducedDivisors<'_>, GonalityError> {
    g.ensure_connected()?;
    if q >= g.vertex_count() {
        return Err(GraphError::NoSuchVertex(q).into());
    }
    let next = (k >= 1).then(|| {
        let mut first = vec![0; g.vertex_count()];
        first[0] = k;
        first
    });
    Ok(ReducedDivisors { graph: g, q, next, generated: 0 })
}

/// Default search cap: `g + 1` always bounds gonality; simple graphs with at
/// least two vertices are also bounded by `|V| - 1`.
pub fn default_cap(g: &MultiGraph) -> i64 {
    let genus_bound = g.circuit_rank() as i64 + 1;
    if g.is_simple() && g.vertex_count() >= 2 {
        genus_bound.min(g.vertex_count() as i64 - 1).max(1)
    } else {
        genus_bound
    }
}

pub fn gonality(g: &MultiGraph, cap: Option<i64>) -> Result<GonalityResult, GonalityError> {
    gonality_from(g, 0, cap)
}

/// Gonality using base vertex `q` for the reduced-divisor enumeration.
pub fn gonality_from(g: &MultiGraph, q: Vertex, cap: Option<i64>) -> Result<GonalityResult, GonalityError> {
    g.ensure_connected()?;
    let cap = cap.unwrap_or_else(|| default_cap(g));
    let start = Instant::now();
    let mut stats = SearchStats::default();
    for k in 1..=cap {
        let mut it = enumerate_reduced_divisors(g, q, k)?;
        let candidates: Vec<Divisor> = it.by_ref().collect();
        stats.generated += it.generated();
        stats.examined += candidates.len() as u64;
        let found = candidates
            .par_iter()
            .map(|d| chipfire::has_positive_rank(g, d).map(|ok| ok.then(|| d.clone())))
            .find_first(|r| !matches!(r, Ok(None)));
        match found {
            Some(Ok(Some(witness))) => {
                stats.elapsed = start.elapsed();
                return Ok(GonalityResult { value: k, witness, stats });
            }
            Some(Err(e)) => return Err(e.into()),
            _ => {}
        }
    }
    Err(GonalityError::CapExceeded { cap, examined: stats.examined })
}

/// Whether `d` certifies `dgon(G) <= deg(d)`: effective with positive rank.
pub fn gonality_upper_witness(g: &MultiGraph, d: &Divisor) -> Result<bool, GonalityError> {
    Ok(d.is_effective() && chipfire::has_positive_rank(g, d)?)
}
