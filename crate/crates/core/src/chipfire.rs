//! Divisors, set-firing, reduced divisors and rank.
//!
//! Reduction uses Dhar's burning procedure: a fire starts at the base vertex
//! and spreads through edges; a vertex catches fire once the number of burning
//! edges reaching it exceeds its chips. If some vertices stay unburnt, that set
//! can fire legally and we fire it (as many times in a row as stays legal), then
//! burn again. When everything burns the divisor is reduced.
//!
//! `reduce` also accepts divisors that are negative away from the base vertex:
//! it first fires the balls `{u : dist(q, u) < r}` (outermost `r` first) until
//! every vertex other than `q` is nonnegative, then burns. The result is the
//! unique `q`-reduced form; it is effective iff the input is equivalent to an
//! effective divisor.

use std::fmt;
use std::ops::{Index, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{check_len, GraphError, MultiGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChipError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("illegal move: vertex {vertex} has {chips} chips but {needed} edges leave the set")]
    IllegalMove { vertex: Vertex, chips: i64, needed: i64 },
    #[error("a legal move needs a nonempty proper subset of the vertices")]
    EmptyOrFullSet,
    #[error("divisor is not effective")]
    NotEffective,
    #[error("divisors are not equivalent")]
    NotEquivalent,
    #[error("divisors are equal")]
    EqualDivisors,
    #[error("divisor is not equivalent to an effective divisor")]
    NoEffectiveRepresentative,
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex set is not a strong separator")]
    NotAStrongSeparator,
    #[error("separator certificate accepted a divisor without positive rank")]
    CertificateContradiction,
}

/// Integer chip counts indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(values: Vec<i64>) -> Self {
        Divisor(values)
    }

    pub fn zero(n: usize) -> Self {
        Divisor(vec![0; n])
    }

    /// `1_{set}`; repeated vertices add up.
    pub fn indicator(n: usize, set: &[Vertex]) -> Self {
        let mut d = vec![0; n];
        for &v in set {
            d[v] += 1;
        }
        Divisor(d)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn support(&self) -> Vec<Vertex> {
        (0..self.0.len()).filter(|&v| self.0[v] != 0).collect()
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn with_added(&self, v: Vertex, c: i64) -> Divisor {
        let mut d = self.0.clone();
        d[v] += c;
        Divisor(d)
    }
}

impl Index<Vertex> for Divisor {
    type Output = i64;
    fn index(&self, v: Vertex) -> &i64 {
        &self.0[v]
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A firing script `x`: `D` becomes `D - Qx`. Scripts differing by a
/// constant vector act identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiringScript {
    pub script: Vec<i64>,
}

impl FiringScript {
    pub fn new(script: Vec<i64>) -> Self {
        FiringScript { script }
    }

    pub fn zero(n: usize) -> Self {
        FiringScript { script: vec![0; n] }
    }

    /// Shifted so that the minimum entry is 0.
    pub fn normalized(mut self) -> Self {
        if let Some(&m) = self.script.iter().min() {
            self.script.iter_mut().for_each(|x| *x -= m);
        }
        self
    }

    pub fn is_zero_mod_constants(&self) -> bool {
        self.script.windows(2).all(|w| w[0] == w[1])
    }
}

/// `U_1 ⊆ U_2 ⊆ ... ⊆ U_k`, each a sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelChain {
    pub chain: Vec<Vec<Vertex>>,
}

impl LevelChain {
    /// `D_t = D - Q(1_{U_1} + ... + 1_{U_t})` for `t = 1..=k`.
    pub fn intermediates(&self, g: &MultiGraph, d: &Divisor) -> Result<Vec<Divisor>, ChipError> {
        let mut cur = d.clone();
        let mut out = Vec::with_capacity(self.chain.len());
        for set in &self.chain {
            cur = fire_set(g, &cur, set, false)?;
            out.push(cur.clone());
        }
        Ok(out)
    }
}

fn check_divisor(g: &MultiGraph, d: &Divisor) -> Result<(), ChipError> {
    check_len(g.vertex_count(), d.len())?;
    Ok(())
}

fn check_vertex(g: &MultiGraph, v: Vertex) -> Result<(), ChipError> {
    if v < g.vertex_count() {
        Ok(())
    } else {
        Err(GraphError::NoSuchVertex(v).into())
    }
}

/// `D - Q 1_U`. With `require_legal`, U must be a nonempty proper subset,
/// `D` effective, and every `u ∈ U` must hold at least as many chips as it
/// has edges leaving `U`.
pub fn fire_set(g: &MultiGraph, d: &Divisor, set: &[Vertex], require_legal: bool) -> Result<Divisor, ChipError> {
    check_divisor(g, d)?;
    for &v in set {
        check_vertex(g, v)?;
    }
    let mask = g.mask_of(set);
    let size = mask.iter().filter(|&&b| b).count();
    if require_legal {
        if size == 0 || size == g.vertex_count() {
            return Err(ChipError::EmptyOrFullSet);
        }
        if !d.is_effective() {
            return Err(ChipError::NotEffective);
        }
    }
    let mut out = d.0.clone();
    let mut outgoing = vec![0i64; g.vertex_count()];
    for e in g.edges() {
        if mask[e.tail] != mask[e.head] {
            let (inside, outside) = if mask[e.tail] { (e.tail, e.head) } else { (e.head, e.tail) };
            outgoing[inside] += 1;
            out[inside] -= 1;
            out[outside] += 1;
        }
    }
    if require_legal {
        for v in 0..g.vertex_count() {
            if mask[v] && d[v] < outgoing[v] {
                return Err(ChipError::IllegalMove { vertex: v, chips: d[v], needed: outgoing[v] });
            }
        }
    }
    Ok(Divisor(out))
}

/// `D - Qx`.
pub fn apply_script(g: &MultiGraph, d: &Divisor, x: &FiringScript) -> Result<Divisor, ChipError> {
    check_divisor(g, d)?;
    let qx = g.laplacian_apply(&x.script)?;
    Ok(Divisor(d.0.iter().zip(qx).map(|(a, b)| a - b).collect()))
}

/// Vertices left unburnt by a fire started at `q`. Requires `d[u] >= 0` for
/// `u != q`.
fn unburnt(g: &MultiGraph, d: &[i64], q: Vertex) -> Vec<bool> {
    let n = g.vertex_count();
    let mut burnt = vec![false; n];
    let mut hits = vec![0i64; n];
    burnt[q] = true;
    let mut stack = vec![q];
    while let Some(w) = stack.pop() {
        for &(u, _) in g.incident(w) {
            if !burnt[u] {
                hits[u] += 1;
                if hits[u] > d[u] {
                    burnt[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    burnt.iter().map(|b| !b).collect()
}

/// Whether the effective divisor `d` is `v`-reduced.
pub fn is_reduced(g: &MultiGraph, d: &Divisor, v: Vertex) -> Result<bool, ChipError> {
    check_divisor(g, d)?;
    check_vertex(g, v)?;
    g.ensure_connected()?;
    if !d.is_effective() {
        return Err(ChipError::NotEffective);
    }
    Ok(unburnt(g, &d.0, v).iter().all(|&b| !b))
}

/// Fires `mask` as `times` consecutive set-firings, updating `d` and `x`.
fn fire_mask(g: &MultiGraph, d: &mut [i64], x: &mut [i64], mask: &[bool], times: i64) {
    for e in g.edges() {
        if mask[e.tail] != mask[e.head] {
            let (inside, outside) = if mask[e.tail] { (e.tail, e.head) } else { (e.head, e.tail) };
            d[inside] -= times;
            d[outside] += times;
        }
    }
    for (xv, &m) in x.iter_mut().zip(mask) {
        if m {
            *xv += times;
        }
    }
}

/// The unique `q`-reduced divisor equivalent to `d`, with a script `x`
/// (normalized to minimum 0) such that `d - Qx` is that divisor.
pub fn reduce(g: &MultiGraph, d: &Divisor, q: Vertex) -> Result<(Divisor, FiringScript), ChipError> {
    check_divisor(g, d)?;
    check_vertex(g, q)?;
    g.ensure_connected()?;
    let n = g.vertex_count();
    let mut cur = d.0.clone();
    let mut x = vec![0i64; n];

    let dist = g.distances_from(q);
    let max_dist = dist.iter().copied().max().unwrap_or(0);
    for r in (1..=max_dist).rev() {
        let deficit = (0..n).filter(|&u| dist[u] == r).map(|u| -cur[u]).max().unwrap_or(0);
        if deficit > 0 {
            let ball: Vec<bool> = dist.iter().map(|&du| du < r).collect();
            fire_mask(g, &mut cur, &mut x, &ball, deficit);
        }
    }

    loop {
        let mask = unburnt(g, &cur, q);
        if mask.iter().all(|&b| !b) {
            break;
        }
        let mut outgoing = vec![0i64; n];
        for e in g.edges() {
            if mask[e.tail] != mask[e.head] {
                outgoing[if mask[e.tail] { e.tail } else { e.head }] += 1;
            }
        }
        let times = (0..n)
            .filter(|&u| mask[u] && outgoing[u] > 0)
            .map(|u| cur[u] / outgoing[u])
            .min()
            .expect("a connected graph has a cut edge");
        debug_assert!(times >= 1);
        fire_mask(g, &mut cur, &mut x, &mask, times);
    }
    Ok((Divisor(cur), FiringScript::new(x).normalized()))
}

/// A script `x` with `d - Qx = e` when the divisors are equivalent.
pub fn equivalent(g: &MultiGraph, d: &Divisor, e: &Divisor) -> Result<Option<FiringScript>, ChipError> {
    check_divisor(g, d)?;
    check_divisor(g, e)?;
    g.ensure_connected()?;
    if d.degree() != e.degree() {
        return Ok(None);
    }
    let (rd, xd) = reduce(g, d, 0)?;
    let (re, xe) = reduce(g, e, 0)?;
    if rd != re {
        return Ok(None);
    }
    let x: Vec<i64> = xd.script.iter().zip(&xe.script).map(|(a, b)| a - b).collect();
    Ok(Some(FiringScript::new(x).normalized()))
}

/// The level-set chain leading from `d` to `d0` through effective divisors.
pub fn chain_decompose(g: &MultiGraph, d: &Divisor, d0: &Divisor) -> Result<LevelChain, ChipError> {
    check_divisor(g, d)?;
    check_divisor(g, d0)?;
    if !d.is_effective() || !d0.is_effective() {
        return Err(ChipError::NotEffective);
    }
    if d == d0 {
        return Err(ChipError::EqualDivisors);
    }
    let x = equivalent(g, d, d0)?.ok_or(ChipError::NotEquivalent)?;
    let k = x.script.iter().copied().max().unwrap_or(0);
    let chain = (1..=k)
        .map(|i| (0..g.vertex_count()).filter(|&v| x.script[v] >= k - i + 1).collect())
        .collect();
    Ok(LevelChain { chain })
}

/// Whether some effective divisor equivalent to `d` has a chip on `v`.
pub fn covers(g: &MultiGraph, d: &Divisor, v: Vertex) -> Result<bool, ChipError> {
    let (r, _) = reduce(g, d, v)?;
    if r[v] < 0 {
        return Err(ChipError::NoEffectiveRepresentative);
    }
    Ok(r[v] >= 1)
}

/// Rank at least one: every vertex is covered.
pub fn has_positive_rank(g: &MultiGraph, d: &Divisor) -> Result<bool, ChipError> {
    check_divisor(g, d)?;
    g.ensure_connected()?;
    for v in 0..g.vertex_count() {
        let (r, _) = reduce(g, d, v)?;
        if r[v] < 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn equivalent_to_effective(g: &MultiGraph, d: &[i64]) -> Result<bool, ChipError> {
    let (r, _) = reduce(g, &Divisor(d.to_vec()), 0)?;
    Ok(r[0] >= 0)
}

/// Visits every effective divisor of degree `k` (as a chip vector) in
/// lexicographic order, stopping early when `visit` returns false.
pub(crate) fn for_each_effective(n: usize, k: i64, mut visit: impl FnMut(&[i64]) -> bool) -> bool {
    fn rec(pos: usize, left: i64, cur: &mut Vec<i64>, visit: &mut dyn FnMut(&[i64]) -> bool) -> bool {
        let n = cur.len();
        if pos + 1 == n {
            cur[pos] = left;
            let keep = visit(cur);
            cur[pos] = 0;
            return keep;
        }
        for c in (0..=left).rev() {
            cur[pos] = c;
            if !rec(pos + 1, left - c, cur, visit) {
                cur[pos] = 0;
                return false;
            }
        }
        cur[pos] = 0;
        true
    }
    if n == 0 {
        return if k == 0 { visit(&[]) } else { true };
    }
    let mut cur = vec![0; n];
    rec(0, k, &mut cur, &mut visit)
}

/// Exact rank: the largest `k` such that `d - e` is equivalent to an
/// effective divisor for every effective `e` of degree `k`; `-1` when `d`
/// itself is not.
pub fn rank(g: &MultiGraph, d: &Divisor) -> Result<i64, ChipError> {
    check_divisor(g, d)?;
    g.ensure_connected()?;
    if d.degree() < 0 || !equivalent_to_effective(g, &d.0)? {
        return Ok(-1);
    }
    let n = g.vertex_count();
    for k in 1..=d.degree() {
        let mut failure: Option<ChipError> = None;
        let all = for_each_effective(n, k, |e| {
            let diff: Vec<i64> = d.0.iter().zip(e).map(|(a, b)| a - b).collect();
            match equivalent_to_effective(g, &diff) {
                Ok(ok) => ok,
                Err(err) => {
                    failure = Some(err);
                    false
                }
            }
        });
        if let Some(err) = failure {
            return Err(err);
        }
        if !all {
            return Ok(k - 1);
        }
    }
    Ok(d.degree())
}

/// Whether every component of `G - S` is a tree attached to each `s ∈ S` by
/// at most one edge.
pub fn is_strong_separator(g: &MultiGraph, set: &[Vertex]) -> Result<bool, ChipError> {
    for &v in set {
        check_vertex(g, v)?;
    }
    if set.is_empty() {
        return Err(ChipError::EmptySet);
    }
    let in_s = g.mask_of(set);
    let rest: Vec<bool> = in_s.iter().map(|b| !b).collect();
    let mut comp_of = vec![usize::MAX; g.vertex_count()];
    let comps = g.components_within(&rest);
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut inner = vec![0usize; comps.len()];
    // (separator vertex, component) -> number of edges
    let mut attach = std::collections::HashMap::new();
    for e in g.edges() {
        match (in_s[e.tail], in_s[e.head]) {
            (false, false) => inner[comp_of[e.tail]] += 1,
            (true, false) => *attach.entry((e.tail, comp_of[e.head])).or_insert(0) += 1,
            (false, true) => *attach.entry((e.head, comp_of[e.tail])).or_insert(0) += 1,
            (true, true) => {}
        }
    }
    let trees = comps.iter().zip(&inner).all(|(c, &m)| m + 1 == c.len());
    Ok(trees && attach.values().all(|&c| c <= 1))
}

/// Positive-rank certificate from a strong separator: true when `d` covers
/// every vertex of `set`. False is inconclusive.
pub fn separator_rank_certificate(g: &MultiGraph, d: &Divisor, set: &[Vertex]) -> Result<bool, ChipError> {
    check_divisor(g, d)?;
    g.ensure_connected()?;
    if !is_strong_separator(g, set)? {
        return Err(ChipError::NotAStrongSeparator);
    }
    for &s in set {
        let (r, _) = reduce(g, d, s)?;
        if r[s] < 1 {
            return Ok(false);
        }
    }
    if !has_positive_rank(g, d)? {
        return Err(ChipError::CertificateContradiction);
    }
    Ok(true)
}
