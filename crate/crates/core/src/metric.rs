//! Metric graphs with rational edge lengths.
//!
//! Points are vertices or interior points of edges, the latter given by the
//! distance `offset` from the tail. A piecewise-linear function lists, for
//! every edge, its breakpoints `(offset, value)` from `0` to the edge length;
//! it is linear between consecutive breakpoints. Its divisor takes at each
//! point the sum of the outgoing slopes, so an edge with slopes
//! `s_1, ..., s_k` contributes `s_1` at its tail, `-s_k` at its head and
//! `s_{i+1} - s_i` at the `i`-th interior breakpoint.
//!
//! [`transfer_witness`] turns a divisor on a metric graph together with, for
//! every vertex `v`, an equivalent effective divisor `D_v` carrying a chip on
//! `v` (and the function realizing the equivalence) into a divisor of the
//! same degree and positive rank on a subdivision `H` of the underlying
//! graph: subdivide at every support point, scale lengths to integers, split
//! every edge into unit edges, and read off firing scripts from the scaled
//! functions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::chipfire::{self, ChipError, Divisor, FiringScript};
use crate::graph::{EdgeId, GraphError, MultiGraph, Subdivision, Vertex};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Chip(#[from] ChipError),
    #[error("edge {edge} has non-positive length")]
    NonPositiveLength { edge: EdgeId },
    #[error("edge {edge} has non-integer length")]
    NonIntegerLength { edge: EdgeId },
    #[error("offset {offset} is not strictly inside edge {edge}")]
    OffsetOutOfRange { edge: EdgeId, offset: String },
    #[error("point on edge {edge} at offset {offset} is listed twice")]
    DuplicatePoint { edge: EdgeId, offset: String },
    #[error("no such edge {0}")]
    NoSuchEdge(EdgeId),
    #[error("function is malformed on edge {edge}: {reason}")]
    MalformedFunction { edge: EdgeId, reason: String },
    #[error("slope on edge {edge}, segment {segment} is not an integer")]
    SlopeNotIntegral { edge: EdgeId, segment: usize },
    #[error("function is discontinuous at vertex {vertex}")]
    Discontinuous { vertex: Vertex },
    #[error("witness for vertex {vertex} is invalid: {reason}")]
    WitnessInvalid { vertex: Vertex, reason: String },
    #[error("vertex {vertex} is not covered")]
    NotCovering { vertex: Vertex },
    #[error("slopes violate the cycle condition")]
    CycleCondition,
}

fn fmt_q(q: &Rational) -> String {
    q.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    graph: MultiGraph,
    lengths: Vec<Rational>,
}

impl MetricGraph {
    pub fn new(graph: MultiGraph, lengths: Vec<Rational>) -> Result<Self, MetricError> {
        crate::graph::check_len(graph.edge_count(), lengths.len())?;
        if let Some(e) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(MetricError::NonPositiveLength { edge: e });
        }
        Ok(MetricGraph { graph, lengths })
    }

    /// All lengths one.
    pub fn unit(graph: MultiGraph) -> Self {
        let lengths = vec![Rational::one(); graph.edge_count()];
        MetricGraph { graph, lengths }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn lengths(&self) -> &[Rational] {
        &self.lengths
    }

    pub fn length(&self, e: EdgeId) -> &Rational {
        &self.lengths[e]
    }

    fn check_point(&self, p: &Point) -> Result<(), MetricError> {
        match p {
            Point::Vertex(v) if *v >= self.graph.vertex_count() => Err(GraphError::NoSuchVertex(*v).into()),
            Point::Vertex(_) => Ok(()),
            Point::Edge { edge, offset } => {
                if *edge >= self.graph.edge_count() {
                    return Err(MetricError::NoSuchEdge(*edge));
                }
                if !offset.is_positive() || offset >= &self.lengths[*edge] {
                    return Err(MetricError::OffsetOutOfRange { edge: *edge, offset: fmt_q(offset) });
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(Vertex),
    /// Interior point at distance `offset` from the tail of `edge`.
    Edge { edge: EdgeId, offset: Rational },
}

/// Finitely supported integer combination of points, kept sorted by point
/// with zero coefficients removed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointDivisor {
    terms: Vec<(Point, i64)>,
}

impl PointDivisor {
    pub fn new(terms: impl IntoIterator<Item = (Point, i64)>) -> Self {
        let mut acc: BTreeMap<Point, i64> = BTreeMap::new();
        for (p, c) in terms {
            *acc.entry(p).or_default() += c;
        }
        PointDivisor { terms: acc.into_iter().filter(|&(_, c)| c != 0).collect() }
    }

    pub fn from_vertex_divisor(d: &Divisor) -> Self {
        PointDivisor::new(d.values().iter().enumerate().map(|(v, &c)| (Point::Vertex(v), c)))
    }

    pub fn terms(&self) -> &[(Point, i64)] {
        &self.terms
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c >= 0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.terms.iter().map(|(p, _)| p)
    }

    pub fn coefficient(&self, p: &Point) -> i64 {
        self.terms.binary_search_by(|(q, _)| q.cmp(p)).map_or(0, |i| self.terms[i].1)
    }

    pub fn validate(&self, gamma: &MetricGraph) -> Result<(), MetricError> {
        self.terms.iter().try_for_each(|(p, _)| gamma.check_point(p))
    }

    pub fn sub(&self, other: &PointDivisor) -> PointDivisor {
        PointDivisor::new(self.terms.iter().cloned().chain(other.terms.iter().map(|(p, c)| (p.clone(), -c))))
    }

    /// The chip vector, if every term sits on a vertex.
    pub fn to_vertex_divisor(&self, n: usize) -> Option<Divisor> {
        let mut out = vec![0; n];
        for (p, c) in &self.terms {
            match p {
                Point::Vertex(v) if *v < n => out[*v] += c,
                _ => return None,
            }
        }
        Some(Divisor::new(out))
    }
}

/// Continuous piecewise-linear function: per edge, breakpoints
/// `(offset, value)` with offsets increasing from `0` to the edge length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLFunction {
    pub edges: Vec<Vec<(Rational, Rational)>>,
}

impl PLFunction {
    /// The function that is linear on every edge with the given vertex values.
    pub fn from_vertex_values(gamma: &MetricGraph, values: &[Rational]) -> Result<Self, MetricError> {
        crate::graph::check_len(gamma.graph.vertex_count(), values.len())?;
        let edges = gamma
            .graph
            .edges()
            .iter()
            .zip(&gamma.lengths)
            .map(|(e, l)| vec![(Rational::zero(), values[e.tail].clone()), (l.clone(), values[e.head].clone())])
            .collect();
        Ok(PLFunction { edges })
    }

    pub fn constant(gamma: &MetricGraph, c: Rational) -> Self {
        let values = vec![c; gamma.graph.vertex_count()];
        PLFunction::from_vertex_values(gamma, &values).expect("lengths match")
    }

    /// Integer slopes per edge; checks shape, integrality and continuity.
    pub fn slopes(&self, gamma: &MetricGraph) -> Result<Vec<Vec<i64>>, MetricError> {
        let g = &gamma.graph;
        if self.edges.len() != g.edge_count() {
            return Err(GraphError::DimensionMismatch { expected: g.edge_count(), actual: self.edges.len() }.into());
        }
        let mut at_vertex: Vec<Option<&Rational>> = vec![None; g.vertex_count()];
        let mut out = Vec::with_capacity(self.edges.len());
        for (e, pts) in self.edges.iter().enumerate() {
            let malformed = |reason: &str| MetricError::MalformedFunction { edge: e, reason: reason.to_string() };
            if pts.len() < 2 {
                return Err(malformed("needs at least two breakpoints"));
            }
            if !pts[0].0.is_zero() || pts[pts.len() - 1].0 != gamma.lengths[e] {
                return Err(malformed("breakpoints must start at 0 and end at the edge length"));
            }
            let mut slopes = Vec::with_capacity(pts.len() - 1);
            for (i, w) in pts.windows(2).enumerate() {
                let dx = &w[1].0 - &w[0].0;
                if !dx.is_positive() {
                    return Err(malformed("breakpoint offsets must increase strictly"));
                }
                let s = (&w[1].1 - &w[0].1) / dx;
                if !s.is_integer() {
                    return Err(MetricError::SlopeNotIntegral { edge: e, segment: i });
                }
                slopes.push(s.to_integer().to_i64().ok_or_else(|| malformed("slope out of range"))?);
            }
            let edge = g.edge(e);
            for (v, val) in [(edge.tail, &pts[0].1), (edge.head, &pts[pts.len() - 1].1)] {
                match at_vertex[v] {
                    Some(prev) if prev != val => return Err(MetricError::Discontinuous { vertex: v }),
                    _ => at_vertex[v] = Some(val),
                }
            }
            out.push(slopes);
        }
        Ok(out)
    }

    /// The value at each vertex (zero at isolated vertices).
    pub fn vertex_values(&self, gamma: &MetricGraph) -> Result<Vec<Rational>, MetricError> {
        self.slopes(gamma)?;
        let mut out = vec![Rational::zero(); gamma.graph.vertex_count()];
        for (e, pts) in self.edges.iter().enumerate() {
            let edge = gamma.graph.edge(e);
            out[edge.tail] = pts[0].1.clone();
            out[edge.head] = pts[pts.len() - 1].1.clone();
        }
        Ok(out)
    }

    /// Value at offset `t` of edge `e` (no validation).
    fn eval(&self, e: EdgeId, t: &Rational) -> Rational {
        let pts = &self.edges[e];
        let i = pts.partition_point(|(x, _)| x <= t).clamp(1, pts.len() - 1);
        let ((x0, y0), (x1, y1)) = (&pts[i - 1], &pts[i]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }

    /// `c * f(t / c)`: the same slopes on the metric graph scaled by `c`.
    pub fn scaled(&self, c: &Rational) -> PLFunction {
        let edges = self.edges.iter().map(|pts| pts.iter().map(|(x, y)| (x * c, y * c)).collect()).collect();
        PLFunction { edges }
    }
}

/// The divisor of `f`: at every point, the sum of the outgoing slopes.
pub fn to_div(gamma: &MetricGraph, f: &PLFunction) -> Result<PointDivisor, MetricError> {
    let slopes = f.slopes(gamma)?;
    let mut terms = Vec::new();
    for (e, s) in slopes.iter().enumerate() {
        let edge = gamma.graph.edge(e);
        terms.push((Point::Vertex(edge.tail), s[0]));
        terms.push((Point::Vertex(edge.head), -s[s.len() - 1]));
        for (i, w) in s.windows(2).enumerate() {
            terms.push((Point::Edge { edge: e, offset: f.edges[e][i + 1].0.clone() }, w[1] - w[0]));
        }
    }
    Ok(PointDivisor::new(terms))
}

/// A metric graph subdivided at finitely many interior points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSubdivision {
    pub metric: MetricGraph,
    /// Original edge `e` became the pieces `pieces[e]`, tail to head, each
    /// given with the offset at which it starts on `e`.
    pub pieces: Vec<Vec<(EdgeId, Rational)>>,
    /// New vertex of every subdivision point.
    pub point_vertex: BTreeMap<Point, Vertex>,
}

/// Inserts a vertex at each listed interior point. New vertices are numbered
/// after the original ones in order of (edge, offset); each edge is replaced
/// by its pieces in place, oriented like the edge. Vertex points are already
/// vertices and are ignored.
pub fn subdivide_at(gamma: &MetricGraph, points: &[Point]) -> Result<MetricSubdivision, MetricError> {
    let g = &gamma.graph;
    let mut cuts: Vec<Vec<Rational>> = vec![Vec::new(); g.edge_count()];
    for p in points {
        gamma.check_point(p)?;
        if let Point::Edge { edge, offset } = p {
            cuts[*edge].push(offset.clone());
        }
    }
    let mut n = g.vertex_count();
    let mut point_vertex = BTreeMap::new();
    for (e, c) in cuts.iter_mut().enumerate() {
        c.sort();
        if let Some(w) = c.windows(2).find(|w| w[0] == w[1]) {
            return Err(MetricError::DuplicatePoint { edge: e, offset: fmt_q(&w[0]) });
        }
        for off in c.iter() {
            point_vertex.insert(Point::Edge { edge: e, offset: off.clone() }, n);
            n += 1;
        }
    }
    let mut pairs = Vec::new();
    let mut lengths = Vec::new();
    let mut pieces = Vec::with_capacity(g.edge_count());
    for (e, edge) in g.edges().iter().enumerate() {
        let mut list = Vec::new();
        let mut prev_v = edge.tail;
        let mut prev_off = Rational::zero();
        for off in &cuts[e] {
            let v = point_vertex[&Point::Edge { edge: e, offset: off.clone() }];
            list.push((pairs.len(), prev_off.clone()));
            pairs.push((prev_v, v));
            lengths.push(off - &prev_off);
            prev_v = v;
            prev_off = off.clone();
        }
        list.push((pairs.len(), prev_off.clone()));
        pairs.push((prev_v, edge.head));
        lengths.push(&gamma.lengths[e] - &prev_off);
        pieces.push(list);
    }
    let metric = MetricGraph::new(MultiGraph::new(n, &pairs)?, lengths)?;
    Ok(MetricSubdivision { metric, pieces, point_vertex })
}

impl MetricSubdivision {
    pub fn map_point(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(*v),
            Point::Edge { edge, offset } => {
                if let Some(&v) = self.point_vertex.get(p) {
                    return Point::Vertex(v);
                }
                let list = &self.pieces[*edge];
                let i = list.partition_point(|(_, start)| start <= offset) - 1;
                let (piece, start) = &list[i];
                Point::Edge { edge: *piece, offset: offset - start }
            }
        }
    }

    pub fn map_divisor(&self, d: &PointDivisor) -> PointDivisor {
        PointDivisor::new(d.terms.iter().map(|(p, c)| (self.map_point(p), *c)))
    }

    /// Restriction of `f` to the pieces. Breakpoints are kept, and every cut
    /// point becomes a piece end.
    pub fn map_function(&self, gamma: &MetricGraph, f: &PLFunction) -> PLFunction {
        let mut edges = vec![Vec::new(); self.metric.graph.edge_count()];
        for (e, list) in self.pieces.iter().enumerate() {
            for (k, (piece, start)) in list.iter().enumerate() {
                let end = match list.get(k + 1) {
                    Some((_, s)) => s.clone(),
                    None => gamma.lengths[e].clone(),
                };
                let mut pts = vec![(Rational::zero(), f.eval(e, start))];
                for (x, y) in &f.edges[e] {
                    if x > start && x < &end {
                        pts.push((x - start, y.clone()));
                    }
                }
                pts.push((&end - start, f.eval(e, &end)));
                edges[*piece] = pts;
            }
        }
        PLFunction { edges }
    }
}

/// Scales all lengths by the least common multiple of their denominators.
pub fn integerize(gamma: &MetricGraph) -> (MetricGraph, Rational) {
    let n = gamma.lengths.iter().fold(BigInt::one(), |acc, l| acc.lcm(l.denom()));
    let scale = Rational::from_integer(n);
    let lengths = gamma.lengths.iter().map(|l| l * &scale).collect();
    (MetricGraph { graph: gamma.graph.clone(), lengths }, scale)
}

/// Whether every fundamental cycle `C` has `sum_e y(e) s(e) chi_C(e) = 0`,
/// where `s` are per-edge slopes of functions linear on edges.
pub fn satisfies_cycle_condition(g: &MultiGraph, y: &[Rational], slopes: &[Vec<i64>]) -> bool {
    let cycles = g.fundamental_cycles();
    slopes.iter().all(|s| {
        cycles.iter().all(|chi| {
            let total: Rational = (0..g.edge_count())
                .filter(|&e| chi[e] != 0)
                .map(|e| &y[e] * Rational::from_integer(BigInt::from(s[e] * chi[e])))
                .sum();
            total.is_zero()
        })
    })
}

/// Subdivides every edge into unit edges.
pub fn unit_subdivision(gamma: &MetricGraph) -> Result<Subdivision, MetricError> {
    let mut counts = Vec::with_capacity(gamma.lengths.len());
    for (e, l) in gamma.lengths.iter().enumerate() {
        if !l.is_integer() {
            return Err(MetricError::NonIntegerLength { edge: e });
        }
        counts.push(l.to_integer().to_usize().ok_or(MetricError::NonIntegerLength { edge: e })?);
    }
    Ok(gamma.graph.subdivide(&counts)?)
}

/// For every vertex `v` of the underlying graph: an effective divisor `D_v`
/// with a chip on `v` and a function with `D - div(f_v) = D_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexWitness {
    pub vertex: Vertex,
    pub divisor: PointDivisor,
    pub function: PLFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferResult {
    /// Unit subdivision `H` of the underlying graph.
    pub graph: MultiGraph,
    /// Image of `D` on `H`; has positive rank.
    pub divisor: Divisor,
    /// Images of the `D_v` on `H`, in the order of the witnesses.
    pub witness_divisors: Vec<Divisor>,
    /// `D - Q x_v = D_v` on `H`.
    pub scripts: Vec<FiringScript>,
    /// Factor applied to the subdivided lengths.
    pub scale: Rational,
    /// Original vertex `v` is vertex `vertex_map[v]` of `H`.
    pub vertex_map: Vec<Vertex>,
    /// `deg(D)`, an upper bound on the gonality of `H`.
    pub bound: i64,
}

/// Builds the subdivision `H` and the positive-rank divisor on it.
pub fn transfer_witness(
    gamma: &MetricGraph,
    d: &PointDivisor,
    witnesses: &[VertexWitness],
) -> Result<TransferResult, MetricError> {
    let g = &gamma.graph;
    g.ensure_connected()?;
    d.validate(gamma)?;
    let invalid = |vertex: Vertex, reason: &str| MetricError::WitnessInvalid { vertex, reason: reason.to_string() };
    let mut seen = vec![false; g.vertex_count()];
    for w in witnesses {
        if w.vertex >= g.vertex_count() {
            return Err(GraphError::NoSuchVertex(w.vertex).into());
        }
        if std::mem::replace(&mut seen[w.vertex], true) {
            return Err(invalid(w.vertex, "listed twice"));
        }
        w.divisor.validate(gamma)?;
        if !w.divisor.is_effective() {
            return Err(invalid(w.vertex, "divisor is not effective"));
        }
        if w.divisor.coefficient(&Point::Vertex(w.vertex)) < 1 {
            return Err(invalid(w.vertex, "divisor has no chip on the vertex"));
        }
        let div = to_div(gamma, &w.function).map_err(|e| invalid(w.vertex, &e.to_string()))?;
        if d.sub(&div) != w.divisor {
            return Err(invalid(w.vertex, "D - div(f) differs from the divisor"));
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(MetricError::NotCovering { vertex: v });
    }

    let mut points: Vec<Point> = d.support().cloned().collect();
    for w in witnesses {
        points.extend(w.divisor.support().cloned());
    }
    points.sort();
    points.dedup();
    let sub = subdivide_at(gamma, &points)?;
    let gamma1 = &sub.metric;
    let n1 = gamma1.graph.vertex_count();
    let d1 = sub.map_divisor(d).to_vertex_divisor(n1).expect("support points became vertices");
    let mut fs = Vec::with_capacity(witnesses.len());
    let mut slopes = Vec::with_capacity(witnesses.len());
    for w in witnesses {
        let f1 = sub.map_function(gamma, &w.function);
        let s = f1.slopes(gamma1)?;
        if s.iter().any(|seg| seg.windows(2).any(|p| p[0] != p[1])) {
            return Err(invalid(w.vertex, "function bends away from the support"));
        }
        slopes.push(s.into_iter().map(|seg| seg[0]).collect::<Vec<_>>());
        fs.push(f1);
    }
    if !satisfies_cycle_condition(&gamma1.graph, &gamma1.lengths, &slopes) {
        return Err(MetricError::CycleCondition);
    }
    let (gamma2, scale) = integerize(gamma1);
    if !satisfies_cycle_condition(&gamma2.graph, &gamma2.lengths, &slopes) {
        return Err(MetricError::CycleCondition);
    }
    let unit = unit_subdivision(&gamma2)?;
    let h = unit.graph.clone();
    let dh = Divisor::new(unit.push_forward(d1.values()));

    let mut witness_divisors = Vec::with_capacity(witnesses.len());
    let mut scripts = Vec::with_capacity(witnesses.len());
    for ((w, f1), s) in witnesses.iter().zip(&fs).zip(&slopes) {
        let f2 = f1.scaled(&scale);
        let base = f2.vertex_values(&gamma2)?;
        let mut x = vec![BigInt::zero(); h.vertex_count()];
        let origin = base[0].clone();
        for v in 0..n1 {
            let val = &base[v] - &origin;
            if !val.is_integer() {
                return Err(invalid(w.vertex, "vertex values are not integral after scaling"));
            }
            x[unit.vertex_map[v]] = val.to_integer();
        }
        for (e, path) in unit.edge_paths.iter().enumerate() {
            let tail = gamma2.graph.edge(e).tail;
            let mut at = x[unit.vertex_map[tail]].clone();
            for &step in &path[..path.len() - 1] {
                at += s[e];
                x[h.edge(step).head] = at.clone();
            }
        }
        let script: Vec<i64> = x
            .iter()
            .map(|v| (-v).to_i64().ok_or_else(|| invalid(w.vertex, "script entry out of range")))
            .collect::<Result<_, _>>()?;
        let script = FiringScript::new(script);
        let dv1 = sub.map_divisor(&w.divisor).to_vertex_divisor(n1).expect("support points became vertices");
        let dv = Divisor::new(unit.push_forward(dv1.values()));
        if chipfire::apply_script(&h, &dh, &script)? != dv {
            return Err(invalid(w.vertex, "transferred script does not reach the divisor"));
        }
        if chipfire::equivalent(&h, &dh, &dv)?.is_none() {
            return Err(invalid(w.vertex, "transferred divisors are not equivalent"));
        }
        witness_divisors.push(dv);
        scripts.push(script);
    }

    let vertex_map: Vec<Vertex> = (0..g.vertex_count()).map(|v| unit.vertex_map[v]).collect();
    if !chipfire::separator_rank_certificate(&h, &dh, &vertex_map)? {
        let v = (0..g.vertex_count())
            .find(|&v| !chipfire::covers(&h, &dh, vertex_map[v]).unwrap_or(false))
            .unwrap_or(0);
        return Err(MetricError::NotCovering { vertex: v });
    }
    Ok(TransferResult {
        graph: h,
        divisor: dh,
        witness_divisors,
        scripts,
        scale,
        vertex_map,
        bound: d.degree(),
    })
}

/// Solves `A x = b` over the rationals for a nonsingular square `A`.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// For vertex-supported `d` and `e`, a function linear on every edge with
/// `D - div(f) = E`, if one exists. Such a function is determined up to a
/// constant by the weighted Laplacian system; it exists exactly when that
/// solution has integral slopes.
pub fn equivalent_on_vertices(gamma: &MetricGraph, d: &Divisor, e: &Divisor) -> Result<Option<PLFunction>, MetricError> {
    let g = &gamma.graph;
    g.ensure_connected()?;
    let n = g.vertex_count();
    crate::graph::check_len(n, d.len())?;
    crate::graph::check_len(n, e.len())?;
    if d.degree() != e.degree() {
        return Ok(None);
    }
    if n == 1 {
        return Ok(Some(PLFunction::constant(gamma, Rational::zero())));
    }
    // div(f)(v) = sum over edges at v of (f(other) - f(v)) / l, so
    // L x = E - D with L the Laplacian weighted by 1 / l.
    let mut lap = vec![vec![Rational::zero(); n]; n];
    for (edge, l) in g.edges().iter().zip(&gamma.lengths) {
        let w = l.recip();
        let (a, b) = (edge.tail, edge.head);
        lap[a][a] += &w;
        lap[b][b] += &w;
        lap[a][b] -= &w;
        lap[b][a] -= &w;
    }
    let rhs: Vec<Rational> = (1..n).map(|v| Rational::from_integer(BigInt::from(e[v] - d[v]))).collect();
    let reduced: Vec<Vec<Rational>> = (1..n).map(|r| lap[r][1..].to_vec()).collect();
    let sol = solve(reduced, rhs).expect("reduced Laplacian of a connected graph is nonsingular");
    let mut values = vec![Rational::zero()];
    values.extend(sol);
    let f = PLFunction::from_vertex_values(gamma, &values)?;
    match f.slopes(gamma) {
        Ok(_) => Ok(Some(f)),
        Err(MetricError::SlopeNotIntegral { .. }) => Ok(None),
        Err(err) => Err(err),
    }
}
