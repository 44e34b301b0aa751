//! Loopless multigraphs with a fixed orientation.
//!
//! Parallel edges are distinct edge records, so every edge has an identity
//! that survives subdivision, expansion and morphisms. The orientation is the
//! one given at construction: edge `e = (tail, head)`. The incidence matrix
//! `M` has `M[head][e] = 1` and `M[tail][e] = -1`, and the Laplacian is
//! `Q = M M^T`.

use std::collections::VecDeque;

use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: EdgeId, vertex: Vertex },
    #[error("edge {edge} references vertex {vertex}, but the graph has {n} vertices")]
    VertexOutOfRange { edge: EdgeId, vertex: Vertex, n: usize },
    #[error("expected a vector of length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("subdivision count for edge {edge} must be positive")]
    NonPositiveCount { edge: EdgeId },
    #[error("vertex {0} is out of range")]
    NoSuchVertex(Vertex),
    #[error("graph is not connected")]
    Disconnected,
    #[error("expected {expected} labels, got {actual}")]
    LabelCount { expected: usize, actual: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub tail: Vertex,
    pub head: Vertex,
}

impl Edge {
    pub fn other(&self, v: Vertex) -> Vertex {
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    /// `(neighbour, edge id)` per vertex, in edge order.
    adj: Vec<Vec<(Vertex, EdgeId)>>,
    connected: bool,
}

impl MultiGraph {
    /// Validates the edge list and builds the graph. Disconnected graphs are
    /// accepted and flagged; divisor operations reject them. The empty graph
    /// counts as disconnected.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut stored = Vec::with_capacity(edges.len());
        for (i, &(tail, head)) in edges.iter().enumerate() {
            for v in [tail, head] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { edge: i, vertex: v, n });
                }
            }
            if tail == head {
                return Err(GraphError::LoopEdge { edge: i, vertex: tail });
            }
            stored.push(Edge { tail, head });
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in stored.iter().enumerate() {
            adj[e.tail].push((e.head, i));
            adj[e.head].push((e.tail, i));
        }
        let mut g = MultiGraph { n, edges: stored, labels: None, adj, connected: false };
        g.connected = g.component_count() == 1;
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount { expected: self.n, actual: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn edge_pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.edges.iter().map(|e| (e.tail, e.head)).collect()
    }

    /// Incident `(neighbour, edge)` pairs; parallel edges appear repeatedly.
    pub fn incident(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.adj[u].iter().filter(|&&(w, _)| w == v).count()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn ensure_connected(&self) -> Result<(), GraphError> {
        if self.connected {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// Circuit rank `|E| - |V| + c` where `c` is the number of components
    /// (equal to `|E| - |V| + 1` for connected graphs).
    pub fn circuit_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.n
    }

    /// True when no pair of vertices is joined by more than one edge.
    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .map(|e| (e.tail.min(e.head), e.tail.max(e.head)))
            .collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    /// The underlying simple graph: one edge per adjacent pair, oriented from
    /// the smaller to the larger vertex, in lexicographic order.
    pub fn simple(&self) -> MultiGraph {
        let mut pairs: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .map(|e| (e.tail.min(e.head), e.tail.max(e.head)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        MultiGraph::new(self.n, &pairs).expect("simple graph of a valid graph is valid")
    }

    /// Same graph with the orientation of every edge `e` with `flip[e]`
    /// reversed.
    pub fn reoriented(&self, flip: &[bool]) -> Result<MultiGraph, GraphError> {
        check_len(self.edges.len(), flip.len())?;
        let pairs: Vec<_> = self
            .edges
            .iter()
            .zip(flip)
            .map(|(e, &f)| if f { (e.head, e.tail) } else { (e.tail, e.head) })
            .collect();
        MultiGraph::new(self.n, &pairs)
    }

    /// Relabels vertex `v` as `perm[v]`. Edge order is preserved.
    pub fn relabeled(&self, perm: &[Vertex]) -> Result<MultiGraph, GraphError> {
        check_len(self.n, perm.len())?;
        let pairs: Vec<_> = self.edges.iter().map(|e| (perm[e.tail], perm[e.head])).collect();
        MultiGraph::new(self.n, &pairs)
    }

    /// Same graph with the edge list permuted: new edge `i` is old edge
    /// `order[i]`.
    pub fn with_edge_order(&self, order: &[EdgeId]) -> Result<MultiGraph, GraphError> {
        check_len(self.edges.len(), order.len())?;
        let pairs: Vec<_> = order.iter().map(|&i| (self.edges[i].tail, self.edges[i].head)).collect();
        MultiGraph::new(self.n, &pairs)
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut count = 0;
        for s in 0..self.n {
            if !seen[s] {
                count += 1;
                self.flood(s, &mut seen, |_| true);
            }
        }
        count
    }

    /// Connected components of the subgraph induced by `mask`, each sorted.
    pub fn components_within(&self, mask: &[bool]) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if mask[s] && !seen[s] {
                let mut comp = self.flood(s, &mut seen, |w| mask[w]);
                comp.sort_unstable();
                comps.push(comp);
            }
        }
        comps
    }

    /// Whether the subgraph induced by `set` is connected. The empty set
    /// counts as disconnected.
    pub fn induces_connected(&self, set: &[Vertex]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mask = self.mask_of(set);
        let mut seen = vec![false; self.n];
        let reached = self.flood(set[0], &mut seen, |w| mask[w]);
        let size = mask.iter().filter(|&&b| b).count();
        reached.len() == size
    }

    pub fn mask_of(&self, set: &[Vertex]) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &v in set {
            mask[v] = true;
        }
        mask
    }

    /// Number of edges with exactly one end in `mask`.
    pub fn cut_size(&self, mask: &[bool]) -> usize {
        self.edges.iter().filter(|e| mask[e.tail] != mask[e.head]).count()
    }

    /// Edges with exactly one end in `mask`, in edge order.
    pub fn cut_edges(&self, mask: &[bool]) -> Vec<EdgeId> {
        (0..self.edges.len())
            .filter(|&i| mask[self.edges[i].tail] != mask[self.edges[i].head])
            .collect()
    }

    /// Breadth-first search from `start` through vertices accepted by
    /// `allow`; returns the visited vertices in visiting order.
    fn flood(&self, start: Vertex, seen: &mut [bool], allow: impl Fn(Vertex) -> bool) -> Vec<Vertex> {
        let mut out = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adj[u] {
                if !seen[w] && allow(w) {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    /// BFS distances from `root`; unreachable vertices get `usize::MAX`.
    pub fn distances_from(&self, root: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `Q x`, with `Q_vv = d(v)` and `Q_uv = -|E(u,v)|`.
    pub fn laplacian_apply(&self, x: &[i64]) -> Result<Vec<i64>, GraphError> {
        check_len(self.n, x.len())?;
        let mut out = vec![0i64; self.n];
        for e in &self.edges {
            let d = x[e.tail] - x[e.head];
            out[e.tail] += d;
            out[e.head] -= d;
        }
        Ok(out)
    }

    /// Dense Laplacian, row-major.
    pub fn laplacian_matrix(&self) -> Vec<Vec<i64>> {
        let mut q = vec![vec![0i64; self.n]; self.n];
        for e in &self.edges {
            q[e.tail][e.tail] += 1;
            q[e.head][e.head] += 1;
            q[e.tail][e.head] -= 1;
            q[e.head][e.tail] -= 1;
        }
        q
    }

    /// `M f`: for each vertex, inflow minus outflow of the edge vector `f`.
    pub fn incidence_apply(&self, f: &[i64]) -> Result<Vec<i64>, GraphError> {
        check_len(self.edges.len(), f.len())?;
        let mut out = vec![0i64; self.n];
        for (e, &fe) in self.edges.iter().zip(f) {
            out[e.head] += fe;
            out[e.tail] -= fe;
        }
        Ok(out)
    }

    /// `M^T x`: for each edge, `x(head) - x(tail)`.
    pub fn coboundary(&self, x: &[i64]) -> Result<Vec<i64>, GraphError> {
        check_len(self.n, x.len())?;
        Ok(self.edges.iter().map(|e| x[e.head] - x[e.tail]).collect())
    }

    /// Writes `f` as `M^T x` if `f` lies in the cut lattice.
    ///
    /// Potentials are propagated along a BFS spanning forest (one root per
    /// component, potential 0 at the root), then every edge is checked. Any
    /// non-tree edge that disagrees witnesses a cycle with `f^T chi_C != 0`.
    pub fn cut_lattice_decompose(&self, f: &[i64]) -> Result<Option<Vec<i64>>, GraphError> {
        check_len(self.edges.len(), f.len())?;
        let mut x = vec![0i64; self.n];
        let mut seen = vec![false; self.n];
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        let edge = self.edges[e];
                        x[w] = if edge.head == w { x[u] + f[e] } else { x[u] - f[e] };
                        queue.push_back(w);
                    }
                }
            }
        }
        let ok = self.edges.iter().zip(f).all(|(e, &fe)| x[e.head] - x[e.tail] == fe);
        Ok(ok.then_some(x))
    }

    /// Whether a signed edge vector has entries in {-1,0,1} and `M chi = 0`,
    /// as the incidence vector of a closed trail does.
    pub fn is_cycle_vector(&self, chi: &[i64]) -> bool {
        chi.len() == self.edges.len()
            && chi.iter().all(|c| (-1..=1).contains(c))
            && self.incidence_apply(chi).map(|r| r.iter().all(|&v| v == 0)).unwrap_or(false)
    }

    /// A fundamental cycle vector for every non-tree edge of a BFS spanning
    /// forest. Together they span the cycle space.
    pub fn fundamental_cycles(&self) -> Vec<Vec<i64>> {
        let mut parent: Vec<Option<(Vertex, EdgeId)>> = vec![None; self.n];
        let mut depth = vec![0usize; self.n];
        let mut seen = vec![false; self.n];
        let mut tree_edge = vec![false; self.edges.len()];
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, e) in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, e));
                        depth[w] = depth[u] + 1;
                        tree_edge[e] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let mut cycles = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if tree_edge[i] {
                continue;
            }
            // Traverse the edge tail -> head, then return to the tail through
            // the tree: up from the head to the common ancestor, then down.
            let mut chi = vec![0i64; self.edges.len()];
            chi[i] = 1;
            let (mut a, mut b) = (e.head, e.tail);
            let mut down_from_b = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, pe) = parent[a].expect("non-root");
                    chi[pe] += if self.edges[pe].tail == a { 1 } else { -1 };
                    a = p;
                } else {
                    let (p, pe) = parent[b].expect("non-root");
                    down_from_b.push((p, pe));
                    b = p;
                }
            }
            for (p, pe) in down_from_b {
                chi[pe] += if self.edges[pe].tail == p { 1 } else { -1 };
            }
            cycles.push(chi);
        }
        cycles
    }

    /// Replaces edge `e` by a path of `counts[e]` edges, oriented from the
    /// original tail to the original head. Original vertices keep their ids;
    /// new vertices are appended edge by edge. Edge order follows the
    /// original order, each path's edges consecutive from tail to head.
    pub fn subdivide(&self, counts: &[usize]) -> Result<Subdivision, GraphError> {
        check_len(self.edges.len(), counts.len())?;
        if let Some(e) = counts.iter().position(|&c| c == 0) {
            return Err(GraphError::NonPositiveCount { edge: e });
        }
        let mut n = self.n;
        let mut pairs = Vec::new();
        let mut paths = Vec::with_capacity(self.edges.len());
        for (e, &c) in self.edges.iter().zip(counts) {
            let mut path = Vec::with_capacity(c);
            let mut prev = e.tail;
            for step in 0..c {
                let next = if step + 1 == c {
                    e.head
                } else {
                    n += 1;
                    n - 1
                };
                path.push(pairs.len());
                pairs.push((prev, next));
                prev = next;
            }
            paths.push(path);
        }
        let graph = MultiGraph::new(n, &pairs)?;
        Ok(Subdivision { graph, vertex_map: (0..self.n).collect(), edge_paths: paths })
    }
}

/// A subdivided graph with the embedding of the original graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subdivision {
    pub graph: MultiGraph,
    /// Original vertex `v` is `vertex_map[v]` in the subdivision.
    pub vertex_map: Vec<Vertex>,
    /// Original edge `e` became the path `edge_paths[e]`, listed tail to head.
    pub edge_paths: Vec<Vec<EdgeId>>,
}

impl Subdivision {
    /// Image of a divisor on the original graph (zeros on new vertices).
    pub fn push_forward(&self, values: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.graph.vertex_count()];
        for (v, &c) in values.iter().enumerate() {
            out[self.vertex_map[v]] = c;
        }
        out
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<(), GraphError> {
    if expected == actual {
        Ok(())
    } else {
        Err(GraphError::DimensionMismatch { expected, actual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> MultiGraph {
        MultiGraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn build_examples() {
        let g = k3();
        assert_eq!(g.circuit_rank(), 1);
        assert!(g.is_connected());
        let b2 = MultiGraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(b2.circuit_rank(), 1);
        assert!(!b2.is_simple());
        assert_eq!(
            MultiGraph::new(2, &[(0, 0)]),
            Err(GraphError::LoopEdge { edge: 0, vertex: 0 })
        );
        assert!(matches!(
            MultiGraph::new(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, .. })
        ));
        let disc = MultiGraph::new(3, &[(0, 1)]).unwrap();
        assert!(!disc.is_connected());
        assert_eq!(disc.circuit_rank(), 0);
    }

    #[test]
    fn laplacian_examples() {
        let g = k3();
        assert_eq!(g.laplacian_apply(&[1, 1, 1]).unwrap(), vec![0, 0, 0]);
        assert_eq!(g.laplacian_apply(&[1, 0, 0]).unwrap(), vec![2, -1, -1]);
        let b2 = MultiGraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(b2.laplacian_apply(&[1, 0]).unwrap(), vec![2, -2]);
        assert_eq!(
            g.laplacian_apply(&[1, 0]),
            Err(GraphError::DimensionMismatch { expected: 3, actual: 2 })
        );
    }

    #[test]
    fn laplacian_matches_incidence_product() {
        let g = MultiGraph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let x = [3, -1, 4, 2];
        let via_m = g.incidence_apply(&g.coboundary(&x).unwrap()).unwrap();
        let q = g.laplacian_apply(&x).unwrap();
        assert_eq!(q, via_m);
        let dense = g.laplacian_matrix();
        for v in 0..4 {
            let row: i64 = (0..4).map(|u| dense[v][u] * x[u]).sum();
            assert_eq!(row, q[v]);
            assert_eq!(dense[v].iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn cut_lattice_examples() {
        let g = k3();
        assert_eq!(g.cut_lattice_decompose(&[1, 1, 2]).unwrap(), Some(vec![0, 1, 2]));
        assert_eq!(g.cut_lattice_decompose(&[1, 1, 1]).unwrap(), None);
        let tree = MultiGraph::new(4, &[(0, 1), (2, 1), (1, 3)]).unwrap();
        let x = tree.cut_lattice_decompose(&[5, -3, 7]).unwrap().unwrap();
        assert_eq!(tree.coboundary(&x).unwrap(), vec![5, -3, 7]);
        assert_eq!(x[0], 0);
    }

    #[test]
    fn cycle_vectors_are_closed() {
        let g = MultiGraph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let cycles = g.fundamental_cycles();
        assert_eq!(cycles.len(), g.circuit_rank());
        for c in &cycles {
            assert!(g.is_cycle_vector(c), "{c:?}");
        }
    }

    #[test]
    fn subdivide_examples() {
        let b2 = MultiGraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let s = b2.subdivide(&[2, 1]).unwrap();
        assert_eq!(s.graph.vertex_count(), 3);
        assert_eq!(s.graph.edge_count(), 3);
        assert_eq!(s.graph.edge_pairs(), vec![(0, 2), (2, 1), (0, 1)]);
        assert_eq!(s.edge_paths, vec![vec![0, 1], vec![2]]);

        let g = k3();
        let same = g.subdivide(&[1, 1, 1]).unwrap();
        assert_eq!(same.graph, g);

        let p2 = MultiGraph::new(2, &[(0, 1)]).unwrap();
        let p4 = p2.subdivide(&[3]).unwrap().graph;
        assert_eq!(p4.vertex_count(), 4);
        assert_eq!(p4.edge_count(), 3);
        assert_eq!(p4.circuit_rank(), 0);

        assert_eq!(b2.subdivide(&[1, 0]), Err(GraphError::NonPositiveCount { edge: 1 }));
    }

    #[test]
    fn simple_graph_collapses_parallel_edges() {
        let g = MultiGraph::new(3, &[(1, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(g.simple().edge_pairs(), vec![(0, 1), (1, 2)]);
    }
}
