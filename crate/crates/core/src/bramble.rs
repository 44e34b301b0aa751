//! Brambles, their order, and the cut-based hitting set construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{self, FamilyError};
use crate::graph::{MultiGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrambleError {
    #[error("bramble has no members")]
    EmptyBramble,
    #[error("bramble member {0} is empty")]
    EmptyMember(usize),
    #[error("bramble member {member} references vertex {vertex} outside the graph")]
    VertexOutOfRange { member: usize, vertex: Vertex },
    #[error("members {0} and {1} do not induce a connected subgraph together")]
    NotABramble(usize, usize),
    #[error("no bramble member lies inside the set, or none inside its complement")]
    HypothesisUnmet,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A family of vertex sets, each stored sorted, duplicates collapsed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bramble {
    members: Vec<Vec<Vertex>>,
}

impl Bramble {
    pub fn new(members: Vec<Vec<Vertex>>) -> Self {
        let mut members: Vec<Vec<Vertex>> = members
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m.dedup();
                m
            })
            .collect();
        members.sort();
        members.dedup();
        Bramble { members }
    }

    pub fn members(&self) -> &[Vec<Vertex>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_hit_by(&self, set: &[Vertex]) -> bool {
        self.members.iter().all(|m| m.iter().any(|v| set.contains(v)))
    }

    fn validate_shape(&self, g: &MultiGraph) -> Result<(), BrambleError> {
        if self.members.is_empty() {
            return Err(BrambleError::EmptyBramble);
        }
        for (i, m) in self.members.iter().enumerate() {
            if m.is_empty() {
                return Err(BrambleError::EmptyMember(i));
            }
            if let Some(&v) = m.iter().find(|&&v| v >= g.vertex_count()) {
                return Err(BrambleError::VertexOutOfRange { member: i, vertex: v });
            }
        }
        Ok(())
    }

    /// First pair of members whose union is not connected, if any.
    fn first_violation(&self, g: &MultiGraph) -> Option<(usize, usize)> {
        for i in 0..self.members.len() {
            for j in i..self.members.len() {
                let mut union = self.members[i].clone();
                union.extend_from_slice(&self.members[j]);
                union.sort_unstable();
                union.dedup();
                if !g.induces_connected(&union) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn ensure_bramble(&self, g: &MultiGraph) -> Result<(), BrambleError> {
        self.validate_shape(g)?;
        match self.first_violation(g) {
            Some((i, j)) => Err(BrambleError::NotABramble(i, j)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSet {
    pub vertices: Vec<Vertex>,
}

impl HittingSet {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// Whether `G[B ∪ B']` is connected for every pair of members (including
/// `B = B'`).
pub fn is_bramble(g: &MultiGraph, bramble: &Bramble) -> Result<bool, BrambleError> {
    bramble.validate_shape(g)?;
    Ok(bramble.first_violation(g).is_none())
}

struct HittingSearch<'a> {
    members: &'a [Vec<Vertex>],
    chosen: Vec<bool>,
    forbidden: Vec<bool>,
    best: Vec<Vertex>,
    stack: Vec<Vertex>,
    mark: Vec<bool>,
}

impl HittingSearch<'_> {
    fn is_hit(&self, m: &[Vertex]) -> bool {
        m.iter().any(|&v| self.chosen[v])
    }

    /// Pairwise disjoint unhit members need distinct vertices.
    fn packing_bound(&mut self) -> usize {
        self.mark.iter_mut().for_each(|b| *b = false);
        let mut count = 0;
        for m in self.members {
            if self.is_hit(m) || m.iter().any(|&v| self.mark[v]) {
                continue;
            }
            for &v in m {
                self.mark[v] = true;
            }
            count += 1;
        }
        count
    }

    fn run(&mut self) {
        // Branch on the unhit member with the fewest allowed vertices.
        let mut branch: Option<&[Vertex]> = None;
        let mut branch_size = usize::MAX;
        for m in self.members {
            if self.is_hit(m) {
                continue;
            }
            let avail = m.iter().filter(|&&v| !self.forbidden[v]).count();
            if avail == 0 {
                return;
            }
            if avail < branch_size {
                branch_size = avail;
                branch = Some(m);
            }
        }
        let Some(member) = branch else {
            if self.stack.len() < self.best.len() {
                self.best = self.stack.clone();
            }
            return;
        };
        if self.stack.len() + self.packing_bound() >= self.best.len() {
            return;
        }
        let options: Vec<Vertex> = member.iter().copied().filter(|&v| !self.forbidden[v]).collect();
        for &v in &options {
            self.chosen[v] = true;
            self.stack.push(v);
            self.run();
            self.stack.pop();
            self.chosen[v] = false;
            self.forbidden[v] = true;
        }
        for &v in &options {
            self.forbidden[v] = false;
        }
    }
}

fn greedy_hitting_set(n: usize, members: &[Vec<Vertex>]) -> Vec<Vertex> {
    let mut hit = vec![false; members.len()];
    let mut set = Vec::new();
    while hit.iter().any(|h| !h) {
        let mut score = vec![0usize; n];
        for (m, _) in members.iter().zip(&hit).filter(|(_, h)| !**h) {
            for &v in m {
                score[v] += 1;
            }
        }
        let v = (0..n).max_by_key(|&v| (score[v], std::cmp::Reverse(v))).expect("nonempty graph");
        set.push(v);
        for (m, h) in members.iter().zip(hit.iter_mut()) {
            if m.contains(&v) {
                *h = true;
            }
        }
    }
    set
}

/// Exact order (minimum hitting set size) with an optimal hitting set.
pub fn bramble_order(g: &MultiGraph, bramble: &Bramble) -> Result<(usize, HittingSet), BrambleError> {
    bramble.ensure_bramble(g)?;
    let n = g.vertex_count();
    let greedy = greedy_hitting_set(n, bramble.members());
    let mut search = HittingSearch {
        members: bramble.members(),
        chosen: vec![false; n],
        forbidden: vec![false; n],
        best: greedy,
        stack: Vec::new(),
        mark: vec![false; n],
    };
    search.run();
    let mut best = search.best;
    best.sort_unstable();
    debug_assert!(bramble.is_hit_by(&best));
    Ok((best.len(), HittingSet { vertices: best }))
}

/// Hitting set of size at most `|E(U, V \ U)| + 1`, for a bramble with one
/// member inside `U` and one inside `V \ U`.
///
/// With `X`, `Y` the shores of the cut, pick the member `B' ⊆ U` whose trace
/// on `X` is smallest (hence inclusion-minimal), one vertex `s ∈ B' ∩ X`, and
/// for every cut edge `xy` the end `x` unless `x ∈ B'`, in which case `y`.
pub fn hitting_set_from_cut(g: &MultiGraph, bramble: &Bramble, set: &[Vertex]) -> Result<HittingSet, BrambleError> {
    bramble.ensure_bramble(g)?;
    if let Some(&v) = set.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(BrambleError::InvalidParameters(format!("vertex {v} is out of range")));
    }
    let in_u = g.mask_of(set);
    let inside: Vec<&Vec<Vertex>> = bramble.members().iter().filter(|m| m.iter().all(|&v| in_u[v])).collect();
    let outside_exists = bramble.members().iter().any(|m| m.iter().all(|&v| !in_u[v]));
    if inside.is_empty() || !outside_exists {
        return Err(BrambleError::HypothesisUnmet);
    }
    let cut = g.cut_edges(&in_u);
    let mut shore = vec![false; g.vertex_count()];
    for &e in &cut {
        let edge = g.edge(e);
        shore[edge.tail] = true;
        shore[edge.head] = true;
    }
    let chosen = inside
        .iter()
        .min_by_key(|m| m.iter().filter(|&&v| shore[v]).count())
        .expect("nonempty");
    let s = *chosen
        .iter()
        .find(|&&v| shore[v])
        .expect("a member inside U touches a member outside U across the cut");
    let in_chosen = g.mask_of(chosen);
    let mut out = vec![s];
    for &e in &cut {
        let edge = g.edge(e);
        let (x, y) = if in_u[edge.tail] { (edge.tail, edge.head) } else { (edge.head, edge.tail) };
        out.push(if in_chosen[x] { y } else { x });
    }
    out.sort_unstable();
    out.dedup();
    debug_assert!(bramble.is_hit_by(&out));
    Ok(HittingSet { vertices: out })
}

/// The bramble `{{s_1}, .., {s_k}} ∪ {{u, v} : uv ∈ E}` on the complete
/// multipartite graph with the given part sizes, `s_i` the first vertex of
/// part `i`.
pub fn make_multipartite_bramble(sizes: &[usize]) -> Result<(MultiGraph, Bramble), BrambleError> {
    let g = family::complete_multipartite(sizes)?;
    let mut members: Vec<Vec<Vertex>> = family::part_offsets(sizes).into_iter().map(|s| vec![s]).collect();
    members.extend(g.edges().iter().map(|e| vec![e.tail, e.head]));
    Ok((g, Bramble::new(members)))
}

/// The bramble on the `(m+1) x (n+1)` grid formed by the last column `A`,
/// the last row without its last vertex `B`, and the crosses
/// `C_ij = {(a, b) ∈ [m] x [n] : a = i or b = j}`. Coordinates are 1-based
/// `(row, column)`, vertex `(a, b)` is `(a-1)(n+1) + (b-1)` as in
/// [`family::grid`].
pub fn make_grid_bramble(m: usize, n: usize) -> Result<(MultiGraph, Bramble), BrambleError> {
    if m < 1 || m > n {
        return Err(BrambleError::InvalidParameters("grid bramble needs 1 <= m <= n".into()));
    }
    let g = family::grid(m + 1, n + 1)?;
    let id = |a: usize, b: usize| (a - 1) * (n + 1) + (b - 1);
    let mut members = Vec::new();
    members.push((1..=m + 1).map(|a| id(a, n + 1)).collect());
    members.push((1..=n).map(|b| id(m + 1, b)).collect());
    for i in 1..=m {
        for j in 1..=n {
            let mut cross = Vec::new();
            for a in 1..=m {
                for b in 1..=n {
                    if a == i || b == j {
                        cross.push(id(a, b));
                    }
                }
            }
            members.push(cross);
        }
    }
    Ok((g, Bramble::new(members)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(members: &[&[Vertex]]) -> Bramble {
        Bramble::new(members.iter().map(|m| m.to_vec()).collect())
    }

    #[test]
    fn bramble_checks() {
        let k3 = family::complete(3).unwrap();
        assert!(is_bramble(&k3, &b(&[&[0], &[1], &[2]])).unwrap());
        let p3 = family::path(3).unwrap();
        assert!(!is_bramble(&p3, &b(&[&[0], &[2]])).unwrap());
        assert_eq!(is_bramble(&p3, &b(&[&[0], &[]])), Err(BrambleError::EmptyMember(0)));
        assert_eq!(is_bramble(&p3, &Bramble::new(vec![])), Err(BrambleError::EmptyBramble));
        let (g, grid) = make_grid_bramble(1, 2).unwrap();
        assert!(is_bramble(&g, &grid).unwrap());
    }

    #[test]
    fn duplicates_collapse() {
        let br = b(&[&[2, 1], &[1, 2], &[0]]);
        assert_eq!(br.members(), &[vec![0], vec![1, 2]]);
    }

    #[test]
    fn order_examples() {
        let k3 = family::complete(3).unwrap();
        let (order, s) = bramble_order(&k3, &b(&[&[0], &[1], &[2]])).unwrap();
        assert_eq!(order, 3);
        assert_eq!(s.vertices, vec![0, 1, 2]);

        let (g, br) = make_multipartite_bramble(&[2, 2, 2]).unwrap();
        assert_eq!(bramble_order(&g, &br).unwrap().0, 5);
        let (g, br) = make_multipartite_bramble(&[1, 1]).unwrap();
        assert_eq!(bramble_order(&g, &br).unwrap().0, 2);
        let (g, br) = make_multipartite_bramble(&[1, 3]).unwrap();
        assert_eq!(bramble_order(&g, &br).unwrap().0, 2);

        for (m, n, expected) in [(1, 1, 3), (1, 2, 3), (2, 2, 4)] {
            let (g, br) = make_grid_bramble(m, n).unwrap();
            let (order, s) = bramble_order(&g, &br).unwrap();
            assert_eq!(order, expected, "grid bramble m={m} n={n}");
            assert!(br.is_hit_by(&s.vertices));
        }
        // With m = 1 the two crosses coincide and collapse into one member.
        let (_, br) = make_grid_bramble(1, 2).unwrap();
        assert_eq!(br.len(), 3);
        let (_, br) = make_grid_bramble(2, 3).unwrap();
        assert_eq!(br.len(), 8);
    }

    #[test]
    fn order_rejects_non_brambles() {
        let p3 = family::path(3).unwrap();
        assert_eq!(bramble_order(&p3, &b(&[&[0], &[2]])), Err(BrambleError::NotABramble(0, 1)));
    }

    #[test]
    fn cut_hitting_set_examples() {
        let k3 = family::complete(3).unwrap();
        let br = b(&[&[0], &[1], &[2]]);
        let s = hitting_set_from_cut(&k3, &br, &[0]).unwrap();
        assert!(s.size() <= 3 && br.is_hit_by(&s.vertices));

        let p3 = family::path(3).unwrap();
        let br = b(&[&[0], &[1]]);
        let s = hitting_set_from_cut(&p3, &br, &[0]).unwrap();
        assert!(s.size() <= 2 && br.is_hit_by(&s.vertices));
        assert_eq!(hitting_set_from_cut(&p3, &br, &[0, 1]), Err(BrambleError::HypothesisUnmet));

        // On the 2x3 grid both crosses are the first row minus its last
        // vertex; U = that set excludes A and B.
        let (g, br) = make_grid_bramble(1, 2).unwrap();
        let u = [0, 1];
        let s = hitting_set_from_cut(&g, &br, &u).unwrap();
        let cut = g.cut_size(&g.mask_of(&u));
        assert!(s.size() <= cut + 1);
        assert!(br.is_hit_by(&s.vertices));
    }

    #[test]
    fn grid_bramble_parameters() {
        assert!(matches!(make_grid_bramble(0, 2), Err(BrambleError::InvalidParameters(_))));
        assert!(matches!(make_grid_bramble(3, 2), Err(BrambleError::InvalidParameters(_))));
    }
}
