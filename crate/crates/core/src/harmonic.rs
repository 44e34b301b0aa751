//! Harmonic morphisms between multigraphs and the certificates built on them.
//!
//! A morphism sends vertices to vertices and each edge either to an edge
//! joining the images of its ends or, when both ends share an image, to that
//! vertex (a vertical edge). It is harmonic when, at every vertex `v`, each
//! target edge at `φ(v)` has the same number `m(v)` of preimages among the
//! edges at `v`; the degree is the common size of the edge fibres.

use thiserror::Error;

use crate::chipfire::{self, ChipError, Divisor, FiringScript};
use crate::gonality::{self, GonalityError};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::treewidth::{self, TreewidthError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("malformed morphism: {0}")]
    Malformed(String),
    #[error("edge {edge} is not mapped compatibly with its ends")]
    NotAMorphism { edge: EdgeId },
    #[error("not harmonic at vertex {vertex}: target edge {first} has {first_count} preimages there, target edge {second} has {second_count}")]
    NotHarmonic { vertex: Vertex, first: EdgeId, first_count: u64, second: EdgeId, second_count: u64 },
    #[error("edge fibres have different sizes: target edge {first} has {first_count}, target edge {second} has {second_count}")]
    InconsistentDegree { first: EdgeId, first_count: u64, second: EdgeId, second_count: u64 },
    #[error("degenerate at vertex {vertex} (multiplicity 0)")]
    Degenerate { vertex: Vertex },
    #[error("edge {edge} is vertical, so the morphism is not a homomorphism")]
    NotHomomorphism { edge: EdgeId },
    #[error("edge {edge} has a non-positive index")]
    NonPositiveIndex { edge: EdgeId },
    #[error("target divisor does not have positive rank")]
    TargetDivisorNotPositiveRank,
    #[error("pullback of a positive-rank divisor lost positive rank")]
    PullbackNotPositiveRank,
    #[error("invalid refinement witness: {0}")]
    InvalidWitness(String),
    #[error("target of the certificate is not a tree")]
    TargetNotATree,
    #[error("graph is not a refinement of the given graph")]
    NotARefinement,
    #[error("certificate chain fails: {0}")]
    ChainViolated(String),
    #[error(transparent)]
    Chip(#[from] ChipError),
    #[error(transparent)]
    Gonality(#[from] GonalityError),
    #[error(transparent)]
    Treewidth(#[from] TreewidthError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeImage {
    Edge(EdgeId),
    Vertex(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: MultiGraph,
    pub target: MultiGraph,
    pub vertex_map: Vec<Vertex>,
    pub edge_map: Vec<EdgeImage>,
}

/// Levels of [`check_morphism`]; each includes the previous ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Requirement {
    None,
    Harmonic,
    Nondegenerate,
    Homomorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicData {
    pub m: Vec<u64>,
    pub degree: u64,
}

impl Morphism {
    pub fn new(
        source: MultiGraph,
        target: MultiGraph,
        vertex_map: Vec<Vertex>,
        edge_map: Vec<EdgeImage>,
    ) -> Result<Self, MorphismError> {
        let phi = Morphism { source, target, vertex_map, edge_map };
        phi.check_shape()?;
        Ok(phi)
    }

    /// The identity morphism of `g`.
    pub fn identity(g: &MultiGraph) -> Self {
        Morphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.vertex_count()).collect(),
            edge_map: (0..g.edge_count()).map(EdgeImage::Edge).collect(),
        }
    }

    fn check_shape(&self) -> Result<(), MorphismError> {
        let (n, m) = (self.source.vertex_count(), self.source.edge_count());
        let (tn, tm) = (self.target.vertex_count(), self.target.edge_count());
        if self.vertex_map.len() != n {
            return Err(MorphismError::Malformed(format!("vertex map has {} entries, expected {n}", self.vertex_map.len())));
        }
        if self.edge_map.len() != m {
            return Err(MorphismError::Malformed(format!("edge map has {} entries, expected {m}", self.edge_map.len())));
        }
        if let Some(v) = self.vertex_map.iter().position(|&w| w >= tn) {
            return Err(MorphismError::Malformed(format!("vertex {v} maps outside the target")));
        }
        for (e, img) in self.edge_map.iter().enumerate() {
            let ok = match *img {
                EdgeImage::Edge(j) => j < tm,
                EdgeImage::Vertex(w) => w < tn,
            };
            if !ok {
                return Err(MorphismError::Malformed(format!("edge {e} maps outside the target")));
            }
        }
        Ok(())
    }

    fn check_incidence(&self) -> Result<(), MorphismError> {
        for (e, edge) in self.source.edges().iter().enumerate() {
            let (a, b) = (self.vertex_map[edge.tail], self.vertex_map[edge.head]);
            let ok = match self.edge_map[e] {
                EdgeImage::Vertex(w) => a == w && b == w,
                EdgeImage::Edge(j) => {
                    let t = self.target.edge(j);
                    (t.tail, t.head) == (a, b) || (t.tail, t.head) == (b, a)
                }
            };
            if !ok {
                return Err(MorphismError::NotAMorphism { edge: e });
            }
        }
        Ok(())
    }
}

/// Multiplicities and degree with edge `e` counted `weights[e]` times.
fn harmonic_data(phi: &Morphism, weights: &[u64]) -> Result<HarmonicData, MorphismError> {
    let n = phi.source.vertex_count();
    let tm = phi.target.edge_count();
    let mut m = vec![0u64; n];
    let mut count = vec![0u64; tm];
    for v in 0..n {
        let w = phi.vertex_map[v];
        for &(_, e) in phi.source.incident(v) {
            if let EdgeImage::Edge(j) = phi.edge_map[e] {
                count[j] += weights[e];
            }
        }
        let mut first: Option<(EdgeId, u64)> = None;
        for &(_, j) in phi.target.incident(w) {
            let c = count[j];
            match first {
                None => first = Some((j, c)),
                Some((f, fc)) if fc != c => {
                    return Err(MorphismError::NotHarmonic {
                        vertex: v,
                        first: f,
                        first_count: fc,
                        second: j,
                        second_count: c,
                    })
                }
                _ => {}
            }
        }
        m[v] = first.map_or(0, |(_, c)| c);
        for &(_, e) in phi.source.incident(v) {
            if let EdgeImage::Edge(j) = phi.edge_map[e] {
                count[j] = 0;
            }
        }
    }
    let mut fibre = vec![0u64; tm];
    for (e, img) in phi.edge_map.iter().enumerate() {
        if let EdgeImage::Edge(j) = *img {
            fibre[j] += weights[e];
        }
    }
    if let Some((j, &c)) = fibre.iter().enumerate().find(|&(_, &c)| c != fibre[0]) {
        return Err(MorphismError::InconsistentDegree { first: 0, first_count: fibre[0], second: j, second_count: c });
    }
    Ok(HarmonicData { m, degree: fibre.first().copied().unwrap_or(0) })
}

/// Verifies `phi` up to the requested level. Harmonic data is returned
/// whenever the morphism is harmonic, even if not requested.
pub fn check_morphism(phi: &Morphism, require: Requirement) -> Result<Option<HarmonicData>, MorphismError> {
    phi.check_shape()?;
    phi.check_incidence()?;
    let data = match harmonic_data(phi, &vec![1; phi.source.edge_count()]) {
        Ok(d) => Some(d),
        Err(e) if require >= Requirement::Harmonic => return Err(e),
        Err(_) => None,
    };
    if require >= Requirement::Nondegenerate {
        check_nondegenerate(data.as_ref().expect("harmonic checked"))?;
    }
    if require >= Requirement::Homomorphism {
        if let Some(e) = phi.edge_map.iter().position(|img| matches!(img, EdgeImage::Vertex(_))) {
            return Err(MorphismError::NotHomomorphism { edge: e });
        }
    }
    Ok(data)
}

fn check_nondegenerate(data: &HarmonicData) -> Result<(), MorphismError> {
    match data.m.iter().position(|&x| x == 0) {
        Some(v) => Err(MorphismError::Degenerate { vertex: v }),
        None => Ok(()),
    }
}

fn require_harmonic(phi: &Morphism) -> Result<HarmonicData, MorphismError> {
    Ok(check_morphism(phi, Requirement::Harmonic)?.expect("harmonic checked"))
}

/// `φ*(D)(v) = m(v) D(φ(v))`.
pub fn pullback(phi: &Morphism, d: &Divisor) -> Result<Divisor, MorphismError> {
    let data = require_harmonic(phi)?;
    pullback_with(phi, &data, d)
}

fn pullback_with(phi: &Morphism, data: &HarmonicData, d: &Divisor) -> Result<Divisor, MorphismError> {
    if d.len() != phi.target.vertex_count() {
        return Err(ChipError::from(crate::graph::GraphError::DimensionMismatch {
            expected: phi.target.vertex_count(),
            actual: d.len(),
        })
        .into());
    }
    Ok(Divisor::new(phi.vertex_map.iter().zip(&data.m).map(|(&w, &m)| m as i64 * d[w]).collect()))
}

/// `x(u) = y(φ(u))`; satisfies `φ*(Q' y) = Q x`.
pub fn pullback_script(phi: &Morphism, y: &FiringScript) -> Result<FiringScript, MorphismError> {
    require_harmonic(phi)?;
    if y.script.len() != phi.target.vertex_count() {
        return Err(MorphismError::Malformed("script length differs from target vertex count".into()));
    }
    Ok(FiringScript::new(phi.vertex_map.iter().map(|&w| y.script[w]).collect()))
}

/// A morphism whose non-vertical edges carry positive indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedMorphism {
    pub base: Morphism,
    /// One entry per source edge; entries of vertical edges are ignored.
    pub indices: Vec<u64>,
}

impl IndexedMorphism {
    pub fn unit(base: Morphism) -> Self {
        let indices = vec![1; base.source.edge_count()];
        IndexedMorphism { base, indices }
    }

    fn check_indices(&self) -> Result<(), MorphismError> {
        if self.indices.len() != self.base.source.edge_count() {
            return Err(MorphismError::Malformed("index list length differs from edge count".into()));
        }
        for (e, (&r, img)) in self.indices.iter().zip(&self.base.edge_map).enumerate() {
            if r == 0 && matches!(img, EdgeImage::Edge(_)) {
                return Err(MorphismError::NonPositiveIndex { edge: e });
            }
        }
        Ok(())
    }

    fn weights(&self) -> Vec<u64> {
        self.indices
            .iter()
            .zip(&self.base.edge_map)
            .map(|(&r, img)| if matches!(img, EdgeImage::Edge(_)) { r } else { 1 })
            .collect()
    }
}

/// Harmonic check with each edge counted by its index.
pub fn check_indexed(psi: &IndexedMorphism, require: Requirement) -> Result<Option<HarmonicData>, MorphismError> {
    psi.check_indices()?;
    let phi = &psi.base;
    phi.check_shape()?;
    phi.check_incidence()?;
    let data = match harmonic_data(phi, &psi.weights()) {
        Ok(d) => Some(d),
        Err(e) if require >= Requirement::Harmonic => return Err(e),
        Err(_) => None,
    };
    if require >= Requirement::Nondegenerate {
        check_nondegenerate(data.as_ref().expect("harmonic checked"))?;
    }
    if require >= Requirement::Homomorphism {
        if let Some(e) = phi.edge_map.iter().position(|img| matches!(img, EdgeImage::Vertex(_))) {
            return Err(MorphismError::NotHomomorphism { edge: e });
        }
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub graph: MultiGraph,
    pub morphism: Morphism,
    /// Source edge `e` is edge `embedding[e]` of the expansion (its first copy).
    pub embedding: Vec<EdgeId>,
}

/// Replaces each non-vertical edge by `r_e` consecutive parallel copies with
/// the same image.
pub fn expand_indexed(psi: &IndexedMorphism) -> Result<Expansion, MorphismError> {
    psi.check_indices()?;
    psi.base.check_shape()?;
    let src = &psi.base.source;
    let mut pairs = Vec::new();
    let mut edge_map = Vec::new();
    let mut embedding = Vec::with_capacity(src.edge_count());
    for (e, edge) in src.edges().iter().enumerate() {
        embedding.push(pairs.len());
        let copies = match psi.base.edge_map[e] {
            EdgeImage::Edge(_) => psi.indices[e],
            EdgeImage::Vertex(_) => 1,
        };
        for _ in 0..copies {
            pairs.push((edge.tail, edge.head));
            edge_map.push(psi.base.edge_map[e]);
        }
    }
    let graph = MultiGraph::new(src.vertex_count(), &pairs).map_err(ChipError::from)?;
    let morphism = Morphism {
        source: graph.clone(),
        target: psi.base.target.clone(),
        vertex_map: psi.base.vertex_map.clone(),
        edge_map,
    };
    Ok(Expansion { graph, morphism, embedding })
}

/// Pulls back a positive-rank target divisor along a non-degenerate harmonic
/// morphism; returns the pullback (verified to have positive rank) and the
/// bound `deg(D') deg(φ)` on the gonality of the source.
pub fn gonality_bound_certificate(phi: &Morphism, d: &Divisor) -> Result<(Divisor, i64), MorphismError> {
    let data = check_morphism(phi, Requirement::Nondegenerate)?.expect("harmonic checked");
    if !d.is_effective() || !chipfire::has_positive_rank(&phi.target, d)? {
        return Err(MorphismError::TargetDivisorNotPositiveRank);
    }
    let pulled = pullback_with(phi, &data, d)?;
    if !chipfire::has_positive_rank(&phi.source, &pulled)? {
        return Err(MorphismError::PullbackNotPositiveRank);
    }
    Ok((pulled, d.degree() * data.degree as i64))
}

/// Original vertex `v` sits at `vertex_map[v]` in the refinement; original
/// edge `e` became the path `edge_paths[e]`, listed from tail to head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementWitness {
    pub vertex_map: Vec<Vertex>,
    pub edge_paths: Vec<Vec<EdgeId>>,
}

/// Whether `h` is `g` with edges subdivided along the witness paths plus
/// trees hanging off. A witness that does not even describe an embedding is
/// an error; a well-formed witness on a graph of the wrong shape gives
/// `Ok(false)`.
pub fn check_refinement(g: &MultiGraph, h: &MultiGraph, w: &RefinementWitness) -> Result<bool, MorphismError> {
    let bad = |msg: String| Err(MorphismError::InvalidWitness(msg));
    let (hn, hm) = (h.vertex_count(), h.edge_count());
    if w.vertex_map.len() != g.vertex_count() {
        return bad(format!("vertex map has {} entries, expected {}", w.vertex_map.len(), g.vertex_count()));
    }
    if w.edge_paths.len() != g.edge_count() {
        return bad(format!("{} edge paths given, expected {}", w.edge_paths.len(), g.edge_count()));
    }
    let mut core = vec![false; hn];
    for (v, &x) in w.vertex_map.iter().enumerate() {
        if x >= hn {
            return bad(format!("vertex {v} maps outside the refinement"));
        }
        if std::mem::replace(&mut core[x], true) {
            return bad(format!("vertex {v} shares its image with another vertex"));
        }
    }
    let mut used = vec![false; hm];
    for (e, path) in w.edge_paths.iter().enumerate() {
        if path.is_empty() {
            return bad(format!("path of edge {e} is empty"));
        }
        let edge = g.edge(e);
        let end = w.vertex_map[edge.head];
        let mut at = w.vertex_map[edge.tail];
        for (step, &f) in path.iter().enumerate() {
            if f >= hm {
                return bad(format!("path of edge {e} uses a missing edge {f}"));
            }
            if std::mem::replace(&mut used[f], true) {
                return bad(format!("edge {f} lies on two paths"));
            }
            let hf = h.edge(f);
            if hf.tail != at && hf.head != at {
                return bad(format!("path of edge {e} breaks at step {step}"));
            }
            at = hf.other(at);
            let last = step + 1 == path.len();
            if last {
                if at != end {
                    return bad(format!("path of edge {e} does not end at the image of its head"));
                }
            } else if std::mem::replace(&mut core[at], true) {
                return bad(format!("path of edge {e} revisits vertex {at}"));
            }
        }
    }
    if !h.is_connected() {
        return Ok(false);
    }
    let core_vertices = core.iter().filter(|&&c| c).count();
    let core_edges = used.iter().filter(|&&u| u).count();
    for (f, e) in h.edges().iter().enumerate() {
        if !used[f] && core[e.tail] && core[e.head] {
            return Ok(false);
        }
    }
    Ok(hm - core_edges == hn - core_vertices)
}

fn is_tree(g: &MultiGraph) -> bool {
    g.is_connected() && g.edge_count() + 1 == g.vertex_count()
}

/// A claimed bound `sgon(G) <= d`: a refinement of `G` and an indexed
/// harmonic homomorphism from it to a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableCertificate {
    pub refinement: RefinementWitness,
    pub morphism: IndexedMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableReport {
    pub degree: u64,
    pub dgon_expanded: i64,
    pub tw_expanded: usize,
    pub tw_original: usize,
}

/// Verifies a stable-gonality certificate and evaluates the chain
/// `d >= dgon(H) >= tw(H) >= tw(G)` on the expanded refinement `H`.
pub fn verify_stable_certificate(g: &MultiGraph, cert: &StableCertificate) -> Result<StableReport, MorphismError> {
    let psi = &cert.morphism;
    if !check_refinement(g, &psi.base.source, &cert.refinement)? {
        return Err(MorphismError::NotARefinement);
    }
    if !is_tree(&psi.base.target) {
        return Err(MorphismError::TargetNotATree);
    }
    let data = check_indexed(psi, Requirement::Homomorphism)?.expect("harmonic checked");
    let expansion = expand_indexed(psi)?;
    let expanded_data = check_morphism(&expansion.morphism, Requirement::Homomorphism)?.expect("harmonic checked");
    if expanded_data != data {
        return Err(MorphismError::ChainViolated("expansion changes the harmonic data".into()));
    }
    let h = &expansion.graph;
    let dgon = gonality::gonality(h, None)?.value;
    let (tw_h, _) = treewidth::treewidth_exact(h, &[])?;
    let (tw_g, _) = treewidth::treewidth_exact(g, &[])?;
    let report = StableReport { degree: data.degree, dgon_expanded: dgon, tw_expanded: tw_h, tw_original: tw_g };
    if !(data.degree as i64 >= dgon && dgon >= tw_h as i64 && tw_h >= tw_g) {
        return Err(MorphismError::ChainViolated(format!("{report:?}")));
    }
    Ok(report)
}
