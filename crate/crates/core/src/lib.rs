//! Divisor theory on finite multigraphs: chip-firing, reduced divisors,
//! rank and gonality, brambles and treewidth, harmonic morphisms, and
//! rational metric graphs.

pub mod bramble;
pub mod chipfire;
pub mod enumerate;
pub mod family;
pub mod formats;
pub mod gonality;
pub mod graph;
pub mod harmonic;
pub mod metric;
pub mod theorem;
pub mod treewidth;

pub use chipfire::{Divisor, FiringScript, LevelChain};
pub use graph::{Edge, EdgeId, MultiGraph, Vertex};
