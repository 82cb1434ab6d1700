//! Maker/Breaker games on tree hypergraphs where Maker wins with a pairing
//! strategy, their translation into unsatisfiable bounded-occurrence CNF
//! formulas, and exact verifiers for every claimed property.

pub mod coloring;
pub mod constructions;
pub mod dyadic;
pub mod error;
pub mod game;
pub mod hypergraph;
pub mod sat;
pub mod sequence;
pub mod tree;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, HypergraphJson, Pairing, PairingStrategy, VertexId};
pub use sequence::DistanceSequence;
pub use tree::{BinaryTree, TreeBuilder, TreeReport};
