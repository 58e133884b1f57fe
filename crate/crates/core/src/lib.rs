pub mod bitset;
pub mod bounds;
pub mod constructive;
pub mod error;
pub mod generators;
pub mod graph;
pub mod invariant;
pub mod io;
pub mod iso;
pub mod naive;
pub mod solvers;
pub mod verify;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{Graph, PieceKind};
pub use invariant::{Invariant, Mode};
