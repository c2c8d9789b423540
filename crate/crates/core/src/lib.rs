//! Rank-2 graphs built from plane tiles, with exact K-theory.
//!
//! The pipeline: a tile plus `(q, trace, rule)` determines a vertex set (the
//! constraint-satisfying fillings of the tile), a bicoloured skeleton with
//! commuting vertex matrices, a path category with unique factorisation, and
//! two integer block maps whose cokernel/kernel data give the K-groups of the
//! associated algebra. Everything is computed in exact integer arithmetic.

pub mod dynamics;
pub mod graph;
pub mod ktheory;
pub mod subshift;
pub mod table;
pub mod tiles;
pub mod zlin;

pub use graph::{GraphError, Lambda, Path, VertexMatrices};
pub use ktheory::{KError, KTheoryReport};
pub use tiles::{BasicData, DataFlags, Pt, Region, Tile, TileError};
pub use zlin::{AbelianGroup, IntMatrix, ZlinError};
