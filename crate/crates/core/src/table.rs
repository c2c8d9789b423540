//! The bundled reference table: expected K-group orders for small tiles
//! over alphabets of size 2 to 5, one tile per conjugate pair, with trace 0
//! and the constant rule 1. Cells left blank in the reference are omitted
//! rather than extrapolated.

use crate::graph::Lambda;
use crate::ktheory::{self, KError, KTheoryReport};
use crate::tiles::{BasicData, Tile};
use num_bigint::BigInt;

/// One filled cell of the reference table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableCell {
    pub rows: &'static [u32],
    pub q: u64,
    pub k0: u64,
    pub k1: u64,
}

macro_rules! cells {
    ($($rows:expr => $q:expr, $k0:expr, $k1:expr;)*) => {
        &[$(TableCell { rows: &$rows, q: $q, k0: $k0, k1: $k1 },)*]
    };
}

/// Every filled cell of the reference table, in row-major reading order
/// (tiles by size, then by alphabet).
pub const REFERENCE_TABLE: &[TableCell] = cells![
    [3] => 2, 3, 3;       [3] => 3, 8, 8;       [3] => 4, 15, 15;     [3] => 5, 24, 24;
    [2, 1] => 2, 1, 1;    [2, 1] => 3, 2, 2;    [2, 1] => 4, 3, 3;    [2, 1] => 5, 4, 4;
    [4] => 2, 7, 7;       [4] => 3, 26, 26;     [4] => 4, 63, 63;     [4] => 5, 124, 124;
    [3, 1] => 2, 1, 1;    [3, 1] => 3, 2, 2;    [3, 1] => 4, 3, 3;    [3, 1] => 5, 4, 4;
    [2, 2] => 2, 1, 1;    [2, 2] => 3, 2, 2;    [2, 2] => 4, 3, 3;    [2, 2] => 5, 4, 4;
    [5] => 2, 15, 15;     [5] => 3, 80, 80;     [5] => 4, 255, 255;   [5] => 5, 624, 624;
    [4, 1] => 2, 1, 1;    [4, 1] => 3, 2, 2;    [4, 1] => 4, 3, 3;    [4, 1] => 5, 4, 4;
    [3, 2] => 2, 1, 1;    [3, 2] => 3, 2, 2;    [3, 2] => 4, 3, 3;    [3, 2] => 5, 4, 4;
    [3, 1, 1] => 2, 3, 3; [3, 1, 1] => 3, 8, 8; [3, 1, 1] => 4, 15, 15; [3, 1, 1] => 5, 24, 24;
    [6] => 2, 31, 31;     [6] => 3, 242, 242;   [6] => 4, 1023, 1023;
    [5, 1] => 2, 1, 1;    [5, 1] => 3, 2, 2;    [5, 1] => 4, 3, 3;
    [4, 2] => 2, 1, 1;    [4, 2] => 3, 2, 2;    [4, 2] => 4, 3, 3;
    [4, 1, 1] => 2, 1, 1; [4, 1, 1] => 3, 2, 2; [4, 1, 1] => 4, 3, 3;
    [3, 3] => 2, 1, 1;    [3, 3] => 3, 2, 2;    [3, 3] => 4, 3, 3;
    [3, 2, 1] => 2, 3, 3; [3, 2, 1] => 3, 8, 8; [3, 2, 1] => 4, 15, 15;
    [7] => 2, 63, 63;     [7] => 3, 728, 728;
    [6, 1] => 2, 1, 1;    [6, 1] => 3, 2, 2;
    [5, 2] => 2, 1, 1;    [5, 2] => 3, 2, 2;
    [5, 1, 1] => 2, 3, 3; [5, 1, 1] => 3, 8, 8;
    [4, 3] => 2, 1, 1;    [4, 3] => 3, 2, 2;
    [4, 2, 1] => 2, 1, 1; [4, 2, 1] => 3, 2, 2;
    [4, 1, 1, 1] => 2, 7, 7; [4, 1, 1, 1] => 3, 26, 26;
    [3, 3, 1] => 2, 3, 3; [3, 3, 1] => 3, 8, 8;
];

/// Computes the K-theory of one cell (trace 0, constant rule 1).
pub fn compute_cell(rows: &[u32], q: u64, vertex_limit: u128) -> Result<KTheoryReport, KError> {
    let tile = Tile::from_rows(rows)?;
    let data = BasicData::new(tile, q, 0)?;
    let g = Lambda::new(data, vertex_limit)?;
    ktheory::compute_k_theory(&g)
}

/// Whether a computed report reproduces the expected orders of a cell.
pub fn cell_matches(cell: &TableCell, report: &KTheoryReport) -> bool {
    report.k0_order() == Some(BigInt::from(cell.k0))
        && report.k1_order() == Some(BigInt::from(cell.k1))
}
