//! Tiles, regions and basic data.
//!
//! A tile is a finite hereditary subset of the quarter plane containing the
//! origin. Basic data attaches an alphabet size `q`, a trace residue and a
//! rule (one residue per cell) to a tile; everything downstream is built
//! from the congruence that the rule-weighted sum over each tile translate
//! equals the trace mod `q`.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TileError {
    #[error("tile rows must be non-empty")]
    EmptyRows,
    #[error("tile rows must be weakly decreasing (row {0} is longer than row {1})")]
    RowsNotDecreasing(usize, usize),
    #[error("degree must be non-negative, got ({0}, {1})")]
    NegativeDegree(i64, i64),
    #[error("{0} is not invertible mod {1}")]
    NotInvertible(u64, u64),
    #[error("alphabet size must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("rule value missing for cell ({0}, {1})")]
    RuleIncomplete(i64, i64),
    #[error("rule mentions ({0}, {1}) which is not a tile cell")]
    RuleCellUnknown(i64, i64),
}

/// A lattice point. `x` is the column index, `y` the row index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pt {
    pub x: i64,
    pub y: i64,
}

pub const ORIGIN: Pt = Pt { x: 0, y: 0 };
pub const E1: Pt = Pt { x: 1, y: 0 };
pub const E2: Pt = Pt { x: 0, y: 1 };

impl std::ops::Add for Pt {
    type Output = Pt;
    fn add(self, other: Pt) -> Pt {
        Pt::new(self.x + other.x, self.y + other.y)
    }
}

impl std::ops::Sub for Pt {
    type Output = Pt;
    fn sub(self, other: Pt) -> Pt {
        Pt::new(self.x - other.x, self.y - other.y)
    }
}

impl Pt {
    pub const fn new(x: i64, y: i64) -> Self {
        Pt { x, y }
    }

    /// Coordinate-wise maximum.
    pub fn join(self, other: Pt) -> Pt {
        Pt::new(self.x.max(other.x), self.y.max(other.y))
    }

    /// Coordinate-wise minimum.
    pub fn meet(self, other: Pt) -> Pt {
        Pt::new(self.x.min(other.x), self.y.min(other.y))
    }

    /// Coordinate-wise `<=`.
    pub fn leq(self, other: Pt) -> bool {
        self.x <= other.x && self.y <= other.y
    }

    pub fn is_nonnegative(self) -> bool {
        self.x >= 0 && self.y >= 0
    }
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A finite hereditary subset of the quarter plane containing the origin,
/// stored as row lengths (longest row first) plus the cell list in canonical
/// order (ascending by `(x, y)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    rows: Vec<u32>,
    cells: Vec<Pt>,
}

/// Derived measurements of a tile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileMetrics {
    /// Coordinate-wise maximum over the cells.
    pub extent: Pt,
    /// `col_tops[x]` is the row index of the top cell in column `x`.
    pub col_tops: Vec<i64>,
    /// `row_ends[y]` is the column index of the last cell in row `y`.
    pub row_ends: Vec<i64>,
    pub size: usize,
}

impl Tile {
    /// Builds a tile from its row lengths, longest row first. Weakly
    /// decreasing lengths are exactly the hereditary sets, so invalid inputs
    /// are rejected here and nowhere else.
    pub fn from_rows(rows: &[u32]) -> Result<Tile, TileError> {
        if rows.is_empty() {
            return Err(TileError::EmptyRows);
        }
        for (i, pair) in rows.windows(2).enumerate() {
            if pair[1] > pair[0] {
                return Err(TileError::RowsNotDecreasing(i + 1, i));
            }
        }
        if rows.contains(&0) {
            return Err(TileError::EmptyRows);
        }
        let mut cells = Vec::new();
        for (y, &len) in rows.iter().enumerate() {
            for x in 0..len {
                cells.push(Pt::new(x as i64, y as i64));
            }
        }
        cells.sort();
        Ok(Tile {
            rows: rows.to_vec(),
            cells,
        })
    }

    /// Row lengths, longest first. Inverse of [`Tile::from_rows`].
    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Cells in canonical order (ascending by `(x, y)`).
    pub fn cells(&self) -> &[Pt] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: Pt) -> bool {
        p.y >= 0
            && (p.y as usize) < self.rows.len()
            && p.x >= 0
            && p.x < self.rows[p.y as usize] as i64
    }

    /// Index of `p` in the canonical cell order.
    pub fn cell_index(&self, p: Pt) -> Option<usize> {
        self.cells.binary_search(&p).ok()
    }

    pub fn metrics(&self) -> TileMetrics {
        let c2 = self.rows.len() as i64 - 1;
        let c1 = self.rows[0] as i64 - 1;
        let col_tops = (0..=c1)
            .map(|x| self.rows.iter().filter(|&&len| (len as i64) > x).count() as i64 - 1)
            .collect();
        let row_ends = self.rows.iter().map(|&len| len as i64 - 1).collect();
        TileMetrics {
            extent: Pt::new(c1, c2),
            col_tops,
            row_ends,
            size: self.cells.len(),
        }
    }

    /// Reflection about the main diagonal.
    pub fn conjugate(&self) -> Tile {
        let m = self.metrics();
        let rows: Vec<u32> = m.col_tops.iter().map(|&h| (h + 1) as u32).collect();
        Tile::from_rows(&rows).expect("column tops of a tile are weakly decreasing")
    }
}

impl fmt::Display for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// The union of the tile translates by every `m` with `0 <= m <= degree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub degree: Pt,
    cells: Vec<Pt>,
}

impl Region {
    pub fn of_degree(tile: &Tile, degree: Pt) -> Result<Region, TileError> {
        if !degree.is_nonnegative() {
            return Err(TileError::NegativeDegree(degree.x, degree.y));
        }
        let m = tile.metrics();
        let mut cells = Vec::new();
        for x in 0..=(m.extent.x + degree.x) {
            for y in 0..=(m.extent.y + degree.y) {
                let p = Pt::new(x, y);
                if region_contains(tile, degree, p) {
                    cells.push(p);
                }
            }
        }
        cells.sort();
        Ok(Region { degree, cells })
    }

    pub fn cells(&self) -> &[Pt] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Membership in the degree-`n` region. By heredity, `p` lies in some
/// translate `T + m` with `0 <= m <= n` if and only if it lies in the one
/// with `m` clamped as large as possible.
pub fn region_contains(tile: &Tile, n: Pt, p: Pt) -> bool {
    if !p.is_nonnegative() {
        return false;
    }
    let r = Pt::new((p.x - n.x).max(0), (p.y - n.y).max(0));
    tile.contains(r)
}

/// Multiplicative inverse mod `q`.
pub fn mod_inverse(a: u64, q: u64) -> Result<u64, TileError> {
    debug_assert!(q >= 2);
    let a = a % q;
    let (mut r0, mut r1) = (q as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let d = r0 / r1;
        (r0, r1) = (r1, r0 - d * r1);
        (s0, s1) = (s1, s0 - d * s1);
    }
    if r0 != 1 {
        return Err(TileError::NotInvertible(a, q));
    }
    Ok(s0.rem_euclid(q as i128) as u64)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Validation flags derived from basic data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataFlags {
    /// The rule values at the row-0 end and column-0 top are units mod q.
    pub invertible_corners: bool,
    /// Additionally the origin value is a unit and the tile extends in both
    /// directions.
    pub three_invertible_corners: bool,
    /// Smallest residue `c` with `c * sum(rule) = trace (mod q)`, if any.
    pub trace_shift_constant: Option<u64>,
}

/// A tile together with alphabet size, trace and rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicData {
    tile: Tile,
    q: u64,
    trace: u64,
    /// Rule values aligned with the canonical cell order.
    rule: Vec<u64>,
}

impl BasicData {
    /// Basic data with the constant rule 1.
    pub fn new(tile: Tile, q: u64, trace: u64) -> Result<BasicData, TileError> {
        if q < 2 {
            return Err(TileError::ModulusTooSmall(q));
        }
        let rule = vec![1; tile.len()];
        Ok(BasicData {
            tile,
            q,
            trace: trace % q,
            rule,
        })
    }

    /// Basic data with an explicit rule given as (cell, value) pairs. The
    /// rule must cover every cell exactly.
    pub fn with_rule(
        tile: Tile,
        q: u64,
        trace: u64,
        pairs: &[(Pt, u64)],
    ) -> Result<BasicData, TileError> {
        if q < 2 {
            return Err(TileError::ModulusTooSmall(q));
        }
        let mut rule = vec![None; tile.len()];
        for &(cell, value) in pairs {
            let idx = tile
                .cell_index(cell)
                .ok_or(TileError::RuleCellUnknown(cell.x, cell.y))?;
            rule[idx] = Some(value % q);
        }
        let rule = rule
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(TileError::RuleIncomplete(tile.cells()[i].x, tile.cells()[i].y)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BasicData {
            tile,
            q,
            trace: trace % q,
            rule,
        })
    }

    pub fn tile(&self) -> &Tile {
        &self.tile
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn trace(&self) -> u64 {
        self.trace
    }

    pub fn rule(&self) -> &[u64] {
        &self.rule
    }

    pub fn rule_at(&self, cell: Pt) -> u64 {
        self.rule[self.tile.cell_index(cell).expect("rule_at: not a tile cell")]
    }

    pub fn with_trace(&self, trace: u64) -> BasicData {
        BasicData {
            tile: self.tile.clone(),
            q: self.q,
            trace: trace % self.q,
            rule: self.rule.clone(),
        }
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.q
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.q - a % self.q) % self.q
    }

    pub fn flags(&self) -> DataFlags {
        let m = self.tile.metrics();
        let corner_x = self.rule_at(Pt::new(m.extent.x, 0));
        let corner_y = self.rule_at(Pt::new(0, m.extent.y));
        let invertible_corners = gcd(corner_x, self.q) == 1 && gcd(corner_y, self.q) == 1;
        let three_invertible_corners = invertible_corners
            && gcd(self.rule_at(ORIGIN), self.q) == 1
            && m.extent.x >= 1
            && m.extent.y >= 1;
        DataFlags {
            invertible_corners,
            three_invertible_corners,
            trace_shift_constant: self.trace_shift_constant(),
        }
    }

    /// Smallest residue `c` solving `c * sum(rule) = trace (mod q)`.
    pub fn trace_shift_constant(&self) -> Option<u64> {
        let s = self.rule.iter().fold(0u64, |acc, &w| self.add(acc, w));
        let g = gcd(s, self.q);
        let divides = if g == 0 { self.trace == 0 } else { self.trace.is_multiple_of(g) };
        if !divides {
            return None;
        }
        if s == 0 {
            return Some(0);
        }
        let qg = self.q / g;
        if qg == 1 {
            return Some(0);
        }
        let inv = mod_inverse((s / g) % qg, qg).expect("s/g is a unit mod q/g");
        Some(((self.trace / g) as u128 * inv as u128 % qg as u128) as u64)
    }
}
