//! The rank-2 graph of a set of basic data: vertices, coloured vertex
//! matrices, and the path calculus (composition, factorisation, segments),
//! together with connectivity and aperiodicity witnesses.
//!
//! A vertex is a filling of the tile satisfying the rule congruence. A path
//! of degree `n` is a filling of the degree-`n` region whose every tile
//! translate is a vertex; its range is the filling at the origin translate
//! and its source the filling at the top translate. Unique factorisation
//! holds whenever the rule has invertible corners: composition extends the
//! union of two overlapping grids one forced cell at a time.

use crate::tiles::{mod_inverse, region_contains, BasicData, DataFlags, Pt, TileMetrics, E1, E2, ORIGIN};
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("the rule does not have invertible corners")]
    CornersNotInvertible,
    #[error("vertex enumeration would produce {count} vertices, above the limit {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },
    #[error("source of the first path differs from range of the second")]
    SourceRangeMismatch,
    #[error("degree point out of range")]
    DegreeOutOfRange,
    #[error("{c} does not solve c * sum(rule) = trace (mod q)")]
    ConstantNotValid { c: u64 },
    #[error("vertex values do not define a vertex of this graph")]
    UnknownVertex,
    #[error("enumeration work {work} exceeds the limit {limit}")]
    WorkLimitExceeded { work: u128, limit: u128 },
}

const EMPTY: u64 = u64::MAX;

/// A path: a filling of the degree-`n` region. Cells outside the region
/// (the bite in the top-right corner) hold a sentinel and are never read.
#[derive(Clone, PartialEq, Eq)]
pub struct Path {
    degree: Pt,
    width: i64,
    height: i64,
    values: Vec<u64>,
}

impl Path {
    pub(crate) fn blank(metrics: &TileMetrics, degree: Pt) -> Path {
        let width = metrics.extent.x + 1 + degree.x;
        let height = metrics.extent.y + 1 + degree.y;
        Path {
            degree,
            width,
            height,
            values: vec![EMPTY; (width * height) as usize],
        }
    }

    pub fn degree(&self) -> Pt {
        self.degree
    }

    fn idx(&self, p: Pt) -> usize {
        debug_assert!(p.x >= 0 && p.x < self.width && p.y >= 0 && p.y < self.height);
        (p.y * self.width + p.x) as usize
    }

    pub fn value_at(&self, p: Pt) -> u64 {
        let v = self.values[self.idx(p)];
        debug_assert!(v != EMPTY, "read of an unset cell {p}");
        v
    }

    pub(crate) fn set(&mut self, p: Pt, v: u64) {
        let i = self.idx(p);
        self.values[i] = v;
    }

    /// Value if the cell lies inside the region and is set.
    pub fn try_value(&self, p: Pt) -> Option<u64> {
        if p.x < 0 || p.x >= self.width || p.y < 0 || p.y >= self.height {
            return None;
        }
        let v = self.values[self.idx(p)];
        (v != EMPTY).then_some(v)
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Path of degree ({}, {}):", self.degree.x, self.degree.y)?;
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                match self.values[(y * self.width + x) as usize] {
                    EMPTY => write!(f, " .")?,
                    v => write!(f, " {v}")?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Dense square integer matrix used for the coloured vertex matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<i64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row_sum(&self, i: usize) -> i64 {
        self.data[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> i64 {
        (0..self.n).map(|i| self.get(i, j)).sum()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] += a * src[j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// The blue (degree e1) and red (degree e2) vertex matrices. Entry `(u, v)`
/// counts edges with range `u` and source `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMatrices {
    pub blue: DenseMatrix,
    pub red: DenseMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colour {
    Blue,
    Red,
}

/// The rank-2 graph of a set of basic data with invertible corners.
#[derive(Debug)]
pub struct Lambda {
    data: BasicData,
    flags: DataFlags,
    metrics: TileMetrics,
    corner_x_inv: u64,
    corner_y_inv: u64,
    vertices: Vec<Vec<u64>>,
    matrices: OnceLock<VertexMatrices>,
}

pub const DEFAULT_VERTEX_LIMIT: u128 = 4096;

impl Lambda {
    pub fn new(data: BasicData, vertex_limit: u128) -> Result<Lambda, GraphError> {
        let flags = data.flags();
        if !flags.invertible_corners {
            return Err(GraphError::CornersNotInvertible);
        }
        let metrics = data.tile().metrics();
        let size = metrics.size as u32;
        let count = (data.q() as u128)
            .checked_pow(size - 1)
            .ok_or(GraphError::EnumerationTooLarge {
                count: u128::MAX,
                limit: vertex_limit,
            })?;
        if count > vertex_limit {
            return Err(GraphError::EnumerationTooLarge {
                count,
                limit: vertex_limit,
            });
        }
        let corner_x = Pt::new(metrics.extent.x, 0);
        let corner_y = Pt::new(0, metrics.extent.y);
        let corner_x_inv = mod_inverse(data.rule_at(corner_x), data.q())
            .map_err(|_| GraphError::CornersNotInvertible)?;
        let corner_y_inv = mod_inverse(data.rule_at(corner_y), data.q())
            .map_err(|_| GraphError::CornersNotInvertible)?;

        // Free choice on every cell except the end of the bottom row, whose
        // value is forced by the congruence.
        let corner_idx = data.tile().cell_index(corner_x).expect("corner is a cell");
        let ncells = metrics.size;
        let q = data.q();
        let mut vertices = Vec::with_capacity(count as usize);
        let mut digits = vec![0u64; ncells - 1];
        loop {
            let mut values = vec![0u64; ncells];
            let mut di = 0;
            for (ci, value) in values.iter_mut().enumerate() {
                if ci != corner_idx {
                    *value = digits[di];
                    di += 1;
                }
            }
            let mut acc = 0u64;
            for (ci, &value) in values.iter().enumerate() {
                if ci != corner_idx {
                    acc = data.add(acc, data.mul(data.rule()[ci], value));
                }
            }
            values[corner_idx] = data.mul(corner_x_inv, data.add(data.trace(), data.neg(acc)));
            vertices.push(values);
            // Odometer over the free digits.
            let mut k = 0;
            loop {
                if k == digits.len() {
                    break;
                }
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
        vertices.sort();
        debug_assert!(vertices.windows(2).all(|w| w[0] != w[1]));
        assert_eq!(vertices.len() as u128, count);
        Ok(Lambda {
            data,
            flags,
            metrics,
            corner_x_inv,
            corner_y_inv,
            vertices,
            matrices: OnceLock::new(),
        })
    }

    pub fn data(&self) -> &BasicData {
        &self.data
    }

    pub fn flags(&self) -> &DataFlags {
        &self.flags
    }

    pub fn metrics(&self) -> &TileMetrics {
        &self.metrics
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_values(&self, id: usize) -> &[u64] {
        &self.vertices[id]
    }

    pub fn vertex_id(&self, values: &[u64]) -> Option<usize> {
        self.vertices
            .binary_search_by(|v| v.as_slice().cmp(values))
            .ok()
    }

    /// Index of the all-zeros vertex, valid exactly when the trace is 0.
    pub fn zero_vertex(&self) -> Option<usize> {
        if self.data.trace() == 0 {
            debug_assert!(self.vertices[0].iter().all(|&v| v == 0));
            Some(0)
        } else {
            None
        }
    }

    /// The coloured vertex matrices. Their structural invariants (0/1
    /// entries, row and column sums, commutation) are verified on first
    /// construction.
    pub fn matrices(&self) -> &VertexMatrices {
        self.matrices.get_or_init(|| self.build_matrices())
    }

    fn build_matrices(&self) -> VertexMatrices {
        let blue = self.colour_matrix(E1);
        let red = self.colour_matrix(E2);
        let q = self.data.q() as i64;
        let deg_blue = q.pow(self.metrics.extent.y as u32);
        let deg_red = q.pow(self.metrics.extent.x as u32);
        for i in 0..self.vertices.len() {
            assert_eq!(blue.row_sum(i), deg_blue, "blue out-degree at vertex {i}");
            assert_eq!(blue.col_sum(i), deg_blue, "blue in-degree at vertex {i}");
            assert_eq!(red.row_sum(i), deg_red, "red out-degree at vertex {i}");
            assert_eq!(red.col_sum(i), deg_red, "red in-degree at vertex {i}");
        }
        assert!(
            blue.mul(&red) == red.mul(&blue),
            "vertex matrices do not commute"
        );
        VertexMatrices { blue, red }
    }

    fn colour_matrix(&self, dir: Pt) -> DenseMatrix {
        // Overlap cells m in T with m - dir also in T, stored as pairs of
        // canonical indices (index of m, index of m - dir).
        let tile = self.data.tile();
        let overlap: Vec<(usize, usize)> = tile
            .cells()
            .iter()
            .filter(|&&m| tile.contains(m - dir))
            .map(|&m| {
                (
                    tile.cell_index(m).unwrap(),
                    tile.cell_index(m - dir).unwrap(),
                )
            })
            .collect();
        let n = self.vertices.len();
        let mut mat = DenseMatrix::zeros(n);
        for u in 0..n {
            for v in 0..n {
                let ok = overlap
                    .iter()
                    .all(|&(mi, si)| self.vertices[u][mi] == self.vertices[v][si]);
                if ok {
                    mat.set(u, v, 1);
                }
            }
        }
        mat
    }

    /// The degree-0 path of a vertex.
    pub fn vertex_path(&self, id: usize) -> Path {
        let mut p = Path::blank(&self.metrics, ORIGIN);
        for (ci, &cell) in self.data.tile().cells().iter().enumerate() {
            p.set(cell, self.vertices[id][ci]);
        }
        p
    }

    /// Restriction of a path to the tile translate at `at`, as vertex values
    /// in canonical cell order.
    pub fn restriction(&self, path: &Path, at: Pt) -> Vec<u64> {
        self.data
            .tile()
            .cells()
            .iter()
            .map(|&c| path.value_at(c + at))
            .collect()
    }

    pub fn range_values(&self, path: &Path) -> Vec<u64> {
        self.restriction(path, ORIGIN)
    }

    pub fn source_values(&self, path: &Path) -> Vec<u64> {
        self.restriction(path, path.degree())
    }

    pub fn range_of(&self, path: &Path) -> usize {
        self.vertex_id(&self.range_values(path)).expect("valid path")
    }

    pub fn source_of(&self, path: &Path) -> usize {
        self.vertex_id(&self.source_values(path)).expect("valid path")
    }

    /// True when every tile translate inside the path domain satisfies the
    /// rule congruence.
    pub fn validate_path(&self, path: &Path) -> bool {
        let d = path.degree();
        let tile = self.data.tile();
        for kx in 0..=d.x {
            for ky in 0..=d.y {
                let k = Pt::new(kx, ky);
                let mut acc = 0u64;
                for (ci, &cell) in tile.cells().iter().enumerate() {
                    match path.try_value(cell + k) {
                        Some(v) => acc = self.data.add(acc, self.data.mul(self.data.rule()[ci], v)),
                        None => return false,
                    }
                }
                if acc != self.data.trace() {
                    return false;
                }
            }
        }
        true
    }

    /// Forced value closing the translate at `k` through the invertible
    /// corner in direction `dir` (the cell `k + corner` is computed from all
    /// the others).
    fn forced_value(&self, path: &Path, k: Pt, dir: Colour) -> u64 {
        let (corner, inv) = match dir {
            Colour::Blue => (Pt::new(self.metrics.extent.x, 0), self.corner_x_inv),
            Colour::Red => (Pt::new(0, self.metrics.extent.y), self.corner_y_inv),
        };
        let mut acc = 0u64;
        for (ci, &cell) in self.data.tile().cells().iter().enumerate() {
            if cell == corner {
                continue;
            }
            let v = path.value_at(cell + k);
            acc = self.data.add(acc, self.data.mul(self.data.rule()[ci], v));
        }
        self.data
            .mul(inv, self.data.add(self.data.trace(), self.data.neg(acc)))
    }

    /// The unique path of degree `d(mu) + d(nu)` extending `mu` and the
    /// translate of `nu`; requires `s(mu) = r(nu)`.
    pub fn compose(&self, mu: &Path, nu: &Path) -> Result<Path, GraphError> {
        if self.source_values(mu) != self.range_values(nu) {
            return Err(GraphError::SourceRangeMismatch);
        }
        let (m, n) = (mu.degree(), nu.degree());
        let d = m + n;
        let (c1, c2) = (self.metrics.extent.x, self.metrics.extent.y);
        let mut out = Path::blank(&self.metrics, d);
        for y in 0..mu.height {
            for x in 0..mu.width {
                let p = Pt::new(x, y);
                if region_contains(self.data.tile(), m, p) {
                    out.set(p, mu.value_at(p));
                }
            }
        }
        for y in 0..nu.height {
            for x in 0..nu.width {
                let p = Pt::new(x, y);
                if region_contains(self.data.tile(), n, p) {
                    let q = p + m;
                    debug_assert!(
                        out.try_value(q).is_none_or(|v| v == nu.value_at(p)),
                        "inconsistent overlap while composing"
                    );
                    out.set(q, nu.value_at(p));
                }
            }
        }
        // Bottom-right rectangle: columns left to right, each column top to
        // bottom; every new cell is the blue-corner cell of the translate
        // just behind it.
        for x in (c1 + m.x + 1)..=(c1 + m.x + n.x) {
            for y in (0..m.y).rev() {
                let j = Pt::new(x, y);
                let v = self.forced_value(&out, j - Pt::new(c1, 0), Colour::Blue);
                out.set(j, v);
            }
        }
        // Upper-left rectangle: rows bottom to top, each row right to left,
        // through the red corner. This is the mirror image of the rectangle
        // above; the result does not depend on the fill order because the
        // extension is unique.
        for y in (c2 + m.y + 1)..=(c2 + m.y + n.y) {
            for x in (0..m.x).rev() {
                let j = Pt::new(x, y);
                let v = self.forced_value(&out, j - Pt::new(0, c2), Colour::Red);
                out.set(j, v);
            }
        }
        debug_assert!(self.validate_path(&out), "composition produced an invalid path");
        Ok(out)
    }

    /// The segment `lambda(m, n)`, a path of degree `n - m`.
    pub fn segment(&self, lambda: &Path, m: Pt, n: Pt) -> Result<Path, GraphError> {
        if !(ORIGIN.leq(m) && m.leq(n) && n.leq(lambda.degree())) {
            return Err(GraphError::DegreeOutOfRange);
        }
        let d = n - m;
        let mut out = Path::blank(&self.metrics, d);
        for y in 0..out.height {
            for x in 0..out.width {
                let p = Pt::new(x, y);
                if region_contains(self.data.tile(), d, p) {
                    out.set(p, lambda.value_at(p + m));
                }
            }
        }
        Ok(out)
    }

    /// Splits a path at `m` into `(lambda(0, m), lambda(m, d))`.
    pub fn factorize(&self, lambda: &Path, m: Pt) -> Result<(Path, Path), GraphError> {
        let left = self.segment(lambda, ORIGIN, m)?;
        let right = self.segment(lambda, m, lambda.degree())?;
        Ok((left, right))
    }

    /// The edge of the given colour with range `u` and source `v`, if the
    /// overlap condition holds. Edges are determined by their endpoints.
    pub fn edge_from_pair(&self, colour: Colour, u: usize, v: usize) -> Option<Path> {
        let dir = match colour {
            Colour::Blue => E1,
            Colour::Red => E2,
        };
        let tile = self.data.tile();
        let mut p = Path::blank(&self.metrics, dir);
        for (ci, &cell) in tile.cells().iter().enumerate() {
            p.set(cell, self.vertices[u][ci]);
        }
        for (ci, &cell) in tile.cells().iter().enumerate() {
            let q = cell + dir;
            if let Some(existing) = p.try_value(q) {
                if existing != self.vertices[v][ci] {
                    return None;
                }
            } else {
                p.set(q, self.vertices[v][ci]);
            }
        }
        debug_assert!(self.validate_path(&p));
        Some(p)
    }

    /// Number of free digits when extending by one edge of this colour.
    pub fn free_digit_count(&self, colour: Colour) -> usize {
        match colour {
            Colour::Blue => self.metrics.extent.y as usize,
            Colour::Red => self.metrics.extent.x as usize,
        }
    }

    /// The blue edge with range `v` determined by the free digits: the new
    /// cells right of each row end are filled bottom to top (skipping the
    /// bottom row, whose new cell is forced).
    pub fn blue_edge_from_range(&self, v: usize, digits: &[u64]) -> Path {
        let c2 = self.metrics.extent.y;
        debug_assert_eq!(digits.len() as i64, c2);
        let mut p = Path::blank(&self.metrics, E1);
        for (ci, &cell) in self.data.tile().cells().iter().enumerate() {
            p.set(cell, self.vertices[v][ci]);
        }
        for y in 1..=c2 {
            p.set(
                Pt::new(self.metrics.row_ends[y as usize] + 1, y),
                digits[(y - 1) as usize] % self.data.q(),
            );
        }
        let forced = self.forced_value(&p, E1, Colour::Blue);
        p.set(Pt::new(self.metrics.extent.x + 1, 0), forced);
        debug_assert!(self.validate_path(&p));
        p
    }

    /// The red edge with range `v` determined by the free digits: the new
    /// cells above each column top, left to right (skipping the first
    /// column, whose new cell is forced).
    pub fn red_edge_from_range(&self, v: usize, digits: &[u64]) -> Path {
        let c1 = self.metrics.extent.x;
        debug_assert_eq!(digits.len() as i64, c1);
        let mut p = Path::blank(&self.metrics, E2);
        for (ci, &cell) in self.data.tile().cells().iter().enumerate() {
            p.set(cell, self.vertices[v][ci]);
        }
        for x in 1..=c1 {
            p.set(
                Pt::new(x, self.metrics.col_tops[x as usize] + 1),
                digits[(x - 1) as usize] % self.data.q(),
            );
        }
        let forced = self.forced_value(&p, E2, Colour::Red);
        p.set(Pt::new(0, self.metrics.extent.y + 1), forced);
        debug_assert!(self.validate_path(&p));
        p
    }

    /// The blue edge with source `u` determined by free digits on the first
    /// column (bottom `c2` cells); the top cell of the first column is
    /// forced.
    pub fn blue_edge_from_source(&self, u: usize, digits: &[u64]) -> Path {
        let c2 = self.metrics.extent.y;
        debug_assert_eq!(digits.len() as i64, c2);
        let mut p = Path::blank(&self.metrics, E1);
        for (ci, &cell) in self.data.tile().cells().iter().enumerate() {
            p.set(cell + E1, self.vertices[u][ci]);
        }
        for y in 0..c2 {
            p.set(Pt::new(0, y), digits[y as usize] % self.data.q());
        }
        let forced = self.forced_value(&p, ORIGIN, Colour::Red);
        p.set(Pt::new(0, c2), forced);
        debug_assert!(self.validate_path(&p));
        p
    }

    /// Extends a path at its source by one edge with the given free digits.
    pub fn extend(&self, path: &Path, colour: Colour, digits: &[u64]) -> Path {
        let src = self.source_of(path);
        let edge = match colour {
            Colour::Blue => self.blue_edge_from_range(src, digits),
            Colour::Red => self.red_edge_from_range(src, digits),
        };
        self.compose(path, &edge).expect("edge range equals path source")
    }

    /// The path of degree `d` from `v` with all free digits zero.
    pub fn zero_extension(&self, v: usize, d: Pt) -> Path {
        let mut p = self.vertex_path(v);
        let zeros_blue = vec![0u64; self.free_digit_count(Colour::Blue)];
        let zeros_red = vec![0u64; self.free_digit_count(Colour::Red)];
        for _ in 0..d.x {
            p = self.extend(&p, Colour::Blue, &zeros_blue);
        }
        for _ in 0..d.y {
            p = self.extend(&p, Colour::Red, &zeros_red);
        }
        p
    }

    /// All paths of degree `d` with range `v`, by enumerating the free
    /// digits of successive extensions.
    pub fn paths_from(&self, v: usize, d: Pt, work_limit: u128) -> Result<Vec<Path>, GraphError> {
        let q = self.data.q() as u128;
        let exp = (d.x * self.metrics.extent.y + d.y * self.metrics.extent.x) as u32;
        let total = q
            .checked_pow(exp)
            .ok_or(GraphError::WorkLimitExceeded {
                work: u128::MAX,
                limit: work_limit,
            })?;
        if total > work_limit {
            return Err(GraphError::WorkLimitExceeded {
                work: total,
                limit: work_limit,
            });
        }
        let mut paths = vec![self.vertex_path(v)];
        let steps: Vec<Colour> = std::iter::repeat_n(Colour::Blue, d.x as usize)
            .chain(std::iter::repeat_n(Colour::Red, d.y as usize))
            .collect();
        for colour in steps {
            let k = self.free_digit_count(colour);
            let mut next = Vec::with_capacity(paths.len() * (self.data.q() as usize).pow(k as u32));
            for p in &paths {
                let mut digits = vec![0u64; k];
                loop {
                    next.push(self.extend(p, colour, &digits));
                    let mut i = 0;
                    loop {
                        if i == k {
                            break;
                        }
                        digits[i] += 1;
                        if digits[i] < self.data.q() {
                            break;
                        }
                        digits[i] = 0;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                }
            }
            paths = next;
        }
        Ok(paths)
    }

    /// Smallest `k` whose diagonal point leaves the tile; paths of degree
    /// `k(e1+e2)` connect every ordered vertex pair.
    pub fn connecting_exponent(&self) -> i64 {
        let mut k = 1;
        while self.data.tile().contains(Pt::new(k, k)) {
            k += 1;
        }
        k
    }

    /// A path from `u` to `v` (range `v`, source `u`) of degree
    /// `k(e1+e2)`, built by the inductive diagonal-step construction with
    /// free choices resolved to zero.
    pub fn connect(&self, v: usize, u: usize) -> Path {
        let k = self.connecting_exponent();
        let tile = self.data.tile();
        let corner_x = Pt::new(self.metrics.extent.x, 0);
        let corner_idx = tile.cell_index(corner_x).unwrap();
        let mut mu = self.vertex_path(v);
        for p in 0..k {
            let src = self.source_values(&mu);
            let back = k - p - 1;
            let mut next = vec![None; self.metrics.size];
            for (ci, &cell) in tile.cells().iter().enumerate() {
                let up = cell + Pt::new(1, 1);
                if tile.contains(up) {
                    next[ci] = Some(src[tile.cell_index(up).unwrap()]);
                }
                let down = cell - Pt::new(back, back);
                if down.is_nonnegative() && tile.contains(down) {
                    let want = self.vertices[u][tile.cell_index(down).unwrap()];
                    debug_assert!(next[ci].is_none_or(|have| have == want));
                    next[ci] = Some(want);
                }
            }
            let mut values: Vec<u64> = next.iter().map(|o| o.unwrap_or(0)).collect();
            if next[corner_idx].is_none() {
                let mut acc = 0u64;
                for (ci, &w) in self.data.rule().iter().enumerate() {
                    if ci != corner_idx {
                        acc = self.data.add(acc, self.data.mul(w, values[ci]));
                    }
                }
                values[corner_idx] = self
                    .data
                    .mul(self.corner_x_inv, self.data.add(self.data.trace(), self.data.neg(acc)));
            }
            let next_id = self.vertex_id(&values).expect("constructed vertex");
            let step = self.diagonal_step(&src, next_id);
            mu = self.compose(&mu, &step).expect("diagonal step composes");
        }
        debug_assert_eq!(self.source_of(&mu), u);
        mu
    }

    /// The unique degree-(1,1) path with range values `v` and source `u`,
    /// which exists when the diagonal overlap condition holds.
    fn diagonal_step(&self, v: &[u64], u_id: usize) -> Path {
        let tile = self.data.tile();
        let mut p = Path::blank(&self.metrics, Pt::new(1, 1));
        for (ci, &cell) in tile.cells().iter().enumerate() {
            p.set(cell, v[ci]);
        }
        for (ci, &cell) in tile.cells().iter().enumerate() {
            let q = cell + Pt::new(1, 1);
            if let Some(existing) = p.try_value(q) {
                debug_assert_eq!(existing, self.vertices[u_id][ci], "diagonal overlap");
            } else {
                p.set(q, self.vertices[u_id][ci]);
            }
        }
        let fx = self.forced_value(&p, E1, Colour::Blue);
        p.set(Pt::new(self.metrics.extent.x + 1, 0), fx);
        let fy = self.forced_value(&p, E2, Colour::Red);
        p.set(Pt::new(0, self.metrics.extent.y + 1), fy);
        debug_assert!(self.validate_path(&p));
        p
    }
}
