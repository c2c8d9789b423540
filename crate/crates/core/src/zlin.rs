//! Exact integer linear algebra: Smith normal form, column echelon,
//! kernels, cokernels and lattice quotients.
//!
//! Matrices are stored with arbitrary-precision entries. Internally the
//! elimination engine runs on `i64`, escalates to `i128` and finally to
//! `BigInt` whenever an intermediate value would overflow, so results are
//! exact regardless of coefficient growth. All three ladders pick pivots
//! identically (minimal nonzero absolute value), so they compute the same
//! decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZlinError {
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("columns are not linearly independent")]
    ColumnsDependent,
    #[error("no integer solution")]
    NoSolution,
    #[error("a column lies outside the spanned sublattice")]
    SublatticeNotContained,
}

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(BigInt::from(f(i, j)));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Exact matrix product, using machine integers when the entries allow.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "product dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        if let Some(fast) = self.mul_fast(other) {
            return fast;
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    fn to_i64_vec(&self) -> Option<Vec<i64>> {
        self.data.iter().map(|v| v.to_i64()).collect()
    }

    fn mul_fast(&self, other: &IntMatrix) -> Option<IntMatrix> {
        let a = self.to_i64_vec()?;
        let b = other.to_i64_vec()?;
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut acc = vec![0i128; m * n];
        for i in 0..m {
            for kk in 0..k {
                let av = a[i * k + kk];
                if av == 0 {
                    continue;
                }
                let av = av as i128;
                let brow = &b[kk * n..(kk + 1) * n];
                let arow = &mut acc[i * n..(i + 1) * n];
                for j in 0..n {
                    let prod = av.checked_mul(brow[j] as i128)?;
                    arow[j] = arow[j].checked_add(prod)?;
                }
            }
        }
        let data = acc.into_iter().map(BigInt::from).collect();
        Some(IntMatrix {
            rows: m,
            cols: n,
            data,
        })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A finitely generated abelian group in canonical form: free rank plus the
/// invariant factor chain `d1 | d2 | ...` with every `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    /// Cokernel shape from an SNF diagonal of a map into `Z^rows`.
    pub fn from_diagonal(diag: &[BigInt], rows: usize) -> Self {
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let invariant_factors = diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        AbelianGroup {
            free_rank: rows - rank,
            invariant_factors,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Group order; `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        let mut o = BigInt::one();
        for d in &self.invariant_factors {
            o *= d;
        }
        Some(o)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Overflow;

enum StepError {
    Overflow,
    Domain(ZlinError),
}

impl From<Overflow> for StepError {
    fn from(_: Overflow) -> Self {
        StepError::Overflow
    }
}

/// Scalar abstraction for the elimination ladder. Machine-integer
/// implementations report overflow; `BigInt` never fails.
trait Scalar: Clone + PartialEq + fmt::Debug {
    fn sc_zero() -> Self;
    fn sc_one() -> Self;
    fn sc_is_zero(&self) -> bool;
    fn sc_is_one(&self) -> bool;
    fn sc_is_neg_one(&self) -> bool;
    fn sc_is_positive(&self) -> bool;
    /// `|self| < |other|`
    fn abs_lt(&self, other: &Self) -> bool;
    fn neg_assign(&mut self);
    /// `self -= c * x`
    fn sub_mul(&mut self, c: &Self, x: &Self) -> Result<(), Overflow>;
    fn add_assign_ref(&mut self, x: &Self) -> Result<(), Overflow>;
    fn sub_assign_ref(&mut self, x: &Self) -> Result<(), Overflow>;
    /// Quotient rounded to the nearest integer (ties toward the floor side),
    /// so the remainder is balanced.
    fn div_round(&self, b: &Self) -> Result<Self, Overflow>;
    fn divides(&self, other: &Self) -> bool;
    /// Truncating division with remainder.
    fn checked_div_rem(&self, b: &Self) -> Result<(Self, Self), Overflow>;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

macro_rules! machine_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn sc_zero() -> Self {
                0
            }
            fn sc_one() -> Self {
                1
            }
            fn sc_is_zero(&self) -> bool {
                *self == 0
            }
            fn sc_is_one(&self) -> bool {
                *self == 1
            }
            fn sc_is_neg_one(&self) -> bool {
                *self == -1
            }
            fn sc_is_positive(&self) -> bool {
                *self > 0
            }
            fn abs_lt(&self, other: &Self) -> bool {
                self.unsigned_abs() < other.unsigned_abs()
            }
            fn neg_assign(&mut self) {
                *self = -*self;
            }
            fn sub_mul(&mut self, c: &Self, x: &Self) -> Result<(), Overflow> {
                let p = c.checked_mul(*x).ok_or(Overflow)?;
                *self = self.checked_sub(p).ok_or(Overflow)?;
                Ok(())
            }
            fn add_assign_ref(&mut self, x: &Self) -> Result<(), Overflow> {
                *self = self.checked_add(*x).ok_or(Overflow)?;
                Ok(())
            }
            fn sub_assign_ref(&mut self, x: &Self) -> Result<(), Overflow> {
                *self = self.checked_sub(*x).ok_or(Overflow)?;
                Ok(())
            }
            fn div_round(&self, b: &Self) -> Result<Self, Overflow> {
                debug_assert!(*b != 0);
                let mut r = self.checked_rem_euclid(*b).ok_or(Overflow)?;
                let babs = b.checked_abs().ok_or(Overflow)?;
                if r.checked_mul(2).ok_or(Overflow)? > babs {
                    r -= babs;
                }
                Ok((self.checked_sub(r).ok_or(Overflow)?) / b)
            }
            fn divides(&self, other: &Self) -> bool {
                debug_assert!(*self != 0);
                other % self == 0
            }
            fn checked_div_rem(&self, b: &Self) -> Result<(Self, Self), Overflow> {
                let q = self.checked_div(*b).ok_or(Overflow)?;
                let r = self.checked_rem(*b).ok_or(Overflow)?;
                Ok((q, r))
            }
            fn from_bigint(v: &BigInt) -> Option<Self> {
                <$t>::try_from(v).ok()
            }
            fn to_bigint(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}

machine_scalar!(i64);
machine_scalar!(i128);

impl Scalar for BigInt {
    fn sc_zero() -> Self {
        Zero::zero()
    }
    fn sc_one() -> Self {
        One::one()
    }
    fn sc_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sc_is_one(&self) -> bool {
        One::is_one(self)
    }
    fn sc_is_neg_one(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus && self.magnitude().is_one()
    }
    fn sc_is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn abs_lt(&self, other: &Self) -> bool {
        self.magnitude() < other.magnitude()
    }
    fn neg_assign(&mut self) {
        *self = -std::mem::take(self);
    }
    fn sub_mul(&mut self, c: &Self, x: &Self) -> Result<(), Overflow> {
        *self -= c * x;
        Ok(())
    }
    fn add_assign_ref(&mut self, x: &Self) -> Result<(), Overflow> {
        *self += x;
        Ok(())
    }
    fn sub_assign_ref(&mut self, x: &Self) -> Result<(), Overflow> {
        *self -= x;
        Ok(())
    }
    fn div_round(&self, b: &Self) -> Result<Self, Overflow> {
        debug_assert!(!Zero::is_zero(b));
        let babs = b.abs();
        let mut r = self.mod_floor(&babs);
        if &r * 2 > babs {
            r -= &babs;
        }
        Ok((self - r) / b)
    }
    fn divides(&self, other: &Self) -> bool {
        other.mod_floor(&self.abs()).is_zero()
    }
    fn checked_div_rem(&self, b: &Self) -> Result<(Self, Self), Overflow> {
        Ok(self.div_rem(b))
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// In-place elimination state: the working matrix plus optional row/column
/// transforms with tracked determinant signs.
struct Elim<S> {
    m: usize,
    n: usize,
    a: Vec<S>,
    u: Option<Vec<S>>,
    u_inv: Option<Vec<S>>,
    v: Option<Vec<S>>,
    det_u: i8,
    det_v: i8,
}

impl<S: Scalar> Elim<S> {
    fn new(mat: &IntMatrix, track_u: bool, track_u_inv: bool, track_v: bool) -> Option<Self> {
        let a = mat
            .data
            .iter()
            .map(|x| S::from_bigint(x))
            .collect::<Option<Vec<_>>>()?;
        let ident = |k: usize| {
            let mut id = vec![S::sc_zero(); k * k];
            for i in 0..k {
                id[i * k + i] = S::sc_one();
            }
            id
        };
        Some(Elim {
            m: mat.rows,
            n: mat.cols,
            a,
            u: track_u.then(|| ident(mat.rows)),
            u_inv: track_u_inv.then(|| ident(mat.rows)),
            v: track_v.then(|| ident(mat.cols)),
            det_u: 1,
            det_v: 1,
        })
    }

    fn at(&self, i: usize, j: usize) -> &S {
        &self.a[i * self.n + j]
    }

    fn swap_rows(&mut self, i1: usize, i2: usize) {
        if i1 == i2 {
            return;
        }
        for j in 0..self.n {
            self.a.swap(i1 * self.n + j, i2 * self.n + j);
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.m {
                u.swap(i1 * self.m + j, i2 * self.m + j);
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for i in 0..self.m {
                ui.swap(i * self.m + i1, i * self.m + i2);
            }
        }
        self.det_u = -self.det_u;
    }

    fn swap_cols(&mut self, j1: usize, j2: usize) {
        if j1 == j2 {
            return;
        }
        for i in 0..self.m {
            self.a.swap(i * self.n + j1, i * self.n + j2);
        }
        if let Some(v) = &mut self.v {
            for i in 0..self.n {
                v.swap(i * self.n + j1, i * self.n + j2);
            }
        }
        self.det_v = -self.det_v;
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.n {
            self.a[i * self.n + j].neg_assign();
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.m {
                u[i * self.m + j].neg_assign();
            }
        }
        if let Some(ui) = &mut self.u_inv {
            for k in 0..self.m {
                ui[k * self.m + i].neg_assign();
            }
        }
        self.det_u = -self.det_u;
    }

    /// row[dst] -= q * row[src]; the inverse transform takes the inverse
    /// column operation col[src] += q * col[dst].
    fn row_sub_mul(&mut self, dst: usize, src: usize, q: &S) -> Result<(), Overflow> {
        if q.sc_is_zero() {
            return Ok(());
        }
        let srow = clone_slice(&self.a, src * self.n, self.n);
        axpy(&mut self.a[dst * self.n..(dst + 1) * self.n], &srow, q)?;
        if let Some(u) = &mut self.u {
            let srow = clone_slice(u, src * self.m, self.m);
            axpy(&mut u[dst * self.m..(dst + 1) * self.m], &srow, q)?;
        }
        if let Some(ui) = &mut self.u_inv {
            let mut neg_q = q.clone();
            neg_q.neg_assign();
            for i in 0..self.m {
                let d = ui[i * self.m + dst].clone();
                sub_mul_one(&mut ui[i * self.m + src], &neg_q, &d)?;
            }
        }
        Ok(())
    }

    /// col[dst] -= q * col[src]
    fn col_sub_mul(&mut self, dst: usize, src: usize, q: &S) -> Result<(), Overflow> {
        if q.sc_is_zero() {
            return Ok(());
        }
        for i in 0..self.m {
            let s = self.a[i * self.n + src].clone();
            sub_mul_one(&mut self.a[i * self.n + dst], q, &s)?;
        }
        if let Some(v) = &mut self.v {
            for i in 0..self.n {
                let s = v[i * self.n + src].clone();
                sub_mul_one(&mut v[i * self.n + dst], q, &s)?;
            }
        }
        Ok(())
    }

    fn extract(mat: &[S], rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: mat.iter().map(|x| x.to_bigint()).collect(),
        }
    }
}

fn clone_slice<S: Scalar>(data: &[S], start: usize, len: usize) -> Vec<S> {
    data[start..start + len].to_vec()
}

fn sub_mul_one<S: Scalar>(dst: &mut S, q: &S, x: &S) -> Result<(), Overflow> {
    if x.sc_is_zero() {
        Ok(())
    } else if q.sc_is_one() {
        dst.sub_assign_ref(x)
    } else if q.sc_is_neg_one() {
        dst.add_assign_ref(x)
    } else {
        dst.sub_mul(q, x)
    }
}

fn axpy<S: Scalar>(dst: &mut [S], src: &[S], q: &S) -> Result<(), Overflow> {
    if q.sc_is_one() {
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.sc_is_zero() {
                d.sub_assign_ref(s)?;
            }
        }
    } else if q.sc_is_neg_one() {
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.sc_is_zero() {
                d.add_assign_ref(s)?;
            }
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.sc_is_zero() {
                d.sub_mul(q, s)?;
            }
        }
    }
    Ok(())
}

struct SnfOutcome {
    diag: Vec<BigInt>,
    rank: usize,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
    det_u: i8,
    det_v: i8,
}

/// Smith normal form by row/column elimination with minimal-absolute-value
/// pivoting. The divisibility chain is enforced during elimination.
fn snf_in<S: Scalar>(e: &mut Elim<S>) -> Result<usize, Overflow> {
    let (m, n) = (e.m, e.n);
    let mut rank = 0;
    for k in 0..m.min(n) {
        // Smallest nonzero entry of the trailing submatrix becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                if !e.at(i, j).sc_is_zero()
                    && pivot.is_none_or(|(pi, pj)| e.at(i, j).abs_lt(e.at(pi, pj)))
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        e.swap_rows(k, pi);
        e.swap_cols(k, pj);
        loop {
            // Clear column k with row operations.
            let mut dirty = false;
            for i in k + 1..m {
                if e.at(i, k).sc_is_zero() {
                    continue;
                }
                let q = e.at(i, k).div_round(e.at(k, k))?;
                e.row_sub_mul(i, k, &q)?;
                if !e.at(i, k).sc_is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A balanced remainder survived; it is smaller than the
                // pivot, so promote it and retry.
                let mut best = k;
                for i in k + 1..m {
                    if !e.at(i, k).sc_is_zero() && e.at(i, k).abs_lt(e.at(best, k)) {
                        best = i;
                    }
                }
                e.swap_rows(k, best);
                continue;
            }
            // Clear row k with column operations.
            for j in k + 1..n {
                if e.at(k, j).sc_is_zero() {
                    continue;
                }
                let q = e.at(k, j).div_round(e.at(k, k))?;
                e.col_sub_mul(j, k, &q)?;
                if !e.at(k, j).sc_is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let mut best = k;
                for j in k + 1..n {
                    if !e.at(k, j).sc_is_zero() && e.at(k, j).abs_lt(e.at(k, best)) {
                        best = j;
                    }
                }
                e.swap_cols(k, best);
                continue;
            }
            // Pivot must divide the rest of the trailing submatrix for the
            // invariant-factor chain; pull a bad row in and keep reducing.
            let mut bad = None;
            'scan: for i in k + 1..m {
                for j in k + 1..n {
                    if !e.at(i, j).sc_is_zero() && !e.at(k, k).divides(e.at(i, j)) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus = {
                        let mut x = S::sc_one();
                        x.neg_assign();
                        x
                    };
                    // row[k] += row[i]
                    e.row_sub_mul(k, i, &minus)?;
                }
                None => break,
            }
        }
        rank = k + 1;
    }
    for k in 0..rank {
        if !e.at(k, k).sc_is_positive() {
            e.negate_row(k);
        }
    }
    Ok(rank)
}

fn run_snf(mat: &IntMatrix, track_u: bool, track_v: bool) -> SnfOutcome {
    fn attempt<S: Scalar>(
        mat: &IntMatrix,
        track_u: bool,
        track_v: bool,
    ) -> Option<Result<SnfOutcome, Overflow>> {
        let mut e = Elim::<S>::new(mat, track_u, false, track_v)?;
        Some(snf_in(&mut e).map(|rank| {
            let diag = (0..mat.rows.min(mat.cols))
                .map(|k| e.at(k, k).to_bigint())
                .collect();
            SnfOutcome {
                diag,
                rank,
                u: e.u.as_ref().map(|u| Elim::extract(u, mat.rows, mat.rows)),
                v: e.v.as_ref().map(|v| Elim::extract(v, mat.cols, mat.cols)),
                det_u: e.det_u,
                det_v: e.det_v,
            }
        }))
    }
    if let Some(Ok(out)) = attempt::<i64>(mat, track_u, track_v) {
        return out;
    }
    if let Some(Ok(out)) = attempt::<i128>(mat, track_u, track_v) {
        return out;
    }
    attempt::<BigInt>(mat, track_u, track_v)
        .expect("bigint entries always convert")
        .unwrap_or_else(|_| unreachable!("bigint arithmetic does not overflow"))
}

/// Row echelon via row operations only (used transposed for column-space and
/// kernel computations). Returns the rank; pivot columns are strictly
/// increasing across the first `rank` rows.
fn echelon_in<S: Scalar>(e: &mut Elim<S>) -> Result<(usize, Vec<usize>), Overflow> {
    let (m, n) = (e.m, e.n);
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !e.at(i, c).sc_is_zero() && best.is_none_or(|b| e.at(i, c).abs_lt(e.at(b, c))) {
                    best = Some(i);
                }
            }
            let Some(b) = best else {
                break;
            };
            e.swap_rows(r, b);
            let mut clean = true;
            for i in r + 1..m {
                if e.at(i, c).sc_is_zero() {
                    continue;
                }
                let q = e.at(i, c).div_round(e.at(r, c))?;
                e.row_sub_mul(i, r, &q)?;
                if !e.at(i, c).sc_is_zero() {
                    clean = false;
                }
            }
            if clean {
                pivot_cols.push(c);
                r += 1;
                break;
            }
        }
    }
    Ok((r, pivot_cols))
}

struct EchelonOutcome {
    /// Echelon form of the transposed input (rows beyond `rank` are zero).
    ech: IntMatrix,
    rank: usize,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
}

fn run_echelon(mat: &IntMatrix, track_u: bool, track_u_inv: bool) -> EchelonOutcome {
    fn attempt<S: Scalar>(
        mat: &IntMatrix,
        track_u: bool,
        track_u_inv: bool,
    ) -> Option<Result<EchelonOutcome, Overflow>> {
        let mut e = Elim::<S>::new(mat, track_u, track_u_inv, false)?;
        Some(echelon_in(&mut e).map(|(rank, _)| EchelonOutcome {
            ech: Elim::extract(&e.a, mat.rows, mat.cols),
            rank,
            u: e.u.as_ref().map(|u| Elim::extract(u, mat.rows, mat.rows)),
            u_inv: e
                .u_inv
                .as_ref()
                .map(|u| Elim::extract(u, mat.rows, mat.rows)),
        }))
    }
    if let Some(Ok(out)) = attempt::<i64>(mat, track_u, track_u_inv) {
        return out;
    }
    if let Some(Ok(out)) = attempt::<i128>(mat, track_u, track_u_inv) {
        return out;
    }
    attempt::<BigInt>(mat, track_u, track_u_inv)
        .expect("bigint entries always convert")
        .unwrap_or_else(|_| unreachable!("bigint arithmetic does not overflow"))
}

/// A Smith decomposition `U * A * V = D`.
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    rank: usize,
    det_u: i8,
    det_v: i8,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|k| self.d.get(k, k).clone())
            .collect()
    }

    /// Determinant signs of the (unimodular) transforms.
    pub fn transform_signs(&self) -> (i8, i8) {
        (self.det_u, self.det_v)
    }
}

/// Smith normal form with unimodular transforms, `U * A * V = D`. The
/// product identity, the divisibility chain and the transform determinants
/// are re-verified on every call.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let out = run_snf(a, true, true);
    let u = out.u.expect("tracked");
    let v = out.v.expect("tracked");
    let mut d = IntMatrix::zeros(a.rows, a.cols);
    for (k, val) in out.diag.iter().enumerate() {
        d.set(k, k, val.clone());
    }
    let product = u.mul(a).mul(&v);
    assert!(product == d, "snf postcondition failed: U*A*V != D");
    verify_divisibility(&out.diag);
    assert!(out.det_u == 1 || out.det_u == -1);
    assert!(out.det_v == 1 || out.det_v == -1);
    SmithDecomposition {
        d,
        u,
        v,
        rank: out.rank,
        det_u: out.det_u,
        det_v: out.det_v,
    }
}

fn verify_divisibility(diag: &[BigInt]) {
    for w in diag.windows(2) {
        if !w[0].is_zero() && !w[1].is_zero() {
            assert!(
                w[1].mod_floor(&w[0].abs()).is_zero(),
                "snf divisibility chain violated: {} does not divide {}",
                w[0],
                w[1]
            );
        } else if w[0].is_zero() {
            assert!(w[1].is_zero(), "zero before nonzero in snf diagonal");
        }
    }
}

/// Rank of an integer matrix.
pub fn rank(a: &IntMatrix) -> usize {
    // Echelonize the side with fewer rows.
    if a.rows <= a.cols {
        run_echelon(a, false, false).rank
    } else {
        run_echelon(&a.transpose(), false, false).rank
    }
}

/// Determinant of a square matrix, via the Smith diagonal and the tracked
/// transform signs.
pub fn determinant(a: &IntMatrix) -> BigInt {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let out = run_snf(a, false, false);
    if out.rank < a.rows {
        return BigInt::zero();
    }
    let mut det = BigInt::from((out.det_u * out.det_v) as i64);
    for d in &out.diag {
        det *= d;
    }
    det
}

/// Basis matrix for the integer column space: the nonzero columns of a
/// column-echelon form. Columns are a lattice basis of the image.
pub fn column_space_basis(a: &IntMatrix) -> IntMatrix {
    let ech = run_echelon(&a.transpose(), false, false);
    let mut basis = IntMatrix::zeros(a.rows, ech.rank);
    for j in 0..ech.rank {
        for i in 0..a.rows {
            basis.set(i, j, ech.ech.get(j, i).clone());
        }
    }
    basis
}

/// Lattice basis of the integer kernel, as matrix columns. `A * H = 0` and
/// every integer kernel vector is an integer combination of the columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    column_space_and_kernel(a).1
}

/// Column-space basis and kernel basis from a single tracked elimination.
pub fn column_space_and_kernel(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let ech = run_echelon(&a.transpose(), true, false);
    let u = ech.u.expect("tracked");
    let mut basis = IntMatrix::zeros(a.rows, ech.rank);
    for j in 0..ech.rank {
        for i in 0..a.rows {
            basis.set(i, j, ech.ech.get(j, i).clone());
        }
    }
    let nullity = a.cols - ech.rank;
    let mut h = IntMatrix::zeros(a.cols, nullity);
    for k in 0..nullity {
        for i in 0..a.cols {
            h.set(i, k, u.get(ech.rank + k, i).clone());
        }
    }
    let product = a.mul(&h);
    assert!(product.is_zero(), "kernel postcondition failed: A*H != 0");
    (basis, h)
}

/// Column-space basis, kernel basis and the unique solution of
/// `H * W = Z` for the kernel columns `H`, all from a single tracked
/// elimination of `A`. The row transform of the echelon extends the kernel
/// rows to a basis of the ambient lattice; expressing the columns of `Z`
/// in that basis (through the tracked inverse transform) yields their
/// coordinates, whose leading part must vanish exactly when the columns
/// lie in the kernel lattice.
pub struct ImageKernelSolution {
    pub column_space: IntMatrix,
    pub kernel: IntMatrix,
    pub solution: IntMatrix,
}

pub fn image_kernel_solution(
    a: &IntMatrix,
    z: &IntMatrix,
) -> Result<ImageKernelSolution, ZlinError> {
    if z.rows != a.cols {
        return Err(ZlinError::DimensionMismatch(format!(
            "{} rows against {} columns",
            z.rows, a.cols
        )));
    }
    let n = a.cols;
    let ech = run_echelon(&a.transpose(), true, true);
    let u = ech.u.expect("tracked");
    let u_inv = ech.u_inv.expect("tracked");
    let r = ech.rank;
    let mut column_space = IntMatrix::zeros(a.rows, r);
    for j in 0..r {
        for i in 0..a.rows {
            column_space.set(i, j, ech.ech.get(j, i).clone());
        }
    }
    let mut kernel = IntMatrix::zeros(n, n - r);
    for k in 0..(n - r) {
        for i in 0..n {
            kernel.set(i, k, u.get(r + k, i).clone());
        }
    }
    assert!(a.mul(&kernel).is_zero(), "kernel postcondition failed");
    // Coordinates of the columns of z in the row basis of the transform.
    let coords = u_inv.transpose().mul(z);
    for i in 0..r {
        for j in 0..z.cols {
            if !coords.get(i, j).is_zero() {
                return Err(ZlinError::SublatticeNotContained);
            }
        }
    }
    let mut solution = IntMatrix::zeros(n - r, z.cols);
    for i in r..n {
        for j in 0..z.cols {
            solution.set(i - r, j, coords.get(i, j).clone());
        }
    }
    assert!(
        kernel.mul(&solution) == *z,
        "solution postcondition failed: H*W != Z"
    );
    Ok(ImageKernelSolution {
        column_space,
        kernel,
        solution,
    })
}

/// The abelian group `Z^rows / img(A)` read off the Smith diagonal.
pub fn cokernel_group(a: &IntMatrix) -> AbelianGroup {
    let out = run_snf(a, false, false);
    verify_divisibility(&out.diag);
    AbelianGroup::from_diagonal(&out.diag, a.rows)
}

/// Cokernel of `A` together with the data needed to locate classes in it:
/// the row transform of a Smith decomposition and the full diagonal.
pub struct CokernelPresentation {
    pub group: AbelianGroup,
    /// Elementary divisors padded with zeros up to `rows`.
    divisors: Vec<BigInt>,
    transform: IntMatrix,
}

impl CokernelPresentation {
    pub fn new(a: &IntMatrix) -> Self {
        let out = run_snf(a, true, false);
        verify_divisibility(&out.diag);
        let mut divisors = out.diag.clone();
        divisors.resize(a.rows, BigInt::zero());
        CokernelPresentation {
            group: AbelianGroup::from_diagonal(&out.diag, a.rows),
            divisors,
            transform: out.u.expect("tracked"),
        }
    }

    /// Coordinates of the class of `z`, one per elementary divisor: reduced
    /// mod `d_i` for torsion positions, raw integers for free positions.
    pub fn class_coordinates(&self, z: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(z.len(), self.transform.rows());
        let n = self.transform.rows();
        let mut coords = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = BigInt::zero();
            for (j, zj) in z.iter().enumerate() {
                let c = self.transform.get(i, j);
                if !c.is_zero() && !zj.is_zero() {
                    acc += c * zj;
                }
            }
            if !self.divisors[i].is_zero() {
                acc = acc.mod_floor(&self.divisors[i]);
            }
            coords.push(acc);
        }
        coords
    }

    /// Order of the class of `z`; `None` when infinite.
    pub fn class_order(&self, z: &[BigInt]) -> Option<BigInt> {
        let coords = self.class_coordinates(z);
        let mut order = BigInt::one();
        for (c, d) in coords.iter().zip(&self.divisors) {
            if d.is_zero() {
                if !c.is_zero() {
                    return None;
                }
            } else if !d.is_one() {
                let g = c.gcd(d);
                order = order.lcm(&(d / g));
            }
        }
        Some(order)
    }
}

/// Solves `H * W = Z` column by column through a column echelon form of `H`.
/// The descent runs in the same scalar ladder as the eliminations. A domain
/// verdict (no solution, dependent columns) reached without overflow is
/// exact, so it aborts the ladder.
fn solve_columns<S: Scalar>(
    h: &IntMatrix,
    z: &IntMatrix,
) -> Option<Result<IntMatrix, StepError>> {
    let ht = h.transpose();
    let mut e = Elim::<S>::new(&ht, true, false, false)?;
    let mut run = || -> Result<IntMatrix, StepError> {
        let (rank, pivot_rows) = echelon_in(&mut e)?;
        if rank < h.cols {
            return Err(StepError::Domain(ZlinError::ColumnsDependent));
        }
        // Row j of e.a is the j-th column of the echelonized H; its leading
        // entry sits at pivot_rows[j], strictly increasing in j. Row j of
        // the transform u is the j-th column of V with H * V = E.
        let u = e.u.take().expect("tracked");
        let (m, n) = (h.rows, h.cols);
        let mut w = IntMatrix::zeros(n, z.cols);
        let mut residual = vec![S::sc_zero(); m];
        let mut y = vec![S::sc_zero(); n];
        for col in 0..z.cols {
            for (i, r) in residual.iter_mut().enumerate() {
                *r = S::from_bigint(z.get(i, col)).ok_or(StepError::Overflow)?;
            }
            for j in 0..n {
                let p = pivot_rows[j];
                let (q, r) = residual[p].checked_div_rem(&e.a[j * m + p])?;
                if !r.sc_is_zero() {
                    return Err(StepError::Domain(ZlinError::NoSolution));
                }
                if !q.sc_is_zero() {
                    for i in p..m {
                        let ev = e.a[j * m + i].clone();
                        sub_mul_one(&mut residual[i], &q, &ev)?;
                    }
                }
                y[j] = q;
            }
            if residual.iter().any(|r| !r.sc_is_zero()) {
                return Err(StepError::Domain(ZlinError::NoSolution));
            }
            for i in 0..n {
                let mut acc = S::sc_zero();
                for (j, yj) in y.iter().enumerate() {
                    if !yj.sc_is_zero() {
                        let mut neg = yj.clone();
                        neg.neg_assign();
                        sub_mul_one(&mut acc, &neg, &u[j * n + i])?;
                    }
                }
                w.set(i, col, acc.to_bigint());
            }
        }
        Ok(w)
    };
    Some(run())
}

fn run_solve_columns(h: &IntMatrix, z: &IntMatrix) -> Result<IntMatrix, ZlinError> {
    if z.rows != h.rows {
        return Err(ZlinError::DimensionMismatch(format!(
            "{} rows against {} rows",
            z.rows, h.rows
        )));
    }
    for attempt in [solve_columns::<i64>(h, z), solve_columns::<i128>(h, z)] {
        match attempt {
            Some(Ok(w)) => return Ok(w),
            Some(Err(StepError::Domain(e))) => return Err(e),
            Some(Err(StepError::Overflow)) | None => {}
        }
    }
    match solve_columns::<BigInt>(h, z).expect("bigint entries always convert") {
        Ok(w) => Ok(w),
        Err(StepError::Domain(e)) => Err(e),
        Err(StepError::Overflow) => unreachable!("bigint arithmetic does not overflow"),
    }
}

/// Solves `H * w = z` over the integers, assuming the columns of `H` are
/// linearly independent.
pub fn solve_in_lattice(h: &IntMatrix, z: &[BigInt]) -> Result<Vec<BigInt>, ZlinError> {
    if z.len() != h.rows {
        return Err(ZlinError::DimensionMismatch(format!(
            "vector of length {} against {} rows",
            z.len(),
            h.rows
        )));
    }
    let mut zm = IntMatrix::zeros(h.rows, 1);
    for (i, v) in z.iter().enumerate() {
        zm.set(i, 0, v.clone());
    }
    let w = run_solve_columns(h, &zm)?;
    Ok(w.column(0))
}

/// The quotient of the lattice spanned by the columns of `H` by the
/// sublattice spanned by the columns of `Z`, computed through the unique
/// integer solution of `H * W = Z`.
pub fn quotient_group(h: &IntMatrix, z: &IntMatrix) -> Result<AbelianGroup, ZlinError> {
    let w = run_solve_columns(h, z).map_err(|e| match e {
        ZlinError::NoSolution => ZlinError::SublatticeNotContained,
        other => other,
    })?;
    debug_assert!(h.mul(&w) == *z, "quotient solve postcondition: H*W != Z");
    Ok(cokernel_group(&w))
}

/// Determinant of `1 - K^t` for the all-ones square matrix `K` of size `n`,
/// asserted against the closed form `1 - n`. (The eigenvalues of `K` are `n`
/// once and `0` with multiplicity `n - 1`, so `det(1 - K^t)` is `1 - n`; in
/// particular it never vanishes, which is the point of the check.)
pub fn circulant_det_check(n: usize) -> BigInt {
    assert!(n >= 2);
    let a = IntMatrix::from_fn(n, n, |i, j| if i == j { 0 } else { -1 });
    let det = determinant(&a);
    let expected = BigInt::from(1 - n as i64);
    assert_eq!(det, expected, "circulant determinant mismatch for n = {n}");
    det
}
