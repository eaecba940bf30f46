//! Exact linear algebra over the rationals.
//!
//! Every other module sits on top of this one. Matrices are dense and
//! row-major; row reduction is fraction-free (Bareiss) on an integer copy of
//! the input, pivoting on the first nonzero entry in column order, so every
//! basis returned here comes out in a deterministic order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

/// Shorthand for an integer-valued scalar.
pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a"` or `"a/b"` (surrounding whitespace allowed).
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// Canonical string form: `"a"` for integers, `"a/b"` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed so that `0 x cols`
    /// matrices can be expressed.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self { rows: nrows, cols, data })
    }

    /// Builds a matrix from integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(cols, rows).expect("ragged integer matrix")
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::Dimension(format!(
                    "column {j} has {} entries, expected {nrows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::Dimension(format!(
                "shape {}x{} does not match {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} rows with {} rows",
                self.rows, rhs.rows
            )));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Ok(Matrix { rows: self.rows, cols, data })
    }

    /// `[self; rhs]`
    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "vstack of {} cols with {} cols",
                self.cols, rhs.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Matrix { rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, rhs: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, rhs);
        m
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "paste out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c).clone();
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        self.select_rows(rows).select_cols(cols)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries(self.to_rows().iter().map(|r| r.iter().map(format_scalar).collect::<Vec<_>>()))
            .finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_scalar).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Integer row-echelon form produced by fraction-free elimination.
struct Echelon {
    /// Pivot column of each nonzero row, strictly increasing.
    pivots: Vec<usize>,
    /// The nonzero rows of the echelon form (integer entries).
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

/// Scales each row by the lcm of its denominators.
fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Bareiss elimination with first-nonzero pivoting in column order.
fn bareiss(m: &Matrix) -> Echelon {
    let mut a = integer_rows(m);
    let (nrows, ncols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut k = 0;
    for c in 0..ncols {
        if k == nrows {
            break;
        }
        let Some(p) = (k..nrows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(k, p);
        for i in k + 1..nrows {
            let factor = a[i][c].clone();
            for j in c + 1..ncols {
                let t = &a[k][c] * &a[i][j] - &factor * &a[k][j];
                let (quot, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                a[i][j] = quot;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[k][c].clone();
        pivots.push(c);
        k += 1;
    }
    a.truncate(k);
    Echelon { pivots, rows: a, cols: ncols }
}

impl Echelon {
    /// Reduced row-echelon form over the rationals (pivots normalised to 1).
    fn reduced(&self) -> Vec<Vec<Scalar>> {
        let mut rows: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| Scalar::from_integer(x.clone())).collect())
            .collect();
        for i in (0..rows.len()).rev() {
            let pc = self.pivots[i];
            let inv = rows[i][pc].recip();
            for x in rows[i].iter_mut() {
                *x *= &inv;
            }
            for r in 0..i {
                let f = rows[r][pc].clone();
                if f.is_zero() {
                    continue;
                }
                for j in pc..self.cols {
                    let delta = &f * &rows[i][j];
                    rows[r][j] -= delta;
                }
            }
        }
        rows
    }
}

/// Rank over the rationals.
pub fn rank(m: &Matrix) -> usize {
    bareiss(m).pivots.len()
}

/// Pivot columns of `m` in increasing order.
pub fn pivot_columns(m: &Matrix) -> Vec<usize> {
    bareiss(m).pivots
}

/// Columns form a basis of `ker(m)`, one per free column, in column order.
pub fn kernel_basis(m: &Matrix) -> Matrix {
    let ech = bareiss(m);
    let rref = ech.reduced();
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(n, free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, Scalar::one());
        for (i, &p) in ech.pivots.iter().enumerate() {
            k.set(p, j, -rref[i][f].clone());
        }
    }
    k
}

/// Columns form a basis of `im(m)`: the pivot columns of `m`.
pub fn image_basis(m: &Matrix) -> Matrix {
    m.select_cols(&pivot_columns(m))
}

/// A surjection from the codomain of `m` whose kernel is exactly `im(m)`.
pub fn cokernel_projection(m: &Matrix) -> Matrix {
    kernel_basis(&m.transpose()).transpose()
}

/// Some `x` with `m * x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if m.rows != b.rows {
        return Err(Error::Dimension(format!(
            "solve: matrix has {} rows but right-hand side has {}",
            m.rows, b.rows
        )));
    }
    let aug = m.hstack(b)?;
    let ech = bareiss(&aug);
    if ech.pivots.iter().any(|&p| p >= m.cols) {
        return Ok(None);
    }
    let rref = ech.reduced();
    let mut x = Matrix::zeros(m.cols, b.cols);
    for (i, &p) in ech.pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(p, j, rref[i][m.cols + j].clone());
        }
    }
    Ok(Some(x))
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("cannot invert a {}x{} matrix", m.rows, m.cols)));
    }
    if rank(m) != m.rows {
        return Err(Error::Singular);
    }
    Ok(solve(m, &Matrix::identity(m.rows))?.expect("full-rank system is consistent"))
}

/// A left inverse of a full-column-rank matrix, supported on its first
/// independent rows.
pub fn left_inverse(k: &Matrix) -> Result<Matrix> {
    let rows = pivot_columns(&k.transpose());
    if rows.len() != k.cols {
        return Err(Error::PreconditionViolated("left inverse of a non-injective matrix".into()));
    }
    let inv = inverse(&k.select_rows(&rows))?;
    let mut l = Matrix::zeros(k.cols, k.rows);
    for (j, &r) in rows.iter().enumerate() {
        for i in 0..k.cols {
            l.set(i, r, inv.get(i, j).clone());
        }
    }
    Ok(l)
}

/// A right inverse of a full-row-rank matrix, supported on its first
/// independent columns.
pub fn right_inverse(c: &Matrix) -> Result<Matrix> {
    let cols = pivot_columns(c);
    if cols.len() != c.rows {
        return Err(Error::PreconditionViolated("right inverse of a non-surjective matrix".into()));
    }
    let inv = inverse(&c.select_cols(&cols))?;
    let mut r = Matrix::zeros(c.cols, c.rows);
    for (i, &col) in cols.iter().enumerate() {
        for j in 0..c.rows {
            r.set(col, j, inv.get(i, j).clone());
        }
    }
    Ok(r)
}

/// Indices of the columns of `candidates` that extend the column space of
/// `base` greedily, in pivot order.
pub fn extending_columns(base: &Matrix, candidates: &Matrix) -> Result<Vec<usize>> {
    let joined = base.hstack(candidates)?;
    Ok(pivot_columns(&joined)
        .into_iter()
        .filter(|&p| p >= base.cols)
        .map(|p| p - base.cols)
        .collect())
}

/// Standard basis vectors completing the columns of `b` to a basis.
pub fn complement_columns(b: &Matrix) -> Result<Matrix> {
    let id = Matrix::identity(b.rows);
    let idx = extending_columns(b, &id)?;
    Ok(id.select_cols(&idx))
}

/// Pushforward adjoint to a pullback under perfect pairings.
///
/// `r` maps the complementary-degree space on the target side to the one on
/// the source side; the result `g` satisfies `gᵀ · q_target = q_source · r`.
pub fn adjoint_pushforward(r: &Matrix, q_source: &Matrix, q_target: &Matrix) -> Result<Matrix> {
    if !q_source.is_square() || !q_target.is_square() {
        return Err(Error::Dimension("pairing matrices must be square".into()));
    }
    if r.rows != q_source.rows || r.cols != q_target.rows {
        return Err(Error::Dimension(format!(
            "restriction is {}x{} but pairings are {}x{} and {}x{}",
            r.rows, r.cols, q_source.rows, q_source.cols, q_target.rows, q_target.cols
        )));
    }
    if rank(q_source) != q_source.rows {
        return Err(Error::PairingNotPerfect);
    }
    let q_target_inv = inverse(q_target).map_err(|_| Error::PairingNotPerfect)?;
    Ok(q_source.mul(r)?.mul(&q_target_inv)?.transpose())
}

/// True when some entry is negative; used by reporting code.
pub fn has_negative(m: &Matrix) -> bool {
    m.data.iter().any(Signed::is_negative)
}
