//! Dense complex linear algebra substrate.
//!
//! [`ComplexMatrix`] is a row-major dense matrix of double-precision complex
//! entries, used throughout the crate for operators, projectors, states, and
//! column vectors. All predicates are tolerance-based: the norm surrogate is
//! the maximum entrywise modulus, which bounds the spectral norm up to a
//! dimension factor at the scales this crate targets (dimension <= ~256).
//!
//! The JSON encoding of a matrix is
//! `{"rows": R, "cols": C, "entries": [[re, im], ...]}` with entries row-major.

mod eig;

pub use eig::{eig_hermitian, eig_normal, orthonormal_column_basis, support_projector};

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::TAU;
use std::fmt;
use thiserror::Error;

/// Double-precision complex scalar.
pub type Complex64 = Complex<f64>;

/// Errors from matrix construction and arithmetic.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix dimensions must be positive")]
    EmptyDimension,
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadEntryCount {
        rows: usize,
        cols: usize,
        got: usize,
    },
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("index {index} out of range [1, {bound}]")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrix is not normal (defect {0:.3e})")]
    NotNormal(f64),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension {0} is not divisible by leading factor {1}")]
    BadFactorization(usize, usize),
    #[error("tolerance must lie in (0, 1), got {0}")]
    BadTolerance(f64),
}

/// Absolute entrywise tolerance for structural predicates.
///
/// Must lie strictly between 0 and 1. The named constants are the defaults
/// used across the crate: [`Tolerance::DEFAULT`] for structural checks and
/// [`Tolerance::EIGEN`] for anything downstream of the iterative eigensolver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    /// Structural predicate tolerance.
    pub const DEFAULT: Tolerance = Tolerance { eps: 1e-10 };
    /// Eigen-merge and post-eigensolver tolerance, looser because iterative.
    pub const EIGEN: Tolerance = Tolerance { eps: 1e-8 };

    pub fn new(eps: f64) -> Result<Self, LinalgError> {
        if eps.is_finite() && eps > 0.0 && eps < 1.0 {
            Ok(Self { eps })
        } else {
            Err(LinalgError::BadTolerance(eps))
        }
    }

    /// Constructs without range validation; caller guarantees 0 < eps < 1.
    pub const fn new_unchecked(eps: f64) -> Self {
        Self { eps }
    }

    pub const fn eps(&self) -> f64 {
        self.eps
    }
}

impl TryFrom<f64> for Tolerance {
    type Error = LinalgError;
    fn try_from(eps: f64) -> Result<Self, Self::Error> {
        Tolerance::new(eps)
    }
}

impl From<Tolerance> for f64 {
    fn from(t: Tolerance) -> f64 {
        t.eps
    }
}

/// exp(2 pi i k / d), the k-th power of the primitive d-th root of unity.
///
/// Computed from the reduced angle rather than by repeated multiplication,
/// so powers stay accurate for any k.
pub fn root_of_unity_power(d: usize, k: i64) -> Complex64 {
    debug_assert!(d > 0);
    let d_i = d as i64;
    let k = k.rem_euclid(d_i);
    Complex64::from_polar(1.0, TAU * (k as f64) / (d as f64))
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating the count and that
    /// every entry is finite.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyDimension);
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::BadEntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite(idx / cols, idx % cols));
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from rows of real scalars.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        assert!(r > 0 && !rows[0].is_empty());
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Standard basis column vector `|idx>` (0-based) of the given dimension.
    pub fn basis_column(dim: usize, idx: usize) -> Self {
        assert!(idx < dim);
        let mut m = Self::zeros(dim, 1);
        m.set(idx, 0, Complex64::new(1.0, 0.0));
        m
    }

    /// Matrix unit `|i><j|` (0-based) of the given dimension.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        assert!(i < dim && j < dim);
        let mut m = Self::zeros(dim, dim);
        m.set(i, j, Complex64::new(1.0, 0.0));
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Standard matrix product.
    pub fn mat_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        self.check_same_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        self.check_same_shape(rhs)?;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * z).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Transpose in the stored (computational) basis.
    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise complex conjugate.
    pub fn conjugate(&self) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.conj()).collect(),
        }
    }

    /// Kronecker product; block (i, j) of the result is `self[i,j] * rhs`.
    pub fn kron(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for p in 0..rhs.rows {
                    for q in 0..rhs.cols {
                        out.set(i * rhs.rows + p, j * rhs.cols + q, a * rhs.get(p, q));
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// trace(self * rhs) without forming the product.
    pub fn trace_of_product(&self, rhs: &ComplexMatrix) -> Result<Complex64, LinalgError> {
        if self.cols != rhs.rows || rhs.cols != self.rows {
            return Err(LinalgError::DimensionMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self.get(i, k) * rhs.get(k, i);
            }
        }
        Ok(acc)
    }

    /// k-fold product by binary exponentiation; `k = 0` gives the identity.
    pub fn matrix_power(&self, k: usize) -> Result<ComplexMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut result = ComplexMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mat_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mat_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Maximum entrywise modulus, the norm surrogate used by all predicates.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum entrywise modulus of `self - rhs`; panics on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Deviation of `self` from the identity, as max entrywise modulus.
    pub fn deviation_from_identity(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.get(i, j) - target).norm());
            }
        }
        worst
    }

    /// True iff both `a a†` and `a† a` are the identity within `tol`.
    pub fn is_unitary(&self, tol: Tolerance) -> bool {
        if !self.is_square() {
            return false;
        }
        let adj = self.adjoint();
        let left = self.mat_mul(&adj).expect("square");
        if left.deviation_from_identity() > tol.eps() {
            return false;
        }
        let right = adj.mat_mul(self).expect("square");
        right.deviation_from_identity() <= tol.eps()
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol.eps()
    }

    /// True iff `a = a†` and `a² = a` within `tol`.
    pub fn is_orthogonal_projector(&self, tol: Tolerance) -> bool {
        if !self.is_square() {
            return false;
        }
        if self.max_abs_diff(&self.adjoint()) > tol.eps() {
            return false;
        }
        let sq = self.mat_mul(self).expect("square");
        sq.max_abs_diff(self) <= tol.eps()
    }

    /// Max entrywise modulus of the commutator `ab - ba`.
    pub fn commutator_norm(&self, rhs: &ComplexMatrix) -> Result<f64, LinalgError> {
        if !self.is_square() || self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        let ab = self.mat_mul(rhs)?;
        let ba = rhs.mat_mul(self)?;
        Ok(ab.max_abs_diff(&ba))
    }

    /// Partial trace over the leading tensor factor: viewing the space as
    /// `C^lead (x) C^rest`, returns the `rest`-dimensional reduced operator.
    pub fn partial_trace_leading(&self, lead: usize) -> Result<ComplexMatrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        if lead == 0 || !self.rows.is_multiple_of(lead) {
            return Err(LinalgError::BadFactorization(self.rows, lead.max(1)));
        }
        let rest = self.rows / lead;
        let mut out = ComplexMatrix::zeros(rest, rest);
        for x in 0..lead {
            for i in 0..rest {
                for j in 0..rest {
                    let v = out.get(i, j) + self.get(x * rest + i, x * rest + j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Column `j` as a column vector.
    pub fn column(&self, j: usize) -> ComplexMatrix {
        assert!(j < self.cols);
        ComplexMatrix::from_fn(self.rows, 1, |i, _| self.get(i, j))
    }

    fn check_same_shape(&self, rhs: &ComplexMatrix) -> Result<(), LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Normalized Fourier basis column: d-dimensional unit vector whose i-th
/// entry (1-based) is `omega_d^{i j} / sqrt(d)`, for `1 <= j <= d`.
pub fn fourier_vector(d: usize, j: usize) -> Result<ComplexMatrix, LinalgError> {
    if d == 0 {
        return Err(LinalgError::EmptyDimension);
    }
    if j < 1 || j > d {
        return Err(LinalgError::IndexOutOfRange { index: j, bound: d });
    }
    let scale = 1.0 / (d as f64).sqrt();
    Ok(ComplexMatrix::from_fn(d, 1, |i0, _| {
        root_of_unity_power(d, ((i0 + 1) * j) as i64).scale(scale)
    }))
}

// ---------------------------------------------------------------------------
// JSON encoding

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let entries = repr
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(repr.rows, repr.cols, entries).map_err(serde::de::Error::custom)
    }
}
