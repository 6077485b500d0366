//! Quaternion algebra, quaternionic Hadamard matrices, perfect sequences,
//! and the lift into 2x2 complex unitary blocks.
//!
//! A square matrix `M` of unit quaternions is a quaternionic Hadamard matrix
//! when `M M† = d 1`, i.e. `sum_j M_bj M*_b'j = delta_bb' d`. Multiplication
//! order inside that sum matters: quaternions do not commute, and only two
//! families of transformations preserve the property:
//!
//! - multiplying a whole row on the left by a unit quaternion, and
//! - multiplying a whole column on the right by a unit quaternion.
//!
//! [`QuaternionMatrix::dephase`] uses exactly these to bring the first row
//! and column to 1. Through the lift `q -> f(q*)` those two moves correspond
//! to the block-level gauges that preserve a Hadamard matrix of unitary
//! operators, so dephasing commutes with [`lift_matrix`].
//!
//! JSON encodings: a quaternion is `[a, b, c, d]` for `a + bi + cj + dk`;
//! a matrix is `{"rows": R, "cols": C, "entries": [[a,b,c,d], ...]}`
//! row-major; a perfect sequence is `{"terms": [[a,b,c,d], ...]}`.

use crate::linalg::{Complex64, ComplexMatrix, Tolerance};
use crate::mum::{BlockHadamard, MumError};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Autocorrelation threshold for accepting a perfect sequence. Catalog
/// sequences have exact integer or half-integer components; anything larger
/// than this signals bad user data rather than rounding.
pub const SEQUENCE_AC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum QuaternionError {
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
    #[error("non-finite quaternion component")]
    NonFinite,
    #[error("entry at ({row}, {col}) is not a unit quaternion (norm {norm})")]
    NonUnitEntry { row: usize, col: usize, norm: f64 },
    #[error("sequence term {index} is not a unit quaternion (norm {norm})")]
    NonUnitTerm { index: usize, norm: f64 },
    #[error("sequence is empty")]
    EmptySequence,
    #[error("autocorrelation at shift {shift} has norm {norm:.3e}, expected 0")]
    NotPerfect { shift: usize, norm: f64 },
    #[error("matrix fails the Hadamard check (violation {violation:.3e})")]
    NotHadamard { violation: f64 },
    #[error(transparent)]
    Lift(#[from] MumError),
}

/// Quaternion `a + b i + c j + d k` over f64.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    /// Conjugate: negates the i, j, k components.
    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(self, tol: Tolerance) -> bool {
        (self.norm() - 1.0).abs() <= tol.eps()
    }

    /// Multiplicative inverse `q* / |q|^2`; caller guarantees `q != 0`.
    pub fn inverse(self) -> Self {
        let n = self.norm_sqr();
        self.conj().scale(1.0 / n)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn approx_eq(self, other: Self, eps: f64) -> bool {
        (self - other).norm() <= eps
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    /// Hamilton product: `i^2 = j^2 = -1`, `ij = k`, `ji = -k`.
    fn mul(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a * rhs.a - self.b * rhs.b - self.c * rhs.c - self.d * rhs.d,
            self.a * rhs.b + self.b * rhs.a + self.c * rhs.d - self.d * rhs.c,
            self.a * rhs.c - self.b * rhs.d + self.c * rhs.a + self.d * rhs.b,
            self.a * rhs.d + self.b * rhs.c - self.c * rhs.b + self.d * rhs.a,
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a + rhs.a,
            self.b + rhs.b,
            self.c + rhs.c,
            self.d + rhs.d,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(
            self.a - rhs.a,
            self.b - rhs.b,
            self.c - rhs.c,
            self.d - rhs.d,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6}{:+.6}i{:+.6}j{:+.6}k",
            self.a, self.b, self.c, self.d
        )
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = <[f64; 4]>::deserialize(deserializer)?;
        let q = Quaternion::from_array(v);
        if !q.is_finite() {
            return Err(serde::de::Error::custom("non-finite quaternion component"));
        }
        Ok(q)
    }
}

/// Dense row-major matrix of quaternions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<Quaternion>,
    ) -> Result<Self, QuaternionError> {
        if rows == 0 || cols == 0 {
            return Err(QuaternionError::EmptyDimension);
        }
        if entries.len() != rows * cols {
            return Err(QuaternionError::BadEntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        if entries.iter().any(|q| !q.is_finite()) {
            return Err(QuaternionError::NonFinite);
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<Quaternion>]) -> Result<Self, QuaternionError> {
        if rows.is_empty() {
            return Err(QuaternionError::EmptyDimension);
        }
        let cols = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(QuaternionError::BadEntryCount {
                    rows: rows.len(),
                    cols,
                    got: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.entries[i * self.cols + j] = q;
    }

    /// Worst deviation from the Hadamard conditions: unit-norm entries and
    /// `sum_j M_bj M*_b'j = delta_bb' d`.
    pub fn hadamard_violation(&self) -> Result<f64, QuaternionError> {
        if self.rows != self.cols {
            return Err(QuaternionError::NotSquare(self.rows, self.cols));
        }
        let d = self.rows;
        let mut worst: f64 = 0.0;
        for q in &self.entries {
            worst = worst.max((q.norm() - 1.0).abs());
        }
        for b in 0..d {
            for bp in 0..d {
                let mut acc = Quaternion::ZERO;
                for j in 0..d {
                    acc = acc + self.get(b, j) * self.get(bp, j).conj();
                }
                let target = if b == bp {
                    Quaternion::real(d as f64)
                } else {
                    Quaternion::ZERO
                };
                worst = worst.max((acc - target).norm());
            }
        }
        Ok(worst)
    }

    pub fn is_q_hadamard(&self, tol: Tolerance) -> Result<bool, QuaternionError> {
        Ok(self.hadamard_violation()? <= tol.eps())
    }

    /// Brings the first row and first column to 1 while preserving the
    /// Hadamard property: first each column j is multiplied on the right by
    /// `(M_1j)*`, then each resulting row i is multiplied on the left by the
    /// conjugate of its current first entry. Requires unit entries.
    pub fn dephase(&self) -> Result<QuaternionMatrix, QuaternionError> {
        if self.rows != self.cols {
            return Err(QuaternionError::NotSquare(self.rows, self.cols));
        }
        let d = self.rows;
        for i in 0..d {
            for j in 0..d {
                let norm = self.get(i, j).norm();
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(QuaternionError::NonUnitEntry {
                        row: i,
                        col: j,
                        norm,
                    });
                }
            }
        }
        let mut out = self.clone();
        for j in 0..d {
            let w = self.get(0, j).conj();
            for i in 0..d {
                out.set(i, j, out.get(i, j) * w);
            }
        }
        for i in 0..d {
            let w = out.get(i, 0).conj();
            for j in 0..d {
                out.set(i, j, w * out.get(i, j));
            }
        }
        Ok(out)
    }

    /// First pair of entries (row-major scan) whose commutator norm exceeds
    /// the tolerance. Witness positions are 1-based.
    pub fn has_noncommuting_pair(&self, tol: Tolerance) -> Option<NoncommutingWitness> {
        let total = self.rows * self.cols;
        for x in 0..total {
            for y in (x + 1)..total {
                let p = self.entries[x];
                let q = self.entries[y];
                let comm = (p * q - q * p).norm();
                if comm > tol.eps() {
                    return Some(NoncommutingWitness {
                        first: (x / self.cols + 1, x % self.cols + 1),
                        second: (y / self.cols + 1, y % self.cols + 1),
                        magnitude: comm,
                    });
                }
            }
        }
        None
    }
}

impl<'de> Deserialize<'de> for QuaternionMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<Quaternion>,
        }
        let repr = Repr::deserialize(deserializer)?;
        QuaternionMatrix::new(repr.rows, repr.cols, repr.entries).map_err(serde::de::Error::custom)
    }
}

/// Positions (1-based) of two matrix entries that fail to commute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoncommutingWitness {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub magnitude: f64,
}

/// Periodic autocorrelation `AC(t) = sum_l q_l q*_{(l+t) mod d}` of a
/// candidate sequence. Any integer shift is accepted and reduced mod d.
pub fn autocorrelation(terms: &[Quaternion], t: i64) -> Quaternion {
    let d = terms.len();
    assert!(d > 0, "autocorrelation of an empty sequence");
    let shift = t.rem_euclid(d as i64) as usize;
    let mut acc = Quaternion::ZERO;
    for l in 0..d {
        acc = acc + terms[l] * terms[(l + shift) % d].conj();
    }
    acc
}

/// A sequence of unit quaternions whose periodic autocorrelation vanishes at
/// every nonzero shift. Validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerfectSequence {
    terms: Vec<Quaternion>,
}

impl PerfectSequence {
    /// Validates unit terms and `AC(t) = 0` for `t = 1..d-1` at the pinned
    /// threshold [`SEQUENCE_AC_TOLERANCE`].
    pub fn new(terms: Vec<Quaternion>) -> Result<Self, QuaternionError> {
        if terms.is_empty() {
            return Err(QuaternionError::EmptySequence);
        }
        for (index, q) in terms.iter().enumerate() {
            if !q.is_finite() {
                return Err(QuaternionError::NonFinite);
            }
            let norm = q.norm();
            if (norm - 1.0).abs() > SEQUENCE_AC_TOLERANCE {
                return Err(QuaternionError::NonUnitTerm { index, norm });
            }
        }
        for t in 1..terms.len() {
            let ac = autocorrelation(&terms, t as i64);
            if ac.norm() > SEQUENCE_AC_TOLERANCE {
                return Err(QuaternionError::NotPerfect {
                    shift: t,
                    norm: ac.norm(),
                });
            }
        }
        Ok(Self { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Quaternion] {
        &self.terms
    }

    /// Circulant matrix whose first row is the sequence and whose every next
    /// row is the previous one cyclically shifted right: `M_ij = q_(j-i mod d)`
    /// (0-based). Row orthogonality reduces to the vanishing autocorrelation,
    /// so the result is a quaternionic Hadamard matrix.
    pub fn circulant(&self) -> QuaternionMatrix {
        let d = self.terms.len();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.terms[(j + d - i) % d]);
            }
        }
        QuaternionMatrix::new(d, d, entries).expect("shape by construction")
    }
}

impl<'de> Deserialize<'de> for PerfectSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            terms: Vec<Quaternion>,
        }
        let repr = Repr::deserialize(deserializer)?;
        PerfectSequence::new(repr.terms).map_err(serde::de::Error::custom)
    }
}

/// Real-linear embedding of quaternions into 2x2 complex matrices:
/// `f(1) = 1`, `f(i) = iX`, `f(j) = -iY`, `f(k) = iZ`. It is a homomorphism
/// for the Hamilton product and intertwines conjugation with the adjoint.
pub fn lift_f(q: Quaternion) -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![
            Complex64::new(q.a, q.d),
            Complex64::new(-q.c, q.b),
            Complex64::new(q.c, q.b),
            Complex64::new(q.a, -q.d),
        ],
    )
    .expect("finite components")
}

/// Lifts a quaternionic Hadamard matrix to a Hadamard matrix of unitary
/// operators with block size 2: block (b, j) is `f(M*_bj)`.
pub fn lift_matrix(m: &QuaternionMatrix, tol: Tolerance) -> Result<BlockHadamard, QuaternionError> {
    let violation = m.hadamard_violation()?;
    if violation > tol.eps() {
        return Err(QuaternionError::NotHadamard { violation });
    }
    let d = m.rows();
    let mut blocks = Vec::with_capacity(d);
    for b in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            row.push(lift_f(m.get(b, j).conj()));
        }
        blocks.push(row);
    }
    Ok(BlockHadamard::new(blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Quaternion = Quaternion::new(-0.5, 0.5, -0.5, -0.5);

    #[test]
    fn hamilton_table() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
        assert_eq!(Quaternion::J * Quaternion::J, -Quaternion::ONE);
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0).scale(1.0 / 2f64.sqrt());
        assert!((q * q.inverse()).approx_eq(Quaternion::ONE, 1e-15));
    }

    #[test]
    fn conjugation_and_norm() {
        assert_eq!(Quaternion::K.conj(), -Quaternion::K);
        assert!((Q.norm() - 1.0).abs() < 1e-15);
        let p = Quaternion::new(0.3, -0.7, 0.2, 0.9);
        let q = Quaternion::new(-1.1, 0.4, 0.8, -0.2);
        assert!((p * q).conj().approx_eq(q.conj() * p.conj(), 1e-12));
    }

    #[test]
    fn hadamard_check_two_by_two() {
        let real = QuaternionMatrix::from_rows(&[
            vec![Quaternion::ONE, Quaternion::ONE],
            vec![Quaternion::ONE, -Quaternion::ONE],
        ])
        .unwrap();
        assert!(real.is_q_hadamard(Tolerance::DEFAULT).unwrap());
        let ones = QuaternionMatrix::from_rows(&[
            vec![Quaternion::ONE, Quaternion::ONE],
            vec![Quaternion::ONE, Quaternion::ONE],
        ])
        .unwrap();
        assert!(!ones.is_q_hadamard(Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn autocorrelation_examples() {
        let terms = vec![
            Quaternion::ONE,
            Quaternion::J,
            Quaternion::J,
            Quaternion::ONE,
            Q,
        ];
        assert!(autocorrelation(&terms, 0).approx_eq(Quaternion::real(5.0), 1e-12));
        for t in 1..5 {
            assert!(autocorrelation(&terms, t).norm() < 1e-12);
        }
        let constant = vec![Quaternion::ONE, Quaternion::ONE];
        assert!(autocorrelation(&constant, 1).approx_eq(Quaternion::real(2.0), 1e-12));
        assert!(PerfectSequence::new(constant).is_err());
    }

    #[test]
    fn length_one_sequence_is_allowed() {
        let s = PerfectSequence::new(vec![Quaternion::ONE]).unwrap();
        let m = s.circulant();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert!(m.is_q_hadamard(Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn circulant_rows_are_right_shifts() {
        let terms = vec![
            Quaternion::ONE,
            Quaternion::J,
            Quaternion::J,
            Quaternion::ONE,
            Q,
        ];
        let s = PerfectSequence::new(terms.clone()).unwrap();
        let m = s.circulant();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(m.get(i, j), terms[(j + 5 - i) % 5]);
            }
        }
        // row 2 is row 1 shifted right by one
        for j in 0..5 {
            assert_eq!(m.get(1, (j + 1) % 5), m.get(0, j));
        }
        assert!(m.is_q_hadamard(Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn dephase_fixes_first_row_and_column_and_preserves_hadamard() {
        let s = PerfectSequence::new(vec![
            Quaternion::ONE,
            Quaternion::J,
            Quaternion::J,
            Quaternion::ONE,
            Q,
        ])
        .unwrap();
        let m = s.circulant();
        let deph = m.dephase().unwrap();
        for idx in 0..5 {
            assert!(deph.get(0, idx).approx_eq(Quaternion::ONE, 1e-12));
            assert!(deph.get(idx, 0).approx_eq(Quaternion::ONE, 1e-12));
        }
        assert!(deph.is_q_hadamard(Tolerance::DEFAULT).unwrap());
        // idempotent
        let again = deph.dephase().unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!(again.get(i, j).approx_eq(deph.get(i, j), 1e-12));
            }
        }
    }

    #[test]
    fn noncommuting_pair_detection() {
        let signs = QuaternionMatrix::from_rows(&[
            vec![Quaternion::ONE, -Quaternion::ONE],
            vec![-Quaternion::ONE, Quaternion::ONE],
        ])
        .unwrap();
        assert!(signs
            .has_noncommuting_pair(Tolerance::new_unchecked(1e-8))
            .is_none());
        let single_axis = QuaternionMatrix::from_rows(&[
            vec![Quaternion::ONE, Quaternion::J],
            vec![-Quaternion::J, Quaternion::ONE],
        ])
        .unwrap();
        assert!(single_axis
            .has_noncommuting_pair(Tolerance::new_unchecked(1e-8))
            .is_none());
        let mixed = QuaternionMatrix::from_rows(&[
            vec![Quaternion::I, Quaternion::J],
            vec![Quaternion::ONE, Quaternion::ONE],
        ])
        .unwrap();
        let witness = mixed
            .has_noncommuting_pair(Tolerance::new_unchecked(1e-8))
            .unwrap();
        assert_eq!(witness.first, (1, 1));
        assert_eq!(witness.second, (1, 2));
    }

    #[test]
    fn lift_f_basis_images() {
        let fj = lift_f(Quaternion::J);
        // -iY = [[0, -1], [1, 0]]
        assert!((fj.get(0, 0)).norm() < 1e-15);
        assert!((fj.get(0, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((fj.get(1, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let fi = lift_f(Quaternion::I);
        let fk = lift_f(Quaternion::K);
        assert!(fi.mat_mul(&fj).unwrap().max_abs_diff(&fk) < 1e-15);
        // conjugation maps to the adjoint
        let fq = lift_f(Q);
        assert!(fq.adjoint().max_abs_diff(&lift_f(Q.conj())) < 1e-15);
        assert!(fq.is_unitary(Tolerance::DEFAULT));
    }

    #[test]
    fn lift_matrix_requires_hadamard() {
        let ones = QuaternionMatrix::from_rows(&[
            vec![Quaternion::ONE, Quaternion::ONE],
            vec![Quaternion::ONE, Quaternion::ONE],
        ])
        .unwrap();
        assert!(matches!(
            lift_matrix(&ones, Tolerance::DEFAULT),
            Err(QuaternionError::NotHadamard { .. })
        ));
        let real = QuaternionMatrix::from_rows(&[
            vec![Quaternion::ONE, Quaternion::ONE],
            vec![Quaternion::ONE, -Quaternion::ONE],
        ])
        .unwrap();
        let h = lift_matrix(&real, Tolerance::DEFAULT).unwrap();
        assert_eq!(h.d(), 2);
        assert_eq!(h.k(), 2);
        // real entries lift to signed identities
        assert!(
            h.block(1, 1)
                .max_abs_diff(&ComplexMatrix::identity(2).scale(Complex64::new(-1.0, 0.0)))
                < 1e-15
        );
        // j lifts (with conjugation) to f(-j) = iY
        let m = QuaternionMatrix::from_rows(&[vec![Quaternion::J]]).unwrap();
        let lifted = lift_f(m.get(0, 0).conj());
        assert!((lifted.get(0, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((lifted.get(1, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sequence_json_round_trip() {
        let s = PerfectSequence::new(vec![
            Quaternion::ONE,
            Quaternion::J,
            Quaternion::J,
            Quaternion::ONE,
            Q,
        ])
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: PerfectSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(s, back);
        // a non-perfect sequence is rejected at parse time
        let bad = r#"{"terms":[[1,0,0,0],[1,0,0,0]]}"#;
        assert!(serde_json::from_str::<PerfectSequence>(bad).is_err());
    }
}
