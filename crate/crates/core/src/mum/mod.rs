//! Mutually unbiased measurement pairs as grids of unitary blocks.
//!
//! A d-outcome MUM pair on `C^n (x) C^d` is stored through the d x d grid of
//! n x n unitaries `U^b_j` ([`MumPair`]). The first measurement is always
//! `P_a = 1 (x) |a><a|`; the second is reconstructed as
//! `Q_b = (1/d) sum_jk U^b_j (U^b_k)† (x) |j><k|` (see [`build_projectors`]).
//! The grid satisfies `U^b_1 = 1`, unitarity, and
//! `sum_b U^b_j (U^b_k)† = delta_jk d 1`; the pair is *canonical* when
//! additionally `U^1_j = 1`.
//!
//! Dropping `U^b_1 = 1` and adding the transposed-order orthogonality
//! `sum_j (U^b_j)† U^b'_j = delta_bb' d 1` gives a [`BlockHadamard`], a
//! Hadamard matrix of unitary operators. Block Hadamards are closed under
//! the two gauge families (right multiplication per block-row, left
//! multiplication per block-column); a dephased block Hadamard is exactly a
//! canonical MUM pair.
//!
//! Outcome indexing in reports and witnesses is 1-based; storage is 0-based.

mod extract;

pub use extract::{direct_sum_reconstruction, extract_mub_blocks, MubBlock};

use crate::linalg::{
    fourier_vector, root_of_unity_power, Complex64, ComplexMatrix, LinalgError, Tolerance,
};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

/// Looser default for the direct-sum verdict: commutators accumulate two
/// products, while genuine violations are O(1) in every known example.
pub const DIRECT_SUM_TOLERANCE: Tolerance = Tolerance::new_unchecked(1e-8);

#[derive(Debug, Error)]
pub enum MumError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("outcome count must be at least 2, got {0}")]
    BadOutcomeCount(usize),
    #[error("block grid is ragged or its blocks are not uniformly sized square matrices")]
    BadBlockGrid,
    #[error("pair violates the MUM block conditions (violation {violation:.3e})")]
    InvalidPair { violation: f64 },
    #[error("pair is not in canonical form (violation {violation:.3e})")]
    NotCanonical { violation: f64 },
    #[error("block matrix is not dephased (violation {violation:.3e})")]
    NotDephased { violation: f64 },
    #[error("blocks violate the Hadamard conditions (violation {violation:.3e})")]
    HadamardViolation { violation: f64 },
    #[error("blocks {first:?} and {second:?} do not commute (norm {magnitude:.3e})")]
    NotCommuting {
        first: (usize, usize),
        second: (usize, usize),
        magnitude: f64,
    },
    #[error("outcome extension factor must be at least 2, got {0}")]
    BadExtensionFactor(usize),
    #[error("gauge operator {index} is not unitary within tolerance")]
    NonUnitaryGauge { index: usize },
    #[error("measurement lists are malformed: {0}")]
    MeasurementShape(String),
}

/// Two block positions (1-based) whose commutator exceeds the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutationWitness {
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub magnitude: f64,
}

/// Verification summary shared by the block-level and projector-level
/// checkers. `canonical` and `direct_sum_of_mubs` are `None` when the
/// producing verification did not evaluate them; a witness is present
/// exactly when `direct_sum_of_mubs == Some(false)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MumReport {
    pub conditions_ok: bool,
    pub orthogonality_ok: bool,
    pub canonical: Option<bool>,
    pub direct_sum_of_mubs: Option<bool>,
    pub max_violation: f64,
    pub witness: Option<CommutationWitness>,
    pub tolerance: f64,
}

impl MumReport {
    pub fn passed(&self) -> bool {
        self.conditions_ok && self.orthogonality_ok
    }
}

/// Outcome of [`direct_sum_test`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectSumVerdict {
    pub is_direct_sum: bool,
    pub max_commutator: f64,
    pub witness: Option<CommutationWitness>,
}

fn check_block_grid(blocks: &[Vec<ComplexMatrix>]) -> Result<(usize, usize), MumError> {
    let d = blocks.len();
    if d < 2 {
        return Err(MumError::BadOutcomeCount(d));
    }
    let first = blocks
        .first()
        .and_then(|row| row.first())
        .ok_or(MumError::BadBlockGrid)?;
    if !first.is_square() {
        return Err(MumError::BadBlockGrid);
    }
    let k = first.rows();
    for row in blocks {
        if row.len() != d {
            return Err(MumError::BadBlockGrid);
        }
        for b in row {
            if b.rows() != k || b.cols() != k {
                return Err(MumError::BadBlockGrid);
            }
        }
    }
    Ok((d, k))
}

// ---------------------------------------------------------------------------
// Hadamard matrices of unitary operators

/// A d x d grid of k x k unitary blocks satisfying the scaled orthogonality
/// relations of a Hadamard matrix of unitary operators. Construction checks
/// shape only; [`verify_unitary_hadamard`] checks the conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockHadamard {
    d: usize,
    k: usize,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl BlockHadamard {
    pub fn new(blocks: Vec<Vec<ComplexMatrix>>) -> Result<Self, MumError> {
        let (d, k) = check_block_grid(&blocks)?;
        Ok(Self { d, k, blocks })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Block at (row b, column j), 0-based.
    pub fn block(&self, b: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[b][j]
    }

    pub fn blocks(&self) -> &[Vec<ComplexMatrix>] {
        &self.blocks
    }

    /// Worst deviation of the first block-row and block-column from the
    /// identity.
    pub fn dephasing_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.d {
            worst = worst.max(self.blocks[0][j].deviation_from_identity());
            worst = worst.max(self.blocks[j][0].deviation_from_identity());
        }
        worst
    }

    pub fn is_dephased(&self, tol: Tolerance) -> bool {
        self.dephasing_violation() <= tol.eps()
    }

    /// Applies the two Hadamard-preserving gauges: block (b, j) becomes
    /// `col_gauge[j] * U^b_j * row_gauge[b]`. All gauges must be unitary.
    pub fn gauge_transform(
        &self,
        row_gauge: &[ComplexMatrix],
        col_gauge: &[ComplexMatrix],
        tol: Tolerance,
    ) -> Result<BlockHadamard, MumError> {
        if row_gauge.len() != self.d || col_gauge.len() != self.d {
            return Err(MumError::MeasurementShape(format!(
                "expected {} gauge operators per side",
                self.d
            )));
        }
        for (index, w) in row_gauge.iter().chain(col_gauge.iter()).enumerate() {
            if w.rows() != self.k || w.cols() != self.k || !w.is_unitary(tol) {
                return Err(MumError::NonUnitaryGauge {
                    index: index % self.d,
                });
            }
        }
        let mut blocks = Vec::with_capacity(self.d);
        for b in 0..self.d {
            let mut row = Vec::with_capacity(self.d);
            for j in 0..self.d {
                let m = col_gauge[j]
                    .mat_mul(&self.blocks[b][j])?
                    .mat_mul(&row_gauge[b])?;
                row.push(m);
            }
            blocks.push(row);
        }
        let out = BlockHadamard::new(blocks)?;
        let report = verify_unitary_hadamard(&out, tol);
        if !report.passed() {
            return Err(MumError::HadamardViolation {
                violation: report.max_violation,
            });
        }
        Ok(out)
    }

    /// Gauges the grid into dephased form: first the block-row gauge
    /// `W_j = (U^1_j)†` brings the first block-row to the identity, then the
    /// block-column gauge `W^b = (U^b_1)†` (with the updated first column)
    /// brings the first block-column to the identity.
    pub fn dephase(&self) -> Result<BlockHadamard, MumError> {
        let mut blocks = self.blocks.clone();
        for j in 0..self.d {
            let w = blocks[0][j].adjoint();
            for b in 0..self.d {
                blocks[b][j] = w.mat_mul(&blocks[b][j])?;
            }
        }
        for b in 0..self.d {
            let w = blocks[b][0].adjoint();
            for j in 0..self.d {
                blocks[b][j] = blocks[b][j].mat_mul(&w)?;
            }
        }
        BlockHadamard::new(blocks)
    }
}

impl<'de> Deserialize<'de> for BlockHadamard {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            d: usize,
            k: usize,
            blocks: Vec<Vec<ComplexMatrix>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let h = BlockHadamard::new(repr.blocks).map_err(serde::de::Error::custom)?;
        if repr.d != h.d() || repr.k != h.k() {
            return Err(serde::de::Error::custom(format!(
                "declared sizes d={} k={} do not match the block grid ({}x{} blocks of size {})",
                repr.d,
                repr.k,
                h.d(),
                h.d(),
                h.k()
            )));
        }
        Ok(h)
    }
}

/// Checks the three conditions of a Hadamard matrix of unitary operators:
/// every block unitary, `sum_b U^b_j (U^b_k)† = delta_jk d 1`, and
/// `sum_j (U^b_j)† U^b'_j = delta_bb' d 1`. The last is reported through
/// `orthogonality_ok`, the first two through `conditions_ok`.
pub fn verify_unitary_hadamard(h: &BlockHadamard, tol: Tolerance) -> MumReport {
    let d = h.d();
    let k = h.k();
    let eye = ComplexMatrix::identity(k);
    let scaled_eye = eye.scale(Complex64::new(d as f64, 0.0));
    let zero = ComplexMatrix::zeros(k, k);

    let mut unit_violation: f64 = 0.0;
    for row in h.blocks() {
        for u in row {
            let adj = u.adjoint();
            unit_violation = unit_violation
                .max(u.mat_mul(&adj).expect("square").deviation_from_identity())
                .max(adj.mat_mul(u).expect("square").deviation_from_identity());
        }
    }

    let mut column_violation: f64 = 0.0;
    for j in 0..d {
        for l in 0..d {
            let mut acc = ComplexMatrix::zeros(k, k);
            for b in 0..d {
                let term = h
                    .block(b, j)
                    .mat_mul(&h.block(b, l).adjoint())
                    .expect("square");
                acc = acc.add(&term).expect("shape");
            }
            let target = if j == l { &scaled_eye } else { &zero };
            column_violation = column_violation.max(acc.max_abs_diff(target));
        }
    }

    let mut row_violation: f64 = 0.0;
    for b in 0..d {
        for bp in 0..d {
            let mut acc = ComplexMatrix::zeros(k, k);
            for j in 0..d {
                let term = h
                    .block(b, j)
                    .adjoint()
                    .mat_mul(h.block(bp, j))
                    .expect("square");
                acc = acc.add(&term).expect("shape");
            }
            let target = if b == bp { &scaled_eye } else { &zero };
            row_violation = row_violation.max(acc.max_abs_diff(target));
        }
    }

    MumReport {
        conditions_ok: unit_violation.max(column_violation) <= tol.eps(),
        orthogonality_ok: row_violation <= tol.eps(),
        canonical: Some(h.is_dephased(tol)),
        direct_sum_of_mubs: None,
        max_violation: unit_violation.max(column_violation).max(row_violation),
        witness: None,
        tolerance: tol.eps(),
    }
}

// ---------------------------------------------------------------------------
// MUM pairs

/// A d-outcome MUM pair on `C^n (x) C^d`, stored as the grid of unitary
/// blocks `U^b_j` (row b, column j, 0-based storage). Construction checks
/// shape and computes the canonical flag; the semantic block conditions are
/// gated by [`MumPair::ensure_valid`] in every consuming operation.
#[derive(Debug, Clone, PartialEq)]
pub struct MumPair {
    d: usize,
    n: usize,
    canonical: bool,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl MumPair {
    pub fn new(blocks: Vec<Vec<ComplexMatrix>>) -> Result<Self, MumError> {
        let (d, n) = check_block_grid(&blocks)?;
        let canonical = blocks[0]
            .iter()
            .map(|u| u.deviation_from_identity())
            .fold(0.0f64, f64::max)
            <= Tolerance::DEFAULT.eps();
        Ok(Self {
            d,
            n,
            canonical,
            blocks,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn block(&self, b: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[b][j]
    }

    pub fn blocks(&self) -> &[Vec<ComplexMatrix>] {
        &self.blocks
    }

    /// Worst violation of the MUM block conditions: `U^b_1 = 1`, every block
    /// unitary, and `sum_b U^b_j (U^b_k)† = delta_jk d 1`.
    pub fn max_violation(&self) -> f64 {
        let eye = ComplexMatrix::identity(self.n);
        let scaled_eye = eye.scale(Complex64::new(self.d as f64, 0.0));
        let zero = ComplexMatrix::zeros(self.n, self.n);
        let mut worst: f64 = 0.0;
        for b in 0..self.d {
            worst = worst.max(self.blocks[b][0].deviation_from_identity());
            for u in &self.blocks[b] {
                let adj = u.adjoint();
                worst = worst
                    .max(u.mat_mul(&adj).expect("square").deviation_from_identity())
                    .max(adj.mat_mul(u).expect("square").deviation_from_identity());
            }
        }
        for j in 0..self.d {
            for l in 0..self.d {
                let mut acc = ComplexMatrix::zeros(self.n, self.n);
                for b in 0..self.d {
                    let term = self.blocks[b][j]
                        .mat_mul(&self.blocks[b][l].adjoint())
                        .expect("square");
                    acc = acc.add(&term).expect("shape");
                }
                let target = if j == l { &scaled_eye } else { &zero };
                worst = worst.max(acc.max_abs_diff(target));
            }
        }
        worst
    }

    pub fn ensure_valid(&self, tol: Tolerance) -> Result<(), MumError> {
        let violation = self.max_violation();
        if violation > tol.eps() {
            return Err(MumError::InvalidPair { violation });
        }
        Ok(())
    }

    /// Reinterprets the pair as a block Hadamard (the conditions of a valid
    /// pair imply all three Hadamard relations).
    pub fn as_block_hadamard(&self) -> BlockHadamard {
        BlockHadamard {
            d: self.d,
            k: self.n,
            blocks: self.blocks.clone(),
        }
    }
}

impl Serialize for MumPair {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            d: usize,
            n: usize,
            canonical: bool,
            blocks: &'a [Vec<ComplexMatrix>],
        }
        Repr {
            d: self.d,
            n: self.n,
            canonical: self.canonical,
            blocks: &self.blocks,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MumPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            d: usize,
            n: usize,
            #[allow(dead_code)]
            canonical: Option<bool>,
            blocks: Vec<Vec<ComplexMatrix>>,
        }
        // the canonical flag is recomputed from the blocks
        let repr = Repr::deserialize(deserializer)?;
        let pair = MumPair::new(repr.blocks).map_err(serde::de::Error::custom)?;
        if repr.d != pair.d() || repr.n != pair.n() {
            return Err(serde::de::Error::custom(format!(
                "declared sizes d={} n={} do not match the block grid ({}x{} blocks of size {})",
                repr.d,
                repr.n,
                pair.d(),
                pair.d(),
                pair.n()
            )));
        }
        Ok(pair)
    }
}

/// Builds the two projective measurements of a pair: `P_a = 1 (x) |a><a|`
/// and `Q_b = (1/d) sum_jk U^b_j (U^b_k)† (x) |j><k|`, both on dimension
/// `n d`.
pub fn build_projectors(m: &MumPair) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>), MumError> {
    m.ensure_valid(Tolerance::DEFAULT)?;
    build_projectors_unchecked(m)
}

/// Projector construction without the validity gate, for callers that have
/// already decided which tolerance applies.
fn build_projectors_unchecked(
    m: &MumPair,
) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>), MumError> {
    let d = m.d();
    let n = m.n();
    let eye_n = ComplexMatrix::identity(n);
    let mut p = Vec::with_capacity(d);
    for a in 0..d {
        p.push(eye_n.kron(&ComplexMatrix::matrix_unit(d, a, a)));
    }
    let mut q = Vec::with_capacity(d);
    let inv_d = Complex64::new(1.0 / d as f64, 0.0);
    for b in 0..d {
        let mut acc = ComplexMatrix::zeros(n * d, n * d);
        for j in 0..d {
            for k in 0..d {
                let v = m.block(b, j).mat_mul(&m.block(b, k).adjoint())?;
                acc = acc.add(&v.kron(&ComplexMatrix::matrix_unit(d, j, k)))?;
            }
        }
        q.push(acc.scale(inv_d));
    }
    Ok((p, q))
}

fn check_measurement_lists(
    p: &[ComplexMatrix],
    q: &[ComplexMatrix],
) -> Result<(usize, usize), MumError> {
    if p.is_empty() || p.len() != q.len() {
        return Err(MumError::MeasurementShape(format!(
            "expected two equal-length non-empty lists, got {} and {}",
            p.len(),
            q.len()
        )));
    }
    let dim = p[0].rows();
    for m in p.iter().chain(q.iter()) {
        if !m.is_square() || m.rows() != dim {
            return Err(MumError::MeasurementShape(format!(
                "expected square matrices of dimension {dim}"
            )));
        }
    }
    Ok((p.len(), dim))
}

/// Checks the defining MUM identities `P_a = d P_a Q_b P_a` and
/// `Q_b = d Q_b P_a Q_b` for all outcomes, together with projector,
/// completeness, and pairwise-orthogonality properties of both lists.
pub fn verify_mum_conditions(
    p: &[ComplexMatrix],
    q: &[ComplexMatrix],
    tol: Tolerance,
) -> Result<MumReport, MumError> {
    let (d, dim) = check_measurement_lists(p, q)?;
    let scale = Complex64::new(d as f64, 0.0);

    let mut structural: f64 = 0.0;
    for m in p.iter().chain(q.iter()) {
        structural = structural.max(m.max_abs_diff(&m.adjoint()));
        structural = structural.max(m.mat_mul(m)?.max_abs_diff(m));
    }
    let mut sum_p = ComplexMatrix::zeros(dim, dim);
    let mut sum_q = ComplexMatrix::zeros(dim, dim);
    for a in 0..d {
        sum_p = sum_p.add(&p[a])?;
        sum_q = sum_q.add(&q[a])?;
    }
    structural = structural
        .max(sum_p.deviation_from_identity())
        .max(sum_q.deviation_from_identity());

    let mut unbiased: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let pqp = p[a].mat_mul(&q[b])?.mat_mul(&p[a])?.scale(scale);
            unbiased = unbiased.max(pqp.max_abs_diff(&p[a]));
            let qpq = q[b].mat_mul(&p[a])?.mat_mul(&q[b])?.scale(scale);
            unbiased = unbiased.max(qpq.max_abs_diff(&q[b]));
        }
    }

    let mut orthogonality: f64 = 0.0;
    for list in [p, q] {
        for x in 0..d {
            for y in 0..d {
                let prod = list[x].mat_mul(&list[y])?;
                let target = if x == y {
                    list[x].clone()
                } else {
                    ComplexMatrix::zeros(dim, dim)
                };
                orthogonality = orthogonality.max(prod.max_abs_diff(&target));
            }
        }
    }

    Ok(MumReport {
        conditions_ok: structural.max(unbiased) <= tol.eps(),
        orthogonality_ok: orthogonality <= tol.eps(),
        canonical: None,
        direct_sum_of_mubs: None,
        max_violation: structural.max(unbiased).max(orthogonality),
        witness: None,
        tolerance: tol.eps(),
    })
}

/// Rank-one MUB check: each operator a projector of unit trace and
/// `trace(P_a Q_b) = 1/d` for all outcome pairs.
pub fn verify_mub_pair(
    p: &[ComplexMatrix],
    q: &[ComplexMatrix],
    tol: Tolerance,
) -> Result<bool, MumError> {
    let (d, dim) = check_measurement_lists(p, q)?;
    if dim != d {
        return Err(MumError::MeasurementShape(format!(
            "MUB pair needs dimension equal to outcome count, got {dim} vs {d}"
        )));
    }
    for m in p.iter().chain(q.iter()) {
        if !m.is_orthogonal_projector(tol) {
            return Ok(false);
        }
        if (m.trace() - Complex64::new(1.0, 0.0)).norm() > tol.eps() {
            return Ok(false);
        }
    }
    let target = 1.0 / d as f64;
    for pa in p {
        for qb in q {
            let overlap = pa.trace_of_product(qb)?;
            if (overlap - Complex64::new(target, 0.0)).norm() > tol.eps() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Brings a valid pair to canonical form by the block substitution
/// `U^b_j -> (U^1_j)† U^b_j`, which conjugates both measurements by the
/// unitary `sum_j (U^1_j)† (x) |j><j|` and so preserves all statistics.
pub fn canonicalize(m: &MumPair) -> Result<MumPair, MumError> {
    m.ensure_valid(Tolerance::DEFAULT)?;
    let d = m.d();
    let mut blocks = Vec::with_capacity(d);
    for b in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            row.push(m.block(0, j).adjoint().mat_mul(m.block(b, j))?);
        }
        blocks.push(row);
    }
    MumPair::new(blocks)
}

/// A canonical pair is a direct sum of MUBs exactly when all blocks commute
/// pairwise. Rejects non-canonical input: the criterion is only valid in
/// canonical form. The witness is the first violating quadruple in row-major
/// scan order, reported 1-based.
pub fn direct_sum_test(m: &MumPair, tol: Tolerance) -> Result<DirectSumVerdict, MumError> {
    if !m.is_canonical() {
        let violation = m.blocks()[0]
            .iter()
            .map(|u| u.deviation_from_identity())
            .fold(0.0f64, f64::max);
        return Err(MumError::NotCanonical { violation });
    }
    m.ensure_valid(Tolerance::DEFAULT)?;
    let d = m.d();
    let mut max_commutator: f64 = 0.0;
    let mut witness: Option<CommutationWitness> = None;
    let total = d * d;
    for x in 0..total {
        for y in (x + 1)..total {
            let a = m.block(x / d, x % d);
            let b = m.block(y / d, y % d);
            let comm = a.commutator_norm(b)?;
            max_commutator = max_commutator.max(comm);
            if witness.is_none() && comm > tol.eps() {
                witness = Some(CommutationWitness {
                    first: (x / d + 1, x % d + 1),
                    second: (y / d + 1, y % d + 1),
                    magnitude: comm,
                });
            }
        }
    }
    Ok(DirectSumVerdict {
        is_direct_sum: witness.is_none(),
        max_commutator,
        witness,
    })
}

/// Extends a d-outcome pair to an (ell d)-outcome pair on `C^n (x) C^{ell d}`
/// via `P'_{a,i} = P_a (x) |i><i|` and `Q'_{b,j} = Q_b (x) |chi_j><chi_j|`.
/// In block form the new grid is
/// `U'^{(b,j)}_{(a,i)} = omega_ell^{(i-1) j} U^b_a`, with pair indices
/// flattened lexicographically: `(x, y) -> (x - 1) ell + y`.
pub fn extend_outcomes(m: &MumPair, ell: usize) -> Result<MumPair, MumError> {
    if ell < 2 {
        return Err(MumError::BadExtensionFactor(ell));
    }
    m.ensure_valid(Tolerance::DEFAULT)?;
    let d = m.d();
    let dd = d * ell;
    let mut blocks = vec![Vec::with_capacity(dd); dd];
    for b in 0..d {
        for j in 0..ell {
            let row = &mut blocks[b * ell + j];
            for a in 0..d {
                for i in 0..ell {
                    let phase = root_of_unity_power(ell, (i * (j + 1)) as i64);
                    row.push(m.block(b, a).scale(phase));
                }
            }
        }
    }
    MumPair::new(blocks)
}

/// Interprets a verified, dephased block Hadamard as a canonical MUM pair
/// with block dimension `n = k`.
pub fn from_block_hadamard(h: &BlockHadamard, tol: Tolerance) -> Result<MumPair, MumError> {
    let report = verify_unitary_hadamard(h, tol);
    if !report.passed() {
        return Err(MumError::HadamardViolation {
            violation: report.max_violation,
        });
    }
    let violation = h.dephasing_violation();
    if violation > tol.eps() {
        return Err(MumError::NotDephased { violation });
    }
    MumPair::new(h.blocks().to_vec())
}

/// Fourier-basis projector `|chi_j><chi_j|` on `C^d`, `1 <= j <= d`.
pub fn fourier_projector(d: usize, j: usize) -> Result<ComplexMatrix, MumError> {
    let v = fourier_vector(d, j)?;
    Ok(v.mat_mul(&v.adjoint())?)
}

/// Assembles the complete report for a pair: block conditions, the
/// projector-level identities, and (for canonical pairs) the direct-sum
/// verdict with its witness.
pub fn full_report(m: &MumPair, tol: Tolerance) -> Result<MumReport, MumError> {
    let block_violation = m.max_violation();
    if block_violation > tol.eps() {
        return Ok(MumReport {
            conditions_ok: false,
            orthogonality_ok: false,
            canonical: Some(m.is_canonical()),
            direct_sum_of_mubs: None,
            max_violation: block_violation,
            witness: None,
            tolerance: tol.eps(),
        });
    }
    let (p, q) = build_projectors_unchecked(m)?;
    let mut report = verify_mum_conditions(&p, &q, tol)?;
    report.canonical = Some(m.is_canonical());
    report.max_violation = report.max_violation.max(block_violation);
    // the commutation criterion is established only for canonical pairs
    if m.is_canonical() && block_violation <= Tolerance::DEFAULT.eps() {
        let verdict = direct_sum_test(m, DIRECT_SUM_TOLERANCE)?;
        report.direct_sum_of_mubs = Some(verdict.is_direct_sum);
        report.witness = verdict.witness;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn std_pair(d: usize) -> (Vec<ComplexMatrix>, Vec<ComplexMatrix>) {
        catalog::standard_mub_pair(d).unwrap()
    }

    #[test]
    fn standard_pairs_pass_mum_conditions() {
        for d in [2, 3, 4] {
            let (p, q) = std_pair(d);
            let report = verify_mum_conditions(&p, &q, Tolerance::DEFAULT).unwrap();
            assert!(report.passed(), "d = {d}: {report:?}");
        }
    }

    #[test]
    fn five_outcome_block_pair_passes_mum_conditions() {
        let pair = from_block_hadamard(&catalog::h5(), Tolerance::DEFAULT).unwrap();
        let (p, q) = build_projectors(&pair).unwrap();
        let report = verify_mum_conditions(&p, &q, Tolerance::DEFAULT).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn identical_bases_fail_mum_conditions() {
        let (p, _) = std_pair(2);
        let report = verify_mum_conditions(&p, &p, Tolerance::DEFAULT).unwrap();
        assert!(!report.conditions_ok);
        assert!(report.max_violation > 0.4);
    }

    #[test]
    fn zeroed_block_fails_hadamard_verification() {
        let mut blocks = catalog::h4().blocks().to_vec();
        blocks[2][1] = ComplexMatrix::zeros(2, 2);
        let broken = BlockHadamard::new(blocks).unwrap();
        let report = verify_unitary_hadamard(&broken, Tolerance::DEFAULT);
        assert!(!report.passed());
        assert!(report.max_violation > 0.5);
    }

    #[test]
    fn all_identity_blocks_are_rejected() {
        let one = ComplexMatrix::identity(1);
        let blocks = vec![vec![one.clone(), one.clone()], vec![one.clone(), one]];
        let m = MumPair::new(blocks).unwrap();
        assert!(matches!(
            build_projectors(&m),
            Err(MumError::InvalidPair { .. })
        ));
    }

    #[test]
    fn mub_pair_checks() {
        let (p, q) = std_pair(4);
        assert!(verify_mub_pair(&p, &q, Tolerance::DEFAULT).unwrap());
        assert!(!verify_mub_pair(&p, &p, Tolerance::DEFAULT).unwrap());
        let mut corrupted = q.clone();
        corrupted[0] = ComplexMatrix::matrix_unit(4, 1, 1);
        assert!(!verify_mub_pair(&p, &corrupted, Tolerance::DEFAULT).unwrap());
    }

    #[test]
    fn canonicalize_is_identity_on_canonical_pairs() {
        let m = catalog::standard_mub_mum_pair(3).unwrap();
        assert!(m.is_canonical());
        let c = canonicalize(&m).unwrap();
        for b in 0..3 {
            for j in 0..3 {
                assert!(c.block(b, j).max_abs_diff(m.block(b, j)) < 1e-13);
            }
        }
    }

    #[test]
    fn canonicalize_strips_constant_row_gauge() {
        // left-gauge the 4-outcome catalog pair by iY on every column j > 1,
        // which keeps it a valid (non-canonical) pair
        let base = from_block_hadamard(&catalog::h4(), Tolerance::DEFAULT).unwrap();
        let iy = catalog::pauli_y().scale(Complex64::new(0.0, 1.0));
        let mut blocks = base.blocks().to_vec();
        for row in blocks.iter_mut() {
            for (j, u) in row.iter_mut().enumerate() {
                if j > 0 {
                    *u = iy.mat_mul(u).unwrap();
                }
            }
        }
        let gauged = MumPair::new(blocks).unwrap();
        assert!(!gauged.is_canonical());
        gauged.ensure_valid(Tolerance::DEFAULT).unwrap();
        let recovered = canonicalize(&gauged).unwrap();
        assert!(recovered.is_canonical());
        for b in 0..4 {
            for j in 0..4 {
                assert!(recovered.block(b, j).max_abs_diff(base.block(b, j)) < 1e-12);
            }
        }
    }

    #[test]
    fn direct_sum_test_rejects_non_canonical() {
        let base = from_block_hadamard(&catalog::h4(), Tolerance::DEFAULT).unwrap();
        let iy = catalog::pauli_y().scale(Complex64::new(0.0, 1.0));
        let mut blocks = base.blocks().to_vec();
        for row in blocks.iter_mut() {
            for (j, u) in row.iter_mut().enumerate() {
                if j > 0 {
                    *u = iy.mat_mul(u).unwrap();
                }
            }
        }
        let gauged = MumPair::new(blocks).unwrap();
        assert!(matches!(
            direct_sum_test(&gauged, DIRECT_SUM_TOLERANCE),
            Err(MumError::NotCanonical { .. })
        ));
    }

    #[test]
    fn scalar_pairs_are_direct_sums() {
        let m = catalog::standard_mub_mum_pair(4).unwrap();
        let verdict = direct_sum_test(&m, DIRECT_SUM_TOLERANCE).unwrap();
        assert!(verdict.is_direct_sum);
        assert!(verdict.witness.is_none());
    }

    #[test]
    fn from_block_hadamard_requires_dephased_input() {
        let h = catalog::h4();
        let flip = catalog::pauli_x();
        let gauges: Vec<ComplexMatrix> = (0..4).map(|_| flip.clone()).collect();
        let identity_gauges: Vec<ComplexMatrix> =
            (0..4).map(|_| ComplexMatrix::identity(2)).collect();
        let moved = h
            .gauge_transform(&gauges, &identity_gauges, Tolerance::DEFAULT)
            .unwrap();
        assert!(matches!(
            from_block_hadamard(&moved, Tolerance::DEFAULT),
            Err(MumError::NotDephased { .. })
        ));
        // dephasing restores acceptability
        let back = moved.dephase().unwrap();
        let pair = from_block_hadamard(&back, Tolerance::DEFAULT).unwrap();
        assert!(pair.is_canonical());
    }

    #[test]
    fn extension_factor_one_is_rejected() {
        let m = catalog::standard_mub_mum_pair(2).unwrap();
        assert!(matches!(
            extend_outcomes(&m, 1),
            Err(MumError::BadExtensionFactor(1))
        ));
    }

    #[test]
    fn extended_projectors_match_tensor_form() {
        let m = catalog::standard_mub_mum_pair(2).unwrap();
        let ext = extend_outcomes(&m, 2).unwrap();
        assert_eq!(ext.d(), 4);
        let (p, q) = build_projectors(&ext).unwrap();
        let report = verify_mum_conditions(&p, &q, Tolerance::DEFAULT).unwrap();
        assert!(report.passed());
        let (p0, q0) = build_projectors(&m).unwrap();
        for a in 0..2 {
            for i in 0..2 {
                let expected = p0[a].kron(&ComplexMatrix::matrix_unit(2, i, i));
                assert!(p[a * 2 + i].max_abs_diff(&expected) < 1e-12);
            }
        }
        for b in 0..2 {
            for j in 0..2 {
                let expected = q0[b].kron(&fourier_projector(2, j + 1).unwrap());
                assert!(q[b * 2 + j].max_abs_diff(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn full_report_includes_direct_sum_verdict_for_canonical_pairs() {
        let pair = from_block_hadamard(&catalog::h4(), Tolerance::DEFAULT).unwrap();
        let report = full_report(&pair, Tolerance::DEFAULT).unwrap();
        assert!(report.passed());
        assert_eq!(report.canonical, Some(true));
        assert_eq!(report.direct_sum_of_mubs, Some(false));
        assert!(report.witness.is_some());

        let scalar = catalog::standard_mub_mum_pair(3).unwrap();
        let report = full_report(&scalar, Tolerance::DEFAULT).unwrap();
        assert_eq!(report.direct_sum_of_mubs, Some(true));
        assert!(report.witness.is_none());

        // an invalid grid reports failure instead of erroring
        let one = ComplexMatrix::identity(1);
        let junk =
            MumPair::new(vec![vec![one.clone(), one.clone()], vec![one.clone(), one]]).unwrap();
        let report = full_report(&junk, Tolerance::DEFAULT).unwrap();
        assert!(!report.passed());
        assert!(report.max_violation > 0.5);
    }

    #[test]
    fn pair_json_round_trip_recomputes_canonical_flag() {
        let m = from_block_hadamard(&catalog::h5(), Tolerance::DEFAULT).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back: MumPair = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
        assert!(back.is_canonical());
    }

    #[test]
    fn pair_json_rejects_mismatched_declared_sizes() {
        let m = catalog::standard_mub_mum_pair(2).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let lied = text.replace("\"n\":1", "\"n\":2");
        assert!(serde_json::from_str::<MumPair>(&lied).is_err());
    }
}
