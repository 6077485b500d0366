//! Extraction of the MUB summands of a direct-sum pair.
//!
//! When a canonical pair's blocks all commute they are simultaneously
//! diagonalizable; each joint eigenvector `|e_t>` of the block family carries
//! one d-dimensional MUB pair, and the original measurements are the direct
//! sums of those blocks over t.

use super::{direct_sum_test, MumError, MumPair};
use crate::linalg::{eig_normal, orthonormal_column_basis, Complex64, ComplexMatrix, Tolerance};

/// Gram-Schmidt pivot for extracting an eigenprojector's range.
const PIVOT_THRESHOLD: f64 = 1e-8;

/// One direct summand: the joint eigenvector it lives on (an n x 1 unit
/// column) and the extracted d-dimensional MUB pair. `index` is 1-based to
/// match report conventions.
#[derive(Debug, Clone)]
pub struct MubBlock {
    pub index: usize,
    pub basis_vector: ComplexMatrix,
    pub p: Vec<ComplexMatrix>,
    pub q: Vec<ComplexMatrix>,
}

/// Splits a commuting canonical pair into its MUB summands. Fails with
/// [`MumError::NotCommuting`] when the direct-sum test fails.
pub fn extract_mub_blocks(m: &MumPair, tol: Tolerance) -> Result<Vec<MubBlock>, MumError> {
    let verdict = direct_sum_test(m, tol)?;
    if let Some(witness) = verdict.witness {
        return Err(MumError::NotCommuting {
            first: witness.first,
            second: witness.second,
            magnitude: witness.magnitude,
        });
    }

    let d = m.d();
    let n = m.n();

    // Refine the whole space by the eigenspaces of each block in turn.
    // Every block is unitary and commutes with the previously processed
    // ones, so each subspace in the list stays invariant and the restriction
    // is again normal.
    let eig_tol = Tolerance::EIGEN;
    let mut subspaces: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(n)];
    for b in 1..d {
        for j in 1..d {
            if subspaces.iter().all(|s| s.cols() == 1) {
                break;
            }
            let op = m.block(b, j);
            let mut refined: Vec<ComplexMatrix> = Vec::with_capacity(n);
            for basis in &subspaces {
                if basis.cols() == 1 {
                    refined.push(basis.clone());
                    continue;
                }
                let restricted = basis.adjoint().mat_mul(&op.mat_mul(basis)?)?;
                let eig = eig_normal(&restricted, eig_tol)?;
                for (_, projector) in eig {
                    // keep each eigenspace together as one subspace so later
                    // operators can still split it along their own eigenvectors
                    let cols = orthonormal_column_basis(&projector, PIVOT_THRESHOLD);
                    if cols.is_empty() {
                        continue;
                    }
                    let sub =
                        ComplexMatrix::from_fn(basis.cols(), cols.len(), |i, c| cols[c].get(i, 0));
                    refined.push(basis.mat_mul(&sub)?);
                }
            }
            subspaces = refined;
        }
    }

    let mut vectors: Vec<ComplexMatrix> = Vec::with_capacity(n);
    for s in &subspaces {
        for c in 0..s.cols() {
            vectors.push(s.column(c));
        }
    }
    debug_assert_eq!(vectors.len(), n);

    let mut blocks = Vec::with_capacity(n);
    for (t, e) in vectors.iter().enumerate() {
        let mut lambdas = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for b in 0..d {
            for j in 0..d {
                let val = e.adjoint().mat_mul(&m.block(b, j).mat_mul(e)?)?.get(0, 0);
                lambdas[b][j] = val;
            }
        }
        let mut p = Vec::with_capacity(d);
        for a in 0..d {
            p.push(ComplexMatrix::matrix_unit(d, a, a));
        }
        let inv_d = Complex64::new(1.0 / d as f64, 0.0);
        let mut q = Vec::with_capacity(d);
        for b in 0..d {
            let qb =
                ComplexMatrix::from_fn(d, d, |j, k| lambdas[b][j] * lambdas[b][k].conj() * inv_d);
            q.push(qb);
        }
        blocks.push(MubBlock {
            index: t + 1,
            basis_vector: e.clone(),
            p,
            q,
        });
    }
    Ok(blocks)
}

/// Reassembles the full measurements from extracted summands:
/// `P_a = sum_t |e_t><e_t| (x) P^t_a` and likewise for Q.
pub fn direct_sum_reconstruction(
    blocks: &[MubBlock],
) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>), MumError> {
    let first = blocks
        .first()
        .ok_or_else(|| MumError::MeasurementShape("no blocks to reconstruct from".to_string()))?;
    let d = first.p.len();
    let n = first.basis_vector.rows();
    let dim = n * d;
    let mut p = vec![ComplexMatrix::zeros(dim, dim); d];
    let mut q = vec![ComplexMatrix::zeros(dim, dim); d];
    for block in blocks {
        let outer = block.basis_vector.mat_mul(&block.basis_vector.adjoint())?;
        for a in 0..d {
            p[a] = p[a].add(&outer.kron(&block.p[a]))?;
            q[a] = q[a].add(&outer.kron(&block.q[a]))?;
        }
    }
    Ok((p, q))
}
