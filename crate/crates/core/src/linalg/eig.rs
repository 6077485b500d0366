//! Eigendecomposition of Hermitian and normal matrices by cyclic Jacobi
//! rotations.
//!
//! A normal matrix `a` splits into commuting Hermitian parts
//! `H = (a + a†)/2` and `K = (a - a†)/(2i)`. `H` is diagonalized by Jacobi
//! sweeps; inside each (near-)degenerate eigenvalue cluster of `H` the
//! restriction of `K` is diagonalized the same way. The combined basis
//! diagonalizes `a`, and eigenvalues closer than the tolerance are merged
//! into a single eigenspace projector.

use super::{Complex64, ComplexMatrix, LinalgError, Tolerance};

const MAX_SWEEPS: usize = 60;

/// Eigenvalues and an orthonormal eigenvector matrix of a Hermitian matrix.
///
/// Returns `(values, vectors)` where column `k` of `vectors` is the
/// eigenvector for `values[k]`. Values are not sorted.
pub fn eig_hermitian(
    a: &ComplexMatrix,
    tol: Tolerance,
) -> Result<(Vec<f64>, ComplexMatrix), LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.rows(), a.cols()));
    }
    let herm_defect = a.max_abs_diff(&a.adjoint());
    if herm_defect > tol.eps() {
        return Err(LinalgError::NotHermitian(herm_defect));
    }
    Ok(jacobi(a))
}

/// Spectral decomposition of a normal matrix as merged eigenspaces.
///
/// Output pairs `(lambda, projector)` satisfy: projectors are pairwise
/// orthogonal, sum to the identity, and `sum_k lambda_k P_k` reconstructs the
/// input. Eigenvalues within `tol` of each other land in one eigenspace.
pub fn eig_normal(
    a: &ComplexMatrix,
    tol: Tolerance,
) -> Result<Vec<(Complex64, ComplexMatrix)>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare(a.rows(), a.cols()));
    }
    let adj = a.adjoint();
    let defect = a.mat_mul(&adj)?.max_abs_diff(&adj.mat_mul(a)?);
    if defect > tol.eps() {
        return Err(LinalgError::NotNormal(defect));
    }

    let n = a.rows();
    let half = Complex64::new(0.5, 0.0);
    let herm = a.add(&adj)?.scale(half);
    let skew = a.sub(&adj)?.scale(Complex64::new(0.0, -0.5));

    let (h_vals, h_vecs) = jacobi(&herm);

    // Refine each H-eigenvalue cluster with the restriction of K.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h_vals[i].total_cmp(&h_vals[j]));

    let mut vectors: Vec<ComplexMatrix> = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && h_vals[order[end]] - h_vals[order[end - 1]] <= tol.eps() {
            end += 1;
        }
        let cluster: Vec<usize> = order[start..end].to_vec();
        if cluster.len() == 1 {
            vectors.push(h_vecs.column(cluster[0]));
        } else {
            let basis = ComplexMatrix::from_fn(n, cluster.len(), |i, c| h_vecs.get(i, cluster[c]));
            let mut restricted = basis.adjoint().mat_mul(&skew.mat_mul(&basis)?)?;
            // symmetrize away rounding drift before the inner Jacobi pass
            restricted = restricted.add(&restricted.adjoint())?.scale(half);
            let (_k_vals, k_vecs) = jacobi(&restricted);
            let refined = basis.mat_mul(&k_vecs)?;
            for c in 0..cluster.len() {
                vectors.push(refined.column(c));
            }
        }
        start = end;
    }

    // Rayleigh quotients give the eigenvalues in the refined basis.
    let mut lambdas: Vec<Complex64> = Vec::with_capacity(n);
    for v in &vectors {
        let av = a.mat_mul(v)?;
        let lam = v.adjoint().mat_mul(&av)?.get(0, 0);
        lambdas.push(lam);
    }

    // Merge eigenvalues within tol into shared eigenspaces.
    let mut groups: Vec<(Complex64, Vec<usize>)> = Vec::new();
    for (idx, lam) in lambdas.iter().enumerate() {
        let found = groups
            .iter()
            .position(|(rep, _)| (*rep - *lam).norm() <= tol.eps());
        match found {
            Some(g) => {
                let (rep, members) = &mut groups[g];
                let m = members.len() as f64;
                *rep = (rep.scale(m) + lam) / Complex64::new(m + 1.0, 0.0);
                members.push(idx);
            }
            None => groups.push((*lam, vec![idx])),
        }
    }

    let mut out = Vec::with_capacity(groups.len());
    for (lam, members) in groups {
        let mut proj = ComplexMatrix::zeros(n, n);
        for idx in members {
            let v = &vectors[idx];
            proj = proj.add(&v.mat_mul(&v.adjoint())?)?;
        }
        out.push((lam, proj));
    }
    Ok(out)
}

/// Projector onto the support of a Hermitian positive semidefinite operator:
/// the sum of eigenprojectors with eigenvalue above `tol`.
pub fn support_projector(
    rho: &ComplexMatrix,
    tol: Tolerance,
) -> Result<ComplexMatrix, LinalgError> {
    let (vals, vecs) = eig_hermitian(rho, tol)?;
    let n = rho.rows();
    let mut proj = ComplexMatrix::zeros(n, n);
    for (k, &val) in vals.iter().enumerate() {
        if val > tol.eps() {
            let v = vecs.column(k);
            proj = proj.add(&v.mat_mul(&v.adjoint())?)?;
        }
    }
    Ok(proj)
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Returns the diagonal
/// (eigenvalues) and the accumulated rotation matrix (eigenvectors in
/// columns). Caller guarantees Hermiticity.
fn jacobi(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    if n == 1 {
        return (vec![m.get(0, 0).re], v);
    }
    let scale = m.max_abs().max(1.0);
    let stop = 1e-14 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let r = apq.norm();
                if r <= stop * 1e-2 {
                    continue;
                }
                let phase = apq / Complex64::new(r, 0.0);
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                // rotation R: R[p][p] = c, R[p][q] = s, R[q][p] = -conj(s),
                // R[q][q] = c with s = sigma * phase; apply m <- R† m R.
                let s = phase.scale(sigma);
                let sc = s.conj();
                let cc = Complex64::new(c, 0.0);
                for i in 0..n {
                    let mip = m.get(i, p);
                    let miq = m.get(i, q);
                    m.set(i, p, mip * cc - miq * sc);
                    m.set(i, q, mip * s + miq * cc);
                }
                for j in 0..n {
                    let mpj = m.get(p, j);
                    let mqj = m.get(q, j);
                    m.set(p, j, mpj * cc - mqj * s);
                    m.set(q, j, mpj * sc + mqj * cc);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * cc - viq * sc);
                    v.set(i, q, vip * s + viq * cc);
                }
            }
        }
    }
    let vals = (0..n).map(|i| m.get(i, i).re).collect();
    (vals, v)
}

/// Orthonormal basis for the column span of `m`, by modified Gram-Schmidt
/// with column pivoting. Columns whose residual norm falls at or below
/// `pivot` are dropped.
pub fn orthonormal_column_basis(m: &ComplexMatrix, pivot: f64) -> Vec<ComplexMatrix> {
    let mut residuals: Vec<ComplexMatrix> = (0..m.cols()).map(|j| m.column(j)).collect();
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    loop {
        let best = residuals
            .iter()
            .enumerate()
            .map(|(i, v)| (i, column_norm(v)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((idx, norm)) = best else { break };
        if norm <= pivot {
            break;
        }
        let picked = residuals.swap_remove(idx);
        let unit = picked.scale(Complex64::new(1.0 / norm, 0.0));
        for v in residuals.iter_mut() {
            let overlap = unit.adjoint().mat_mul(v).expect("shape").get(0, 0);
            *v = v.sub(&unit.scale(overlap)).expect("shape");
        }
        basis.push(unit);
    }
    basis
}

fn column_norm(v: &ComplexMatrix) -> f64 {
    v.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
