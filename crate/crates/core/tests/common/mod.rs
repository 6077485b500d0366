//! Shared helpers for the integration suites: seeded random unitaries,
//! quaternions, and direct-sum MUM stacks.
#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use mum_core::linalg::{orthonormal_column_basis, root_of_unity_power, Complex64, ComplexMatrix};
use mum_core::mum::MumPair;
use mum_core::quaternion::Quaternion;
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_complex_matrix(rows: usize, cols: usize, rng: &mut StdRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Random unitary by Gram-Schmidt on a random complex square matrix.
pub fn random_unitary(n: usize, rng: &mut StdRng) -> ComplexMatrix {
    loop {
        let m = random_complex_matrix(n, n, rng);
        let basis = orthonormal_column_basis(&m, 1e-6);
        if basis.len() == n {
            return ComplexMatrix::from_fn(n, n, |i, j| basis[j].get(i, 0));
        }
    }
}

pub fn random_quaternion(rng: &mut StdRng) -> Quaternion {
    Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    )
}

pub fn random_unit_quaternion(rng: &mut StdRng) -> Quaternion {
    loop {
        let q = random_quaternion(rng);
        let n = q.norm();
        if n > 1e-2 {
            return q.scale(1.0 / n);
        }
    }
}

/// Canonical direct sum of `n` scalar MUB summands on d outcomes. Each
/// summand is the standard pair with its second-measurement outcomes
/// relabeled by a random permutation fixing outcome 1, so the summands
/// genuinely differ while the stack stays canonical.
pub fn random_direct_sum_stack(d: usize, n: usize, rng: &mut StdRng) -> MumPair {
    let mut sigmas: Vec<Vec<usize>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut tail: Vec<usize> = (1..d).collect();
        for i in (1..tail.len()).rev() {
            let j = rng.gen_range(0..=i);
            tail.swap(i, j);
        }
        let mut sigma = vec![0usize];
        sigma.extend(tail);
        sigmas.push(sigma);
    }
    let mut blocks = Vec::with_capacity(d);
    for b in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            row.push(ComplexMatrix::from_fn(n, n, |x, y| {
                if x == y {
                    root_of_unity_power(d, (sigmas[x][b] * j) as i64)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
        blocks.push(row);
    }
    MumPair::new(blocks).expect("stack shape")
}

/// Applies the gauge `U^b_j -> W_j U^b_j W_1^dagger` with random unitaries
/// `W_j`. The result is still a valid pair (`U^b_1` stays the identity) but
/// generally loses canonical form, so it exercises canonicalization.
pub fn random_gauge_preserving_validity(m: &MumPair, rng: &mut StdRng) -> MumPair {
    let d = m.d();
    let n = m.n();
    let gauges: Vec<ComplexMatrix> = (0..d).map(|_| random_unitary(n, rng)).collect();
    let w1_adj = gauges[0].adjoint();
    let mut blocks = Vec::with_capacity(d);
    for b in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let u = gauges[j]
                .mat_mul(m.block(b, j))
                .unwrap()
                .mat_mul(&w1_adj)
                .unwrap();
            row.push(u);
        }
        blocks.push(row);
    }
    MumPair::new(blocks).expect("gauge preserves shape")
}
