//! Built-in constructions: block Hadamards for 4, 5, and 6 outcomes, the
//! two-parameter 4x4 quaternionic family, the length-5 perfect sequence,
//! standard MUB pairs, generalized Paulis, Pauli towers, and the
//! Heisenberg-Weyl basis.
//!
//! The explicit block Hadamards are generated from Pauli combinations rather
//! than hard-coded decimals, so a transcription slip becomes an algebraic
//! error the Hadamard checker catches.

use crate::linalg::{root_of_unity_power, Complex64, ComplexMatrix, LinalgError, Tolerance};
use crate::mum::{BlockHadamard, MumError, MumPair};
use crate::quaternion::{PerfectSequence, Quaternion, QuaternionError, QuaternionMatrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("number of measurements must be at least 2, got {0}")]
    BadMeasurementCount(usize),
    #[error("total dimension {dim} exceeds the cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },
    #[error("{which} must be a unit quaternion (norm {norm})")]
    NotUnit { which: &'static str, norm: f64 },
    #[error("constructed matrix fails the Hadamard check (violation {violation:.3e})")]
    HadamardCheck { violation: f64 },
    #[error("operator {index} does not have order {order} (violation {violation:.3e})")]
    OrderFailure {
        index: usize,
        order: usize,
        violation: f64,
    },
    #[error("operator {index} is not unitary within tolerance")]
    NonUnitaryOperator { index: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quaternion(#[from] QuaternionError),
    #[error(transparent)]
    Mum(#[from] MumError),
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::new(2, 2, vec![z, -i, i, z]).expect("finite")
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]])
}

/// `c0 1 + cx X + cy Y + cz Z` on one qubit.
fn pauli_combo(c0: Complex64, cx: Complex64, cy: Complex64, cz: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(2).scale(c0);
    m = m.add(&pauli_x().scale(cx)).expect("shape");
    m = m.add(&pauli_y().scale(cy)).expect("shape");
    m = m.add(&pauli_z().scale(cz)).expect("shape");
    m
}

fn one_block() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

fn minus_one_block() -> ComplexMatrix {
    ComplexMatrix::identity(2).scale(Complex64::new(-1.0, 0.0))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 4-outcome block Hadamard with 2x2 blocks; canonical (first block row and
/// column are the identity) and not a direct sum of MUBs.
pub fn h4() -> BlockHadamard {
    let z = c(0.0, 0.0);
    let row0 = vec![one_block(), one_block(), one_block(), one_block()];
    let row1 = vec![
        one_block(),
        pauli_combo(c(-1.0 / 3.0, 0.0), z, c(0.0, -2.0 / 3.0), c(0.0, 2.0 / 3.0)),
        pauli_combo(c(-1.0 / 3.0, 0.0), c(0.0, 2.0 / 3.0), z, c(0.0, -2.0 / 3.0)),
        pauli_combo(c(-1.0 / 3.0, 0.0), c(0.0, -2.0 / 3.0), c(0.0, 2.0 / 3.0), z),
    ];
    let row2 = vec![
        one_block(),
        pauli_y().scale(c(0.0, 1.0)),
        minus_one_block(),
        pauli_y().scale(c(0.0, -1.0)),
    ];
    let row3 = vec![
        one_block(),
        pauli_combo(
            c(-2.0 / 3.0, 0.0),
            z,
            c(0.0, -1.0 / 3.0),
            c(0.0, -2.0 / 3.0),
        ),
        pauli_combo(c(1.0 / 3.0, 0.0), c(0.0, -2.0 / 3.0), z, c(0.0, 2.0 / 3.0)),
        pauli_combo(c(-2.0 / 3.0, 0.0), c(0.0, 2.0 / 3.0), c(0.0, 1.0 / 3.0), z),
    ];
    BlockHadamard::new(vec![row0, row1, row2, row3]).expect("fixed shape")
}

/// 5-outcome block Hadamard with 2x2 blocks built from third-root angles.
pub fn h5() -> BlockHadamard {
    let s = (2.0 * std::f64::consts::PI / 3.0).sin();
    let co = (2.0 * std::f64::consts::PI / 3.0).cos();
    let z = c(0.0, 0.0);
    // -i c Y -+ i s X
    let minus_minus = pauli_combo(z, c(0.0, -s), c(0.0, -co), z);
    let minus_plus = pauli_combo(z, c(0.0, s), c(0.0, -co), z);
    let minus_iy = pauli_y().scale(c(0.0, -1.0));
    let rows = vec![
        vec![one_block(); 5],
        vec![
            one_block(),
            minus_one_block(),
            minus_minus.clone(),
            minus_plus.clone(),
            minus_iy.clone(),
        ],
        vec![
            one_block(),
            minus_minus.clone(),
            minus_one_block(),
            minus_iy.clone(),
            minus_plus.clone(),
        ],
        vec![
            one_block(),
            minus_plus.clone(),
            minus_iy.clone(),
            minus_one_block(),
            minus_minus.clone(),
        ],
        vec![
            one_block(),
            minus_iy,
            minus_plus,
            minus_minus,
            minus_one_block(),
        ],
    ];
    BlockHadamard::new(rows).expect("fixed shape")
}

/// 6-outcome block Hadamard with 2x2 blocks.
pub fn h6() -> BlockHadamard {
    let i = c(0.0, 1.0);
    let ix = pauli_x().scale(i);
    let iy = pauli_y().scale(i);
    let iz = pauli_z().scale(i);
    let neg = |m: &ComplexMatrix| m.scale(c(-1.0, 0.0));
    let rows = vec![
        vec![one_block(); 6],
        vec![
            one_block(),
            minus_one_block(),
            neg(&iz),
            iz.clone(),
            iy.clone(),
            neg(&iy),
        ],
        vec![
            one_block(),
            neg(&ix),
            minus_one_block(),
            iy.clone(),
            neg(&iy),
            ix.clone(),
        ],
        vec![
            one_block(),
            ix.clone(),
            iy.clone(),
            minus_one_block(),
            neg(&iy),
            neg(&ix),
        ],
        vec![
            one_block(),
            iy.clone(),
            neg(&iy),
            neg(&iy),
            minus_one_block(),
            iy.clone(),
        ],
        vec![
            one_block(),
            neg(&iy),
            iz.clone(),
            neg(&iz),
            iy,
            minus_one_block(),
        ],
    ];
    BlockHadamard::new(rows).expect("fixed shape")
}

/// Parameters of the two-parameter 4x4 quaternionic Hadamard family: unit
/// quaternions `a = a1 + a2 i` and `b = b1 + b2 j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdParams {
    a: Quaternion,
    b: Quaternion,
}

impl CdParams {
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self, CatalogError> {
        let a = Quaternion::new(a1, a2, 0.0, 0.0);
        let b = Quaternion::new(b1, 0.0, b2, 0.0);
        if (a.norm() - 1.0).abs() > 1e-9 {
            return Err(CatalogError::NotUnit {
                which: "a",
                norm: a.norm(),
            });
        }
        if (b.norm() - 1.0).abs() > 1e-9 {
            return Err(CatalogError::NotUnit {
                which: "b",
                norm: b.norm(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> Quaternion {
        self.a
    }

    pub fn b(&self) -> Quaternion {
        self.b
    }
}

/// The special 4x4 quaternionic Hadamard family. The result is validated
/// against `M M† = 4`; both parameters non-real makes the (already dephased)
/// matrix contain a non-commuting pair.
pub fn cd_special(params: &CdParams) -> Result<QuaternionMatrix, CatalogError> {
    let one = Quaternion::ONE;
    let a = params.a;
    let b = params.b;
    let ab = a * b;
    let x = -(one + a + b - ab).scale(0.5);
    let z = -(one + a - b + ab).scale(0.5);
    let y = -(one - a + b + ab).scale(0.5);
    let w = -(one - a - b - ab).scale(0.5);
    let m = QuaternionMatrix::from_rows(&[
        vec![one, one, one, one],
        vec![one, -one, b, -b],
        vec![one, a, x, z],
        vec![one, -a, y, w],
    ])?;
    let violation = m.hadamard_violation()?;
    if violation > Tolerance::DEFAULT.eps() {
        return Err(CatalogError::HadamardCheck { violation });
    }
    Ok(m)
}

/// The length-5 perfect sequence `(1, j, j, 1, (-1 + i - j - k)/2)`.
pub fn kuznetsov5() -> PerfectSequence {
    let q = Quaternion::new(-0.5, 0.5, -0.5, -0.5);
    PerfectSequence::new(vec![
        Quaternion::ONE,
        Quaternion::J,
        Quaternion::J,
        Quaternion::ONE,
        q,
    ])
    .expect("catalog sequence is perfect")
}

/// Generalized Pauli pair: the clock `Z_d = sum_j omega^j |j><j|` and shift
/// `X_d = sum_j |j+1><j|` (indices 1-based with wraparound). They satisfy
/// `Z X = omega X Z` and `Z^d = X^d = 1`.
pub fn gen_pauli(d: usize) -> Result<(ComplexMatrix, ComplexMatrix), CatalogError> {
    if d < 2 {
        return Err(CatalogError::BadDimension(d));
    }
    let z = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            root_of_unity_power(d, i as i64 + 1)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let x = ComplexMatrix::from_fn(d, d, |i, j| {
        if i == (j + 1) % d {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok((z, x))
}

/// The standard/Fourier MUB pair on `C^d` as projector lists.
pub fn standard_mub_pair(
    d: usize,
) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>), CatalogError> {
    if d < 2 {
        return Err(CatalogError::BadDimension(d));
    }
    let mut p = Vec::with_capacity(d);
    let mut q = Vec::with_capacity(d);
    for a in 0..d {
        p.push(ComplexMatrix::matrix_unit(d, a, a));
    }
    for b in 1..=d {
        q.push(crate::mum::fourier_projector(d, b)?);
    }
    Ok((p, q))
}

/// The standard/Fourier pair in canonical block form: scalar blocks
/// `U^b_j = omega^{(j-1)(b-1)}` with n = 1.
pub fn standard_mub_mum_pair(d: usize) -> Result<MumPair, CatalogError> {
    if d < 2 {
        return Err(CatalogError::BadDimension(d));
    }
    let mut blocks = Vec::with_capacity(d);
    for b in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let phase = root_of_unity_power(d, (b * j) as i64);
            row.push(ComplexMatrix::new(1, 1, vec![phase]).expect("finite"));
        }
        blocks.push(row);
    }
    Ok(MumPair::new(blocks)?)
}

/// Size request for a Pauli tower of `n` pairwise unbiased d-outcome
/// measurements on dimension `d^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerSpec {
    d: usize,
    n: usize,
    cap: usize,
}

impl TowerSpec {
    pub const DEFAULT_CAP: usize = 256;

    pub fn new(d: usize, n: usize) -> Result<Self, CatalogError> {
        Self::with_cap(d, n, Self::DEFAULT_CAP)
    }

    pub fn with_cap(d: usize, n: usize, cap: usize) -> Result<Self, CatalogError> {
        if d < 2 {
            return Err(CatalogError::BadDimension(d));
        }
        if n < 2 {
            return Err(CatalogError::BadMeasurementCount(n));
        }
        let dim = d
            .checked_pow(n as u32)
            .ok_or(CatalogError::DimensionCapExceeded {
                dim: usize::MAX,
                cap,
            })?;
        if dim > cap {
            return Err(CatalogError::DimensionCapExceeded { dim, cap });
        }
        Ok(Self { d, n, cap })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_dimension(&self) -> usize {
        self.d.pow(self.n as u32)
    }
}

/// The tower operators `A_j = X^(x)(j-1) (x) Z (x) 1^(x)(n-j)` on
/// `(C^d)^(x)n`. Each has order d and consecutive pairs satisfy
/// `A_j A_k = omega_d A_k A_j` for `j < k`.
pub fn pauli_tower(spec: &TowerSpec) -> Result<Vec<ComplexMatrix>, CatalogError> {
    let (z, x) = gen_pauli(spec.d)?;
    let eye = ComplexMatrix::identity(spec.d);
    let mut ops = Vec::with_capacity(spec.n);
    for j in 1..=spec.n {
        let mut acc = ComplexMatrix::identity(1);
        for k in 1..=spec.n {
            let factor = if k < j {
                &x
            } else if k == j {
                &z
            } else {
                &eye
            };
            acc = acc.kron(factor);
        }
        ops.push(acc);
    }
    Ok(ops)
}

/// Spectral measurements of unitaries of order d: for each operator the
/// projectors `Pi_a = (1/d) sum_m omega^{-am} A^m`, a = 1..d. Each list is a
/// complete d-outcome projective measurement, and any two operators obeying
/// the omega commutation rule give a mutually unbiased pair.
pub fn tower_to_measurements(
    ops: &[ComplexMatrix],
    d: usize,
    tol: Tolerance,
) -> Result<Vec<Vec<ComplexMatrix>>, CatalogError> {
    if d < 2 {
        return Err(CatalogError::BadDimension(d));
    }
    let mut measurements = Vec::with_capacity(ops.len());
    for (index, a) in ops.iter().enumerate() {
        if !a.is_unitary(tol) {
            return Err(CatalogError::NonUnitaryOperator { index });
        }
        let dim = a.rows();
        // powers A^1 .. A^d, checking A^d = 1
        let mut powers = Vec::with_capacity(d);
        let mut current = a.clone();
        for step in 0..d {
            powers.push(current.clone());
            if step + 1 < d {
                current = current.mat_mul(a)?;
            }
        }
        let violation = powers[d - 1].deviation_from_identity();
        if violation > tol.eps() {
            return Err(CatalogError::OrderFailure {
                index,
                order: d,
                violation,
            });
        }
        let mut projectors = Vec::with_capacity(d);
        let inv_d = Complex64::new(1.0 / d as f64, 0.0);
        for outcome in 1..=d {
            let mut acc = ComplexMatrix::zeros(dim, dim);
            for (m, power) in powers.iter().enumerate() {
                let phase = root_of_unity_power(d, -((outcome * (m + 1)) as i64));
                acc = acc.add(&power.scale(phase))?;
            }
            projectors.push(acc.scale(inv_d));
        }
        measurements.push(projectors);
    }
    Ok(measurements)
}

/// Heisenberg-Weyl orthogonal unitary basis `E_{sd+t+1} = X^s Z^t` for
/// `s, t = 0..d-1`; the first element is the identity.
pub fn heisenberg_weyl(d: usize) -> Result<Vec<ComplexMatrix>, CatalogError> {
    let (z, x) = gen_pauli(d)?;
    let mut out = Vec::with_capacity(d * d);
    for s in 0..d {
        let xs = x.matrix_power(s)?;
        for t in 0..d {
            out.push(xs.mat_mul(&z.matrix_power(t)?)?);
        }
    }
    Ok(out)
}
