//! Construction, verification, and transformation of mutually unbiased
//! measurements (MUMs), together with the superdense coding protocols a MUM
//! pair induces.
//!
//! A pair of d-outcome projective measurements `{P_a}`, `{Q_b}` is mutually
//! unbiased when `P_a = d P_a Q_b P_a` and `Q_b = d Q_b P_a Q_b` for all
//! outcomes. Unlike mutually unbiased bases, the Hilbert space dimension is
//! not tied to the outcome count; a pair is encoded here by its grid of
//! unitary blocks (see [`mum::MumPair`]). The crate covers:
//!
//! - [`linalg`]: dense complex matrices, tolerance-based structural
//!   predicates, and a Jacobi eigensolver for normal matrices.
//! - [`quaternion`]: quaternion arithmetic, quaternionic Hadamard matrices,
//!   dephasing, perfect sequences, and the lift into 2x2 unitary blocks.
//! - [`mum`]: MUM pairs as unitary-block grids, condition verification,
//!   canonical form, the direct-sum-of-MUBs test, MUB block extraction, and
//!   outcome extension.
//! - [`catalog`]: built-in constructions (block Hadamards for 4, 5, 6
//!   outcomes, the circulant family from perfect sequences, a two-parameter
//!   4x4 quaternionic family, generalized Paulis, Pauli towers, the
//!   Heisenberg-Weyl basis).
//! - [`sdc`]: superdense coding protocols built from MUM pairs, receiver
//!   state orthogonality checks, decoder construction, simulation, and the
//!   rigidity counterexample report.
//!
//! All values are immutable after construction and every operation is pure,
//! so the whole API is safe to use from concurrent contexts.
//!
//! # Example
//!
//! The 4-outcome catalog pair is a valid MUM pair whose blocks do not all
//! commute, so it is not a direct sum of MUBs, yet it still yields a perfect
//! superdense coding protocol:
//!
//! ```
//! use mum_core::catalog;
//! use mum_core::linalg::Tolerance;
//! use mum_core::mum::{direct_sum_test, from_block_hadamard, DIRECT_SUM_TOLERANCE};
//! use mum_core::sdc::{rigidity_witness, PROTOCOL_TOLERANCE};
//!
//! let pair = from_block_hadamard(&catalog::h4(), Tolerance::DEFAULT)?;
//! assert!(!direct_sum_test(&pair, DIRECT_SUM_TOLERANCE)?.is_direct_sum);
//!
//! let report = rigidity_witness(&pair, PROTOCOL_TOLERANCE)?;
//! assert!(report.is_valid_protocol);
//! assert!(report.conjecture_counterexample);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

#![forbid(unsafe_code)]
// Index loops mirror the block and entry index algebra throughout.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod linalg;
pub mod mum;
pub mod quaternion;
pub mod sdc;

pub use linalg::{Complex64, ComplexMatrix, Tolerance};
pub use mum::{BlockHadamard, MumPair, MumReport};
pub use quaternion::{PerfectSequence, Quaternion, QuaternionMatrix};
pub use sdc::{SdcProtocol, SdcReport};
