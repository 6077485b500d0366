//! JSON envelopes shared by the subcommands.
//!
//! Catalog artifacts are emitted bare (exactly the producing type's JSON) so
//! they can be piped straight back into `verify`. Reports are wrapped with
//! the library version and the tolerance that produced the verdict.

use mum_core::linalg::ComplexMatrix;
use mum_core::quaternion::Quaternion;
use serde::{Deserialize, Serialize};

/// Operator-list artifact: Heisenberg-Weyl bases, Pauli towers, and the
/// input format of `verify oub`.
#[derive(Debug, Serialize, Deserialize)]
pub struct OperatorList {
    pub operators: Vec<ComplexMatrix>,
}

/// Projector-list pair: the `mub(d)` artifact and the input of `verify mub`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProjectorPair {
    pub p: Vec<ComplexMatrix>,
    pub q: Vec<ComplexMatrix>,
}

/// Raw perfect-sequence terms, parsed without the autocorrelation check so
/// the pipeline can report validation as a named stage failure.
#[derive(Debug, Deserialize)]
pub struct RawSequence {
    pub terms: Vec<Quaternion>,
}

/// Report envelope: every verification output carries the library version
/// and the tolerance used.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub version: &'static str,
    pub kind: &'static str,
    pub tolerance: f64,
    pub passed: bool,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(kind: &'static str, tolerance: f64, passed: bool, report: T) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            kind,
            tolerance,
            passed,
            report,
        }
    }
}

/// Stage failure emitted by the pipeline command (exit code 1).
#[derive(Debug, Serialize)]
pub struct StageFailure {
    pub failed_stage: &'static str,
    pub error: String,
}
