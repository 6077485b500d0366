//! Superdense coding protocols built from MUM pairs.
//!
//! A d-outcome pair on `C^n (x) C^d` induces encoding unitaries
//! `W_st = R^s S^t` with `R = sum_a omega^a P_a` and `S = sum_b omega^b Q_b`.
//! Applied to a maximally entangled state of local dimension `n d`, the d^2
//! receiver states `rho_st` are mutually orthogonal rank-n mixtures, so a
//! projective measurement onto their supports decodes every message with
//! certainty. When the source pair is additionally *not* a direct sum of
//! MUBs, the resulting protocol contradicts the rigidity expectation that
//! every protocol reduces to randomness-selected orthogonal unitary bases,
//! which is what [`rigidity_witness`] reports.
//!
//! Receiver states are computed from the pure-state form
//! `|psi^x_st> = (1/sqrt d) sum_l |l> (x) W_st^T |x l>`; the partial-trace
//! route is kept as an independent oracle
//! ([`reduced_receiver_state_partial_trace`]). Transposes and entrywise
//! conjugates are taken in the stored computational basis.

use crate::linalg::{
    root_of_unity_power, support_projector, Complex64, ComplexMatrix, LinalgError, Tolerance,
};
use crate::mum::{
    build_projectors, direct_sum_test, CommutationWitness, MumError, MumPair, DIRECT_SUM_TOLERANCE,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validity threshold for receiver-state orthogonality, purity, and decode
/// success.
pub const PROTOCOL_TOLERANCE: Tolerance = Tolerance::new_unchecked(1e-9);

/// Bound on the deviation between the power form `R^s S^t` and the closed
/// form `sum_ab omega^{sa+tb} P_a Q_b` of the encoders.
const ENCODER_CROSS_CHECK: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SdcError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Mum(#[from] MumError),
    #[error("message index ({s}, {t}) out of range for d = {d}")]
    BadMessage { s: usize, t: usize, d: usize },
    #[error("decoder has not been built")]
    DecoderMissing,
    #[error("receiver states are not orthogonal (max overlap {max_offdiag:.3e})")]
    OrthogonalityFailure { max_offdiag: f64 },
    #[error("dimension must be at least 1")]
    BadDimension,
    #[error("operator lists are malformed: {0}")]
    ShapeMismatch(String),
    #[error("encoder closed form deviates from power form by {0:.3e}")]
    EncoderMismatch(f64),
}

/// Decoding measurement: one support projector per message, plus an abort
/// projector absorbing whatever the supports fail to cover (nonzero only on
/// corrupted inputs; for a valid protocol the supports fill the space).
#[derive(Debug, Clone)]
pub struct Decoder {
    outcomes: Vec<ComplexMatrix>,
    abort: Option<ComplexMatrix>,
}

impl Decoder {
    /// Projector for message (s, t), 1-based.
    pub fn outcome(&self, s: usize, t: usize, d: usize) -> &ComplexMatrix {
        &self.outcomes[(s - 1) * d + (t - 1)]
    }

    pub fn outcomes(&self) -> &[ComplexMatrix] {
        &self.outcomes
    }

    pub fn abort(&self) -> Option<&ComplexMatrix> {
        self.abort.as_ref()
    }
}

/// A d-dimensional superdense coding protocol derived from a MUM pair:
/// shared maximally entangled state on `(C^{nd})^2`, the d^2 encoders
/// `W_st`, and (once built) the receiver's decoding measurement on the
/// `d * nd`-dimensional receiver space.
#[derive(Debug, Clone)]
pub struct SdcProtocol {
    d: usize,
    n: usize,
    shared_state: ComplexMatrix,
    encoders: Vec<Vec<ComplexMatrix>>,
    r_op: ComplexMatrix,
    s_op: ComplexMatrix,
    q_projectors: Vec<ComplexMatrix>,
    decoder: Option<Decoder>,
    source: MumPair,
}

impl SdcProtocol {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shared_state(&self) -> &ComplexMatrix {
        &self.shared_state
    }

    /// Encoder `W_st`, 1-based message indices.
    pub fn encoder(&self, s: usize, t: usize) -> Result<&ComplexMatrix, SdcError> {
        self.check_message(s, t)?;
        Ok(&self.encoders[s - 1][t - 1])
    }

    /// Replaces one encoder. Intended for corruption experiments; the
    /// protocol is not re-verified.
    pub fn set_encoder(&mut self, s: usize, t: usize, w: ComplexMatrix) -> Result<(), SdcError> {
        self.check_message(s, t)?;
        let nd = self.n * self.d;
        if w.rows() != nd || w.cols() != nd {
            return Err(SdcError::ShapeMismatch(format!(
                "encoder must be {nd}x{nd}, got {}x{}",
                w.rows(),
                w.cols()
            )));
        }
        self.encoders[s - 1][t - 1] = w;
        Ok(())
    }

    /// The phase operator over the first measurement, `R = sum_a omega^a P_a`.
    pub fn r_op(&self) -> &ComplexMatrix {
        &self.r_op
    }

    /// The phase operator over the second measurement, `S = sum_b omega^b Q_b`.
    pub fn s_op(&self) -> &ComplexMatrix {
        &self.s_op
    }

    pub fn decoder(&self) -> Option<&Decoder> {
        self.decoder.as_ref()
    }

    pub fn source(&self) -> &MumPair {
        &self.source
    }

    pub fn attach_decoder(&mut self, decoder: Decoder) {
        self.decoder = Some(decoder);
    }

    fn check_message(&self, s: usize, t: usize) -> Result<(), SdcError> {
        if s < 1 || s > self.d || t < 1 || t > self.d {
            return Err(SdcError::BadMessage { s, t, d: self.d });
        }
        Ok(())
    }
}

/// Result of decoding one message.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Simulation {
    pub message: (usize, usize),
    /// Flat message index `(s - 1) d + t` in `[d^2]`.
    pub message_index: usize,
    pub decoded: (usize, usize),
    pub probability: f64,
}

/// Orthogonality and purity diagnostics over all receiver states.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub max_offdiag: f64,
    pub purity_max_deviation: f64,
}

impl OrthogonalityReport {
    pub fn passed(&self, tol: Tolerance) -> bool {
        self.max_offdiag <= tol.eps() && self.purity_max_deviation <= tol.eps()
    }
}

/// Full verification report for a protocol built from a MUM pair.
/// `conjecture_counterexample` is set exactly when the protocol is valid and
/// the source pair is not a direct sum of MUBs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdcReport {
    pub d: usize,
    pub n: usize,
    pub tolerance: f64,
    pub orthogonality_max_offdiag: f64,
    pub purity_max_deviation: f64,
    pub decode_success_min: f64,
    pub message_success: Vec<f64>,
    pub encoder_gram_max_offdiag: f64,
    pub qb_reconstruction_max_err: f64,
    pub is_valid_protocol: bool,
    pub direct_sum_of_mubs: bool,
    pub conjecture_counterexample: bool,
    pub witness: Option<CommutationWitness>,
}

/// Maximally entangled column vector `(1/sqrt dim) sum_p |p>|p>` on dim^2.
pub fn max_entangled(dim: usize) -> Result<ComplexMatrix, SdcError> {
    if dim == 0 {
        return Err(SdcError::BadDimension);
    }
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut v = ComplexMatrix::zeros(dim * dim, 1);
    for p in 0..dim {
        v.set(p * dim + p, 0, amp);
    }
    Ok(v)
}

/// Builds the encoding operators of the protocol induced by a MUM pair and
/// cross-checks the closed form `W_st = sum_ab omega^{sa+tb} P_a Q_b`
/// against the power form.
pub fn encoders_from_mums(m: &MumPair) -> Result<SdcProtocol, SdcError> {
    m.ensure_valid(Tolerance::DEFAULT)?;
    let d = m.d();
    let n = m.n();
    let nd = n * d;
    let (p, q) = build_projectors(m)?;

    let mut r_op = ComplexMatrix::zeros(nd, nd);
    let mut s_op = ComplexMatrix::zeros(nd, nd);
    for a in 0..d {
        r_op = r_op.add(&p[a].scale(root_of_unity_power(d, a as i64 + 1)))?;
        s_op = s_op.add(&q[a].scale(root_of_unity_power(d, a as i64 + 1)))?;
    }

    // products P_a Q_b reused by the closed-form cross-check
    let mut pq = Vec::with_capacity(d * d);
    for pa in &p {
        for qb in &q {
            pq.push(pa.mat_mul(qb)?);
        }
    }

    let mut encoders = Vec::with_capacity(d);
    let mut worst_mismatch: f64 = 0.0;
    for s in 1..=d {
        let rs = r_op.matrix_power(s)?;
        let mut row = Vec::with_capacity(d);
        for t in 1..=d {
            let w = rs.mat_mul(&s_op.matrix_power(t)?)?;
            let mut closed = ComplexMatrix::zeros(nd, nd);
            for a in 1..=d {
                for b in 1..=d {
                    let phase = root_of_unity_power(d, (s * a + t * b) as i64);
                    closed = closed.add(&pq[(a - 1) * d + (b - 1)].scale(phase))?;
                }
            }
            worst_mismatch = worst_mismatch.max(w.max_abs_diff(&closed));
            row.push(w);
        }
        encoders.push(row);
    }
    if worst_mismatch > ENCODER_CROSS_CHECK {
        return Err(SdcError::EncoderMismatch(worst_mismatch));
    }

    Ok(SdcProtocol {
        d,
        n,
        shared_state: max_entangled(nd)?,
        encoders,
        r_op,
        s_op,
        q_projectors: q,
        decoder: None,
        source: m.clone(),
    })
}

/// Receiver state for message (s, t) via the pure-state form: the mixture
/// of `|psi^x_st> = (1/sqrt d) sum_l |l> (x) W^T |x l>` over x, on
/// dimension `d * nd`.
pub fn reduced_receiver_state(
    proto: &SdcProtocol,
    s: usize,
    t: usize,
) -> Result<ComplexMatrix, SdcError> {
    let w = proto.encoder(s, t)?;
    let d = proto.d;
    let n = proto.n;
    let nd = n * d;
    let dim = d * nd;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for x in 0..n {
        let mut psi = ComplexMatrix::zeros(dim, 1);
        for l in 0..d {
            for r in 0..nd {
                // (W^T |xl>)_r = W[x d + l, r]
                psi.set(l * nd + r, 0, w.get(x * d + l, r) * amp);
            }
        }
        rho = rho.add(&psi.mat_mul(&psi.adjoint())?)?;
    }
    Ok(rho.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// Independent oracle for [`reduced_receiver_state`]: conjugates the shared
/// state by `W_st (x) 1` and traces out the sender's retained n-dimensional
/// factor.
pub fn reduced_receiver_state_partial_trace(
    proto: &SdcProtocol,
    s: usize,
    t: usize,
) -> Result<ComplexMatrix, SdcError> {
    let w = proto.encoder(s, t)?;
    let nd = proto.n * proto.d;
    let amp = Complex64::new(1.0 / (nd as f64).sqrt(), 0.0);
    // (W (x) 1) |phi+> has amplitude W[p, q]/sqrt(nd) at index p*nd + q
    let mut full = ComplexMatrix::zeros(nd * nd, 1);
    for p in 0..nd {
        for q in 0..nd {
            full.set(p * nd + q, 0, w.get(p, q) * amp);
        }
    }
    let rho_full = full.mat_mul(&full.adjoint())?;
    Ok(rho_full.partial_trace_leading(proto.n)?)
}

fn all_receiver_states(proto: &SdcProtocol) -> Result<Vec<ComplexMatrix>, SdcError> {
    let d = proto.d;
    let mut states = Vec::with_capacity(d * d);
    for s in 1..=d {
        for t in 1..=d {
            states.push(reduced_receiver_state(proto, s, t)?);
        }
    }
    Ok(states)
}

/// Pairwise overlap scan of all receiver states: returns the maximum
/// `|trace(rho rho')|` over distinct messages and the worst deviation of
/// each purity `trace(rho^2)` from `1/n`.
pub fn verify_orthogonality(
    proto: &SdcProtocol,
    _tol: Tolerance,
) -> Result<OrthogonalityReport, SdcError> {
    let states = all_receiver_states(proto)?;
    let target_purity = 1.0 / proto.n as f64;
    let mut max_offdiag: f64 = 0.0;
    let mut purity_dev: f64 = 0.0;
    for (i, rho) in states.iter().enumerate() {
        let purity = rho.trace_of_product(rho)?;
        purity_dev = purity_dev.max((purity.re - target_purity).abs().max(purity.im.abs()));
        for other in states.iter().skip(i + 1) {
            max_offdiag = max_offdiag.max(rho.trace_of_product(other)?.norm());
        }
    }
    Ok(OrthogonalityReport {
        max_offdiag,
        purity_max_deviation: purity_dev,
    })
}

/// Builds the decoding measurement from the supports of the receiver
/// states. Fails when the states are not orthogonal within `tol`.
pub fn build_decoder(proto: &SdcProtocol, tol: Tolerance) -> Result<Decoder, SdcError> {
    let report = verify_orthogonality(proto, tol)?;
    if report.max_offdiag > tol.eps() {
        return Err(SdcError::OrthogonalityFailure {
            max_offdiag: report.max_offdiag,
        });
    }
    let states = all_receiver_states(proto)?;
    let dim = proto.d * proto.n * proto.d;
    let mut outcomes = Vec::with_capacity(states.len());
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for rho in &states {
        let projector = support_projector(rho, Tolerance::EIGEN)?;
        sum = sum.add(&projector)?;
        outcomes.push(projector);
    }
    let residual = ComplexMatrix::identity(dim).sub(&sum)?;
    let abort = if residual.max_abs() > tol.eps() {
        Some(support_projector(&residual, Tolerance::EIGEN)?)
    } else {
        None
    };
    Ok(Decoder { outcomes, abort })
}

/// Decodes one message: success probability `trace(M_st rho_st)` and the
/// argmax outcome. Never fails on corrupted protocols; the probabilities
/// just degrade.
pub fn simulate(proto: &SdcProtocol, s: usize, t: usize) -> Result<Simulation, SdcError> {
    let decoder = proto.decoder.as_ref().ok_or(SdcError::DecoderMissing)?;
    let rho = reduced_receiver_state(proto, s, t)?;
    let d = proto.d;
    let mut best_index = 0usize;
    let mut best_value = f64::NEG_INFINITY;
    for (i, m) in decoder.outcomes.iter().enumerate() {
        let value = m.trace_of_product(&rho)?.re;
        if value > best_value {
            best_value = value;
            best_index = i;
        }
    }
    let own = decoder
        .outcome(s, t, d)
        .trace_of_product(&rho)?
        .re
        .clamp(0.0, 1.0 + 1e-12);
    Ok(Simulation {
        message: (s, t),
        message_index: (s - 1) * d + t,
        decoded: (best_index / d + 1, best_index % d + 1),
        probability: own,
    })
}

/// True iff the operators form an orthogonal unitary basis: d^2 unitaries on
/// `C^d` with Hilbert-Schmidt Gram matrix `d * identity`.
pub fn verify_orthogonal_unitary_basis(
    operators: &[ComplexMatrix],
    tol: Tolerance,
) -> Result<bool, SdcError> {
    let Some(first) = operators.first() else {
        return Err(SdcError::ShapeMismatch("empty operator list".to_string()));
    };
    if !first.is_square() {
        return Err(SdcError::ShapeMismatch(
            "operators must be square".to_string(),
        ));
    }
    let d = first.rows();
    for op in operators {
        if op.rows() != d || op.cols() != d {
            return Err(SdcError::ShapeMismatch(format!(
                "expected uniform dimension {d}"
            )));
        }
    }
    if operators.len() != d * d {
        return Ok(false);
    }
    for op in operators {
        if !op.is_unitary(tol) {
            return Ok(false);
        }
    }
    for (i, a) in operators.iter().enumerate() {
        for (j, b) in operators.iter().enumerate() {
            let inner = a.adjoint().mat_mul(b)?.trace();
            let target = if i == j { d as f64 } else { 0.0 };
            if (inner - Complex64::new(target, 0.0)).norm() > tol.eps() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Runs the full pipeline on a canonical pair: encoder construction,
/// orthogonality and purity verification, decoder construction, decoding of
/// every message, the direct-sum test, and the reconstruction identity
/// `Q_b = (1/d) sum_j omega^{-bj} S^j`. The conjecture counterexample flag
/// is the conjunction of protocol validity and direct-sum failure.
pub fn rigidity_witness(m: &MumPair, tol: Tolerance) -> Result<SdcReport, SdcError> {
    if !m.is_canonical() {
        let violation = m.blocks()[0]
            .iter()
            .map(|u| u.deviation_from_identity())
            .fold(0.0f64, f64::max);
        return Err(SdcError::Mum(MumError::NotCanonical { violation }));
    }
    let mut proto = encoders_from_mums(m)?;
    let d = proto.d;
    let orthogonality = verify_orthogonality(&proto, tol)?;
    let decoder = build_decoder(&proto, tol)?;
    proto.attach_decoder(decoder);

    let mut message_success = Vec::with_capacity(d * d);
    let mut decode_success_min: f64 = 1.0;
    let mut decoded_all_match = true;
    for s in 1..=d {
        for t in 1..=d {
            let sim = simulate(&proto, s, t)?;
            decode_success_min = decode_success_min.min(sim.probability);
            decoded_all_match &= sim.decoded == (s, t);
            message_success.push(sim.probability);
        }
    }

    // Hilbert-Schmidt Gram of the encoders, reported without a verdict.
    let mut encoder_gram_max_offdiag: f64 = 0.0;
    for s in 1..=d {
        for t in 1..=d {
            for s2 in 1..=d {
                for t2 in 1..=d {
                    if (s, t) >= (s2, t2) {
                        continue;
                    }
                    let inner = proto
                        .encoder(s, t)?
                        .adjoint()
                        .mat_mul(proto.encoder(s2, t2)?)?
                        .trace();
                    encoder_gram_max_offdiag = encoder_gram_max_offdiag.max(inner.norm());
                }
            }
        }
    }

    // reconstruction of the second measurement from powers of S
    let mut qb_reconstruction_max_err: f64 = 0.0;
    let mut s_powers = Vec::with_capacity(d);
    let mut current = proto.s_op.clone();
    for step in 0..d {
        s_powers.push(current.clone());
        if step + 1 < d {
            current = current.mat_mul(&proto.s_op)?;
        }
    }
    let nd = proto.n * d;
    let inv_d = Complex64::new(1.0 / d as f64, 0.0);
    for b in 1..=d {
        let mut acc = ComplexMatrix::zeros(nd, nd);
        for (j0, power) in s_powers.iter().enumerate() {
            let phase = root_of_unity_power(d, -((b * (j0 + 1)) as i64));
            acc = acc.add(&power.scale(phase))?;
        }
        let recon = acc.scale(inv_d);
        qb_reconstruction_max_err =
            qb_reconstruction_max_err.max(recon.max_abs_diff(&proto.q_projectors[b - 1]));
    }

    let verdict = direct_sum_test(m, DIRECT_SUM_TOLERANCE)?;
    let is_valid_protocol =
        orthogonality.passed(tol) && decode_success_min >= 1.0 - tol.eps() && decoded_all_match;

    Ok(SdcReport {
        d,
        n: proto.n,
        tolerance: tol.eps(),
        orthogonality_max_offdiag: orthogonality.max_offdiag,
        purity_max_deviation: orthogonality.purity_max_deviation,
        decode_success_min,
        message_success,
        encoder_gram_max_offdiag,
        qb_reconstruction_max_err,
        is_valid_protocol,
        direct_sum_of_mubs: verdict.is_direct_sum,
        conjecture_counterexample: is_valid_protocol && !verdict.is_direct_sum,
        witness: verdict.witness,
    })
}
