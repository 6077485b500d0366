//! `mumtool`: build catalog artifacts, verify measurement structures, run
//! the perfect-sequence pipeline, and report on superdense coding protocols.
//!
//! Exit codes: 0 verified pass, 1 verified failure, 2 malformed input or
//! unknown identifier. Reports go to stdout (or `--out`); JSON is the source
//! of truth and `--format text` renders a human summary. Catalog artifacts
//! are always bare JSON so they can be piped back into `verify`.

mod formats;

use clap::{Parser, Subcommand, ValueEnum};
use formats::{Envelope, OperatorList, ProjectorPair, RawSequence, StageFailure};
use mum_core::catalog::{self, CdParams, TowerSpec};
use mum_core::linalg::Tolerance;
use mum_core::mum::{
    from_block_hadamard, full_report, verify_mub_pair, verify_unitary_hadamard, BlockHadamard,
    MumPair, MumReport,
};
use mum_core::quaternion::{lift_matrix, NoncommutingWitness, PerfectSequence, QuaternionMatrix};
use mum_core::sdc::{
    build_decoder, encoders_from_mums, rigidity_witness, simulate, SdcReport, Simulation,
};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::exit;

#[derive(Parser)]
#[command(
    name = "mumtool",
    version,
    about = "Mutually unbiased measurements: catalog, verification, and superdense coding"
)]
struct Cli {
    /// Verification tolerance (absolute, entrywise); must lie in (0, 1e-2)
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Report format; catalog artifacts are always JSON
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the output to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Dimension cap for tower constructions
    #[arg(long, global = true, default_value_t = 256)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a built-in construction as JSON.
    ///
    /// Identifiers: h4, h5, h6, kuznetsov5, cd-special(a1,a2,b1,b2),
    /// tower(d,n), mub(d), hw(d)
    Catalog { id: String },

    /// Verify a structure read from a file (or stdin with "-")
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        input: String,
    },

    /// Run a perfect sequence through circulant, dephasing, lift, and the
    /// full protocol report
    Pipeline { sequence: String },

    /// Verify the superdense coding protocol of a MUM pair, or decode one
    /// message
    Sdc {
        input: String,
        /// Message "s,t" with 1-based indices
        #[arg(long)]
        message: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum VerifyKind {
    Mum,
    Qhad,
    BlockHadamard,
    Mub,
    Oub,
}

/// Malformed input, unknown identifier, or I/O failure: exit code 2.
struct Malformed(String);

struct Output {
    body: String,
    code: i32,
}

fn main() {
    let cli = Cli::parse();
    let out_path = cli.out.clone();
    match run(cli) {
        Ok(output) => {
            if let Some(path) = out_path {
                if let Err(err) = std::fs::write(&path, output.body.as_bytes()) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    exit(2);
                }
            } else {
                // tolerate a closed pipe on the reading side
                use std::io::Write;
                let stdout = std::io::stdout();
                let _ = writeln!(stdout.lock(), "{}", output.body.trim_end());
            }
            exit(output.code);
        }
        Err(Malformed(msg)) => {
            eprintln!("error: {msg}");
            exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<Output, Malformed> {
    if !(cli.tol > 0.0 && cli.tol < 1e-2) {
        return Err(Malformed(format!(
            "tolerance must lie in (0, 1e-2), got {}",
            cli.tol
        )));
    }
    if cli.cap < 4 {
        return Err(Malformed(format!(
            "cap must be at least 4, got {}",
            cli.cap
        )));
    }
    let tol = Tolerance::new(cli.tol).map_err(|e| Malformed(e.to_string()))?;
    match &cli.command {
        Command::Catalog { id } => cmd_catalog(id, cli.cap),
        Command::Verify { kind, input } => cmd_verify(*kind, input, tol, cli.format),
        Command::Pipeline { sequence } => cmd_pipeline(sequence, tol, cli.format),
        Command::Sdc { input, message } => cmd_sdc(input, message.as_deref(), tol, cli.format),
    }
}

fn read_input(path: &str) -> Result<String, Malformed> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| Malformed(format!("cannot read stdin: {e}")))?;
        Ok(buffer)
    } else {
        std::fs::read_to_string(path).map_err(|e| Malformed(format!("cannot read {path}: {e}")))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Malformed> {
    serde_json::from_str(text).map_err(|e| Malformed(format!("malformed {what}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization")
}

// ---------------------------------------------------------------------------
// catalog

fn cmd_catalog(id: &str, cap: usize) -> Result<Output, Malformed> {
    let (name, args) = split_identifier(id)?;
    let body = match (name.as_str(), args.as_slice()) {
        ("h4", []) => to_json(&catalog::h4()),
        ("h5", []) => to_json(&catalog::h5()),
        ("h6", []) => to_json(&catalog::h6()),
        ("kuznetsov5", []) => to_json(&catalog::kuznetsov5()),
        ("cd-special", [a1, a2, b1, b2]) => {
            let params = CdParams::new(*a1, *a2, *b1, *b2).map_err(|e| Malformed(e.to_string()))?;
            let m = catalog::cd_special(&params).map_err(|e| Malformed(e.to_string()))?;
            to_json(&m)
        }
        ("tower", [d, n]) => {
            let (d, n) = (as_index(*d)?, as_index(*n)?);
            let spec = TowerSpec::with_cap(d, n, cap).map_err(|e| Malformed(e.to_string()))?;
            let ops = catalog::pauli_tower(&spec).map_err(|e| Malformed(e.to_string()))?;
            to_json(&OperatorList { operators: ops })
        }
        ("mub", [d]) => {
            let (p, q) =
                catalog::standard_mub_pair(as_index(*d)?).map_err(|e| Malformed(e.to_string()))?;
            to_json(&ProjectorPair { p, q })
        }
        ("hw", [d]) => {
            let ops =
                catalog::heisenberg_weyl(as_index(*d)?).map_err(|e| Malformed(e.to_string()))?;
            to_json(&OperatorList { operators: ops })
        }
        _ => return Err(Malformed(format!("unknown catalog identifier: {id}"))),
    };
    Ok(Output { body, code: 0 })
}

fn split_identifier(id: &str) -> Result<(String, Vec<f64>), Malformed> {
    let id = id.trim();
    match id.find('(') {
        None => Ok((id.to_string(), Vec::new())),
        Some(open) => {
            let name = id[..open].to_string();
            let rest = &id[open + 1..];
            let close = rest
                .rfind(')')
                .ok_or_else(|| Malformed(format!("missing ')' in identifier: {id}")))?;
            let args = rest[..close]
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Malformed(format!("bad numeric argument in: {id}")))
                })
                .collect::<Result<Vec<f64>, Malformed>>()?;
            Ok((name, args))
        }
    }
}

fn as_index(value: f64) -> Result<usize, Malformed> {
    if value.fract() == 0.0 && value >= 0.0 && value <= usize::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(Malformed(format!(
            "expected a non-negative integer, got {value}"
        )))
    }
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(
    kind: VerifyKind,
    input: &str,
    tol: Tolerance,
    format: Format,
) -> Result<Output, Malformed> {
    let text = read_input(input)?;
    match kind {
        VerifyKind::Mum => {
            let pair: MumPair = parse_json(&text, "MUM pair")?;
            let report = full_report(&pair, tol).map_err(|e| Malformed(e.to_string()))?;
            let passed = report.conditions_ok && report.orthogonality_ok;
            emit_report("mum", tol, passed, &report, format, render_mum_report)
        }
        VerifyKind::Qhad => {
            let m: QuaternionMatrix = parse_json(&text, "quaternion matrix")?;
            let violation = m
                .hadamard_violation()
                .map_err(|e| Malformed(e.to_string()))?;
            let report = QhadReport {
                hadamard_violation: violation,
                noncommuting_witness: m.has_noncommuting_pair(tol),
            };
            let passed = violation <= tol.eps();
            emit_report("qhad", tol, passed, &report, format, render_qhad_report)
        }
        VerifyKind::BlockHadamard => {
            let h: BlockHadamard = parse_json(&text, "block Hadamard")?;
            let report = verify_unitary_hadamard(&h, tol);
            let passed = report.conditions_ok && report.orthogonality_ok;
            emit_report(
                "block-hadamard",
                tol,
                passed,
                &report,
                format,
                render_mum_report,
            )
        }
        VerifyKind::Mub => {
            let pair: ProjectorPair = parse_json(&text, "projector pair")?;
            let passed =
                verify_mub_pair(&pair.p, &pair.q, tol).map_err(|e| Malformed(e.to_string()))?;
            emit_report("mub", tol, passed, &passed, format, |p, out| {
                let _ = writeln!(out, "mub pair: {}", verdict(*p));
            })
        }
        VerifyKind::Oub => {
            let list: OperatorList = parse_json(&text, "operator list")?;
            let passed = mum_core::sdc::verify_orthogonal_unitary_basis(&list.operators, tol)
                .map_err(|e| Malformed(e.to_string()))?;
            emit_report("oub", tol, passed, &passed, format, |p, out| {
                let _ = writeln!(out, "orthogonal unitary basis: {}", verdict(*p));
            })
        }
    }
}

#[derive(Serialize)]
struct QhadReport {
    hadamard_violation: f64,
    noncommuting_witness: Option<NoncommutingWitness>,
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

fn emit_report<T: Serialize>(
    kind: &'static str,
    tol: Tolerance,
    passed: bool,
    report: &T,
    format: Format,
    render: fn(&T, &mut String),
) -> Result<Output, Malformed> {
    let body = match format {
        Format::Json => to_json(&Envelope::new(kind, tol.eps(), passed, report)),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "kind: {kind}");
            let _ = writeln!(out, "tolerance: {:e}", tol.eps());
            let _ = writeln!(out, "verdict: {}", verdict(passed));
            render(report, &mut out);
            out
        }
    };
    Ok(Output {
        body,
        code: i32::from(!passed),
    })
}

fn render_mum_report(report: &MumReport, out: &mut String) {
    let _ = writeln!(out, "conditions ok: {}", report.conditions_ok);
    let _ = writeln!(out, "orthogonality ok: {}", report.orthogonality_ok);
    if let Some(canonical) = report.canonical {
        let _ = writeln!(out, "canonical: {canonical}");
    }
    if let Some(direct_sum) = report.direct_sum_of_mubs {
        let _ = writeln!(out, "direct sum of mubs: {direct_sum}");
    }
    if let Some(w) = &report.witness {
        let _ = writeln!(
            out,
            "noncommuting blocks: ({}, {}) vs ({}, {})",
            w.first.0, w.first.1, w.second.0, w.second.1
        );
    }
    let _ = writeln!(out, "max violation: {:.3e}", report.max_violation);
}

fn render_qhad_report(report: &QhadReport, out: &mut String) {
    let _ = writeln!(out, "hadamard violation: {:.3e}", report.hadamard_violation);
    match &report.noncommuting_witness {
        Some(w) => {
            let _ = writeln!(
                out,
                "noncommuting entries: ({}, {}) vs ({}, {})",
                w.first.0, w.first.1, w.second.0, w.second.1
            );
        }
        None => {
            let _ = writeln!(out, "all entries commute");
        }
    }
}

// ---------------------------------------------------------------------------
// pipeline

#[derive(Serialize)]
struct PipelineReport {
    sequence_length: usize,
    circulant_hadamard_violation: f64,
    dephased_hadamard_violation: f64,
    noncommuting_witness: Option<NoncommutingWitness>,
    sdc: SdcReport,
}

fn cmd_pipeline(path: &str, tol: Tolerance, format: Format) -> Result<Output, Malformed> {
    let text = read_input(path)?;
    let raw: RawSequence = parse_json(&text, "perfect sequence")?;

    let fail = |stage: &'static str, error: String, format: Format| {
        let failure = StageFailure {
            failed_stage: stage,
            error,
        };
        let body = match format {
            Format::Json => to_json(&Envelope::new("pipeline", tol.eps(), false, &failure)),
            Format::Text => format!("pipeline failed at {stage}: {}", failure.error),
        };
        Ok(Output { body, code: 1 })
    };

    let sequence = match PerfectSequence::new(raw.terms) {
        Ok(s) => s,
        Err(e) => return fail("sequence-validation", e.to_string(), format),
    };
    let circulant = sequence.circulant();
    let circulant_violation = match circulant.hadamard_violation() {
        Ok(v) if v <= tol.eps() => v,
        Ok(v) => {
            return fail(
                "circulant-hadamard",
                format!("violation {v:.3e} exceeds tolerance"),
                format,
            )
        }
        Err(e) => return fail("circulant-hadamard", e.to_string(), format),
    };
    let dephased = match circulant.dephase() {
        Ok(m) => m,
        Err(e) => return fail("dephase", e.to_string(), format),
    };
    let dephased_violation = match dephased.hadamard_violation() {
        Ok(v) => v,
        Err(e) => return fail("dephase", e.to_string(), format),
    };
    let witness = dephased.has_noncommuting_pair(tol);
    let lifted = match lift_matrix(&dephased, tol) {
        Ok(h) => h,
        Err(e) => return fail("lift", e.to_string(), format),
    };
    let pair = match from_block_hadamard(&lifted, tol) {
        Ok(p) => p,
        Err(e) => return fail("mum-pair", e.to_string(), format),
    };
    let sdc = match rigidity_witness(&pair, tol) {
        Ok(r) => r,
        Err(e) => return fail("rigidity", e.to_string(), format),
    };

    let passed = sdc.is_valid_protocol;
    let report = PipelineReport {
        sequence_length: sequence.len(),
        circulant_hadamard_violation: circulant_violation,
        dephased_hadamard_violation: dephased_violation,
        noncommuting_witness: witness,
        sdc,
    };
    let body = match format {
        Format::Json => to_json(&Envelope::new("pipeline", tol.eps(), passed, &report)),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "kind: pipeline");
            let _ = writeln!(out, "sequence length: {}", report.sequence_length);
            let _ = writeln!(
                out,
                "circulant hadamard violation: {:.3e}",
                report.circulant_hadamard_violation
            );
            match &report.noncommuting_witness {
                Some(w) => {
                    let _ = writeln!(
                        out,
                        "noncommuting entries: ({}, {}) vs ({}, {})",
                        w.first.0, w.first.1, w.second.0, w.second.1
                    );
                }
                None => {
                    let _ = writeln!(out, "all dephased entries commute");
                }
            }
            render_sdc_report(&report.sdc, &mut out);
            out
        }
    };
    Ok(Output {
        body,
        code: i32::from(!passed),
    })
}

// ---------------------------------------------------------------------------
// sdc

fn cmd_sdc(
    path: &str,
    message: Option<&str>,
    tol: Tolerance,
    format: Format,
) -> Result<Output, Malformed> {
    let text = read_input(path)?;
    let pair: MumPair = parse_json(&text, "MUM pair")?;
    match message {
        None => {
            let report = match rigidity_witness(&pair, tol) {
                Ok(r) => r,
                Err(e) => {
                    let body = match format {
                        Format::Json => to_json(&Envelope::new(
                            "sdc",
                            tol.eps(),
                            false,
                            &StageFailure {
                                failed_stage: "protocol",
                                error: e.to_string(),
                            },
                        )),
                        Format::Text => format!("protocol construction failed: {e}"),
                    };
                    return Ok(Output { body, code: 1 });
                }
            };
            let passed = report.is_valid_protocol;
            let body = match format {
                Format::Json => to_json(&Envelope::new("sdc", tol.eps(), passed, &report)),
                Format::Text => {
                    let mut out = String::new();
                    let _ = writeln!(out, "kind: sdc");
                    render_sdc_report(&report, &mut out);
                    out
                }
            };
            Ok(Output {
                body,
                code: i32::from(!passed),
            })
        }
        Some(message) => {
            let (s, t) = parse_message(message)?;
            let mut proto = match encoders_from_mums(&pair) {
                Ok(p) => p,
                Err(e) => return sdc_failure(e.to_string(), tol, format),
            };
            let decoder = match build_decoder(&proto, tol) {
                Ok(d) => d,
                Err(e) => return sdc_failure(e.to_string(), tol, format),
            };
            proto.attach_decoder(decoder);
            let sim = match simulate(&proto, s, t) {
                Ok(s) => s,
                Err(e) => return Err(Malformed(e.to_string())),
            };
            let passed = sim.decoded == sim.message && sim.probability >= 1.0 - tol.eps();
            let body = match format {
                Format::Json => to_json(&Envelope::new("sdc-simulate", tol.eps(), passed, &sim)),
                Format::Text => render_simulation(&sim),
            };
            Ok(Output {
                body,
                code: i32::from(!passed),
            })
        }
    }
}

fn sdc_failure(error: String, tol: Tolerance, format: Format) -> Result<Output, Malformed> {
    let body = match format {
        Format::Json => to_json(&Envelope::new(
            "sdc",
            tol.eps(),
            false,
            &StageFailure {
                failed_stage: "protocol",
                error,
            },
        )),
        Format::Text => format!("protocol construction failed: {error}"),
    };
    Ok(Output { body, code: 1 })
}

fn parse_message(text: &str) -> Result<(usize, usize), Malformed> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Malformed(format!("message must be \"s,t\", got {text}")));
    }
    let s = parts[0]
        .parse::<usize>()
        .map_err(|_| Malformed(format!("bad message index: {}", parts[0])))?;
    let t = parts[1]
        .parse::<usize>()
        .map_err(|_| Malformed(format!("bad message index: {}", parts[1])))?;
    Ok((s, t))
}

fn render_sdc_report(report: &SdcReport, out: &mut String) {
    let _ = writeln!(out, "d: {}  n: {}", report.d, report.n);
    let _ = writeln!(
        out,
        "orthogonality max offdiag: {:.3e}",
        report.orthogonality_max_offdiag
    );
    let _ = writeln!(
        out,
        "purity max deviation: {:.3e}",
        report.purity_max_deviation
    );
    let _ = writeln!(out, "decode success min: {:.9}", report.decode_success_min);
    let _ = writeln!(
        out,
        "qb reconstruction err: {:.3e}",
        report.qb_reconstruction_max_err
    );
    let _ = writeln!(out, "valid protocol: {}", report.is_valid_protocol);
    let _ = writeln!(out, "direct sum of mubs: {}", report.direct_sum_of_mubs);
    let _ = writeln!(
        out,
        "conjecture counterexample: {}",
        report.conjecture_counterexample
    );
    if let Some(w) = &report.witness {
        let _ = writeln!(
            out,
            "noncommuting blocks: ({}, {}) vs ({}, {})",
            w.first.0, w.first.1, w.second.0, w.second.1
        );
    }
}

fn render_simulation(sim: &Simulation) -> String {
    format!(
        "message ({}, {}) [index {}] decoded as ({}, {}) with probability {:.9}",
        sim.message.0,
        sim.message.1,
        sim.message_index,
        sim.decoded.0,
        sim.decoded.1,
        sim.probability
    )
}
