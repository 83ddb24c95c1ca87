//! Thin command line front end over the library.  Every command reads an
//! algebra document (JSON), performs one computation and reports the result
//! in text or canonical JSON.
//!
//! Exit codes: 0 = property verified / structure accepted, 1 = verified
//! false (for example a nonzero obstruction class), 2 = input error.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use linfty::derivation::Derivation;
use linfty::doc::{canonical_json, AlgebraDocument};
use linfty::double::{DoubleKind, DoubleSpace};
use linfty::graded::Parity;
use linfty::linf::{CyclicData, LInftyStructure};
use linfty::mc::{gauge_apply, is_mc, DerDgla};
use linfty::quantum::{quantum_lift, QuantumLift};
use linfty::sampling;
use linfty::sdr;
use linfty::tensor::{frobenius, frobenius_names, tensor_linfty};
use linfty::unimodular::{lie_unimodular, obstruction_class, ObstructionClass};
use linfty::verify;
use linfty::Result;

#[derive(Parser)]
#[command(
    name = "linfty",
    about = "Exact calculus for formal vector fields and homotopy Lie structures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Weight cutoff for all truncated computations
    #[arg(long, global = true, default_value_t = 6)]
    cutoff: usize,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the randomized commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structure equation of the document's homotopy Lie structure
    CheckMc { file: String },
    /// Check cyclicity with respect to the document's pairing block
    CheckCyclic { file: String },
    /// Compute the divergence of the structure field (exit 0 when it vanishes)
    Divergence { file: String },
    /// Compute the even or odd double of the structure field
    Double {
        file: String,
        #[arg(long, conflicts_with = "odd")]
        even: bool,
        #[arg(long)]
        odd: bool,
    },
    /// Solve for a volume datum; exit 1 with the nonzero class when obstructed
    UnimodularLift { file: String },
    /// Lift the odd double of the structure through the quantum master equation
    QuantumLift {
        file: String,
        /// Quantize on the odd double of the structure (the only supported mode)
        #[arg(long, default_value_t = true)]
        odd_double: bool,
        /// Highest genus to solve for
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Weight truncation (overrides --cutoff)
        #[arg(long)]
        weight: Option<usize>,
    },
    /// Tensor the structure with a Frobenius algebra from the catalog
    Tensor {
        file: String,
        /// Catalog name: k, H_point, H_S1, H_S2, H_S3, H_T2
        #[arg(long)]
        frobenius: String,
    },
    /// Cochain cohomology dimensions on the reliable weight block
    CeCohomology { file: String },
    /// Gauge the structure by a random even field and re-verify the equation
    GaugeApply { file: String },
    /// Check and repair sampled strong deformation retractions
    SdrCheck {
        /// Number of perturbed samples
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Run the built-in verification suite
    VerifyPaper,
}

fn load(file: &str, cutoff: usize) -> Result<(AlgebraDocument, LInftyStructure)> {
    let bytes = std::fs::read(file)
        .map_err(|e| linfty::Error::Input(format!("cannot read {file}: {e}")))?;
    let doc = AlgebraDocument::parse(&bytes)?;
    let s = doc.linfty(cutoff)?;
    Ok((doc, s))
}

fn emit(format: Format, text: String, value: serde_json::Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => print!("{}", canonical_json(&value)),
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    match cli.command {
        Command::CheckMc { file } => {
            let (_, s) = load(&file, g.cutoff)?;
            let ok = s.check_mc()?;
            emit(
                g.format,
                format!(
                    "structure equation: {}",
                    if ok { "holds" } else { "fails" }
                ),
                json!({"command": "check-mc", "holds": ok}),
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::CheckCyclic { file } => {
            let (doc, s) = load(&file, g.cutoff)?;
            let form = doc.pairing_form()?.ok_or_else(|| {
                linfty::Error::Input("check-cyclic needs a pairing block".into())
            })?;
            let data = CyclicData::new(form);
            let ok = data.check_cyclic(&s)?;
            emit(
                g.format,
                format!("cyclicity: {}", if ok { "holds" } else { "fails" }),
                json!({"command": "check-cyclic", "holds": ok}),
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::Divergence { file } => {
            let (_, s) = load(&file, g.cutoff)?;
            let div = s.m.divergence();
            emit(
                g.format,
                format!("divergence of the structure field: {div}"),
                json!({"command": "divergence", "divergence": div.to_string(), "zero": div.is_zero()}),
            );
            Ok(if div.is_zero() { 0 } else { 1 })
        }
        Command::Double { file, even, odd } => {
            if even == odd {
                return Err(linfty::Error::Input(
                    "double requires exactly one of --even or --odd".into(),
                ));
            }
            let (_, s) = load(&file, g.cutoff)?;
            let kind = if even { DoubleKind::Even } else { DoubleKind::Odd };
            let d = DoubleSpace::new(s.alg.clone(), kind);
            let h = match kind {
                DoubleKind::Even => d.double_even(&s.m)?,
                DoubleKind::Odd => d.double_odd(&s.m)?,
            };
            emit(
                g.format,
                format!("double on a space of dimension {}: {h}", d.total.dim()),
                json!({"command": "double", "kind": if even {"even"} else {"odd"},
                       "hamiltonian": h.to_string(), "dim": d.total.dim()}),
            );
            Ok(0)
        }
        Command::UnimodularLift { file } => {
            let (_, s) = load(&file, g.cutoff)?;
            let lie = lie_unimodular(&s).ok();
            match obstruction_class(&s)? {
                ObstructionClass::Vanishes(f) => {
                    emit(
                        g.format,
                        format!("volume datum exists: f = {f}"),
                        json!({"command": "unimodular-lift", "lifts": true,
                               "volume_datum": f.to_string(), "lie_unimodular": lie}),
                    );
                    Ok(0)
                }
                ObstructionClass::Nonzero(c) => {
                    emit(
                        g.format,
                        format!("obstructed: the class of {c} is nonzero"),
                        json!({"command": "unimodular-lift", "lifts": false,
                               "class": c.to_string(), "lie_unimodular": lie}),
                    );
                    Ok(1)
                }
            }
        }
        Command::QuantumLift {
            file,
            odd_double,
            genus,
            weight,
        } => {
            if !odd_double {
                return Err(linfty::Error::Input(
                    "only --odd-double quantization is supported".into(),
                ));
            }
            let cutoff = weight.unwrap_or(g.cutoff);
            let (_, s) = load(&file, cutoff)?;
            let d = DoubleSpace::new(s.alg.clone(), DoubleKind::Odd);
            let pb = Arc::new(d.poisson());
            let s0 = d.double_odd(&s.m)?;
            let delta = Derivation::zero(pb.space.clone(), Parity::Odd, cutoff);
            match quantum_lift(pb, delta, cutoff, s0, genus)? {
                QuantumLift::Lifted(q) => {
                    let mut lines = Vec::new();
                    let mut arr = Vec::new();
                    for (i, sg) in q.genus.iter().enumerate() {
                        lines.push(format!("S_{i} = {sg}"));
                        arr.push(json!(sg.to_string()));
                    }
                    emit(
                        g.format,
                        format!("quantum lift to genus {genus}:\n{}", lines.join("\n")),
                        json!({"command": "quantum-lift", "lifts": true, "genus": genus,
                               "series": arr}),
                    );
                    Ok(0)
                }
                QuantumLift::Obstructed { genus, witness } => {
                    emit(
                        g.format,
                        format!("obstructed at genus {genus}: witness {witness}"),
                        json!({"command": "quantum-lift", "lifts": false,
                               "obstructed_genus": genus, "witness": witness.to_string()}),
                    );
                    Ok(1)
                }
            }
        }
        Command::Tensor { file, frobenius: name } => {
            let (_, s) = load(&file, g.cutoff)?;
            let a = frobenius(&name).map_err(|_| {
                linfty::Error::Input(format!(
                    "unknown Frobenius algebra `{name}` (catalog: {})",
                    frobenius_names().join(", ")
                ))
            })?;
            let t = tensor_linfty(&a, &s)?;
            let mc = t.check_mc()?;
            let strict = t.m.divergence().is_zero();
            emit(
                g.format,
                format!(
                    "tensor with {name}: dim {}, structure equation {}, divergence {}",
                    t.complex.space.dim(),
                    if mc { "holds" } else { "fails" },
                    if strict { "zero" } else { "nonzero" }
                ),
                json!({"command": "tensor", "frobenius": name, "dim": t.complex.space.dim(),
                       "mc_holds": mc, "strictly_unimodular": strict}),
            );
            Ok(if mc { 0 } else { 1 })
        }
        Command::CeCohomology { file } => {
            let (_, s) = load(&file, g.cutoff)?;
            let (dim_total, rank, kernel, h) = s.ce().cohomology()?;
            emit(
                g.format,
                format!(
                    "cochain block: dim {dim_total}, rank {rank}, kernel {kernel}, cohomology {h}"
                ),
                json!({"command": "ce-cohomology", "dim": dim_total, "rank": rank,
                       "kernel": kernel, "cohomology": h}),
            );
            Ok(0)
        }
        Command::GaugeApply { file } => {
            let (_, s) = load(&file, g.cutoff)?;
            let dgla = DerDgla::new(s.alg.clone(), g.cutoff, s.delta.clone())?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let y = sampling::random_derivation(
                &mut rng,
                &s.alg,
                g.cutoff,
                Some(Parity::Even),
                2,
                3,
            );
            let moved = gauge_apply(&dgla, &y, &s.m)?;
            let ok = is_mc(&dgla, &moved)?;
            emit(
                g.format,
                format!(
                    "gauged structure: {}\nequation after gauge: {}",
                    moved.display(),
                    if ok { "holds" } else { "fails" }
                ),
                json!({"command": "gauge-apply", "seed": g.seed, "mc_holds": ok,
                       "gauged": moved.display()}),
            );
            Ok(if ok { 0 } else { 1 })
        }
        Command::SdrCheck { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let mut all_ok = true;
            let mut reports = Vec::new();
            let mut lines = Vec::new();
            for k in 0..samples {
                let data = sdr::samples::perturbed(&mut rng, k);
                let before = data.check()?;
                let after = data.repair()?.check()?;
                all_ok &= after.all();
                lines.push(format!(
                    "sample {k}: before {}, after repair {}",
                    if before.all() { "full" } else { "retraction only" },
                    if after.all() { "full" } else { "STILL BROKEN" }
                ));
                reports.push(json!({"sample": k, "before": before.lines(), "after": after.lines()}));
            }
            emit(
                g.format,
                lines.join("\n"),
                json!({"command": "sdr-check", "samples": samples, "all_repaired": all_ok,
                       "reports": reports}),
            );
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::VerifyPaper => {
            let results = verify::run_all(g.seed);
            let ok = results.iter().all(|c| c.passed);
            match g.format {
                Format::Text => {
                    for c in &results {
                        println!("{}", c.line());
                    }
                    println!("overall: {}", if ok { "pass" } else { "FAIL" });
                }
                Format::Json => {
                    let arr: Vec<_> = results.iter().map(|c| c.json()).collect();
                    print!(
                        "{}",
                        canonical_json(&json!({"command": "verify-paper",
                                               "overall": if ok {"pass"} else {"fail"},
                                               "criteria": arr}))
                    );
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
