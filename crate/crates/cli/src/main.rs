use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use compound_kit::bench::{rows_to_csv, run_bench};
use compound_kit::io::{format_matrix, parse_matrix, write_matrix, MatrixFormat};
use compound_kit::testkit::{all_fixtures, run_fixture};
use compound_kit::{
    adjugate, adjugate_via_compound, compound, inverse_compound, Error, ErrorClass, Matrix, Recovery, RecoveryOutcome,
    TolerancePolicy,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "compound-kit", version, about = "Multiplicative compound matrices and their inverse")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the k-th compound of a matrix.
    Compound {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Output file (CSV, or JSON by extension); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover A from M = C_k(A), where A is n x m.
    Inverse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Seed for the preprocessing transform.
        #[arg(long, env = "COMPOUND_KIT_SEED")]
        seed: Option<u64>,
        /// For even k, make the first non-negligible entry positive.
        #[arg(long)]
        canonical_sign: bool,
        #[arg(long)]
        json_report: Option<PathBuf>,
        /// Output file; a rank-one family is written as three files with
        /// `.U`, `.S`, `.V` inserted before the extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print |C_k(A) - M| / |M|; exit 0 iff within tolerance.
    Verify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Adjugate by cofactors, or through the (n-1)-th compound.
    Adjugate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        via_compound: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in worked examples.
    Fixtures,
    /// Time the recovery stages on random full-rank square inputs.
    Bench {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, env = "COMPOUND_KIT_SEED")]
        seed: Option<u64>,
    },
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::NotDecomposable => 1,
        ErrorClass::Numerical => 2,
        ErrorClass::Usage => 3,
    }
}

fn policy_for(seed: Option<u64>) -> TolerancePolicy {
    seed.map_or_else(TolerancePolicy::default, TolerancePolicy::with_seed)
}

fn emit(x: &Matrix, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => write_matrix(p, x),
        None => {
            print!("{}", format_matrix(x, MatrixFormat::Csv));
            Ok(())
        }
    }
}

/// `fam.csv` -> `fam.U.csv`; `fam` -> `fam.U`.
fn with_part(path: &Path, part: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{part}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{part}"),
    };
    path.with_file_name(name)
}

fn report_json(rec: &Recovery) -> serde_json::Value {
    let r = &rec.report;
    let family = match &rec.outcome {
        RecoveryOutcome::UniqueUpToSign { .. } => serde_json::Value::Null,
        RecoveryOutcome::RankOneFamily(_) => json!("U*S*T*V^T with det(T) = 1"),
        RecoveryOutcome::RankDeficientFamily { k, .. } => json!(format!("every matrix of rank < {k}")),
    };
    json!({
        "outcome": rec.outcome.tag(),
        "sign_ambiguous": rec.outcome.sign_ambiguous(),
        "residual": r.reconstruction_residual,
        "inferred_r": r.inferred_r,
        "resamples": r.resample_count,
        "timings_ms": r.stage_timings,
        "family": family,
        "preprocessing_used": r.preprocessing_used,
        "singular_value_residual": r.singular_value_residual,
        "exhaustive_sign_search": r.exhaustive_sign_search,
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Compound { input, k, out } => {
            let x = parse_matrix(&input)?;
            emit(&compound(&x, k)?, out.as_deref())?;
        }
        Command::Inverse {
            input,
            n,
            m,
            k,
            seed,
            canonical_sign,
            json_report,
            out,
        } => {
            let mat = parse_matrix(&input)?;
            let policy = TolerancePolicy {
                canonical_sign,
                ..policy_for(seed)
            };
            let rec = inverse_compound(&mat, n, m, k, &policy)?;
            match (&rec.outcome, out.as_deref()) {
                (RecoveryOutcome::RankOneFamily(fam), Some(base)) => {
                    write_matrix(&with_part(base, "U"), &fam.u)?;
                    write_matrix(&with_part(base, "S"), &fam.sigma)?;
                    write_matrix(&with_part(base, "V"), &fam.v)?;
                }
                (RecoveryOutcome::RankOneFamily(fam), None) => {
                    for (name, part) in [("U", &fam.u), ("S", &fam.sigma), ("V", &fam.v)] {
                        println!("# {name}");
                        emit(part, None)?;
                    }
                }
                (outcome, out) => emit(&outcome.representative(), out)?,
            }
            let report = serde_json::to_string_pretty(&report_json(&rec)).expect("report serializes");
            match json_report {
                Some(p) => write_text(&p, &(report + "\n"))?,
                None => eprintln!("{report}"),
            }
        }
        Command::Verify { a, m, k } => {
            let a = parse_matrix(&a)?;
            let m = parse_matrix(&m)?;
            let c = compound(&a, k)?;
            if c.shape() != m.shape() {
                return Err(Error::InvalidArgument(format!(
                    "C_{k}(A) is {}x{} but M is {}x{}",
                    c.nrows(),
                    c.ncols(),
                    m.nrows(),
                    m.ncols()
                )));
            }
            let scale = m.norm();
            let diff = (&c - &m).norm();
            let residual = if scale > 0.0 { diff / scale } else { diff };
            println!("{residual:e}");
            let tol = TolerancePolicy::default().residual_rtol;
            if residual > tol {
                return Err(Error::VerificationFailed { residual, tolerance: tol });
            }
        }
        Command::Adjugate {
            input,
            via_compound,
            out,
        } => {
            let x = parse_matrix(&input)?;
            let adj = if via_compound {
                adjugate_via_compound(&x)?
            } else {
                adjugate(&x)?
            };
            emit(&adj, out.as_deref())?;
        }
        Command::Fixtures => {
            let mut failed = 0;
            println!("{:<42} {:<10} {:>12} {:>10}  result", "fixture", "source", "discrepancy", "tolerance");
            for f in all_fixtures() {
                let rep = run_fixture(&f);
                let verdict = match (&rep.error, rep.passed) {
                    (Some(e), _) => format!("FAIL ({e})"),
                    (None, true) => "pass".to_string(),
                    (None, false) => "FAIL".to_string(),
                };
                failed += usize::from(!rep.passed);
                println!(
                    "{:<42} {:<10} {:>12.3e} {:>10.1e}  {verdict}",
                    rep.name, rep.provenance, rep.discrepancy, rep.tolerance
                );
            }
            if failed > 0 {
                eprintln!("error[fixtures]: {failed} fixture(s) failed");
                return Ok(1);
            }
        }
        Command::Bench {
            max_n,
            k,
            reps,
            csv,
            seed,
        } => {
            let rows = run_bench(max_n, k, reps, &policy_for(seed))?;
            let table = rows_to_csv(&rows);
            match csv {
                Some(p) => write_text(&p, &table)?,
                None => print!("{table}"),
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.tag());
            ExitCode::from(exit_code(e.class()))
        }
    }
}
