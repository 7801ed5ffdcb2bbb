//! Command line front end.
//!
//! Exit codes: 0 success, 2 parse error, 3 precondition failure,
//! 4 mathematical violation.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use semirad::inequalities::{check_identity, evaluate_chain, ChainId, IdentityId, Sign};
use semirad::report::{MatrixFile, RankPolicy, TrialConfig, Witness};
use semirad::verify::{replay_witness, run_verify, sharpness, CheckId};
use semirad::{ComplexMatrix, Error, SemiHilbertContext};

const TOL_ENV: &str = "SEMIRAD_CMP_TOL";

#[derive(Parser)]
#[command(name = "semirad", about = "Weighted operator seminorm and numerical radius toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one quantity, chain, or identity on explicit matrices.
    Compute {
        /// Weight matrix file (Hermitian PSD, JSON).
        #[arg(long)]
        weight: PathBuf,
        /// Operator matrix file (JSON).
        #[arg(long)]
        op: PathBuf,
        /// Second operator, for pairwise chains and identities.
        #[arg(long)]
        op2: Option<PathBuf>,
        /// seminorm | omega | spectral_radius | adjoint | re | im | gamma,
        /// or any chain/identity id.
        #[arg(long)]
        quantity: String,
        /// Comparison tolerance override.
        #[arg(long, allow_negative_numbers = true)]
        tol: Option<f64>,
        /// Sign for signed chains: + or -.
        #[arg(long, default_value = "+")]
        sign: String,
    },
    /// Run the batch trial suite and write a JSON report.
    Verify {
        /// Comma-separated chain/identity ids, or "all".
        #[arg(long, default_value = "all")]
        chains: String,
        /// Comma-separated dimensions.
        #[arg(long, default_value = "2,3,4,5,6")]
        dims: String,
        /// full | deficient | mixed.
        #[arg(long, default_value = "mixed")]
        ranks: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Report output path.
        #[arg(long)]
        out: PathBuf,
        /// Comparison tolerance override.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Re-evaluate a saved witness file.
    Replay {
        /// Witness JSON (as embedded in a report's worst_witness).
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Search for near-equality instances of a chain.
    Sharpness {
        #[arg(long)]
        chain: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Optional output path; stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::Io(_) | Error::NonFinite { .. } | Error::NotSquare { .. } => 2,
        Error::Dimension(_)
        | Error::NotPsd { .. }
        | Error::ZeroWeight
        | Error::NotAAdjointable { .. }
        | Error::NotABounded { .. }
        | Error::Precondition(_)
        | Error::DegenerateContext
        | Error::Generation(_) => 3,
    }
}

fn cmp_tol(flag: Option<f64>) -> Result<f64, Error> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOL_ENV) {
        Ok(text) => text
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("{TOL_ENV}={text:?} is not a number"))),
        Err(_) => Ok(semirad::semihilbert::DEFAULT_CMP_TOL),
    }
}

fn print_matrix(label: &str, m: &ComplexMatrix) {
    let file = MatrixFile::from_matrix(m);
    let json = serde_json::json!({ "quantity": label, "matrix": file });
    println!("{}", serde_json::to_string_pretty(&json).unwrap());
}

fn print_scalar(label: &str, v: f64) {
    let json = serde_json::json!({ "quantity": label, "value": v });
    println!("{}", serde_json::to_string_pretty(&json).unwrap());
}

/// Returns Ok(true) when the evaluated statement held.
fn run_compute(
    weight: &PathBuf,
    op: &PathBuf,
    op2: Option<&PathBuf>,
    quantity: &str,
    tol: Option<f64>,
    sign: &str,
) -> Result<bool, Error> {
    let a = MatrixFile::load(weight)?.to_matrix()?;
    let t = MatrixFile::load(op)?.to_matrix()?;
    let s = op2.map(|p| MatrixFile::load(p)?.to_matrix()).transpose()?;
    let ctx = SemiHilbertContext::new(a, semirad::eig::DEFAULT_RANK_TOL, cmp_tol(tol)?)?;
    let sign: Sign = sign.parse()?;

    match quantity {
        "seminorm" | "norm" => print_scalar(quantity, ctx.a_op_seminorm(&t)?),
        "omega" | "numerical_radius" => print_scalar(quantity, ctx.a_numerical_radius(&t)?),
        "spectral_radius" => print_scalar(quantity, ctx.a_spectral_radius(&t)?),
        "gamma" => print_scalar(quantity, semirad::inequalities::gamma(&ctx, &t)?),
        "adjoint" => print_matrix(quantity, &ctx.a_adjoint(&t)?),
        "re" => print_matrix(quantity, &ctx.re_a(&t)?),
        "im" => print_matrix(quantity, &ctx.im_a(&t)?),
        other => {
            if let Ok(chain) = other.parse::<ChainId>() {
                if chain.needs_pair() && s.is_none() {
                    return Err(Error::Precondition(format!(
                        "{other} takes two operators; pass --op2"
                    )));
                }
                let report = evaluate_chain(chain, &ctx, &t, s.as_ref(), sign)?;
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
                return Ok(report.passed);
            }
            if let Ok(identity) = other.parse::<IdentityId>() {
                if identity.needs_pair() && s.is_none() {
                    return Err(Error::Precondition(format!(
                        "{other} takes two operators; pass --op2"
                    )));
                }
                let report = check_identity(identity, &ctx, &t, s.as_ref(), None)?;
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
                return Ok(report.passed);
            }
            return Err(Error::Parse(format!("unknown quantity {other:?}")));
        }
    }
    Ok(true)
}

fn parse_ids(text: &str) -> Result<Vec<String>, Error> {
    if text == "all" {
        return Ok(ChainId::ALL
            .iter()
            .map(|c| c.as_str().to_string())
            .chain(IdentityId::ALL.iter().map(|i| i.as_str().to_string()))
            .collect());
    }
    let ids: Vec<String> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    for id in &ids {
        id.parse::<CheckId>()?;
    }
    Ok(ids)
}

fn parse_dims(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension {s:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Compute {
            weight,
            op,
            op2,
            quantity,
            tol,
            sign,
        } => run_compute(&weight, &op, op2.as_ref(), &quantity, tol, &sign),
        Command::Verify {
            chains,
            dims,
            ranks,
            trials,
            seed,
            out,
            tol,
        } => {
            let config = TrialConfig {
                ids: parse_ids(&chains)?,
                dims: parse_dims(&dims)?,
                rank_policy: ranks.parse::<RankPolicy>()?,
                trials,
                master_seed: seed,
                rank_tol: semirad::eig::DEFAULT_RANK_TOL,
                cmp_tol: cmp_tol(tol)?,
            };
            let report = run_verify(&config)?;
            report.save(&out)?;
            for r in &report.results {
                println!(
                    "{}: {}/{} passed, min margin {:.3e} ({:.2}s)",
                    r.id, r.passes, r.trials, r.min_margin, r.wall_time_secs
                );
            }
            println!(
                "overall: {}",
                if report.all_passed { "PASS" } else { "FAIL" }
            );
            Ok(report.all_passed)
        }
        Command::Replay { witness, tol } => {
            let text = std::fs::read_to_string(&witness)?;
            let w: Witness = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", witness.display())))?;
            let (margin, passed) =
                replay_witness(&w, semirad::eig::DEFAULT_RANK_TOL, cmp_tol(tol)?)?;
            println!(
                "{}: margin {:.6e}, {}",
                w.id,
                margin,
                if passed { "PASS" } else { "FAIL" }
            );
            Ok(passed)
        }
        Command::Sharpness {
            chain,
            dim,
            restarts,
            seed,
            out,
        } => {
            if dim < 2 {
                return Err(Error::Precondition("dim must be >= 2".into()));
            }
            let chain: ChainId = chain.parse()?;
            let report = sharpness(chain, dim, restarts, seed)?;
            let json = serde_json::to_string_pretty(&report).unwrap();
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
