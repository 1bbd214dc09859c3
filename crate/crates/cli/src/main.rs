mod args;
mod output;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Grid, Target};
use polybary::decomposition::{check_certificate, decompose, is_prime, Certificate, SolverConfig};
use polybary::instances::random_polytope;
use polybary::numeric::{parse_rational, parse_vector, RVector};
use polybary::polytope::io::PolytopeFile;
use polybary::polytope::HPolytope;
use polybary::proof::{decompose_via_proof, run_proof, ProofConfig};
use polybary::verifier::{
    falsify_mixed_skeleton_simplex, falsify_weighted_prism, verify_minkowski, GridSearch, Sampler, Verdict,
    VerificationReport,
};
use polybary::Error;

const USAGE: u8 = 64;
const INPUT: u8 = 65;
const INTERNAL: u8 = 70;

enum Failure {
    Usage(String),
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_)
            | Error::NonGeneric
            | Error::PerturbationTooLarge(_)
            | Error::BudgetExhausted(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    // Verify and falsify commands report internal failures as status 1.
    let report_command = matches!(
        cli.command,
        Command::VerifyMinkowski { .. } | Command::FalsifyPrism { .. } | Command::FalsifySimplex { .. }
    );
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(INPUT)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(if report_command { 1 } else { INTERNAL })
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(threads) = cli.shared.threads {
        if threads == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Internal(e.to_string()))?;
    }
    let seed = cli.shared.seed;
    let out = cli.shared.out.as_deref();
    match cli.command {
        Command::Decompose { target, via_proof } => {
            let (p, x, n, d) = load_target(&target)?;
            let dec = if via_proof {
                if !is_prime(n) {
                    return Err(Failure::Usage(format!("--via-proof needs prime n, got {n}")));
                }
                decompose_via_proof(&p, &x, n, d, seed)?
            } else {
                decompose(&p, &x, n, &SolverConfig::default())?
            };
            write(out, &dec.to_certificate().to_json())?;
            eprintln!("decomposed into {} points of the {d}-skeleton", dec.len());
            Ok(0)
        }
        Command::VerifyMinkowski {
            polytope,
            n,
            d,
            samples,
        } => {
            let p = load_polytope(&polytope)?;
            let d = skeleton_dim(&p, n, d)?;
            let report = verify_minkowski(&p, n, d, &Sampler::new(seed, samples), &SolverConfig::default())?;
            finish(out, &report)
        }
        Command::FalsifyPrism { eps, grid } => {
            let eps = parse_rational(&eps)?;
            finish(out, &falsify_weighted_prism(&eps, &search(&grid))?)
        }
        Command::FalsifySimplex {
            a,
            b,
            d,
            samples,
            grid,
        } => {
            let report =
                falsify_mixed_skeleton_simplex(a, b, d, &Sampler::new(seed, samples), &search(&grid))?;
            finish(out, &report)
        }
        Command::Trace { target } => {
            if !is_prime(target.n) {
                return Err(Failure::Usage(format!(
                    "trace needs prime n, got {}; use decompose for composite n",
                    target.n
                )));
            }
            let (p, x, n, d) = load_target(&target)?;
            let cfg = ProofConfig {
                seed,
                ..ProofConfig::default()
            };
            let run = run_proof(&p, &x, n, d, &cfg)?;
            write(out, &run.trace_jsonl())?;
            eprintln!("proof finished after {} attempt(s)", run.attempts);
            Ok(0)
        }
        Command::Gen {
            dim,
            facets,
            vertices,
        } => {
            let p = random_polytope(seed, dim, facets)?;
            write(out, &PolytopeFile::from_polytope(&p, vertices).to_json())?;
            Ok(0)
        }
        Command::CheckCert { polytope, cert } => {
            let p = load_polytope(&polytope)?;
            let cert = Certificate::from_json(&read(&cert)?)?;
            let check = check_certificate(&p, &cert)?;
            let text = format!(
                "points: {}\nface dims: {:?}\nexact: {}\n",
                check.points, check.face_dims, check.exact
            );
            write(out, &text)?;
            Ok(0)
        }
    }
}

fn search(grid: &Grid) -> GridSearch {
    GridSearch {
        max_level: grid.max_level,
        per_level: grid.per_level,
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    output::emit(path, text).map_err(|e| Failure::Internal(format!("writing output: {e}")))
}

fn load_polytope(path: &Path) -> Result<HPolytope, Failure> {
    Ok(PolytopeFile::from_json(&read(path)?)?.to_polytope()?)
}

fn skeleton_dim(p: &HPolytope, n: usize, d: Option<usize>) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let implied = p.dim() / n;
    match d {
        _ if !p.dim().is_multiple_of(n) => Err(Failure::Input(format!(
            "polytope dimension {} is not divisible by n = {n}",
            p.dim()
        ))),
        Some(d) if d != implied => Err(Failure::Input(format!(
            "--d {d} does not match dim / n = {} / {n} = {implied}",
            p.dim()
        ))),
        _ => Ok(implied),
    }
}

fn load_target(t: &Target) -> Result<(HPolytope, RVector, usize, usize), Failure> {
    let p = load_polytope(&t.polytope)?;
    let d = skeleton_dim(&p, t.n, t.d)?;
    let x = parse_vector(&t.point)?;
    if x.len() != p.dim() {
        return Err(Failure::Input(format!(
            "point has {} coordinates, polytope dimension is {}",
            x.len(),
            p.dim()
        )));
    }
    Ok((p, x, t.n, d))
}

/// Writes the report and maps its verdict to an exit status.
fn finish(out: Option<&Path>, report: &VerificationReport) -> Outcome {
    write(out, &(report.to_json() + "\n"))?;
    eprintln!(
        "{}: {:?}, {}/{} samples, {:.2?}",
        report.instance, report.verdict, report.samples_succeeded, report.samples_attempted, report.elapsed
    );
    match report.verdict {
        Verdict::Verified | Verdict::NoCounterexampleFound => Ok(0),
        Verdict::Counterexample => Ok(2),
        Verdict::Failed => Ok(1),
    }
}
