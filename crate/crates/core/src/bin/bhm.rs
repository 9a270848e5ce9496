use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bhm::classical::{
    bruteforce_optimal_with_budget, classical_run, DEFAULT_ENUMERATION_BUDGET, DEFAULT_MAP_BUDGET,
};
use bhm::combinatorics::gamma_report;
use bhm::harness::{
    emit, fourier_suite, generate_instances, quantum_run, run_separation_sweep,
    run_verification_suite, write_bytes, Format, SweepConfig, VerifyConfig,
};
use bhm::rng::from_seed;
use bhm::Error;

const EXIT_VERIFICATION_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bhm",
    version,
    about = "Boolean Hidden Matching protocol simulator and identity checker"
)]
struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample instances from the hard distribution, one JSON record per line.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Run the quantum protocol on fresh instances; one row per trial.
    QuantumRun {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Monte-Carlo success of the subset protocol under the hard distribution.
    ClassicalRun {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        subset_size: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Exact optimum over every deterministic Alice map at tiny n.
    Bruteforce {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bits: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        enumeration_budget: u128,
        #[arg(long, default_value_t = DEFAULT_MAP_BUDGET)]
        map_budget: u128,
    },
    /// Fourier identity suite with a JSON pass/fail report.
    FourierVerify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        cases: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Exact γ_k, its bound, and optionally a Monte-Carlo estimate.
    Gamma {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Monte-Carlo trials.
        #[arg(long)]
        mc: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Quantum versus classical success over a doubling grid of n.
    Sweep {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        reps: u64,
        /// Classical subset size; defaults to the quantum message cost.
        #[arg(long)]
        subset_size: Option<usize>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Every identity and protocol check; nonzero exit on any failure.
    VerifyAll {
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn json_line<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec(value).expect("report serializes");
    out.push(b'\n');
    out
}

fn run(cli: Cli) -> bhm::Result<bool> {
    let out = cli.output.as_deref();
    match cli.command {
        Command::Gen { n, count, seed } => {
            let bytes: Vec<u8> = generate_instances(n, count, seed)?
                .iter()
                .flat_map(json_line)
                .collect();
            write_bytes(&bytes, out)?;
        }
        Command::QuantumRun {
            n,
            reps,
            trials,
            seed,
            format,
        } => {
            emit(&quantum_run(n, reps, trials, seed)?, format, out)?;
        }
        Command::ClassicalRun {
            n,
            subset_size,
            trials,
            seed,
        } => {
            write_bytes(
                &json_line(&classical_run(n, subset_size, trials, seed)?),
                out,
            )?;
        }
        Command::Bruteforce {
            n,
            bits,
            enumeration_budget,
            map_budget,
        } => {
            let result = bruteforce_optimal_with_budget(n, bits, enumeration_budget, map_budget)?;
            write_bytes(&json_line(&result.report()), out)?;
        }
        Command::FourierVerify { m, cases, seed } => {
            let report = fourier_suite(&VerifyConfig {
                m,
                cases,
                seed,
                fault: None,
            })?;
            write_bytes(&json_line(&report), out)?;
            return Ok(report.passed);
        }
        Command::Gamma { n, k, mc, seed } => {
            let seed = match (mc, seed) {
                (Some(_), None) => {
                    return Err(Error::InvalidArgument("--mc requires --seed".into()))
                }
                (_, s) => s.unwrap_or(0),
            };
            write_bytes(
                &json_line(&gamma_report(n, k, mc, &mut from_seed(seed))?),
                out,
            )?;
        }
        Command::Sweep {
            n_min,
            n_max,
            reps,
            subset_size,
            trials,
            seed,
            format,
        } => {
            let config = SweepConfig {
                n_min,
                n_max,
                reps,
                subset_size,
                trials,
                seed,
            };
            emit(&run_separation_sweep(&config)?, format, out)?;
        }
        Command::VerifyAll { m, cases, seed } => {
            let report = run_verification_suite(&VerifyConfig {
                m,
                cases,
                seed,
                fault: None,
            })?;
            write_bytes(&json_line(&report), out)?;
            return Ok(report.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(EXIT_VERIFICATION_FAILED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget { .. } => EXIT_BUDGET,
                Error::Io { .. } => EXIT_IO,
                _ => EXIT_CONFIG,
            })
        }
    }
}
