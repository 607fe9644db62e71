use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parityq::cli::{run, JobConfig, JobKind};

#[derive(Parser)]
#[command(
    name = "parityq",
    version,
    about = "Transmon + parity-protected qubit: spectra, effective Hamiltonians, gates"
)]
struct Args {
    #[command(subcommand)]
    job: Job,
}

#[derive(clap::Args)]
struct Common {
    /// TOML job configuration
    #[arg(long)]
    config: PathBuf,
    /// Output file (CSV for spectrum and sw, JSON for gate)
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the number of cores
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Job {
    /// Energy levels over a parameter sweep
    Spectrum(Common),
    /// Numerical and analytic effective couplings over a sweep
    Sw(Common),
    /// Simulate a gate
    Gate(Common),
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (kind, common) = match args.job {
        Job::Spectrum(c) => (JobKind::Spectrum, c),
        Job::Sw(c) => (JobKind::Sw, c),
        Job::Gate(c) => (JobKind::Gate, c),
    };
    if let Some(n) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = JobConfig::load(&common.config).and_then(|cfg| run(kind, &cfg, &common.out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::FAILURE
        }
    }
}
