use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spnc::simkit::{
    self, analytic_points, run_sweep_with_progress, ConfigOverrides, SweepConfig, SweepPoint,
};
use spnc::Error;

#[derive(Parser)]
#[command(
    name = "spnc",
    version,
    about = "Correlated two-way relay PNC simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo SNR sweep.
    Sweep(SweepArgs),
    /// Emit closed-form BLER curves without simulating.
    Analytic(SweepArgs),
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// scpnc, rcpnc or conventional.
    #[arg(long)]
    scheme: Option<String>,
    /// Code as n,k: 15,5 / 15,7 / 15,11.
    #[arg(long)]
    code: Option<String>,
    /// SNR grid in dB as start:stop:step or a comma list.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    min_trials: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    /// Relative 95% CI half-width at which a point stops early.
    #[arg(long)]
    target_ci: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
}

impl SweepArgs {
    fn resolve(&self) -> Result<SweepConfig, Error> {
        let file = self
            .config
            .as_deref()
            .map(ConfigOverrides::from_file)
            .transpose()?;
        let mut flags = ConfigOverrides::default();
        flags.scheme = self.scheme.clone();
        flags.min_trials = self.min_trials;
        flags.max_trials = self.max_trials;
        flags.target_relative_ci = self.target_ci;
        flags.seed = self.seed;
        flags.out = self.out.clone();
        flags.format = self.format.clone();
        flags.workers = self.workers;
        if let Some(code) = &self.code {
            flags.set_code(code);
        }
        if let Some(grid) = &self.snr_db {
            flags.set_snr_db(grid);
        }
        flags.resolve(file.as_ref())
    }
}

fn write_output(points: &[SweepPoint], config: &SweepConfig) -> Result<(), Error> {
    match &config.output_path {
        Some(path) => simkit::emit(points, config.output_format, path),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            simkit::write_points(points, config.output_format, &mut lock, "<stdout>".as_ref())?;
            lock.flush().map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

fn sweep(args: &SweepArgs) -> Result<(), Error> {
    let config = args.resolve()?;
    eprintln!(
        "sweep: {} ({},{}) over {} SNR points, seed {}",
        config.scheme,
        config.code.n,
        config.code.k,
        config.snr_db_grid.len(),
        config.master_seed
    );
    let points = run_sweep_with_progress(&config, |p| {
        eprintln!(
            "  {:>6.2} dB  trials {:>9}  bler {:.4e}  exact {:.4e}  throughput {:.4}",
            p.snr_db,
            p.trials,
            p.bler_sim.unwrap_or(f64::NAN),
            p.bler_exact,
            p.throughput.unwrap_or(f64::NAN)
        );
    })?;
    write_output(&points, &config)
}

fn analytic(args: &SweepArgs) -> Result<(), Error> {
    let config = args.resolve()?;
    let points = analytic_points(
        config.scheme,
        config.code.n,
        config.code.k,
        &config.snr_db_grid,
    )?;
    write_output(&points, &config)
}

fn selftest() -> bool {
    let checks = simkit::selftest::run_all();
    for c in &checks {
        eprintln!(
            "[{}] {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    checks.iter().all(|c| c.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => sweep(args),
        Command::Analytic(args) => analytic(args),
        Command::Selftest => {
            return if selftest() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
