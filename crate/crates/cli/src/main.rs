use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use loggp_cli::commands::{self, ProfileArgs, SweepArgs};
use loggp_cli::config::{resolve_output_dir, RunConfig};
use loggp_cli::error::exit;
use loggp_cli::report::write_json;
use loggp_cli::verify::{run_suite, Mutation, Tier};
use loggp_cli::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "loggp", version, about = "Numerical lab for the logarithmic Gross-Pitaevskii equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a traveling wave (the black soliton for c = 0) and write CSV and JSON.
    Profile {
        #[arg(long)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 40.0)]
        length: f64,
        #[arg(long, default_value_t = 2001)]
        n: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta0: f64,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "profile")]
        name: String,
    },
    /// Run the evolution described by a TOML config file.
    Evolve {
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Tabulate critical points and wave diagnostics over a range of velocities.
    Sweep {
        #[arg(long)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        c_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        c_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 40.0)]
        length: f64,
        #[arg(long, default_value_t = 2001)]
        n: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "sweep")]
        name: String,
    },
    /// Run the verification suite and write a JSON report.
    Verify {
        /// Reduced resolutions and run lengths.
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Inject a deliberate fault to check that the suite catches it.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "verification")]
        name: String,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Profile { lambda, c, length, n, theta0, out_dir, name } => {
            let args = ProfileArgs { lambda, c, length, n, theta0, out_dir: resolve_output_dir(out_dir.as_deref(), None), name };
            let report = commands::profile(&args)?;
            println!(
                "profile: y0 = {}, residual = {:.3e}, energy = {:.6}, winding = {:.6}",
                report.y0.map_or("-".to_string(), |v| format!("{v:.12}")),
                report.stationary_residual,
                report.energy.total_loggp,
                report.phase_winding
            );
        }
        Command::Evolve { config, out_dir } => {
            let cfg = RunConfig::load(&config)?;
            let dir = resolve_output_dir(out_dir.as_deref(), cfg.output.dir.as_deref());
            let report = commands::evolve(&cfg, &dir)?;
            println!(
                "evolve: {} steps, energy drift = {:.3e}, deviation = {:.3e}{}",
                report.steps,
                report.energy_drift,
                report.deviation,
                report.translate_error.map_or(String::new(), |e| format!(", translate error = {e:.3e}"))
            );
        }
        Command::Sweep { lambda, c_min, c_max, steps, length, n, out_dir, name } => {
            let args = SweepArgs {
                lambda,
                c_min,
                c_max,
                steps,
                length,
                n,
                out_dir: resolve_output_dir(out_dir.as_deref(), None),
                name,
            };
            let (path, rows) = commands::sweep(&args)?;
            println!("sweep: {} rows written to {}", rows.len(), path.display());
        }
        Command::Verify { quick, seed, mutate, out_dir, name } => {
            let tier = if quick { Tier::quick() } else { Tier::full() };
            let report = run_suite(&tier, seed, mutate);
            let dir = resolve_output_dir(out_dir.as_deref(), None);
            std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
            write_json(&dir.join(format!("{name}.json")), &report)?;
            for check in &report.checks {
                println!(
                    "{} {:<34} {:>12.4e} {} {:e}",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.metric,
                    serde_json::to_value(check.relation).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                    check.tolerance
                );
            }
            println!("verify: {} passed, {} failed", report.passed, report.failed);
            if report.failed > 0 {
                return Err(CliError::Verification(report.failing()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
