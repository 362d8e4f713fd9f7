//! `sqg` — pseudo-spectral solver for the inviscid alpha-regularized SQG
//! equations with finite-time blow-up diagnostics.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sqg_cli::config::{RunConfig, SweepSpec};
use sqg_cli::error::AppError;
use sqg_cli::ic::IcSpec;
use sqg_cli::runner::execute_run;
use sqg_cli::snapshot::Snapshot;
use sqg_cli::sweep::{run_sweep, verdict_line, write_sweep_result};
use sqg_cli::{ic, plot};

use sqg_core::diagnostics::{convergence_metric, spectral_pad};
use sqg_core::{Grid, SpectralField};

#[derive(Parser)]
#[command(
    name = "sqg",
    about = "Inviscid alpha-regularized surface quasi-geostrophic solver",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a single configuration and write diagnostics.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run an alpha sweep and print the blow-up verdict.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compare two snapshots with the strong-convergence metric.
    Diagnose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Weight of the gradient term in the metric (default 0).
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Emit an initial-condition snapshot at t = 0.
    Ic {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit gnuplot scripts for a diagnostics CSV or a sweep directory.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap would exit(2) on usage errors; malformed input is exit 1
            // here (2 is reserved for numerical overflow).
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sqg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_config(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path).map_err(|e| AppError::Io(path.to_path_buf(), e))
}

fn dispatch(cmd: Command) -> Result<(), AppError> {
    match cmd {
        Command::Run { config } => {
            let cfg = RunConfig::parse(&read_config(&config)?)?;
            let outcome = execute_run(&cfg)?;
            let last = outcome.records.last().expect("at least the initial record");
            println!(
                "run complete: t={} steps_recorded={} energy={} linf_max={}",
                last.t,
                outcome.records.len(),
                last.energy_modified,
                last.linf_max
            );
            println!("diagnostics: {}", outcome.csv_path.display());
            Ok(())
        }
        Command::Sweep { config } => {
            let spec = SweepSpec::parse(&read_config(&config)?)?;
            let started = std::time::Instant::now();
            let outcome = run_sweep(&spec)?;
            let wall = started.elapsed().as_secs_f64();
            write_sweep_result(&spec.output_dir, &spec, &outcome, wall)?;
            println!("{}", verdict_line(&outcome));
            Ok(())
        }
        Command::Diagnose { a, b, alpha } => {
            let alpha = alpha.unwrap_or(0.0);
            let snap_a = Snapshot::read(&a)?;
            let snap_b = Snapshot::read(&b)?;
            let fa = spectral_of(&snap_a)?;
            let fb = spectral_of(&snap_b)?;
            let n_common = fa.grid().n().max(fb.grid().n());
            let fa = spectral_pad(&fa, n_common)?;
            let fb = spectral_pad(&fb, n_common)?;
            print_norms("a", &a, &snap_a, &fa);
            print_norms("b", &b, &snap_b, &fb);
            let metric = convergence_metric(&fa, &fb, alpha)?;
            println!("metric={metric}");
            Ok(())
        }
        Command::Ic { name, n, seed, out } => {
            let spec = IcSpec::from_name(&name, None, None, seed, None)?;
            let grid = Grid::new(n)?;
            let field = ic::make_initial_condition(&spec, &grid)?;
            let snap = Snapshot { n, alpha: 0.0, t: 0.0, theta: field.values().to_vec() };
            snap.write(&out)?;
            if let Some(generator) = spec.generator() {
                println!("generator={generator} seed={}", seed.unwrap_or(0));
            }
            println!("wrote {} (n={n}, t=0)", out.display());
            Ok(())
        }
        Command::Plot { input, out } => {
            let written = plot::emit_plots(&input, &out)?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn spectral_of(snap: &Snapshot) -> Result<SpectralField, AppError> {
    let state = snap.into_state(0.0)?;
    Ok(state.theta_tilde)
}

fn print_norms(tag: &str, path: &Path, snap: &Snapshot, field: &SpectralField) {
    println!(
        "{tag}: {} n={} alpha={} t={} l2={} grad_l2={}",
        path.display(),
        snap.n,
        snap.alpha,
        snap.t,
        field.l2_norm(),
        field.grad_norm()
    );
}
