use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tnn_cli::config::{ExperimentConfig, ModeChoice, Overrides};
use tnn_cli::experiments::{
    check_equivalence, estimate_cost, run_incremental, run_train, Perturbation,
};
use tnn_cli::CliError;

#[derive(Parser)]
#[command(
    name = "tnn",
    version,
    about = "Temporal neural network column: online learning experiments and hardware cost estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream MNIST samples through a column with online learning.
    Train {
        /// Sectioned key-value config file; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Train supervised on all classes but the last, then acquire the
    /// held-out class from an unlabeled stream.
    Incremental {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Analytical gate/time/area/power estimate for a column geometry.
    Cost {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value = "stdp")]
        mode: ModeChoice,
        /// Emit the full report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Check that the cycle-accurate and functional engines stay
    /// bit-identical over a random volley stream.
    Equiv {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn load_config(path: Option<&PathBuf>, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(path.map(|p| p.as_path()))?;
    cfg.apply(overrides);
    Ok(cfg)
}

/// Writes to stdout, exiting quietly when the read end of a pipe closes
/// early (e.g. `tnn cost --json | head`).
fn emit_fmt(args: std::fmt::Arguments, newline: bool) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let result = out.write_fmt(args).and_then(|()| {
        if newline {
            out.write_all(b"\n")
        } else {
            Ok(())
        }
    });
    if let Err(e) = result {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(1);
    }
}

macro_rules! emit {
    ($($arg:tt)*) => { emit_fmt(format_args!($($arg)*), true) };
}

fn fmt_neuron(n: Option<usize>) -> String {
    n.map_or_else(|| "-".into(), |n| n.to_string())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train { config, overrides } => {
            let cfg = load_config(config.as_ref(), &overrides)?;
            let summary = run_train(&cfg)?;
            emit!("samples consumed: {}", summary.samples);
            match summary.converged_at {
                Some(i) => emit!("converged at sample {i}"),
                None => emit!("not converged within budget"),
            }
            for c in &summary.classes {
                emit!(
                    "class {}: dominant neuron {:>2}, purity {:.2}, cosine {:.2} ({} samples in window)",
                    c.label,
                    fmt_neuron(c.dominant_neuron),
                    c.purity,
                    c.cosine_to_class_mean,
                    c.samples_in_window
                );
            }
            emit!("classes meeting purity/similarity criteria: {}", summary.classes_meeting_criteria);
            emit!("outputs in {}", cfg.run.out_dir.display());
            Ok(())
        }
        Command::Incremental { config, overrides } => {
            let cfg = load_config(config.as_ref(), &overrides)?;
            let summary = run_incremental(&cfg)?;
            emit!("phase 1: {} supervised samples", summary.phase1_samples);
            emit!("phase 2: {} unlabeled samples consumed", summary.phase2_samples_consumed);
            match summary.acquisition_sample {
                Some(i) => emit!(
                    "{} at phase-2 sample {i} (neuron {}, cosine {:.2})",
                    summary.status,
                    fmt_neuron(summary.acquiring_neuron),
                    summary.best_cosine
                ),
                None => emit!("{} (best cosine {:.2})", summary.status, summary.best_cosine),
            }
            emit!("outputs in {}", cfg.run.out_dir.display());
            Ok(())
        }
        Command::Cost { p, q, mode, json } => {
            let summary = estimate_cost(p, q, mode)?;
            if json {
                let text = serde_json::to_string_pretty(&summary)
                    .map_err(|e| CliError::Config(format!("cost serialization failed: {e}")))?;
                emit!("{text}");
            } else {
                emit_fmt(format_args!("{}", summary.render()), false);
            }
            Ok(())
        }
        Command::Equiv { p, q, trials, seed } => {
            let report = check_equivalence(p, q, trials, seed, Perturbation::None)?;
            emit!(
                "engines bit-identical: {} x {} column over {} gamma cycles",
                report.p, report.q, report.trials
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
