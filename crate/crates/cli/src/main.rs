use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use qwell_cli::commands::{self, Output, RunOptions};
use qwell_cli::config::Config;
use qwell_cli::output::{json_bytes, Format};
use qwell_cli::validate::{self, Fault};
use qwell_cli::{exit, exit_code};

/// Spectra and quantum Otto/Carnot cycles of a delta-impurity square well.
#[derive(Parser, Debug)]
#[command(name = "qwell", version)]
struct Cli {
    /// TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override a config key, e.g. `--set cycle.t_hot_k=25`. Repeatable; wins over the file.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format. Defaults to json for `cycle` and csv otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    /// Levels kept per spectrum (grown automatically on truncation).
    #[arg(long, global = true)]
    n_max: Option<usize>,

    /// Bound on the neglected Boltzmann tail.
    #[arg(long, global = true)]
    tail_tol: Option<f64>,

    /// Sweep worker threads; falls back to [run] workers, then QWELL_WORKERS.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump energy levels for one or more methods, optionally over a p scan.
    Spectrum,
    /// Run a single cycle and print one record.
    Cycle,
    /// Evaluate a cycle over a 2-D parameter grid.
    Sweep,
    /// Reproduce a published table (II-VI or `all`) and compare.
    Tables {
        id: String,
        /// Points per sweep axis.
        #[arg(long, default_value_t = 101)]
        steps: usize,
        /// Exit 1 when a checked row misses its tolerance.
        #[arg(long)]
        check: bool,
    },
    /// Run the invariant suite and report measured maxima.
    Validate {
        #[arg(long, value_enum, hide = true)]
        fault: Option<Fault>,
    },
    /// Cold-stroke length that makes a Carnot cycle reversible.
    CarnotLength {
        #[arg(long)]
        l_hot_nm: f64,
        #[arg(long)]
        t_hot_k: f64,
        #[arg(long, default_value_t = 1.5)]
        t_cold_k: f64,
    },
}

fn run_options(cli: &Cli, cfg: &Config) -> anyhow::Result<RunOptions> {
    let workers = match (cli.workers, cfg.run.workers) {
        (Some(w), _) => w,
        (None, w) if w > 0 => w,
        _ => match std::env::var("QWELL_WORKERS") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| qwell_cli::config::ConfigError(format!("QWELL_WORKERS={v:?}")))?,
            Err(_) => 0,
        },
    };
    Ok(RunOptions {
        n_max: cli.n_max.unwrap_or(cfg.run.n_max),
        tail_tol: cli.tail_tol.unwrap_or(cfg.run.tail_tol),
        workers,
    })
}

fn execute(cli: &Cli) -> anyhow::Result<Output> {
    let cfg = Config::load(cli.config.as_deref(), &cli.overrides)?;
    let opts = run_options(cli, &cfg)?;
    let format = cli.format.unwrap_or(match cli.command {
        Command::Cycle => Format::Json,
        _ => Format::Csv,
    });
    match &cli.command {
        Command::Spectrum => commands::spectrum(&cfg, format),
        Command::Cycle => commands::cycle(&cfg, &opts, format),
        Command::Sweep => commands::sweep(&cfg, &opts, format),
        Command::Tables { id, steps, check } => {
            let ids = commands::parse_tables(id)?;
            commands::tables(&ids, *steps, *check, &opts, format)
        }
        Command::Validate { fault } => {
            let checks = validate::run_all(&opts, *fault)?;
            let table = validate::report(&checks);
            let main = match format {
                Format::Csv => table.to_csv()?,
                Format::Json => json_bytes(&serde_json::json!({ "checks": table.records() }))?,
            };
            let failed: Vec<String> = checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| {
                    format!(
                        "check failed: {} (measured {:e}, limit {:e})",
                        c.name, c.measured, c.limit
                    )
                })
                .collect();
            Ok(Output {
                main,
                sidecar: None,
                failed: !failed.is_empty(),
                notes: failed,
            })
        }
        Command::CarnotLength {
            l_hot_nm,
            t_hot_k,
            t_cold_k,
        } => {
            let l = commands::carnot_length(*l_hot_nm, *t_hot_k, *t_cold_k)?;
            Ok(Output {
                main: format!("{l}\n").into_bytes(),
                ..Output::default()
            })
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".summary.json");
    out.with_file_name(name)
}

fn emit(cli: &Cli, out: &Output) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => {
            fs::write(path, &out.main).with_context(|| format!("writing {}", path.display()))?;
            if let Some(side) = &out.sidecar {
                let p = sidecar_path(path);
                fs::write(&p, side).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        None => {
            io::stdout().write_all(&out.main)?;
            if out.sidecar.is_some() {
                eprintln!("note: summary sidecar is only written with --out");
            }
        }
    }
    for n in &out.notes {
        eprintln!("{n}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|out| emit(&cli, &out).map(|()| out.failed));
    match result {
        Ok(false) => ExitCode::from(exit::OK),
        Ok(true) => ExitCode::from(exit::CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
