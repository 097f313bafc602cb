use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lasercool_cli::config::{parse_range, SweepSpec};
use lasercool_cli::{parse_config, run, CliError, Command, FigureId, Format};

#[derive(Parser)]
#[command(name = "lasercool", version, about = "Optomechanical cooling with a gain-medium cavity")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config, or a JSON file written by --format json.
    config: PathBuf,
    /// Write here instead of stdout (overrides `output` in the config).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// csv or json (overrides `format` in the config).
    #[arg(short, long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Working point: W, D_th, ξ, κ̃, Δ̃, relaxation frequencies.
    Derive(Common),
    /// All seeded steady states for a given seed amplitude.
    SteadyState(Common),
    /// S_nn(ω) on the configured grid.
    Spectrum(Common),
    /// Rate-equation damping and phonon number at ω_m.
    Cooling(Common),
    /// S_b†b(ω), its integral and the mode-splitting analysis.
    PhononSpectrum(Common),
    /// Cooling summary across one swept parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary (e.g. d0, D0, d0_rel_threshold, coupling).
        #[arg(long)]
        param: Option<String>,
        /// lo:hi:n
        #[arg(long)]
        range: Option<String>,
        /// Log-spaced points.
        #[arg(long)]
        log: bool,
    },
    /// Minimize the phonon number over the pump at fixed photon number.
    OptimizePump(Common),
    /// Data behind one figure: 1, 2, 3a, 3b, 4 or 5.
    Figure {
        id: String,
        #[command(flatten)]
        common: Common,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let (command, common, sweep) = match cli.command {
        Sub::Derive(c) => (Command::Derive, c, None),
        Sub::SteadyState(c) => (Command::SteadyState, c, None),
        Sub::Spectrum(c) => (Command::Spectrum, c, None),
        Sub::Cooling(c) => (Command::Cooling, c, None),
        Sub::PhononSpectrum(c) => (Command::PhononSpectrum, c, None),
        Sub::OptimizePump(c) => (Command::OptimizePump, c, None),
        Sub::Sweep { common, param, range, log } => (Command::Sweep, common, Some((param, range, log))),
        Sub::Figure { id, common } => (Command::Figure(id.parse::<FigureId>()?), common, None),
    };
    let path = common.config.display().to_string();
    let text = std::fs::read_to_string(&common.config).map_err(|source| CliError::Io { path, source })?;
    let mut cfg = parse_config(&text)?;
    if let Some(f) = common.format {
        cfg.format = f.parse::<Format>()?;
    }
    if let Some(o) = common.output {
        cfg.output = Some(o);
    }
    if let Some((param, range, log)) = sweep {
        match (param, range) {
            (None, None) => {}
            (Some(p), Some(r)) => {
                let (lo, hi, n) = parse_range(&r)?;
                cfg.sweep = Some(SweepSpec::new(&p, lo, hi, n, log)?);
            }
            _ => return Err(CliError::validation("--param and --range go together")),
        }
    }

    let report = run(&command, &cfg)?;
    let body = report.render(cfg.format);
    match &cfg.output {
        Some(p) => std::fs::write(p, body).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.variant_name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
