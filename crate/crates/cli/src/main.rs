//! `casimir`: Casimir pressure, permittivity tables and theory-experiment
//! comparison from the command line.
//!
//! Settings come from a JSON run configuration (`--config`); flags given on
//! the command line override the corresponding configuration fields.

mod commands;
mod config;
mod format;
mod interp;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use casimir_core::comparison::{CombinationRule, Distribution};
use casimir_core::error::ErrorClass;
use casimir_core::permittivity::LowFrequencyExtension;
use casimir_core::{permittivity::DrudeParams, Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfidenceChoice, Format, ModelConfig, RunConfig, Spacing, WindowConfig};

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Casimir pressure from Lifshitz theory")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_enum)]
    confidence: Option<ConfidenceChoice>,
    #[arg(long, global = true, value_enum)]
    distribution: Option<DistributionArg>,
    /// Temperature in K; 0 selects the zero-temperature formula.
    #[arg(long, global = true)]
    temperature: Option<f64>,
    /// Record the wall-clock time in JSON metadata (breaks byte stability).
    #[arg(long, global = true)]
    timestamp: bool,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(flatten)]
    model: ModelArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistributionArg {
    Uniform,
    Normal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    Drude,
    PlasmaLike,
    TabulatedKk,
    WindowedKk,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CombinationArg {
    Rss,
    LinearSum,
}

/// Model selection on the command line; replaces the configured model.
#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, global = true, value_enum)]
    model: Option<ModelKind>,
    /// Plasma frequency in eV.
    #[arg(long, global = true)]
    plasma_frequency: Option<f64>,
    /// Drude relaxation parameter in eV.
    #[arg(long, global = true)]
    relaxation: Option<f64>,
    /// Optical table for the tabulated models.
    #[arg(long, global = true)]
    table: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate ε(iξ) on a frequency grid.
    Epsilon(GridArgs),
    /// Pressure over a separation grid, optionally with roughness.
    Pressure {
        #[command(flatten)]
        grid: GridArgs,
        /// Plate roughness profile (v,h_nm).
        #[arg(long)]
        plate: Option<PathBuf>,
        /// Sphere roughness profile (v,h_nm).
        #[arg(long)]
        sphere: Option<PathBuf>,
    },
    /// Compare theory with an experimental dataset.
    Compare {
        /// Experimental pressures (a_nm,P_mPa,Xi95_mPa).
        #[arg(long)]
        experiment: Option<PathBuf>,
        /// Theoretical error as a fraction of |P|.
        #[arg(long)]
        theory_band: Option<f64>,
        #[arg(long, value_enum)]
        combination: Option<CombinationArg>,
        /// 95% separation uncertainty in nm.
        #[arg(long)]
        delta_a: Option<f64>,
        /// Interpolate the theory grid onto the experimental separations.
        #[arg(long)]
        interpolate: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Real roots of the window function on the imaginary axis.
    WindowRoots {
        /// Re Ω in eV.
        #[arg(long, allow_hyphen_values = true)]
        omega_re: Option<f64>,
        /// Im Ω in eV (negative).
        #[arg(long, allow_hyphen_values = true)]
        omega_im: Option<f64>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        q: Option<u32>,
        /// Search range in eV.
        #[arg(long, default_value_t = 1e-3)]
        lo: f64,
        #[arg(long, default_value_t = 1e3)]
        hi: f64,
    },
    /// Whether the patch size is small compared with the effective area.
    PatchCheck {
        /// Grain diameter in nm.
        #[arg(long)]
        grain_nm: f64,
        /// Sphere radius in µm.
        #[arg(long)]
        radius_um: f64,
        /// Separation in nm.
        #[arg(long)]
        separation_nm: f64,
    },
}

/// Grid overrides; `epsilon` reads them as ξ in eV, the others as a in nm.
#[derive(Debug, Args, Default)]
struct GridArgs {
    /// First grid point.
    #[arg(long)]
    start: Option<f64>,
    /// Last grid point.
    #[arg(long)]
    stop: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<Spacing>,
}

impl GridArgs {
    fn apply(
        &self,
        grid: Option<config::GridConfig>,
        default: Option<config::GridConfig>,
    ) -> Result<Option<config::GridConfig>> {
        let any = self.start.is_some() || self.stop.is_some() || self.count.is_some() || self.spacing.is_some();
        let base = match grid.or(default) {
            Some(g) => g,
            None if !any => return Ok(None),
            None => {
                let (Some(start), Some(stop), Some(count)) = (self.start, self.stop, self.count) else {
                    return Err(Error::config("grid needs --start, --stop and --count"));
                };
                config::GridConfig {
                    start,
                    stop,
                    count,
                    spacing: Spacing::Linear,
                }
            }
        };
        Ok(Some(config::GridConfig {
            start: self.start.unwrap_or(base.start),
            stop: self.stop.unwrap_or(base.stop),
            count: self.count.unwrap_or(base.count),
            spacing: self.spacing.unwrap_or(base.spacing),
        }))
    }
}

impl ModelArgs {
    fn any(&self) -> bool {
        self.model.is_some() || self.plasma_frequency.is_some() || self.relaxation.is_some() || self.table.is_some()
    }

    fn build(&self) -> Result<Option<ModelConfig>> {
        let Some(kind) = self.model else {
            if self.any() {
                return Err(Error::config("model parameters given without --model"));
            }
            return Ok(None);
        };
        let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::config(format!("--model needs {flag}")));
        let table = || {
            self.table
                .clone()
                .ok_or_else(|| Error::config("tabulated models need --table"))
        };
        Ok(Some(match kind {
            ModelKind::Drude => ModelConfig::Drude {
                tag: None,
                plasma_frequency: need(self.plasma_frequency, "--plasma-frequency")?,
                relaxation: need(self.relaxation, "--relaxation")?,
                oscillators: Vec::new(),
            },
            ModelKind::PlasmaLike => ModelConfig::PlasmaLike {
                tag: None,
                plasma_frequency: need(self.plasma_frequency, "--plasma-frequency")?,
                oscillators: Vec::new(),
            },
            ModelKind::TabulatedKk => ModelConfig::TabulatedKk {
                tag: None,
                table: table()?,
                low_frequency: match (self.plasma_frequency, self.relaxation) {
                    (Some(wp), Some(g)) => LowFrequencyExtension::Drude(DrudeParams::new(wp, g)?),
                    (None, None) => LowFrequencyExtension::None,
                    _ => {
                        return Err(Error::config(
                            "the Drude extension needs both --plasma-frequency and --relaxation",
                        ))
                    }
                },
                tail: casimir_core::permittivity::TailPolicy::PowerLaw,
                zero_mode: None,
            },
            ModelKind::WindowedKk => ModelConfig::WindowedKk {
                tag: None,
                table: table()?,
                window: Some(DEFAULT_WINDOW),
                guard_relative: casimir_core::permittivity::DEFAULT_GUARD_RELATIVE,
                guard_range: None,
                zero_mode: None,
            },
        }))
    }
}

const DEFAULT_WINDOW: WindowConfig = WindowConfig {
    omega_re: 1.0,
    omega_im: -2.0,
    p: 1,
    q: 3,
};

/// Configuration file, then flags. A model given by flags alone is enough
/// when no file is supplied.
fn resolve_config(cli: &Cli, required: bool) -> Result<Option<RunConfig>> {
    let flag_model = cli.model.build()?;
    let mut cfg = match (&cli.config, flag_model) {
        (Some(path), model) => {
            let mut cfg = RunConfig::from_path(path)?;
            if let Some(m) = model {
                cfg.model = m;
            }
            cfg
        }
        (None, Some(model)) => RunConfig::new(model),
        (None, None) if required => {
            return Err(Error::config("no model selected; pass --config or --model"));
        }
        (None, None) => return Ok(None),
    };
    if let Some(o) = &cli.output {
        cfg.output = o.clone();
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(c) = cli.confidence {
        cfg.confidence = c;
    }
    if let Some(d) = cli.distribution {
        cfg.distribution = match d {
            DistributionArg::Uniform => Distribution::Uniform,
            DistributionArg::Normal => Distribution::Normal,
        };
    }
    if let Some(t) = cli.temperature {
        cfg.temperature_k = t;
    }
    if !(cfg.temperature_k >= 0.0 && cfg.temperature_k.is_finite()) {
        return Err(Error::config(format!(
            "temperature must be >= 0 K, got {}",
            cfg.temperature_k
        )));
    }
    Ok(Some(cfg))
}

fn run(cli: Cli) -> Result<()> {
    let ctx = report::Context {
        timestamp: cli.timestamp,
    };
    match &cli.command {
        Command::Epsilon(grid) => {
            let mut cfg = resolve_config(&cli, true)?.expect("required");
            cfg.xi_grid = grid.apply(cfg.xi_grid, Some(commands::DEFAULT_XI_GRID))?;
            commands::epsilon(&cfg, &ctx)
        }
        Command::Pressure { grid, plate, sphere } => {
            let mut cfg = resolve_config(&cli, true)?.expect("required");
            cfg.grid = grid.apply(cfg.grid, None)?;
            if plate.is_some() || sphere.is_some() {
                let mut r = cfg.roughness.take().unwrap_or(config::RoughnessConfig {
                    plate: None,
                    sphere: None,
                });
                r.plate = plate.clone().or(r.plate);
                r.sphere = sphere.clone().or(r.sphere);
                cfg.roughness = Some(r);
            }
            commands::pressure(&cfg, &ctx)
        }
        Command::Compare {
            experiment,
            theory_band,
            combination,
            delta_a,
            interpolate,
            grid,
        } => {
            let mut cfg = resolve_config(&cli, true)?.expect("required");
            cfg.grid = grid.apply(cfg.grid, None)?;
            if let Some(e) = experiment {
                cfg.experiment = Some(e.clone());
            }
            if let Some(b) = theory_band {
                cfg.theory_band_fraction = *b;
            }
            if let Some(c) = combination {
                cfg.combination = match c {
                    CombinationArg::Rss => CombinationRule::Rss,
                    CombinationArg::LinearSum => CombinationRule::LinearSum,
                };
            }
            if delta_a.is_some() {
                cfg.delta_a_nm = *delta_a;
            }
            cfg.interpolate |= *interpolate;
            commands::compare(&cfg, &ctx)
        }
        Command::WindowRoots {
            omega_re,
            omega_im,
            p,
            q,
            lo,
            hi,
        } => {
            let cfg = resolve_config(&cli, false)?;
            let configured = cfg.as_ref().and_then(|c| match &c.model {
                ModelConfig::WindowedKk { window, .. } => *window,
                _ => None,
            });
            let base = configured.unwrap_or(DEFAULT_WINDOW);
            let window = WindowConfig {
                omega_re: omega_re.unwrap_or(base.omega_re),
                omega_im: omega_im.unwrap_or(base.omega_im),
                p: p.unwrap_or(base.p),
                q: q.unwrap_or(base.q),
            };
            let (output, format) = output_target(&cli, cfg.as_ref());
            commands::window_roots(&window, *lo, *hi, &output, format, &ctx)
        }
        Command::PatchCheck {
            grain_nm,
            radius_um,
            separation_nm,
        } => {
            let cfg = resolve_config(&cli, false)?;
            let (output, format) = output_target(&cli, cfg.as_ref());
            commands::patch_check(*grain_nm, *radius_um, *separation_nm, &output, format, &ctx)
        }
    }
}

fn output_target(cli: &Cli, cfg: Option<&RunConfig>) -> (PathBuf, Format) {
    match cfg {
        Some(c) => (c.output.clone(), c.format),
        None => (
            cli.output.clone().unwrap_or_else(|| PathBuf::from("out")),
            cli.format.unwrap_or(Format::Csv),
        ),
    }
}

fn exit_code(err: &Error) -> u8 {
    match err.class() {
        ErrorClass::Parse => 2,
        ErrorClass::Domain => 3,
        ErrorClass::Accuracy => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .parse_default_env()
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use casimir_core::lifshitz::QuadratureSettings;

    #[test]
    fn exit_classes() {
        assert_eq!(exit_code(&Error::config("x")), 2);
        assert_eq!(exit_code(&Error::domain("x")), 3);
        let acc = Error::Accuracy {
            context: "x".into(),
            estimate: 1.0,
            error: 1.0,
        };
        assert_eq!(exit_code(&acc), 4);
        let wrapped = Error::AtGridPoint {
            index: 3,
            source: Box::new(acc),
        };
        assert_eq!(exit_code(&wrapped), 4);
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::parse_from([
            "casimir",
            "--model",
            "drude",
            "--plasma-frequency",
            "9",
            "--relaxation",
            "0.035",
            "--temperature",
            "300",
            "--confidence",
            "0.70",
            "pressure",
        ]);
        let cfg = resolve_config(&cli, true).unwrap().unwrap();
        assert_eq!(cfg.temperature(), Some(300.0));
        assert_eq!(cfg.confidence, ConfidenceChoice::P70);
        assert_eq!(cfg.quadrature, QuadratureSettings::default());
        assert_eq!(cfg.model.kind(), "drude");
    }

    #[test]
    fn model_flags_need_model() {
        let cli = Cli::parse_from(["casimir", "--plasma-frequency", "9", "pressure"]);
        assert!(resolve_config(&cli, true).is_err());
        let cli = Cli::parse_from(["casimir", "--model", "drude", "--plasma-frequency", "9", "pressure"]);
        assert!(resolve_config(&cli, true).is_err());
        let cli = Cli::parse_from(["casimir", "pressure"]);
        assert!(resolve_config(&cli, true).is_err());
    }

    #[test]
    fn grid_overrides() {
        let args = GridArgs {
            count: Some(5),
            ..GridArgs::default()
        };
        let base = config::GridConfig {
            start: 1.0,
            stop: 2.0,
            count: 3,
            spacing: Spacing::Log,
        };
        let g = args.apply(Some(base), None).unwrap().unwrap();
        assert_eq!((g.count, g.spacing), (5, Spacing::Log));
        assert!(args.apply(None, None).is_err());
        assert_eq!(GridArgs::default().apply(None, None).unwrap(), None);
    }
}
