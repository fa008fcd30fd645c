use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dqw_cli::{
    cmd_cone_check, cmd_dispersion, cmd_evolve, cmd_gauge_check, cmd_zitter, parse_walk, CliError, CliResult,
    ExperimentConfig, GaugeVariant, InitialCondition,
};
use dqw_core::gauge::{UniformElectric, UniformScheme};
use dqw_core::{ElectricField, FieldConfig, WalkKind};

#[derive(Parser)]
#[command(name = "dqw", version, about = "Dirac quantum walks on triangular and honeycomb lattices")]
struct Cli {
    /// Directory for output artifacts.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan ω over the Brillouin zone and write a contour CSV.
    Dispersion {
        #[arg(long, value_parser = walk_arg)]
        walk: WalkKind,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mass: f64,
        #[arg(long, default_value_t = 256)]
        nx: usize,
        #[arg(long, default_value_t = 256)]
        ny: usize,
    },
    /// Minimal Zitterbewegung frequencies for a list of masses.
    Zitter {
        #[arg(long, value_parser = walk_arg)]
        walk: WalkKind,
        /// Comma-separated masses; `pi` may be used as a factor, e.g. `pi/3`.
        #[arg(long, value_delimiter = ',', value_parser = mass_arg, default_value = "0,pi/3,pi/2,2pi/3,pi,4pi/3")]
        masses: Vec<f64>,
    },
    /// Evolve a state and write density, heatmap, moments and Bloch report.
    Evolve(EvolveArgs),
    /// Randomized gauge-invariance check.
    GaugeCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Flip the sign of δξ_1 (negative control).
        #[arg(long, conflicts_with = "zero_phase")]
        corrupt: bool,
        #[arg(long)]
        zero_phase: bool,
    },
    /// Slope isotropy of the massless cone.
    ConeCheck {
        #[arg(long, value_parser = walk_arg)]
        walk: WalkKind,
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
        #[arg(long, default_value_t = 64)]
        directions: usize,
    },
}

#[derive(Args)]
struct EvolveArgs {
    /// JSON experiment config; other flags are ignored when given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = walk_arg, default_value = "three-step")]
    walk: WalkKind,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    mass: f64,
    #[arg(long, default_value_t = 1024)]
    nx: usize,
    #[arg(long, default_value_t = 64)]
    ny: usize,
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    #[arg(long, allow_negative_numbers = true)]
    ex: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    ey: Option<f64>,
    /// Field coupling: momentum-drift, literal-ramp or literal-static.
    #[arg(long, default_value = "momentum-drift", value_parser = scheme_arg)]
    scheme: UniformScheme,
    /// Localized start spinor `re0,im0,re1,im1`; defaults to (1,1)/√2.
    #[arg(long, value_delimiter = ',', num_args = 4, allow_negative_numbers = true)]
    spinor: Option<Vec<f64>>,
    /// Gaussian packet width; the spinor flag sets its polarization.
    #[arg(long)]
    gaussian_width: Option<f64>,
    #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    k0: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn walk_arg(s: &str) -> Result<WalkKind, String> {
    parse_walk(s).map_err(|e| e.to_string())
}

fn scheme_arg(s: &str) -> Result<UniformScheme, String> {
    match s {
        "momentum-drift" => Ok(UniformScheme::MomentumDrift),
        "literal-ramp" => Ok(UniformScheme::LiteralRamp),
        "literal-static" => Ok(UniformScheme::LiteralStatic),
        _ => Err(format!("unknown scheme '{s}'")),
    }
}

fn mass_arg(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("cannot read mass '{s}'");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some("") => PI_F,
        Some("-") => -PI_F,
        Some(f) => f.parse::<f64>().map_err(|_| bad())? * PI_F,
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(value / den)
}

const PI_F: f64 = std::f64::consts::PI;

impl EvolveArgs {
    fn into_config(self, out_dir: PathBuf) -> CliResult<ExperimentConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                context: path.display().to_string(),
                source,
            })?;
            return ExperimentConfig::from_json(&text);
        }
        let custom = self.spinor.is_some();
        let spinor = self
            .spinor
            .map(|v| [[v[0], v[1]], [v[2], v[3]]])
            .unwrap_or([[0.5f64.sqrt(), 0.0], [0.5f64.sqrt(), 0.0]]);
        let initial = match (self.gaussian_width, self.k0) {
            (Some(width), k0) => InitialCondition::Gaussian {
                width,
                k0: k0.map(|k| [k[0], k[1]]).unwrap_or_default(),
                spinor,
            },
            (None, Some(_)) => return Err(CliError::Usage("--k0 needs --gaussian-width".into())),
            (None, None) if custom => InitialCondition::Spinor { spinor },
            (None, None) => InitialCondition::Symmetric,
        };
        let field = (self.ex.is_some() || self.ey.is_some()).then(|| {
            FieldConfig::UniformElectric(UniformElectric {
                field: ElectricField::new(self.ex.unwrap_or(0.0), self.ey.unwrap_or(0.0)),
                scheme: self.scheme,
            })
        });
        Ok(ExperimentConfig {
            walk: self.walk,
            mass: self.mass,
            n_x: self.nx,
            n_y: self.ny,
            epsilon: 1.0,
            steps: self.steps,
            initial,
            field,
            out_dir,
            seed: self.seed,
        })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let out_dir = cli.out_dir;
    let mkdir = |dir: &PathBuf| {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            context: dir.display().to_string(),
            source,
        })
    };
    match cli.command {
        Command::Dispersion { walk, mass, nx, ny } => {
            mkdir(&out_dir)?;
            let path = out_dir.join(format!("dispersion_{}.csv", walk.name()));
            cmd_dispersion(walk, mass, nx, ny, &path)?;
            println!("wrote {}", path.display());
        }
        Command::Zitter { walk, masses } => {
            mkdir(&out_dir)?;
            let path = out_dir.join(format!("zitter_{}.csv", walk.name()));
            for (m, r) in cmd_zitter(walk, &masses, &path)? {
                println!(
                    "m={m:.6} omega_min={:.6} gap={:.6} minimizers={} degenerate_lines={}",
                    r.omega_min,
                    r.gap,
                    r.minimizers.len(),
                    r.degenerate_lines.len()
                );
            }
            println!("wrote {}", path.display());
        }
        Command::Evolve(args) => {
            let config = args.into_config(out_dir)?;
            if let Some(w) = config.wrap_warning() {
                eprintln!("warning: {w}");
            }
            let outcome = cmd_evolve(&config)?;
            if let Some(b) = outcome.bloch {
                match b.period_steps {
                    Some(p) => println!(
                        "period {p:.3} steps (peak {:.3}), nearest-prediction error {:.4}",
                        b.autocorrelation_peak,
                        b.relative_error.unwrap_or(f64::NAN)
                    ),
                    None => println!("no period detected (peak {:.3})", b.autocorrelation_peak),
                }
            }
            println!("wrote artifacts to {}", config.out_dir.display());
        }
        Command::GaugeCheck {
            seed,
            n,
            steps,
            corrupt,
            zero_phase,
        } => {
            let variant = match (corrupt, zero_phase) {
                (true, _) => GaugeVariant::CorruptXi1,
                (_, true) => GaugeVariant::ZeroPhase,
                _ => GaugeVariant::Random,
            };
            let r = cmd_gauge_check(seed, n, steps, variant)?;
            println!("max deviation {:e}: {}", r.max_deviation, if r.pass { "pass" } else { "fail" });
            if !r.pass {
                return Err(CliError::Numerical("gauge check failed".into()));
            }
        }
        Command::ConeCheck { walk, radius, directions } => {
            mkdir(&out_dir)?;
            let path = out_dir.join(format!("cone_{}.csv", walk.name()));
            let r = cmd_cone_check(walk, radius, directions, &path)?;
            println!("radius {radius}: mean slope {:.6}, anisotropy {:.3e}", r.mean_slope, r.anisotropy);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
