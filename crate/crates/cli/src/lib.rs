//! Command implementations behind the `dqw` binary.
//!
//! Every command writes its artifacts into an output directory and returns a
//! summary, so the same code paths serve the binary and the test suites.

use std::f64::consts::{PI, TAU};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dqw_core::analysis::{estimate_period, PeriodEstimate};
use dqw_core::dispersion::GapReport;
use dqw_core::export::{merge_half_columns, sig9, write_contour_csv, write_density_csv, write_pgm16, write_zitter_csv};
use dqw_core::gauge::{gauge_delta, AngleTable, PhaseChange, UniformElectric};
use dqw_core::observe::{MomentRecord, Moments, XProjection};
use dqw_core::{
    build_walk, cone_slope_check, evolve, min_gap, scan_bz, table_walk, ConeReport, ElectricField, FieldConfig,
    LatticeFamily, LatticeSpec, Propagator, SiteIndex, SpinorField, WalkKind, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const GAUGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<dqw_core::Error> for CliError {
    fn from(e: dqw_core::Error) -> Self {
        match e {
            dqw_core::Error::Io(source) => CliError::Io {
                context: "i/o".into(),
                source,
            },
            dqw_core::Error::NonUnitary { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        context: path.display().to_string(),
        source,
    }
}

/// Creates `path` and hands a buffered writer to `body`.
fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> CliResult<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub fn parse_walk(s: &str) -> CliResult<WalkKind> {
    s.parse().map_err(|e: dqw_core::Error| CliError::Usage(e.to_string()))
}

mod walk_name {
    use dqw_core::WalkKind;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(kind: &WalkKind, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(kind.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<WalkKind, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Scans the zone on an `nx × ny` grid and writes `kx,ky,omega_minus` rows to `out`.
pub fn cmd_dispersion(kind: WalkKind, mass: f64, nx: usize, ny: usize, out: &Path) -> CliResult<()> {
    let walk = build_walk(kind, mass, 1.0)?;
    let scan = scan_bz(&walk, nx, ny)?;
    write_file(out, |w| write_contour_csv(w, &scan))
}

/// Minimal frequencies for each mass, with masses in the [`table_walk`] convention.
pub fn cmd_zitter(kind: WalkKind, masses: &[f64], out: &Path) -> CliResult<Vec<(f64, GapReport)>> {
    if kind == WalkKind::ThreeStepHoneycomb {
        return Err(CliError::Usage(
            "no minimal-frequency table exists for the honeycomb walk; call min_gap directly".into(),
        ));
    }
    let rows = masses
        .iter()
        .map(|&m| Ok((m, min_gap(&table_walk(kind, m)?)?)))
        .collect::<CliResult<Vec<_>>>()?;
    write_file(out, |w| write_zitter_csv(w, &rows))?;
    Ok(rows)
}

/// Samples the massless cone and writes `phi,slope` rows to `out`.
pub fn cmd_cone_check(kind: WalkKind, radius: f64, directions: usize, out: &Path) -> CliResult<ConeReport> {
    let report = cone_slope_check(&build_walk(kind, 0.0, 1.0)?, radius, directions)?;
    write_file(out, |w| {
        writeln!(w, "phi,slope")?;
        for (phi, s) in &report.slopes {
            writeln!(w, "{},{}", sig9(*phi), sig9(*s))?;
        }
        Ok(())
    })?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaugeVariant {
    #[default]
    Random,
    /// Sign of δξ_1 flipped everywhere: must fail.
    CorruptXi1,
    ZeroPhase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeCheckReport {
    pub seed: u64,
    pub n: usize,
    pub steps: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Evolves a random state under a random tabulated field, and its
/// phase-changed copy under the transformed field, then compares them pointwise.
pub fn cmd_gauge_check(seed: u64, n: usize, steps: usize, variant: GaugeVariant) -> CliResult<GaugeCheckReport> {
    let n_y = n + n % 2;
    let lat = LatticeSpec::new(LatticeFamily::EquilateralTriangle, n, n_y, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = AngleTable::zeros(&lat, steps);
    for v in table.alpha.iter_mut().chain(table.xi.iter_mut()).chain(table.zeta.iter_mut()) {
        *v = rng.gen_range(-PI..PI);
    }
    let config = FieldConfig::Tabulated(table);
    let phase = match variant {
        GaugeVariant::ZeroPhase => PhaseChange::zero(&lat, steps),
        _ => PhaseChange::tabulate(&lat, steps, |_, _| rng.gen_range(-PI..PI)),
    };
    let mut delta = gauge_delta(&phase, &lat)?;
    if variant == GaugeVariant::CorruptXi1 {
        for step in 0..steps {
            let first = 3 * step * lat.len();
            for v in &mut delta.d_xi[first..first + lat.len()] {
                *v = -*v;
            }
        }
    }
    let transformed = delta.apply(&config, &lat)?;
    let walk = build_walk(WalkKind::ThreeStepEquilateral, rng.gen_range(0.0..2.0), 1.0)?;
    let prop = Propagator::new(&walk, &lat)?;
    let mut psi = SpinorField::from_fn(lat, |_| {
        [
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ]
    });
    psi.normalize();
    let mut primed = psi.clone();
    phase.apply(&mut primed, 0);
    for step in 0..steps {
        psi = prop.step(&psi, step, Some(&config))?;
        primed = prop.step(&primed, step, Some(&transformed))?;
    }
    phase.apply(&mut psi, 3 * steps);
    let max_deviation = primed.max_abs_diff(&psi);
    Ok(GaugeCheckReport {
        seed,
        n,
        steps,
        max_deviation,
        pass: max_deviation < GAUGE_TOLERANCE,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `(1, 1)/√2` at the origin.
    Symmetric,
    /// A normalized spinor `[[re, im], [re, im]]` at the origin.
    Spinor { spinor: [[f64; 2]; 2] },
    Gaussian {
        width: f64,
        #[serde(default)]
        k0: [f64; 2],
        spinor: [[f64; 2]; 2],
    },
}

impl InitialCondition {
    pub fn build(&self, lattice: LatticeSpec) -> CliResult<SpinorField> {
        let spinor = |s: &[[f64; 2]; 2]| -> CliResult<[C64; 2]> {
            let v = [C64::new(s[0][0], s[0][1]), C64::new(s[1][0], s[1][1])];
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(CliError::Usage("initial spinor must be nonzero".into()));
            }
            Ok([v[0] / norm, v[1] / norm])
        };
        match self {
            InitialCondition::Symmetric => {
                let h = C64::new(0.5f64.sqrt(), 0.0);
                Ok(SpinorField::localized(lattice, SiteIndex::ORIGIN, [h, h]))
            }
            InitialCondition::Spinor { spinor: s } => Ok(SpinorField::localized(lattice, SiteIndex::ORIGIN, spinor(s)?)),
            InitialCondition::Gaussian { width, k0, spinor: s } => {
                if width.is_nan() || *width <= 0.0 {
                    return Err(CliError::Usage("gaussian width must be positive".into()));
                }
                Ok(SpinorField::gaussian(lattice, *width, *k0, spinor(s)?))
            }
        }
    }
}

fn default_epsilon() -> f64 {
    1.0
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(with = "walk_name")]
    pub walk: WalkKind,
    pub mass: f64,
    pub n_x: usize,
    pub n_y: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    pub steps: usize,
    pub initial: InitialCondition,
    #[serde(default)]
    pub field: Option<FieldConfig>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    /// Bloch-run defaults: three-step walk, m = 0.5, 1024×64 sites, 2000 steps, symmetric start.
    pub fn bloch(field: ElectricField) -> Self {
        Self {
            walk: WalkKind::ThreeStepEquilateral,
            mass: 0.5,
            n_x: 1024,
            n_y: 64,
            epsilon: 1.0,
            steps: 2000,
            initial: InitialCondition::Symmetric,
            field: Some(dqw_core::uniform_electric_config(field)),
            out_dir: default_out_dir(),
            seed: 0,
        }
    }

    pub fn from_json(s: &str) -> CliResult<Self> {
        serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad experiment config: {e}")))
    }

    pub fn lattice(&self) -> CliResult<LatticeSpec> {
        Ok(LatticeSpec::new(self.walk.family(), self.n_x, self.n_y, self.epsilon)?)
    }

    /// A warning when a localized packet could reach the boundary within the run.
    pub fn wrap_warning(&self) -> Option<String> {
        let reach = self.walk.substep_count() * self.steps;
        let room = self.n_x.min(self.n_y) / 2;
        (reach >= room).then(|| {
            format!("packet may wrap: up to {reach} sites travelled in {} steps, lattice half-width {room}", self.steps)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochReport {
    pub field: [f64; 2],
    /// Unit vector the centroid is projected on.
    pub direction: [f64; 2],
    pub detected: bool,
    pub period_steps: Option<f64>,
    pub autocorrelation_peak: f64,
    /// `2π/E`, `(2/3)·2π/E` and `(3/2)·2π/E`; empty when `E = 0`.
    pub predictions: Vec<f64>,
    pub relative_error: Option<f64>,
    pub centroid: Vec<f64>,
}

impl BlochReport {
    pub fn from_centroid(field: ElectricField, direction: [f64; 2], centroid: Vec<f64>) -> CliResult<Self> {
        let PeriodEstimate { period, peak } = estimate_period(&centroid)?;
        let e = field.magnitude();
        let predictions = if e > 0.0 {
            let t = TAU / e;
            vec![t, 2.0 / 3.0 * t, 1.5 * t]
        } else {
            Vec::new()
        };
        let relative_error = period.and_then(|p| {
            predictions
                .iter()
                .map(|q| (p - q).abs() / q)
                .min_by(f64::total_cmp)
        });
        Ok(Self {
            field: [field.ex, field.ey],
            direction,
            detected: period.is_some(),
            period_steps: period,
            autocorrelation_peak: peak,
            predictions,
            relative_error,
            centroid,
        })
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOutcome {
    pub moments: Vec<MomentRecord>,
    pub bloch: Option<BlochReport>,
    pub warnings: Vec<String>,
}

impl EvolveOutcome {
    pub fn sd_x(&self) -> Vec<f64> {
        self.moments.iter().map(|r| r.sd[0]).collect()
    }
}

pub const DENSITY_CSV: &str = "density.csv";
pub const DENSITY_PGM: &str = "density.pgm";
pub const MOMENTS_CSV: &str = "moments.csv";
pub const BLOCH_JSON: &str = "bloch.json";

fn uniform_field(config: &FieldConfig) -> Option<ElectricField> {
    match config {
        FieldConfig::UniformElectric(UniformElectric { field, .. }) => Some(*field),
        FieldConfig::Tabulated(_) => None,
    }
}

/// Runs the experiment and writes the density CSV, the `(t, x)` heatmap, the
/// moments and, for a uniform field, the Bloch report.
pub fn cmd_evolve(config: &ExperimentConfig) -> CliResult<EvolveOutcome> {
    let lattice = config.lattice()?;
    let walk = build_walk(config.walk, config.mass, config.epsilon)?;
    let initial = config.initial.build(lattice)?;
    let warnings: Vec<String> = config.wrap_warning().into_iter().collect();

    let mut moments = Moments::new();
    let mut projection = XProjection::new();
    evolve(&walk, &initial, config.steps, config.field.as_ref(), &mut [&mut moments, &mut projection])?;

    let drift = moments
        .records
        .iter()
        .map(|r| (r.norm - 1.0).abs())
        .fold(0.0, f64::max);
    if drift > 1e-10 {
        return Err(CliError::Numerical(format!("norm drifted by {drift:e}")));
    }

    let dir = &config.out_dir;
    ensure_dir(dir)?;
    write_file(&dir.join(DENSITY_CSV), |w| write_density_csv(w, &projection.xs, &projection.rows))?;
    let merged: Vec<Vec<f64>> = projection.rows.iter().map(|r| merge_half_columns(r)).collect();
    write_file(&dir.join(DENSITY_PGM), |w| write_pgm16(w, lattice.n_x, &merged))?;
    write_file(&dir.join(MOMENTS_CSV), |w| {
        writeln!(w, "t,norm,mean_x,mean_y,sd_x,sd_y")?;
        for r in &moments.records {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.step,
                sig9(r.norm),
                sig9(r.mean[0]),
                sig9(r.mean[1]),
                sig9(r.sd[0]),
                sig9(r.sd[1])
            )?;
        }
        Ok(())
    })?;

    let bloch = match config.field.as_ref().and_then(uniform_field) {
        Some(field) => {
            let e = field.magnitude();
            let direction = if e > 0.0 { [field.ex / e, field.ey / e] } else { [1.0, 0.0] };
            let centroid = moments
                .records
                .iter()
                .map(|r| r.mean[0] * direction[0] + r.mean[1] * direction[1])
                .collect();
            let report = BlochReport::from_centroid(field, direction, centroid)?;
            let path = dir.join(BLOCH_JSON);
            let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numerical(e.to_string()))?;
            write_file(&path, |w| writeln!(w, "{json}"))?;
            Some(report)
        }
        None => None,
    };

    Ok(EvolveOutcome {
        moments: moments.records,
        bloch,
        warnings,
    })
}
