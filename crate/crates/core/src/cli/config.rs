//! Run configuration: JSON file plus command-line overrides, validated into
//! a [`Plan`] before any computation starts.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::boxmodes::{BoxLattice, MIN_MC_SAMPLES};
use crate::gates::io::read_any;
use crate::gates::{GaussianGate, LongitudinalGate, VectorGate};
use crate::scenario::ConstantsMode;
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Bound,
    Variance,
    Check,
    Converge,
    Example,
    Mc,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Bound => "bound",
            CommandKind::Variance => "variance",
            CommandKind::Check => "check",
            CommandKind::Converge => "converge",
            CommandKind::Example => "example",
            CommandKind::Mc => "mc",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    #[default]
    Gaussian,
    Longitudinal,
    Grid,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpec {
    #[serde(rename = "type", default)]
    pub kind: GateKind,
    pub l: Option<f64>,
    pub center: Option<Vec3>,
    pub direction: Option<Vec3>,
    pub amplitude: Option<f64>,
    /// Grid file (binary or `.json`), relative to the config file.
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GatesSpec {
    pub electric: Option<GateSpec>,
    pub magnetic: Option<GateSpec>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: Option<usize>,
    pub axis: Option<Vec3>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    #[serde(rename = "L", alias = "box_size")]
    pub box_size: Option<f64>,
    #[serde(rename = "N", alias = "cutoff")]
    pub cutoff: Option<u32>,
    pub k_max: Option<f64>,
    pub support_tolerance: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeSpec {
    pub box_sizes: Option<Vec<f64>>,
    pub k_max: Option<f64>,
    pub lattices: Option<Vec<LatticeSpec>>,
    pub separation: Option<f64>,
    pub support_tolerance: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSpec {
    pub reference_length: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// Gate width in meters.
    pub l: Option<f64>,
    /// J·s⁻¹·m⁻².
    pub intensity: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
}

/// JSON run configuration. Every field is optional; flags override it.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub gates: Option<GatesSpec>,
    pub sweep: Option<SweepSpec>,
    pub lattice: Option<LatticeSpec>,
    pub converge: Option<ConvergeSpec>,
    pub seed: Option<u64>,
    pub n_samples: Option<usize>,
    pub units: Option<UnitsSpec>,
    pub mode: Option<ConstantsMode>,
    pub scenario: Option<ScenarioSpec>,
    pub output: Option<OutputSpec>,
}

/// Validation failure, with the config line it refers to when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub source: Option<PathBuf>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.source, self.line) {
            (Some(p), Some(l)) => match self.column {
                Some(c) => write!(f, "{}:{l}:{c}: {}", p.display(), self.message),
                None => write!(f, "{}:{l}: {}", p.display(), self.message),
            },
            (Some(p), None) => write!(f, "{}: {}", p.display(), self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Config text with its origin, used to attach line numbers to errors.
pub struct Source {
    pub path: Option<PathBuf>,
    pub text: String,
}

impl Source {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            source: Some(path.to_path_buf()),
            line: None,
            column: None,
            message: format!("cannot read config: {e}"),
        })?;
        Ok(Self {
            path: Some(path.to_path_buf()),
            text,
        })
    }

    pub fn parse(&self) -> Result<RunConfig, ConfigError> {
        serde_json::from_str(&self.text).map_err(|e| ConfigError {
            source: self.path.clone(),
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })
    }

    /// Line of the last key in `keys`, found by following the keys in order.
    fn locate(&self, keys: &[&str]) -> Option<usize> {
        let mut at = 0;
        for k in keys {
            let needle = format!("\"{k}\"");
            at += self.text[at..].find(&needle)?;
        }
        Some(self.text[..at].matches('\n').count() + 1)
    }

    fn error(&self, keys: &[&str], flag: Option<&str>, message: impl Into<String>) -> ConfigError {
        let message = message.into();
        let line = self.locate(keys);
        let message = match (line, flag) {
            (None, Some(f)) => format!("{f}: {message}"),
            _ => format!("{}: {message}", keys.join(".")),
        };
        ConfigError {
            source: self.path.clone().filter(|_| line.is_some()),
            line,
            column: None,
            message,
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub mode: Option<ConstantsMode>,
    pub width: Option<f64>,
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub count: Option<usize>,
    pub box_size: Option<f64>,
    pub cutoff: Option<u32>,
    pub samples: Option<usize>,
    pub gate_length: Option<f64>,
    pub intensity: Option<f64>,
    pub reference_length: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub axis: Vec3,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + i as f64 * step).collect()
    }
}

/// Validated, fully defaulted run.
#[derive(Clone, Debug)]
pub struct Plan {
    pub command: CommandKind,
    pub electric: VectorGate,
    pub magnetic: VectorGate,
    pub sweep: Sweep,
    pub lattice: BoxLattice,
    pub converge_lattices: Vec<BoxLattice>,
    pub converge_separation: f64,
    pub seed: u64,
    pub n_samples: usize,
    pub reference_length: f64,
    pub mode: ConstantsMode,
    pub scenario_l: f64,
    pub intensity: f64,
    pub out_dir: PathBuf,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

fn build_gate(
    spec: &GateSpec,
    default_dir: Vec3,
    width: Option<f64>,
    src: &Source,
    role: &str,
) -> Result<VectorGate, ConfigError> {
    let key = |k: &'static str| ["gates", role, k];
    let l = width.or(spec.l).unwrap_or(1.0);
    if !positive(l) {
        return Err(src.error(
            &key("l"),
            Some("--width"),
            format!("gate width must be positive, got {l}"),
        ));
    }
    let center = spec.center.unwrap_or(Vec3::ZERO);
    if !center.is_finite() {
        return Err(src.error(&key("center"), None, "center must be finite"));
    }
    let amplitude = spec.amplitude.unwrap_or(1.0);
    if !amplitude.is_finite() {
        return Err(src.error(&key("amplitude"), None, "amplitude must be finite"));
    }
    match spec.kind {
        GateKind::Gaussian => {
            let dir = spec.direction.unwrap_or(default_dir);
            if !dir.is_finite() || dir.norm() == 0.0 {
                return Err(src.error(&key("direction"), None, "direction must be a nonzero finite vector"));
            }
            GaussianGate::new(center, l, dir, amplitude)
                .map(Into::into)
                .map_err(|e| src.error(&key("type"), None, e.to_string()))
        }
        GateKind::Longitudinal => LongitudinalGate::new(center, l, amplitude)
            .map(Into::into)
            .map_err(|e| src.error(&key("type"), None, e.to_string())),
        GateKind::Grid => {
            let path = spec
                .path
                .as_ref()
                .ok_or_else(|| src.error(&key("type"), None, "grid gates need a `path`"))?;
            let full = match (&src.path, path.is_relative()) {
                (Some(cfg), true) => cfg.parent().unwrap_or(Path::new(".")).join(path),
                _ => path.clone(),
            };
            read_any(&full)
                .map(Into::into)
                .map_err(|e| src.error(&key("path"), None, format!("{}: {e}", full.display())))
        }
    }
}

fn build_lattice(
    spec: &LatticeSpec,
    keys: &[&str],
    src: &Source,
    default: (f64, u32),
) -> Result<BoxLattice, ConfigError> {
    let path = |k: &'static str| {
        let mut v = keys.to_vec();
        v.push(k);
        v
    };
    let l = spec.box_size.unwrap_or(default.0);
    if !positive(l) {
        return Err(src.error(
            &path("L"),
            Some("--box-size"),
            format!("box size must be positive, got {l}"),
        ));
    }
    let lattice = match (spec.cutoff, spec.k_max) {
        (Some(n), _) => BoxLattice::new(l, n),
        (None, Some(k)) => {
            if !positive(k) {
                return Err(src.error(&path("k_max"), None, format!("k_max must be positive, got {k}")));
            }
            BoxLattice::with_k_max(l, k)
        }
        (None, None) => BoxLattice::new(l, default.1),
    }
    .map_err(|e| src.error(&path("N"), Some("--cutoff"), e.to_string()))?;
    match spec.support_tolerance {
        Some(t) => lattice
            .with_support_tolerance(t)
            .map_err(|e| src.error(&path("support_tolerance"), None, e.to_string())),
        None => Ok(lattice),
    }
}

/// Defaults for a bare command line: two unit Gaussians of width 1 along
/// ŷ and ẑ, separations 0..8 in 33 steps along x̂.
pub fn resolve(command: CommandKind, cfg: &RunConfig, src: &Source, o: &Overrides) -> Result<Plan, ConfigError> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(src.error(
                &["command"],
                None,
                format!("config is for `{}` but `{}` was requested", c.name(), command.name()),
            ));
        }
    }
    let gates = cfg.gates.clone().unwrap_or_default();
    let electric = build_gate(&gates.electric.unwrap_or_default(), Vec3::Y, o.width, src, "electric")?;
    let magnetic = build_gate(&gates.magnetic.unwrap_or_default(), Vec3::Z, o.width, src, "magnetic")?;

    let sw = cfg.sweep.clone().unwrap_or_default();
    let sweep = Sweep {
        start: o.start.or(sw.start).unwrap_or(0.0),
        stop: o.stop.or(sw.stop).unwrap_or(8.0),
        count: o.count.or(sw.count).unwrap_or(33),
        axis: sw.axis.unwrap_or(Vec3::X),
    };
    if sweep.count == 0 {
        return Err(src.error(&["sweep", "count"], Some("--count"), "sweep needs at least one point"));
    }
    if !sweep.start.is_finite() || !sweep.stop.is_finite() {
        return Err(src.error(&["sweep", "start"], Some("--start"), "sweep bounds must be finite"));
    }
    let axis = sweep
        .axis
        .normalized()
        .filter(|a| a.is_finite())
        .ok_or_else(|| src.error(&["sweep", "axis"], None, "sweep axis must be a nonzero vector"))?;
    let sweep = Sweep { axis, ..sweep };

    let mut lat_spec = cfg.lattice.clone().unwrap_or_default();
    if o.box_size.is_some() {
        lat_spec.box_size = o.box_size;
    }
    if o.cutoff.is_some() {
        lat_spec.cutoff = o.cutoff;
        lat_spec.k_max = None;
    }
    let lattice = build_lattice(&lat_spec, &["lattice"], src, (12.0, 4))?;

    let conv = cfg.converge.clone().unwrap_or_default();
    let tol = conv.support_tolerance.unwrap_or(5e-2);
    let converge_lattices = match &conv.lattices {
        Some(list) => list
            .iter()
            .map(|s| {
                let s = LatticeSpec {
                    support_tolerance: s.support_tolerance.or(Some(tol)),
                    ..s.clone()
                };
                build_lattice(&s, &["converge", "lattices"], src, (12.0, 16))
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let k_max = conv.k_max.unwrap_or(8.0);
            conv.box_sizes
                .clone()
                .unwrap_or_else(|| vec![6.0, 9.0, 12.0])
                .into_iter()
                .map(|l| {
                    let s = LatticeSpec {
                        box_size: Some(l),
                        cutoff: None,
                        k_max: Some(k_max),
                        support_tolerance: Some(tol),
                    };
                    build_lattice(&s, &["converge", "box_sizes"], src, (l, 1))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    if converge_lattices.is_empty() {
        return Err(src.error(&["converge"], None, "convergence study needs at least one lattice"));
    }
    let converge_separation = conv.separation.unwrap_or(std::f64::consts::SQRT_2);
    if !converge_separation.is_finite() {
        return Err(src.error(&["converge", "separation"], None, "separation must be finite"));
    }

    let n_samples = o.samples.or(cfg.n_samples).unwrap_or(100_000);
    if n_samples < MIN_MC_SAMPLES {
        return Err(src.error(
            &["n_samples"],
            Some("--samples"),
            format!("n_samples must be at least {MIN_MC_SAMPLES}, got {n_samples}"),
        ));
    }
    let reference_length = o
        .reference_length
        .or(cfg.units.as_ref().and_then(|u| u.reference_length))
        .unwrap_or(1e-9);
    if !positive(reference_length) {
        return Err(src.error(
            &["units", "reference_length"],
            Some("--reference-length"),
            "reference length must be positive",
        ));
    }
    let sc = cfg.scenario.clone().unwrap_or_default();
    let scenario_l = o.gate_length.or(sc.l).unwrap_or(1e-9);
    if !positive(scenario_l) {
        return Err(src.error(
            &["scenario", "l"],
            Some("--gate-length"),
            "gate length must be positive",
        ));
    }
    let intensity = o.intensity.or(sc.intensity).unwrap_or(1e19);
    if !positive(intensity) {
        return Err(src.error(
            &["scenario", "intensity"],
            Some("--intensity"),
            "intensity must be positive",
        ));
    }
    Ok(Plan {
        command,
        electric,
        magnetic,
        sweep,
        lattice,
        converge_lattices,
        converge_separation,
        seed: o.seed.or(cfg.seed).unwrap_or(0),
        n_samples,
        reference_length,
        mode: o.mode.or(cfg.mode).unwrap_or(ConstantsMode::Exact),
        scenario_l,
        intensity,
        out_dir: o
            .out
            .clone()
            .or(cfg.output.as_ref().and_then(|x| x.dir.clone()))
            .unwrap_or_else(|| PathBuf::from(".")),
    })
}
