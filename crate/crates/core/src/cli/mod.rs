//! Batch front end: `gatefield <command> [--config run.json] [flags]`.
//!
//! Exit status is 0 on success, 2 for invalid configuration and 3 when a
//! numerical precondition fails. Output files are written only after every
//! computation has succeeded.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::Parser;
use serde::Serialize;

use crate::boxmodes::{discrete_h, discrete_variance, mc_variance, LatticeSummary, McEstimate};
use crate::commutator::{h_closed_form, h_real_space, printed_bound_diagnostic, BoundResult, GatePair};
use crate::error::Error;
use crate::scenario::{nanogate_example, ConstantsMode};
use crate::units::Dimension;
use crate::vacuum::{variance, variance_gaussian_closed, UncertaintyReport, INTERNAL_UNITS};
use crate::vec3::{Axis, Vec3};

pub use config::{CommandKind, ConfigError, Overrides, Plan, RunConfig, Source};
use output::{approx, exact, exact_opt, Outputs, Table, NA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_IO: i32 = 1;

const ENERGY_DENSITY: &str = "hbar*c/L0^4";
const FIELD: &str = "(hbar*c)^0.5/L0^2";

#[derive(Parser, Debug)]
#[command(
    name = "gatefield",
    version,
    about = "Uncertainty bounds for gated electromagnetic fields"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandKind,
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// exact | paper-constants
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<ConstantsMode>,
    /// Width l of both gates (L0).
    #[arg(long)]
    pub width: Option<f64>,
    /// First separation of the sweep (L0).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<f64>,
    /// Last separation of the sweep (L0).
    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<f64>,
    /// Number of sweep points.
    #[arg(long)]
    pub count: Option<usize>,
    /// Box side L (L0).
    #[arg(long)]
    pub box_size: Option<f64>,
    /// Mode cutoff N per axis.
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Scenario gate width (m).
    #[arg(long)]
    pub gate_length: Option<f64>,
    /// Scenario intensity (J s^-1 m^-2).
    #[arg(long)]
    pub intensity: Option<f64>,
    /// Reference length L0 (m) for SI columns.
    #[arg(long)]
    pub reference_length: Option<f64>,
}

fn parse_mode(s: &str) -> Result<ConstantsMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            seed: self.seed,
            mode: self.mode,
            width: self.width,
            start: self.start,
            stop: self.stop,
            count: self.count,
            box_size: self.box_size,
            cutoff: self.cutoff,
            samples: self.samples,
            gate_length: self.gate_length,
            intensity: self.intensity,
            reference_length: self.reference_length,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerical(Error),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_VALIDATION,
            RunError::Numerical(e) if e.is_validation() => EXIT_VALIDATION,
            RunError::Numerical(_) => EXIT_NUMERICAL,
            RunError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Numerical(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Numerical(e)
    }
}

/// Parses arguments, runs, writes outputs and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>, RunError> {
    let src = match &cli.config {
        Some(p) => Source::load(p)?,
        None => Source {
            path: None,
            text: String::new(),
        },
    };
    let cfg = match &cli.config {
        Some(_) => src.parse()?,
        None => RunConfig::default(),
    };
    let plan = config::resolve(cli.command, &cfg, &src, &cli.overrides())?;
    let out = run(&plan)?;
    out.write(&plan.out_dir).map_err(RunError::Io)
}

/// Computes every report for a plan without touching the filesystem.
pub fn run(plan: &Plan) -> Result<Outputs, Error> {
    match plan.command {
        CommandKind::Bound => bound(plan),
        CommandKind::Variance => variance_cmd(plan),
        CommandKind::Check => check(plan),
        CommandKind::Converge => converge(plan),
        CommandKind::Example => example(plan),
        CommandKind::Mc => mc(plan),
    }
}

fn pair_at(plan: &Plan, s: f64) -> GatePair {
    GatePair {
        electric: plan.electric.shifted(plan.sweep.axis * s),
        magnetic: plan.magnetic.clone(),
    }
}

fn commutator(pair: &GatePair) -> Result<BoundResult, Error> {
    match h_closed_form(pair) {
        Some(r) => Ok(r),
        None => h_real_space(pair),
    }
}

fn axis_of(v: Vec3) -> Option<Axis> {
    Axis::ALL
        .into_iter()
        .find(|&a| (v[a.index()].abs() - 1.0).abs() < 1e-12 && (v.norm() - 1.0).abs() < 1e-12)
}

/// The printed componentwise diagnostic, defined only for equal-width
/// Gaussians polarized along two different coordinate axes.
fn printed_diagnostic(pair: &GatePair) -> Result<Option<f64>, Error> {
    let (Some(e), Some(g)) = (pair.electric.as_gaussian(), pair.magnetic.as_gaussian()) else {
        return Ok(None);
    };
    if (e.width() - g.width()).abs() > 1e-12 * e.width() {
        return Ok(None);
    }
    let (Some(j), Some(s)) = (axis_of(e.direction()), axis_of(g.direction())) else {
        return Ok(None);
    };
    if j == s {
        return Ok(None);
    }
    let d = printed_bound_diagnostic(e.width(), e.center() - g.center(), j, s)?;
    Ok(Some((e.amplitude() * g.amplitude()).abs() * d))
}

fn bound(plan: &Plan) -> Result<Outputs, Error> {
    let units = plan.mode.units(plan.reference_length)?;
    let mut t = Table::new(
        "gatefield.bound.v1",
        &[
            ("separation", "L0"),
            ("h", ENERGY_DENSITY),
            ("robertson_bound", ENERGY_DENSITY),
            ("printed_diagnostic", ENERGY_DENSITY),
            ("robertson_bound_si", "J*m^-3"),
            ("method", "-"),
            ("robertson_bound_approx", ENERGY_DENSITY),
        ],
    );
    for s in plan.sweep.points() {
        let pair = pair_at(plan, s);
        let r = commutator(&pair)?;
        let si = units.from_internal(r.robertson_bound, Dimension::EnergyDensity)?.value;
        t.push(vec![
            exact(s),
            exact(r.h_value),
            exact(r.robertson_bound),
            exact_opt(printed_diagnostic(&pair)?),
            exact(si),
            r.method.name().to_string(),
            approx(r.robertson_bound),
        ]);
    }
    let mut out = Outputs::default();
    out.table("bound.csv", &t);
    Ok(out)
}

fn variance_cmd(plan: &Plan) -> Result<Outputs, Error> {
    let mut t = Table::new(
        "gatefield.variance.v1",
        &[
            ("gate", "-"),
            ("variance", ENERGY_DENSITY),
            ("delta", FIELD),
            ("method", "-"),
            ("variance_closed_form", ENERGY_DENSITY),
            ("relative_difference", "1"),
            ("delta_approx", FIELD),
        ],
    );
    for (name, g) in [("electric", &plan.electric), ("magnetic", &plan.magnetic)] {
        let v = variance(g)?;
        let closed = match g.as_gaussian() {
            Some(gs) => Some(gs.amplitude().powi(2) * variance_gaussian_closed(gs.width())?),
            None => None,
        };
        t.push(vec![
            name.to_string(),
            exact(v.value),
            exact(v.value.max(0.0).sqrt()),
            v.method.name().to_string(),
            exact_opt(closed),
            exact_opt(closed.filter(|c| *c != 0.0).map(|c| (v.value - c) / c)),
            approx(v.value.max(0.0).sqrt()),
        ]);
    }
    let mut out = Outputs::default();
    out.table("variance.csv", &t);
    Ok(out)
}

#[derive(Serialize)]
struct CheckRow {
    separation: f64,
    report: UncertaintyReport,
}

#[derive(Serialize)]
struct CheckSummary {
    schema: &'static str,
    units: &'static str,
    min_margin: Option<f64>,
    min_margin_separation: Option<f64>,
    all_satisfy_robertson: bool,
    rows: Vec<CheckRow>,
}

fn check(plan: &Plan) -> Result<Outputs, Error> {
    let de = variance(&plan.electric)?;
    let dh = variance(&plan.magnetic)?;
    let mut t = Table::new(
        "gatefield.check.v1",
        &[
            ("separation", "L0"),
            ("delta_e", FIELD),
            ("delta_h", FIELD),
            ("bound", ENERGY_DENSITY),
            ("product", ENERGY_DENSITY),
            ("margin", "1"),
            ("bound_method", "-"),
            ("margin_approx", "1"),
        ],
    );
    let mut rows = Vec::new();
    for s in plan.sweep.points() {
        let r = commutator(&pair_at(plan, s))?;
        let rep = UncertaintyReport::from_parts(de, dh, r.h_value, r.method);
        let (m, m_approx) = match rep.margin.value() {
            Some(v) => (exact(v), approx(v)),
            None => (rep.margin.to_string(), rep.margin.to_string()),
        };
        t.push(vec![
            exact(s),
            exact(rep.delta_e),
            exact(rep.delta_h),
            exact(rep.bound),
            exact(rep.product),
            m,
            rep.methods.bound.name().to_string(),
            m_approx,
        ]);
        rows.push(CheckRow {
            separation: s,
            report: rep,
        });
    }
    let min = rows
        .iter()
        .filter_map(|r| r.report.margin.value().map(|m| (m, r.separation)))
        .fold(None, |acc: Option<(f64, f64)>, x| match acc {
            Some(a) if a.0 <= x.0 => Some(a),
            _ => Some(x),
        });
    let summary = CheckSummary {
        schema: "gatefield.check.v1",
        units: INTERNAL_UNITS,
        min_margin: min.map(|m| m.0),
        min_margin_separation: min.map(|m| m.1),
        all_satisfy_robertson: rows.iter().all(|r| r.report.satisfies_robertson()),
        rows,
    };
    let mut out = Outputs::default();
    out.table("check.csv", &t);
    out.json("check.json", &summary);
    Ok(out)
}

fn rel(a: f64, b: f64) -> Option<f64> {
    (b != 0.0).then(|| (a - b) / b)
}

fn converge(plan: &Plan) -> Result<Outputs, Error> {
    let pair = pair_at(plan, plan.converge_separation);
    let v_cont = variance(&pair.electric)?.value;
    let h_cont = commutator(&pair)?.h_value;
    let mut t = Table::new(
        "gatefield.converge.v1",
        &[
            ("L", "L0"),
            ("N", "1"),
            ("k_max", "L0^-1"),
            ("mode_count", "1"),
            ("discrete_variance", ENERGY_DENSITY),
            ("continuum_variance", ENERGY_DENSITY),
            ("variance_relative_error", "1"),
            ("discrete_h", ENERGY_DENSITY),
            ("continuum_h", ENERGY_DENSITY),
            ("h_relative_error", "1"),
            ("variance_relative_error_approx", "1"),
        ],
    );
    for lat in &plan.converge_lattices {
        let v = discrete_variance(&pair.electric, lat)?;
        let h = discrete_h(&pair, lat)?.h_value;
        let s = lat.summary();
        let ev = rel(v, v_cont);
        t.push(vec![
            exact(s.box_size),
            s.cutoff.to_string(),
            exact(s.k_max),
            s.mode_count.to_string(),
            exact(v),
            exact(v_cont),
            exact_opt(ev),
            exact(h),
            exact(h_cont),
            exact_opt(rel(h, h_cont)),
            ev.map(approx).unwrap_or_else(|| NA.to_string()),
        ]);
    }
    let mut out = Outputs::default();
    out.table("converge.csv", &t);
    Ok(out)
}

fn example(plan: &Plan) -> Result<Outputs, Error> {
    let r = nanogate_example(plan.scenario_l, plan.intensity, plan.mode)?;
    let mut out = Outputs::default();
    out.json("example.json", &r);
    out.text("example.txt", r.to_table());
    Ok(out)
}

#[derive(Serialize)]
struct McReport {
    schema: &'static str,
    units: &'static str,
    estimate: McEstimate,
    lattice: LatticeSummary,
    discrete_variance: f64,
    z_score: Option<f64>,
}

fn mc(plan: &Plan) -> Result<Outputs, Error> {
    let est = mc_variance(&plan.electric, &plan.lattice, plan.seed, plan.n_samples)?;
    let disc = discrete_variance(&plan.electric, &plan.lattice)?;
    let z = (est.std_error > 0.0).then(|| (est.estimate - disc) / est.std_error);
    let lat = plan.lattice.summary();
    let mut t = Table::new(
        "gatefield.mc.v1",
        &[
            ("seed", "1"),
            ("n_samples", "1"),
            ("L", "L0"),
            ("N", "1"),
            ("estimate", ENERGY_DENSITY),
            ("std_error", ENERGY_DENSITY),
            ("discrete_variance", ENERGY_DENSITY),
            ("z_score", "1"),
            ("imag_residual", "1"),
            ("estimate_approx", ENERGY_DENSITY),
        ],
    );
    t.push(vec![
        est.seed.to_string(),
        est.n_samples.to_string(),
        exact(lat.box_size),
        lat.cutoff.to_string(),
        exact(est.estimate),
        exact(est.std_error),
        exact(disc),
        exact_opt(z),
        exact(est.imag_residual),
        approx(est.estimate),
    ]);
    let report = McReport {
        schema: "gatefield.mc.v1",
        units: INTERNAL_UNITS,
        estimate: est,
        lattice: lat,
        discrete_variance: disc,
        z_score: z,
    };
    let mut out = Outputs::default();
    out.table("mc.csv", &t);
    out.json("mc.json", &report);
    Ok(out)
}
