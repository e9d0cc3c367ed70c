//! Vacuum and coherent-state fluctuations of gated fields.
//!
//! The variance of `Ê(η)` in the vacuum is
//! `∫ d³k/(2π)³ · 2πk · |P(k) η̃(k)|²` with `P` the transverse projector
//! (ħ = c = 1). `Ĥ(γ)` has the same expression in `γ`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::commutator::{
    h_closed_form, h_real_space, printed_bound_diagnostic, robertson_bound, BoundMethod, GatePair,
};
use crate::error::{Error, Result};
use crate::gates::{grid_fourier, transverse_part, GridVectorField, Lattice3, VectorGate, MAX_GRID_NODES};
use crate::quadrature::{adaptive_gauss_legendre, GaussLegendre};
use crate::summation::ordered_sum;
use crate::vec3::{Axis, Vec3};

/// Radial cutoff in units of `1/l_min`.
pub const K_MAX_WIDTHS: f64 = 12.0;
/// Largest spectral mass allowed beyond the cutoff, relative to the total.
pub const TAIL_LIMIT: f64 = 1e-8;
/// Relative tolerance of the radial quadrature.
pub const RADIAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceMethod {
    /// Closed-form Gaussian value `1/(3π l⁴)`.
    ClosedForm,
    /// Angular integral in closed form, adaptive radial quadrature.
    RadialQuadrature,
    /// Gauss–Legendre × trapezoid angular rule inside adaptive radial quadrature.
    SphericalQuadrature,
    /// Riemann sum over the FFT wavevector grid.
    GridSum,
}

impl VarianceMethod {
    pub fn name(self) -> &'static str {
        match self {
            VarianceMethod::ClosedForm => "closed_form",
            VarianceMethod::RadialQuadrature => "radial_quadrature",
            VarianceMethod::SphericalQuadrature => "spherical_quadrature",
            VarianceMethod::GridSum => "grid_sum",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variance {
    pub value: f64,
    pub method: VarianceMethod,
}

/// `1/(3π l⁴)`.
pub fn variance_gaussian_closed(l: f64) -> Result<f64> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::invalid(format!("l must be positive, got {l}")));
    }
    Ok(1.0 / (3.0 * PI * l.powi(4)))
}

/// Vacuum variance of a gated field by numerical quadrature.
pub fn variance_quadrature(g: &VectorGate) -> Result<f64> {
    Ok(variance(g)?.value)
}

/// Vacuum variance with the method used.
pub fn variance(g: &VectorGate) -> Result<Variance> {
    if let Some(gauss) = g.as_gaussian() {
        let a2 = gauss.amplitude().powi(2);
        let l = gauss.width();
        // ∫dΩ (1 - cos²θ) = 8π/3; prefactor 2π/(2π)³
        let pref = 2.0 * PI / (8.0 * PI.powi(3)) * (8.0 * PI / 3.0) * a2;
        let f = |k: f64| k.powi(3) * (-(l * k).powi(2)).exp();
        let value = pref * radial(&f, K_MAX_WIDTHS / l, 0.0)?;
        return Ok(Variance {
            value,
            method: VarianceMethod::RadialQuadrature,
        });
    }
    match g {
        VectorGate::Grid(field) => Ok(Variance {
            value: variance_grid(field, 2)?,
            method: VarianceMethod::GridSum,
        }),
        _ => {
            let profiles = g.profiles();
            let l_min = g.min_width().ok_or_else(|| Error::invalid("gate has no terms"))?;
            let centroid = profiles
                .iter()
                .fold(Vec3::ZERO, |acc, p| acc + p.center * (1.0 / profiles.len() as f64));
            let spread = profiles
                .iter()
                .map(|p| (p.center - centroid).norm())
                .fold(0.0, f64::max);
            let k_max = K_MAX_WIDTHS / l_min;
            // unprojected power bounds the transverse one and sets the noise floor
            let rule = GaussLegendre::new(15);
            let panels = 16;
            let width = k_max / panels as f64;
            let scale: f64 = (0..panels)
                .map(|p| {
                    let a = p as f64 * width;
                    rule.integrate(|k| k * shell_power(g, k, spread).1, a, a + width)
                })
                .sum();
            let f = |k: f64| k * shell_power(g, k, spread).0;
            let value = 2.0 * PI / (8.0 * PI.powi(3)) * radial(&f, k_max, 1e-13 * scale)?;
            Ok(Variance {
                value,
                method: VarianceMethod::SphericalQuadrature,
            })
        }
    }
}

/// `∫_0^{k_max} f`, with the spectral tail on `[k_max, 2 k_max]` checked.
fn radial<F: Fn(f64) -> f64>(f: &F, k_max: f64, abs_tol: f64) -> Result<f64> {
    let body = adaptive_gauss_legendre(f, 0.0, k_max, RADIAL_TOL, abs_tol)?;
    let tail = adaptive_gauss_legendre(f, k_max, 2.0 * k_max, 1e-6, abs_tol)?;
    let total = body.value.abs() + tail.value.abs();
    if tail.value.abs() > TAIL_LIMIT * total + abs_tol {
        return Err(Error::Unresolved {
            tail: tail.value.abs() / total,
            limit: TAIL_LIMIT,
        });
    }
    Ok(body.value)
}

/// `∫ dΩ |P η̃(k k̂)|²` and `∫ dΩ |η̃(k k̂)|²` on the sphere of radius `k`.
/// The polar order grows with `k·spread` to follow the phase oscillation
/// between profiles.
fn shell_power(g: &VectorGate, k: f64, spread: f64) -> (f64, f64) {
    let n = 16 + (2.0 * k * spread).ceil() as usize;
    let rule = GaussLegendre::new(n);
    let n_phi = 2 * n;
    let d_phi = 2.0 * PI / n_phi as f64;
    let cells = n * n_phi;
    let term = |c: usize, project: bool| {
        let (i, j) = (c / n_phi, c % n_phi);
        let t = rule.nodes()[i];
        let s = (1.0 - t * t).max(0.0).sqrt();
        let phi = j as f64 * d_phi;
        let k_hat = Vec3::new(s * phi.cos(), s * phi.sin(), t);
        let v = g.fourier(k_hat * k);
        let p = if project {
            transverse_part(&v, k_hat).expect("unit direction")
        } else {
            v
        };
        rule.weights()[i] * d_phi * p.norm_sq()
    };
    (
        ordered_sum(cells, |c| term(c, true)),
        ordered_sum(cells, |c| term(c, false)),
    )
}

/// Riemann sum `(1/V) Σ_{k≠0} 2πk |P η̃(k)|²` on the FFT wavevector grid,
/// after zero-padding the grid by `padding` along each axis.
pub fn variance_grid(field: &GridVectorField, padding: usize) -> Result<f64> {
    if padding == 0 {
        return Err(Error::invalid("padding must be at least 1"));
    }
    let lat = *field.lattice();
    let padded = if padding == 1 {
        field.clone()
    } else {
        let dims = lat.dims.map(|n| n * padding);
        let pad: [f64; 3] = std::array::from_fn(|a| ((dims[a] - lat.dims[a]) / 2) as f64 * lat.spacing);
        let target = Lattice3::new(lat.origin - Vec3::from(pad), lat.spacing, dims)?;
        if target.len() > MAX_GRID_NODES {
            return Err(Error::GridMismatch(format!(
                "padded grid of {} nodes exceeds {MAX_GRID_NODES}",
                target.len()
            )));
        }
        field.check_boundary_decay()?;
        field.resample_onto(&target)?
    };
    let spec = grid_fourier(&padded)?;
    let k_nyq: [f64; 3] = std::array::from_fn(|_| PI / lat.spacing);
    let weight = |idx: usize| -> (f64, bool) {
        let k = spec.wavevector(idx);
        let kn = k.norm();
        if kn == 0.0 {
            return (0.0, false);
        }
        let p = transverse_part(&spec.coefficients()[idx], k).expect("k != 0");
        let outer = (0..3).any(|a| k[a].abs() >= 0.75 * k_nyq[a]);
        (2.0 * PI * kn * p.norm_sq(), outer)
    };
    let total = ordered_sum(spec.len(), |i| weight(i).0);
    let edge = ordered_sum(spec.len(), |i| {
        let (w, outer) = weight(i);
        if outer {
            w
        } else {
            0.0
        }
    });
    if total > 0.0 && edge > TAIL_LIMIT * total {
        return Err(Error::Unresolved {
            tail: edge / total,
            limit: TAIL_LIMIT,
        });
    }
    Ok(total / spec.cell_volume())
}

/// Classical field displacing the vacuum into a coherent state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClassicalField {
    Uniform {
        value: Vec3,
    },
    /// `amplitude · cos(k·r + phase)`.
    PlaneWave {
        amplitude: Vec3,
        wavevector: Vec3,
        #[serde(default)]
        phase: f64,
    },
    Grid(GridVectorField),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentStats {
    pub mean: f64,
    pub std: f64,
}

/// Mean and spread of a gated field in the coherent state of `field`.
/// The spread is the vacuum one; only the mean depends on the field.
pub fn coherent_state_stats(g: &VectorGate, field: &ClassicalField) -> Result<CoherentStats> {
    let mean = match field {
        ClassicalField::Uniform { value } => {
            check_finite(*value, "uniform field")?;
            let t = g.fourier(Vec3::ZERO);
            (0..3).map(|a| t.0[a].re * value[a]).sum()
        }
        ClassicalField::PlaneWave {
            amplitude,
            wavevector,
            phase,
        } => {
            check_finite(*amplitude, "plane-wave amplitude")?;
            check_finite(*wavevector, "wavevector")?;
            if !phase.is_finite() {
                return Err(Error::invalid("plane-wave phase must be finite"));
            }
            // ∫ η·a cos(k·r + φ) = Re(e^{iφ} a·η̃(-k))
            let t = g.fourier(-*wavevector);
            let s: Complex64 = (0..3).map(|a| t.0[a] * amplitude[a]).sum();
            (Complex64::from_polar(1.0, *phase) * s).re
        }
        ClassicalField::Grid(f) => {
            let lat = f.lattice();
            let (lo, hi) = g.support_box();
            let slack = 1e-9 * lat.spacing;
            let (flo, fhi) = (lat.origin, lat.upper());
            if let Some(a) = Axis::ALL
                .iter()
                .find(|a| lo[a.index()] < flo[a.index()] - slack || hi[a.index()] > fhi[a.index()] + slack)
            {
                return Err(Error::invalid(format!(
                    "classical field grid does not cover the gate support along {}",
                    a.label()
                )));
            }
            g.sample_on(lat)?.dot_integral(f)?
        }
    };
    Ok(CoherentStats {
        mean,
        std: variance_quadrature(g)?.sqrt(),
    })
}

fn check_finite(v: Vec3, name: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite")))
    }
}

/// `product / bound`, or unconstrained when the bound vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Margin {
    Finite(f64),
    Unconstrained,
}

impl Margin {
    pub fn value(self) -> Option<f64> {
        match self {
            Margin::Finite(v) => Some(v),
            Margin::Unconstrained => None,
        }
    }
}

impl fmt::Display for Margin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Margin::Finite(v) => write!(f, "{v}"),
            Margin::Unconstrained => f.write_str("unconstrained"),
        }
    }
}

impl Serialize for Margin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Margin::Finite(v) => s.serialize_f64(*v),
            Margin::Unconstrained => s.serialize_str("unconstrained"),
        }
    }
}

impl<'de> Deserialize<'de> for Margin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Margin::Finite(v)),
            Raw::Text(t) if t == "unconstrained" => Ok(Margin::Unconstrained),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unknown margin {t:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMethods {
    pub delta_e: VarianceMethod,
    pub delta_h: VarianceMethod,
    pub bound: BoundMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub delta_e: f64,
    pub delta_h: f64,
    /// Robertson bound `|h|/2`.
    pub bound: f64,
    pub product: f64,
    pub margin: Margin,
    pub methods: ReportMethods,
    pub units: String,
}

pub const INTERNAL_UNITS: &str = "hbar = c = 1, lengths in L0";

impl UncertaintyReport {
    pub fn from_parts(delta_e: Variance, delta_h: Variance, h: f64, bound_method: BoundMethod) -> Self {
        let (de, dh) = (delta_e.value.max(0.0).sqrt(), delta_h.value.max(0.0).sqrt());
        let bound = robertson_bound(h);
        let product = de * dh;
        let margin = if bound > 0.0 {
            Margin::Finite(product / bound)
        } else {
            Margin::Unconstrained
        };
        Self {
            delta_e: de,
            delta_h: dh,
            bound,
            product,
            margin,
            methods: ReportMethods {
                delta_e: delta_e.method,
                delta_h: delta_h.method,
                bound: bound_method,
            },
            units: INTERNAL_UNITS.to_string(),
        }
    }

    /// `product ≥ bound` up to rounding.
    pub fn satisfies_robertson(&self) -> bool {
        self.product >= self.bound - 1e-9 * self.product.max(1.0)
    }
}

/// Vacuum uncertainty report for a gate pair. Analytic pairs use the closed
/// commutator form, grids the real-space quadrature.
pub fn uncertainty_report(pair: &GatePair) -> Result<UncertaintyReport> {
    let de = variance(&pair.electric)?;
    let dh = variance(&pair.magnetic)?;
    let h = match h_closed_form(pair) {
        Some(r) => r,
        None => h_real_space(pair)?,
    };
    Ok(UncertaintyReport::from_parts(de, dh, h.h_value, h.method))
}

/// The vacuum variance of a width-`l` Gaussian against the printed
/// componentwise bound at its maximizing separation, and against Robertson.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrintedComparison {
    pub variance: f64,
    pub printed_bound: f64,
    pub printed_holds: bool,
    pub robertson_bound: f64,
    pub robertson_holds: bool,
}

pub fn printed_comparison(l: f64) -> Result<PrintedComparison> {
    let variance = variance_gaussian_closed(l)?;
    let sep = Vec3::new(std::f64::consts::SQRT_2 * l, 0.0, 0.0);
    let printed_bound = printed_bound_diagnostic(l, sep, Axis::Y, Axis::Z)?;
    let robertson = crate::commutator::h_gaussian_closed(l, l, sep, Vec3::Y, Vec3::Z)?.robertson_bound;
    Ok(PrintedComparison {
        variance,
        printed_bound,
        printed_holds: variance >= printed_bound,
        robertson_bound: robertson,
        robertson_holds: variance >= robertson,
    })
}
