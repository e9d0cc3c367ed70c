//! Nanometer-gate scenario in SI units: how large the vacuum uncertainty
//! bound is compared with the field product of an intense light pulse.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::commutator::{h_gaussian_closed, optimal_separation, printed_bound_diagnostic};
use crate::error::{Error, Result};
use crate::units::{Dimension, Quantity, UnitSystem};
use crate::vec3::{Axis, Vec3};

/// Order-of-magnitude values obtained by rounding every intermediate step.
pub const ROUNDED_CHAIN_RATIO: f64 = 4e-2;
pub const ROUNDED_CHAIN_DELTA_E_OVER_E: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantsMode {
    /// CODATA constants and the Robertson bound `(ħ/2)|h|`.
    Exact,
    /// `hc = 2e-25 J·m`, `c = 3e8 m/s` and the componentwise bound `ħ|h|`.
    #[serde(alias = "paper-constants")]
    PaperConstants,
}

impl ConstantsMode {
    pub fn name(self) -> &'static str {
        match self {
            ConstantsMode::Exact => "exact",
            ConstantsMode::PaperConstants => "paper_constants",
        }
    }

    pub fn units(self, reference_length: f64) -> Result<UnitSystem> {
        match self {
            ConstantsMode::Exact => UnitSystem::new(reference_length),
            ConstantsMode::PaperConstants => UnitSystem::rounded(reference_length),
        }
    }
}

impl std::str::FromStr for ConstantsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "exact" => Ok(ConstantsMode::Exact),
            "paper_constants" => Ok(ConstantsMode::PaperConstants),
            _ => Err(Error::invalid(format!(
                "unknown mode {s:?} (expected exact or paper-constants)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    /// m
    pub gate_l: f64,
    /// J·s⁻¹·m⁻²
    pub intensity: f64,
    /// J·m⁻³, maximized over gate separation.
    pub bound_product_max: f64,
    /// m
    pub optimal_separation: f64,
    /// J·m⁻³, `4πI/c`.
    pub eh_product: f64,
    /// J·m⁻³, the same product through the internal-unit pipeline.
    pub eh_product_internal: f64,
    pub ratio: f64,
    pub delta_e_over_e: f64,
    pub mode: ConstantsMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounded_chain_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rounded_chain_delta_e_over_e: Option<f64>,
}

impl ScenarioReport {
    /// Two-column table: quantity, value with unit.
    pub fn to_table(&self) -> String {
        let mut rows = vec![
            ("mode", self.mode.name().to_string()),
            ("gate width l", format!("{:e} m", self.gate_l)),
            ("intensity I", format!("{:e} J*s^-1*m^-2", self.intensity)),
            ("optimal separation", format!("{:e} m", self.optimal_separation)),
            ("bound product (max)", format!("{:e} J*m^-3", self.bound_product_max)),
            ("E*H = 4*pi*I/c", format!("{:e} J*m^-3", self.eh_product)),
            ("ratio", format!("{:e}", self.ratio)),
            ("dE/E", format!("{:e}", self.delta_e_over_e)),
        ];
        if let (Some(r), Some(d)) = (self.rounded_chain_ratio, self.rounded_chain_delta_e_over_e) {
            rows.push(("ratio (rounded chain)", format!("{r:e}")));
            rows.push(("dE/E (rounded chain)", format!("{d:e}")));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        out
    }
}

/// Uncertainty bound versus `E·H` for Gaussian gates of width `l` (m) probing
/// a plane-wave pulse of intensity `I` (J·s⁻¹·m⁻²). `E = H` and `ΔE = ΔH`
/// give `ΔE/E = √(bound / EH)`.
pub fn nanogate_example(l: f64, intensity: f64, mode: ConstantsMode) -> Result<ScenarioReport> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::invalid(format!("gate width must be positive, got {l}")));
    }
    if !(intensity > 0.0 && intensity.is_finite()) {
        return Err(Error::invalid(format!("intensity must be positive, got {intensity}")));
    }
    let units = mode.units(l)?;
    let opt = optimal_separation(1.0)?;
    let sep = Vec3::new(opt.distance, 0.0, 0.0);
    let bound_internal = match mode {
        ConstantsMode::Exact => h_gaussian_closed(1.0, 1.0, sep, Vec3::Y, Vec3::Z)?.robertson_bound,
        ConstantsMode::PaperConstants => printed_bound_diagnostic(1.0, sep, Axis::Y, Axis::Z)?,
    };
    let bound_product_max = units.from_internal(bound_internal, Dimension::EnergyDensity)?.value;
    let eh_product = 4.0 * std::f64::consts::PI * intensity / units.c_si;
    let i_internal = units.to_internal(Quantity::new(intensity, Dimension::Intensity))?;
    let eh_product_internal = units
        .from_internal(4.0 * std::f64::consts::PI * i_internal, Dimension::EnergyDensity)?
        .value;
    let ratio = bound_product_max / eh_product;
    let rounded = matches!(mode, ConstantsMode::PaperConstants);
    Ok(ScenarioReport {
        gate_l: l,
        intensity,
        bound_product_max,
        optimal_separation: opt.distance * l,
        eh_product,
        eh_product_internal,
        ratio,
        delta_e_over_e: ratio.sqrt(),
        mode,
        rounded_chain_ratio: rounded.then_some(ROUNDED_CHAIN_RATIO),
        rounded_chain_delta_e_over_e: rounded.then_some(ROUNDED_CHAIN_DELTA_E_OVER_E),
    })
}
