//! Conversion between SI quantities and the dimensionless internal units.
//!
//! Internally ħ = c = 1 and lengths are measured in multiples of a reference
//! length L₀. An energy density of 1 internal unit is therefore ħc/L₀⁴ in
//! J·m⁻³. Field products E·H (Gaussian units) carry the same dimension as
//! an energy density and are always reported as such.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck constant, J·s (exact in the 2019 SI).
pub const PLANCK_SI: f64 = 6.626_070_15e-34;
/// Speed of light, m/s (exact).
pub const SPEED_OF_LIGHT_SI: f64 = 299_792_458.0;
/// Rounded h·c used by the order-of-magnitude nano-gate estimate, J·m.
pub const ROUNDED_HC_SI: f64 = 2e-25;
/// Rounded speed of light used by the same estimate, m/s.
pub const ROUNDED_C_SI: f64 = 3e8;

/// Physical dimension tags understood by the conversion layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Length,
    Wavenumber,
    EnergyDensity,
    FieldSquaredProduct,
    Intensity,
    Dimensionless,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Length,
        Dimension::Wavenumber,
        Dimension::EnergyDensity,
        Dimension::FieldSquaredProduct,
        Dimension::Intensity,
        Dimension::Dimensionless,
    ];

    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Length => "m",
            Dimension::Wavenumber => "m^-1",
            Dimension::EnergyDensity | Dimension::FieldSquaredProduct => "J*m^-3",
            Dimension::Intensity => "J*s^-1*m^-2",
            Dimension::Dimensionless => "1",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Length => "length",
            Dimension::Wavenumber => "wavenumber",
            Dimension::EnergyDensity => "energy_density",
            Dimension::FieldSquaredProduct => "field_squared_product",
            Dimension::Intensity => "intensity",
            Dimension::Dimensionless => "dimensionless",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Dimension::ALL
            .into_iter()
            .find(|d| d.name() == key)
            .ok_or_else(|| Error::UnsupportedDimension(s.to_string()))
    }
}

/// A value tagged with its physical dimension, in SI.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

impl Quantity {
    pub fn new(value: f64, dimension: Dimension) -> Self {
        Self { value, dimension }
    }
}

/// Physical constants plus the reference length that fixes internal units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    /// L₀ in meters.
    pub reference_length: f64,
    pub hbar_si: f64,
    pub c_si: f64,
    pub h_si: f64,
}

impl UnitSystem {
    /// CODATA constants with ħ derived as h/2π.
    pub fn new(reference_length: f64) -> Result<Self> {
        Self::with_constants(reference_length, PLANCK_SI, SPEED_OF_LIGHT_SI)
    }

    /// Rounded constants hc = 2e-25 J·m and c = 3e8 m/s.
    pub fn rounded(reference_length: f64) -> Result<Self> {
        Self::with_constants(reference_length, ROUNDED_HC_SI / ROUNDED_C_SI, ROUNDED_C_SI)
    }

    pub fn with_constants(reference_length: f64, h_si: f64, c_si: f64) -> Result<Self> {
        if !(reference_length > 0.0 && reference_length.is_finite()) {
            return Err(Error::invalid(format!(
                "reference length must be positive and finite, got {reference_length}"
            )));
        }
        if !(h_si > 0.0 && c_si > 0.0 && h_si.is_finite() && c_si.is_finite()) {
            return Err(Error::invalid("physical constants must be positive"));
        }
        Ok(Self {
            reference_length,
            hbar_si: h_si / (2.0 * PI),
            c_si,
            h_si,
        })
    }

    /// ħc/L₀⁴ in J·m⁻³, the internal unit of energy density.
    pub fn energy_density_unit(&self) -> f64 {
        self.hbar_si * self.c_si / self.reference_length.powi(4)
    }

    /// SI magnitude of one internal unit of `dimension`.
    pub fn unit_of(&self, dimension: Dimension) -> f64 {
        let l0 = self.reference_length;
        match dimension {
            Dimension::Length => l0,
            Dimension::Wavenumber => 1.0 / l0,
            Dimension::EnergyDensity | Dimension::FieldSquaredProduct => self.energy_density_unit(),
            Dimension::Intensity => self.energy_density_unit() * self.c_si,
            Dimension::Dimensionless => 1.0,
        }
    }

    pub fn to_internal(&self, q: Quantity) -> Result<f64> {
        to_internal(q, self)
    }

    pub fn from_internal(&self, x: f64, dimension: Dimension) -> Result<Quantity> {
        from_internal(x, dimension, self)
    }
}

/// SI quantity → internal dimensionless value.
pub fn to_internal(q: Quantity, u: &UnitSystem) -> Result<f64> {
    if !q.value.is_finite() {
        return Err(Error::invalid(format!("non-finite {} value", q.dimension)));
    }
    Ok(q.value / u.unit_of(q.dimension))
}

/// Internal dimensionless value → SI quantity.
pub fn from_internal(x: f64, dimension: Dimension, u: &UnitSystem) -> Result<Quantity> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("non-finite internal {dimension} value")));
    }
    Ok(Quantity::new(x * u.unit_of(dimension), dimension))
}
