//! Closed-form Gaussian gates.
//!
//! The smeared delta function is the normalized isotropic Gaussian
//! `δ(r; l) = (2π)^{-3/2} l^{-3} exp(-r²/(2l²))`, whose transform is
//! `exp(-l²k²/2)` under the `∫ f(r) e^{-ik·r} d³r` convention.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{CVec3, Vec3};

/// Half-width, in units of the Gaussian width, treated as a gate's support.
pub const SUPPORT_SIGMAS: f64 = 6.0;

/// Normalized Gaussian approximation of the Dirac delta.
pub fn gaussian_delta(r: Vec3, width: f64) -> f64 {
    let norm = (2.0 * PI).powf(-1.5) / width.powi(3);
    norm * (-r.norm_sq() / (2.0 * width * width)).exp()
}

/// Gradient of [`gaussian_delta`]: `-(r/l²) δ(r; l)`.
pub fn gaussian_delta_gradient(r: Vec3, width: f64) -> Vec3 {
    r * (-gaussian_delta(r, width) / (width * width))
}

/// Fourier transform of [`gaussian_delta`] centered at the origin.
pub fn gaussian_delta_fourier(k: Vec3, width: f64) -> f64 {
    (-0.5 * width * width * k.norm_sq()).exp()
}

fn check_center_width(center: Vec3, width: f64) -> Result<()> {
    if !center.is_finite() {
        return Err(Error::invalid("gate center must be finite"));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::invalid(format!(
            "gate width must be positive and finite, got {width}"
        )));
    }
    Ok(())
}

fn unit_amplitude() -> f64 {
    1.0
}

#[derive(Deserialize)]
struct GaussianSpec {
    center: Vec3,
    width: f64,
    direction: Vec3,
    #[serde(default = "unit_amplitude")]
    amplitude: f64,
}

impl TryFrom<GaussianSpec> for GaussianGate {
    type Error = Error;
    fn try_from(s: GaussianSpec) -> Result<Self> {
        GaussianGate::new(s.center, s.width, s.direction, s.amplitude)
    }
}

#[derive(Deserialize)]
struct LongitudinalSpec {
    center: Vec3,
    width: f64,
    #[serde(default = "unit_amplitude")]
    amplitude: f64,
}

impl TryFrom<LongitudinalSpec> for LongitudinalGate {
    type Error = Error;
    fn try_from(s: LongitudinalSpec) -> Result<Self> {
        LongitudinalGate::new(s.center, s.width, s.amplitude)
    }
}

/// `η(r) = amplitude · direction · δ(r - center; width)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GaussianSpec")]
pub struct GaussianGate {
    center: Vec3,
    width: f64,
    direction: Vec3,
    amplitude: f64,
}

impl GaussianGate {
    /// `direction` is normalized; a zero direction is rejected.
    pub fn new(center: Vec3, width: f64, direction: Vec3, amplitude: f64) -> Result<Self> {
        check_center_width(center, width)?;
        let direction = direction
            .normalized()
            .ok_or_else(|| Error::invalid("gate direction must be a non-zero finite vector"))?;
        if !amplitude.is_finite() {
            return Err(Error::invalid("gate amplitude must be finite"));
        }
        Ok(Self {
            center,
            width,
            direction,
            amplitude,
        })
    }

    /// Unit-amplitude gate.
    pub fn unit(center: Vec3, width: f64, direction: Vec3) -> Result<Self> {
        Self::new(center, width, direction, 1.0)
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn shifted(mut self, by: Vec3) -> Self {
        self.center += by;
        self
    }

    pub fn eval(&self, r: Vec3) -> Vec3 {
        self.direction * (self.amplitude * gaussian_delta(r - self.center, self.width))
    }

    /// `amplitude · direction · e^{-ik·center} · e^{-l²k²/2}`.
    pub fn fourier(&self, k: Vec3) -> CVec3 {
        let phase = Complex64::from_polar(1.0, -k.dot(self.center));
        let s = phase * (self.amplitude * gaussian_delta_fourier(k, self.width));
        CVec3::from_real(self.direction, s)
    }

    /// `curl η = amplitude · ∇δ(r - center) × direction`.
    pub fn curl(&self, r: Vec3) -> Vec3 {
        gaussian_delta_gradient(r - self.center, self.width).cross(self.direction) * self.amplitude
    }
}

/// Purely longitudinal gate `η(r) = amplitude · ∇δ(r - center; width)`.
///
/// Its transform `i k · amplitude · e^{-ik·center} e^{-l²k²/2}` is parallel
/// to `k` everywhere and its curl vanishes identically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LongitudinalSpec")]
pub struct LongitudinalGate {
    center: Vec3,
    width: f64,
    amplitude: f64,
}

impl LongitudinalGate {
    pub fn new(center: Vec3, width: f64, amplitude: f64) -> Result<Self> {
        check_center_width(center, width)?;
        if !amplitude.is_finite() {
            return Err(Error::invalid("gate amplitude must be finite"));
        }
        Ok(Self {
            center,
            width,
            amplitude,
        })
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn shifted(mut self, by: Vec3) -> Self {
        self.center += by;
        self
    }

    pub fn eval(&self, r: Vec3) -> Vec3 {
        gaussian_delta_gradient(r - self.center, self.width) * self.amplitude
    }

    pub fn fourier(&self, k: Vec3) -> CVec3 {
        let phase = Complex64::from_polar(1.0, -k.dot(self.center));
        let s = phase * Complex64::i() * (self.amplitude * gaussian_delta_fourier(k, self.width));
        CVec3::from_real(k, s)
    }

    pub fn curl(&self, _r: Vec3) -> Vec3 {
        Vec3::ZERO
    }
}
