//! Gate functions η, γ and their calculus.
//!
//! A [`VectorGate`] is either analytic (Gaussian, longitudinal Gaussian
//! gradient, or a weighted superposition of those) or a field sampled on a
//! regular grid. Analytic gates can be evaluated, differentiated and
//! Fourier-transformed anywhere; grid gates only at their nodes.

mod analytic;
mod fft;
mod grid;
pub mod io;
mod spectral;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use analytic::{
    gaussian_delta, gaussian_delta_fourier, gaussian_delta_gradient, GaussianGate, LongitudinalGate, SUPPORT_SIGMAS,
};
pub use grid::{centered_lattice, sample_to_grid, GridVectorField, Lattice3, BOUNDARY_DECAY_LIMIT, MAX_GRID_NODES};
pub use spectral::{grid_fourier, transverse_part, SpectralVectorField};

use crate::error::{Error, Result};
use crate::summation::ordered_sum;
use crate::vec3::{CVec3, Vec3};

/// One weighted term of a [`VectorGate::Superposition`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub weight: f64,
    pub gate: VectorGate,
}

/// A vector-valued gate function in any supported representation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VectorGate {
    Gaussian(GaussianGate),
    Longitudinal(LongitudinalGate),
    Superposition { terms: Vec<Term> },
    Grid(GridVectorField),
}

/// Isotropic Gaussian profile entering a gate: `weight · δ(r - center; width)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Profile {
    pub weight: f64,
    pub center: Vec3,
    pub width: f64,
}

impl From<GaussianGate> for VectorGate {
    fn from(g: GaussianGate) -> Self {
        VectorGate::Gaussian(g)
    }
}

impl From<LongitudinalGate> for VectorGate {
    fn from(g: LongitudinalGate) -> Self {
        VectorGate::Longitudinal(g)
    }
}

impl From<GridVectorField> for VectorGate {
    fn from(g: GridVectorField) -> Self {
        VectorGate::Grid(g)
    }
}

impl VectorGate {
    /// Unit-amplitude Gaussian gate.
    pub fn gaussian(center: Vec3, width: f64, direction: Vec3) -> Result<Self> {
        Ok(GaussianGate::unit(center, width, direction)?.into())
    }

    /// `Σ weight_i · gate_i`.
    pub fn superpose<I: IntoIterator<Item = (f64, VectorGate)>>(terms: I) -> Result<Self> {
        let terms: Vec<Term> = terms.into_iter().map(|(weight, gate)| Term { weight, gate }).collect();
        if terms.is_empty() {
            return Err(Error::invalid("superposition needs at least one term"));
        }
        if terms.iter().any(|t| !t.weight.is_finite()) {
            return Err(Error::invalid("superposition weights must be finite"));
        }
        if terms.iter().any(|t| matches!(t.gate, VectorGate::Grid(_))) {
            return Err(Error::invalid(
                "superpositions hold analytic gates only; combine grids with GridVectorField::combine",
            ));
        }
        Ok(VectorGate::Superposition { terms })
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, VectorGate::Grid(_))
    }

    /// The gate as a single Gaussian, if it is one.
    pub fn as_gaussian(&self) -> Option<GaussianGate> {
        match self {
            VectorGate::Gaussian(g) => Some(*g),
            VectorGate::Superposition { terms } if terms.len() == 1 => terms[0]
                .gate
                .as_gaussian()
                .map(|g| g.with_amplitude(g.amplitude() * terms[0].weight)),
            _ => None,
        }
    }

    pub fn eval(&self, r: Vec3) -> Result<Vec3> {
        match self {
            VectorGate::Gaussian(g) => Ok(g.eval(r)),
            VectorGate::Longitudinal(g) => Ok(g.eval(r)),
            VectorGate::Superposition { terms } => terms
                .iter()
                .try_fold(Vec3::ZERO, |acc, t| Ok(acc + t.gate.eval(r)? * t.weight)),
            VectorGate::Grid(_) => Err(grid_pointwise()),
        }
    }

    pub fn curl(&self, r: Vec3) -> Result<Vec3> {
        match self {
            VectorGate::Gaussian(g) => Ok(g.curl(r)),
            VectorGate::Longitudinal(g) => Ok(g.curl(r)),
            VectorGate::Superposition { terms } => terms
                .iter()
                .try_fold(Vec3::ZERO, |acc, t| Ok(acc + t.gate.curl(r)? * t.weight)),
            VectorGate::Grid(_) => Err(grid_pointwise()),
        }
    }

    /// Continuum transform `∫ η(r) e^{-ik·r} d³r`.
    ///
    /// Grid gates use the node sum `h³ Σ η(r_n) e^{-ik·r_n}` evaluated
    /// directly at `k`, which costs one pass over the grid per call.
    pub fn fourier(&self, k: Vec3) -> CVec3 {
        match self {
            VectorGate::Gaussian(g) => g.fourier(k),
            VectorGate::Longitudinal(g) => g.fourier(k),
            VectorGate::Superposition { terms } => terms.iter().fold(CVec3::ZERO, |acc, t| {
                acc.add(&t.gate.fourier(k).scale(Complex64::new(t.weight, 0.0)))
            }),
            VectorGate::Grid(f) => grid_node_transform(f, k),
        }
    }

    /// Gaussian profiles underlying an analytic gate (empty for grids).
    pub fn profiles(&self) -> Vec<Profile> {
        match self {
            VectorGate::Gaussian(g) => vec![Profile {
                weight: g.amplitude(),
                center: g.center(),
                width: g.width(),
            }],
            VectorGate::Longitudinal(g) => vec![Profile {
                weight: g.amplitude(),
                center: g.center(),
                width: g.width(),
            }],
            VectorGate::Superposition { terms } => terms
                .iter()
                .flat_map(|t| {
                    t.gate.profiles().into_iter().map(move |p| Profile {
                        weight: p.weight * t.weight,
                        ..p
                    })
                })
                .collect(),
            VectorGate::Grid(_) => Vec::new(),
        }
    }

    /// Narrowest Gaussian width, for analytic gates.
    pub fn min_width(&self) -> Option<f64> {
        self.profiles().iter().map(|p| p.width).reduce(f64::min)
    }

    /// Axis-aligned box holding the gate: `center ± 6l` per profile, or the
    /// node bounds of a grid.
    pub fn support_box(&self) -> (Vec3, Vec3) {
        match self {
            VectorGate::Grid(f) => (f.lattice().origin, f.lattice().upper()),
            _ => {
                let mut lo = Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
                let mut hi = -lo;
                for p in self.profiles() {
                    let r = Vec3::new(1.0, 1.0, 1.0) * (SUPPORT_SIGMAS * p.width);
                    let (a, b) = (p.center - r, p.center + r);
                    lo = Vec3::new(lo.x.min(a.x), lo.y.min(a.y), lo.z.min(a.z));
                    hi = Vec3::new(hi.x.max(b.x), hi.y.max(b.y), hi.z.max(b.z));
                }
                (lo, hi)
            }
        }
    }

    /// Spacing that resolves the gate: `l_min / 4`, or the grid spacing.
    pub fn preferred_spacing(&self) -> f64 {
        match self {
            VectorGate::Grid(f) => f.lattice().spacing,
            _ => self.min_width().unwrap_or(1.0) / 4.0,
        }
    }

    /// The gate on `lattice`: analytic gates are evaluated at the nodes,
    /// grid gates are resampled.
    pub fn sample_on(&self, lattice: &Lattice3) -> Result<GridVectorField> {
        match self {
            VectorGate::Grid(f) => f.resample_onto(lattice),
            _ => GridVectorField::from_fn(*lattice, |r| self.eval(r).expect("analytic gates evaluate everywhere")),
        }
    }

    pub fn shifted(&self, by: Vec3) -> VectorGate {
        match self {
            VectorGate::Gaussian(g) => VectorGate::Gaussian(g.shifted(by)),
            VectorGate::Longitudinal(g) => VectorGate::Longitudinal(g.shifted(by)),
            VectorGate::Superposition { terms } => VectorGate::Superposition {
                terms: terms
                    .iter()
                    .map(|t| Term {
                        weight: t.weight,
                        gate: t.gate.shifted(by),
                    })
                    .collect(),
            },
            VectorGate::Grid(f) => VectorGate::Grid(f.shifted(by)),
        }
    }
}

fn grid_pointwise() -> Error {
    Error::invalid("grid gates are only defined at their nodes")
}

fn grid_node_transform(f: &GridVectorField, k: Vec3) -> CVec3 {
    let lat = *f.lattice();
    let phases = |a: usize| -> Vec<Complex64> {
        (0..lat.dims[a])
            .map(|i| {
                let x = lat.origin[a] + i as f64 * lat.spacing;
                Complex64::from_polar(1.0, -k[a] * x)
            })
            .collect()
    };
    let (px, py, pz) = (phases(0), phases(1), phases(2));
    let samples = f.samples();
    let h3 = lat.spacing.powi(3);
    let comp = |c: usize| -> Complex64 {
        ordered_sum(samples.len(), |idx| {
            let [i, j, m] = lat.coords(idx);
            px[i] * py[j] * pz[m] * samples[idx][c]
        }) * h3
    };
    CVec3([comp(0), comp(1), comp(2)])
}
