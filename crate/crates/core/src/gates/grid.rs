//! Vector fields sampled on regular Cartesian lattices.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use super::analytic::{GaussianGate, SUPPORT_SIGMAS};
use super::fft::{fft3, is_nyquist, wavenumber};
use crate::error::{Error, Result};
use crate::summation::ordered_sum;
use crate::vec3::{Axis, Vec3};

/// Largest boundary-layer magnitude, relative to the field's peak, accepted
/// before integration-by-parts identities and periodic transforms are
/// considered unreliable. A Gaussian truncated at ±6l sits at e^{-18} ≈ 1.5e-8.
pub const BOUNDARY_DECAY_LIMIT: f64 = 1e-7;

/// Storage guard for materialized grids (nodes).
pub const MAX_GRID_NODES: usize = 64_000_000;

/// A regular lattice: `origin + (i, j, k) * spacing`, x index fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice3 {
    pub origin: Vec3,
    pub spacing: f64,
    pub dims: [usize; 3],
}

impl Lattice3 {
    pub fn new(origin: Vec3, spacing: f64, dims: [usize; 3]) -> Result<Self> {
        if !origin.is_finite() {
            return Err(Error::invalid("lattice origin must be finite"));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid(format!(
                "lattice spacing must be positive, got {spacing}"
            )));
        }
        if let Some(a) = Axis::ALL.iter().find(|a| dims[a.index()] < 2) {
            return Err(Error::invalid(format!(
                "lattice needs at least 2 nodes per axis ({} axis has {})",
                a.label(),
                dims[a.index()]
            )));
        }
        Ok(Self { origin, spacing, dims })
    }

    /// Smallest lattice of the given spacing, with nodes on integer multiples
    /// of `spacing`, whose nodes cover the box `[lo, hi]`.
    pub fn covering(lo: Vec3, hi: Vec3, spacing: f64) -> Result<Self> {
        let snap = |l: f64| (l / spacing).floor() * spacing;
        let origin = Vec3::new(snap(lo.x), snap(lo.y), snap(lo.z));
        let count = |o: f64, h: f64| (((h - o) / spacing).ceil() as usize + 1).max(2);
        Self::new(
            origin,
            spacing,
            [count(origin.x, hi.x), count(origin.y, hi.y), count(origin.z, hi.z)],
        )
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [idx % nx, (idx / nx) % ny, idx / (nx * ny)]
    }

    pub fn node(&self, idx: usize) -> Vec3 {
        let [i, j, k] = self.coords(idx);
        self.origin + Vec3::new(i as f64, j as f64, k as f64) * self.spacing
    }

    /// Last node along each axis.
    pub fn upper(&self) -> Vec3 {
        let h = self.spacing;
        self.origin
            + Vec3::new(
                (self.dims[0] - 1) as f64 * h,
                (self.dims[1] - 1) as f64 * h,
                (self.dims[2] - 1) as f64 * h,
            )
    }

    /// Periodic cell volume `Π n_a h`.
    pub fn cell_volume(&self) -> f64 {
        self.dims.iter().map(|&n| n as f64 * self.spacing).product()
    }

    /// Trapezoid weight of node `idx` (product of 1-D weights).
    pub fn trapezoid_weight(&self, idx: usize) -> f64 {
        let c = self.coords(idx);
        let mut w = self.spacing.powi(3);
        for (&ci, &n) in c.iter().zip(&self.dims) {
            if ci == 0 || ci + 1 == n {
                w *= 0.5;
            }
        }
        w
    }

    pub fn is_boundary(&self, idx: usize) -> bool {
        let c = self.coords(idx);
        (0..3).any(|a| c[a] == 0 || c[a] + 1 == self.dims[a])
    }

    /// Same spacing and node positions differing by whole steps.
    pub fn is_aligned_with(&self, other: &Lattice3) -> bool {
        if ((self.spacing - other.spacing) / self.spacing).abs() > 1e-12 {
            return false;
        }
        (0..3).all(|a| {
            let s = (self.origin[a] - other.origin[a]) / self.spacing;
            (s - s.round()).abs() < 1e-9
        })
    }
}

/// Vector field sampled on a [`Lattice3`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridVectorField {
    lattice: Lattice3,
    samples: Vec<Vec3>,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    origin: Vec3,
    spacing: f64,
    dims: [usize; 3],
    samples: Vec<Vec3>,
}

impl TryFrom<RawGrid> for GridVectorField {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        GridVectorField::new(Lattice3::new(r.origin, r.spacing, r.dims)?, r.samples)
    }
}

impl From<GridVectorField> for RawGrid {
    fn from(g: GridVectorField) -> Self {
        RawGrid {
            origin: g.lattice.origin,
            spacing: g.lattice.spacing,
            dims: g.lattice.dims,
            samples: g.samples,
        }
    }
}

impl GridVectorField {
    pub fn new(lattice: Lattice3, samples: Vec<Vec3>) -> Result<Self> {
        if samples.len() != lattice.len() {
            return Err(Error::invalid(format!(
                "grid has {} samples but dims {:?} need {}",
                samples.len(),
                lattice.dims,
                lattice.len()
            )));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid samples must be finite"));
        }
        Ok(Self { lattice, samples })
    }

    pub fn zeros(lattice: Lattice3) -> Result<Self> {
        check_storage(&lattice)?;
        Ok(Self {
            lattice,
            samples: vec![Vec3::ZERO; lattice.len()],
        })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F: Fn(Vec3) -> Vec3 + Sync>(lattice: Lattice3, f: F) -> Result<Self> {
        check_storage(&lattice)?;
        let samples = (0..lattice.len()).into_par_iter().map(|i| f(lattice.node(i))).collect();
        Self::new(lattice, samples)
    }

    pub fn lattice(&self) -> &Lattice3 {
        &self.lattice
    }

    pub fn samples(&self) -> &[Vec3] {
        &self.samples
    }

    /// Largest boundary-node magnitude divided by the largest magnitude.
    pub fn boundary_decay_ratio(&self) -> f64 {
        let peak = self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let edge = self
            .samples
            .iter()
            .enumerate()
            .filter(|(i, _)| self.lattice.is_boundary(*i))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        edge / peak
    }

    pub fn check_boundary_decay(&self) -> Result<()> {
        let ratio = self.boundary_decay_ratio();
        if ratio > BOUNDARY_DECAY_LIMIT {
            return Err(Error::BoundaryDecay {
                ratio,
                limit: BOUNDARY_DECAY_LIMIT,
            });
        }
        Ok(())
    }

    /// Trapezoid-rule integral of each component.
    pub fn integral(&self) -> Vec3 {
        let lat = self.lattice;
        let comp = |c: usize| ordered_sum(self.samples.len(), |i| lat.trapezoid_weight(i) * self.samples[i][c]);
        Vec3::new(comp(0), comp(1), comp(2))
    }

    /// Trapezoid-rule `∫ self · other d³r` on a shared lattice.
    pub fn dot_integral(&self, other: &GridVectorField) -> Result<f64> {
        if self.lattice != other.lattice {
            return Err(Error::GridMismatch(
                "dot product needs both fields on the same lattice".into(),
            ));
        }
        let lat = self.lattice;
        Ok(ordered_sum(self.samples.len(), |i| {
            lat.trapezoid_weight(i) * self.samples[i].dot(other.samples[i])
        }))
    }

    /// `a * self + b * other` on a shared lattice.
    pub fn combine(&self, a: f64, other: &GridVectorField, b: f64) -> Result<GridVectorField> {
        if self.lattice != other.lattice {
            return Err(Error::GridMismatch(
                "linear combination needs both fields on the same lattice".into(),
            ));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(x, y)| *x * a + *y * b)
            .collect();
        Ok(Self {
            lattice: self.lattice,
            samples,
        })
    }

    pub fn shifted(&self, by: Vec3) -> GridVectorField {
        let mut g = self.clone();
        g.lattice.origin += by;
        g
    }

    /// Trilinear interpolation; zero outside the sampled box.
    pub fn interpolate(&self, r: Vec3) -> Vec3 {
        let lat = &self.lattice;
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for a in 0..3 {
            let s = (r[a] - lat.origin[a]) / lat.spacing;
            let n = lat.dims[a];
            if !(s >= 0.0 && s <= (n - 1) as f64) {
                return Vec3::ZERO;
            }
            let b = (s.floor() as usize).min(n - 2);
            base[a] = b;
            frac[a] = s - b as f64;
        }
        let mut acc = Vec3::ZERO;
        for corner in 0..8usize {
            let mut w = 1.0;
            let mut c = [0usize; 3];
            for a in 0..3 {
                let bit = (corner >> a) & 1;
                c[a] = base[a] + bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            if w != 0.0 {
                acc += self.samples[lat.index(c[0], c[1], c[2])] * w;
            }
        }
        acc
    }

    /// Field on `target`: copied exactly when the lattices are aligned,
    /// otherwise evaluated from the band-limited (trigonometric) interpolant
    /// of the samples. Target nodes outside the sampled box are zero.
    pub fn resample_onto(&self, target: &Lattice3) -> Result<GridVectorField> {
        if self.lattice == *target {
            return Ok(self.clone());
        }
        check_storage(target)?;
        if self.lattice.is_aligned_with(target) {
            let h = target.spacing;
            let off: [i64; 3] =
                std::array::from_fn(|a| ((self.lattice.origin[a] - target.origin[a]) / h).round() as i64);
            let src = self.lattice;
            return GridVectorField::from_fn_indexed(*target, |idx| {
                let c = target.coords(idx);
                let mut s = [0usize; 3];
                for a in 0..3 {
                    let v = c[a] as i64 - off[a];
                    if v < 0 || v >= src.dims[a] as i64 {
                        return Vec3::ZERO;
                    }
                    s[a] = v as usize;
                }
                self.samples[src.index(s[0], s[1], s[2])]
            });
        }
        let mut data = self.samples.clone();
        let mut dims = self.lattice.dims;
        for a in 0..3 {
            let w = trig_weights(&self.lattice, target, a);
            data = apply_along(&data, dims, a, &w, target.dims[a]);
            dims[a] = target.dims[a];
        }
        GridVectorField::new(*target, data)
    }

    fn from_fn_indexed<F: Fn(usize) -> Vec3 + Sync>(lattice: Lattice3, f: F) -> Result<Self> {
        check_storage(&lattice)?;
        let samples = (0..lattice.len()).into_par_iter().map(&f).collect();
        Self::new(lattice, samples)
    }

    /// Curl by spectral differentiation on the periodic extension of the grid.
    ///
    /// The Nyquist bin of even axes is dropped from the derivative, so the
    /// operator stays real and skew-adjoint: `Σ (curl a)·b = Σ a·(curl b)`.
    pub fn spectral_curl(&self) -> GridVectorField {
        let lat = self.lattice;
        let n = lat.len();
        let mut comps: [Vec<Complex64>; 3] =
            std::array::from_fn(|c| self.samples.iter().map(|v| Complex64::new(v[c], 0.0)).collect());
        for c in comps.iter_mut() {
            fft3(c, lat.dims, FftDirection::Forward);
        }
        let deriv_k = |idx: usize| -> Vec3 {
            let m = lat.coords(idx);
            let k: [f64; 3] = std::array::from_fn(|a| {
                if is_nyquist(m[a], lat.dims[a]) {
                    0.0
                } else {
                    wavenumber(m[a], lat.dims[a], lat.spacing)
                }
            });
            Vec3::from(k)
        };
        let i = Complex64::i();
        let mut curl: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); n]);
        {
            let [cx, cy, cz] = &mut curl;
            cx.par_iter_mut()
                .zip(cy.par_iter_mut())
                .zip(cz.par_iter_mut())
                .enumerate()
                .for_each(|(idx, ((x, y), z))| {
                    let k = deriv_k(idx);
                    let f = [comps[0][idx], comps[1][idx], comps[2][idx]];
                    *x = i * (f[2] * k.y - f[1] * k.z);
                    *y = i * (f[0] * k.z - f[2] * k.x);
                    *z = i * (f[1] * k.x - f[0] * k.y);
                });
        }
        for c in curl.iter_mut() {
            fft3(c, lat.dims, FftDirection::Inverse);
        }
        let scale = 1.0 / n as f64;
        let samples = (0..n)
            .map(|idx| Vec3::new(curl[0][idx].re, curl[1][idx].re, curl[2][idx].re) * scale)
            .collect();
        GridVectorField { lattice: lat, samples }
    }
}

fn check_storage(lattice: &Lattice3) -> Result<()> {
    if lattice.len() > MAX_GRID_NODES {
        return Err(Error::GridMismatch(format!(
            "lattice of {} nodes exceeds the {} node storage limit",
            lattice.len(),
            MAX_GRID_NODES
        )));
    }
    Ok(())
}

/// Weights `W[t * n_src + j]` of the periodic trigonometric interpolant along
/// axis `a`, mapping source nodes `j` to target nodes `t`.
fn trig_weights(src: &Lattice3, target: &Lattice3, a: usize) -> Vec<f64> {
    let n = src.dims[a];
    let m = target.dims[a];
    let mut w = vec![0.0; m * n];
    for t in 0..m {
        let x = target.origin[a] + t as f64 * target.spacing;
        let s = (x - src.origin[a]) / src.spacing;
        if s < -1e-9 || s > (n - 1) as f64 + 1e-9 {
            continue;
        }
        for j in 0..n {
            w[t * n + j] = periodic_kernel(s - j as f64, n);
        }
    }
    w
}

/// Dirichlet kernel of an `n`-point periodic grid at offset `d` (in steps);
/// the even-`n` form splits the Nyquist term symmetrically.
fn periodic_kernel(d: f64, n: usize) -> f64 {
    let r = d.round();
    if (d - r).abs() < 1e-12 {
        return if (r as i64).rem_euclid(n as i64) == 0 { 1.0 } else { 0.0 };
    }
    let x = std::f64::consts::PI * d;
    let nf = n as f64;
    let den = if n.is_multiple_of(2) {
        (x / nf).tan()
    } else {
        (x / nf).sin()
    };
    x.sin() / (nf * den)
}

fn apply_along(data: &[Vec3], dims: [usize; 3], a: usize, w: &[f64], m: usize) -> Vec<Vec3> {
    let n = dims[a];
    let mut out_dims = dims;
    out_dims[a] = m;
    let stride: usize = dims[..a].iter().product();
    let total: usize = out_dims.iter().product();
    (0..total)
        .into_par_iter()
        .map(|idx| {
            let c = [
                idx % out_dims[0],
                (idx / out_dims[0]) % out_dims[1],
                idx / (out_dims[0] * out_dims[1]),
            ];
            let row = &w[c[a] * n..(c[a] + 1) * n];
            let mut src = c;
            src[a] = 0;
            let base = src[0] + dims[0] * (src[1] + dims[1] * src[2]);
            let mut acc = Vec3::ZERO;
            for (j, &wj) in row.iter().enumerate() {
                if wj != 0.0 {
                    acc += data[base + j * stride] * wj;
                }
            }
            acc
        })
        .collect()
}

/// Samples an analytic Gaussian gate onto a lattice.
///
/// The lattice must resolve the gate (`spacing <= l/4`) and cover
/// `center ± 6l` along every axis.
pub fn sample_to_grid(gate: &GaussianGate, origin: Vec3, spacing: f64, dims: [usize; 3]) -> Result<GridVectorField> {
    let lattice = Lattice3::new(origin, spacing, dims)?;
    let l = gate.width();
    if spacing > l / 4.0 * (1.0 + 1e-12) {
        return Err(Error::GridPrecondition {
            kind: "resolution",
            axis: 'x',
            detail: format!("spacing {spacing} exceeds l/4 = {}", l / 4.0),
        });
    }
    let reach = SUPPORT_SIGMAS * l;
    let slack = 1e-9 * l;
    let upper = lattice.upper();
    for a in Axis::ALL {
        let i = a.index();
        let c = gate.center()[i];
        if origin[i] > c - reach + slack || upper[i] < c + reach - slack {
            return Err(Error::GridPrecondition {
                kind: "coverage",
                axis: a.label(),
                detail: format!(
                    "nodes span [{}, {}] but the gate needs [{}, {}]",
                    origin[i],
                    upper[i],
                    c - reach,
                    c + reach
                ),
            });
        }
    }
    GridVectorField::from_fn(lattice, |r| gate.eval(r))
}

/// Lattice centered on `gate` with spacing `l/4` and half-extent `reach * l`.
pub fn centered_lattice(gate: &GaussianGate, spacing_per_width: f64, reach: f64) -> Result<Lattice3> {
    let l = gate.width();
    let h = l * spacing_per_width;
    let half = (reach / spacing_per_width).ceil() as usize;
    let n = 2 * half + 1;
    let origin = gate.center() - Vec3::new(1.0, 1.0, 1.0) * (half as f64 * h);
    Lattice3::new(origin, h, [n, n, n])
}
