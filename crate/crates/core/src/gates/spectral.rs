//! Fourier-space representation of gate functions.
//!
//! Convention: `η̃(k) = ∫ η(r) e^{-ik·r} d³r`, inverse measure `d³k/(2π)³`.

use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use super::fft::{fft3, is_nyquist, mirror, wavenumber};
use super::grid::GridVectorField;
use crate::error::{Error, Result};
use crate::vec3::{CVec3, Vec3};

/// Coefficients on the reciprocal lattice of a sampled grid, in FFT bin order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralVectorField {
    dims: [usize; 3],
    spacing: f64,
    coefficients: Vec<CVec3>,
}

impl SpectralVectorField {
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Real-space spacing of the grid this spectrum came from.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[CVec3] {
        &self.coefficients
    }

    pub fn bin(&self, idx: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [idx % nx, (idx / nx) % ny, idx / (nx * ny)]
    }

    pub fn wavevector(&self, idx: usize) -> Vec3 {
        let m = self.bin(idx);
        Vec3::new(
            wavenumber(m[0], self.dims[0], self.spacing),
            wavenumber(m[1], self.dims[1], self.spacing),
            wavenumber(m[2], self.dims[2], self.spacing),
        )
    }

    /// Volume of the periodic cell `Π n_a h`; the k-space cell is `(2π)³/V`.
    pub fn cell_volume(&self) -> f64 {
        self.dims.iter().map(|&n| n as f64 * self.spacing).product()
    }

    /// True if the bin lies on an unpaired Nyquist plane.
    pub fn on_nyquist_plane(&self, idx: usize) -> bool {
        let m = self.bin(idx);
        (0..3).any(|a| is_nyquist(m[a], self.dims[a]))
    }

    /// Largest `|η̃(-k) - η̃(k)*|` over bins whose mirror is on the grid,
    /// relative to the largest coefficient magnitude.
    pub fn hermitian_defect(&self) -> f64 {
        let peak = self.coefficients.iter().map(|c| c.norm_sq().sqrt()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let [nx, ny, nz] = self.dims;
        let mut worst = 0.0f64;
        for (idx, c) in self.coefficients.iter().enumerate() {
            if self.on_nyquist_plane(idx) {
                continue;
            }
            let m = self.bin(idx);
            let j = mirror(m[0], nx) + nx * (mirror(m[1], ny) + ny * mirror(m[2], nz));
            let d = self.coefficients[j].sub(&c.conj()).norm_sq().sqrt();
            worst = worst.max(d);
        }
        worst / peak
    }
}

/// Discrete transform of a grid, scaled by `h³` and phase-corrected for the
/// grid origin so that coefficients approximate the continuum transform.
pub fn grid_fourier(field: &GridVectorField) -> Result<SpectralVectorField> {
    field.check_boundary_decay()?;
    let lat = *field.lattice();
    let mut comps: [Vec<Complex64>; 3] =
        std::array::from_fn(|c| field.samples().iter().map(|v| Complex64::new(v[c], 0.0)).collect());
    for c in comps.iter_mut() {
        fft3(c, lat.dims, FftDirection::Forward);
    }
    let h3 = lat.spacing.powi(3);
    let mut out = SpectralVectorField {
        dims: lat.dims,
        spacing: lat.spacing,
        coefficients: Vec::with_capacity(lat.len()),
    };
    let [x, y, z] = &comps;
    for (idx, ((&cx, &cy), &cz)) in x.iter().zip(y).zip(z).enumerate() {
        let s = Complex64::from_polar(h3, -out.wavevector(idx).dot(lat.origin));
        out.coefficients.push(CVec3([cx * s, cy * s, cz * s]));
    }
    Ok(out)
}

/// Transverse projection `v - k̂ (k̂ · v)`.
pub fn transverse_part(v: &CVec3, k: Vec3) -> Result<CVec3> {
    let k_hat = k
        .normalized()
        .ok_or_else(|| Error::invalid("transverse projection is undefined at k = 0"))?;
    let along = v.dot_real(k_hat);
    Ok(v.sub(&CVec3::from_real(k_hat, along)))
}
