//! Periodic-box mode quantization: the discrete counterpart of the
//! continuum vacuum integrals, plus a Monte Carlo sampler of the vacuum.
//!
//! Modes are `k = 2πn/L` with `0 < |n|∞ ≤ N`, in lexicographic order of
//! `(n_x, n_y, n_z)`. Gate coefficients are `η_k = η̃(k)/√V`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::commutator::{BoundMethod, BoundResult, GatePair};
use crate::error::{Error, Result};
use crate::gates::{GridVectorField, VectorGate};
use crate::summation::{compensated, ordered_sum};
use crate::vec3::{CVec3, Vec3};

pub const MAX_MODES: u64 = 100_000_000;
/// Default bound on the gate mass outside the periodic cell.
pub const DEFAULT_SUPPORT_TOLERANCE: f64 = 1e-6;
pub const MIN_MC_SAMPLES: usize = 100;

/// `u_k` (vector potential, real) and `v_k` (electric field, imaginary).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeAmplitudes {
    pub u: f64,
    pub v: Complex64,
}

impl ModeAmplitudes {
    /// `v u* - v* u`, which should equal `-4πi`.
    pub fn commutator(&self) -> Complex64 {
        let u = Complex64::new(self.u, 0.0);
        self.v * u.conj() - self.v.conj() * u
    }

    /// `v² + k² u²`, which should vanish.
    pub fn dispersion(&self, k: f64) -> Complex64 {
        self.v * self.v + k * k * self.u * self.u
    }
}

/// `u = √(2π/k)`, `v = -i√(2πk)`.
pub fn mode_amplitudes(k: f64) -> Result<ModeAmplitudes> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid(format!("wavenumber must be positive, got {k}")));
    }
    Ok(ModeAmplitudes {
        u: (2.0 * PI / k).sqrt(),
        v: Complex64::new(0.0, -(2.0 * PI * k).sqrt()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub n: [i32; 3],
    pub k: Vec3,
    pub k_norm: f64,
    /// Polarization basis, shared by `k` and `-k`.
    pub basis: [Vec3; 2],
    pub amplitudes: ModeAmplitudes,
}

fn is_canonical(n: [i32; 3]) -> bool {
    n.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// `e¹ = normalize(k × ẑ)` (or `k × x̂` when k is nearly along ẑ), `e² = k̂ × e¹`.
fn polarization_basis(k: Vec3) -> [Vec3; 2] {
    let mut a = k.cross(Vec3::Z);
    if a.norm() < 1e-6 * k.norm() {
        a = k.cross(Vec3::X);
    }
    let e1 = a.normalized().expect("k is nonzero");
    let e2 = k.normalized().expect("k is nonzero").cross(e1);
    [e1, e2]
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxLattice {
    box_size: f64,
    cutoff: u32,
    center: Option<Vec3>,
    support_tolerance: f64,
    modes: Vec<Mode>,
}

/// JSON summary of a lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub box_size: f64,
    pub cutoff: u32,
    pub mode_count: usize,
    pub k_max: f64,
}

impl BoxLattice {
    pub fn new(box_size: f64, cutoff: u32) -> Result<Self> {
        if !(box_size > 0.0 && box_size.is_finite()) {
            return Err(Error::invalid(format!("box size must be positive, got {box_size}")));
        }
        if cutoff == 0 {
            return Err(Error::invalid("cutoff N must be at least 1"));
        }
        let side = 2 * cutoff as u64 + 1;
        let count = side.checked_pow(3).map(|c| c - 1).unwrap_or(u64::MAX);
        if count > MAX_MODES {
            return Err(Error::ModeOverflow(count, MAX_MODES));
        }
        let n = cutoff as i32;
        let step = 2.0 * PI / box_size;
        let mut modes = Vec::with_capacity(count as usize);
        for nx in -n..=n {
            for ny in -n..=n {
                for nz in -n..=n {
                    let idx = [nx, ny, nz];
                    if idx == [0, 0, 0] {
                        continue;
                    }
                    let k = Vec3::new(nx as f64, ny as f64, nz as f64) * step;
                    let canon = if is_canonical(idx) { k } else { -k };
                    let k_norm = k.norm();
                    modes.push(Mode {
                        n: idx,
                        k,
                        k_norm,
                        basis: polarization_basis(canon),
                        amplitudes: mode_amplitudes(k_norm)?,
                    });
                }
            }
        }
        Ok(Self {
            box_size,
            cutoff,
            center: None,
            support_tolerance: DEFAULT_SUPPORT_TOLERANCE,
            modes,
        })
    }

    /// Smallest cutoff with `2πN/L ≥ k_max`.
    pub fn with_k_max(box_size: f64, k_max: f64) -> Result<Self> {
        if !(k_max > 0.0 && k_max.is_finite()) {
            return Err(Error::invalid(format!("k_max must be positive, got {k_max}")));
        }
        let n = (k_max * box_size / (2.0 * PI) - 1e-12).ceil().max(1.0);
        if n > u32::MAX as f64 {
            return Err(Error::ModeOverflow(u64::MAX, MAX_MODES));
        }
        Self::new(box_size, n as u32)
    }

    /// Default convergence parameters for gates of widths in `[l_min, l_max]`:
    /// `L = 12 l_max`, `k_max = 8/l_min`.
    pub fn for_widths(l_min: f64, l_max: f64) -> Result<Self> {
        Self::with_k_max(12.0 * l_max, 8.0 / l_min)
    }

    /// Bound on the fraction of gate mass outside the periodic cell.
    pub fn with_support_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::invalid("support tolerance must be positive"));
        }
        self.support_tolerance = tolerance;
        Ok(self)
    }

    /// Center of the periodic cell used by the support check. Defaults to
    /// the centroid of the gates being evaluated.
    pub fn with_center(mut self, center: Vec3) -> Self {
        self.center = Some(center);
        self
    }

    pub fn box_size(&self) -> f64 {
        self.box_size
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn volume(&self) -> f64 {
        self.box_size.powi(3)
    }

    pub fn k_max(&self) -> f64 {
        2.0 * PI * self.cutoff as f64 / self.box_size
    }

    pub fn support_tolerance(&self) -> f64 {
        self.support_tolerance
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Index of the mode at `-n`.
    pub fn partner(&self, idx: usize) -> usize {
        let half = self.modes.len() / 2;
        let cube = if idx < half { idx } else { idx + 1 };
        let mirrored = self.modes.len() - cube;
        if mirrored < half {
            mirrored
        } else {
            mirrored - 1
        }
    }

    pub fn summary(&self) -> LatticeSummary {
        LatticeSummary {
            box_size: self.box_size,
            cutoff: self.cutoff,
            mode_count: self.modes.len(),
            k_max: self.k_max(),
        }
    }

    /// Fraction of each gate's mass outside the cell; errors above the tolerance.
    pub fn check_support(&self, gates: &[&VectorGate]) -> Result<()> {
        let center = self.center.unwrap_or_else(|| centroid(gates));
        for g in gates {
            let outside = outside_mass(g, center, self.box_size / 2.0);
            if outside > self.support_tolerance {
                return Err(Error::Support {
                    outside,
                    limit: self.support_tolerance,
                });
            }
        }
        Ok(())
    }
}

fn centroid(gates: &[&VectorGate]) -> Vec3 {
    let centers: Vec<Vec3> = gates
        .iter()
        .map(|g| {
            let (lo, hi) = g.support_box();
            (lo + hi) * 0.5
        })
        .collect();
    centers.iter().fold(Vec3::ZERO, |a, &c| a + c) * (1.0 / centers.len().max(1) as f64)
}

/// Fraction of `∫|η|` outside the cube `center ± half`.
fn outside_mass(g: &VectorGate, center: Vec3, half: f64) -> f64 {
    match g {
        VectorGate::Grid(f) => {
            let lat = f.lattice();
            let total = compensated(f.samples().iter().map(|v| v.norm()));
            if total == 0.0 {
                return 0.0;
            }
            let out = compensated(f.samples().iter().enumerate().map(|(i, v)| {
                let r = lat.node(i) - center;
                if r.max_abs() > half {
                    v.norm()
                } else {
                    0.0
                }
            }));
            out / total
        }
        _ => {
            let profiles = g.profiles();
            let total: f64 = profiles.iter().map(|p| p.weight.abs()).sum();
            if total == 0.0 {
                return 0.0;
            }
            let out: f64 = profiles
                .iter()
                .map(|p| {
                    let s = std::f64::consts::SQRT_2 * p.width;
                    let log_inside: f64 = (0..3)
                        .map(|a| {
                            let d = (p.center[a] - center[a]).abs();
                            let o = 0.5 * (erfc((half - d) / s) + erfc((half + d) / s));
                            (-o).ln_1p()
                        })
                        .sum();
                    p.weight.abs() * -log_inside.exp_m1()
                })
                .sum();
            out / total
        }
    }
}

/// `η̃(k)` for every mode, in mode order.
fn transforms(g: &VectorGate, lat: &BoxLattice) -> Vec<CVec3> {
    match g {
        VectorGate::Grid(f) => grid_mode_transforms(f, lat),
        _ => lat.modes.par_iter().map(|m| g.fourier(m.k)).collect(),
    }
}

/// Separable node sums `h³ Σ η(r) e^{-ik·r}` over the whole mode cube.
fn grid_mode_transforms(f: &GridVectorField, lat: &BoxLattice) -> Vec<CVec3> {
    let g = f.lattice();
    let n = lat.cutoff as i32;
    let side = (2 * n + 1) as usize;
    let step = 2.0 * PI / lat.box_size;
    let phase = |a: usize| -> Vec<Complex64> {
        let mut p = Vec::with_capacity(side * g.dims[a]);
        for m in -n..=n {
            for i in 0..g.dims[a] {
                let x = g.origin[a] + i as f64 * g.spacing;
                p.push(Complex64::from_polar(1.0, -(m as f64) * step * x));
            }
        }
        p
    };
    let (px, py, pz) = (phase(0), phase(1), phase(2));
    let [nx, ny, nz] = g.dims;
    let samples = f.samples();
    // x: [mx][j][k]
    let sx: Vec<CVec3> = (0..side * ny * nz)
        .into_par_iter()
        .map(|t| {
            let (mx, rest) = (t / (ny * nz), t % (ny * nz));
            let base = rest * nx;
            let mut acc = CVec3::ZERO;
            for i in 0..nx {
                acc = acc.add(&CVec3::from_real(samples[base + i], px[mx * nx + i]));
            }
            acc
        })
        .collect();
    // y: [mx][my][k]
    let sy: Vec<CVec3> = (0..side * side * nz)
        .into_par_iter()
        .map(|t| {
            let (mx, my, k) = (t / (side * nz), (t / nz) % side, t % nz);
            let mut acc = CVec3::ZERO;
            for j in 0..ny {
                acc = acc.add(&sx[mx * ny * nz + k * ny + j].scale(py[my * ny + j]));
            }
            acc
        })
        .collect();
    let h3 = Complex64::new(g.spacing.powi(3), 0.0);
    let cube: Vec<CVec3> = (0..side * side * side)
        .into_par_iter()
        .map(|t| {
            let (mx, my, mz) = (t / (side * side), (t / side) % side, t % side);
            let mut acc = CVec3::ZERO;
            for k in 0..nz {
                acc = acc.add(&sy[(mx * side + my) * nz + k].scale(pz[mz * nz + k]));
            }
            acc.scale(h3)
        })
        .collect();
    let zero = (side * side * side) / 2;
    cube.into_iter()
        .enumerate()
        .filter(|&(t, _)| t != zero)
        .map(|(_, c)| c)
        .collect()
}

/// `Σ_k 2πk |P η_k|²`.
pub fn discrete_variance(g: &VectorGate, lat: &BoxLattice) -> Result<f64> {
    lat.check_support(&[g])?;
    let eta = transforms(g, lat);
    let inv_v = 1.0 / lat.volume();
    Ok(ordered_sum(lat.len(), |i| {
        let m = &lat.modes[i];
        let t = crate::gates::transverse_part(&eta[i], m.k).expect("k != 0");
        2.0 * PI * m.k_norm * t.norm_sq() * inv_v
    }))
}

/// `(4π/V) Σ_k i (k × η̃(k))·γ̃(k)*` before discarding the imaginary part,
/// together with `Σ |term|` as a scale for the residual.
pub fn discrete_h_complex(pair: &GatePair, lat: &BoxLattice) -> Result<(Complex64, f64)> {
    lat.check_support(&[&pair.electric, &pair.magnetic])?;
    let eta = transforms(&pair.electric, lat);
    let gamma = transforms(&pair.magnetic, lat);
    let pref = 4.0 * PI / lat.volume();
    let term = |i: usize| -> Complex64 {
        let curl = CVec3::cross_from_real(lat.modes[i].k, &eta[i]).scale(Complex64::i());
        gamma[i].inner(&curl) * pref
    };
    let sum = ordered_sum(lat.len(), term);
    let scale = ordered_sum(lat.len(), |i| term(i).norm());
    Ok((sum, scale))
}

pub fn discrete_h(pair: &GatePair, lat: &BoxLattice) -> Result<BoundResult> {
    let (h, _) = discrete_h_complex(pair, lat)?;
    Ok(BoundResult::new(h.re, BoundMethod::DiscreteSum))
}

/// `Σ_k Σ_α k/2`, divergent as the cutoff grows.
pub fn zero_point_energy(lat: &BoxLattice) -> f64 {
    ordered_sum(lat.len(), |i| lat.modes[i].k_norm)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Largest `|Im E(η)|` over samples, relative to the sample spread.
    pub imag_residual: f64,
}

struct Normals {
    rng: ChaCha8Rng,
}

impl Normals {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    fn unit_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Box–Muller pair.
    fn pair(&mut self) -> (f64, f64) {
        let r = (-2.0 * self.unit_open().ln()).sqrt();
        let (s, c) = (2.0 * PI * self.unit_open()).sin_cos();
        (r * c, r * s)
    }
}

/// Sample variance of `E(η)` over vacuum field realizations.
///
/// Each canonical `±k` pair and polarization gets an independent complex
/// Gaussian `E = √(πk)(X + iY)`; the `-k` member carries `E*`. Sample `s`
/// draws from stream `s` of the seeded generator in mode order, so results
/// do not depend on scheduling.
pub fn mc_variance(g: &VectorGate, lat: &BoxLattice, seed: u64, n_samples: usize) -> Result<McEstimate> {
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::invalid(format!(
            "n_samples must be at least {MIN_MC_SAMPLES}, got {n_samples}"
        )));
    }
    lat.check_support(&[g])?;
    let eta = transforms(g, lat);
    let inv_sqrt_v = 1.0 / lat.volume().sqrt();
    // (mode, partner, amplitude, c_k per polarization) for canonical modes
    let pairs: Vec<(f64, [Complex64; 2], [Complex64; 2])> = (0..lat.len())
        .filter(|&i| is_canonical(lat.modes[i].n))
        .map(|i| {
            let m = &lat.modes[i];
            let j = lat.partner(i);
            let c = |idx: usize, e: Vec3| eta[idx].dot_real(e).conj() * inv_sqrt_v;
            (
                (PI * m.k_norm).sqrt(),
                [c(i, m.basis[0]), c(i, m.basis[1])],
                [c(j, m.basis[0]), c(j, m.basis[1])],
            )
        })
        .collect();
    let samples: Vec<Complex64> = (0..n_samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = Normals::new(seed, s as u64);
            let mut acc = Complex64::new(0.0, 0.0);
            for (amp, ck, cmk) in &pairs {
                for a in 0..2 {
                    let (x, y) = rng.pair();
                    let e = Complex64::new(x, y) * amp;
                    acc += ck[a] * e + cmk[a] * e.conj();
                }
            }
            acc
        })
        .collect();
    let n = n_samples as f64;
    let mean = compensated(samples.iter().map(|z| z.re)) / n;
    let m2 = compensated(samples.iter().map(|z| (z.re - mean).powi(2)));
    let m4 = compensated(samples.iter().map(|z| (z.re - mean).powi(4))) / n;
    let var = m2 / (n - 1.0);
    let pop = m2 / n;
    let spread = pop.sqrt();
    let imag = samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(McEstimate {
        estimate: var,
        std_error: ((m4 - pop * pop).max(0.0) / n).sqrt(),
        n_samples,
        seed,
        imag_residual: if spread > 0.0 { imag / spread } else { imag },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{centered_lattice, sample_to_grid, GaussianGate};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn third_pi() -> f64 {
        1.0 / (3.0 * PI)
    }

    #[test]
    fn mode_counts_and_order() {
        assert_eq!(BoxLattice::new(5.0, 1).unwrap().len(), 26);
        assert_eq!(BoxLattice::new(5.0, 2).unwrap().len(), 124);
        let lat = BoxLattice::new(5.0, 1).unwrap();
        assert_eq!(lat.modes()[0].n, [-1, -1, -1]);
        assert_eq!(lat.modes()[25].n, [1, 1, 1]);
        assert!(BoxLattice::new(1.0, 500).is_err());
        assert!(BoxLattice::new(0.0, 1).is_err());
        assert!(BoxLattice::new(1.0, 0).is_err());
    }

    #[test]
    fn bases_are_orthonormal_transverse_and_shared() {
        let lat = BoxLattice::new(3.0, 3).unwrap();
        for (i, m) in lat.modes().iter().enumerate() {
            let [e1, e2] = m.basis;
            assert!(e1.dot(e2).abs() < 1e-12);
            assert!((e1.norm() - 1.0).abs() < 1e-12 && (e2.norm() - 1.0).abs() < 1e-12);
            assert!(e1.dot(m.k).abs() < 1e-12 * m.k_norm);
            assert!(e2.dot(m.k).abs() < 1e-12 * m.k_norm);
            let p = lat.partner(i);
            assert_eq!(lat.modes()[p].n, m.n.map(|c| -c));
            assert_eq!(lat.modes()[p].basis, m.basis);
        }
    }

    #[test]
    fn amplitude_examples() {
        let a = mode_amplitudes(1.0).unwrap();
        assert_relative_eq!(a.u, 2.506_628_274_631_000_2, max_relative = 1e-15);
        assert_relative_eq!(a.v.im, -2.506_628_274_631_000_2, max_relative = 1e-15);
        assert_eq!(a.v.re, 0.0);
        let c = a.commutator();
        assert!((c - Complex64::new(0.0, -4.0 * PI)).norm() < 1e-14);
        let b = mode_amplitudes(4.0).unwrap();
        assert_relative_eq!(b.u, (PI / 2.0).sqrt(), max_relative = 1e-15);
        assert!(b.dispersion(4.0).norm() < 1e-13);
        assert!(mode_amplitudes(0.0).is_err());
    }

    proptest! {
        #[test]
        fn amplitude_constraints(k in 1e-3f64..1e3) {
            let a = mode_amplitudes(k).unwrap();
            prop_assert!((a.commutator() - Complex64::new(0.0, -4.0 * PI)).norm() <= 4e-15 * 4.0 * PI);
            prop_assert!(a.dispersion(k).norm() <= 4e-15 * 2.0 * PI * k);
            prop_assert!((a.u * a.v.norm() - 2.0 * PI).abs() <= 4e-15 * 2.0 * PI);
        }

        #[test]
        fn basis_rotation_leaves_transverse_power(theta in 0.0f64..6.3, m in 0usize..124) {
            let lat = BoxLattice::new(4.0, 2).unwrap();
            let mode = lat.modes()[m];
            let g = GaussianGate::unit(Vec3::new(0.3, -0.2, 0.5), 1.0, Vec3::new(0.48, 0.6, 0.64)).unwrap();
            let eta = g.fourier(mode.k);
            let [e1, e2] = mode.basis;
            let (s, c) = theta.sin_cos();
            let r1 = e1 * c + e2 * s;
            let r2 = e2 * c - e1 * s;
            let p = |a: Vec3, b: Vec3| eta.dot_real(a).norm_sqr() + eta.dot_real(b).norm_sqr();
            let direct = crate::gates::transverse_part(&eta, mode.k).unwrap().norm_sq();
            prop_assert!((p(e1, e2) - direct).abs() <= 1e-12 * direct.max(1e-300));
            prop_assert!((p(r1, r2) - direct).abs() <= 1e-12 * direct.max(1e-300));
        }
    }

    #[test]
    fn zero_point_energy_oracle() {
        let lat = BoxLattice::new(2.0 * PI, 1).unwrap();
        let mut brute = 0.0;
        for nx in -1i32..=1 {
            for ny in -1i32..=1 {
                for nz in -1i32..=1 {
                    if (nx, ny, nz) != (0, 0, 0) {
                        brute += 2.0 * 0.5 * ((nx * nx + ny * ny + nz * nz) as f64).sqrt();
                    }
                }
            }
        }
        let closed = 6.0 + 12.0 * SQRT_2 + 8.0 * 3f64.sqrt();
        assert!((zero_point_energy(&lat) - closed).abs() < 1e-12);
        assert!((brute - closed).abs() < 1e-12);
        let bigger = BoxLattice::new(2.0 * PI, 2).unwrap();
        assert!(zero_point_energy(&bigger) > zero_point_energy(&lat));
        let half = BoxLattice::new(4.0 * PI, 1).unwrap();
        assert_relative_eq!(zero_point_energy(&half), closed / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn tiny_lattice_matches_brute_force() {
        let g = GaussianGate::unit(Vec3::new(0.1, 0.2, -0.1), 1.0, Vec3::new(0.0, 0.6, 0.8)).unwrap();
        let lat = BoxLattice::new(14.0, 1).unwrap();
        let v = 14f64.powi(3);
        let mut brute = 0.0;
        for nx in -1i32..=1 {
            for ny in -1i32..=1 {
                for nz in -1i32..=1 {
                    if (nx, ny, nz) == (0, 0, 0) {
                        continue;
                    }
                    let k = Vec3::new(nx as f64, ny as f64, nz as f64) * (2.0 * PI / 14.0);
                    let e = g.fourier(k);
                    let full: f64 = e.0.iter().map(|c| c.norm_sqr()).sum();
                    let along = (e.0[0] * k.x + e.0[1] * k.y + e.0[2] * k.z).norm_sqr() / k.norm_sq();
                    brute += 2.0 * PI * k.norm() * (full - along) / v;
                }
            }
        }
        let d = discrete_variance(&g.into(), &lat).unwrap();
        assert!((d - brute).abs() < 1e-12 * brute);
    }

    #[test]
    fn zero_gate_and_support_check() {
        let lat = BoxLattice::new(12.0, 2).unwrap();
        let z = VectorGate::from(GaussianGate::new(Vec3::ZERO, 1.0, Vec3::X, 0.0).unwrap());
        assert_eq!(discrete_variance(&z, &lat).unwrap(), 0.0);
        let wide = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::X).unwrap();
        let small = BoxLattice::new(6.0, 2).unwrap();
        assert!(matches!(discrete_variance(&wide, &small), Err(Error::Support { .. })));
        let off = BoxLattice::new(12.0, 2).unwrap().with_center(Vec3::new(4.0, 0.0, 0.0));
        assert!(discrete_variance(&wide, &off).is_err());
    }

    #[test]
    fn variance_converges_with_box_size() {
        let g = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Z).unwrap();
        let mut errs = Vec::new();
        for l in [6.0, 9.0, 12.0] {
            let lat = BoxLattice::with_k_max(l, 8.0)
                .unwrap()
                .with_support_tolerance(1e-2)
                .unwrap();
            errs.push((discrete_variance(&g, &lat).unwrap() / third_pi() - 1.0).abs());
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        assert!(errs[2] < 5e-3);
    }

    fn optimal_pair(u: Vec3, v: Vec3) -> GatePair {
        GatePair::new(
            GaussianGate::unit(Vec3::new(SQRT_2, 0.0, 0.0), 1.0, u).unwrap(),
            GaussianGate::unit(Vec3::ZERO, 1.0, v).unwrap(),
        )
    }

    #[test]
    fn discrete_h_converges_and_is_real() {
        let p = optimal_pair(Vec3::Y, Vec3::Z);
        let lat = BoxLattice::with_k_max(12.0, 8.0).unwrap();
        let (h, scale) = discrete_h_complex(&p, &lat).unwrap();
        let exact = 1.0 / (8.0 * PI * std::f64::consts::E).sqrt();
        assert!((h.re / exact - 1.0).abs() < 5e-3);
        assert!(h.im.abs() < 1e-10 * h.re.abs());
        assert!(scale >= h.re.abs());
        let par = discrete_h(&optimal_pair(Vec3::Y, Vec3::Y), &lat).unwrap();
        assert!(par.h_value.abs() < 1e-14);
        assert_eq!(discrete_h(&p, &lat).unwrap().method, BoundMethod::DiscreteSum);
    }

    #[test]
    fn grid_transforms_match_analytic() {
        let g = GaussianGate::unit(Vec3::new(0.2, -0.3, 0.1), 1.0, Vec3::new(0.6, 0.0, 0.8)).unwrap();
        let lat = BoxLattice::new(12.0, 3).unwrap();
        let sl = centered_lattice(&g, 0.25, 6.0).unwrap();
        let grid = VectorGate::from(sample_to_grid(&g, sl.origin, sl.spacing, sl.dims).unwrap());
        let a = transforms(&g.into(), &lat);
        let b = transforms(&grid, &lat);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.sub(y).norm_sq().sqrt() < 1e-7);
        }
        let d1 = discrete_variance(&g.into(), &lat).unwrap();
        let d2 = discrete_variance(&grid, &lat).unwrap();
        assert_relative_eq!(d1, d2, max_relative = 1e-6);
    }

    #[test]
    fn direction_and_center_invariance() {
        let lat = BoxLattice::new(12.0, 6).unwrap();
        let a = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Z).unwrap();
        let b = VectorGate::gaussian(Vec3::new(0.3, -0.2, 0.1), 1.0, Vec3::new(0.0, 0.0, -1.0)).unwrap();
        let va = discrete_variance(&a, &lat).unwrap();
        let vb = discrete_variance(&b, &lat.clone().with_center(Vec3::new(0.3, -0.2, 0.1))).unwrap();
        assert!((va - vb).abs() < 1e-10 * va);
    }

    #[test]
    fn monte_carlo_consistency_and_determinism() {
        let g = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Z).unwrap();
        let lat = BoxLattice::new(12.0, 3).unwrap();
        let exact = discrete_variance(&g, &lat).unwrap();
        let a = mc_variance(&g, &lat, 7, 20_000).unwrap();
        let b = mc_variance(&g, &lat, 7, 20_000).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert!(((a.estimate - exact) / a.std_error).abs() < 4.0);
        assert!(a.imag_residual < 1e-10);
        assert!(a.std_error > 0.0);
        assert!(mc_variance(&g, &lat, 7, 99).is_err());
    }

    #[test]
    fn summary_serializes() {
        let lat = BoxLattice::new(2.0 * PI, 2).unwrap();
        let s = serde_json::to_value(lat.summary()).unwrap();
        assert_eq!(s["mode_count"], 124);
        assert_eq!(s["k_max"], 2.0);
    }
}
