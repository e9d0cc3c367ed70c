//! The commutator functional `h(η, γ)` and the bounds derived from it.
//!
//! `[Ê(η), Ĥ(γ)] = -iħ h(η, γ)` with `h = 4πc ∫ (curl η)·γ d³r`.
//! Integrating by parts gives the dual form `4πc ∫ (curl γ)·η d³r`, so `h`
//! is symmetric under exchanging the two gates.
//! In internal units c = 1 and `h` is an energy density in units of ħc/L₀⁴.
//! The uncertainty lower bound is Robertson's `ΔE·ΔH ≥ (ħ/2)|h|`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{
    gaussian_delta, gaussian_delta_gradient, GaussianGate, GridVectorField, Lattice3, VectorGate, SUPPORT_SIGMAS,
};
use crate::summation::ordered_sum;
use crate::vec3::{levi_civita, Axis, Vec3};

/// Upper limit on lattice nodes visited by streaming real-space quadrature.
pub const MAX_QUADRATURE_NODES: usize = 1_000_000_000;

/// Half-width of the real-space quadrature box for analytic gates, in widths.
pub const ANALYTIC_REACH: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    RealSpace,
    DualForm,
    ClosedForm,
    DiscreteSum,
}

impl BoundMethod {
    pub fn name(self) -> &'static str {
        match self {
            BoundMethod::RealSpace => "real_space",
            BoundMethod::DualForm => "dual_form",
            BoundMethod::ClosedForm => "closed_form",
            BoundMethod::DiscreteSum => "discrete_sum",
        }
    }
}

/// `h(η, γ)` and the Robertson bound `|h|/2` (internal units).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub h_value: f64,
    pub robertson_bound: f64,
    pub method: BoundMethod,
    /// `√((l² + l′²)/2)` when the closed Gaussian form was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_width: Option<f64>,
}

impl BoundResult {
    pub fn new(h_value: f64, method: BoundMethod) -> Self {
        Self {
            h_value,
            robertson_bound: robertson_bound(h_value),
            method,
            effective_width: None,
        }
    }
}

pub fn robertson_bound(h: f64) -> f64 {
    h.abs() / 2.0
}

/// The electric gate η and the magnetic gate γ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GatePair {
    pub electric: VectorGate,
    pub magnetic: VectorGate,
}

impl GatePair {
    pub fn new(electric: impl Into<VectorGate>, magnetic: impl Into<VectorGate>) -> Self {
        Self {
            electric: electric.into(),
            magnetic: magnetic.into(),
        }
    }

    /// (γ, η): the roles of the two gates exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            electric: self.magnetic.clone(),
            magnetic: self.electric.clone(),
        }
    }

    pub fn shifted(&self, by: Vec3) -> Self {
        Self {
            electric: self.electric.shifted(by),
            magnetic: self.magnetic.shifted(by),
        }
    }

    fn gates(&self) -> [&VectorGate; 2] {
        [&self.electric, &self.magnetic]
    }
}

/// Common lattice for real-space quadrature: the finest spacing of the two
/// gates over the intersection of their supports, outside of which the
/// integrand is negligible. Nodes are anchored to the finest grid gate's
/// origin, or to the electric gate's support corner for analytic pairs.
/// `None` when the supports do not overlap.
pub fn integration_lattice(pair: &GatePair) -> Result<Option<Lattice3>> {
    let spacing = pair
        .gates()
        .iter()
        .map(|g| g.preferred_spacing())
        .fold(f64::INFINITY, f64::min);
    let (lo_e, hi_e) = quadrature_box(&pair.electric);
    let (lo_m, hi_m) = quadrature_box(&pair.magnetic);
    let anchor = pair
        .gates()
        .iter()
        .filter_map(|g| match g {
            VectorGate::Grid(f) => Some(*f.lattice()),
            _ => None,
        })
        .min_by(|a, b| a.spacing.total_cmp(&b.spacing))
        .map(|l| l.origin)
        .unwrap_or(lo_e);
    let lo = Vec3::new(lo_e.x.max(lo_m.x), lo_e.y.max(lo_m.y), lo_e.z.max(lo_m.z));
    let hi = Vec3::new(hi_e.x.min(hi_m.x), hi_e.y.min(hi_m.y), hi_e.z.min(hi_m.z));
    if (0..3).any(|a| lo[a] >= hi[a]) {
        return Ok(None);
    }
    let mut lattice = Lattice3::covering(lo - anchor, hi - anchor, spacing)?;
    lattice.origin += anchor;
    Ok(Some(lattice))
}

/// Support box, widened to `center ± 8l` for analytic gates.
fn quadrature_box(g: &VectorGate) -> (Vec3, Vec3) {
    let (lo, hi) = g.support_box();
    match g {
        VectorGate::Grid(_) => (lo, hi),
        _ => {
            let l_max = g.profiles().iter().map(|p| p.width).fold(0.0, f64::max);
            let pad = Vec3::new(1.0, 1.0, 1.0) * ((ANALYTIC_REACH - SUPPORT_SIGMAS) * l_max);
            (lo - pad, hi + pad)
        }
    }
}

/// `h = 4π ∫ (curl η)·γ d³r` by the trapezoid rule on the default lattice.
pub fn h_real_space(pair: &GatePair) -> Result<BoundResult> {
    match integration_lattice(pair)? {
        Some(lat) => h_real_space_on(pair, &lat),
        None => Ok(BoundResult::new(0.0, BoundMethod::RealSpace)),
    }
}

/// `h = 4π ∫ (curl γ)·η d³r` by the trapezoid rule on the default lattice.
pub fn h_dual_form(pair: &GatePair) -> Result<BoundResult> {
    match integration_lattice(pair)? {
        Some(lat) => h_dual_form_on(pair, &lat),
        None => Ok(BoundResult::new(0.0, BoundMethod::DualForm)),
    }
}

pub fn h_real_space_on(pair: &GatePair, lattice: &Lattice3) -> Result<BoundResult> {
    let v = curl_dot(&pair.electric, &pair.magnetic, lattice)?;
    Ok(BoundResult::new(4.0 * PI * v, BoundMethod::RealSpace))
}

pub fn h_dual_form_on(pair: &GatePair, lattice: &Lattice3) -> Result<BoundResult> {
    let v = curl_dot(&pair.magnetic, &pair.electric, lattice)?;
    Ok(BoundResult::new(4.0 * PI * v, BoundMethod::DualForm))
}

/// Trapezoid `∫ (curl a)·b d³r` on `lattice`.
///
/// Two analytic gates are streamed node by node. A grid gate's curl is taken
/// spectrally on its own lattice, then both factors are moved onto `lattice`.
fn curl_dot(a: &VectorGate, b: &VectorGate, lattice: &Lattice3) -> Result<f64> {
    for g in [a, b] {
        if let VectorGate::Grid(f) = g {
            f.check_boundary_decay()?;
        }
    }
    if a.is_analytic() && b.is_analytic() {
        if lattice.len() > MAX_QUADRATURE_NODES {
            return Err(Error::GridMismatch(format!(
                "quadrature lattice of {} nodes exceeds {MAX_QUADRATURE_NODES}",
                lattice.len()
            )));
        }
        let term = |idx: usize| {
            let r = lattice.node(idx);
            let c = a.curl(r).expect("analytic");
            let v = b.eval(r).expect("analytic");
            lattice.trapezoid_weight(idx) * c.dot(v)
        };
        return Ok(ordered_sum(lattice.len(), term));
    }
    let curl_a = match a {
        VectorGate::Grid(f) => f.spectral_curl().resample_onto(lattice)?,
        _ => GridVectorField::from_fn(*lattice, |r| a.curl(r).expect("analytic"))?,
    };
    let b_grid = b.sample_on(lattice)?;
    curl_a.dot_integral(&b_grid)
}

/// `l_eff = √((l² + l′²)/2)`.
pub fn effective_width(l: f64, l_prime: f64) -> f64 {
    ((l * l + l_prime * l_prime) / 2.0).sqrt()
}

fn check_unit(v: Vec3, name: &str) -> Result<()> {
    if !v.is_finite() || (v.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("{name} must be a unit vector, got {v:?}")));
    }
    Ok(())
}

/// Closed form for two unit-amplitude Gaussian gates with widths `l`, `l′`,
/// directions `u`, `v` and `separation = r_η - r_γ`:
/// `h = -4π (u×v)·∇δ(separation; √2·l_eff)`.
pub fn h_gaussian_closed(l: f64, l_prime: f64, separation: Vec3, u: Vec3, v: Vec3) -> Result<BoundResult> {
    for (w, name) in [(l, "l"), (l_prime, "l'")] {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::invalid(format!("{name} must be positive, got {w}")));
        }
    }
    if !separation.is_finite() {
        return Err(Error::invalid("separation must be finite"));
    }
    check_unit(u, "u")?;
    check_unit(v, "v")?;
    let l_eff = effective_width(l, l_prime);
    let grad = gaussian_delta_gradient(separation, std::f64::consts::SQRT_2 * l_eff);
    let h = -4.0 * PI * u.cross(v).dot(grad);
    Ok(BoundResult {
        effective_width: Some(l_eff),
        ..BoundResult::new(h, BoundMethod::ClosedForm)
    })
}

/// Closed form for a pair of Gaussian gates, amplitudes included.
pub fn h_gaussian_gates(eta: &GaussianGate, gamma: &GaussianGate) -> BoundResult {
    let r = h_gaussian_closed(
        eta.width(),
        gamma.width(),
        eta.center() - gamma.center(),
        eta.direction(),
        gamma.direction(),
    )
    .expect("validated gates");
    let h = r.h_value * eta.amplitude() * gamma.amplitude();
    BoundResult {
        h_value: h,
        robertson_bound: robertson_bound(h),
        ..r
    }
}

fn gaussian_terms(g: &VectorGate, weight: f64, out: &mut Vec<GaussianGate>) -> bool {
    match g {
        VectorGate::Gaussian(x) => {
            out.push(x.with_amplitude(x.amplitude() * weight));
            true
        }
        // curl-free, and orthogonal to every curl: contributes nothing
        VectorGate::Longitudinal(_) => true,
        VectorGate::Superposition { terms } => terms.iter().all(|t| gaussian_terms(&t.gate, weight * t.weight, out)),
        VectorGate::Grid(_) => false,
    }
}

/// Closed form for any pair of analytic gates, expanded bilinearly over
/// their Gaussian terms. `None` if either gate is a grid.
pub fn h_closed_form(pair: &GatePair) -> Option<BoundResult> {
    let (mut e, mut m) = (Vec::new(), Vec::new());
    if !gaussian_terms(&pair.electric, 1.0, &mut e) || !gaussian_terms(&pair.magnetic, 1.0, &mut m) {
        return None;
    }
    let h: f64 = crate::summation::compensated(
        e.iter()
            .flat_map(|a| m.iter().map(move |b| h_gaussian_gates(a, b).h_value)),
    );
    let effective_width = match (e.as_slice(), m.as_slice()) {
        ([a], [b]) => Some(effective_width(a.width(), b.width())),
        _ => None,
    };
    Some(BoundResult {
        effective_width,
        ..BoundResult::new(h, BoundMethod::ClosedForm)
    })
}

/// Right-hand side of the componentwise Gaussian-gate inequality exactly as
/// printed in the source derivation,
/// `4π (1/(√2 l)) (4π l²)^{-3/2} (|s_m|/(√2 l)) exp(-s²/(4l²)) |ε_jsm|`.
///
/// This equals `|h|`, not `|h|/2`, so it is twice the Robertson bound. It is
/// exposed as a diagnostic only.
pub fn printed_bound_diagnostic(l: f64, separation: Vec3, j: Axis, s: Axis) -> Result<f64> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::invalid(format!("l must be positive, got {l}")));
    }
    let m = j.third(s).ok_or_else(|| {
        Error::invalid(format!(
            "components j = s = {} give a degenerate bound (ε_jsm = 0)",
            j.label()
        ))
    })?;
    let root2l = std::f64::consts::SQRT_2 * l;
    let eps = levi_civita(j, s, m).abs();
    Ok(4.0 * PI / root2l
        * (4.0 * PI * l * l).powf(-1.5)
        * (separation[m.index()].abs() / root2l)
        * (-separation.norm_sq() / (4.0 * l * l)).exp()
        * eps)
}

/// Dimensionless overlap factor `(x/(√2 l)) exp(-x²/(4l²))`.
pub fn overlap_factor(x: f64, l: f64) -> f64 {
    x / (std::f64::consts::SQRT_2 * l) * (-x * x / (4.0 * l * l)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimalSeparation {
    pub distance: f64,
    pub peak_factor: f64,
}

/// Maximizes [`overlap_factor`] over `[0, 10l]` by golden-section search.
pub fn optimal_separation(l: f64) -> Result<OptimalSeparation> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::invalid(format!("l must be positive, got {l}")));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |x: f64| overlap_factor(x, l);
    let (mut a, mut b) = (0.0, 10.0 * l);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-12 * l {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let distance = 0.5 * (a + b);
    Ok(OptimalSeparation {
        distance,
        peak_factor: f(distance),
    })
}

/// Overlap `δ(separation; √2 l_eff)` of two normalized Gaussians.
pub fn gaussian_overlap(l: f64, l_prime: f64, separation: Vec3) -> f64 {
    gaussian_delta(separation, std::f64::consts::SQRT_2 * effective_width(l, l_prime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, SQRT_2};

    // 4π (1/√2) (4π)^{-3/2} e^{-1/2}, evaluated independently of the module
    fn reference_peak() -> f64 {
        4.0 * PI * (1.0 / SQRT_2) * (4.0 * PI).powf(-1.5) * (-0.5f64).exp()
    }

    #[test]
    fn reference_value() {
        assert_relative_eq!(
            reference_peak(),
            1.0 / (2.0 * (2.0 * PI).sqrt() * E.sqrt()),
            max_relative = 1e-14
        );
        assert_relative_eq!(reference_peak(), 0.120_985_362_259_571_7, max_relative = 1e-12);
    }

    #[test]
    fn closed_form_at_optimal_separation() {
        let r = h_gaussian_closed(1.0, 1.0, Vec3::new(SQRT_2, 0.0, 0.0), Vec3::Y, Vec3::Z).unwrap();
        assert_relative_eq!(r.h_value, reference_peak(), max_relative = 1e-13);
        assert_relative_eq!(r.robertson_bound, reference_peak() / 2.0, max_relative = 1e-13);
        assert_eq!(r.robertson_bound, r.h_value.abs() / 2.0);
        assert_eq!(r.method, BoundMethod::ClosedForm);
    }

    #[test]
    fn effective_width_example() {
        let r = h_gaussian_closed(3.0, 4.0, Vec3::X, Vec3::Y, Vec3::Z).unwrap();
        assert!((r.effective_width.unwrap() - 12.5f64.sqrt()).abs() < 1e-12);
        assert_relative_eq!(effective_width(3.0, 4.0), 3.535_533_905_932_737_6, max_relative = 1e-15);
    }

    #[test]
    fn far_separation_vanishes() {
        let peak = h_gaussian_closed(1.0, 1.0, Vec3::new(SQRT_2, 0.0, 0.0), Vec3::Y, Vec3::Z)
            .unwrap()
            .h_value;
        let far = h_gaussian_closed(1.0, 1.0, Vec3::new(10.0, 0.0, 0.0), Vec3::Y, Vec3::Z)
            .unwrap()
            .h_value;
        assert!(far.abs() < 1e-9 * peak);
    }

    #[test]
    fn parallel_or_coincident_gates_commute() {
        let r = h_gaussian_closed(1.0, 1.0, Vec3::new(0.7, 0.2, -1.0), Vec3::Z, Vec3::Z).unwrap();
        assert_eq!(r.h_value, 0.0);
        let r = h_gaussian_closed(1.0, 1.0, Vec3::ZERO, Vec3::Y, Vec3::Z).unwrap();
        assert_eq!(r.h_value, 0.0);
    }

    #[test]
    fn componentwise_levi_civita_structure() {
        // h = -4π ε_jsm ∂_m δ(s; √2 l) for u = e_j, v = e_s
        let sep = Vec3::new(0.4, -0.9, 1.3);
        for j in Axis::ALL {
            for s in Axis::ALL {
                if j == s {
                    continue;
                }
                let r = h_gaussian_closed(1.0, 1.0, sep, Vec3::axis(j), Vec3::axis(s)).unwrap();
                let m = j.third(s).unwrap();
                let sigma = SQRT_2;
                let d_m = -sep[m.index()] / (sigma * sigma) * gaussian_delta(sep, sigma);
                let expect = -4.0 * PI * levi_civita(j, s, m) * d_m;
                assert_relative_eq!(r.h_value, expect, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn printed_diagnostic_is_twice_robertson() {
        let sep = Vec3::new(SQRT_2, 0.0, 0.0);
        let printed = printed_bound_diagnostic(1.0, sep, Axis::Y, Axis::Z).unwrap();
        assert_relative_eq!(printed, reference_peak(), max_relative = 1e-13);
        let robertson = h_gaussian_closed(1.0, 1.0, sep, Vec3::Y, Vec3::Z)
            .unwrap()
            .robertson_bound;
        assert_relative_eq!(robertson / printed, 0.5, max_relative = 1e-13);
        assert_eq!(
            printed_bound_diagnostic(1.0, Vec3::ZERO, Axis::Y, Axis::Z).unwrap(),
            0.0
        );
        assert!(printed_bound_diagnostic(1.0, sep, Axis::X, Axis::X).is_err());
    }

    #[test]
    fn optimal_separation_values() {
        let o = optimal_separation(1.0).unwrap();
        assert!((o.distance - SQRT_2).abs() < 1e-6);
        assert!((o.peak_factor - (-0.5f64).exp()).abs() < 1e-8);
        let o2 = optimal_separation(2.0).unwrap();
        assert!((o2.distance - 2.0 * SQRT_2).abs() < 2e-6);
        for l in [0.5, 1.0, 5.0] {
            let p = optimal_separation(l).unwrap().peak_factor;
            assert!((p - o.peak_factor).abs() < 1e-8);
        }
        assert!(optimal_separation(0.0).is_err());
    }

    #[test]
    fn rejects_invalid_closed_form_inputs() {
        assert!(h_gaussian_closed(0.0, 1.0, Vec3::X, Vec3::Y, Vec3::Z).is_err());
        assert!(h_gaussian_closed(1.0, 1.0, Vec3::X, Vec3::new(0.0, 2.0, 0.0), Vec3::Z).is_err());
    }

    fn gpair(sep: Vec3, l: f64, lp: f64, u: Vec3, v: Vec3) -> GatePair {
        GatePair::new(
            GaussianGate::unit(sep, l, u).unwrap(),
            GaussianGate::unit(Vec3::ZERO, lp, v).unwrap(),
        )
    }

    #[test]
    fn real_space_matches_closed_form() {
        let p = gpair(Vec3::new(SQRT_2, 0.0, 0.0), 1.0, 1.0, Vec3::Y, Vec3::Z);
        let rs = h_real_space(&p).unwrap();
        assert_relative_eq!(rs.h_value, reference_peak(), max_relative = 1e-6);
        let dual = h_dual_form(&p).unwrap();
        assert_relative_eq!(dual.h_value, rs.h_value, max_relative = 1e-8);
        let swapped = h_real_space(&p.swapped()).unwrap();
        assert_relative_eq!(swapped.h_value, rs.h_value, max_relative = 1e-8);
    }

    #[test]
    fn identical_coincident_gates_commute_in_real_space() {
        let p = gpair(Vec3::ZERO, 1.0, 1.0, Vec3::Y, Vec3::Z);
        assert!(h_real_space(&p).unwrap().h_value.abs() < 1e-10);
        let p = gpair(Vec3::new(0.5, 1.0, 0.0), 1.0, 0.7, Vec3::X, Vec3::X);
        assert!(h_real_space(&p).unwrap().h_value.abs() < 1e-10);
    }

    #[test]
    fn zero_gate_gives_zero() {
        let p = GatePair::new(
            GaussianGate::new(Vec3::ZERO, 1.0, Vec3::X, 0.0).unwrap(),
            GaussianGate::unit(Vec3::X, 1.0, Vec3::Y).unwrap(),
        );
        assert_eq!(h_dual_form(&p).unwrap().h_value, 0.0);
    }

    #[test]
    fn closed_form_expansion_of_superpositions() {
        let a = GaussianGate::unit(Vec3::new(1.0, 0.0, 0.0), 1.0, Vec3::Y).unwrap();
        let b = GaussianGate::unit(Vec3::new(0.0, 0.5, 0.0), 0.7, Vec3::X).unwrap();
        let g = GaussianGate::unit(Vec3::ZERO, 1.2, Vec3::Z).unwrap();
        let eta = VectorGate::superpose([
            (2.0, a.into()),
            (-1.0, b.into()),
            (
                5.0,
                crate::gates::LongitudinalGate::new(Vec3::ZERO, 1.0, 1.0)
                    .unwrap()
                    .into(),
            ),
        ])
        .unwrap();
        let r = h_closed_form(&GatePair::new(eta, g)).unwrap();
        let expect = 2.0 * h_gaussian_gates(&a, &g).h_value - h_gaussian_gates(&b, &g).h_value;
        assert_relative_eq!(r.h_value, expect, max_relative = 1e-14);
    }

    fn sampled(g: &GaussianGate) -> VectorGate {
        let lat = crate::gates::centered_lattice(g, 0.25, 6.0).unwrap();
        VectorGate::Grid(crate::gates::sample_to_grid(g, lat.origin, lat.spacing, lat.dims).unwrap())
    }

    #[test]
    fn sampled_grids_of_different_widths_match_closed_form() {
        let eta = GaussianGate::unit(Vec3::new(0.9, -0.4, 0.6), 0.5, Vec3::new(0.0, 0.6, 0.8)).unwrap();
        let gamma = GaussianGate::unit(Vec3::ZERO, 2.0, Vec3::new(1.0, 0.0, 0.0)).unwrap();
        let exact = h_gaussian_gates(&eta, &gamma).h_value;
        let p = GatePair::new(sampled(&eta), sampled(&gamma));
        let rs = h_real_space(&p).unwrap().h_value;
        assert_relative_eq!(rs, exact, max_relative = 1e-6);
        let dual = h_dual_form(&p).unwrap().h_value;
        // the ±6l truncation edge of the narrow grid sits inside the wide gate
        assert_relative_eq!(dual, rs, max_relative = 1e-7);
        let mixed = GatePair::new(eta, sampled(&gamma));
        assert_relative_eq!(h_real_space(&mixed).unwrap().h_value, exact, max_relative = 1e-6);
    }

    #[test]
    fn translation_invariance() {
        let p = gpair(Vec3::new(0.8, 0.5, -0.3), 1.0, 1.5, Vec3::Y, Vec3::new(0.6, 0.0, 0.8));
        let h0 = h_real_space(&p).unwrap().h_value;
        let h1 = h_real_space(&p.shifted(Vec3::new(3.3, -1.7, 0.41))).unwrap().h_value;
        assert!((h0 - h1).abs() <= 1e-10 * h0.abs());
    }

    #[test]
    fn bilinearity_on_fixed_lattice() {
        let e1 = GaussianGate::unit(Vec3::new(1.0, 0.0, 0.0), 1.0, Vec3::Y).unwrap();
        let e2 = GaussianGate::unit(Vec3::new(0.0, -0.7, 0.3), 0.8, Vec3::Z).unwrap();
        let g = VectorGate::from(GaussianGate::unit(Vec3::ZERO, 1.2, Vec3::X).unwrap());
        let (a, b) = (1.7, -0.6);
        let sum = VectorGate::superpose([(a, e1.into()), (b, e2.into())]).unwrap();
        let lat = integration_lattice(&GatePair::new(sum.clone(), g.clone()))
            .unwrap()
            .unwrap();
        let h = |e: VectorGate| h_real_space_on(&GatePair::new(e, g.clone()), &lat).unwrap().h_value;
        let lhs = h(sum);
        let rhs = a * h(e1.into()) + b * h(e2.into());
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs());
    }

    #[test]
    fn disjoint_supports_give_zero() {
        let p = gpair(Vec3::new(20.0, 0.0, 0.0), 1.0, 1.0, Vec3::Y, Vec3::Z);
        assert!(integration_lattice(&p).unwrap().is_none());
        assert_eq!(h_real_space(&p).unwrap().h_value, 0.0);
    }
}
