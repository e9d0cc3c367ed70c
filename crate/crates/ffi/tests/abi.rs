use std::f64::consts::{PI, SQRT_2};
use std::ffi::{CStr, CString};
use std::ptr;

use gatefield_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gf_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn gaussian(center: [f64; 3], l: f64, dir: [f64; 3]) -> *mut GfGate {
    let mut g = ptr::null_mut();
    let s = unsafe { gf_gate_gaussian(center.as_ptr(), l, dir.as_ptr(), 1.0, &mut g) };
    assert_eq!(s, GfStatus::Ok, "{}", last_error());
    g
}

#[test]
fn variance_and_commutator_round_trip() {
    let eta = gaussian([SQRT_2, 0.0, 0.0], 1.0, [0.0, 1.0, 0.0]);
    let gamma = gaussian([0.0; 3], 1.0, [0.0, 0.0, 1.0]);
    unsafe {
        let mut v = GfVariance::default();
        assert_eq!(gf_variance(eta, &mut v), GfStatus::Ok);
        assert!((v.value * 3.0 * PI - 1.0).abs() < 1e-8);
        assert_eq!(v.method, GfVarianceMethod::RadialQuadrature as i32);

        let mut b = GfBound::default();
        assert_eq!(gf_commutator(eta, gamma, &mut b), GfStatus::Ok);
        assert!((b.h - 0.120_985_362_259_571_7).abs() < 1e-12);
        assert_eq!(b.robertson_bound, b.h.abs() / 2.0);
        assert_eq!(b.method, GfBoundMethod::ClosedForm as i32);

        let mut rs = GfBound::default();
        let mut dual = GfBound::default();
        assert_eq!(gf_commutator_real_space(eta, gamma, &mut rs), GfStatus::Ok);
        assert_eq!(gf_commutator_dual_form(eta, gamma, &mut dual), GfStatus::Ok);
        assert!((rs.h / b.h - 1.0).abs() < 1e-6);
        assert!((dual.h / rs.h - 1.0).abs() < 1e-8);

        let mut u = GfUncertainty::default();
        assert_eq!(gf_uncertainty(eta, gamma, &mut u), GfStatus::Ok);
        assert!(u.constrained);
        assert!((u.margin - 1.753_985_662_611_885).abs() < 1e-6);

        gf_gate_free(eta);
        gf_gate_free(gamma);
    }
}

#[test]
fn errors_are_reported_not_thrown() {
    unsafe {
        let mut g = ptr::null_mut();
        let c = [0.0; 3];
        let d = [0.0, 0.0, 1.0];
        assert_eq!(
            gf_gate_gaussian(c.as_ptr(), -1.0, d.as_ptr(), 1.0, &mut g),
            GfStatus::InvalidArgument
        );
        assert!(g.is_null());
        assert!(last_error().contains("width"), "{}", last_error());

        assert_eq!(
            gf_gate_gaussian(ptr::null(), 1.0, d.as_ptr(), 1.0, &mut g),
            GfStatus::NullPointer
        );
        assert_eq!(
            gf_gate_gaussian(c.as_ptr(), 1.0, d.as_ptr(), 1.0, ptr::null_mut()),
            GfStatus::NullPointer
        );

        let mut v = GfVariance::default();
        assert_eq!(gf_variance(ptr::null(), &mut v), GfStatus::NullPointer);

        let path = CString::new("/nonexistent/grid.bin").unwrap();
        assert_eq!(gf_gate_from_file(path.as_ptr(), &mut g), GfStatus::Io);

        let mut o = GfOptimalSeparation::default();
        assert_eq!(gf_optimal_separation(1.0, &mut o), GfStatus::Ok);
        assert_eq!(last_error(), "");
        assert!((o.distance - SQRT_2).abs() < 1e-6);

        let mut s = GfScenario::default();
        assert_eq!(gf_nanogate_example(1e-9, 1e19, 7, &mut s), GfStatus::InvalidArgument);

        gf_gate_free(ptr::null_mut());
        gf_lattice_free(ptr::null_mut());
    }
}

#[test]
fn lattice_handles() {
    unsafe {
        let mut lat = ptr::null_mut();
        assert_eq!(gf_lattice_new(2.0 * PI, 1, &mut lat), GfStatus::Ok);
        assert_eq!(gf_lattice_mode_count(lat), 26);
        let zpe = gf_zero_point_energy(lat);
        assert!((zpe - (6.0 + 12.0 * SQRT_2 + 8.0 * 3f64.sqrt())).abs() < 1e-12);
        gf_lattice_free(lat);

        let mut lat = ptr::null_mut();
        assert_eq!(gf_lattice_new(12.0, 0, &mut lat), GfStatus::InvalidArgument);
        assert_eq!(gf_lattice_new(12.0, 3, &mut lat), GfStatus::Ok);
        let g = gaussian([0.0; 3], 1.0, [1.0, 0.0, 0.0]);
        let mut d = 0.0;
        assert_eq!(gf_discrete_variance(g, lat, &mut d), GfStatus::Ok);
        let mut a = GfMcEstimate::default();
        let mut b = GfMcEstimate::default();
        assert_eq!(gf_mc_variance(g, lat, 11, 2000, &mut a), GfStatus::Ok);
        assert_eq!(gf_mc_variance(g, lat, 11, 2000, &mut b), GfStatus::Ok);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!((a.seed, a.n_samples), (11, 2000));
        assert!(((a.estimate - d) / a.std_error).abs() < 5.0);
        assert_eq!(gf_mc_variance(g, lat, 11, 10, &mut a), GfStatus::InvalidArgument);

        let far = gaussian([5.5, 0.0, 0.0], 1.0, [1.0, 0.0, 0.0]);
        let mut h = GfBound::default();
        assert_eq!(gf_discrete_h(g, far, lat, &mut h), GfStatus::Numerical);
        assert!(last_error().contains("support"), "{}", last_error());
        assert_eq!(gf_lattice_set_support_tolerance(lat, 0.5), GfStatus::Ok);
        assert_eq!(gf_discrete_h(g, far, lat, &mut h), GfStatus::Ok);

        gf_gate_free(far);
        gf_gate_free(g);
        gf_lattice_free(lat);
    }
}

#[test]
fn scenario_and_superposition() {
    unsafe {
        let mut s = GfScenario::default();
        assert_eq!(
            gf_nanogate_example(1e-9, 1e19, GfMode::PaperConstants as i32, &mut s),
            GfStatus::Ok
        );
        assert!((s.eh_product / (4.0 * PI / 3.0 * 1e11) - 1.0).abs() < 1e-10);
        assert!((s.ratio / 9.2e-3 - 1.0).abs() < 0.02);
        assert!((gf_effective_width(3.0, 4.0) - 12.5f64.sqrt()).abs() < 1e-12);

        let a = gaussian([0.0; 3], 1.0, [0.0, 1.0, 0.0]);
        let mut shifted = ptr::null_mut();
        let by = [1.0, 2.0, 3.0];
        assert_eq!(gf_gate_shifted(a, by.as_ptr(), &mut shifted), GfStatus::Ok);
        let mut sum = ptr::null_mut();
        assert_eq!(gf_gate_superpose(1.0, a, -1.0, shifted, &mut sum), GfStatus::Ok);
        let mut v = GfVariance::default();
        assert_eq!(gf_variance(sum, &mut v), GfStatus::Ok);
        assert_eq!(v.method, GfVarianceMethod::SphericalQuadrature as i32);
        assert!(v.value > 0.0);

        let mut lon = ptr::null_mut();
        let c = [0.0; 3];
        assert_eq!(gf_gate_longitudinal(c.as_ptr(), 1.0, 1.0, &mut lon), GfStatus::Ok);
        assert_eq!(gf_variance(lon, &mut v), GfStatus::Ok);
        assert!(v.value.abs() < 1e-12);

        for g in [a, shifted, sum, lon] {
            gf_gate_free(g);
        }
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(gf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
