//! C ABI for gatefield.
//!
//! Gates and box lattices are opaque heap handles returned through `out`
//! pointers and released with `gf_gate_free` or `gf_lattice_free`. Every fallible call
//! returns a [`GfStatus`]; on failure the message is available from
//! [`gf_last_error`] on the same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use gatefield::boxmodes::{self, BoxLattice};
use gatefield::commutator::{self, BoundMethod, GatePair};
use gatefield::gates::{io, GaussianGate, LongitudinalGate, VectorGate};
use gatefield::scenario::{self, ConstantsMode};
use gatefield::vacuum::{self, Margin, VarianceMethod};
use gatefield::{Error, Vec3};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfStatus {
    Ok = 0,
    /// A parameter violated a precondition.
    InvalidArgument = 1,
    /// A required pointer was null.
    NullPointer = 2,
    /// A numerical precondition failed (decay, resolution, support, ...).
    Numerical = 3,
    /// File could not be read or parsed.
    Io = 4,
    /// Internal panic, caught at the boundary.
    Panic = 5,
}

/// Opaque gate handle.
pub struct GfGate(VectorGate);

/// Opaque periodic-box lattice handle.
pub struct GfLattice(BoxLattice);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfBoundMethod {
    RealSpace = 0,
    DualForm = 1,
    ClosedForm = 2,
    DiscreteSum = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfVarianceMethod {
    ClosedForm = 0,
    RadialQuadrature = 1,
    SphericalQuadrature = 2,
    GridSum = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GfMode {
    Exact = 0,
    PaperConstants = 1,
}

/// `h(η, γ)` and the Robertson bound `|h|/2`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GfBound {
    pub h: f64,
    pub robertson_bound: f64,
    pub method: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GfVariance {
    pub value: f64,
    pub method: i32,
}

/// `margin` is meaningful only when `constrained` is nonzero.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GfUncertainty {
    pub delta_e: f64,
    pub delta_h: f64,
    pub bound: f64,
    pub product: f64,
    pub margin: f64,
    pub constrained: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GfOptimalSeparation {
    pub distance: f64,
    pub peak_factor: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GfMcEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub imag_residual: f64,
}

/// SI scenario report.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct GfScenario {
    pub gate_l: f64,
    pub intensity: f64,
    pub bound_product_max: f64,
    pub optimal_separation: f64,
    pub eh_product: f64,
    pub ratio: f64,
    pub delta_e_over_e: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GfStatus {
    match e {
        Error::Io(_) | Error::Json(_) => GfStatus::Io,
        _ if e.is_validation() => GfStatus::InvalidArgument,
        _ => GfStatus::Numerical,
    }
}

struct Fail(GfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(GfStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GfStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".to_string());
            set_error(&format!("internal panic: {msg}"));
            GfStatus::Panic
        }
    }
}

unsafe fn vec3(p: *const f64, what: &str) -> Result<Vec3, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, 3);
    Ok(Vec3::new(s[0], s[1], s[2]))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn bound_method(m: BoundMethod) -> i32 {
    (match m {
        BoundMethod::RealSpace => GfBoundMethod::RealSpace,
        BoundMethod::DualForm => GfBoundMethod::DualForm,
        BoundMethod::ClosedForm => GfBoundMethod::ClosedForm,
        BoundMethod::DiscreteSum => GfBoundMethod::DiscreteSum,
    }) as i32
}

fn variance_method(m: VarianceMethod) -> i32 {
    (match m {
        VarianceMethod::ClosedForm => GfVarianceMethod::ClosedForm,
        VarianceMethod::RadialQuadrature => GfVarianceMethod::RadialQuadrature,
        VarianceMethod::SphericalQuadrature => GfVarianceMethod::SphericalQuadrature,
        VarianceMethod::GridSum => GfVarianceMethod::GridSum,
    }) as i32
}

fn bound(r: commutator::BoundResult) -> GfBound {
    GfBound {
        h: r.h_value,
        robertson_bound: r.robertson_bound,
        method: bound_method(r.method),
    }
}

fn pair(eta: *const GfGate, gamma: *const GfGate) -> Result<GatePair, Fail> {
    let (e, g) = unsafe { (deref(eta, "eta")?, deref(gamma, "gamma")?) };
    Ok(GatePair {
        electric: e.0.clone(),
        magnetic: g.0.clone(),
    })
}

fn new_gate(out: *mut *mut GfGate, g: VectorGate) -> Result<(), Fail> {
    unsafe { write(out, Box::into_raw(Box::new(GfGate(g))), "out") }
}

/// Message of the last failed call on this thread, or an empty string.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Gaussian gate `amplitude · direction · δ(r - center; l)`.
///
/// # Safety
/// `center` and `direction` point to 3 doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_gate_gaussian(
    center: *const f64,
    l: f64,
    direction: *const f64,
    amplitude: f64,
    out: *mut *mut GfGate,
) -> GfStatus {
    guard(|| {
        let g = GaussianGate::new(vec3(center, "center")?, l, vec3(direction, "direction")?, amplitude)?;
        new_gate(out, g.into())
    })
}

/// Longitudinal gate `amplitude · ∇δ(r - center; l)`.
///
/// # Safety
/// `center` points to 3 doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_gate_longitudinal(
    center: *const f64,
    l: f64,
    amplitude: f64,
    out: *mut *mut GfGate,
) -> GfStatus {
    guard(|| {
        let g = LongitudinalGate::new(vec3(center, "center")?, l, amplitude)?;
        new_gate(out, g.into())
    })
}

/// Grid gate read from a binary or `.json` grid file.
///
/// # Safety
/// `path` is a NUL-terminated UTF-8 string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_gate_from_file(path: *const c_char, out: *mut *mut GfGate) -> GfStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let p = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Fail(GfStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let field = io::read_any(Path::new(p))?;
        new_gate(out, field.into())
    })
}

/// `wa · a + wb · b` for analytic gates.
///
/// # Safety
/// `a`, `b` are live gate handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_gate_superpose(
    wa: f64,
    a: *const GfGate,
    wb: f64,
    b: *const GfGate,
    out: *mut *mut GfGate,
) -> GfStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        let g = VectorGate::superpose([(wa, a.0.clone()), (wb, b.0.clone())])?;
        new_gate(out, g)
    })
}

/// The gate translated by `by`.
///
/// # Safety
/// `gate` is a live handle; `by` points to 3 doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_gate_shifted(gate: *const GfGate, by: *const f64, out: *mut *mut GfGate) -> GfStatus {
    guard(|| {
        let g = deref(gate, "gate")?;
        new_gate(out, g.0.shifted(vec3(by, "by")?))
    })
}

/// Releases a gate; null is ignored.
///
/// # Safety
/// `gate` was returned by this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gf_gate_free(gate: *mut GfGate) {
    if !gate.is_null() {
        drop(Box::from_raw(gate));
    }
}

/// Vacuum variance `⟨E(η)²⟩`.
///
/// # Safety
/// `gate` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_variance(gate: *const GfGate, out: *mut GfVariance) -> GfStatus {
    guard(|| {
        let v = vacuum::variance(&deref(gate, "gate")?.0)?;
        write(
            out,
            GfVariance {
                value: v.value,
                method: variance_method(v.method),
            },
            "out",
        )
    })
}

/// `h(η, γ)`, closed form when both gates are Gaussian superpositions,
/// real-space quadrature otherwise.
///
/// # Safety
/// `eta`, `gamma` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_commutator(eta: *const GfGate, gamma: *const GfGate, out: *mut GfBound) -> GfStatus {
    guard(|| {
        let p = pair(eta, gamma)?;
        let r = match commutator::h_closed_form(&p) {
            Some(r) => r,
            None => commutator::h_real_space(&p)?,
        };
        write(out, bound(r), "out")
    })
}

/// `h(η, γ)` by real-space quadrature of `(curl η)·γ`.
///
/// # Safety
/// `eta`, `gamma` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_commutator_real_space(
    eta: *const GfGate,
    gamma: *const GfGate,
    out: *mut GfBound,
) -> GfStatus {
    guard(|| write(out, bound(commutator::h_real_space(&pair(eta, gamma)?)?), "out"))
}

/// `h(η, γ)` by real-space quadrature of `(curl γ)·η`.
///
/// # Safety
/// `eta`, `gamma` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_commutator_dual_form(
    eta: *const GfGate,
    gamma: *const GfGate,
    out: *mut GfBound,
) -> GfStatus {
    guard(|| write(out, bound(commutator::h_dual_form(&pair(eta, gamma)?)?), "out"))
}

/// Vacuum uncertainty report for the pair.
///
/// # Safety
/// `eta`, `gamma` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_uncertainty(eta: *const GfGate, gamma: *const GfGate, out: *mut GfUncertainty) -> GfStatus {
    guard(|| {
        let r = vacuum::uncertainty_report(&pair(eta, gamma)?)?;
        let (margin, constrained) = match r.margin {
            Margin::Finite(m) => (m, true),
            Margin::Unconstrained => (f64::INFINITY, false),
        };
        write(
            out,
            GfUncertainty {
                delta_e: r.delta_e,
                delta_h: r.delta_h,
                bound: r.bound,
                product: r.product,
                margin,
                constrained,
            },
            "out",
        )
    })
}

/// Separation maximizing the Gaussian overlap factor.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_optimal_separation(l: f64, out: *mut GfOptimalSeparation) -> GfStatus {
    guard(|| {
        let o = commutator::optimal_separation(l)?;
        write(
            out,
            GfOptimalSeparation {
                distance: o.distance,
                peak_factor: o.peak_factor,
            },
            "out",
        )
    })
}

/// `√((l² + l′²)/2)`.
#[no_mangle]
pub extern "C" fn gf_effective_width(l: f64, l_prime: f64) -> f64 {
    commutator::effective_width(l, l_prime)
}

/// Box of side `box_size` with modes `|n_i| ≤ cutoff`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_lattice_new(box_size: f64, cutoff: u32, out: *mut *mut GfLattice) -> GfStatus {
    guard(|| {
        let lat = BoxLattice::new(box_size, cutoff)?;
        write(out, Box::into_raw(Box::new(GfLattice(lat))), "out")
    })
}

/// Box of side `box_size` whose cutoff reaches `k_max`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_lattice_with_k_max(box_size: f64, k_max: f64, out: *mut *mut GfLattice) -> GfStatus {
    guard(|| {
        let lat = BoxLattice::with_k_max(box_size, k_max)?;
        write(out, Box::into_raw(Box::new(GfLattice(lat))), "out")
    })
}

/// Sets the allowed gate mass outside the box.
///
/// # Safety
/// `lattice` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn gf_lattice_set_support_tolerance(lattice: *mut GfLattice, tolerance: f64) -> GfStatus {
    guard(|| {
        let lat = lattice.as_mut().ok_or_else(|| null("lattice"))?;
        lat.0 = lat.0.clone().with_support_tolerance(tolerance)?;
        Ok(())
    })
}

/// Number of modes, or 0 for a null handle.
///
/// # Safety
/// `lattice` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gf_lattice_mode_count(lattice: *const GfLattice) -> u64 {
    lattice.as_ref().map_or(0, |l| l.0.len() as u64)
}

/// Releases a lattice; null is ignored.
///
/// # Safety
/// `lattice` was returned by this library and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gf_lattice_free(lattice: *mut GfLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// Box-mode sum for the vacuum variance.
///
/// # Safety
/// `gate`, `lattice` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_discrete_variance(
    gate: *const GfGate,
    lattice: *const GfLattice,
    out: *mut f64,
) -> GfStatus {
    guard(|| {
        let v = boxmodes::discrete_variance(&deref(gate, "gate")?.0, &deref(lattice, "lattice")?.0)?;
        write(out, v, "out")
    })
}

/// Box-mode sum for `h(η, γ)`.
///
/// # Safety
/// `eta`, `gamma`, `lattice` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_discrete_h(
    eta: *const GfGate,
    gamma: *const GfGate,
    lattice: *const GfLattice,
    out: *mut GfBound,
) -> GfStatus {
    guard(|| {
        let r = boxmodes::discrete_h(&pair(eta, gamma)?, &deref(lattice, "lattice")?.0)?;
        write(out, bound(r), "out")
    })
}

/// `Σ_k Σ_α k/2` over the lattice, or NaN for a null handle.
///
/// # Safety
/// `lattice` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gf_zero_point_energy(lattice: *const GfLattice) -> f64 {
    lattice.as_ref().map_or(f64::NAN, |l| boxmodes::zero_point_energy(&l.0))
}

/// Monte Carlo estimate of the variance over vacuum field samples.
///
/// # Safety
/// `gate`, `lattice` are live handles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_mc_variance(
    gate: *const GfGate,
    lattice: *const GfLattice,
    seed: u64,
    n_samples: u64,
    out: *mut GfMcEstimate,
) -> GfStatus {
    guard(|| {
        let n =
            usize::try_from(n_samples).map_err(|_| Fail(GfStatus::InvalidArgument, "n_samples too large".into()))?;
        let m = boxmodes::mc_variance(&deref(gate, "gate")?.0, &deref(lattice, "lattice")?.0, seed, n)?;
        write(
            out,
            GfMcEstimate {
                estimate: m.estimate,
                std_error: m.std_error,
                n_samples: m.n_samples as u64,
                seed: m.seed,
                imag_residual: m.imag_residual,
            },
            "out",
        )
    })
}

/// Nanometer-gate scenario in SI units; `mode` is a [`GfMode`] value.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gf_nanogate_example(l: f64, intensity: f64, mode: i32, out: *mut GfScenario) -> GfStatus {
    guard(|| {
        let mode = match mode {
            m if m == GfMode::Exact as i32 => ConstantsMode::Exact,
            m if m == GfMode::PaperConstants as i32 => ConstantsMode::PaperConstants,
            m => return Err(Fail(GfStatus::InvalidArgument, format!("unknown mode {m}"))),
        };
        let r = scenario::nanogate_example(l, intensity, mode)?;
        write(
            out,
            GfScenario {
                gate_l: r.gate_l,
                intensity: r.intensity,
                bound_product_max: r.bound_product_max,
                optimal_separation: r.optimal_separation,
                eh_product: r.eh_product,
                ratio: r.ratio,
                delta_e_over_e: r.delta_e_over_e,
            },
            "out",
        )
    })
}
