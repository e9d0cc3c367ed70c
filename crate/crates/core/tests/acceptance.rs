//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::{E, PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use gatefield::boxmodes::{discrete_h, discrete_variance, mc_variance, mode_amplitudes, zero_point_energy, BoxLattice};
use gatefield::commutator::{
    effective_width, h_dual_form, h_gaussian_closed, h_gaussian_gates, h_real_space, h_real_space_on,
    integration_lattice, optimal_separation, GatePair,
};
use gatefield::gates::{centered_lattice, sample_to_grid, GaussianGate, LongitudinalGate, VectorGate};
use gatefield::scenario::{nanogate_example, ConstantsMode};
use gatefield::vacuum::{printed_comparison, uncertainty_report, variance, variance_quadrature, Margin};
use gatefield::Vec3;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        xs[(self.0.next_u64() % xs.len() as u64) as usize]
    }

    fn unit(&mut self) -> Vec3 {
        loop {
            let v = Vec3::new(
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
                self.uniform(-1.0, 1.0),
            );
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v * (1.0 / n);
            }
        }
    }

    fn vec(&mut self, r: f64) -> Vec3 {
        Vec3::new(self.uniform(-r, r), self.uniform(-r, r), self.uniform(-r, r))
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn third_pi() -> f64 {
    1.0 / (3.0 * PI)
}

/// Closed-form `h` at the optimal separation for perpendicular unit gates.
fn peak_h(l: f64, lp: f64) -> f64 {
    let s = optimal_separation(effective_width(l, lp)).unwrap().distance;
    h_gaussian_closed(l, lp, Vec3::new(s, 0.0, 0.0), Vec3::Y, Vec3::Z)
        .unwrap()
        .h_value
}

fn sampled(g: &GaussianGate) -> VectorGate {
    let lat = centered_lattice(g, 0.25, 6.0).unwrap();
    VectorGate::Grid(sample_to_grid(g, lat.origin, lat.spacing, lat.dims).unwrap())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let g = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Z).unwrap();
    let v1 = variance_quadrature(&g).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let e1 = rel(v1, third_pi());
    let mut worst = 0.0f64;
    for l in [0.5, 2.0, 5.0] {
        let g = VectorGate::gaussian(Vec3::ZERO, l, Vec3::Z).unwrap();
        let v = variance_quadrature(&g).unwrap();
        worst = worst.max(rel(v * l.powi(4), v1)).max(rel(v, third_pi() / l.powi(4)));
    }
    outcome(
        e1 <= 1e-8 && worst <= 1e-8 && elapsed < 1.0,
        format!("variance(l=1) = {v1:.10} (rel err {e1:.1e}), l^-4 scaling err {worst:.1e}, {elapsed:.3} s"),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = Rng::new(2);
    let widths = [0.5, 1.0, 2.0];
    let (mut grid_err, mut dual_err, mut antisym, mut sym, mut grid_dual) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut n = 0;
    while n < 20 {
        let (l, lp) = (rng.pick(&widths), rng.pick(&widths));
        let sep = rng.vec(1.5);
        let (u, v) = (rng.unit(), rng.unit());
        let eta = GaussianGate::unit(sep, l, u).unwrap();
        let gamma = GaussianGate::unit(Vec3::ZERO, lp, v).unwrap();
        let exact = h_gaussian_gates(&eta, &gamma).h_value;
        if exact.abs() < 0.1 * peak_h(l, lp) {
            continue;
        }
        n += 1;
        let grids = GatePair::new(sampled(&eta), sampled(&gamma));
        let rs_grid = h_real_space(&grids).unwrap().h_value;
        grid_err = grid_err.max(rel(rs_grid, exact));
        grid_dual = grid_dual.max(rel(h_dual_form(&grids).unwrap().h_value, rs_grid));

        let analytic = GatePair::new(eta, gamma);
        let rs = h_real_space(&analytic).unwrap().h_value;
        dual_err = dual_err.max(rel(h_dual_form(&analytic).unwrap().h_value, rs));
        let swapped = h_real_space(&analytic.swapped()).unwrap().h_value;
        antisym = antisym.max(((swapped + rs) / rs).abs());
        sym = sym.max(((swapped - rs) / rs).abs());
    }
    outcome(
        grid_err <= 1e-6 && dual_err <= 1e-8 && antisym <= 1e-8,
        format!(
            "closed vs sampled-grid real space {grid_err:.1e} (<= 1e-6), dual vs real {dual_err:.1e} (<= 1e-8; sampled grids {grid_dual:.1e}), \
             antisymmetry |h(g,e)+h(e,g)|/|h| = {antisym:.3} (<= 1e-8 required; h is symmetric: |h(g,e)-h(e,g)|/|h| = {sym:.1e})"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut detail = String::new();
    for l in [1.0, 0.5, 3.0] {
        let o = optimal_separation(l).unwrap();
        let (dd, dp) = ((o.distance - SQRT_2 * l).abs(), (o.peak_factor - 1.0 / E.sqrt()).abs());
        ok &= dd <= 1e-6 * l && dp <= 1e-8;
        if l == 1.0 {
            detail = format!(
                "argmax = {:.9} (err {dd:.1e}), peak = {:.9} (err {dp:.1e})",
                o.distance, o.peak_factor
            );
        }
    }
    outcome(ok, detail + ", l in {1, 0.5, 3}")
}

fn criterion_4() -> Outcome {
    let w = effective_width(3.0, 4.0);
    let e = (w - 12.5f64.sqrt()).abs();
    outcome(e <= 1e-12, format!("l_eff(3,4) = {w:.15} (err {e:.1e})"))
}

fn criterion_5() -> Outcome {
    let mut rng = Rng::new(5);
    let mut min_margin = f64::INFINITY;
    let mut unconstrained = 0;
    for _ in 0..200 {
        let eta = GaussianGate::unit(rng.vec(3.0), rng.uniform(0.5, 2.0), rng.unit()).unwrap();
        let gamma = GaussianGate::unit(rng.vec(3.0), rng.uniform(0.5, 2.0), rng.unit()).unwrap();
        match uncertainty_report(&GatePair::new(eta, gamma)).unwrap().margin {
            Margin::Finite(m) => min_margin = min_margin.min(m),
            Margin::Unconstrained => unconstrained += 1,
        }
    }
    let pair = GatePair::new(
        GaussianGate::unit(Vec3::new(SQRT_2, 0.0, 0.0), 1.0, Vec3::Y).unwrap(),
        GaussianGate::unit(Vec3::ZERO, 1.0, Vec3::Z).unwrap(),
    );
    let at_peak = uncertainty_report(&pair).unwrap().margin.value().unwrap();
    let expect = third_pi() / (1.0 / (4.0 * (2.0 * PI).sqrt() * E.sqrt()));
    let pc = printed_comparison(1.0).unwrap();
    outcome(
        min_margin >= 1.0 && (at_peak - expect).abs() <= 1e-4 && !pc.printed_holds && pc.robertson_holds,
        format!(
            "min margin over 200 configs {min_margin:.4} ({unconstrained} unconstrained), peak margin {at_peak:.6} vs {expect:.6}; \
             printed comparison {:.5} >= {:.5} is {}, Robertson {:.5} >= {:.5} is {}",
            pc.variance, pc.printed_bound, pc.printed_holds, pc.variance, pc.robertson_bound, pc.robertson_holds
        ),
    )
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let p = nanogate_example(1e-9, 1e19, ConstantsMode::PaperConstants).unwrap();
    let x = nanogate_example(1e-9, 1e19, ConstantsMode::Exact).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let eh = rel(p.eh_product, 4.0 * PI / 3.0 * 1e11);
    let ratio_ok = rel(p.ratio, 9.2e-3) <= 0.02;
    let factor = 4e-2 / p.ratio;
    let de_ok = (0.05..=0.3).contains(&p.delta_e_over_e);
    outcome(
        eh <= 1e-10 && ratio_ok && (0.2..=5.0).contains(&factor) && de_ok && elapsed < 0.1,
        format!(
            "EH rel err {eh:.1e}, paper-constants ratio {:.4e} (printed 4e-2 is {factor:.2}x), dE/E {:.4}, exact-mode ratio {:.4e}, {:.4} s",
            p.ratio, p.delta_e_over_e, x.ratio, elapsed
        ),
    )
}

fn criterion_7() -> Outcome {
    let eta = VectorGate::gaussian(Vec3::new(SQRT_2, 0.0, 0.0), 1.0, Vec3::Y).unwrap();
    let gamma = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Z).unwrap();
    let single = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Y).unwrap();
    let pair = GatePair {
        electric: eta,
        magnetic: gamma,
    };
    let h_exact = h_gaussian_closed(1.0, 1.0, Vec3::new(SQRT_2, 0.0, 0.0), Vec3::Y, Vec3::Z)
        .unwrap()
        .h_value;
    let (mut ev, mut eh) = (Vec::new(), Vec::new());
    let mut last_time = 0.0;
    for l in [6.0, 9.0, 12.0] {
        let lat = BoxLattice::with_k_max(l, 8.0)
            .unwrap()
            .with_support_tolerance(5e-2)
            .unwrap();
        let t = Instant::now();
        ev.push(rel(discrete_variance(&single, &lat).unwrap(), third_pi()));
        eh.push(rel(discrete_h(&pair, &lat).unwrap().h_value, h_exact));
        last_time = t.elapsed().as_secs_f64();
    }
    let mono = |e: &[f64]| e.windows(2).all(|w| w[1] < w[0]);
    outcome(
        ev[2] < 5e-3 && eh[2] < 5e-3 && mono(&ev) && mono(&eh) && last_time < 30.0,
        format!(
            "variance errors L=6,9,12: {:.2e}, {:.2e}, {:.2e}; h errors: {:.2e}, {:.2e}, {:.2e}; L=12 took {last_time:.2} s",
            ev[0], ev[1], ev[2], eh[0], eh[1], eh[2]
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = Rng::new(8);
    let (mut comm, mut disp) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let k = 10f64.powf(rng.uniform(-3.0, 3.0));
        let a = mode_amplitudes(k).unwrap();
        comm = comm.max((a.commutator() - Complex64::new(0.0, -4.0 * PI)).norm() / (4.0 * PI));
        disp = disp.max(a.dispersion(k).norm() / (2.0 * PI * k));
    }
    let zpe = zero_point_energy(&BoxLattice::new(2.0 * PI, 1).unwrap());
    let oracle = 6.0 + 12.0 * SQRT_2 + 8.0 * 3f64.sqrt();
    let ez = (zpe - oracle).abs();
    outcome(
        comm <= 1e-14 && disp <= 1e-14 && ez <= 1e-12,
        format!("commutator residual {comm:.1e}, dispersion residual {disp:.1e} (relative); zero-point sum {zpe:.12} (err {ez:.1e})"),
    )
}

fn criterion_9() -> Outcome {
    let g = VectorGate::gaussian(Vec3::ZERO, 1.0, Vec3::Y).unwrap();
    let lat = BoxLattice::new(12.0, 4).unwrap();
    let exact = discrete_variance(&g, &lat).unwrap();
    let mut zs = Vec::new();
    for seed in 0..10 {
        let m = mc_variance(&g, &lat, seed, 100_000).unwrap();
        zs.push((m.estimate - exact) / m.std_error);
    }
    let outside = zs.iter().filter(|z| z.abs() > 3.0).count();
    let a = mc_variance(&g, &lat, 3, 100_000).unwrap();
    let b = mc_variance(&g, &lat, 3, 100_000).unwrap();
    let same = serde_json::to_vec(&a).unwrap() == serde_json::to_vec(&b).unwrap()
        && a.estimate.to_bits() == b.estimate.to_bits();
    let zmax = zs.iter().fold(0.0f64, |m, z| m.max(z.abs()));
    outcome(
        outside <= 1 && same,
        format!("L=12, N=4: {outside}/10 seeds beyond 3 sigma (max |z| {zmax:.2}); repeat run byte-identical: {same}"),
    )
}

fn rotate(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))
}

fn criterion_10() -> Outcome {
    let mut rng = Rng::new(10);
    let long = VectorGate::from(LongitudinalGate::new(Vec3::new(0.3, 0.0, -0.2), 1.0, 1.0).unwrap());
    let v_long = variance(&long).unwrap().value.abs();

    let terms = [
        (1.0, Vec3::new(0.5, 0.0, 0.0), 1.0, Vec3::Y),
        (-0.7, Vec3::new(-0.4, 0.6, 0.1), 0.8, Vec3::Z),
    ];
    let build = |shift: Vec3, axis: Vec3, angle: f64| {
        VectorGate::superpose(terms.iter().map(|&(w, c, l, d)| {
            let g = GaussianGate::unit(rotate(c, axis, angle) + shift, l, rotate(d, axis, angle)).unwrap();
            (w, VectorGate::from(g))
        }))
        .unwrap()
    };
    let base = variance(&build(Vec3::ZERO, Vec3::Z, 0.0)).unwrap().value;
    let mut invariance = 0.0f64;
    for _ in 0..5 {
        let g = build(rng.vec(5.0), rng.unit(), rng.uniform(0.0, 2.0 * PI));
        invariance = invariance.max(rel(variance(&g).unwrap().value, base));
        let gs = VectorGate::gaussian(rng.vec(5.0), 1.0, rng.unit()).unwrap();
        invariance = invariance.max(rel(variance(&gs).unwrap().value, third_pi()));
        let p = GatePair::new(
            GaussianGate::unit(Vec3::new(0.8, 0.5, -0.3), 1.0, Vec3::Y).unwrap(),
            GaussianGate::unit(Vec3::ZERO, 1.5, Vec3::new(0.6, 0.0, 0.8)).unwrap(),
        );
        let h0 = h_real_space(&p).unwrap().h_value;
        let h1 = h_real_space(&p.shifted(rng.vec(5.0))).unwrap().h_value;
        invariance = invariance.max(rel(h1, h0));
    }

    let same_shape = build(Vec3::ZERO, Vec3::Z, 0.0);
    let r = uncertainty_report(&GatePair {
        electric: same_shape.clone(),
        magnetic: same_shape.clone(),
    })
    .unwrap();
    let shifted = uncertainty_report(&GatePair {
        electric: same_shape,
        magnetic: build(Vec3::new(1.0, 2.0, 3.0), Vec3::Z, 0.0),
    })
    .unwrap();
    let eq = rel(r.delta_h, r.delta_e).max(rel(shifted.delta_h, shifted.delta_e));

    let e1 = GaussianGate::unit(Vec3::new(1.0, 0.0, 0.0), 1.0, Vec3::Y).unwrap();
    let e2 = GaussianGate::unit(Vec3::new(0.0, -0.7, 0.3), 0.8, Vec3::Z).unwrap();
    let gam = VectorGate::from(GaussianGate::unit(Vec3::ZERO, 1.2, Vec3::X).unwrap());
    let (a, b) = (1.7, -0.6);
    let sum = VectorGate::superpose([(a, e1.into()), (b, e2.into())]).unwrap();
    let lat = integration_lattice(&GatePair::new(sum.clone(), gam.clone()))
        .unwrap()
        .unwrap();
    let h = |e: VectorGate| h_real_space_on(&GatePair::new(e, gam.clone()), &lat).unwrap().h_value;
    let lhs = h(sum);
    let bilinear = rel(a * h(e1.into()) + b * h(e2.into()), lhs);

    outcome(
        v_long < 1e-12 && invariance < 1e-10 && eq < 1e-10 && bilinear < 1e-10,
        format!(
            "longitudinal variance {v_long:.1e}, translation/direction invariance {invariance:.1e}, dE vs dH {eq:.1e}, bilinearity {bilinear:.1e}"
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Gaussian vacuum variance", criterion_1),
        ("commutator cross-validation", criterion_2),
        ("optimal separation", criterion_3),
        ("effective width", criterion_4),
        ("Robertson margin", criterion_5),
        ("worked nanogate example", criterion_6),
        ("box-mode convergence", criterion_7),
        ("mode-amplitude algebra", criterion_8),
        ("Monte Carlo consistency", criterion_9),
        ("property suites", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !r.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
