//! Acceptance suite: the shipped verification contract, one test per
//! criterion.  Each test prints a single `criterion N: PASS/FAIL` line with
//! its headline statistic (visible under `--nocapture`) and enforces both
//! the numerical threshold and the runtime budget.

use cone_kernel::asymptotic::{b0_closed_form, b_hat_cauchy, s_small_x, s_uniform};
use cone_kernel::contour::{s_contour, ContourSpec};
use cone_kernel::harness::{
    dispersive_scan, images_check, log_spaced, order_check, GridSpec, OrderMode, Spacing,
};
use cone_kernel::series::{s_series, SeriesConfig};
use cone_kernel::specfun::{bessel_j, erfc_cplx, SpecFunConfig};
use cone_kernel::{interface_distance, ConeGeometry, Sign};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use std::f64::consts::PI;
use std::time::Instant;

struct Criterion {
    name: &'static str,
    budget_s: f64,
    start: Instant,
}

impl Criterion {
    fn begin(name: &'static str, budget_s: f64) -> Self {
        Criterion {
            name,
            budget_s,
            start: Instant::now(),
        }
    }

    fn finish(self, pass: bool, detail: String) {
        let elapsed = self.start.elapsed().as_secs_f64();
        let in_budget = elapsed <= self.budget_s;
        let status = if pass && in_budget { "PASS" } else { "FAIL" };
        println!(
            "criterion {}: {status} — {detail} [{elapsed:.2}s of {:.0}s budget]",
            self.name, self.budget_s
        );
        assert!(pass, "criterion {} failed: {detail}", self.name);
        assert!(
            in_budget,
            "criterion {} blew its runtime budget: {elapsed:.2}s > {:.0}s",
            self.name, self.budget_s
        );
    }
}

fn eta_grid(count: usize, period: f64) -> Vec<f64> {
    (0..count)
        .map(|i| i as f64 * period / count as f64)
        .collect()
}

/// 1. ρ = 1 closure: the series and the contour both reproduce the
///    Jacobi-Anger closed form e^{ix cos η}.
#[test]
fn criterion_1_jacobi_anger_closure() {
    let c = Criterion::begin("1 (Jacobi-Anger closure, rho = 1)", 10.0);
    let g = ConeGeometry::new(1.0).unwrap();
    let scfg = SeriesConfig::default();
    let cspec = ContourSpec::default();
    let xs = log_spaced(0.1, 25.0, 20);
    let etas = eta_grid(32, g.period());

    let mut max_series: f64 = 0.0;
    let mut max_contour: f64 = 0.0;
    for &x in &xs {
        for &eta in &etas {
            let closed = Complex64::cis(x * eta.cos());
            let s = s_series(x, eta, &g, &scfg).unwrap();
            max_series = max_series.max((s.value - closed).norm());
            if x <= 20.0 {
                let k = s_contour(x, eta, &g, &cspec).unwrap();
                max_contour = max_contour.max((k.value - closed).norm());
            }
        }
    }
    let pass = max_series <= 1e-9 && max_contour <= 1e-8;
    c.finish(
        pass,
        format!("series max diff {max_series:.2e} (<=1e-9), contour max diff {max_contour:.2e} (<=1e-8)"),
    );
}

/// 2. ρ = 1/2 closure: the series reproduces cos(x cos η).
#[test]
fn criterion_2_half_cone_closure() {
    let c = Criterion::begin("2 (half-cone closure, rho = 1/2)", 10.0);
    let g = ConeGeometry::new(0.5).unwrap();
    let scfg = SeriesConfig::default();
    let xs = log_spaced(0.1, 25.0, 20);
    let etas = eta_grid(32, g.period());

    let mut max_diff: f64 = 0.0;
    for &x in &xs {
        for &eta in &etas {
            let closed = Complex64::new((x * eta.cos()).cos(), 0.0);
            let s = s_series(x, eta, &g, &scfg).unwrap();
            max_diff = max_diff.max((s.value - closed).norm());
        }
    }
    let pass = max_diff <= 1e-9;
    c.finish(
        pass,
        format!("max |series − cos(x cos η)| = {max_diff:.2e} (<=1e-9)"),
    );
}

/// 3. Method-of-images exactness on ρ = 1/N for N ∈ {1, 2, 3, 5}.
#[test]
fn criterion_3_images_exactness() {
    let c = Criterion::begin("3 (method-of-images exactness)", 20.0);
    let grid = GridSpec::default(); // x ∈ [0.5, 20] log ×12, 16 η with interface
    let mut worst: f64 = 0.0;
    let mut all_pass = true;
    for n in [1usize, 2, 3, 5] {
        let report = images_check(n, &grid).unwrap();
        let max = report.summary.max_abs_diff.unwrap();
        worst = worst.max(max);
        all_pass &= report.passed() && max <= 1e-8;
    }
    c.finish(
        all_pass,
        format!("max |series kernel − images| = {worst:.2e} (<=1e-8)"),
    );
}

/// 4. Series and contour as mutual oracles across rational and irrational
///    cone radii, interface included.
#[test]
fn criterion_4_series_contour_mutual_oracle() {
    let c = Criterion::begin("4 (series-contour mutual oracle)", 60.0);
    let scfg = SeriesConfig::default();
    let cspec = ContourSpec::default();
    let xs = log_spaced(0.5, 20.0, 10);
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for &rho in &[1.0 / 3.0, 0.7, 1.0, std::f64::consts::SQRT_2, 2.5] {
        let g = ConeGeometry::new(rho).unwrap();
        for &x in &xs {
            for eta in eta_grid(24, g.period()) {
                let a = s_series(x, eta, &g, &scfg).unwrap();
                let b = s_contour(x, eta, &g, &cspec).unwrap();
                let d = (a.value - b.value).norm();
                let allowed = 1e-6 + a.abs_err + b.abs_err;
                worst = worst.max(d);
                pass &= d <= allowed;
            }
        }
    }
    c.finish(
        pass,
        format!("max |series − contour| = {worst:.2e} (<=1e-6 + errors)"),
    );
}

/// 5. Uniform expansion: absolute accuracy at x = 100 and the −5/2 error
///    slope over x ∈ [40, 400] at kmax = 1.
#[test]
fn criterion_5_uniform_expansion_accuracy() {
    let c = Criterion::begin("5 (uniform expansion accuracy)", 60.0);
    let scfg = SeriesConfig::default();
    let mut worst_at_100: f64 = 0.0;
    let mut worst_slope_dev: f64 = 0.0;
    let mut pass = true;
    for &rho in &[0.75, 1.2] {
        let g = ConeGeometry::new(rho).unwrap();
        for &eta in &[0.6, 1.0] {
            let s = s_series(100.0, eta, &g, &scfg).unwrap();
            let u = s_uniform(100.0, eta, &g, 1).unwrap();
            let d = (s.value - u.value).norm();
            worst_at_100 = worst_at_100.max(d);
            pass &= d <= 1e-5;

            let report = order_check(&g, eta, OrderMode::LargeX, 1).unwrap();
            let slope = report.summary.slope.unwrap();
            worst_slope_dev = worst_slope_dev.max((slope - (-2.5)).abs());
            pass &= (slope - (-2.5)).abs() <= 0.3;
        }
    }
    c.finish(
        pass,
        format!(
            "max |uniform − series| at x=100: {worst_at_100:.2e} (<=1e-5); max slope deviation from −5/2: {worst_slope_dev:.3} (<=0.3)"
        ),
    );
}

/// 6. Small-x order σ = min(2, 1/ρ) and pointwise honesty of the explicit
///    majorant.
#[test]
fn criterion_6_small_x_order() {
    let c = Criterion::begin("6 (small-x order)", 10.0);
    let scfg = SeriesConfig::default();
    let mut pass = true;
    let mut detail = String::new();

    for &(rho, eta, target) in &[(1.0 / 3.0, 0.9, 2.0), (2.0, 0.7, 0.5)] {
        let g = ConeGeometry::new(rho).unwrap();
        let report = order_check(&g, eta, OrderMode::SmallX, 0).unwrap();
        let slope = report.summary.slope.unwrap();
        pass &= (slope - target).abs() <= 0.2;
        detail.push_str(&format!(
            "rho={rho:.3}: slope {slope:.3} (target {target}); "
        ));

        // the explicit majorant dominates the true deviation pointwise
        for &x in &log_spaced(1e-3, 0.3, 8) {
            for eta in eta_grid(8, g.period()) {
                let s = s_series(x, eta, &g, &scfg).unwrap();
                let bound = s_small_x(x, eta, &g).unwrap().abs_err;
                let dev = (s.value - Complex64::new(1.0, 0.0)).norm();
                pass &= dev <= bound + 1e-11;
            }
        }
    }
    c.finish(pass, format!("{detail}majorant dominates pointwise"));
}

/// 7. Dispersive boundedness: sup |S| finite and x-stable; equal to 1 on the
///    closed-form cones.
#[test]
fn criterion_7_dispersive_boundedness() {
    let c = Criterion::begin("7 (dispersive boundedness)", 60.0);
    let mut pass = true;
    let mut detail = String::new();
    let grid = |rho: f64| GridSpec {
        rho_list: vec![rho],
        x_min: 0.0,
        x_max: 500.0,
        x_count: 100,
        eta_count: 48,
        include_interface: false,
        spacing: Spacing::Linear,
    };
    for &rho in &[1.0 / 3.0, 0.9, 2.0] {
        let g = ConeGeometry::new(rho).unwrap();
        let report = dispersive_scan(&g, &grid(rho)).unwrap();
        let sup = report.summary.sup_abs.unwrap();
        pass &= report.passed() && sup.is_finite();
        detail.push_str(&format!("rho={rho:.3}: sup {sup:.4}; "));
    }
    for &rho in &[1.0, 0.5] {
        let g = ConeGeometry::new(rho).unwrap();
        let report = dispersive_scan(&g, &grid(rho)).unwrap();
        let sup = report.summary.sup_abs.unwrap();
        pass &= report.passed() && (sup - 1.0).abs() <= 1e-6;
        detail.push_str(&format!("rho={rho}: sup {sup:.9} (=1); "));
    }
    c.finish(pass, detail);
}

/// 8. Leading diffractive coefficient: closed form against Cauchy extraction
///    on random off-interface samples, and the two-image cancellation.
#[test]
fn criterion_8_b0_cross_oracle() {
    let c = Criterion::begin("8 (b0 cross-oracle)", 5.0);
    let mut rng = StdRng::seed_from_u64(0x00C0FFEE);
    let mut worst: f64 = 0.0;
    let mut pass = true;

    let mut drawn = 0;
    while drawn < 20 {
        let rho = rng.random_range(0.3..2.5);
        let g = ConeGeometry::new(rho).unwrap();
        let eta = rng.random_range(0.05..g.period());
        if interface_distance(eta, &g) < 0.1 {
            continue;
        }
        drawn += 1;
        let alpha = if rng.random_range(0..2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let beta = if rng.random_range(0..2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let closed = b0_closed_form(eta, &g, alpha, beta).unwrap();
        let cauchy = b_hat_cauchy(eta, &g, alpha, beta, 0).unwrap();
        let d = (closed - cauchy).norm();
        worst = worst.max(d);
        pass &= d <= 1e-8;
    }

    // ρ = 1/2: Σ_α b̂₀^{(α,β)} = 0 for both β at η = 0.4
    let g = ConeGeometry::new(0.5).unwrap();
    let mut worst_cancel: f64 = 0.0;
    for beta in Sign::BOTH {
        let total = b0_closed_form(0.4, &g, Sign::Plus, beta).unwrap()
            + b0_closed_form(0.4, &g, Sign::Minus, beta).unwrap();
        worst_cancel = worst_cancel.max(total.norm());
        pass &= total.norm() <= 1e-9;
    }
    c.finish(
        pass,
        format!("max closed-vs-Cauchy diff {worst:.2e} (<=1e-8); two-image cancellation {worst_cancel:.2e} (<=1e-9)"),
    );
}

/// 9. Special-function floor: Bessel three-term recurrence and the erfc
///    reflection identity.
#[test]
fn criterion_9_special_function_floor() {
    let c = Criterion::begin("9 (special-function floor)", 5.0);
    let cfg = SpecFunConfig::default();
    let mut rng = StdRng::seed_from_u64(0xB0B0);
    let mut worst_resid: f64 = 0.0;
    let mut pass = true;

    for _ in 0..200 {
        let nu = rng.random_range(0.3..20.0);
        let x = rng.random_range(0.5..30.0);
        // keep all three orders nonnegative
        let nu = if nu < 1.3 { nu + 1.0 } else { nu };
        let jm = bessel_j(nu - 1.0, x, &cfg).unwrap();
        let j0 = bessel_j(nu, x, &cfg).unwrap();
        let jp = bessel_j(nu + 1.0, x, &cfg).unwrap();
        let resid = (jm + jp - 2.0 * nu / x * j0).abs() / j0.abs().max(1.0);
        worst_resid = worst_resid.max(resid);
        pass &= resid <= 1e-9;
    }

    let mut worst_refl: f64 = 0.0;
    for k in 0..50 {
        let s = 0.08 * (k as f64 + 1.0);
        for &arg in &[PI / 4.0, -PI / 4.0] {
            let z = Complex64::from_polar(s, arg);
            let total = erfc_cplx(z, &cfg).unwrap() + erfc_cplx(-z, &cfg).unwrap();
            worst_refl = worst_refl.max((total - 2.0).norm());
            pass &= (total - 2.0).norm() <= 1e-12;
        }
    }
    c.finish(
        pass,
        format!("max recurrence residual {worst_resid:.2e} (<=1e-9); max reflection defect {worst_refl:.2e} (<=1e-12)"),
    );
}
