//! Behavior of the large-x expansions approaching the geometric interface:
//! the erfc-based uniform expansion must stay accurate where the plain
//! saddle-point (preliminary) expansion degrades like its cotangent
//! coefficients, and on integer cones the whole apparatus must collapse to
//! the method of images.

use cone_kernel::asymptotic::{images_closed_form, residue_terms, s_preliminary, s_uniform};
use cone_kernel::harness::{order_check, OrderMode};
use cone_kernel::series::{s_series, SeriesConfig};
use cone_kernel::{assemble_kernel, pole_phases, reduce, ConeGeometry, KernelQuery, Sign};
use num_complex::Complex64;
use std::f64::consts::PI;

#[test]
fn uniform_error_is_flat_while_preliminary_blows_up() {
    let rho = 0.9;
    let g = ConeGeometry::new(rho).unwrap();
    let scfg = SeriesConfig::default();
    let x = 60.0;
    let top = PI * rho;

    let uniform_err = |eta: f64| {
        let s = s_series(x, eta, &g, &scfg).unwrap();
        let u = s_uniform(x, eta, &g, 1).unwrap();
        (s.value - u.value).norm()
    };
    let preliminary_err = |eta: f64| {
        let s = s_series(x, eta, &g, &scfg).unwrap();
        let p = s_preliminary(x, eta, &g).unwrap();
        (s.value - p.value).norm()
    };

    // sweep from 0.05 up to πρ − 0.05: no blow-up allowed for the uniform route
    let reference = uniform_err(1.0);
    let mut max_err: f64 = 0.0;
    for &eta in &[
        0.05,
        0.1,
        0.15,
        0.21,
        0.3,
        0.5,
        0.7,
        1.0,
        1.5,
        2.0,
        top - 0.3,
        top - 0.15,
        top - 0.05,
    ] {
        max_err = max_err.max(uniform_err(eta));
    }
    assert!(
        max_err <= 5.0 * reference,
        "uniform expansion degraded near the interface: max {max_err:e} vs 5×{reference:e}"
    );

    // the non-uniform expansion, evaluated at the edge of its admissible
    // region (the nearest interface representative for ρ = 0.9 is
    // 2πρ − π ≈ 2.513), must show the cotangent blow-up the uniform route
    // removes
    let edge = preliminary_err(top - 0.1);
    let mid = preliminary_err(1.0);
    assert!(
        edge >= 10.0 * mid,
        "expected preliminary degradation: edge {edge:e} vs 10×mid {mid:e}"
    );
    // and it refuses points inside the 0.2 guard
    assert!(s_preliminary(x, 0.05, &g).is_err());
}

#[test]
fn uniform_leading_order_has_frozen_constant() {
    // |s_uniform(kmax=0) − series| ≤ C x^{−3/2} with C frozen from the
    // series oracle (measured 0.024..0.065 over the probe points)
    let g = ConeGeometry::new(0.75).unwrap();
    let scfg = SeriesConfig::default();
    const C: f64 = 0.12;
    for &x in &[100.0, 200.0, 400.0] {
        let s = s_series(x, 1.0, &g, &scfg).unwrap();
        let u = s_uniform(x, 1.0, &g, 0).unwrap();
        let d = (s.value - u.value).norm();
        assert!(
            d <= C * x.powf(-1.5),
            "x={x}: {d:e} > {:e}",
            C * x.powf(-1.5)
        );
    }
}

#[test]
fn uniform_leading_order_tends_to_residues() {
    // with kmax = 0 and x → ∞ every correction decays; only the geometric
    // front survives
    let g = ConeGeometry::new(0.8).unwrap();
    let eta = 0.9;
    let x = 1e8;
    let u = s_uniform(x, eta, &g, 0).unwrap();
    let mut res = Complex64::new(0.0, 0.0);
    for alpha in Sign::BOTH {
        res += residue_terms(x, &pole_phases(&g, eta, alpha), &g);
    }
    assert!(
        (u.value - res).norm() < 1e-4,
        "diff {:e}",
        (u.value - res).norm()
    );
}

#[test]
fn expansion_degenerates_to_images_on_integer_cones() {
    // ρ = 1/N: the kernel assembled from the uniform expansion lands on the
    // N-image closed form once x is comfortably asymptotic
    let eta = 0.77;
    for n in 1..=3usize {
        let g = ConeGeometry::new(1.0 / n as f64).unwrap();
        for &x in &[60.0f64, 150.0] {
            let r = (2.0 * x).sqrt();
            let q = KernelQuery::new(1.0, r, eta, r, 0.0).unwrap();
            let red = reduce(&q, &g);
            assert!(red.x >= 50.0);
            let u = s_uniform(red.x, red.eta, &g, 2).unwrap();
            let k = assemble_kernel(&u, &q, &g).unwrap();
            let im = images_closed_form(&q, n).unwrap();
            assert!(
                (k.value - im).norm() <= 1e-6,
                "N={n} x={x}: {:e}",
                (k.value - im).norm()
            );
        }
    }
}

#[test]
fn remainder_slopes_match_for_low_orders() {
    // log-log slope of the truncation error within ±0.3 of −(2k+3)/2
    for &(rho, eta) in &[(0.7, 1.0), (1.2, 0.6)] {
        let g = ConeGeometry::new(rho).unwrap();
        for kmax in [0usize, 1] {
            let report = order_check(&g, eta, OrderMode::LargeX, kmax).unwrap();
            let slope = report.summary.slope.unwrap();
            let target = -(2.0 * kmax as f64 + 3.0) / 2.0;
            assert!(
                (slope - target).abs() <= 0.3,
                "rho={rho} kmax={kmax}: slope {slope} target {target}"
            );
        }
    }
}
