//! Structural checks of the heat kernel that no closed form feeds: the
//! Chapman-Kolmogorov (semigroup) identity and conservation of mass, both
//! verified by 2D quadrature over the cone at an irrational radius.  These
//! hold for the Friedrichs heat semigroup and are sensitive to the modal
//! normalization `1/2πρ`, the Weber radial factor, and the `|j|/ρ` order
//! lattice all at once.

use cone_kernel::quad::GaussLegendre;
use cone_kernel::series::{heat_kernel, SeriesConfig};
use cone_kernel::{ConeGeometry, KernelQuery};

fn heat(s: f64, r1: f64, th1: f64, r2: f64, th2: f64, g: &ConeGeometry) -> f64 {
    let q = KernelQuery::new(1.0, r1, th1, r2, th2).unwrap();
    heat_kernel(s, &q, g, &SeriesConfig::default())
        .unwrap()
        .value
        .re
}

#[test]
fn heat_kernel_semigroup_identity() {
    // ∫_cone K_s(A, Y) K_t(Y, B) r' dr' dθ' = K_{s+t}(A, B)
    let g = ConeGeometry::new(0.77).unwrap();
    let (s, t) = (0.4, 0.6);
    let (ra, tha) = (1.1, 0.3);
    let (rb, thb) = (0.8, 1.7);

    let rule = GaussLegendre::new(16);
    let r_max = 8.0;
    let r_panels = 12;
    let th_panels = 12;
    let period = g.period();

    let mut composed = 0.0;
    for rp in 0..r_panels {
        let (rlo, rhi) = (
            r_max * rp as f64 / r_panels as f64,
            r_max * (rp + 1) as f64 / r_panels as f64,
        );
        for tp in 0..th_panels {
            let (tlo, thi) = (
                period * tp as f64 / th_panels as f64,
                period * (tp + 1) as f64 / th_panels as f64,
            );
            composed += rule.integrate_real(rlo, rhi, |r| {
                r * rule.integrate_real(tlo, thi, |th| {
                    heat(s, ra, tha, r, th, &g) * heat(t, r, th, rb, thb, &g)
                })
            });
        }
    }

    let direct = heat(s + t, ra, tha, rb, thb, &g);
    assert!(
        (composed - direct).abs() < 1e-9 * (1.0 + direct.abs()),
        "semigroup defect: composed {composed:.12e} vs direct {direct:.12e}"
    );
}

#[test]
fn heat_kernel_conserves_mass() {
    // ∫_cone K_s(A, Y) r' dr' dθ' = 1: the tip is polar for the Friedrichs
    // semigroup, no mass escapes
    let rule = GaussLegendre::new(20);
    for &rho in &[0.6, 1.0, 2.3] {
        let g = ConeGeometry::new(rho).unwrap();
        let period = g.period();
        for &(s, ra) in &[(0.5f64, 0.9f64), (1.3, 2.0)] {
            let r_max = ra + 14.0 * s.sqrt();
            let r_panels = 20;
            let th_panels = 10;
            let mut mass = 0.0;
            for rp in 0..r_panels {
                let (rlo, rhi) = (
                    r_max * rp as f64 / r_panels as f64,
                    r_max * (rp + 1) as f64 / r_panels as f64,
                );
                for tp in 0..th_panels {
                    let (tlo, thi) = (
                        period * tp as f64 / th_panels as f64,
                        period * (tp + 1) as f64 / th_panels as f64,
                    );
                    mass += rule.integrate_real(rlo, rhi, |r| {
                        r * rule.integrate_real(tlo, thi, |th| heat(s, ra, 0.4, r, th, &g))
                    });
                }
            }
            assert!(
                (mass - 1.0).abs() < 1e-9,
                "rho={rho} s={s} r={ra}: mass {mass:.12}"
            );
        }
    }
}
