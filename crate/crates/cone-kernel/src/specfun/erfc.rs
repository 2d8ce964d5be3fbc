//! Complementary error function of a complex argument.
//!
//! `erfc(z) = (2/√π)∫_z^∞ e^{−t²} dt`, entire in `z`.  The naive Maclaurin
//! series cancels catastrophically on the ±45° rays where the cone
//! asymptotics need it, so evaluation goes through the scaled (Faddeeva)
//! function `w(ζ) = e^{−ζ²} erfc(−iζ)` in the closed upper half-plane:
//!
//! * `Re z < 0` — reflect with `erfc(z) = 2 − erfc(−z)`;
//! * `Re z ≥ 0` — `erfc(z) = e^{−z²} w(iz)` with `Im(iz) = Re z ≥ 0`, where
//!   `w` is computed by Weideman's rational approximation (SIAM J. Numer.
//!   Anal. 31 (1994), N = 64 poles) for moderate `|ζ|` and by the asymptotic
//!   series `w(ζ) ~ (i/√π) ζ^{−1} Σ_k (2k−1)!!/(2ζ²)^k` for `|ζ| ≥ 7`.

use super::SpecFunConfig;
use crate::error::{EvalError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const WEIDEMAN_N: usize = 64;
const ASYMPTOTIC_RADIUS: f64 = 7.0;

/// Polynomial coefficients of Weideman's approximation, lowest degree first.
fn weideman_coeffs() -> &'static (f64, Vec<f64>) {
    static COEFFS: OnceLock<(f64, Vec<f64>)> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n = WEIDEMAN_N;
        let m = 2 * n;
        let m2 = 2 * m;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // u[i] = f(t_k) at k ≡ i (mod 2M), f(t) = e^{−t²}(L² + t²),
        // t_k = L tan(kπ/2M), with the k = ±M sample set to zero.
        let mut u = vec![0.0; m2];
        for k in -(m as i64 - 1)..=(m as i64 - 1) {
            let theta = k as f64 * PI / m as f64;
            let t = l * (0.5 * theta).tan();
            let f = (-t * t).exp() * (l * l + t * t);
            let idx = k.rem_euclid(m2 as i64) as usize;
            u[idx] = f;
        }
        // a_q = Re(DFT(u))[q] / 2M for q = 1..N
        let mut coeffs = Vec::with_capacity(n);
        for q in 1..=n {
            let mut acc = 0.0;
            for (i, ui) in u.iter().enumerate() {
                acc += ui * (PI * (q * i) as f64 / m as f64).cos();
            }
            coeffs.push(acc / m2 as f64);
        }
        (l, coeffs)
    })
}

/// Faddeeva `w(ζ)` for `Im ζ ≥ 0`.
fn faddeeva_upper(zeta: Complex64) -> Complex64 {
    debug_assert!(zeta.im >= -1e-300);
    if zeta.norm_sqr() >= ASYMPTOTIC_RADIUS * ASYMPTOTIC_RADIUS {
        // w(ζ) ~ (i/√π) ζ^{−1} Σ_k (2k−1)!!/(2ζ²)^k
        let inv2z2 = 0.5 / (zeta * zeta);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 0..24 {
            term *= inv2z2 * (2.0 * k as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-18 {
                break;
            }
        }
        return Complex64::new(0.0, 1.0 / PI.sqrt()) * sum / zeta;
    }
    let (l, coeffs) = weideman_coeffs();
    let iz = Complex64::new(-zeta.im, zeta.re); // i·ζ
    let denom = l - iz; // Re ≥ L > 0 in the upper half-plane
    let zz = (l + iz) / denom;
    // Horner, highest degree first
    let mut p = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        p = p * zz + c;
    }
    (p * 2.0 / denom + 1.0 / PI.sqrt()) / denom
}

/// `erfc(z)` for arbitrary finite complex `z`.
pub fn erfc_cplx(z: Complex64, _cfg: &SpecFunConfig) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(EvalError::domain("erfc_cplx: non-finite argument"));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z.re < 0.0 {
        Ok(2.0 - erfc_right_half(-z))
    } else {
        Ok(erfc_right_half(z))
    }
}

fn erfc_right_half(z: Complex64) -> Complex64 {
    debug_assert!(z.re >= 0.0);
    let zeta = Complex64::new(-z.im, z.re); // iz, upper half-plane
    (-z * z).exp() * faddeeva_upper(zeta)
}
