//! The Bessel–Fourier series for `S(x, η)` and the heat kernel: the slow,
//! reliable reference evaluators.
//!
//! ```text
//! S(x, η)  = J₀(x) + 2 Σ_{j≥1} i^{j/ρ} J_{j/ρ}(x) cos(jη/ρ),   i^{ν} = e^{iπν/2}
//! K_heat   = (1/2πρ) Σ_{j∈ℤ} K̃(r₁, r₂, |j|/ρ) e^{ijη/ρ},
//! K̃(r₁, r₂, ν) = exp[−(r₁²+r₂²)/4s]/(2s) · I_ν(r₁r₂/2s)
//! ```
//!
//! Truncation uses the envelope `|J_ν(x)| ≤ (x/2)^ν/Γ(ν+1)` together with
//! the Stirling bound `Γ(ν+1) ≥ √(2πν)(ν/e)^ν`; once `ν > max(x, e·x/2)` the
//! envelope is dominated by `c^ν` with `c = ex/2ν < 1` and the tail sums
//! geometrically.  The cost of a full evaluation is roughly `1.4·x/ρ` Bessel
//! terms, so large-`x` calls are expensive but remain correct; the harness
//! treats anything above `x = 50` as the oracle of last resort.

use crate::error::{EvalError, Result};
use crate::kernel::{ConeGeometry, EvalResult, KernelQuery, Method};
use crate::specfun::{bessel_i, bessel_j_seq, SpecFunConfig};
use num_complex::Complex64;
use std::f64::consts::{E, PI};

/// Truncation controls for the modal sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesConfig {
    /// Absolute tail tolerance.
    pub tol: f64,
    /// Cap on the mode index `j`.
    pub max_modes: usize,
}

impl SeriesConfig {
    pub fn new(tol: f64, max_modes: usize) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(EvalError::domain("SeriesConfig: tol must be positive"));
        }
        if max_modes < 8 {
            return Err(EvalError::domain("SeriesConfig: max_modes must be >= 8"));
        }
        Ok(SeriesConfig { tol, max_modes })
    }
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            tol: 1e-12,
            max_modes: 4000,
        }
    }
}

/// Smallest mode index `j` so that the tail beyond it is below `tol/2`,
/// together with the tail bound itself.  `None` if `max_modes` is not enough.
fn truncation_index(x: f64, rho: f64, tol: f64, max_modes: usize) -> Option<(usize, f64)> {
    if x == 0.0 {
        return Some((0, 0.0));
    }
    for j in 0..max_modes {
        let nu_next = (j + 1) as f64 / rho;
        // Geometric domination needs ν beyond both x and e·x/2 (with margin),
        // and ν large enough for the Stirling envelope.
        if nu_next <= 0.2 || nu_next <= x {
            continue;
        }
        let c = E * x / (2.0 * nu_next);
        if c > 0.98 {
            continue;
        }
        let tail = 2.0 * c.powf(nu_next) / (1.0 - c.powf(1.0 / rho));
        if tail <= 0.5 * tol {
            return Some((j, tail));
        }
    }
    None
}

/// Evaluates `S(x, η)` by the truncated modal sum.
pub fn s_series(x: f64, eta: f64, g: &ConeGeometry, cfg: &SeriesConfig) -> Result<EvalResult> {
    if !x.is_finite() || x < 0.0 {
        return Err(EvalError::domain(format!(
            "s_series: x must be finite and >= 0, got {x}"
        )));
    }
    if !eta.is_finite() {
        return Err(EvalError::domain("s_series: eta must be finite"));
    }
    if x == 0.0 {
        return Ok(EvalResult {
            value: Complex64::new(1.0, 0.0),
            abs_err: 0.0,
            method: Method::Series,
        });
    }
    let rho = g.rho();
    let sfc = SpecFunConfig::default();

    let (jmax, tail) = match truncation_index(x, rho, cfg.tol, cfg.max_modes) {
        Some(v) => v,
        None => {
            // best partial sum up to the cap, tail bound at the cap as error
            let (sum, mag) = modal_sum(x, eta, rho, cfg.max_modes, &sfc)?;
            let nu_end = (cfg.max_modes + 1) as f64 / rho;
            let c = (E * x / (2.0 * nu_end)).min(1.0);
            let crude_tail = if c < 1.0 {
                2.0 * c.powf(nu_end) / (1.0 - c)
            } else {
                2.0
            };
            return Err(EvalError::Accuracy {
                message: format!(
                    "s_series(x={x}, rho={rho}): needs more than {} modes for tol {:e}",
                    cfg.max_modes, cfg.tol
                ),
                best: sum,
                abs_err: crude_tail + 4e-16 * mag,
            });
        }
    };

    let (sum, mag) = modal_sum(x, eta, rho, jmax, &sfc)?;
    let abs_err = tail + 4e-16 * mag + 2e-15 * (jmax as f64 + 1.0);
    Ok(EvalResult {
        value: sum,
        abs_err,
        method: Method::Series,
    })
}

/// Partial sum through mode `jmax`; also returns the magnitude sum for the
/// rounding part of the error estimate.
fn modal_sum(
    x: f64,
    eta: f64,
    rho: f64,
    jmax: usize,
    sfc: &SpecFunConfig,
) -> Result<(Complex64, f64)> {
    let js = bessel_j_seq(x, 1.0 / rho, jmax + 1, sfc)?;
    let mut sum = Complex64::new(js[0], 0.0);
    let mut mag = js[0].abs();
    for (j, &jv) in js.iter().enumerate().skip(1) {
        let nu = j as f64 / rho;
        let term = Complex64::cis(0.5 * PI * nu) * (2.0 * (nu * eta).cos() * jv);
        sum += term;
        mag += term.norm();
    }
    Ok((sum, mag))
}

/// Heat kernel `K_{e^{−sΔ}}(r₁, θ₁, r₂, θ₂)` via Weber's second exponential
/// integral for the radial coefficient.  Result is real and positive; it is
/// returned in the real part of an [`EvalResult`].
pub fn heat_kernel(
    s: f64,
    q: &KernelQuery,
    g: &ConeGeometry,
    cfg: &SeriesConfig,
) -> Result<EvalResult> {
    if !s.is_finite() || s <= 0.0 {
        return Err(EvalError::domain(format!(
            "heat_kernel: s must be positive, got {s}"
        )));
    }
    let rho = g.rho();
    let y = q.r1 * q.r2 / (2.0 * s);
    let radial = (-(q.r1 * q.r1 + q.r2 * q.r2) / (4.0 * s)).exp() / (2.0 * s);
    let pref = 1.0 / (2.0 * PI * rho);
    let eta = q.theta1 - q.theta2;
    let sfc = SpecFunConfig::default();

    // Tail bound: I_ν(y) ≤ env(ν)·e^{y²/(4(ν+1))} with env via Stirling.
    let mut jmax = None;
    for j in 0..cfg.max_modes {
        let nu_next = (j + 1) as f64 / rho;
        if nu_next <= 0.2 || nu_next <= y {
            continue;
        }
        let c = E * y / (2.0 * nu_next);
        if c > 0.6 {
            continue;
        }
        let boost = (y * y / (4.0 * (nu_next + 1.0))).exp();
        let tail = 2.0 * boost * c.powf(nu_next) / (1.0 - c.powf(1.0 / rho));
        if tail <= 0.5 * cfg.tol {
            jmax = Some((j, tail));
            break;
        }
    }
    let (jmax, tail) = jmax.ok_or_else(|| EvalError::Accuracy {
        message: format!("heat_kernel: more than {} modes needed", cfg.max_modes),
        best: Complex64::new(0.0, 0.0),
        abs_err: f64::INFINITY,
    })?;

    let mut bracket = bessel_i(0.0, y, &sfc)?;
    for j in 1..=jmax {
        let nu = j as f64 / rho;
        bracket += 2.0 * (nu * eta).cos() * bessel_i(nu, y, &sfc)?;
    }
    let value = pref * radial * bracket;
    let abs_err = pref * radial * (tail + 4e-16 * bracket.abs() * (jmax as f64 + 1.0));
    Ok(EvalResult {
        value: Complex64::new(value, 0.0),
        abs_err,
        method: Method::Series,
    })
}
