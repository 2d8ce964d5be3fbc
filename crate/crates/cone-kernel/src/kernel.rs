//! Cone geometry, reduced variables, pole-phase combinatorics, and assembly
//! of the propagator kernel from the dimensionless factor `S(x, η)`.
//!
//! The kernel of `e^{itΔ}` on the cone of cross-sectional radius `ρ` is
//!
//! ```text
//! K(t, r₁, θ₁, r₂, θ₂) = prefactor · S(x, η),
//! prefactor = −exp[(r₁² + r₂²)/4it]/(4πiρt),   |prefactor| = 1/(4πρt),
//! x = r₁r₂/2t,   η = θ₁ − θ₂.
//! ```
//!
//! The loop-integral amplitude for `S` has simple poles on the unit circle
//! at `e^{iφ}` for φ in the finite set `𝒫_ρ(±η) = {π/2 ± η + 2πρk} ∩ [−π, π)`.
//! Those phases drive everything downstream: residues give the
//! method-of-images exponentials, `σ_φ = sgn cos φ` tells which sheet a pole
//! lives on, and a pole with `cos φ = 0` marks the geometric interface
//! `η ≡ 0, ±π (mod 2πρ)` where the large-`x` expansion breaks down.

use crate::error::{EvalError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Poles this close to `±π/2` (by `|cos φ|`) are treated as on-interface.
pub const INTERFACE_GUARD: f64 = 1e-14;

/// A sign, `+1` or `−1`; indexes the two cotangent summands of the amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// The cone `C(S¹_ρ)`: half-line cross circle of radius `ρ`, cone angle `2πρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeGeometry {
    rho: f64,
}

impl ConeGeometry {
    pub fn new(rho: f64) -> Result<Self> {
        if !rho.is_finite() || rho <= 0.0 {
            return Err(EvalError::domain(format!(
                "cone radius must be finite and positive, got {rho}"
            )));
        }
        Ok(ConeGeometry { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Angular period `2πρ`.
    pub fn period(&self) -> f64 {
        2.0 * PI * self.rho
    }
}

/// A space-time evaluation point `(t, r₁, θ₁, r₂, θ₂)` with `t, r₁, r₂ > 0`.
///
/// Angles are radians, interpreted mod `2πρ`; they are stored unreduced and
/// only reduced inside the pole-phase enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub t: f64,
    pub r1: f64,
    pub theta1: f64,
    pub r2: f64,
    pub theta2: f64,
}

impl KernelQuery {
    pub fn new(t: f64, r1: f64, theta1: f64, r2: f64, theta2: f64) -> Result<Self> {
        for (name, v) in [
            ("t", t),
            ("r1", r1),
            ("theta1", theta1),
            ("r2", r2),
            ("theta2", theta2),
        ] {
            if !v.is_finite() {
                return Err(EvalError::domain(format!("KernelQuery: {name} not finite")));
            }
        }
        if t <= 0.0 {
            return Err(EvalError::domain(format!(
                "KernelQuery: t must be positive, got {t} (for t < 0 use K(−t) = conj K(t))"
            )));
        }
        if r1 <= 0.0 || r2 <= 0.0 {
            return Err(EvalError::domain("KernelQuery: radii must be positive"));
        }
        Ok(KernelQuery {
            t,
            r1,
            theta1,
            r2,
            theta2,
        })
    }
}

/// The dummy variables `x = r₁r₂/2t` and `η = θ₁ − θ₂` that drive `S(x, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedArgs {
    pub x: f64,
    pub eta: f64,
}

/// One pole phase `φ = π/2 + αη + 2πρk ∈ [−π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolePhase {
    /// The phase itself, in `[−π, π)`.
    pub phi: f64,
    /// Lattice index: `φ = π/2 + αη + 2πρk`.
    pub k: i64,
    /// Which amplitude summand the pole belongs to.
    pub alpha: Sign,
    /// Sheet sign `σ_φ = sgn cos φ`; `+1` when on-interface (guarded).
    pub sigma: Sign,
    /// True when `|cos φ| < INTERFACE_GUARD`: the pole sits at `±π/2` and
    /// poisons asymptotic evaluation.
    pub on_interface: bool,
}

/// The finite set `𝒫_ρ(αη)`, ordered by increasing `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolePhaseSet {
    pub alpha: Sign,
    pub eta: f64,
    phases: Vec<PolePhase>,
}

impl PolePhaseSet {
    pub fn phases(&self) -> &[PolePhase] {
        &self.phases
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PolePhase> {
        self.phases.iter()
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn any_on_interface(&self) -> bool {
        self.phases.iter().any(|p| p.on_interface)
    }
}

/// Which evaluator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    Contour,
    SmallX,
    Uniform,
    Images,
    Preliminary,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Contour => "contour",
            Method::SmallX => "small_x",
            Method::Uniform => "uniform",
            Method::Images => "images",
            Method::Preliminary => "preliminary",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A complex value with an a-posteriori absolute error estimate and the
/// method that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub abs_err: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: Complex64, abs_err: f64, method: Method) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() || !abs_err.is_finite() || abs_err < 0.0 {
            return Err(EvalError::domain(
                "EvalResult: value and abs_err must be finite",
            ));
        }
        Ok(EvalResult {
            value,
            abs_err,
            method,
        })
    }
}

/// Reduced variables of a query: `x = r₁r₂/2t`, `η = θ₁ − θ₂` (unreduced).
pub fn reduce(q: &KernelQuery, _g: &ConeGeometry) -> ReducedArgs {
    ReducedArgs {
        x: q.r1 * q.r2 / (2.0 * q.t),
        eta: q.theta1 - q.theta2,
    }
}

/// The prefactor `−exp[(r₁² + r₂²)/4it]/(4πiρt)`.
///
/// With `1/i = −i` this is `(i/4πρt)·exp[−i(r₁² + r₂²)/4t]`; its modulus is
/// exactly `1/(4πρt)`.
pub fn prefactor(q: &KernelQuery, g: &ConeGeometry) -> Result<Complex64> {
    if q.t <= 0.0 {
        return Err(EvalError::domain("prefactor: t must be positive"));
    }
    let phase = -(q.r1 * q.r1 + q.r2 * q.r2) / (4.0 * q.t);
    let scale = 1.0 / (4.0 * PI * g.rho() * q.t);
    Ok(Complex64::new(0.0, scale) * Complex64::cis(phase))
}

/// Enumerates `𝒫_ρ(αη) = {π/2 + αη + 2πρk} ∩ [−π, π)`.
///
/// The set has between 0 and `⌈1/ρ⌉ + 1` elements; `η` is reduced here and
/// nowhere else.
pub fn pole_phases(g: &ConeGeometry, eta: f64, alpha: Sign) -> PolePhaseSet {
    let period = g.period();
    let base = PI / 2.0 + alpha.value() * eta;
    // φ = base + period·k ∈ [−π, π)
    let k_lo = ((-PI - base) / period).floor() as i64 - 1;
    let k_hi = ((PI - base) / period).ceil() as i64 + 1;
    let mut phases = Vec::new();
    for k in k_lo..=k_hi {
        let phi = base + period * k as f64;
        if (-PI..PI).contains(&phi) {
            let c = phi.cos();
            let on_interface = c.abs() < INTERFACE_GUARD;
            let sigma = if on_interface || c >= 0.0 {
                Sign::Plus
            } else {
                Sign::Minus
            };
            phases.push(PolePhase {
                phi,
                k,
                alpha,
                sigma,
                on_interface,
            });
        }
    }
    phases.sort_by(|a, b| a.phi.partial_cmp(&b.phi).unwrap());
    PolePhaseSet { alpha, eta, phases }
}

/// Distance from `η` to the interface set `{−π, 0, π} + 2πρℤ`.
///
/// Zero exactly on the interface; the harness uses this to decide which
/// methods are admissible at a point.
pub fn interface_distance(eta: f64, g: &ConeGeometry) -> f64 {
    let period = g.period();
    [-PI, 0.0, PI]
        .iter()
        .map(|b| {
            let d = eta - b;
            (d - period * (d / period).round()).abs()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Multiplies an `S(x, η)` value by the kernel prefactor.
pub fn assemble_kernel(s: &EvalResult, q: &KernelQuery, g: &ConeGeometry) -> Result<EvalResult> {
    let pf = prefactor(q, g)?;
    Ok(EvalResult {
        value: pf * s.value,
        abs_err: pf.norm() * s.abs_err,
        method: s.method,
    })
}
