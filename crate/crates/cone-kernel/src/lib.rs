//! Numerical evaluation of the Schrödinger propagator on flat euclidean cones.
//!
//! A flat euclidean cone of cross-sectional radius `ρ > 0` is the surface
//! `(0,∞) × (ℝ/2πρℤ)` with the metric `dr² + r²dθ²`; its total opening angle
//! is `2πρ`.  The propagator `e^{itΔ}` (Friedrichs Laplacian) has a Schwartz
//! kernel that factors into an explicit prefactor times a dimensionless part
//! `S(x, η)` depending only on `x = r₁r₂/2t` and `η = θ₁ − θ₂`:
//!
//! ```text
//! K(t, r₁, θ₁, r₂, θ₂) = −exp[(r₁² + r₂²)/4it]/(4πiρt) · S(x, η)
//! S(x, η) = J₀(x) + 2 Σ_{j≥1} i^{j/ρ} J_{j/ρ}(x) cos(jη/ρ)
//! ```
//!
//! This crate evaluates `S` (and hence `K`) by three independent routes and
//! cross-validates them:
//!
//! * [`series`] — the Bessel–Fourier sum above, truncated with a proven tail
//!   bound.  Slow but valid everywhere; the reference evaluator.  Also the
//!   heat kernel `e^{−sΔ}` via Weber's second exponential integral.
//! * [`contour`] — direct quadrature of the Schläfli-derived loop integral
//!   representation of `S`.  The only fast route that stays valid on the
//!   geometric interface `η ≡ 0, ±π (mod 2πρ)`.
//! * [`asymptotic`] — the small-`x` leading term with an explicit error
//!   majorant, and the large-`x` uniform expansion (van der Waerden style
//!   pole-subtracted steepest descent): method-of-images exponentials,
//!   complementary-error-function transition terms, and diffractive
//!   coefficients extracted as Taylor coefficients of the regularized
//!   amplitude.
//!
//! [`specfun`] supplies the special functions these formulas consume
//! (Bessel `J_ν`/`I_ν` of arbitrary real order, complex `erfc`, `Γ`), and
//! [`harness`] packages grid sweeps: method comparison, method-of-images
//! checks, a dispersive-bound scan (`sup |S| < ∞`, the `|K| ≲ 1/t` bound),
//! and empirical convergence-order fits.

pub mod asymptotic;
pub mod contour;
mod error;
pub mod harness;
pub mod kernel;
pub mod quad;
pub mod series;
pub mod specfun;

pub use error::{EvalError, Result};
pub use kernel::{
    assemble_kernel, interface_distance, pole_phases, prefactor, reduce, ConeGeometry, EvalResult,
    KernelQuery, Method, PolePhase, PolePhaseSet, ReducedArgs, Sign,
};
