//! Special functions consumed by the cone kernels: Bessel `J_ν` and `I_ν`
//! of arbitrary real order `ν ≥ 0`, the complementary error function of a
//! complex argument, and `Γ` on the positive half-line.
//!
//! Everything here is a pure function of its arguments; no shared mutable
//! state beyond lazily initialized constant tables.

mod bessel;
mod erfc;
mod gamma;

pub use bessel::{bessel_i, bessel_j, bessel_j_seq};
pub use erfc::erfc_cplx;
pub use gamma::{gamma_pos, ln_gamma, sin_pi};

use crate::error::{EvalError, Result};

/// Accuracy/effort knobs for the special-function evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFunConfig {
    /// Relative accuracy target.
    pub rel_tol: f64,
    /// Cap on ascending-series terms.
    pub max_terms: usize,
    /// Baseline panel count for integral representations.
    pub quad_panels: usize,
}

impl SpecFunConfig {
    pub fn new(rel_tol: f64, max_terms: usize, quad_panels: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(EvalError::domain(format!(
                "SpecFunConfig: rel_tol must lie in (0, 1e-3], got {rel_tol}"
            )));
        }
        if max_terms < 16 {
            return Err(EvalError::domain("SpecFunConfig: max_terms must be >= 16"));
        }
        if quad_panels < 8 {
            return Err(EvalError::domain("SpecFunConfig: quad_panels must be >= 8"));
        }
        Ok(SpecFunConfig {
            rel_tol,
            max_terms,
            quad_panels,
        })
    }
}

impl Default for SpecFunConfig {
    fn default() -> Self {
        SpecFunConfig {
            rel_tol: 1e-12,
            max_terms: 500,
            quad_panels: 64,
        }
    }
}
