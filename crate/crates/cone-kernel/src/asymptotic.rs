//! Asymptotics of `S(x, η)`: the small-`x` leading term with an explicit
//! majorant, the geometric front (images/residues), the uniform transition
//! terms built from complementary error functions, and the diffractive
//! coefficients extracted as Taylor coefficients of a regularized amplitude.
//!
//! Splitting the amplitude of the loop integral into its two cotangent
//! summands gives `S = S₊ + S₋`.  After steepest-descent surgery, each `S_α`
//! carries, per branch point `β = ±1`, a Gaussian integral
//! `∫ e^{−xs²} A_{α,β}(s) ds` whose amplitude
//!
//! ```text
//! A_{α,β}(s) = (β e^{xβi}/2π) cot[(π/2 + αη + i log w(s))/2ρ] (s² − 2βi)^{−1/2},
//! w(s) = βi − s² + s(s² − 2βi)^{1/2}
//! ```
//!
//! has simple poles at `s_φ = σ_φ (βi − i sin φ)^{1/2}`, `φ ∈ 𝒫_ρ(αη)`,
//! residues `−βρe^{xβi}/2πi`, and is otherwise analytic inside `|s| < √2`.
//! Subtracting the pole parts leaves `B_{α,β}`; its even Taylor coefficients
//! produce the diffractive series, while the subtracted poles integrate in
//! closed form to `erfc` transition terms that stay bounded as a pole
//! approaches a saddle.  Uniformly away from `η ≡ 0, ±π (mod 2πρ)`,
//!
//! ```text
//! S_α(x,η) ~ ρ Σ_φ e^{ix sin φ} {(1+σ_φ)/2
//!            − (σ_φ/2) erfc[e^{−iπ/4}√(x(1−sinφ))]
//!            − (σ_φ/2) erfc[e^{+iπ/4}√(x(1+sinφ))]}
//!          + Σ_k Γ(k+1/2) {b_{2k}^{(α,+)} + b_{2k}^{(α,−)}} x^{−k−1/2}.
//! ```
//!
//! Coefficients are handled in the x-independent normalization
//! `b̂_{2k} = b_{2k}^{(α,β)}·(2π/β)·e^{−xβi}`; the leading one has the
//! closed form implemented in [`b0_closed_form`], the rest come from Cauchy's
//! formula on a circle around `s = 0` via the trapezoid rule, which is
//! spectrally accurate for the periodic analytic integrand.

use crate::contour::ccot;
use crate::error::{EvalError, Result};
use crate::kernel::{
    interface_distance, pole_phases, prefactor, reduce, ConeGeometry, EvalResult, KernelQuery,
    Method, PolePhaseSet, Sign,
};
use crate::specfun::{erfc_cplx, gamma_pos, SpecFunConfig};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Taylor coefficients beyond `b_{2·4}` are numerically untrustworthy.
pub const KMAX_LIMIT: usize = 4;

/// Even-index Taylor coefficients of the regularized amplitude, in the
/// x-independent normalization `b̂_{2k} = b_{2k}^{(α,β)}·(2π/β)·e^{−xβi}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BCoeffs {
    pub alpha: Sign,
    pub beta: Sign,
    /// `coeffs[k]` holds `b̂_{2k}`, `k = 0..=kmax`.
    pub coeffs: Vec<Complex64>,
    pub kmax: usize,
}

/// The named pieces of the kernel expansion for one `α`, already multiplied
/// by the kernel prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionBreakdown {
    pub alpha: Sign,
    /// Image terms: `(k, prefactor·ρ e^{ix sin φ})` over poles with
    /// `φ ∈ (−π/2, π/2)` (index set `−π < αη + 2πρk < 0`).
    pub geometric: Vec<(i64, Complex64)>,
    /// erfc transition terms, one per pole phase in `[−π, π)`.
    pub erfc_front: Vec<(i64, Complex64)>,
    /// Diffractive terms `(k, prefactor·Γ(k+1/2)(b_{2k}^{(α,+)}+b_{2k}^{(α,−)})x^{−k−1/2})`.
    pub diffractive: Vec<(usize, Complex64)>,
    pub valid: bool,
}

/// Both `α` halves of [`ExpansionBreakdown`].
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBreakdown {
    pub plus: ExpansionBreakdown,
    pub minus: ExpansionBreakdown,
}

impl KernelBreakdown {
    /// Sums every term, in the same order the uniform evaluator uses.
    pub fn recombine(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for part in [&self.plus, &self.minus] {
            for (_, v) in &part.geometric {
                acc += v;
            }
            for (_, v) in &part.erfc_front {
                acc += v;
            }
            for (_, v) in &part.diffractive {
                acc += v;
            }
        }
        acc
    }
}

/// Explicit majorant for `|S(x, η) − 1|`, valid for `x < 2`:
/// `x²/(4 − x²) + (2/Γ(1/ρ+1))·x^{1/ρ}/(2^{1/ρ} − x^{1/ρ})`.
pub fn small_x_majorant(x: f64, rho: f64) -> Result<f64> {
    let inv = 1.0 / rho;
    let gamma = gamma_pos(inv + 1.0)?;
    Ok(x * x / (4.0 - x * x) + (2.0 / gamma) * x.powf(inv) / (2f64.powf(inv) - x.powf(inv)))
}

/// Leading small-`x` behavior: `S = 1 + O(x^σ)`, `σ = min(2, 1/ρ)`, with the
/// proof's explicit majorant as the reported error.
pub fn s_small_x(x: f64, _eta: f64, g: &ConeGeometry) -> Result<EvalResult> {
    if !x.is_finite() || x < 0.0 {
        return Err(EvalError::domain(format!(
            "s_small_x: x must be >= 0, got {x}"
        )));
    }
    if x >= 2.0 {
        return Err(EvalError::domain(format!(
            "s_small_x: requires x < 2, got {x}"
        )));
    }
    let abs_err = if x == 0.0 {
        0.0
    } else {
        small_x_majorant(x, g.rho())?
    };
    Ok(EvalResult {
        value: Complex64::new(1.0, 0.0),
        abs_err,
        method: Method::SmallX,
    })
}

/// Residues of the pole-enclosing contours: `Σ ρ e^{ix sin φ}` over the
/// poles of `pps` strictly inside `(−π/2, π/2)`.
pub fn residue_terms(x: f64, pps: &PolePhaseSet, g: &ConeGeometry) -> Complex64 {
    let rho = g.rho();
    let mut acc = Complex64::new(0.0, 0.0);
    for p in pps.iter() {
        if p.sigma == Sign::Plus && !p.on_interface {
            acc += Complex64::cis(x * p.phi.sin()) * rho;
        }
    }
    acc
}

/// The full pole-originated part of `S_α`: geometric residues plus the erfc
/// transition terms, uniformly bounded up to (but not on) the interface.
pub fn erfc_front(x: f64, eta: f64, g: &ConeGeometry, alpha: Sign) -> Result<Complex64> {
    let pps = pole_phases(g, eta, alpha);
    let (geo, trans) = pole_front_terms(x, &pps, g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (_, v) in geo {
        acc += v;
    }
    for (_, v) in trans {
        acc += v;
    }
    Ok(acc)
}

/// Per-pole geometric and transition terms; errors on the interface.
#[allow(clippy::type_complexity)]
fn pole_front_terms(
    x: f64,
    pps: &PolePhaseSet,
    g: &ConeGeometry,
) -> Result<(Vec<(i64, Complex64)>, Vec<(i64, Complex64)>)> {
    if pps.any_on_interface() {
        return Err(EvalError::OnInterface(format!(
            "pole phase at ±π/2 for eta = {}; erfc front is invalid on the interface",
            pps.eta
        )));
    }
    let rho = g.rho();
    let sfc = SpecFunConfig::default();
    let mut geo = Vec::new();
    let mut trans = Vec::new();
    for p in pps.iter() {
        let s = p.phi.sin();
        let osc = Complex64::cis(x * s) * rho;
        if p.sigma == Sign::Plus {
            geo.push((p.k, osc));
        }
        let z1 = Complex64::from_polar((x * (1.0 - s).max(0.0)).sqrt(), -FRAC_PI_4);
        let z2 = Complex64::from_polar((x * (1.0 + s).max(0.0)).sqrt(), FRAC_PI_4);
        let e1 = erfc_cplx(z1, &sfc)?;
        let e2 = erfc_cplx(z2, &sfc)?;
        trans.push((p.k, osc * (e1 + e2) * (-0.5 * p.sigma.value())));
    }
    Ok((geo, trans))
}

/// `s_φ = σ_φ (βi − i sin φ)^{1/2} = σ_φ e^{βiπ/4} (1 − β sin φ)^{1/2}`,
/// principal branch.
fn pole_location(phi: f64, sigma: Sign, beta: Sign) -> Complex64 {
    let radius = (1.0 - beta.value() * phi.sin()).max(0.0).sqrt();
    Complex64::from_polar(radius, beta.value() * FRAC_PI_4) * sigma.value()
}

/// Closed form of the leading normalized coefficient:
/// `b̂₀ = e^{i(−π/2 − βπ/4)}·{−(β/√2)·cot[((1−β)π/2 + αη)/2ρ]
///        − ρ Σ_φ σ_φ (1 − β sin φ)^{−1/2}}`.
pub fn b0_closed_form(eta: f64, g: &ConeGeometry, alpha: Sign, beta: Sign) -> Result<Complex64> {
    let pps = pole_phases(g, eta, alpha);
    if pps.any_on_interface() {
        return Err(EvalError::OnInterface(format!(
            "b0_closed_form: eta = {eta} lies on the interface"
        )));
    }
    let rho = g.rho();
    let b = beta.value();
    let cot_arg = ((1.0 - b) * FRAC_PI_2 + alpha.value() * eta) / (2.0 * rho);
    let mut brace = -b / std::f64::consts::SQRT_2 / cot_arg.tan();
    for p in pps.iter() {
        brace -= rho * p.sigma.value() / (1.0 - b * p.phi.sin()).sqrt();
    }
    Ok(Complex64::cis(-FRAC_PI_2 - b * FRAC_PI_4) * brace)
}

struct Extraction {
    r0: f64,
    /// `b̂_m` for every requested `m`.
    coeffs: Vec<Complex64>,
}

/// Trapezoid node count for the Cauchy integral.
const CAUCHY_NODES: usize = 128;

/// Extracts `b̂_m` for each `m` in `ms` by the Cauchy integral over
/// `|s| = r₀`, with the pole sum removed in compensated arithmetic.
fn extract_coeffs(
    eta: f64,
    g: &ConeGeometry,
    alpha: Sign,
    beta: Sign,
    ms: &[usize],
) -> Result<Extraction> {
    let pps = pole_phases(g, eta, alpha);
    if pps.any_on_interface() {
        return Err(EvalError::OnInterface(format!(
            "coefficient extraction: eta = {eta} lies on the interface"
        )));
    }
    let rho = g.rho();
    let poles: Vec<Complex64> = pps
        .iter()
        .map(|p| pole_location(p.phi, p.sigma, beta))
        .collect();
    let radii: Vec<f64> = poles.iter().map(|p| p.norm()).collect();
    let d_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);

    // Default 0.5, shrunk to half the distance of the nearest pole when that
    // pole comes inside the unit disk; then nudge until the circle keeps a
    // relative radial gap from every pole radius.
    let mut r0 = if d_min < 1.0 { 0.5 * d_min } else { 0.5 };
    let mut tries = 0;
    while radii
        .iter()
        .any(|&rr| (rr - r0).abs() < (0.1 * r0).min(0.05))
    {
        r0 *= 0.85;
        tries += 1;
        if tries > 24 || !r0.is_normal() {
            return Err(EvalError::Geometry(format!(
                "extraction circle cannot clear pole radii near eta = {eta}"
            )));
        }
    }

    let residue = Complex64::new(0.0, rho); // â_φ = −ρ/i = iρ
    let two_rho = 2.0 * rho;
    let cot_base = FRAC_PI_2 + alpha.value() * eta;
    let b = beta.value();
    let i = Complex64::new(0.0, 1.0);
    let two_beta_i = Complex64::new(0.0, 2.0 * b);

    let mut acc = vec![Complex64::new(0.0, 0.0); ms.len()];
    for l in 0..CAUCHY_NODES {
        let theta = 2.0 * PI * l as f64 / CAUCHY_NODES as f64;
        let s = Complex64::from_polar(r0, theta);
        let root = (s * s - two_beta_i).sqrt();
        let w = b * i - s * s + s * root;
        let amp = ccot((cot_base + i * w.ln()) / two_rho) / root;
        // B̂ = Â − Σ poles, compensated: the cancellation here is the whole
        // point of the subtraction.
        let mut re = Compensated::new(amp.re);
        let mut im = Compensated::new(amp.im);
        for sp in &poles {
            let term = -residue / (s - sp);
            re.add(term.re);
            im.add(term.im);
        }
        let bhat = Complex64::new(re.value(), im.value());
        for (slot, &m) in acc.iter_mut().zip(ms) {
            *slot += bhat * Complex64::cis(-(m as f64) * theta);
        }
    }
    let coeffs = acc
        .iter()
        .zip(ms)
        .map(|(v, &m)| v / (CAUCHY_NODES as f64 * r0.powi(m as i32)))
        .collect();
    Ok(Extraction { r0, coeffs })
}

/// Neumaier compensated accumulator.
struct Compensated {
    s: f64,
    c: f64,
}

impl Compensated {
    fn new(v: f64) -> Self {
        Compensated { s: v, c: 0.0 }
    }
    fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }
    fn value(&self) -> f64 {
        self.s + self.c
    }
}

/// Cauchy-extraction route to a single normalized coefficient `b̂_m`.
///
/// Exposed as the independent cross-check of [`b0_closed_form`] (`m = 0`);
/// the two must agree to 1e-8 off the interface.
pub fn b_hat_cauchy(
    eta: f64,
    g: &ConeGeometry,
    alpha: Sign,
    beta: Sign,
    m: usize,
) -> Result<Complex64> {
    if m > 2 * KMAX_LIMIT {
        return Err(EvalError::domain(format!(
            "b_hat_cauchy: coefficient index {m} beyond 2·kmax limit {}",
            2 * KMAX_LIMIT
        )));
    }
    Ok(extract_coeffs(eta, g, alpha, beta, &[m])?.coeffs[0])
}

/// Normalized even Taylor coefficients `b̂_{2k}`, `k = 0..=kmax`.
///
/// `coeffs[0]` is the closed form; higher coefficients come from the Cauchy
/// integral.  The closed form and the extracted `k = 0` value are required
/// to agree to 1e-8, which cross-validates the whole extraction path.
pub fn b_taylor(
    eta: f64,
    g: &ConeGeometry,
    alpha: Sign,
    beta: Sign,
    kmax: usize,
) -> Result<BCoeffs> {
    if kmax > KMAX_LIMIT {
        return Err(EvalError::domain(format!(
            "b_taylor: kmax = {kmax} refused; coefficients beyond k = {KMAX_LIMIT} lose too much precision"
        )));
    }
    let closed = b0_closed_form(eta, g, alpha, beta)?;
    let ms: Vec<usize> = (0..=kmax).map(|k| 2 * k).collect();
    let ex = extract_coeffs(eta, g, alpha, beta, &ms)?;
    let drift = (ex.coeffs[0] - closed).norm();
    if drift > 1e-8 * (1.0 + closed.norm()) {
        return Err(EvalError::Accuracy {
            message: format!(
                "b_taylor: closed-form and Cauchy b̂₀ disagree by {drift:e} (r0 = {})",
                ex.r0
            ),
            best: ex.coeffs[0],
            abs_err: drift,
        });
    }
    let mut coeffs = ex.coeffs;
    coeffs[0] = closed;
    Ok(BCoeffs {
        alpha,
        beta,
        coeffs,
        kmax,
    })
}

/// Per-α terms of the uniform expansion of `S_α`, at the `S` level.
struct AlphaTerms {
    geometric: Vec<(i64, Complex64)>,
    transition: Vec<(i64, Complex64)>,
    diffractive: Vec<(usize, Complex64)>,
    err: f64,
}

fn uniform_alpha_terms(
    x: f64,
    eta: f64,
    g: &ConeGeometry,
    kmax: usize,
    alpha: Sign,
) -> Result<AlphaTerms> {
    let pps = pole_phases(g, eta, alpha);
    let (geometric, transition) = pole_front_terms(x, &pps, g)?;

    // One extra coefficient, when available, prices the truncation error.
    let kint = (kmax + 1).min(KMAX_LIMIT);
    let bplus = b_taylor(eta, g, alpha, Sign::Plus, kint)?;
    let bminus = b_taylor(eta, g, alpha, Sign::Minus, kint)?;

    let term_k = |k: usize| -> Result<Complex64> {
        let gm = gamma_pos(k as f64 + 0.5)?;
        let xpow = x.powf(-(k as f64) - 0.5);
        // restore b_{2k}^{(α,β)} = b̂_{2k}·(β/2π)·e^{xβi}
        let tp = bplus.coeffs[k] * Complex64::cis(x) / (2.0 * PI);
        let tm = bminus.coeffs[k] * Complex64::cis(-x) / (-2.0 * PI);
        Ok((tp + tm) * gm * xpow)
    };

    let mut diffractive = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        diffractive.push((k, term_k(k)?));
    }

    let err = if kint > kmax {
        1.5 * term_k(kint)?.norm() + 1e-14
    } else {
        let last = diffractive.last().map(|(_, v)| v.norm()).unwrap_or(0.0);
        let cmag = (bplus.coeffs[kmax].norm() + bminus.coeffs[kmax].norm()) / (2.0 * PI);
        last + 2.0 * gamma_pos(kmax as f64 + 1.5)? * cmag * x.powf(-(kmax as f64) - 1.5) + 1e-14
    };

    Ok(AlphaTerms {
        geometric,
        transition,
        diffractive,
        err,
    })
}

/// Uniform large-`x` evaluation of `S(x, η)`, valid off the interface.
///
/// Sums, over `α = ±1`, the erfc pole front and the diffractive series
/// through order `x^{−kmax−1/2}`.  The reported `abs_err` is a heuristic
/// (next-term magnitude), not a rigorous remainder.
pub fn s_uniform(x: f64, eta: f64, g: &ConeGeometry, kmax: usize) -> Result<EvalResult> {
    if !x.is_finite() || x <= 0.0 {
        return Err(EvalError::domain(format!(
            "s_uniform: x must be positive, got {x}"
        )));
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for alpha in Sign::BOTH {
        let terms = uniform_alpha_terms(x, eta, g, kmax, alpha)?;
        for (_, v) in &terms.geometric {
            value += v;
        }
        for (_, v) in &terms.transition {
            value += v;
        }
        for (_, v) in &terms.diffractive {
            value += v;
        }
        err += terms.err;
    }
    Ok(EvalResult {
        value,
        abs_err: err,
        method: Method::Uniform,
    })
}

/// The kernel-level expansion split into its named parts, each multiplied by
/// the prefactor.  Recombination reproduces `assemble_kernel(s_uniform(..))`
/// up to reassociation rounding.
pub fn kernel_breakdown(q: &KernelQuery, g: &ConeGeometry, kmax: usize) -> Result<KernelBreakdown> {
    let red = reduce(q, g);
    let pf = prefactor(q, g)?;
    let mut parts = Vec::with_capacity(2);
    for alpha in Sign::BOTH {
        let t = uniform_alpha_terms(red.x, red.eta, g, kmax, alpha)?;
        parts.push(ExpansionBreakdown {
            alpha,
            geometric: t.geometric.iter().map(|&(k, v)| (k, pf * v)).collect(),
            erfc_front: t.transition.iter().map(|&(k, v)| (k, pf * v)).collect(),
            diffractive: t.diffractive.iter().map(|&(k, v)| (k, pf * v)).collect(),
            valid: true,
        });
    }
    let minus = parts.pop().expect("two parts");
    let plus = parts.pop().expect("two parts");
    Ok(KernelBreakdown { plus, minus })
}

/// Method-of-images closed form with `N` images:
/// `−(1/4πit) Σ_{j=0}^{N−1} exp[(r₁² + r₂² − 2r₁r₂cos(θ₁ − θ₂ − 2πj/N))/4it]`.
///
/// Exact for the cone with `ρ = 1/N`.
pub fn images_closed_form(q: &KernelQuery, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(EvalError::domain("images_closed_form: N must be >= 1"));
    }
    let eta = q.theta1 - q.theta2;
    let rr = q.r1 * q.r1 + q.r2 * q.r2;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let d2 = rr - 2.0 * q.r1 * q.r2 * (eta - 2.0 * PI * j as f64 / n as f64).cos();
        acc += Complex64::cis(-d2 / (4.0 * q.t));
    }
    Ok(Complex64::new(0.0, 1.0 / (4.0 * PI * q.t)) * acc)
}

/// Leading-order non-uniform expansion: image sum plus the `x^{−1/2}`
/// cotangent term from the saddle points.  Requires the evaluation point to
/// be at interface distance ≥ 0.2, where the cotangents are tame.
///
/// The saddle coefficient is `(1/2)(2πx)^{−1/2}`; this is what Laplace's
/// method gives for the Gaussian branch-point integrals and what the uniform
/// expansion degenerates to, and the series oracle confirms it numerically.
pub fn s_preliminary(x: f64, eta: f64, g: &ConeGeometry) -> Result<EvalResult> {
    if !x.is_finite() || x <= 0.0 {
        return Err(EvalError::domain(format!(
            "s_preliminary: x must be positive, got {x}"
        )));
    }
    let dist = interface_distance(eta, g);
    if dist < 0.2 {
        return Err(EvalError::OnInterface(format!(
            "s_preliminary: interface distance {dist:.3} < 0.2; use the uniform expansion"
        )));
    }
    let rho = g.rho();
    let mut value = Complex64::new(0.0, 0.0);
    let mut cot_mag = 0.0;
    let mut cot_cubed = 0.0;
    let saddle_phase = Complex64::cis(x + FRAC_PI_4);
    for alpha in Sign::BOTH {
        let pps = pole_phases(g, eta, alpha);
        value += residue_terms(x, &pps, g);
        let cot_a = 1.0 / (alpha.value() * eta / (2.0 * rho)).tan();
        let cot_b = 1.0 / ((alpha.value() * eta + PI) / (2.0 * rho)).tan();
        cot_mag += cot_a.abs() + cot_b.abs();
        cot_cubed += cot_a.abs().powi(3) + cot_b.abs().powi(3);
        value +=
            (saddle_phase * cot_a - saddle_phase.conj() * cot_b) * (0.5 / (2.0 * PI * x).sqrt());
    }
    // The x^{−3/2} coefficient carries the second s-derivative of the
    // cotangent amplitude at the saddle, which grows like cot(1 + cot²)/ρ²
    // as a pole approaches: the heuristic has to keep up with that cube or
    // it goes dishonest right at the 0.2 admissibility edge.
    let abs_err =
        3.0 * (1.0 + cot_mag + 0.5 * cot_cubed / (rho * rho)) / (2.0 * PI).sqrt() * x.powf(-1.5);
    Ok(EvalResult {
        value,
        abs_err,
        method: Method::Preliminary,
    })
}
