//! Composite Gauss–Legendre quadrature.
//!
//! All integral representations in this crate (Bessel integrals, the loop
//! integral for `S(x,η)`, error-function oracles in the tests) are analytic
//! on their contours, so fixed-order Gauss–Legendre panels converge
//! spectrally and panel doubling gives a cheap a-posteriori error estimate.
//!
//! Nodes and weights are computed once per order by Newton iteration on the
//! Legendre polynomial `P_n` and cached.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// A Gauss–Legendre rule on the reference interval `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `n` nodes (exact for polynomials of degree `2n − 1`).
    ///
    /// Results are cached; repeated calls for the same `n` are cheap.
    pub fn new(n: usize) -> Arc<GaussLegendre> {
        assert!(n >= 2, "Gauss-Legendre order must be at least 2");
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().expect("quadrature cache poisoned");
        map.entry(n)
            .or_insert_with(|| Arc::new(Self::compute(n)))
            .clone()
    }

    fn compute(n: usize) -> GaussLegendre {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Roots come in ± pairs; find those in (0, 1] from the Chebyshev guess.
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (p2, d2) = legendre_with_derivative(n, x);
                    dp = d2;
                    x -= p2 / d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// ∫_a^b f(t) dt on a single panel.
    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * w;
        }
        acc * half
    }

    /// Physical nodes and weights for ∫_a^b, as `(t_i, w_i)` pairs.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, w * half))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// ∫_a^b f over `panels` equal panels with an `order`-point rule.
pub fn composite_complex<F: FnMut(f64) -> Complex64>(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    mut f: F,
) -> Complex64 {
    let rule = GaussLegendre::new(order);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        acc += rule.integrate_complex(a + p as f64 * h, a + (p + 1) as f64 * h, &mut f);
    }
    acc
}

pub fn composite_real<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
    mut f: F,
) -> f64 {
    let rule = GaussLegendre::new(order);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        acc += rule.integrate_real(a + p as f64 * h, a + (p + 1) as f64 * h, &mut f);
    }
    acc
}

/// Panel edges for `[a, b]` with geometrically growing widths (first panel
/// `~first_width`, successive ratio `ratio`).  Used where the integrand
/// decays on a scale much shorter than the interval.
pub fn graded_edges(a: f64, b: f64, first_width: f64, ratio: f64, max_panels: usize) -> Vec<f64> {
    debug_assert!(b > a && first_width > 0.0 && ratio > 1.0);
    let mut edges = vec![a];
    let mut w = first_width.min(b - a);
    let mut t = a;
    while t + w < b && edges.len() < max_panels {
        t += w;
        edges.push(t);
        w *= ratio;
    }
    edges.push(b);
    edges
}

/// ∫ over an explicit edge list.
pub fn composite_complex_edges<F: FnMut(f64) -> Complex64>(
    edges: &[f64],
    order: usize,
    mut f: F,
) -> Complex64 {
    let rule = GaussLegendre::new(order);
    let mut acc = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        acc += rule.integrate_complex(w[0], w[1], &mut f);
    }
    acc
}

pub fn composite_real_edges<F: FnMut(f64) -> f64>(edges: &[f64], order: usize, mut f: F) -> f64 {
    let rule = GaussLegendre::new(order);
    let mut acc = 0.0;
    for w in edges.windows(2) {
        acc += rule.integrate_real(w[0], w[1], &mut f);
    }
    acc
}
