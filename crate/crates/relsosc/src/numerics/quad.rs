//! Gauss-Legendre quadrature rules and the adaptive semi-infinite integral.
//!
//! Composite rules are assembled from panels; sums use Neumaier compensation
//! in a fixed node order so results do not depend on evaluation order.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Where a rule's abscissae live.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    SemiInfinite,
    UnitDiscRadial,
    FiniteInterval,
}

/// A positive-weight quadrature rule with strictly increasing nodes per panel.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: DomainTag,
}

/// Neumaier compensated accumulator for f64.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Complex compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplex {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl CompensatedComplex {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        // final derivative for the weight
        let mut p0 = 1.0;
        let mut p1 = x;
        for j in 2..=n {
            let jf = j as f64;
            let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = -x.abs();
        nodes[n - 1 - i] = x.abs();
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

impl QuadratureRule {
    /// Gauss-Legendre rule mapped onto [a, b].
    pub fn finite(a: f64, b: f64, n: usize) -> Self {
        let (xs, ws) = gauss_legendre(n);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        QuadratureRule {
            nodes: xs.iter().map(|x| mid + half * x).collect(),
            weights: ws.iter().map(|w| half * w).collect(),
            domain: DomainTag::FiniteInterval,
        }
    }

    /// Composite rule of unit-width panels covering [0, r_max].
    pub fn composite_semi_infinite(r_max: usize, nodes_per_panel: usize) -> Self {
        let (xs, ws) = gauss_legendre(nodes_per_panel);
        let mut nodes = Vec::with_capacity(r_max * nodes_per_panel);
        let mut weights = Vec::with_capacity(r_max * nodes_per_panel);
        for k in 0..r_max {
            let a = k as f64;
            for (x, w) in xs.iter().zip(&ws) {
                nodes.push(a + 0.5 + 0.5 * x);
                weights.push(0.5 * w);
            }
        }
        QuadratureRule { nodes, weights, domain: DomainTag::SemiInfinite }
    }

    /// Radial rule in u = r² on [0, 1), with panels geometrically graded
    /// towards u = 1 to absorb the (1-u)^(2k-2) measure factor.
    pub fn unit_disc_radial(graded_panels: usize, nodes_per_panel: usize) -> Self {
        let (xs, ws) = gauss_legendre(nodes_per_panel);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut left = 0.0;
        for p in 0..graded_panels {
            let right = 1.0 - 0.5f64.powi(p as i32 + 1);
            let mid = 0.5 * (left + right);
            let half = 0.5 * (right - left);
            for (x, w) in xs.iter().zip(&ws) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
            left = right;
        }
        QuadratureRule { nodes, weights, domain: DomainTag::UnitDiscRadial }
    }

    /// Compensated weighted sum of f over the rule's nodes, in node order.
    pub fn integrate<F: Fn(f64) -> Complex64>(&self, f: F) -> Complex64 {
        let mut acc = CompensatedComplex::default();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(*w * f(*x));
        }
        acc.value()
    }
}

const DECAY_FLOOR: f64 = 1e-18;
const MAX_PANELS: usize = 160;

/// Adaptive integral of f over [0, inf) for integrands with at least
/// exponential decay.
///
/// Unit-width Gauss-Legendre panels are appended until the integrand has
/// fallen below 1e-18 of its running maximum; each panel is evaluated at two
/// node counts and the difference drives refinement. Fails if the error
/// estimate stagnates above `tol`.
pub fn semi_infinite_quadrature<F>(f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut nodes_per_panel = 16usize;
    let mut last_estimate = f64::INFINITY;
    loop {
        let (xs_lo, ws_lo) = gauss_legendre(nodes_per_panel);
        let (xs_hi, ws_hi) = gauss_legendre(2 * nodes_per_panel);
        let mut total = CompensatedComplex::default();
        let mut err = CompensatedSum::default();
        let mut max_abs = 0.0f64;
        let mut tail_quiet = 0usize;
        let mut panel = 0usize;
        while panel < MAX_PANELS {
            let a = panel as f64;
            let mut lo = CompensatedComplex::default();
            for (x, w) in xs_lo.iter().zip(&ws_lo) {
                lo.add(0.5 * w * f(a + 0.5 + 0.5 * x)?);
            }
            let mut hi = CompensatedComplex::default();
            let mut panel_max = 0.0f64;
            for (x, w) in xs_hi.iter().zip(&ws_hi) {
                let v = f(a + 0.5 + 0.5 * x)?;
                panel_max = panel_max.max(v.norm());
                hi.add(0.5 * w * v);
            }
            total.add(hi.value());
            err.add((hi.value() - lo.value()).norm());
            max_abs = max_abs.max(panel_max);
            panel += 1;
            if panel_max < DECAY_FLOOR * max_abs.max(f64::MIN_POSITIVE) {
                tail_quiet += 1;
                if tail_quiet >= 2 {
                    break;
                }
            } else {
                tail_quiet = 0;
            }
        }
        if panel >= MAX_PANELS {
            return Err(Error::QuadratureNonConvergence { estimate: err.value(), tol });
        }
        let estimate = err.value();
        if estimate <= tol {
            return Ok(total.value());
        }
        if nodes_per_panel >= 256 || estimate > 0.5 * last_estimate {
            return Err(Error::QuadratureNonConvergence { estimate, tol });
        }
        last_estimate = estimate;
        nodes_per_panel *= 2;
    }
}
