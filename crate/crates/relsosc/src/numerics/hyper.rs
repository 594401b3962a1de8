//! Gauss hypergeometric series and continuous dual Hahn polynomials.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::gamma::pochhammer;

const TERM_CUTOFF: f64 = 1e-16;
const MAX_TERMS: usize = 1_000_000;

/// ₂F₁(a, b; c; z) by direct power series, valid for |z| < 1.
///
/// Summation stops once the term stays below 1e-16 of the partial sum for
/// three consecutive terms; accuracy degrades as |z| -> 1. The terms are
/// built symmetrically in a and b, so swapping them is bit-identical.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "gauss_2f1 requires |z| < 1, got |z| = {}",
            z.norm()
        )));
    }
    let m = c.re.round();
    if m <= 0.5 && (c - Complex64::new(m, 0.0)).norm() <= 1e-14 {
        return Err(Error::InvalidParameter(format!(
            "gauss_2f1 lower parameter c = {c} is a nonpositive integer"
        )));
    }

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_streak = 0u32;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() < TERM_CUTOFF * sum.norm().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::SeriesDivergence { what: "gauss_2f1", terms: MAX_TERMS })
}

/// Continuous dual Hahn polynomial S_n(x²; a, b, c) in the standard
/// normalization
///
///   S_n(x²; a,b,c) = (a+b)_n (a+c)_n ₃F₂(-n, a+ix, a-ix; a+b, a+c; 1).
///
/// The paired factors (a+ix)_j (a-ix)_j reduce to products of (a+l)² + x²,
/// so only x² enters and complex x² needs no branch choice. Finite sum of
/// n + 1 terms.
pub fn cdh_polynomial(
    n: u32,
    x2: Complex64,
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> Complex64 {
    let mut term = pochhammer(a + b, n) * pochhammer(a + c, n);
    let mut sum = term;
    for j in 0..n {
        let jf = j as f64;
        term *= -((n - j) as f64) * ((a + jf) * (a + jf) + x2)
            / ((a + b + jf) * (a + c + jf) * (jf + 1.0));
        sum += term;
    }
    sum
}

/// Normalized sequence Ŝ_n = S_n / ((a+b)_n (a+c)_n) for n = 0..=n_max via the
/// three-term recurrence
///
///   -(a² + x²) Ŝ_n = A_n Ŝ_{n+1} - (A_n + C_n) Ŝ_n + C_n Ŝ_{n-1},
///   A_n = (n+a+b)(n+a+c),  C_n = n (n+b+c-1).
///
/// Overflow-free for large n, unlike the raw polynomials.
pub(crate) fn cdh_normalized_seq(
    n_max: usize,
    x2: Complex64,
    a: Complex64,
    b: Complex64,
    c: Complex64,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    out.push(cur);
    let a2x2 = a * a + x2;
    for n in 0..n_max {
        let nf = n as f64;
        let an = (a + b + nf) * (a + c + nf);
        let cn = nf * (b + c + nf - 1.0);
        let next = ((an + cn - a2x2) * cur - cn * prev) / an;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}
