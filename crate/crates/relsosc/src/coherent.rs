//! SU(1,1) coherent states: expansion coefficients, position-space series and
//! closed form, overlaps, the resolution-of-identity measure, generator
//! matrix elements, the propagator and the partition function.
//!
//! Every closed form here has a spectral-sum oracle built from the expansion
//! coefficients and the level energies; where the two printed variants of a
//! formula disagree (propagator denominator, partition-function denominator)
//! the spectral sum is the implemented default and the other variant stays
//! available as [`PropagatorForm::PaperPrinted`] / [`PartitionReport`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Oscillator, Regime};
use crate::numerics::hyper::gauss_2f1;
use crate::numerics::quad::{CompensatedComplex, QuadratureRule};

/// Default truncation for the spectral oracles.
pub const SPECTRAL_TRUNCATION: usize = 256;
/// Hard cap past which a coefficient tail that has not converged is an error.
pub const TRUNCATION_CAP: usize = 4096;
const TAIL_TARGET: f64 = 1e-14;

/// A point zeta in the open unit disc labelling a coherent state,
/// zeta = -tanh(tau/2) e^{-i phi} with group parameters tau >= 0, phi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CSLabel {
    zeta: Complex64,
    tau: f64,
    phi: f64,
}

impl CSLabel {
    pub fn from_zeta(zeta: Complex64) -> Result<Self> {
        let r = zeta.norm();
        if !(r.is_finite() && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "coherent-state label must satisfy |zeta| < 1, got |zeta| = {r}"
            )));
        }
        let tau = 2.0 * r.atanh();
        let phi = if r == 0.0 { 0.0 } else { -(-zeta).arg() };
        Ok(CSLabel { zeta, tau, phi })
    }

    pub fn from_group(tau: f64, phi: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0 && phi.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad group parameters ({tau}, {phi})")));
        }
        if tau > 38.0 {
            return Err(Error::InvalidParameter(format!(
                "tau = {tau} puts the label at the disc boundary in double precision"
            )));
        }
        let zeta = -Complex64::from_polar((0.5 * tau).tanh(), -phi);
        Ok(CSLabel { zeta, tau, phi })
    }

    pub fn zeta(&self) -> Complex64 {
        self.zeta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Truncated expansion coefficients c_n = (1-|zeta|²)^k sqrt((2k)_n/n!) zeta^n
/// over the energy eigenbasis, with a geometric bound on the discarded
/// sum of |c_n|².
#[derive(Debug, Clone)]
pub struct CSCoefficients {
    pub k: f64,
    pub coeffs: Vec<Complex64>,
    pub tail_bound: f64,
}

impl CSCoefficients {
    /// Sum of |c_n|²; equals 1 up to the tail bound.
    pub fn norm_sq(&self) -> f64 {
        let mut acc = crate::numerics::CompensatedSum::default();
        for c in &self.coeffs {
            acc.add(c.norm_sqr());
        }
        acc.value()
    }
}

fn coefficient_terms(
    zeta: Complex64,
    k: f64,
    tail_target: f64,
    cap: usize,
) -> std::result::Result<(Vec<Complex64>, f64), f64> {
    let x = zeta.norm_sqr();
    let pref = (1.0 - x).powf(k);
    let mut coeffs = Vec::new();
    let mut cur = Complex64::new(pref, 0.0);
    for n in 0..=cap {
        coeffs.push(cur);
        let nf = n as f64;
        // tail of sum |c_m|² for m > n, geometric bound with decreasing ratio
        let q = x * (nf + 1.0 + 2.0 * k) / (nf + 2.0);
        if q < 1.0 {
            let next_sq = cur.norm_sqr() * x * (nf + 2.0 * k) / (nf + 1.0);
            let bound = next_sq / (1.0 - q);
            if bound < tail_target {
                return Ok((coeffs, bound));
            }
        }
        cur *= zeta * ((2.0 * k + nf) / (nf + 1.0)).sqrt();
    }
    Err(cur.norm_sqr())
}

/// Expansion coefficients of |zeta, k> over the eigenfunctions, truncated
/// once the |c_n|² tail drops below 1e-14 (error if that needs more than
/// `n_max` terms).
pub fn cs_coefficients(label: &CSLabel, osc: &Oscillator, n_max: usize) -> Result<CSCoefficients> {
    let k = osc.bargmann_k();
    let cap = n_max.min(TRUNCATION_CAP);
    match coefficient_terms(label.zeta(), k, TAIL_TARGET, cap) {
        Ok((coeffs, tail_bound)) => Ok(CSCoefficients { k, coeffs, tail_bound }),
        Err(bound) => Err(Error::TruncationInsufficient { bound, n: cap }),
    }
}

/// Position-space coherent state by direct summation of c_n psi_n(rho).
///
/// The eigenfunctions are O(1), so the coefficient tail is driven far below
/// the |c_n|² normalization target before summing.
pub fn cs_position_series(
    label: &CSLabel,
    rho: f64,
    osc: &Oscillator,
    n_max: usize,
) -> Result<Complex64> {
    let cap = n_max.min(TRUNCATION_CAP);
    let (coeffs, _) = coefficient_terms(label.zeta(), osc.bargmann_k(), 1e-30, cap)
        .map_err(|bound| Error::TruncationInsufficient { bound, n: cap })?;
    let family = osc.eigenfunction_family(coeffs.len() - 1, Complex64::new(rho, 0.0))?;
    let mut acc = CompensatedComplex::default();
    for (c, psi) in coeffs.iter().zip(&family) {
        acc.add(c * psi);
    }
    Ok(acc.value())
}

/// Closed hypergeometric form of the coherent state,
///
///   (1-|zeta|²)^k c_0 W(rho) (1-zeta)^{-|alpha|+i rho}
///       ₂F₁(|alpha|+i rho, 1/2+i rho; |alpha|+1/2; zeta),
///
/// with |alpha| the complex modulus. Only derived for equal or
/// conjugate-pair indices, so the subcritical regime is rejected. The form
/// is an identity for equal indices (critical coupling); for a genuinely
/// complex pair it deviates from the series at relative O(|Im alpha|), which
/// the cross-form tests measure.
pub fn cs_position_closed(label: &CSLabel, rho: f64, osc: &Oscillator) -> Result<Complex64> {
    let sp = osc.spectral();
    if sp.regime == Regime::Subcritical {
        return Err(Error::WrongRegime(format!(
            "closed coherent-state form needs g0 >= 1/(8 omega0²); regime is {}",
            sp.regime
        )));
    }
    let k = osc.bargmann_k();
    let am = sp.alpha.norm();
    let irho = Complex64::new(0.0, rho);
    let zeta = label.zeta();
    let pref = (1.0 - zeta.norm_sqr()).powf(k);
    let c0w = ground_state_prefactor(osc, rho)?;
    let power = ((Complex64::new(1.0, 0.0) - zeta).ln() * (-am + irho)).exp();
    let f21 = gauss_2f1(am + irho, 0.5 + irho, Complex64::new(am + 0.5, 0.0), zeta)?;
    Ok(pref * c0w * power * f21)
}

/// c_0 W(rho), i.e. psi_0(rho); factored out so the closed form shares the
/// exact prefactor of the series.
fn ground_state_prefactor(osc: &Oscillator, rho: f64) -> Result<Complex64> {
    osc.eigenfunction(0, Complex64::new(rho, 0.0))
}

/// Overlap <label1 | label2> = (1-|z1|²)^k (1-|z2|²)^k (1 - z1* z2)^{-2k},
/// principal branch (1 - z1* z2 has positive real part on the polydisc).
pub fn overlap(label1: &CSLabel, label2: &CSLabel, osc: &Oscillator) -> Complex64 {
    let k = osc.bargmann_k();
    let z1 = label1.zeta();
    let z2 = label2.zeta();
    let cross = Complex64::new(1.0, 0.0) - z1.conj() * z2;
    debug_assert!(cross.re > 0.0);
    let pref = ((1.0 - z1.norm_sqr()) * (1.0 - z2.norm_sqr())).powf(k);
    pref * (cross.ln() * (-2.0 * k)).exp()
}

/// Overlap via the coefficient sum, the oracle for the closed form.
pub fn overlap_spectral(
    label1: &CSLabel,
    label2: &CSLabel,
    osc: &Oscillator,
    n_max: usize,
) -> Result<Complex64> {
    propagator_spectral(label1, label2, 0.0, osc, n_max)
}

/// Density of the resolution-of-identity measure
/// d mu_k = (2k-1)/pi d²zeta / (1-|zeta|²)², defined for k > 1/2.
pub fn measure_density(label: &CSLabel, osc: &Oscillator) -> Result<f64> {
    let k = osc.bargmann_k();
    if k <= 0.5 {
        return Err(Error::MeasureUndefined { k });
    }
    let one_minus = 1.0 - label.zeta().norm_sqr();
    Ok((2.0 * k - 1.0) / std::f64::consts::PI / (one_minus * one_minus))
}

/// Deviation of the sampled resolution of identity from the unit matrix.
#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub n_max: usize,
    /// M_{mn} - delta_{mn}, row-major.
    pub deviation: Vec<f64>,
    pub max_diag: f64,
    pub max_offdiag: f64,
}

/// M_{mn} = ∫ d mu_k <psi_m|zeta><zeta|psi_n> over the disc, computed in
/// coefficient space with a uniform angular grid (which kills m != n exactly)
/// and a radially graded Gauss-Legendre rule in u = r².
pub fn completeness_check(
    osc: &Oscillator,
    n_max: usize,
    radial_panels: usize,
    radial_nodes: usize,
    angular: usize,
) -> Result<CompletenessReport> {
    let k = osc.bargmann_k();
    if k <= 0.5 {
        return Err(Error::MeasureUndefined { k });
    }
    let radial = QuadratureRule::unit_disc_radial(radial_panels, radial_nodes);
    let dim = n_max + 1;
    // sqrt((2k)_n / n!) ratios
    let mut amp = vec![1.0f64; dim];
    for n in 1..dim {
        amp[n] = amp[n - 1] * ((2.0 * k + n as f64 - 1.0) / n as f64).sqrt();
    }
    let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (u, w) in radial.nodes.iter().zip(&radial.weights) {
        // d²zeta = r dr dtheta = du dtheta / 2; the measure contributes
        // (2k-1)/pi (1-u)^{-2} and the two coefficients (1-u)^{2k}
        let base = w * 0.5 * (2.0 * k - 1.0) / std::f64::consts::PI * (1.0 - u).powf(2.0 * k - 2.0);
        for j in 0..angular {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / angular as f64;
            let wj = base * 2.0 * std::f64::consts::PI / angular as f64;
            let z = Complex64::from_polar(u.sqrt(), theta);
            for m in 0..dim {
                for n in 0..dim {
                    let val = amp[m] * amp[n] * z.powu(m as u32) * z.conj().powu(n as u32);
                    matrix[m * dim + n] += wj * val;
                }
            }
        }
    }
    let mut deviation = vec![0.0f64; dim * dim];
    let mut max_diag = 0.0f64;
    let mut max_off = 0.0f64;
    for m in 0..dim {
        for n in 0..dim {
            let target = if m == n { 1.0 } else { 0.0 };
            let dev = (matrix[m * dim + n] - target).norm();
            deviation[m * dim + n] = dev;
            if m == n {
                max_diag = max_diag.max(dev);
            } else {
                max_off = max_off.max(dev);
            }
        }
    }
    Ok(CompletenessReport { n_max, deviation, max_diag, max_offdiag: max_off })
}

/// Matrix elements (<K->, <K+>, <K0>) between two coherent states,
///
///   <z1|K-|z2> = 2k z2 / (1 - z1* z2) <z1|z2>,
///   <z1|K+|z2> = 2k z1* / (1 - z1* z2) <z1|z2>,
///   <z1|K0|z2> = k (1 + z1* z2) / (1 - z1* z2) <z1|z2>.
pub fn generator_matrix_elements(
    label1: &CSLabel,
    label2: &CSLabel,
    osc: &Oscillator,
) -> (Complex64, Complex64, Complex64) {
    let k = osc.bargmann_k();
    let z1c = label1.zeta().conj();
    let z2 = label2.zeta();
    let ovl = overlap(label1, label2, osc);
    let denom = Complex64::new(1.0, 0.0) - z1c * z2;
    (
        2.0 * k * z2 / denom * ovl,
        2.0 * k * z1c / denom * ovl,
        k * (Complex64::new(1.0, 0.0) + z1c * z2) / denom * ovl,
    )
}

/// Normalized energy function H_k(z1*, z2) = 2 k omega0 (1 + z1* z2)/(1 - z1* z2)
/// in mc² units; on the diagonal this is 2 k omega0 cosh(tau).
pub fn hk_energy_function(label1: &CSLabel, label2: &CSLabel, osc: &Oscillator) -> Result<Complex64> {
    let w = label1.zeta().conj() * label2.zeta();
    let denom = Complex64::new(1.0, 0.0) - w;
    if denom.norm() < 1e-15 {
        return Err(Error::InvalidParameter("H_k singular at zeta1* zeta2 = 1".into()));
    }
    Ok(2.0 * osc.bargmann_k() * osc.omega0() * (Complex64::new(1.0, 0.0) + w) / denom)
}

/// Which printed variant of the closed propagator to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorForm {
    /// Denominator carries e^{-2 i omega T}; agrees with the spectral sum.
    SpectralConsistent,
    /// Denominator carries e^{-2 i omega k T} as printed in the source
    /// formula; kept for comparison output.
    PaperPrinted,
}

/// Closed-form transition amplitude <label1| e^{-iTH} |label2>,
///
///   e^{-2 i omega k T} (1-|z1|²)^k (1-|z2|²)^k / (1 - z1* z2 q)^{2k},
///
/// with q = e^{-2 i omega T} (spectral-consistent) or q = e^{-2 i omega k T}
/// (paper-printed variant). T is in natural time units (mc²=ħ=1).
pub fn propagator_closed(
    label1: &CSLabel,
    label2: &CSLabel,
    t: f64,
    osc: &Oscillator,
    form: PropagatorForm,
) -> Complex64 {
    let k = osc.bargmann_k();
    let w0 = osc.omega0();
    let phase = Complex64::new(0.0, -2.0 * w0 * k * t).exp();
    let q = match form {
        PropagatorForm::SpectralConsistent => Complex64::new(0.0, -2.0 * w0 * t).exp(),
        PropagatorForm::PaperPrinted => phase,
    };
    let z1c = label1.zeta().conj();
    let z2 = label2.zeta();
    let pref = ((1.0 - label1.zeta().norm_sqr()) * (1.0 - z2.norm_sqr())).powf(k);
    let denom = (Complex64::new(1.0, 0.0) - z1c * z2 * q).ln() * (-2.0 * k);
    phase * pref * denom.exp()
}

/// Spectral-sum propagator sum_n conj(c_n(z1)) c_n(z2) e^{-i E_n T}; the
/// ground truth for the closed form's disputed exponent.
///
/// Both coefficient sequences advance together and the sum stops only once
/// both |c_n|² tails are below 1e-14, so the cross-term tail is bounded by
/// the same target.
pub fn propagator_spectral(
    label1: &CSLabel,
    label2: &CSLabel,
    t: f64,
    osc: &Oscillator,
    n_max: usize,
) -> Result<Complex64> {
    let k = osc.bargmann_k();
    let w0 = osc.omega0();
    let z1 = label1.zeta();
    let z2 = label2.zeta();
    let mut cur1 = Complex64::new((1.0 - z1.norm_sqr()).powf(k), 0.0);
    let mut cur2 = Complex64::new((1.0 - z2.norm_sqr()).powf(k), 0.0);
    let mut acc = CompensatedComplex::default();
    let cap = n_max.min(TRUNCATION_CAP);
    let step = Complex64::new(0.0, -2.0 * w0 * t).exp();
    let mut phase = Complex64::new(0.0, -2.0 * w0 * k * t).exp();
    for n in 0..=cap {
        acc.add(cur1.conj() * cur2 * phase);
        let nf = n as f64;
        let q1 = z1.norm_sqr() * (nf + 1.0 + 2.0 * k) / (nf + 2.0);
        let q2 = z2.norm_sqr() * (nf + 1.0 + 2.0 * k) / (nf + 2.0);
        if q1 < 1.0 && q2 < 1.0 {
            let growth = (2.0 * k + nf) / (nf + 1.0);
            let b1 = cur1.norm_sqr() * z1.norm_sqr() * growth / (1.0 - q1);
            let b2 = cur2.norm_sqr() * z2.norm_sqr() * growth / (1.0 - q2);
            if b1 < TAIL_TARGET && b2 < TAIL_TARGET {
                return Ok(acc.value());
            }
        }
        let amp = ((2.0 * k + nf) / (nf + 1.0)).sqrt();
        cur1 *= z1 * amp;
        cur2 *= z2 * amp;
        phase *= step;
    }
    Err(Error::TruncationInsufficient { bound: cur1.norm_sqr().max(cur2.norm_sqr()), n: cap })
}

/// Partition function evaluations at inverse temperature beta (in 1/mc²).
#[derive(Debug, Clone, Copy)]
pub struct PartitionReport {
    pub beta: f64,
    /// Geometric closed form e^{-2 k omega0 beta} / (1 - e^{-2 omega0 beta}).
    pub z_closed: f64,
    /// Direct sum over the first 200 levels.
    pub z_direct: f64,
    /// Printed variant with e^{-2 k omega0 beta} in the denominator too.
    pub z_paper_printed: f64,
    /// Nonrelativistic partition sum_n e^{-beta omega0 (2n + d + 1)}.
    pub z_nonrel: f64,
    /// Ratio z_closed / z_nonrel = e^{-omega0 beta (alpha + nu - d - 1)}.
    pub ratio_rel_nonrel: f64,
}

pub(crate) fn partition_closed(k: f64, omega0: f64, beta: f64) -> f64 {
    (-2.0 * k * omega0 * beta).exp() / (1.0 - (-2.0 * omega0 * beta).exp())
}

/// Z = sum_n e^{-beta E_n}, its geometric closed form, the printed variant,
/// and the nonrelativistic comparison.
pub fn partition_function(beta: f64, osc: &Oscillator) -> Result<PartitionReport> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be > 0, got {beta}")));
    }
    let k = osc.bargmann_k();
    let w0 = osc.omega0();
    let d = osc.spectral().d;
    let mut direct = crate::numerics::CompensatedSum::default();
    for n in 0..200u32 {
        direct.add((-beta * osc.energy(n)?).exp());
    }
    let x = (-2.0 * k * w0 * beta).exp();
    let z_nonrel = (-beta * w0 * (d + 1.0)).exp() / (1.0 - (-2.0 * w0 * beta).exp());
    let z_closed = partition_closed(k, w0, beta);
    Ok(PartitionReport {
        beta,
        z_closed,
        z_direct: direct.value(),
        z_paper_printed: x / (1.0 - x),
        z_nonrel,
        ratio_rel_nonrel: z_closed / z_nonrel,
    })
}
