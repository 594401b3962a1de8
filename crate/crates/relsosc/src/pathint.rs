//! Time-sliced coherent-state path integral and the classical limit:
//! short-time kernel, slice composition (deterministic disc quadrature up to
//! three slices, Monte Carlo beyond), the Lagrangian, Poisson-bracket
//! dynamics on the Lobachevsky plane and Bohr-Sommerfeld quantization.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coherent::{hk_energy_function, overlap, CSLabel};
use crate::error::{Error, Result};
use crate::model::Oscillator;
use crate::numerics::quad::{CompensatedComplex, QuadratureRule};

/// Classical state on the curved phase space, either (tau, phi) or the
/// canonical pair (p, phi) with p = cosh(tau) - 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub tau: f64,
    pub phi: f64,
}

impl PhasePoint {
    pub fn new(tau: f64, phi: f64) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0 && phi.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad phase point ({tau}, {phi})")));
        }
        Ok(PhasePoint { tau, phi })
    }

    /// Momentum conjugate to phi: p = cosh(tau) - 1 >= 0.
    pub fn momentum(&self) -> f64 {
        self.tau.cosh() - 1.0
    }

    pub fn from_momentum(p: f64, phi: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::InvalidParameter(format!("momentum must be >= 0, got {p}")));
        }
        PhasePoint::new((p + 1.0).acosh(), phi)
    }

    pub fn label(&self) -> Result<CSLabel> {
        CSLabel::from_group(self.tau, self.phi)
    }
}

/// How the intermediate slice integrals are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scheme {
    /// Product polar quadrature per disc; capped at 3 slices (a
    /// 4-dimensional integral).
    Deterministic,
    /// Sequential overlap-weighted sampling of the intermediate labels with
    /// phase-carrying importance weights; any slice count.
    MonteCarlo {
        samples: usize,
        chains: usize,
        /// Fail if the reported standard error exceeds this.
        budget: Option<f64>,
    },
}

/// Slicing of the propagator time into N short-time factors.
#[derive(Debug, Clone, Copy)]
pub struct SlicingConfig {
    pub n_slices: usize,
    pub total_time: f64,
    pub seed: u64,
    pub scheme: Scheme,
}

impl SlicingConfig {
    pub fn epsilon(&self) -> f64 {
        self.total_time / self.n_slices as f64
    }
}

/// Composed-propagator estimate with an error statement for the MC scheme.
#[derive(Debug, Clone, Copy)]
pub struct ComposeResult {
    pub value: Complex64,
    /// Standard error of the estimate (Monte Carlo only).
    pub std_error: Option<f64>,
    pub n_slices: usize,
}

/// One short-time factor <to| e^{-i eps H} |from> ≈ <to|from> e^{-i eps H_k};
/// per-slice error O(eps²) against the exact one-slice propagator.
pub fn short_time_kernel(
    label_to: &CSLabel,
    label_from: &CSLabel,
    epsilon: f64,
    osc: &Oscillator,
) -> Result<Complex64> {
    let hk = hk_energy_function(label_to, label_from, osc)?;
    Ok(overlap(label_to, label_from, osc) * (-Complex64::i() * epsilon * hk).exp())
}

// Deterministic disc grid resolution.
const RADIAL_PANELS: usize = 14;
const RADIAL_NODES: usize = 10;
const ANGULAR_NODES: usize = 48;

fn disc_grid(osc: &Oscillator) -> (Vec<CSLabel>, Vec<f64>) {
    let k = osc.bargmann_k();
    let radial = QuadratureRule::unit_disc_radial(RADIAL_PANELS, RADIAL_NODES);
    let mut labels = Vec::with_capacity(radial.nodes.len() * ANGULAR_NODES);
    let mut weights = Vec::with_capacity(labels.capacity());
    for (u, w) in radial.nodes.iter().zip(&radial.weights) {
        // d mu_k = (2k-1)/pi (1-u)^{-2} * du dtheta / 2
        let base = w * 0.5 * (2.0 * k - 1.0) / std::f64::consts::PI / ((1.0 - u) * (1.0 - u));
        for j in 0..ANGULAR_NODES {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / ANGULAR_NODES as f64;
            labels.push(
                CSLabel::from_zeta(Complex64::from_polar(u.sqrt(), theta))
                    .expect("grid stays inside the disc"),
            );
            weights.push(base * 2.0 * std::f64::consts::PI / ANGULAR_NODES as f64);
        }
    }
    (labels, weights)
}

fn compose_deterministic(
    label_final: &CSLabel,
    label_initial: &CSLabel,
    config: &SlicingConfig,
    osc: &Oscillator,
) -> Result<Complex64> {
    let eps = config.epsilon();
    match config.n_slices {
        1 => short_time_kernel(label_final, label_initial, eps, osc),
        2 => {
            let (labels, weights) = disc_grid(osc);
            let mut acc = CompensatedComplex::default();
            for (l, w) in labels.iter().zip(&weights) {
                acc.add(
                    *w * short_time_kernel(label_final, l, eps, osc)?
                        * short_time_kernel(l, label_initial, eps, osc)?,
                );
            }
            Ok(acc.value())
        }
        3 => {
            let (labels, weights) = disc_grid(osc);
            let to_final: Vec<Complex64> = labels
                .iter()
                .zip(&weights)
                .map(|(l, w)| Ok(*w * short_time_kernel(label_final, l, eps, osc)?))
                .collect::<Result<_>>()?;
            let from_initial: Vec<Complex64> = labels
                .iter()
                .zip(&weights)
                .map(|(l, w)| Ok(*w * short_time_kernel(l, label_initial, eps, osc)?))
                .collect::<Result<_>>()?;
            // rows are summed per p and combined in index order, so the
            // result does not depend on the parallel schedule
            let rows: Vec<Complex64> = (0..labels.len())
                .into_par_iter()
                .map(|p| {
                    let mut row = CompensatedComplex::default();
                    for q in 0..labels.len() {
                        let mid = short_time_kernel(&labels[p], &labels[q], eps, osc)
                            .expect("grid labels are inside the disc");
                        row.add(mid * from_initial[q]);
                    }
                    to_final[p] * row.value()
                })
                .collect();
            let mut acc = CompensatedComplex::default();
            for r in rows {
                acc.add(r);
            }
            Ok(acc.value())
        }
        n => Err(Error::InvalidParameter(format!(
            "deterministic scheme is capped at 3 slices (got {n}); use Monte Carlo"
        ))),
    }
}

/// Möbius translate of w moving the origin to center; an isometry of the
/// hyperbolic measure.
fn mobius_shift(w: Complex64, center: Complex64) -> Complex64 {
    (w + center) / (Complex64::new(1.0, 0.0) + center.conj() * w)
}

/// Draw from the normalized density |<zeta|center>| d mu_k / c1 by the radial
/// inverse CDF of the hyperbolic family in the Möbius frame of the center.
fn sample_around(center: Complex64, k: f64, rng: &mut ChaCha8Rng) -> Complex64 {
    let v: f64 = rng.gen();
    let r2 = 1.0 - (1.0 - v).powf(1.0 / (k - 1.0));
    let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    mobius_shift(Complex64::from_polar(r2.sqrt().min(1.0 - 1e-12), theta), center)
}

fn compose_monte_carlo(
    label_final: &CSLabel,
    label_initial: &CSLabel,
    config: &SlicingConfig,
    osc: &Oscillator,
    samples: usize,
    chains: usize,
    budget: Option<f64>,
) -> Result<ComposeResult> {
    let k = osc.bargmann_k();
    if k <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "overlap-weighted sampling needs k > 1, got k = {k}"
        )));
    }
    if chains < 2 || samples < chains {
        return Err(Error::InvalidParameter("need >= 2 chains and samples >= chains".into()));
    }
    let eps = config.epsilon();
    let n = config.n_slices;
    // per-slice proposal normalization c1 = integral |<zeta|zeta0>| d mu_k
    let c1 = (2.0 * k - 1.0) / (k - 1.0);
    let per_chain = samples / chains;
    let chain_means: Vec<Result<Complex64>> = (0..chains)
        .into_par_iter()
        .map(|chain| {
            let mut rng = ChaCha8Rng::seed_from_u64(
                config.seed ^ (chain as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let mut acc = CompensatedComplex::default();
            for _ in 0..per_chain {
                let mut weight = Complex64::new(1.0, 0.0);
                let mut prev = *label_initial;
                for _ in 1..n {
                    let z = sample_around(prev.zeta(), k, &mut rng);
                    let next = CSLabel::from_zeta(z)?;
                    let ovl = overlap(&next, &prev, osc);
                    let hk = hk_energy_function(&next, &prev, osc)?;
                    // kernel / proposal density = c1 phase(overlap) e^{-i eps H_k}
                    weight *= c1 * (ovl / ovl.norm()) * (-Complex64::i() * eps * hk).exp();
                    prev = next;
                }
                weight *= short_time_kernel(label_final, &prev, eps, osc)?;
                acc.add(weight);
            }
            Ok(acc.value() / per_chain as f64)
        })
        .collect();
    let mut means = Vec::with_capacity(chains);
    for m in chain_means {
        means.push(m?);
    }
    let mean = means.iter().sum::<Complex64>() / chains as f64;
    let var: f64 = means.iter().map(|m| (m - mean).norm_sqr()).sum::<f64>()
        / (chains as f64 * (chains as f64 - 1.0));
    let std_error = var.sqrt();
    if let Some(b) = budget {
        if std_error > b {
            return Err(Error::McBudgetExceeded { stderr: std_error, budget: b });
        }
    }
    Ok(ComposeResult { value: mean, std_error: Some(std_error), n_slices: n })
}

/// N-fold composition of short-time kernels against the hyperbolic measure;
/// converges to the exact propagator as N grows at fixed T.
pub fn compose_slices(
    label_final: &CSLabel,
    label_initial: &CSLabel,
    config: &SlicingConfig,
    osc: &Oscillator,
) -> Result<ComposeResult> {
    if config.n_slices == 0 || !(config.total_time.is_finite()) {
        return Err(Error::InvalidParameter("need n_slices >= 1 and finite total_time".into()));
    }
    match config.scheme {
        Scheme::Deterministic => Ok(ComposeResult {
            value: compose_deterministic(label_final, label_initial, config, osc)?,
            std_error: None,
            n_slices: config.n_slices,
        }),
        Scheme::MonteCarlo { samples, chains, budget } => compose_monte_carlo(
            label_final,
            label_initial,
            config,
            osc,
            samples,
            chains,
            budget,
        ),
    }
}

/// Classical Lagrangian L_k = i k (z* ż - z ż*)/(1-|z|²) - H_k(z*, z),
/// real for conjugate-consistent velocities (ħ = 1).
pub fn lagrangian(label: &CSLabel, zeta_dot: Complex64, osc: &Oscillator) -> Result<f64> {
    let k = osc.bargmann_k();
    let z = label.zeta();
    let kinetic = -2.0 * k * (z.conj() * zeta_dot).im / (1.0 - z.norm_sqr());
    Ok(kinetic - hk_energy_function(label, label, osc)?.re)
}

const WIRTINGER_STEP: f64 = 1e-6;

fn wirtinger(f: &dyn Fn(Complex64) -> Complex64, z: Complex64) -> (Complex64, Complex64) {
    let h = WIRTINGER_STEP;
    let dx = (f(z + h) - f(z - h)) / (2.0 * h);
    let dy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h))) / (2.0 * h);
    let d_z = 0.5 * (dx - Complex64::i() * dy);
    let d_zbar = 0.5 * (dx + Complex64::i() * dy);
    (d_z, d_zbar)
}

/// Poisson bracket {A, B} = (1-|z|²)²/(2ik) (∂A/∂z ∂B/∂z* - ∂A/∂z* ∂B/∂z),
/// with Wirtinger derivatives taken by central differences (step 1e-6).
pub fn poisson_bracket(
    a: &dyn Fn(Complex64) -> Complex64,
    b: &dyn Fn(Complex64) -> Complex64,
    at: &CSLabel,
    osc: &Oscillator,
) -> Result<Complex64> {
    let z = at.zeta();
    if z.norm() + 2.0 * WIRTINGER_STEP >= 1.0 {
        return Err(Error::DifferentiationStep { radius: z.norm() });
    }
    let (az, azb) = wirtinger(a, z);
    let (bz, bzb) = wirtinger(b, z);
    let pref = (1.0 - z.norm_sqr()).powi(2) / (2.0 * Complex64::i() * osc.bargmann_k());
    Ok(pref * (az * bzb - azb * bz))
}

/// Trajectory samples of the classical flow.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    /// H_k(tau) = 2 k omega0 cosh(tau) along the flow.
    pub energies: Vec<f64>,
}

/// Hamiltonian right-hand side in (tau, phi): the zeta-space flow
/// ż = (1-|z|²)²/(2ik) ∂H_k/∂z* with the exact Wirtinger gradient
/// ∂H_k/∂z* = 4 k omega0 z / (1-|z|²)², pushed through the coordinate
/// change z = -tanh(tau/2) e^{-i phi}.
fn hamilton_rhs(tau: f64, phi: f64, osc: &Oscillator) -> (f64, f64) {
    if tau < 1e-12 {
        // fixed point of the flow; phi is undefined at the origin
        return (0.0, 0.0);
    }
    let k = osc.bargmann_k();
    let w0 = osc.omega0();
    let z = -Complex64::from_polar((0.5 * tau).tanh(), -phi);
    let one_minus = 1.0 - z.norm_sqr();
    let dh_dzbar = 4.0 * k * w0 * z / (one_minus * one_minus);
    let zdot = one_minus * one_minus / (2.0 * Complex64::i() * k) * dh_dzbar;
    // orthogonal coordinate frame of the (tau, phi) chart
    let sech2 = 1.0 / (0.5 * tau).cosh().powi(2);
    let e_tau = -0.5 * sech2 * Complex64::from_polar(1.0, -phi);
    let e_phi = Complex64::i() * (0.5 * tau).tanh() * Complex64::from_polar(1.0, -phi);
    let tau_dot = (zdot * e_tau.conj()).re / e_tau.norm_sqr();
    let phi_dot = (zdot * e_phi.conj()).re / e_phi.norm_sqr();
    (tau_dot, phi_dot)
}

/// Fixed-step RK4 integration of the classical equations in (tau, phi)
/// coordinates; phi is kept unwrapped.
pub fn integrate_trajectory(
    initial: PhasePoint,
    total_time: f64,
    steps: usize,
    osc: &Oscillator,
) -> Result<Trajectory> {
    if steps == 0 || !total_time.is_finite() {
        return Err(Error::InvalidParameter("need steps >= 1 and finite time".into()));
    }
    let h = total_time / steps as f64;
    let mut tau = initial.tau;
    let mut phi = initial.phi;
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    let k = osc.bargmann_k();
    let w0 = osc.omega0();
    for i in 0..=steps {
        times.push(i as f64 * h);
        points.push(PhasePoint { tau, phi });
        energies.push(2.0 * k * w0 * tau.cosh());
        if i == steps {
            break;
        }
        let (k1t, k1p) = hamilton_rhs(tau, phi, osc);
        let (k2t, k2p) = hamilton_rhs(tau + 0.5 * h * k1t, phi + 0.5 * h * k1p, osc);
        let (k3t, k3p) = hamilton_rhs(tau + 0.5 * h * k2t, phi + 0.5 * h * k2p, osc);
        let (k4t, k4p) = hamilton_rhs(tau + h * k3t, phi + h * k3p, osc);
        tau += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
        phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    Ok(Trajectory { times, points, energies })
}

/// Action ∮ p dphi along the sampled trajectory (trapezoid in phi).
pub fn action_integral(traj: &Trajectory) -> f64 {
    let mut acc = crate::numerics::CompensatedSum::default();
    for pair in traj.points.windows(2) {
        let p_mid = 0.5 * (pair[0].momentum() + pair[1].momentum());
        acc.add(p_mid * (pair[1].phi - pair[0].phi));
    }
    acc.value()
}

/// Quantized energy from the Bohr-Sommerfeld rule ∮ p dphi = 2 pi n / k:
/// p = n/k and E = 2 omega0 k (p + 1) = omega0 (2n + alpha + nu), which is
/// the exact spectrum.
pub fn bohr_sommerfeld_energy(n: u32, osc: &Oscillator) -> f64 {
    let k = osc.bargmann_k();
    let p = n as f64 / k;
    2.0 * osc.omega0() * k * (p + 1.0)
}
