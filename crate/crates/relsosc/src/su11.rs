//! Truncated matrix realization of the su(1,1) algebra in the energy
//! eigenbasis: K0 = diag(n + k), K- with superdiagonal k_n, K+ its adjoint.
//! Serves as an exact finite-dimensional oracle for commutators, the Casimir
//! invariant and coherent-state matrix elements.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Oscillator;

/// N x N complex matrix in the energy eigenbasis.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub mat: Array2<Complex64>,
}

impl TruncatedOperator {
    pub fn zeros(dim: usize) -> Self {
        TruncatedOperator { dim, mat: Array2::zeros((dim, dim)) }
    }

    pub fn dagger(&self) -> Self {
        let mut out = Array2::zeros((self.dim, self.dim));
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[[i, j]] = self.mat[[j, i]].conj();
            }
        }
        TruncatedOperator { dim: self.dim, mat: out }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        TruncatedOperator { dim: self.dim, mat: self.mat.dot(&other.mat) }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        TruncatedOperator {
            dim: self.dim,
            mat: self.mat.dot(&other.mat) - other.mat.dot(&self.mat),
        }
    }

    /// Max row sum of absolute values over the given index range.
    pub fn inf_norm_block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> f64 {
        let mut best = 0.0f64;
        for i in rows {
            let mut row = 0.0;
            for j in cols.clone() {
                row += self.mat[[i, j]].norm();
            }
            best = best.max(row);
        }
        best
    }

    pub fn apply(&self, v: &Array1<Complex64>) -> Array1<Complex64> {
        self.mat.dot(v)
    }
}

/// The three generators truncated to dimension N.
#[derive(Debug, Clone)]
pub struct Generators {
    pub k0: TruncatedOperator,
    pub kplus: TruncatedOperator,
    pub kminus: TruncatedOperator,
}

/// Builds K0, K+, K- from the Bargmann index and ladder coefficients:
/// K0|n> = (n+k)|n>, K-|n> = k_n|n-1>, K+|n> = k_{n+1}|n+1>.
pub fn build_generators(osc: &Oscillator, n: usize) -> Result<Generators> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("truncation N must be >= 3, got {n}")));
    }
    let k = osc.bargmann_k();
    let mut k0 = TruncatedOperator::zeros(n);
    let mut kplus = TruncatedOperator::zeros(n);
    let mut kminus = TruncatedOperator::zeros(n);
    for i in 0..n {
        k0.mat[[i, i]] = Complex64::new(i as f64 + k, 0.0);
        if i + 1 < n {
            let kn = osc.ladder_coefficient(i as u32 + 1);
            kminus.mat[[i, i + 1]] = Complex64::new(kn, 0.0);
            kplus.mat[[i + 1, i]] = Complex64::new(kn, 0.0);
        }
    }
    Ok(Generators { k0, kplus, kminus })
}

/// Deviations of the truncated generators from the su(1,1) relations
/// [K0, K±] = ±K±, [K-, K+] = 2 K0.
#[derive(Debug, Clone, Copy)]
pub struct CommutatorReport {
    /// Max deviation over the interior block (indices < N-1).
    pub interior: f64,
    /// Max deviation once the truncation edge is included; O(k_N²) by design.
    pub with_edge: f64,
}

pub fn check_commutators(gen: &Generators) -> CommutatorReport {
    let n = gen.k0.dim;
    let mut d_plus = gen.k0.commutator(&gen.kplus);
    let mut d_minus = gen.k0.commutator(&gen.kminus);
    let mut d_mp = gen.kminus.commutator(&gen.kplus);
    d_plus.mat -= &gen.kplus.mat;
    d_minus.mat += &gen.kminus.mat;
    d_mp.mat -= &(gen.k0.mat.mapv(|z| 2.0 * z));
    let interior = d_plus
        .inf_norm_block(0..n - 1, 0..n - 1)
        .max(d_minus.inf_norm_block(0..n - 1, 0..n - 1))
        .max(d_mp.inf_norm_block(0..n - 1, 0..n - 1));
    let with_edge = d_plus
        .inf_norm_block(0..n, 0..n)
        .max(d_minus.inf_norm_block(0..n, 0..n))
        .max(d_mp.inf_norm_block(0..n, 0..n));
    CommutatorReport { interior, with_edge }
}

/// Casimir K0² - (K+K- + K-K+)/2 per basis state.
#[derive(Debug, Clone)]
pub struct CasimirReport {
    pub diagonal: Vec<Complex64>,
    /// Max |off-diagonal| entry of the Casimir matrix.
    pub max_offdiag: f64,
    /// Max |diag - k(k-1)| over the interior (indices < N-1).
    pub interior_deviation: f64,
}

pub fn casimir(gen: &Generators, k: f64) -> CasimirReport {
    let n = gen.k0.dim;
    let sym = gen.kplus.matmul(&gen.kminus).mat + gen.kminus.matmul(&gen.kplus).mat;
    let cas = gen.k0.matmul(&gen.k0).mat - sym.mapv(|z| 0.5 * z);
    let target = Complex64::new(k * (k - 1.0), 0.0);
    let mut max_offdiag = 0.0f64;
    let mut interior_dev = 0.0f64;
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                max_offdiag = max_offdiag.max(cas[[i, j]].norm());
            }
        }
        diagonal.push(cas[[i, i]]);
        if i < n - 1 {
            interior_dev = interior_dev.max((cas[[i, i]] - target).norm());
        }
    }
    CasimirReport { diagonal, max_offdiag, interior_deviation: interior_dev }
}

/// exp(M) v by repeated Taylor steps with the argument scaled so each step
/// has norm <= 1; exact enough for the bidiagonal displacement generators
/// used here.
pub fn expm_action(m: &Array2<Complex64>, v: &Array1<Complex64>) -> Array1<Complex64> {
    let norm1 = m
        .columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let steps = norm1.ceil().max(1.0) as usize;
    let scaled = m.mapv(|z| z / steps as f64);
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for j in 1..80 {
            term = scaled.dot(&term).mapv(|z| z / j as f64);
            let tn: f64 = term.iter().map(|z| z.norm()).sum();
            acc += &term;
            if tn < 1e-18 * acc.iter().map(|z| z.norm()).sum::<f64>() {
                break;
            }
        }
        out = acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn generator_structure() {
        let osc = Oscillator::new(0.5, 0.25).unwrap();
        let gen = build_generators(&osc, 10).unwrap();
        let k = osc.bargmann_k();
        // (K0)_00 = k
        assert_relative_eq!(gen.k0.mat[[0, 0]].re, k, max_relative = 1e-14);
        // (K-)_01 = k_1 = sqrt(alpha + nu)
        assert_relative_eq!(
            gen.kminus.mat[[0, 1]].re,
            (2.0 * k).sqrt(),
            max_relative = 1e-14
        );
        // K+ is the conjugate transpose of K-
        let dag = gen.kminus.dagger();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(gen.kplus.mat[[i, j]], dag.mat[[i, j]]);
            }
        }
        assert!(build_generators(&osc, 2).is_err());
    }

    #[test]
    fn commutators_close_on_interior() {
        for (w0, g0) in [(0.5, 0.25), (0.5, 1.0)] {
            let osc = Oscillator::new(w0, g0).unwrap();
            for n in [10usize, 64] {
                let gen = build_generators(&osc, n).unwrap();
                let rep = check_commutators(&gen);
                assert!(rep.interior < 1e-12, "({w0},{g0}) N={n}: {}", rep.interior);
                // edge row carries the O(k_N²) truncation artifact
                assert!(rep.with_edge > 1.0, "edge deviation should be large");
            }
        }
    }

    #[test]
    fn k0_commutes_with_itself() {
        let osc = Oscillator::new(0.5, 0.25).unwrap();
        let gen = build_generators(&osc, 8).unwrap();
        let self_comm = gen.k0.commutator(&gen.k0);
        assert_eq!(self_comm.inf_norm_block(0..8, 0..8), 0.0);
    }

    #[test]
    fn casimir_is_k_km1() {
        for (w0, g0) in [(0.5, 0.25), (0.5, 1.0)] {
            let osc = Oscillator::new(w0, g0).unwrap();
            let k = osc.bargmann_k();
            let gen = build_generators(&osc, 64).unwrap();
            let rep = casimir(&gen, k);
            assert!(rep.interior_deviation < 1e-12, "({w0},{g0}): {}", rep.interior_deviation);
            assert!(rep.max_offdiag < 1e-12);
            assert_relative_eq!(rep.diagonal[5].re, k * (k - 1.0), max_relative = 1e-13);
        }
    }

    #[test]
    fn expm_action_matches_diagonal_exponential() {
        let mut m = Array2::<Complex64>::zeros((4, 4));
        for i in 0..4 {
            m[[i, i]] = Complex64::new(0.0, -(i as f64) * 0.7);
        }
        let v = Array1::from_vec(vec![Complex64::new(1.0, 0.0); 4]);
        let got = expm_action(&m, &v);
        for i in 0..4 {
            let want = (Complex64::new(0.0, -(i as f64) * 0.7)).exp();
            assert!((got[i] - want).norm() < 1e-14);
        }
    }
}
