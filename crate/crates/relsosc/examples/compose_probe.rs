//! Scratch probe for slice-composition behavior (not part of the library).

use num_complex::Complex64;
use relsosc::coherent::{
    hk_energy_function, overlap, propagator_closed, CSLabel, PropagatorForm,
};
use relsosc::model::Oscillator;
use relsosc::numerics::quad::{CompensatedComplex, QuadratureRule};

fn disc_grid(
    osc: &Oscillator,
    graded: bool,
    panels: usize,
    nodes: usize,
    angular: usize,
) -> (Vec<CSLabel>, Vec<f64>) {
    let k = osc.bargmann_k();
    let radial = if graded {
        QuadratureRule::unit_disc_radial(panels, nodes)
    } else {
        let mut all_nodes = Vec::new();
        let mut all_weights = Vec::new();
        for p in 0..panels {
            let r = QuadratureRule::finite(p as f64 / panels as f64, (p + 1) as f64 / panels as f64, nodes);
            all_nodes.extend(r.nodes);
            all_weights.extend(r.weights);
        }
        QuadratureRule {
            nodes: all_nodes,
            weights: all_weights,
            domain: relsosc::numerics::quad::DomainTag::UnitDiscRadial,
        }
    };
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    for (u, w) in radial.nodes.iter().zip(&radial.weights) {
        let base = w * 0.5 * (2.0 * k - 1.0) / std::f64::consts::PI / ((1.0 - u) * (1.0 - u));
        for j in 0..angular {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / angular as f64;
            labels.push(CSLabel::from_zeta(Complex64::from_polar(u.sqrt(), theta)).unwrap());
            weights.push(base * 2.0 * std::f64::consts::PI / angular as f64);
        }
    }
    (labels, weights)
}

fn kernel(form: u8, to: &CSLabel, from: &CSLabel, eps: f64, osc: &Oscillator) -> Complex64 {
    let hk = hk_energy_function(to, from, osc).unwrap();
    let ovl = overlap(to, from, osc);
    match form {
        0 => ovl * (-Complex64::i() * eps * hk).exp(),
        1 => ovl * (Complex64::new(1.0, 0.0) - Complex64::i() * eps * hk),
        // clamped modulus growth: |e^{-i eps H}| <= e^1
        _ => ovl * Complex64::from_polar((eps * hk.im).min(1.0).exp(), -eps * hk.re),
    }
}

fn compose(
    form: u8,
    lf: &CSLabel,
    li: &CSLabel,
    n: usize,
    t: f64,
    osc: &Oscillator,
    grid: &(Vec<CSLabel>, Vec<f64>),
) -> Complex64 {
    let eps = t / n as f64;
    let (labels, weights) = grid;
    match n {
        1 => kernel(form, lf, li, eps, osc),
        2 => {
            let mut acc = CompensatedComplex::default();
            for (l, w) in labels.iter().zip(weights) {
                acc.add(*w * kernel(form, lf, l, eps, osc) * kernel(form, l, li, eps, osc));
            }
            acc.value()
        }
        3 => {
            let a: Vec<Complex64> = labels
                .iter()
                .zip(weights)
                .map(|(l, w)| *w * kernel(form, lf, l, eps, osc))
                .collect();
            let c: Vec<Complex64> = labels
                .iter()
                .zip(weights)
                .map(|(l, w)| *w * kernel(form, l, li, eps, osc))
                .collect();
            let mut acc = CompensatedComplex::default();
            for p in 0..labels.len() {
                let mut row = CompensatedComplex::default();
                for q in 0..labels.len() {
                    row.add(kernel(form, &labels[p], &labels[q], eps, osc) * c[q]);
                }
                acc.add(a[p] * row.value());
            }
            acc.value()
        }
        _ => unreachable!(),
    }
}

fn main() {
    let osc = Oscillator::new(0.5, 1.0).unwrap();
    let lf = CSLabel::from_zeta(Complex64::from_polar(0.2, -0.3)).unwrap();
    let li = CSLabel::from_zeta(Complex64::from_polar(0.3, 0.4)).unwrap();
    let t = 0.2 / osc.omega0();
    let exact = propagator_closed(&lf, &li, t, &osc, PropagatorForm::SpectralConsistent);
    println!("exact = {exact}");

    let graded_coarse = disc_grid(&osc, true, 14, 10, 48);
    let graded_fine = disc_grid(&osc, true, 17, 12, 96);
    for wt in [0.2, 0.3] {
        let t = wt / osc.omega0();
        let exact = propagator_closed(&lf, &li, t, &osc, PropagatorForm::SpectralConsistent);
        println!("clamped kernel, graded grid, omega0 T = {wt}:");
        for n in 1..=3usize {
            let vc = compose(2, &lf, &li, n, t, &osc, &graded_coarse);
            let vf = compose(2, &lf, &li, n, t, &osc, &graded_fine);
            println!(
                "  N={n}: coarse dev {:.6e}  fine dev {:.6e}  grid shift {:.3e}",
                (vc - exact).norm(),
                (vf - exact).norm(),
                (vc - vf).norm()
            );
        }
    }
}
