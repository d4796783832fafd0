//! Numerical checks of claims that are plausible but not proved: symmetric
//! states have symmetric closest product states, and the least entangled
//! preimages of the twirled families have non-negative amplitudes.

use gme_core::closed_forms::ww_lambda;
use gme_core::convexify::symmetric_mixture_entanglement;
use gme_core::ghz_w_family::{e_psi, phase_scan};
use gme_core::hartree::{entanglement_eigenvalue, symmetric_ansatz_lambda};
use gme_core::random::{complex_gaussian, rng};
use gme_core::states::{symmetric_state, w_state, w_tilde_state};
use gme_core::{Complex64, PureState, SolverOptions};
use rand::Rng;

fn random_symmetric(n: usize, seed: u64) -> PureState {
    let mut r = rng(seed, 0);
    let weights: Vec<Complex64> = (0..=n).map(|_| complex_gaussian(&mut r)).collect();
    let amps = (0..1usize << n).map(|i| weights[i.count_ones() as usize]).collect();
    PureState::new(vec![2; n], amps).unwrap()
}

#[test]
fn symmetric_ansatz_is_never_beaten() {
    let opts = SolverOptions::default();
    let mut worst = f64::NEG_INFINITY;
    for n in 3..=6 {
        for seed in 0..6 {
            let psi = random_symmetric(n, 100 * n as u64 + seed);
            let general = entanglement_eigenvalue(&psi, &opts).unwrap().lambda_max;
            let ansatz = symmetric_ansatz_lambda(&psi, 2).unwrap();
            assert!(general - ansatz <= 1e-8, "n={n} seed={seed}: solver {general} beats ansatz {ansatz}");
            worst = worst.max(general - ansatz);
        }
    }
    assert!(worst > -1e-7, "ansatz exceeds the solver by {}", -worst);
}

#[test]
fn phases_do_not_lower_ghz_w_entanglement() {
    let opts = SolverOptions {
        restarts: 6,
        ..SolverOptions::default()
    };
    let mut r = rng(77, 0);
    for _ in 0..20 {
        let (mut x, mut y): (f64, f64) = (r.random(), r.random());
        if x + y > 1.0 {
            (x, y) = (1.0 - x, 1.0 - y);
        }
        let (base, min_phase, at) = phase_scan(x, y, 6, &opts).unwrap();
        assert!((base - e_psi(x, y).unwrap()).abs() < 1e-15);
        assert!(min_phase >= base - 1e-8, "({x}, {y}): phases {at:?} give {min_phase} < {base}");
    }
}

#[test]
fn ww_mixture_matches_pure_curve() {
    for s in [0.1, 0.3, 0.5, 0.85] {
        let (_, l) = ww_lambda(s).unwrap();
        let mixed = symmetric_mixture_entanglement(3, &[0.0, 1.0 - s, s, 0.0]).unwrap();
        assert!((mixed - (1.0 - l * l)).abs() < 1e-6, "s={s}");
    }
}

/// `sqrt(s)|W> + e^{i phi} sqrt(1-s)|W~>`: the phase does not change the
/// entanglement, so the non-negative preimage is as good as any.
#[test]
fn ww_phase_is_irrelevant() {
    let opts = SolverOptions::default();
    let (w, wt) = (w_state(), w_tilde_state());
    for (s, phi) in [(0.3, 1.0), (0.6, 2.5), (0.5, std::f64::consts::PI)] {
        let amps = w
            .amplitudes()
            .iter()
            .zip(wt.amplitudes())
            .map(|(a, b)| a * f64::sqrt(s) + b * Complex64::from_polar((1.0 - s).sqrt(), phi))
            .collect();
        let psi = PureState::new(vec![2; 3], amps).unwrap();
        let (_, l) = ww_lambda(s).unwrap();
        let e = entanglement_eigenvalue(&psi, &opts).unwrap().e_sin2;
        assert!((e - (1.0 - l * l)).abs() < 1e-8);
    }
    assert_eq!(symmetric_state(3, 2).unwrap().max_abs_diff(&w), 0.0);
}
