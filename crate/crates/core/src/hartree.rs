//! Closest product state by alternating maximization.
//!
//! Each update replaces one factor by the normalized contraction of the state
//! against all other factors, which is the stationarity condition of the
//! overlap `|<phi|psi>|` with respect to that factor. The overlap after the
//! update equals the norm of the contraction, so it never decreases.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GmeError, Result};
use crate::optimize::{maximize_1d, maximize_2d};
use crate::random::{haar_vector, rng};
use crate::states::{binom, contract_except, CMatrix, Ensemble, ProductState, PureState, MIN_NORM};

pub const DEFAULT_SEED: u64 = 20_030_404;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub restarts: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            tol: 1e-12,
            max_sweeps: 10_000,
            seed: DEFAULT_SEED,
        }
    }
}

impl SolverOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(GmeError::ParamOutOfRange {
                name: "restarts",
                value: 0.0,
            });
        }
        if !(self.tol > 0.0) {
            return Err(GmeError::ParamOutOfRange {
                name: "tol",
                value: self.tol,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntanglementResult {
    pub lambda_max: f64,
    pub e_sin2: f64,
    pub e_log: f64,
    pub maximizer: ProductState,
    pub restarts_used: usize,
    pub sweeps: usize,
    pub converged: bool,
}

impl EntanglementResult {
    fn new(lambda: f64, maximizer: ProductState, restarts_used: usize, sweeps: usize, converged: bool) -> Self {
        let lambda = lambda.min(1.0);
        Self {
            lambda_max: lambda,
            e_sin2: 1.0 - lambda * lambda,
            e_log: -(lambda * lambda).ln(),
            maximizer,
            restarts_used,
            sweeps,
            converged,
        }
    }
}

/// Outcome of one alternating run from a fixed starting point.
#[derive(Clone, Debug)]
pub struct HopmRun {
    pub lambda: f64,
    pub factors: Vec<Vec<Complex64>>,
    pub sweeps: usize,
    pub converged: bool,
    /// Overlap after every sweep.
    pub history: Vec<f64>,
}

/// Runs alternating updates from `factors` until the overlap changes by less
/// than `tol` over a full sweep.
pub fn hopm_from(psi: &PureState, mut factors: Vec<Vec<Complex64>>, tol: f64, max_sweeps: usize) -> HopmRun {
    let n = psi.num_parties();
    let mut lambda = contract_except(psi, &factors, None)[0].norm();
    let mut history = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        let before = lambda;
        for i in 0..n {
            let v = contract_except(psi, &factors, Some(i));
            let nv = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if nv > MIN_NORM {
                factors[i] = v.into_iter().map(|c| c / nv).collect();
                lambda = nv;
            }
        }
        sweeps += 1;
        history.push(lambda);
        if (lambda - before).abs() < tol {
            converged = true;
            break;
        }
    }
    HopmRun {
        lambda,
        factors,
        sweeps,
        converged,
        history,
    }
}

/// Starting factors of restart `restart`: independent Haar vectors from a
/// counter-derived stream, so results do not depend on scheduling.
pub fn initial_factors(dims: &[usize], seed: u64, restart: usize) -> Vec<Vec<Complex64>> {
    let mut r = rng(seed, restart as u64);
    dims.iter().map(|&d| haar_vector(d, &mut r)).collect()
}

/// Largest overlap of `psi` with a product state, best of `opts.restarts`
/// seeded runs.
pub fn entanglement_eigenvalue(psi: &PureState, opts: &SolverOptions) -> Result<EntanglementResult> {
    opts.validate()?;
    if psi.num_parties() < 2 {
        return Err(GmeError::SingleParty);
    }
    let runs: Vec<HopmRun> = (0..opts.restarts)
        .into_par_iter()
        .map(|k| hopm_from(psi, initial_factors(psi.dims(), opts.seed, k), opts.tol, opts.max_sweeps))
        .collect();
    let converged = runs.iter().all(|r| r.converged);
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.lambda > a.lambda { b } else { a })
        .expect("at least one restart");
    let maximizer = ProductState::new(best.factors)?;
    Ok(EntanglementResult::new(best.lambda, maximizer, opts.restarts, best.sweeps, converged))
}

/// Largest Schmidt coefficient of a bipartite state.
pub fn schmidt_lambda(psi: &PureState) -> Result<f64> {
    let dims = psi.dims();
    if dims.len() != 2 {
        return Err(GmeError::NotBipartite(dims.len()));
    }
    let m = DMatrix::from_row_slice(dims[0], dims[1], psi.amplitudes());
    Ok(m.singular_values().max())
}

/// Amplitude per Hamming weight of a permutation-symmetric qubit state.
pub fn symmetric_coefficients(psi: &PureState) -> Result<Vec<Complex64>> {
    if psi.dims().iter().any(|&d| d != 2) {
        return Err(GmeError::NotSymmetric);
    }
    let n = psi.num_parties();
    let mut coeff: Vec<Option<Complex64>> = vec![None; n + 1];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        let w = i.count_ones() as usize;
        match coeff[w] {
            None => coeff[w] = Some(*a),
            Some(c) if (c - a).norm() > 1e-12 => return Err(GmeError::NotSymmetric),
            _ => {}
        }
    }
    Ok(coeff.into_iter().map(|c| c.unwrap_or_default()).collect())
}

/// `|<(cos t |0> + e^{i d} sin t |1>)^n | psi>|` for a symmetric state with
/// per-weight amplitudes `coeff` (weight = number of ones).
pub fn symmetric_overlap(coeff: &[Complex64], theta: f64, delta: f64) -> f64 {
    let n = coeff.len() - 1;
    let (s, c) = theta.sin_cos();
    let phase = Complex64::from_polar(1.0, -delta);
    let mut acc = Complex64::new(0.0, 0.0);
    for (w, a) in coeff.iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let mag = binom(n, w) * c.powi((n - w) as i32) * s.powi(w as i32);
        acc += a * phase.powi(w as i32) * mag;
    }
    acc.norm()
}

/// Maximum overlap with identical single-qubit factors. `params = 1` uses a
/// real factor `cos t |0> + sin t |1>`, `params = 2` adds a relative phase.
pub fn symmetric_ansatz_lambda(psi: &PureState, params: usize) -> Result<f64> {
    let coeff = symmetric_coefficients(psi)?;
    match params {
        1 => Ok(maximize_1d(|t| symmetric_overlap(&coeff, t, 0.0), 0.0, std::f64::consts::PI, 1024, 1e-12).1),
        2 => Ok(maximize_2d(
            |t, d| symmetric_overlap(&coeff, t, d),
            (0.0, std::f64::consts::FRAC_PI_2),
            (0.0, 2.0 * std::f64::consts::PI),
            1024,
            1e-12,
        )
        .1),
        p => Err(GmeError::ParamOutOfRange {
            name: "params",
            value: p as f64,
        }),
    }
}

/// Applies the Kraus operators `kraus` to one party of `psi`, returning the
/// post-measurement ensemble.
pub fn apply_unilocal_channel(psi: &PureState, kraus: &[CMatrix], party: usize) -> Result<Ensemble> {
    let n = psi.num_parties();
    if party >= n {
        return Err(GmeError::BadParty { party, parties: n });
    }
    let d = psi.dims()[party];
    let mut sum = CMatrix::zeros(d, d);
    for v in kraus {
        if v.nrows() != d || v.ncols() != d {
            return Err(GmeError::DimensionMismatch {
                expected: d,
                actual: v.nrows(),
            });
        }
        sum += v.adjoint() * v;
    }
    let dev = (sum - CMatrix::identity(d, d)).iter().map(|c| c.norm()).fold(0.0, f64::max);
    if dev > 1e-10 {
        return Err(GmeError::NotTracePreserving(dev));
    }
    let mut entries = Vec::new();
    for v in kraus {
        let out = psi.apply_local(party, v)?;
        let p: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        if p >= 1e-14 {
            entries.push((p, PureState::new(psi.dims().to_vec(), out)?));
        }
    }
    let total: f64 = entries.iter().map(|(p, _)| p).sum();
    entries.iter_mut().for_each(|(p, _)| *p /= total);
    Ensemble::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_pure_state, random_unitary};
    use crate::states::{determinant_state, ghz, symmetric_state, w_state, w_tilde_state};
    use proptest::prelude::*;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn canonical_eigenvalues() {
        let r = entanglement_eigenvalue(&w_state(), &opts()).unwrap();
        assert!((r.lambda_max - 2.0 / 3.0).abs() < 1e-9);
        assert!((r.e_sin2 - 5.0 / 9.0).abs() < 1e-9);
        assert!(r.converged);
        let r = entanglement_eigenvalue(&ghz(5).unwrap(), &opts()).unwrap();
        assert!((r.e_sin2 - 0.5).abs() < 1e-9);
        let r = entanglement_eigenvalue(&determinant_state(3).unwrap(), &opts()).unwrap();
        assert!((r.lambda_max.powi(2) - 1.0 / 6.0).abs() < 1e-9);
        let r = entanglement_eigenvalue(&symmetric_state(4, 2).unwrap(), &opts()).unwrap();
        assert!((r.e_sin2 - 0.625).abs() < 1e-9);
    }

    #[test]
    fn result_invariants() {
        let psi = w_tilde_state();
        let r = entanglement_eigenvalue(&psi, &opts()).unwrap();
        assert!((r.e_sin2 - (1.0 - r.lambda_max.powi(2))).abs() < 1e-14);
        assert!((r.e_log + r.lambda_max.powi(2).ln()).abs() < 1e-12);
        let ov = crate::states::overlap(&r.maximizer, &psi).unwrap().norm();
        assert!((ov - r.lambda_max).abs() < 1e-9);
    }

    #[test]
    fn single_party_rejected() {
        let psi = PureState::from_real(vec![3], &[1.0, 2.0, 0.0]).unwrap();
        assert!(matches!(entanglement_eigenvalue(&psi, &opts()), Err(GmeError::SingleParty)));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let psi = random_pure_state(&[2, 3, 2], &mut rng(3, 0)).unwrap();
        let a = entanglement_eigenvalue(&psi, &opts()).unwrap();
        let b = entanglement_eigenvalue(&psi, &opts()).unwrap();
        assert_eq!(a.lambda_max.to_bits(), b.lambda_max.to_bits());
        assert_eq!(a.maximizer, b.maximizer);
    }

    #[test]
    fn schmidt_values() {
        let p: f64 = 0.7;
        let psi = PureState::from_real(vec![2, 2], &[p.sqrt(), 0.0, 0.0, (1.0 - p).sqrt()]).unwrap();
        assert!((schmidt_lambda(&psi).unwrap() - p.sqrt()).abs() < 1e-14);
        let bell = PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((schmidt_lambda(&bell).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        let prod = PureState::basis(&[2, 2], &[0, 1]).unwrap();
        assert!((schmidt_lambda(&prod).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(schmidt_lambda(&w_state()), Err(GmeError::NotBipartite(3))));
    }

    #[test]
    fn symmetric_ansatz_values() {
        assert!((symmetric_ansatz_lambda(&w_state(), 1).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((symmetric_ansatz_lambda(&ghz(5).unwrap(), 1).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        let l72 = 21f64.sqrt() * (2.0f64 / 7.0) * (5.0f64 / 7.0).powf(2.5);
        assert!((symmetric_ansatz_lambda(&symmetric_state(7, 2).unwrap(), 1).unwrap() - l72).abs() < 1e-12);
        assert!((symmetric_ansatz_lambda(&w_state(), 2).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let asym = PureState::basis(&[2, 2, 2], &[0, 0, 1]).unwrap();
        assert!(matches!(symmetric_ansatz_lambda(&asym, 1), Err(GmeError::NotSymmetric)));
    }

    #[test]
    fn channels() {
        let psi = w_state();
        let id = vec![CMatrix::identity(2, 2)];
        let e = apply_unilocal_channel(&psi, &id, 0).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e.entries()[0].0 - 1.0).abs() < 1e-15);
        let mut p0 = CMatrix::zeros(2, 2);
        p0[(0, 0)] = Complex64::new(1.0, 0.0);
        let mut p1 = CMatrix::zeros(2, 2);
        p1[(1, 1)] = Complex64::new(1.0, 0.0);
        let e = apply_unilocal_channel(&ghz(3).unwrap(), &[p0.clone(), p1], 0).unwrap();
        assert_eq!(e.len(), 2);
        assert!((e.entries()[0].0 - 0.5).abs() < 1e-15);
        assert!((e.entries()[0].1.amplitudes()[0].re - 1.0).abs() < 1e-15);
        assert!((e.entries()[1].1.amplitudes()[7].re - 1.0).abs() < 1e-15);
        assert!(matches!(
            apply_unilocal_channel(&psi, &[p0], 0),
            Err(GmeError::NotTracePreserving(_))
        ));
    }

    #[test]
    fn ascent_is_monotone() {
        let mut r = rng(11, 0);
        for k in 0..20 {
            let psi = random_pure_state(&[2, 3, 2, 2], &mut r).unwrap();
            let run = hopm_from(&psi, initial_factors(psi.dims(), 5, k), 1e-14, 500);
            for w in run.history.windows(2) {
                assert!(w[1] >= w[0] - 1e-13);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn solver_matches_schmidt(seed in 0u64..10_000, d1 in 2usize..=5, d2 in 2usize..=5) {
            let psi = random_pure_state(&[d1, d2], &mut rng(seed, 0)).unwrap();
            let r = entanglement_eigenvalue(&psi, &opts()).unwrap();
            prop_assert!((r.lambda_max - schmidt_lambda(&psi).unwrap()).abs() < 1e-8);
        }

        #[test]
        fn local_unitaries_leave_lambda_unchanged(seed in 0u64..10_000) {
            let mut r = rng(seed, 1);
            let psi = random_pure_state(&[2, 2, 2], &mut r).unwrap();
            let mut rotated = psi.clone();
            for party in 0..3 {
                rotated = rotated.apply_local_unitary(party, &random_unitary(2, &mut r)).unwrap();
            }
            let a = entanglement_eigenvalue(&psi, &opts()).unwrap().lambda_max;
            let b = entanglement_eigenvalue(&rotated, &opts()).unwrap().lambda_max;
            prop_assert!((a - b).abs() < 1e-8);
        }
    }
}
