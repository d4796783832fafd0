//! Analytic entanglement eigenvalues.
//!
//! Symmetric states and their superpositions are maximized over identical
//! single-qubit factors `cos t |0> + sin t |1>`. For the three-qubit families
//! the stationarity condition in `t = tan(theta)` is a cubic, solved for all
//! real roots; the overlap is then compared across every admissible root.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GmeError, Result};
use crate::hartree::{symmetric_coefficients, symmetric_overlap};
use crate::optimize::{maximize_1d, maximize_2d};
use crate::poly::{eval, real_roots};
use crate::states::{binom, check_simplex, gw_state, ln_factorial};

/// `base^exp` with `0^0 = 1`.
fn pow0(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.powf(exp)
    }
}

/// Entanglement eigenvalue of `|S(n,k)>`.
pub fn lambda_symmetric(n: usize, k: usize) -> Result<f64> {
    if n == 0 || k > n {
        return Err(GmeError::OutOfRange {
            what: "need n >= 1 and 0 <= k <= n",
            value: k as f64,
        });
    }
    let nf = n as f64;
    let (kf, rest) = (k as f64, (n - k) as f64);
    Ok(binom(n, k).sqrt() * pow0(kf / nf, kf / 2.0) * pow0(rest / nf, rest / 2.0))
}

/// Entanglement eigenvalue of the symmetric qudit state with occupations `counts`.
pub fn lambda_symmetric_qudit(n: usize, counts: &[usize]) -> Result<f64> {
    let sum: usize = counts.iter().sum();
    if sum != n {
        return Err(GmeError::CountMismatch {
            expected: n,
            actual: sum,
        });
    }
    let nf = n as f64;
    let log_multinomial = ln_factorial(n) - counts.iter().map(|&k| ln_factorial(k)).sum::<f64>();
    let product: f64 = counts
        .iter()
        .map(|&k| pow0(k as f64 / nf, k as f64 / 2.0))
        .product();
    Ok((0.5 * log_multinomial).exp() * product)
}

/// `Lambda^2` of the n-party determinant state: `1/n!`.
pub fn det_lambda_squared(n: usize) -> f64 {
    (-ln_factorial(n)).exp()
}

/// `Lambda^2` of the generalized determinant state: `1/(d^p)!`.
pub fn det_lambda_squared_generalized(d: usize, p: usize) -> f64 {
    let blocks = (d as f64).powi(p as i32);
    if blocks > 1e6 {
        return 0.0;
    }
    det_lambda_squared(blocks as usize)
}

/// Stationarity cubic in `t = tan(theta)` and the overlap at its roots.
#[derive(Clone, Debug, Serialize)]
pub struct CubicSolution {
    /// Descending powers.
    pub coefficients: [f64; 4],
    pub real_roots: Vec<f64>,
    /// Candidates `t >= 0` with the overlap at each.
    pub admissible: Vec<(f64, f64)>,
    pub chosen_t: f64,
}

impl CubicSolution {
    fn solve<F: Fn(f64) -> f64>(coefficients: [f64; 4], lambda: F, include_origin: bool) -> (Self, f64) {
        let roots = real_roots(&coefficients);
        let mut admissible: Vec<(f64, f64)> = roots
            .iter()
            .filter(|&&t| t >= -1e-12)
            .map(|&t| {
                let t = t.max(0.0);
                (t, lambda(t))
            })
            .collect();
        if include_origin && !admissible.iter().any(|&(t, _)| t == 0.0) {
            admissible.insert(0, (0.0, lambda(0.0)));
        }
        let (chosen_t, best) = admissible
            .iter()
            .cloned()
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
        (
            Self {
                coefficients,
                real_roots: roots,
                admissible,
                chosen_t,
            },
            best,
        )
    }

    /// Largest `|cubic(t)|` over the listed real roots.
    pub fn max_residual(&self) -> f64 {
        self.real_roots
            .iter()
            .map(|&t| eval(&self.coefficients, t).abs())
            .fold(0.0, f64::max)
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(GmeError::ParamOutOfRange { name, value: v });
    }
    Ok(())
}

/// Overlap of `sqrt(s)|W> + sqrt(1-s)|W~>` with `(cos|0> + sin|1>)^3` at
/// `t = tan(theta)`.
pub fn ww_overlap(s: f64, t: f64) -> f64 {
    let theta = t.atan();
    let (sn, cs) = theta.sin_cos();
    0.75f64.sqrt() * (2.0 * theta).sin() * (s.sqrt() * cs + (1.0 - s).sqrt() * sn)
}

/// Entanglement eigenvalue of `sqrt(s)|W> + sqrt(1-s) e^{i phi}|W~>`
/// (independent of `phi`).
pub fn ww_lambda(s: f64) -> Result<(CubicSolution, f64)> {
    check_unit("s", s)?;
    let (a, b) = ((1.0 - s).sqrt(), s.sqrt());
    Ok(CubicSolution::solve([a, 2.0 * b, -2.0 * a, -b], |t| ww_overlap(s, t), false))
}

/// Entanglement eigenvalue of `sqrt(r)|S(n,k1)> + sqrt(1-r) e^{i phi}|S(n,k2)>`.
pub fn ss_lambda(n: usize, k1: usize, k2: usize, r: f64) -> Result<f64> {
    if k1 == k2 {
        return Err(GmeError::BadIndices(k1));
    }
    if k1 > n || k2 > n {
        return Err(GmeError::OutOfRange {
            what: "k must satisfy 0 <= k <= n",
            value: k1.max(k2) as f64,
        });
    }
    check_unit("r", r)?;
    let f = |k: usize, th: f64| {
        let (sn, cs) = th.sin_cos();
        binom(n, k).sqrt() * cs.powi(k as i32) * sn.powi((n - k) as i32)
    };
    let (sr, sq) = (r.sqrt(), (1.0 - r).sqrt());
    Ok(maximize_1d(|th| sr * f(k1, th) + sq * f(k2, th), 0.0, std::f64::consts::FRAC_PI_2, 4096, 1e-12).1)
}

/// `E_sin2` of `sqrt(s)|GHZ> + sqrt(1-s) e^{i phi}|W>`.
pub fn gw_entanglement(s: f64, phi: f64) -> Result<f64> {
    check_unit("s", s)?;
    if !phi.is_finite() {
        return Err(GmeError::ParamOutOfRange { name: "phi", value: phi });
    }
    let coeff: Vec<Complex64> = symmetric_coefficients(&gw_state(s, phi)?)?;
    let (_, lambda) = maximize_2d(
        |t, d| symmetric_overlap(&coeff, t, d),
        (0.0, std::f64::consts::FRAC_PI_2),
        (0.0, 2.0 * std::f64::consts::PI),
        512,
        1e-12,
    );
    Ok(1.0 - lambda.min(1.0).powi(2))
}

/// Overlap of `psi(x,y)` with `(cos|0> + sin|1>)^3` at `t = tan(theta)`.
pub fn ghzw_overlap(x: f64, y: f64, t: f64) -> f64 {
    let z = (1.0 - x - y).max(0.0);
    let (a, b, c) = ((x / 2.0).sqrt(), (3.0 * y).sqrt(), (3.0 * z).sqrt());
    (a * (1.0 + t.powi(3)) + b * t + c * t * t) / (1.0 + t * t).powf(1.5)
}

/// Entanglement eigenvalue of `sqrt(x)|GHZ> + sqrt(y)|W> + sqrt(1-x-y)|W~>`.
/// The `theta = 0` endpoint (`t = 0`, equal in value to `t -> infinity`) is
/// always a candidate alongside the non-negative roots.
pub fn ghzw_pure_lambda(x: f64, y: f64) -> Result<(CubicSolution, f64)> {
    check_simplex(x, y)?;
    let z = (1.0 - x - y).max(0.0);
    let (a, b, c) = ((x / 2.0).sqrt(), (3.0 * y).sqrt(), (3.0 * z).sqrt());
    let coefficients = [-c, 3.0 * a - 2.0 * b, 2.0 * c - 3.0 * a, b];
    let (sol, lambda) = CubicSolution::solve(coefficients, |t| ghzw_overlap(x, y, t), true);
    Ok((sol, lambda.min(1.0)))
}
