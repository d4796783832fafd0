//! Mixed-state geometric entanglement for two qubits, Werner and isotropic
//! states.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GmeError, Result};
use crate::states::{CMatrix, DensityMatrix};

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(GmeError::BadShape(format!("expected 2 x 2, got {:?}", rho.dims())));
    }
    Ok(())
}

fn spin_flip() -> CMatrix {
    let i = Complex64::i();
    let z = Complex64::new(0.0, 0.0);
    let sy = Matrix2::new(z, -i, i, z);
    CMatrix::from_fn(4, 4, |r, c| sy[(r / 2, c / 2)] * sy[(r % 2, c % 2)])
}

fn combine(mut mu: Vec<f64>) -> f64 {
    mu.sort_by(|a, b| b.total_cmp(a));
    mu.resize(4.max(mu.len()), 0.0);
    (mu[0] - mu[1..].iter().sum::<f64>()).clamp(0.0, 1.0)
}

/// Wootters concurrence. The `mu_i` are the singular values of
/// `tau = V^T (sy x sy) V`, where the columns of `V` are the subnormalized
/// eigenvectors `sqrt(p_i) e_i` of `rho`; eigenvalues below `1e-14` are
/// treated as exact zeros, so pure inputs give exact results.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let eig = nalgebra::linalg::SymmetricEigen::new(crate::states::hermitize(rho.matrix()));
    let cols: Vec<usize> = (0..4).filter(|&k| eig.eigenvalues[k] > 1e-14).collect();
    let v = CMatrix::from_fn(4, cols.len(), |r, c| {
        eig.eigenvectors[(r, cols[c])] * eig.eigenvalues[cols[c]].sqrt()
    });
    let tau = v.transpose() * spin_flip() * &v;
    Ok(combine(tau.singular_values().iter().cloned().collect()))
}

/// Concurrence from the spectrum of `rho (sy x sy) rho* (sy x sy)`, with
/// eigenvalues above `-1e-12` clipped to zero before the square root. Less
/// accurate than [`concurrence`] near rank-deficient states.
pub fn concurrence_product_spectrum(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let yy = spin_flip();
    let m = rho.matrix();
    let product = m * (&yy * m.conjugate() * &yy);
    let eig = product
        .schur()
        .eigenvalues()
        .ok_or_else(|| GmeError::InvalidDensity("Schur form did not converge".into()))?;
    let mu = eig
        .iter()
        .map(|z| if z.re < -1e-12 { 0.0 } else { z.re.max(0.0).sqrt() })
        .collect();
    Ok(combine(mu))
}

/// `(1 - sqrt(1 - C^2)) / 2`.
pub fn e_from_concurrence(c: f64) -> f64 {
    0.5 * (1.0 - (1.0 - c * c).max(0.0).sqrt())
}

/// `E` from the concurrence. For numerically pure `rho` (purity within
/// `1e-13` of one) `sqrt(1 - C^2)` is taken as the Bloch length of the
/// reduced state, which stays accurate near `C = 1`.
pub fn e_two_qubit(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    let purity: f64 = m.iter().map(|c| c.norm_sqr()).sum();
    if purity > 1.0 - 1e-13 {
        let a = |i: usize, j: usize| m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
        let bloch = ((a(0, 0) - a(1, 1)).re.powi(2) + 4.0 * a(0, 1).norm_sqr()).sqrt();
        return Ok(0.5 * (1.0 - bloch.min(1.0)));
    }
    Ok(e_from_concurrence(concurrence(rho)?))
}

pub fn e_werner(f: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&f) {
        return Err(GmeError::ParamOutOfRange { name: "f", value: f });
    }
    Ok(if f <= 0.0 { e_from_concurrence(f) } else { 0.0 })
}

fn check_iso(d: usize, fid: f64) -> Result<()> {
    if d < 2 {
        return Err(GmeError::ParamOutOfRange {
            name: "d",
            value: d as f64,
        });
    }
    if !(0.0..=1.0).contains(&fid) {
        return Err(GmeError::ParamOutOfRange { name: "F", value: fid });
    }
    Ok(())
}

/// Zero up to the separability threshold `F = 1/d`, the closed form beyond.
pub fn e_isotropic(d: usize, fid: f64) -> Result<f64> {
    check_iso(d, fid)?;
    let df = d as f64;
    if fid <= 1.0 / df {
        return Ok(0.0);
    }
    let s = fid.sqrt() + ((1.0 - fid) * (df - 1.0)).sqrt();
    Ok((1.0 - s * s / df).max(0.0))
}

/// Smallest pure-state entanglement at fidelity `F` with `|Phi+>`; meaningful
/// on `[1/d, 1]`.
pub fn r_function(d: usize, fid: f64) -> Result<f64> {
    check_iso(d, fid)?;
    let df = d as f64;
    let s = (fid / df).sqrt() + ((fid + df - 1.0) / df - fid).max(0.0).sqrt();
    Ok(1.0 - s * s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    TwoQubit,
    Werner,
    Isotropic,
}

/// One member of a bipartite family: concurrence `C`, Werner `f` or
/// isotropic fidelity `F`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteFamilyPoint {
    pub family: Family,
    pub d: usize,
    pub parameter: f64,
}

impl BipartiteFamilyPoint {
    pub fn new(family: Family, d: usize, parameter: f64) -> Result<Self> {
        let (lo, hi, name) = match family {
            Family::TwoQubit => (0.0, 1.0, "C"),
            Family::Werner => (-1.0, 1.0, "f"),
            Family::Isotropic => (0.0, 1.0, "F"),
        };
        if !(lo..=hi).contains(&parameter) {
            return Err(GmeError::ParamOutOfRange { name, value: parameter });
        }
        if d < 2 || (family == Family::TwoQubit && d != 2) {
            return Err(GmeError::BadShape(format!("d = {d}")));
        }
        Ok(Self { family, d, parameter })
    }

    pub fn entanglement(&self) -> Result<f64> {
        match self.family {
            Family::TwoQubit => Ok(e_from_concurrence(self.parameter)),
            Family::Werner => e_werner(self.parameter),
            Family::Isotropic => e_isotropic(self.d, self.parameter),
        }
    }
}
