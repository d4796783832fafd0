//! Witnesses of the form `lambda^2 * 1 - |psi><psi|`.

use crate::error::{GmeError, Result};
use crate::hartree::{entanglement_eigenvalue, SolverOptions};
use crate::states::{density, CMatrix, DensityMatrix, ProductState, PureState};
use num_complex::Complex64;

/// Stored as `(lambda^2, psi)`; see [`WitnessOperator::to_matrix`] for the
/// dense operator.
#[derive(Clone, Debug)]
pub struct WitnessOperator {
    lambda_sq: f64,
    reference: PureState,
}

impl WitnessOperator {
    /// Any `lambda_sq` in `[0, 1)`; validity against separable states is the
    /// caller's concern (see [`witness_validity_range`]).
    pub fn new(lambda_sq: f64, reference: PureState) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda_sq) {
            return Err(GmeError::ParamOutOfRange {
                name: "lambda_sq",
                value: lambda_sq,
            });
        }
        Ok(Self { lambda_sq, reference })
    }

    pub fn lambda_sq(&self) -> f64 {
        self.lambda_sq
    }

    pub fn reference(&self) -> &PureState {
        &self.reference
    }

    pub fn to_matrix(&self) -> CMatrix {
        let n = self.reference.len();
        CMatrix::identity(n, n) * Complex64::new(self.lambda_sq, 0.0) - density(&self.reference).matrix()
    }

    /// `<phi|W|phi>` for a product state.
    pub fn on_product(&self, phi: &ProductState) -> Result<f64> {
        let ov = crate::states::overlap(phi, &self.reference)?;
        Ok(self.lambda_sq - ov.norm_sqr())
    }
}

fn entangled_lambda_sq(psi: &PureState, opts: &SolverOptions) -> Result<f64> {
    let r = entanglement_eigenvalue(psi, opts)?;
    if r.lambda_max >= 1.0 - 1e-9 {
        return Err(GmeError::NotEntangled(r.lambda_max));
    }
    Ok(r.lambda_max * r.lambda_max)
}

/// `[Lambda_max^2, 1)`: the values of `lambda^2` for which the operator is
/// non-negative on every separable state.
pub fn witness_validity_range(psi: &PureState, opts: &SolverOptions) -> Result<(f64, f64)> {
    Ok((entangled_lambda_sq(psi, opts)?, 1.0))
}

/// The member of the family with the most negative expectation on `psi`.
pub fn optimal_witness(psi: &PureState, opts: &SolverOptions) -> Result<WitnessOperator> {
    WitnessOperator::new(entangled_lambda_sq(psi, opts)?, psi.clone())
}

/// `Tr(W rho)`.
pub fn detector(w: &WitnessOperator, rho: &DensityMatrix) -> Result<f64> {
    Ok(w.lambda_sq - rho.expectation(&w.reference)?)
}

/// For a witness below the validity range, a product state on which it is
/// negative, found as the closest product state of the reference.
pub fn find_violation(w: &WitnessOperator, opts: &SolverOptions) -> Result<Option<(ProductState, f64)>> {
    let r = entanglement_eigenvalue(&w.reference, opts)?;
    let value = w.on_product(&r.maximizer)?;
    Ok((value < 0.0).then_some((r.maximizer, value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_product_state, rng};
    use crate::states::{ghz, symmetric_state, w_state, w_tilde_state};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn ranges() {
        let (lo, hi) = witness_validity_range(&ghz(3).unwrap(), &opts()).unwrap();
        assert!((lo - 0.5).abs() < 1e-9 && hi == 1.0);
        let (lo, _) = witness_validity_range(&w_state(), &opts()).unwrap();
        assert!((lo - 4.0 / 9.0).abs() < 1e-9);
        let prod = PureState::basis(&[2, 2, 2], &[0, 1, 0]).unwrap();
        assert!(matches!(witness_validity_range(&prod, &opts()), Err(GmeError::NotEntangled(_))));
    }

    #[test]
    fn optimal_values() {
        let s42 = symmetric_state(4, 2).unwrap();
        let w = optimal_witness(&s42, &opts()).unwrap();
        assert!((w.lambda_sq() - 0.375).abs() < 1e-9);
        assert!((detector(&w, &density(&s42)).unwrap() + 0.625).abs() < 1e-9);
        let g = ghz(3).unwrap();
        let w = optimal_witness(&g, &opts()).unwrap();
        assert!((detector(&w, &density(&g)).unwrap() + 0.5).abs() < 1e-9);
        let w = optimal_witness(&w_tilde_state(), &opts()).unwrap();
        assert!((w.lambda_sq() - 4.0 / 9.0).abs() < 1e-9);
        let mm = DensityMatrix::maximally_mixed(&[2, 2, 2]).unwrap();
        assert!((detector(&w, &mm).unwrap() - (w.lambda_sq() - 0.125)).abs() < 1e-15);
    }

    #[test]
    fn dense_matrix_agrees_with_stored_form() {
        let g = ghz(3).unwrap();
        let w = optimal_witness(&g, &opts()).unwrap();
        let mut r = rng(9, 0);
        for _ in 0..20 {
            let phi = random_product_state(&[2, 2, 2], &mut r).unwrap();
            let v = phi.to_pure().unwrap();
            let m = w.to_matrix();
            let a = nalgebra::DVector::from_column_slice(v.amplitudes());
            let val = (a.adjoint() * &m * &a)[(0, 0)].re;
            assert!((val - w.on_product(&phi).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn violation_below_range() {
        let w = WitnessOperator::new(4.0 / 9.0 - 1e-5, w_state()).unwrap();
        let (_, v) = find_violation(&w, &opts()).unwrap().expect("violating product state");
        assert!(v < 0.0);
        let ok = optimal_witness(&w_state(), &opts()).unwrap();
        let shifted = WitnessOperator::new(ok.lambda_sq() + 1e-6, w_state()).unwrap();
        assert!(find_violation(&shifted, &opts()).unwrap().is_none());
    }
}
