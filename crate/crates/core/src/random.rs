//! Seeded samplers for states, unitaries and channels.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::states::{CMatrix, ProductState, PureState};

/// Deterministic generator for stream `stream` of `seed`.
pub fn rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Standard complex Gaussian entry.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Unit vector drawn uniformly (Haar) from the sphere in `C^d`.
pub fn haar_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

pub fn random_pure_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total = dims.iter().product();
    PureState::new(dims.to_vec(), haar_vector(total, rng))
}

pub fn random_product_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<ProductState> {
    ProductState::new(dims.iter().map(|&d| haar_vector(d, rng)).collect())
}

/// Haar unitary from the QR decomposition of a Ginibre matrix with the
/// phases of `R`'s diagonal absorbed.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let phase = r[(j, j)] / r[(j, j)].norm();
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random two-outcome channel `{A S^{-1/2}, B S^{-1/2}}` with
/// `S = A^dagger A + B^dagger B` for Ginibre `A`, `B`.
pub fn random_two_outcome_channel<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<CMatrix> {
    let a = DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let b = DMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let s = a.adjoint() * &a + b.adjoint() * &b;
    let eig = nalgebra::linalg::SymmetricEigen::new(s);
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::new(1.0 / l.sqrt(), 0.0)));
    let s_inv_half = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    vec![a * &s_inv_half, b * s_inv_half]
}
