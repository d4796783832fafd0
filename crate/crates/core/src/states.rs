//! State representations and the linear-algebra primitives shared by every
//! other module.
//!
//! Amplitudes use a single index convention throughout the crate: row-major
//! with party 1 most significant, so for dims `[d_1, ..., d_n]` the basis
//! label `(p_1, ..., p_n)` lives at `sum_i p_i * prod_{j>i} d_j`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GmeError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerances on the state invariants.
pub const NORM_TOL: f64 = 1e-12;
pub const MIN_NORM: f64 = 1e-14;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

/// Largest amplitude count any constructor will materialize.
pub const MAX_AMPLITUDES: usize = 1 << 24;
/// Largest party count accepted by the generated-state constructors.
pub const MAX_PARTIES: usize = 12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Strides of the row-major layout: `strides[i] = prod_{j>i} dims[j]`.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Split a flat index into per-party labels.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = index % dims[i];
        index /= dims[i];
    }
    out
}

fn total_size(dims: &[usize]) -> Result<usize> {
    let mut total: usize = 1;
    for &d in dims {
        if d < 2 {
            return Err(GmeError::BadShape(format!("party dimension {d} < 2")));
        }
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_AMPLITUDES)
            .ok_or_else(|| GmeError::TooLarge(format!("dims {dims:?} exceed 2^24 amplitudes")))?;
    }
    Ok(total)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(mut v: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let n = norm(&v);
    if !(n > MIN_NORM) {
        return Err(GmeError::ZeroVector(n));
    }
    v.iter_mut().for_each(|c| *c /= n);
    Ok(v)
}

/// Dense n-party pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Normalizes `amplitudes` into a state over `dims`.
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(GmeError::BadShape("no parties".into()));
        }
        let total = total_size(&dims)?;
        if amplitudes.len() != total {
            return Err(GmeError::DimensionMismatch {
                expected: total,
                actual: amplitudes.len(),
            });
        }
        Ok(Self {
            dims,
            amplitudes: normalized(amplitudes)?,
        })
    }

    /// Real amplitudes, for the many constructors that never need phases.
    pub fn from_real(dims: Vec<usize>, amplitudes: &[f64]) -> Result<Self> {
        Self::new(dims, amplitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state with the given per-party labels.
    pub fn basis(dims: &[usize], labels: &[usize]) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(GmeError::DimensionMismatch {
                expected: dims.len(),
                actual: labels.len(),
            });
        }
        let total = total_size(dims)?;
        let s = strides(dims);
        let mut idx = 0;
        for (i, (&l, &d)) in labels.iter().zip(dims).enumerate() {
            if l >= d {
                return Err(GmeError::OutOfRange {
                    what: "basis label",
                    value: l as f64,
                });
            }
            idx += l * s[i];
        }
        let mut amps = vec![ZERO; total];
        amps[idx] = ONE;
        Ok(Self {
            dims: dims.to_vec(),
            amplitudes: amps,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dims(&self.dims, &other.dims)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`; the parties of `other` follow those of `self`.
    pub fn kron(&self, other: &PureState) -> Result<PureState> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        total_size(&dims)?;
        let mut amps = Vec::with_capacity(self.len() * other.len());
        for a in &self.amplitudes {
            amps.extend(other.amplitudes.iter().map(|b| a * b));
        }
        PureState::new(dims, amps)
    }

    /// Applies `op` to one party, returning the (unnormalized) amplitude vector.
    pub fn apply_local(&self, party: usize, op: &CMatrix) -> Result<Vec<Complex64>> {
        let n = self.num_parties();
        if party >= n {
            return Err(GmeError::BadParty { party, parties: n });
        }
        let d = self.dims[party];
        if op.nrows() != d || op.ncols() != d {
            return Err(GmeError::DimensionMismatch {
                expected: d,
                actual: op.nrows(),
            });
        }
        let stride = strides(&self.dims)[party];
        let block = stride * d;
        let mut out = vec![ZERO; self.len()];
        for base in (0..self.len()).step_by(block) {
            for r in 0..stride {
                for p in 0..d {
                    let mut acc = ZERO;
                    for q in 0..d {
                        acc += op[(p, q)] * self.amplitudes[base + q * stride + r];
                    }
                    out[base + p * stride + r] = acc;
                }
            }
        }
        Ok(out)
    }

    /// Local unitary on one party; the result is renormalized against drift.
    pub fn apply_local_unitary(&self, party: usize, u: &CMatrix) -> Result<PureState> {
        let amps = self.apply_local(party, u)?;
        PureState::new(self.dims.clone(), amps)
    }

    /// Maximum elementwise distance to another state of the same shape.
    pub fn max_abs_diff(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_dims(a: &[usize], b: &[usize]) -> Result<()> {
    if a != b {
        let pa: usize = a.iter().product();
        let pb: usize = b.iter().product();
        return Err(GmeError::DimensionMismatch {
            expected: pa.max(a.len()),
            actual: pb.max(b.len()),
        });
    }
    Ok(())
}

/// `make_pure`: validate and normalize an amplitude vector.
pub fn make_pure(dims: &[usize], amplitudes: &[Complex64]) -> Result<PureState> {
    PureState::new(dims.to_vec(), amplitudes.to_vec())
}

/// A separable pure state, stored as its single-party factors.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ProductState {
    factors: Vec<Vec<Complex64>>,
}

impl ProductState {
    /// Normalizes each factor.
    pub fn new(factors: Vec<Vec<Complex64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(GmeError::BadShape("no factors".into()));
        }
        let factors = factors
            .into_iter()
            .map(|f| {
                if f.len() < 2 {
                    return Err(GmeError::BadShape(format!("factor of length {}", f.len())));
                }
                normalized(f)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[Vec<Complex64>] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    /// Materializes the full product tensor.
    pub fn to_pure(&self) -> Result<PureState> {
        let dims = self.dims();
        total_size(&dims)?;
        let mut amps = vec![ONE];
        for f in &self.factors {
            amps = amps
                .iter()
                .flat_map(|a| f.iter().map(move |c| a * c))
                .collect();
        }
        PureState::new(dims, amps)
    }
}

/// Contraction of `psi` with the conjugated factors of every party except
/// `skip`; returns a vector over the skipped party's labels. Runs in
/// O(len(psi)) without ever materializing the product tensor.
pub fn contract_except(psi: &PureState, factors: &[Vec<Complex64>], skip: Option<usize>) -> Vec<Complex64> {
    let dims = psi.dims();
    let n = dims.len();
    let mut cur: Vec<Complex64> = psi.amplitudes().to_vec();
    let stop = skip.map_or(0, |s| s + 1);
    // Trailing parties, innermost first.
    for j in (stop..n).rev() {
        let d = dims[j];
        let f = &factors[j];
        cur = cur
            .chunks_exact(d)
            .map(|chunk| chunk.iter().zip(f).map(|(a, c)| c.conj() * a).sum())
            .collect();
    }
    if let Some(s) = skip {
        for j in 0..s {
            let d = dims[j];
            let rest = cur.len() / d;
            let f = &factors[j];
            let mut next = vec![ZERO; rest];
            for (p, c) in f.iter().enumerate().take(d) {
                let cc = c.conj();
                for (b, slot) in next.iter_mut().enumerate() {
                    *slot += cc * cur[p * rest + b];
                }
            }
            cur = next;
        }
    }
    cur
}

/// Anything that can appear on the left of `<a|psi>`.
pub trait Bra {
    fn overlap_with(&self, psi: &PureState) -> Result<Complex64>;
}

impl Bra for PureState {
    fn overlap_with(&self, psi: &PureState) -> Result<Complex64> {
        self.inner(psi)
    }
}

impl Bra for ProductState {
    fn overlap_with(&self, psi: &PureState) -> Result<Complex64> {
        check_dims(&self.dims(), psi.dims())?;
        Ok(contract_except(psi, &self.factors, None)[0])
    }
}

/// `<a|b>`.
pub fn overlap<A: Bra + ?Sized>(a: &A, b: &PureState) -> Result<Complex64> {
    a.overlap_with(b)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    binomial(n, k)
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(GmeError::OutOfRange {
            what: "number of parties",
            value: 0.0,
        });
    }
    if n > MAX_PARTIES.max(24) {
        return Err(GmeError::TooLarge(format!("{n} qubits")));
    }
    Ok(())
}

/// `|S(n,k)>`: uniform superposition of the n-qubit basis states with exactly
/// `k` zeros.
pub fn symmetric_state(n: usize, k: usize) -> Result<PureState> {
    if k > n {
        return Err(GmeError::OutOfRange {
            what: "k must satisfy 0 <= k <= n",
            value: k as f64,
        });
    }
    check_qubit_count(n)?;
    let amp = 1.0 / binomial(n, k).sqrt();
    let total = 1usize << n;
    let amps: Vec<Complex64> = (0..total)
        .map(|i| {
            let zeros = n - (i as u64).count_ones() as usize;
            if zeros == k {
                Complex64::new(amp, 0.0)
            } else {
                ZERO
            }
        })
        .collect();
    PureState::new(vec![2; n], amps)
}

/// Symmetric n-qudit state with occupation numbers `counts[j]` of level `j`.
pub fn symmetric_qudit_state(n: usize, counts: &[usize]) -> Result<PureState> {
    let sum: usize = counts.iter().sum();
    if sum != n {
        return Err(GmeError::CountMismatch {
            expected: n,
            actual: sum,
        });
    }
    let d = counts.len();
    if d < 2 {
        return Err(GmeError::BadShape("need at least two levels".into()));
    }
    let dims = vec![d; n];
    let total = total_size(&dims)?;
    let log_amp = 0.5 * (counts.iter().map(|&k| ln_factorial(k)).sum::<f64>() - ln_factorial(n));
    let amp = log_amp.exp();
    let mut occ = vec![0usize; d];
    let amps = (0..total)
        .map(|i| {
            occ.iter_mut().for_each(|o| *o = 0);
            let mut rem = i;
            for _ in 0..n {
                occ[rem % d] += 1;
                rem /= d;
            }
            if occ == counts {
                Complex64::new(amp, 0.0)
            } else {
                ZERO
            }
        })
        .collect();
    PureState::new(dims, amps)
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `(|0...0> + |1...1>)/sqrt(2)`.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(GmeError::OutOfRange {
            what: "ghz needs n >= 2",
            value: n as f64,
        });
    }
    check_qubit_count(n)?;
    let total = 1usize << n;
    let mut amps = vec![ZERO; total];
    amps[0] = ONE;
    amps[total - 1] = ONE;
    PureState::new(vec![2; n], amps)
}

/// `|W> = |S(3,2)>`.
pub fn w_state() -> PureState {
    symmetric_state(3, 2).expect("S(3,2) is valid")
}

/// `|W~> = |S(3,1)>`, the W state with 0 and 1 exchanged.
pub fn w_tilde_state() -> PureState {
    symmetric_state(3, 1).expect("S(3,1) is valid")
}

/// All permutations of `0..m` with their signs (Heap's algorithm).
fn signed_permutations(m: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..m).collect();
    let mut out = vec![(perm.clone(), 1.0)];
    let mut sign = 1.0;
    let mut c = vec![0usize; m];
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Totally antisymmetric state of `n` parties with `n` levels each.
pub fn determinant_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(GmeError::OutOfRange {
            what: "determinant state needs n >= 2",
            value: n as f64,
        });
    }
    generalized_determinant(n, 1)
}

/// Antisymmetrized state of `d^p` blocks, each block a string of `p` d-level
/// parties labelled by the base-d digits of the block index; `p * d^p`
/// parties in total.
pub fn generalized_determinant(d: usize, p: usize) -> Result<PureState> {
    if d < 2 || p < 1 {
        return Err(GmeError::OutOfRange {
            what: "generalized determinant needs d >= 2, p >= 1",
            value: d.min(p) as f64,
        });
    }
    let blocks = (d as u64)
        .checked_pow(p as u32)
        .filter(|&b| b as usize * p <= MAX_PARTIES)
        .ok_or_else(|| GmeError::TooLarge(format!("Det(d={d}, p={p}) exceeds {MAX_PARTIES} parties")))?
        as usize;
    let parties = blocks * p;
    let dims = vec![d; parties];
    let total = total_size(&dims)?;
    let amp = (-0.5 * ln_factorial(blocks)).exp();
    let mut amps = vec![ZERO; total];
    for (perm, sign) in signed_permutations(blocks) {
        // Each block label is itself a base-d number of p digits, so the
        // concatenation is a base-(d^p) number.
        let idx = perm.iter().fold(0usize, |acc, &b| acc * blocks + b);
        amps[idx] = Complex64::new(sign * amp, 0.0);
    }
    PureState::new(dims, amps)
}

/// `sqrt(s)|W> + sqrt(1-s) e^{i phi}|W~>`.
pub fn ww_superposition(s: f64, phi: f64) -> Result<PureState> {
    check_unit("s", s)?;
    superpose(&[
        (Complex64::new(s.sqrt(), 0.0), w_state()),
        (Complex64::from_polar((1.0 - s).max(0.0).sqrt(), phi), w_tilde_state()),
    ])
}

/// `sqrt(s)|GHZ> + sqrt(1-s) e^{i phi}|W>`.
pub fn gw_state(s: f64, phi: f64) -> Result<PureState> {
    check_unit("s", s)?;
    superpose(&[
        (Complex64::new(s.sqrt(), 0.0), ghz(3)?),
        (Complex64::from_polar((1.0 - s).max(0.0).sqrt(), phi), w_state()),
    ])
}

/// `sqrt(r)|S(n,k1)> + sqrt(1-r) e^{i phi}|S(n,k2)>`.
pub fn ss_state(n: usize, k1: usize, k2: usize, r: f64, phi: f64) -> Result<PureState> {
    if k1 == k2 {
        return Err(GmeError::BadIndices(k1));
    }
    check_unit("r", r)?;
    superpose(&[
        (Complex64::new(r.sqrt(), 0.0), symmetric_state(n, k1)?),
        (
            Complex64::from_polar((1.0 - r).max(0.0).sqrt(), phi),
            symmetric_state(n, k2)?,
        ),
    ])
}

/// `sqrt(x)|GHZ> + sqrt(y)|W> + sqrt(1-x-y)|W~>`, the least entangled pure
/// state that twirls onto `ghzw_mix(x, y)`.
pub fn ghzw_pure(x: f64, y: f64) -> Result<PureState> {
    check_simplex(x, y)?;
    let z = (1.0 - x - y).max(0.0);
    superpose(&[
        (Complex64::new(x.sqrt(), 0.0), ghz(3)?),
        (Complex64::new(y.sqrt(), 0.0), w_state()),
        (Complex64::new(z.sqrt(), 0.0), w_tilde_state()),
    ])
}

fn superpose(terms: &[(Complex64, PureState)]) -> Result<PureState> {
    let dims = terms[0].1.dims().to_vec();
    let mut amps = vec![ZERO; terms[0].1.len()];
    for (c, psi) in terms {
        check_dims(&dims, psi.dims())?;
        for (a, b) in amps.iter_mut().zip(psi.amplitudes()) {
            *a += c * b;
        }
    }
    PureState::new(dims, amps)
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(GmeError::ParamOutOfRange { name, value: v });
    }
    Ok(())
}

pub(crate) fn check_simplex(x: f64, y: f64) -> Result<()> {
    if !(x >= 0.0 && y >= 0.0 && x + y <= 1.0 + 1e-12) {
        return Err(GmeError::ParamOutOfRange {
            name: "(x, y) must satisfy x, y >= 0 and x + y <= 1",
            value: x + y,
        });
    }
    Ok(())
}

/// Weighted collection of pure states.
#[derive(Clone, Debug)]
pub struct Ensemble {
    entries: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, PureState)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(GmeError::WeightSumError(0.0));
        }
        let dims = entries[0].1.dims().to_vec();
        let mut sum = 0.0;
        for (w, psi) in &entries {
            if !(*w > 0.0 && *w <= 1.0 + WEIGHT_SUM_TOL) {
                return Err(GmeError::ParamOutOfRange {
                    name: "ensemble weight",
                    value: *w,
                });
            }
            check_dims(&dims, psi.dims())?;
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(GmeError::WeightSumError(sum));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, PureState)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix with party metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates every invariant.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let total = total_size(&dims)?;
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(GmeError::DimensionMismatch {
                expected: total,
                actual: matrix.nrows(),
            });
        }
        let herm = max_hermitian_deviation(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(GmeError::InvalidDensity(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(GmeError::InvalidDensity(format!("trace {tr}")));
        }
        let min = hermitian_eigenvalues(&matrix).iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL {
            return Err(GmeError::InvalidDensity(format!("minimum eigenvalue {min:e}")));
        }
        Ok(Self { dims, matrix })
    }

    /// Builds without the eigenvalue check; for matrices that are PSD by
    /// construction (mixtures, twirls of valid states).
    fn trusted(dims: Vec<usize>, matrix: CMatrix) -> Self {
        Self { dims, matrix }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// `1/D` times the identity.
    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let total = total_size(dims)?;
        let m = CMatrix::identity(total, total) / Complex64::new(total as f64, 0.0);
        Ok(Self::trusted(dims.to_vec(), m))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `<psi|rho|psi>`.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        check_dims(&self.dims, psi.dims())?;
        let a = psi.amplitudes();
        let mut acc = ZERO;
        for i in 0..a.len() {
            if a[i] == ZERO {
                continue;
            }
            let mut row = ZERO;
            for j in 0..a.len() {
                row += self.matrix[(i, j)] * a[j];
            }
            acc += a[i].conj() * row;
        }
        Ok(acc.re)
    }

    /// Spectral decomposition as an ensemble; eigenvalues below `cutoff`
    /// are dropped and the rest renormalized.
    pub fn eigen_ensemble(&self, cutoff: f64) -> Result<Ensemble> {
        let eig = nalgebra::linalg::SymmetricEigen::new(hermitize(&self.matrix));
        let mut entries = Vec::new();
        let kept: f64 = eig.eigenvalues.iter().filter(|&&l| l > cutoff).sum();
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            if l > cutoff {
                let v: Vec<Complex64> = eig.eigenvectors.column(k).iter().cloned().collect();
                entries.push((l / kept, PureState::new(self.dims.clone(), v)?));
            }
        }
        Ensemble::new(entries)
    }

    /// Partial transpose with respect to `party` (zero based).
    pub fn partial_transpose(&self, party: usize) -> Result<CMatrix> {
        partial_transpose(&self.matrix, &self.dims, party)
    }

    /// `-2 *` sum of the negative eigenvalues of the partial transpose.
    pub fn negativity(&self, party: usize) -> Result<f64> {
        let pt = self.partial_transpose(party)?;
        Ok(-2.0 * hermitian_eigenvalues(&pt).iter().filter(|&&l| l < 0.0).sum::<f64>())
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub(crate) fn max_hermitian_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..=i {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = nalgebra::linalg::SymmetricEigen::new(hermitize(m))
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Partial transpose of a matrix over `dims` with respect to one party.
pub fn partial_transpose(m: &CMatrix, dims: &[usize], party: usize) -> Result<CMatrix> {
    if party >= dims.len() {
        return Err(GmeError::BadParty {
            party,
            parties: dims.len(),
        });
    }
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(GmeError::DimensionMismatch {
            expected: total,
            actual: m.nrows(),
        });
    }
    let s = strides(dims)[party];
    let d = dims[party];
    let mut out = CMatrix::zeros(total, total);
    for i in 0..total {
        let a = (i / s) % d;
        for j in 0..total {
            let b = (j / s) % d;
            let ii = i - a * s + b * s;
            let jj = j - b * s + a * s;
            out[(ii, jj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// `|psi><psi|`.
pub fn density(psi: &PureState) -> DensityMatrix {
    let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
    DensityMatrix::trusted(psi.dims().to_vec(), &v * v.adjoint())
}

/// `sum_i p_i |psi_i><psi_i|`.
pub fn mix(ensemble: &Ensemble) -> DensityMatrix {
    let (_, first) = &ensemble.entries()[0];
    let total = first.len();
    let mut m = CMatrix::zeros(total, total);
    for (w, psi) in ensemble.entries() {
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        m += (&v * v.adjoint()) * Complex64::new(*w, 0.0);
    }
    let trace = m.trace().re;
    m /= Complex64::new(trace, 0.0);
    DensityMatrix::trusted(first.dims().to_vec(), m)
}

fn swap_operator(d: usize) -> CMatrix {
    let mut f = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = ONE;
        }
    }
    f
}

/// `|Phi+> = sum_i |ii> / sqrt(d)`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    let mut amps = vec![ZERO; d * d];
    for i in 0..d {
        amps[i * d + i] = ONE;
    }
    PureState::new(vec![d, d], amps)
}

/// Generalized Werner state on `d x d` with swap expectation `f`.
pub fn werner(d: usize, f: f64) -> Result<DensityMatrix> {
    if !(-1.0..=1.0).contains(&f) {
        return Err(GmeError::ParamOutOfRange { name: "f", value: f });
    }
    if d < 2 {
        return Err(GmeError::BadShape(format!("d = {d}")));
    }
    let df = d as f64;
    let denom = df.powi(4) - df * df;
    let a = (df * df - f * df) / denom;
    let b = (f * df * df - df) / denom;
    let n = d * d;
    let m = CMatrix::identity(n, n) * Complex64::new(a, 0.0) + swap_operator(d) * Complex64::new(b, 0.0);
    Ok(DensityMatrix::trusted(vec![d, d], m))
}

/// Isotropic state on `d x d` with fidelity `fidelity` to `|Phi+>`.
pub fn isotropic(d: usize, fidelity: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(GmeError::ParamOutOfRange {
            name: "F",
            value: fidelity,
        });
    }
    if d < 2 {
        return Err(GmeError::BadShape(format!("d = {d}")));
    }
    let n = d * d;
    let proj = density(&maximally_entangled(d)?).matrix;
    let rest = (CMatrix::identity(n, n) - &proj) * Complex64::new((1.0 - fidelity) / (n as f64 - 1.0), 0.0);
    Ok(DensityMatrix::trusted(vec![d, d], rest + proj * Complex64::new(fidelity, 0.0)))
}

/// `x |GHZ><GHZ| + y |W><W| + (1-x-y) |W~><W~|`.
pub fn ghzw_mix(x: f64, y: f64) -> Result<DensityMatrix> {
    check_simplex(x, y)?;
    let z = (1.0 - x - y).max(0.0);
    let parts = [(x, ghz(3)?), (y, w_state()), (z, w_tilde_state())];
    let mut m = CMatrix::zeros(8, 8);
    for (w, psi) in &parts {
        if *w > 0.0 {
            m += density(psi).matrix * Complex64::new(*w, 0.0);
        }
    }
    Ok(DensityMatrix::trusted(vec![2; 3], m))
}

/// `sum_k p_k |S(n,k)><S(n,k)|`, with `probs[k]` for `k = 0..=n`.
pub fn symmetric_mixture(n: usize, probs: &[f64]) -> Result<DensityMatrix> {
    if probs.len() != n + 1 {
        return Err(GmeError::DimensionMismatch {
            expected: n + 1,
            actual: probs.len(),
        });
    }
    if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(GmeError::ParamOutOfRange {
            name: "p_k",
            value: probs.iter().cloned().fold(f64::NAN, f64::min),
        });
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(GmeError::WeightSumError(sum));
    }
    let total = 1usize << n;
    let mut m = CMatrix::zeros(total, total);
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            m += density(&symmetric_state(n, k)?).matrix * Complex64::new(p, 0.0);
        }
    }
    Ok(DensityMatrix::trusted(vec![2; n], m))
}

fn require_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims.iter().any(|&d| d != 2) {
        return Err(GmeError::BadShape(format!("expected qubits, got dims {:?}", rho.dims)));
    }
    Ok(())
}

fn require_square_pair(rho: &DensityMatrix) -> Result<usize> {
    match rho.dims.as_slice() {
        [a, b] if a == b => Ok(*a),
        other => Err(GmeError::BadShape(format!("expected d x d system, got {other:?}"))),
    }
}

/// Phase average over `|1> -> e^{-i phi}|1>` on every qubit: keeps only the
/// matrix elements between basis states of equal Hamming weight.
pub fn twirl_p3(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_qubits(rho)?;
    let n = rho.size();
    let m = CMatrix::from_fn(n, n, |i, j| {
        if i.count_ones() == j.count_ones() {
            rho.matrix[(i, j)]
        } else {
            ZERO
        }
    });
    Ok(DensityMatrix::trusted(rho.dims.clone(), m))
}

/// `(1/3) sum_{k=1..3} U_k rho U_k^dagger` on three qubits, where `U_k`
/// multiplies `|1>` by `exp(2 pi i k / 3)` on every qubit.
pub fn twirl_p4(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_qubits(rho)?;
    if rho.dims.len() != 3 {
        return Err(GmeError::BadShape("P4 twirl is defined on three qubits".into()));
    }
    let n = rho.size();
    let g = |k: u32, w: u32| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * w) as f64 / 3.0);
    let m = CMatrix::from_fn(n, n, |i, j| {
        let (wi, wj) = (i.count_ones(), j.count_ones());
        let phase: Complex64 = (1..=3).map(|k| g(k, wi) * g(k, wj).conj()).sum();
        rho.matrix[(i, j)] * phase / 3.0
    });
    Ok(DensityMatrix::trusted(rho.dims.clone(), m))
}

/// `Tr(rho F)` with `F` the swap operator.
pub fn werner_f(rho: &DensityMatrix) -> Result<f64> {
    let d = require_square_pair(rho)?;
    let mut acc = ZERO;
    for i in 0..d {
        for j in 0..d {
            acc += rho.matrix[(j * d + i, i * d + j)];
        }
    }
    Ok(acc.re)
}

/// `<Phi+|rho|Phi+>`.
pub fn isotropic_fidelity(rho: &DensityMatrix) -> Result<f64> {
    let d = require_square_pair(rho)?;
    rho.expectation(&maximally_entangled(d)?)
}

/// `U x U` twirl, realized as parameter extraction onto the Werner family.
pub fn twirl_werner(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = require_square_pair(rho)?;
    werner(d, werner_f(rho)?.clamp(-1.0, 1.0))
}

/// `U x U*` twirl, realized as parameter extraction onto the isotropic family.
pub fn twirl_isotropic(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let d = require_square_pair(rho)?;
    isotropic(d, isotropic_fidelity(rho)?.clamp(0.0, 1.0))
}
