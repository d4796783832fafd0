//! Lower convex envelopes of sampled functions and the convex-roof driver
//! built on them.

use nalgebra::DMatrix;
use qhull::Qh;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::{lambda_symmetric, ss_lambda};
use crate::error::{GmeError, Result};
use crate::io::csv;
use crate::optimize::maximize_1d;
use crate::states::binom;

pub const DEFAULT_GRID_1D: usize = 2001;
pub const DEFAULT_GRID_2D: usize = 401;

const DOMAIN_TOL: f64 = 1e-12;

/// Function sampled on a strictly increasing abscissa.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Curve {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(GmeError::DimensionMismatch {
                expected: xs.len(),
                actual: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(GmeError::TooFewPoints(xs.len()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(GmeError::DegenerateGrid("abscissae must be strictly increasing".into()));
        }
        if ys.iter().chain(&xs).any(|v| !v.is_finite()) {
            return Err(GmeError::DegenerateGrid("non-finite sample".into()));
        }
        Ok(Self { xs, ys })
    }

    /// Samples `f` at `n` equally spaced points of `[lo, hi]`.
    pub fn sample<F>(lo: f64, hi: f64, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        if n < 2 {
            return Err(GmeError::TooFewPoints(n));
        }
        let xs = linspace(lo, hi, n);
        let ys = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Linear interpolation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = (self.xs[0], self.xs[self.len() - 1]);
        if !(x >= lo - DOMAIN_TOL && x <= hi + DOMAIN_TOL) {
            return Err(GmeError::OutOfDomain(x, f64::NAN));
        }
        let i = self.xs.partition_point(|&v| v <= x).clamp(1, self.len() - 1) - 1;
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let u = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        Ok(self.ys[i] + u * (self.ys[i + 1] - self.ys[i]))
    }

    pub fn to_csv(&self, headers: &[&str]) -> String {
        csv(headers, self.xs.iter().zip(&self.ys).map(|(&x, &y)| vec![x, y]))
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Parameter domain of a [`Surface`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Domain {
    /// `x, y >= 0`, `x + y <= 1`.
    Simplex2D,
    /// `[0,1] x [0,1]`.
    Rect,
}

impl Domain {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            Domain::Simplex2D => x >= -DOMAIN_TOL && y >= -DOMAIN_TOL && x + y <= 1.0 + DOMAIN_TOL,
            Domain::Rect => (-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&x) && (-DOMAIN_TOL..=1.0 + DOMAIN_TOL).contains(&y),
        }
    }
}

/// Function sampled on a rectangular grid; nodes outside the domain hold NaN.
/// `values[(i, j)]` belongs to `(grid_x[i], grid_y[j])`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Surface {
    domain: Domain,
    grid_x: Vec<f64>,
    grid_y: Vec<f64>,
    values: DMatrix<f64>,
}

impl Surface {
    pub fn new(domain: Domain, grid_x: Vec<f64>, grid_y: Vec<f64>, values: DMatrix<f64>) -> Result<Self> {
        if grid_x.len() < 2 || grid_y.len() < 2 {
            return Err(GmeError::TooFewPoints(grid_x.len().min(grid_y.len())));
        }
        if grid_x.windows(2).chain(grid_y.windows(2)).any(|w| !(w[1] > w[0])) {
            return Err(GmeError::DegenerateGrid("grid must be strictly increasing".into()));
        }
        if values.nrows() != grid_x.len() || values.ncols() != grid_y.len() {
            return Err(GmeError::DimensionMismatch {
                expected: grid_x.len() * grid_y.len(),
                actual: values.len(),
            });
        }
        for (i, &x) in grid_x.iter().enumerate() {
            for (j, &y) in grid_y.iter().enumerate() {
                if domain.contains(x, y) && !values[(i, j)].is_finite() {
                    return Err(GmeError::DegenerateGrid(format!("non-finite value at ({x}, {y})")));
                }
            }
        }
        Ok(Self {
            domain,
            grid_x,
            grid_y,
            values,
        })
    }

    /// Samples `f` on an `n x n` grid over `[0,1]^2`, restricted to `domain`.
    pub fn sample<F>(domain: Domain, n: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64> + Sync,
    {
        let g = linspace(0.0, 1.0, n);
        let flat = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (x, y) = (g[k / n], g[k % n]);
                if domain.contains(x, y) {
                    let y = if domain == Domain::Simplex2D { y.min((1.0 - x).max(0.0)) } else { y };
                    f(x, y)
                } else {
                    Ok(f64::NAN)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, g.clone(), g, DMatrix::from_row_slice(n, n, &flat))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn grid_x(&self) -> &[f64] {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &[f64] {
        &self.grid_y
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn with_values(&self, values: DMatrix<f64>) -> Result<Self> {
        Self::new(self.domain, self.grid_x.clone(), self.grid_y.clone(), values)
    }

    /// In-domain nodes as `(i, j, x, y, value)`.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64)> + '_ {
        self.grid_x.iter().enumerate().flat_map(move |(i, &x)| {
            self.grid_y
                .iter()
                .enumerate()
                .filter(move |&(_, &y)| self.domain.contains(x, y))
                .map(move |(j, &y)| (i, j, x, y, self.values[(i, j)]))
        })
    }

    fn cell(grid: &[f64], v: f64) -> (usize, f64) {
        let i = grid.partition_point(|&g| g <= v).clamp(1, grid.len() - 1) - 1;
        let u = ((v - grid[i]) / (grid[i + 1] - grid[i])).clamp(0.0, 1.0);
        (i, u)
    }

    /// Bilinear interpolation; in cells cut by the simplex edge, linear
    /// interpolation on the lower-left triangle of the cell.
    pub fn interpolate(&self, x: f64, y: f64) -> Result<f64> {
        if !self.domain.contains(x, y) {
            return Err(GmeError::OutOfDomain(x, y));
        }
        let (i, u) = Self::cell(&self.grid_x, x);
        let (j, w) = Self::cell(&self.grid_y, y);
        let v00 = self.values[(i, j)];
        let v10 = self.values[(i + 1, j)];
        let v01 = self.values[(i, j + 1)];
        let v11 = self.values[(i + 1, j + 1)];
        if v11.is_finite() && v10.is_finite() && v01.is_finite() {
            return Ok(v00 * (1.0 - u) * (1.0 - w) + v10 * u * (1.0 - w) + v01 * (1.0 - u) * w + v11 * u * w);
        }
        let (a, b) = (if v10.is_finite() { v10 } else { v00 }, if v01.is_finite() { v01 } else { v00 });
        Ok(v00 + (a - v00) * u + (b - v00) * w)
    }

    /// CSV rows `x,y,value` over in-domain nodes, lexicographic in `(x, y)`.
    pub fn to_csv(&self, headers: &[&str]) -> String {
        csv(headers, self.nodes().map(|(_, _, x, y, v)| vec![x, y, v]))
    }
}

/// Lower convex hull of a curve (monotone chain), resampled onto its
/// abscissae.
pub fn lower_envelope_1d(c: &Curve) -> Result<Curve> {
    if c.len() < 2 {
        return Err(GmeError::TooFewPoints(c.len()));
    }
    let mut hull: Vec<usize> = Vec::with_capacity(c.len());
    for k in 0..c.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (c.xs[b] - c.xs[a]) * (c.ys[k] - c.ys[a]) - (c.ys[b] - c.ys[a]) * (c.xs[k] - c.xs[a]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut ys = c.ys.clone();
    for seg in hull.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let slope = (c.ys[b] - c.ys[a]) / (c.xs[b] - c.xs[a]);
        for k in a + 1..b {
            ys[k] = (c.ys[a] + slope * (c.xs[k] - c.xs[a])).min(c.ys[k]);
        }
    }
    Curve::new(c.xs.clone(), ys)
}

/// Lower convex hull of a surface over the simplex, evaluated back on the
/// grid. The lower facets of the 3D hull of the samples are kept (an apex
/// point above the data keeps the hull full-dimensional even for planar
/// inputs); the envelope at a node is the largest lower-facet plane among
/// facets whose projected bounding box contains it.
pub fn lower_envelope_2d(s: &Surface) -> Result<Surface> {
    if s.domain != Domain::Simplex2D {
        return Err(GmeError::BadShape(
            "global convexification needs parameters in which the state is linear; Rect surfaces are refused".into(),
        ));
    }
    let pts: Vec<(usize, usize, f64, f64, f64)> = s.nodes().collect();
    if pts.len() < 3 {
        return Err(GmeError::DegenerateGrid(format!("{} points in domain", pts.len())));
    }
    let (zmin, zmax) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.4), hi.max(p.4)));
    let n = pts.len() as f64;
    let (cx, cy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.2 / n, b + p.3 / n));
    let apex = [cx, cy, zmax + (zmax - zmin) + 1.0];
    let coords = pts.iter().map(|p| [p.2, p.3, p.4]).chain(std::iter::once(apex));
    let qh = Qh::builder()
        .triangulate(true)
        .build_from_iter(coords)
        .map_err(|e| GmeError::DegenerateGrid(format!("hull construction failed: {e}")))?;

    let mut env = DMatrix::from_element(s.grid_x.len(), s.grid_y.len(), f64::NEG_INFINITY);
    for facet in qh.facets() {
        let Some(normal) = facet.normal() else { continue };
        if normal[2] > -1e-12 {
            continue;
        }
        let Some(verts) = facet.vertices() else { continue };
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for v in verts.iter() {
            if let Some(p) = v.point() {
                x0 = x0.min(p[0]);
                x1 = x1.max(p[0]);
                y0 = y0.min(p[1]);
                y1 = y1.max(p[1]);
            }
        }
        let (a, b, c, off) = (normal[0], normal[1], normal[2], facet.offset());
        let i0 = s.grid_x.partition_point(|&g| g < x0 - 1e-12);
        let j0 = s.grid_y.partition_point(|&g| g < y0 - 1e-12);
        for i in i0..s.grid_x.len() {
            let x = s.grid_x[i];
            if x > x1 + 1e-12 {
                break;
            }
            for j in j0..s.grid_y.len() {
                let y = s.grid_y[j];
                if y > y1 + 1e-12 {
                    break;
                }
                let z = -(a * x + b * y + off) / c;
                if z > env[(i, j)] {
                    env[(i, j)] = z;
                }
            }
        }
    }
    let mut out = s.values.clone();
    for &(i, j, _, _, v) in &pts {
        let e = env[(i, j)];
        out[(i, j)] = if e.is_finite() { e.min(v) } else { v };
    }
    s.with_values(out)
}

/// A sampled entanglement function on an invariant parameter domain.
#[derive(Clone, Debug, PartialEq)]
pub enum Sampled {
    Curve(Curve),
    Surface(Surface),
}

/// Convex hull of `eps`, which must already hold the smallest pure-state
/// entanglement over each parameter's preimage.
pub fn vw_mixture_entanglement(eps: &Sampled) -> Result<Sampled> {
    match eps {
        Sampled::Curve(c) => Ok(Sampled::Curve(lower_envelope_1d(c)?)),
        Sampled::Surface(s) => Ok(Sampled::Surface(lower_envelope_2d(s)?)),
    }
}

/// Pure-state curve `E(r) = 1 - Lambda^2` of
/// `sqrt(r)|S(n,k1)> + sqrt(1-r)|S(n,k2)>` on `points` samples of `[0,1]`.
pub fn ss_pure_curve(n: usize, k1: usize, k2: usize, points: usize) -> Result<Curve> {
    Curve::sample(0.0, 1.0, points, |r| Ok(1.0 - ss_lambda(n, k1, k2, r)?.powi(2)))
}

fn three_component_lambda(n: usize, ks: [usize; 3], q: [f64; 3]) -> f64 {
    let amp: Vec<f64> = ks.iter().zip(q).map(|(&k, w)| w.max(0.0).sqrt() * binom(n, k).sqrt()).collect();
    maximize_1d(
        |th| {
            let (s, c) = th.sin_cos();
            ks.iter()
                .zip(&amp)
                .map(|(&k, a)| a * c.powi(k as i32) * s.powi((n - k) as i32))
                .sum()
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
        1024,
        1e-12,
    )
    .1
}

/// Entanglement of `sum_k p_k |S(n,k)><S(n,k)|` with the default grids.
pub fn symmetric_mixture_entanglement(n: usize, probs: &[f64]) -> Result<f64> {
    symmetric_mixture_entanglement_with_grid(n, probs, DEFAULT_GRID_1D, 201)
}

/// As [`symmetric_mixture_entanglement`], with `grid_1d` samples for two
/// components and a `grid_2d`-per-axis simplex grid for three.
pub fn symmetric_mixture_entanglement_with_grid(n: usize, probs: &[f64], grid_1d: usize, grid_2d: usize) -> Result<f64> {
    if probs.len() != n + 1 {
        return Err(GmeError::DimensionMismatch {
            expected: n + 1,
            actual: probs.len(),
        });
    }
    let sum: f64 = probs.iter().sum();
    if probs.iter().any(|&p| p < 0.0) || (sum - 1.0).abs() > 1e-10 {
        return Err(GmeError::WeightSumError(sum));
    }
    let ks: Vec<usize> = (0..=n).filter(|&k| probs[k] > 1e-15).collect();
    match ks.as_slice() {
        [k] => Ok(1.0 - lambda_symmetric(n, *k)?.powi(2)),
        [k1, k2] => {
            let pure = ss_pure_curve(n, *k1, *k2, grid_1d)?;
            lower_envelope_1d(&pure)?.eval(probs[*k1] / (probs[*k1] + probs[*k2]))
        }
        [k1, k2, k3] => {
            let ks = [*k1, *k2, *k3];
            let pure = Surface::sample(Domain::Simplex2D, grid_2d, |x, y| {
                let l = three_component_lambda(n, ks, [x, y, 1.0 - x - y]);
                Ok(1.0 - l.min(1.0).powi(2))
            })?;
            lower_envelope_2d(&pure)?.interpolate(probs[*k1], probs[*k2])
        }
        more => Err(GmeError::TooManyComponents(more.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::ww_lambda;
    use proptest::prelude::*;

    fn is_convex(c: &Curve, tol: f64) -> bool {
        (1..c.len() - 1).all(|k| {
            let (x0, x1, x2) = (c.xs[k - 1], c.xs[k], c.xs[k + 1]);
            let interp = c.ys[k - 1] + (c.ys[k + 1] - c.ys[k - 1]) * (x1 - x0) / (x2 - x0);
            c.ys[k] <= interp + tol
        })
    }

    #[test]
    fn curve_validation() {
        assert!(matches!(Curve::new(vec![0.0], vec![1.0]), Err(GmeError::TooFewPoints(1))));
        assert!(Curve::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        let c = Curve::new(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(c.eval(2.0).unwrap(), 1.0);
        assert!(c.eval(3.5).is_err());
    }

    #[test]
    fn convex_curve_unchanged() {
        let c = Curve::sample(-1.0, 1.0, 201, |x| Ok(x * x + 0.3 * x)).unwrap();
        let e = lower_envelope_1d(&c).unwrap();
        for (a, b) in e.ys().iter().zip(c.ys()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn tent_becomes_chord() {
        let c = Curve::sample(0.0, 1.0, 101, |x| Ok(1.0 - (2.0 * x - 1.0).abs() + 0.25)).unwrap();
        let e = lower_envelope_1d(&c).unwrap();
        assert!(e.ys().iter().all(|&y| (y - 0.25).abs() < 1e-12));
    }

    #[test]
    fn ss_curve_gets_flat_chord() {
        let pure = ss_pure_curve(7, 2, 5, 401).unwrap();
        let mixed = lower_envelope_1d(&pure).unwrap();
        let mid = mixed.eval(0.5).unwrap();
        assert!(mid < pure.eval(0.5).unwrap() - 1e-3);
        assert!((mixed.eval(0.45).unwrap() - mid).abs() < 1e-9);
        assert!((mixed.ys()[0] - pure.ys()[0]).abs() < 1e-12);
        assert!(is_convex(&mixed, 1e-12));
    }

    #[test]
    fn known_convex_families_unchanged() {
        let werner = Curve::sample(-1.0, 1.0, 2001, crate::mixed_bipartite::e_werner).unwrap();
        let iso = Curve::sample(0.2, 1.0, 2001, |f| crate::mixed_bipartite::r_function(5, f)).unwrap();
        let ww = Curve::sample(0.0, 1.0, 2001, |s| Ok(1.0 - ww_lambda(s)?.1.powi(2))).unwrap();
        for c in [werner, iso, ww] {
            let Sampled::Curve(e) = vw_mixture_entanglement(&Sampled::Curve(c.clone())).unwrap() else {
                unreachable!()
            };
            let diff = e.ys().iter().zip(c.ys()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(diff < 1e-12, "max change {diff}");
        }
    }

    #[test]
    fn plane_unchanged_in_2d() {
        let s = Surface::sample(Domain::Simplex2D, 41, |x, y| Ok(0.3 * x - 0.7 * y + 0.1)).unwrap();
        let e = lower_envelope_2d(&s).unwrap();
        for (i, j, _, _, v) in s.nodes() {
            assert!((e.value(i, j) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn spike_is_pulled_down() {
        let s = Surface::sample(Domain::Simplex2D, 21, |x, y| Ok(x * x + y * y)).unwrap();
        let mut raised = s.values().clone();
        raised[(5, 5)] += 1.0;
        let spiked = s.with_values(raised).unwrap();
        let e = lower_envelope_2d(&spiked).unwrap();
        // the cheapest support of (x0, y0) among the other nodes is a pair of
        // nearest neighbours, which adds h^2 to x^2 + y^2
        let h = 0.05;
        assert!((e.value(5, 5) - (s.value(5, 5) + h * h)).abs() < 1e-12);
        assert!((e.value(3, 7) - s.value(3, 7)).abs() < 1e-12);
    }

    #[test]
    fn rect_surfaces_refused() {
        let s = Surface::sample(Domain::Rect, 11, |x, y| Ok(x + y)).unwrap();
        assert!(matches!(lower_envelope_2d(&s), Err(GmeError::BadShape(_))));
    }

    #[test]
    fn edge_section_matches_1d() {
        let g = |x: f64| (6.0 * x).sin() * 0.2 + x * x;
        let h = |y: f64| (5.0 * y).cos() * 0.1;
        let s = Surface::sample(Domain::Simplex2D, 61, |x, y| Ok(g(x) + h(y))).unwrap();
        let e2 = lower_envelope_2d(&s).unwrap();
        let c = Curve::new(s.grid_x().to_vec(), s.grid_x().iter().map(|&x| g(x) + h(0.0)).collect()).unwrap();
        let e1 = lower_envelope_1d(&c).unwrap();
        for i in 0..61 {
            assert!((e2.value(i, 0) - e1.ys()[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn interpolation_at_vertices_and_edge() {
        let s = Surface::sample(Domain::Simplex2D, 11, |x, y| Ok(2.0 * x + 3.0 * y)).unwrap();
        for (x, y) in [(1.0, 0.0), (0.0, 1.0), (0.0, 0.0), (0.33, 0.41), (0.55, 0.45)] {
            assert!((s.interpolate(x, y).unwrap() - (2.0 * x + 3.0 * y)).abs() < 1e-12);
        }
        assert!(matches!(s.interpolate(0.7, 0.5), Err(GmeError::OutOfDomain(..))));
    }

    #[test]
    fn symmetric_mixture_values() {
        let s = 0.3;
        let e = symmetric_mixture_entanglement(3, &[0.0, 1.0 - s, s, 0.0]).unwrap();
        assert!((e - (1.0 - ww_lambda(s).unwrap().1.powi(2))).abs() < 1e-6);
        let e = symmetric_mixture_entanglement(4, &[0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((e - 0.625).abs() < 1e-14);
        let e = symmetric_mixture_entanglement(7, &[0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0]).unwrap();
        let chord = lower_envelope_1d(&ss_pure_curve(7, 2, 5, DEFAULT_GRID_1D).unwrap()).unwrap();
        assert!((e - chord.eval(0.5).unwrap()).abs() < 1e-12);
        assert!(matches!(
            symmetric_mixture_entanglement(3, &[0.25; 4]),
            Err(GmeError::TooManyComponents(4))
        ));
    }

    #[test]
    fn three_component_mixture_below_pure_value() {
        let p = [0.2, 0.3, 0.5, 0.0, 0.0];
        let mixed = symmetric_mixture_entanglement_with_grid(4, &p, 2001, 51).unwrap();
        let pure = 1.0 - three_component_lambda(4, [0, 1, 2], [0.2, 0.3, 0.5]).powi(2);
        assert!(mixed >= 0.0 && mixed <= pure + 1e-12);
    }

    proptest! {
        #[test]
        fn envelope_1d_properties(ys in prop::collection::vec(-1.0f64..1.0, 3..60)) {
            let xs: Vec<f64> = (0..ys.len()).map(|i| i as f64 * 0.1).collect();
            let c = Curve::new(xs, ys).unwrap();
            let e = lower_envelope_1d(&c).unwrap();
            for (a, b) in e.ys().iter().zip(c.ys()) {
                prop_assert!(*a <= *b + 1e-12);
            }
            prop_assert!(is_convex(&e, 1e-12));
            let ee = lower_envelope_1d(&e).unwrap();
            for (a, b) in ee.ys().iter().zip(e.ys()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn envelope_2d_properties(seed in 0u64..1000) {
            use rand::Rng;
            let mut r = crate::random::rng(seed, 0);
            let bumps: Vec<(f64, f64, f64)> = (0..4).map(|_| (r.random(), r.random(), r.random::<f64>() - 0.5)).collect();
            let s = Surface::sample(Domain::Simplex2D, 15, |x, y| {
                Ok(bumps.iter().map(|(a, b, h)| h * (-(x - a).powi(2) * 20.0 - (y - b).powi(2) * 20.0).exp()).sum())
            }).unwrap();
            let e = lower_envelope_2d(&s).unwrap();
            for (i, j, _, _, v) in s.nodes() {
                prop_assert!(e.value(i, j) <= v + 1e-12);
            }
            let ee = lower_envelope_2d(&e).unwrap();
            for (i, j, _, _, _) in s.nodes() {
                prop_assert!((ee.value(i, j) - e.value(i, j)).abs() < 1e-12);
            }
        }
    }
}
