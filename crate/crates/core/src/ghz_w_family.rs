//! The three-qubit family `x |GHZ><GHZ| + y |W><W| + (1-x-y) |W~><W~|`.
//!
//! `E_psi(x, y)` comes from the cubic in `closed_forms`. Its convex hull is
//! built in the coordinates `(x, r)` with `y = (1-x) r`: first each `x`
//! slice is flattened across the cusp at `r = 1/2`, then each `r` slice is
//! replaced near `x = 1` by its tangent chord to the GHZ vertex. The result is
//! resampled onto the simplex and checked with random chords.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::ghzw_pure_lambda;
use crate::convexify::{linspace, lower_envelope_2d, Domain, Surface};
use crate::error::{GmeError, Result};
use crate::hartree::{entanglement_eigenvalue, SolverOptions};
use crate::optimize::{maximize_1d, minimize_1d};
use crate::random::rng;
use crate::states::{check_simplex, ghz, ghzw_mix, w_state, w_tilde_state, PureState};

pub const DEFAULT_CHORDS: usize = 10_000;
const SYMMETRY_TOL: f64 = 1e-9;
const CUSP_TOL: f64 = 1e-12;

/// `1 - Lambda^2` of `sqrt(x)|GHZ> + sqrt(y)|W> + sqrt(1-x-y)|W~>`.
pub fn e_psi(x: f64, y: f64) -> Result<f64> {
    let (_, lambda) = ghzw_pure_lambda(x, y)?;
    Ok(1.0 - lambda * lambda)
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < 101 {
        return Err(GmeError::ParamOutOfRange {
            name: "grid",
            value: grid as f64,
        });
    }
    Ok(())
}

/// `E_psi` on a `grid x grid` simplex grid.
pub fn e_psi_surface(grid: usize) -> Result<Surface> {
    check_grid(grid)?;
    Surface::sample(Domain::Simplex2D, grid, e_psi)
}

/// `E_psi(x, (1-x) r)` on a `grid x grid` rectangle; `grid_y` holds `r`.
pub fn e_psi_xr_surface(grid: usize) -> Result<Surface> {
    check_grid(grid)?;
    Surface::sample(Domain::Rect, grid, |x, r| e_psi(x, (1.0 - x) * r.clamp(0.0, 1.0)))
}

/// Interval `[r1, r2]` of an `x` slice replaced by its constant chord.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RSegment {
    pub x: f64,
    pub r1: f64,
    pub r2: f64,
}

/// Tangent abscissa of an `r` slice; `None` when the slice is already convex
/// up to the GHZ vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XTangent {
    pub r: f64,
    pub x0: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvexityCheck {
    pub num_chords: usize,
    pub max_violation: f64,
}

/// What the chord test evaluated: the bilinear interpolant of the final grid,
/// or the surgery function the grid was sampled from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckTarget {
    Interpolated,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurgeryReport {
    pub r_pass_segments: Vec<RSegment>,
    pub x_pass_tangents: Vec<XTangent>,
    pub convexity_check: ConvexityCheck,
    pub check_target: CheckTarget,
    /// Set when the tangent search failed somewhere and the final surface is
    /// the generic lower envelope instead.
    pub fallback: bool,
    pub final_surface: Surface,
}

fn check_symmetry(s: &Surface) -> Result<()> {
    let v = s.values();
    let m = v.ncols();
    let mut worst = 0.0f64;
    for i in 0..v.nrows() {
        for j in 0..m / 2 {
            worst = worst.max((v[(i, j)] - v[(i, m - 1 - j)]).abs());
        }
    }
    if worst > SYMMETRY_TOL {
        return Err(GmeError::SymmetryBroken(worst));
    }
    Ok(())
}

fn r_pass(row: &mut [f64]) -> Option<usize> {
    let mid = (row.len() - 1) / 2;
    let mut jmin = 0;
    for j in 1..=mid {
        if row[j] < row[jmin] {
            jmin = j;
        }
    }
    if row[mid] <= row[jmin] + CUSP_TOL {
        return None;
    }
    let floor = row[jmin];
    let last = row.len() - 1 - jmin;
    row[jmin..=last].iter_mut().for_each(|v| *v = floor);
    Some(jmin)
}

/// Replaces the tail of `g` by its tangent chord to `(xs[n-1], g[n-1])`.
/// The tangent node maximizes the chord slope; it is then located between
/// grid nodes from the sign change of `g'(x)(1-x) - (g(1) - g(x))`.
fn x_pass(xs: &[f64], g: &mut [f64]) -> std::result::Result<Option<f64>, ()> {
    let n = g.len();
    let (x1, e1) = (xs[n - 1], g[n - 1]);
    let slope = |i: usize| (e1 - g[i]) / (x1 - xs[i]);
    let best = (0..n - 1).max_by(|&a, &b| slope(a).total_cmp(&slope(b))).unwrap();
    if best >= n - 2 {
        return Ok(None);
    }
    let h = |i: usize| {
        let d = (g[i + 1] - g[i - 1]) / (xs[i + 1] - xs[i - 1]);
        d * (x1 - xs[i]) - (e1 - g[i])
    };
    let bracket = (best.saturating_sub(2).max(1)..=(best + 1).min(n - 3))
        .find(|&k| h(k) <= 0.0 && h(k + 1) > 0.0)
        .ok_or(())?;
    let (ha, hb) = (h(bracket), h(bracket + 1));
    let u = ha / (ha - hb);
    let x0 = xs[bracket] + u * (xs[bracket + 1] - xs[bracket]);
    let g0 = g[bracket] + u * (g[bracket + 1] - g[bracket]);
    for i in bracket + 1..n {
        g[i] = g0 + (e1 - g0) * (xs[i] - x0) / (x1 - x0);
    }
    Ok(Some(x0))
}

/// Worst violation of `f(t p + (1-t) q) <= t f(p) + (1-t) f(q)` over
/// `chords` random chords with endpoints uniform on the simplex.
pub fn chord_convexity<F>(f: F, chords: usize, seed: u64) -> Result<ConvexityCheck>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut r = rng(seed, 0);
    let point = |r: &mut rand_chacha::ChaCha20Rng| {
        let (u, v): (f64, f64) = (r.random(), r.random());
        if u + v > 1.0 {
            (1.0 - u, 1.0 - v)
        } else {
            (u, v)
        }
    };
    let mut worst = 0.0f64;
    for _ in 0..chords {
        let (p, q) = (point(&mut r), point(&mut r));
        let t: f64 = r.random();
        let m = (t * p.0 + (1.0 - t) * q.0, t * p.1 + (1.0 - t) * q.1);
        let excess = f(m.0, m.1)? - (t * f(p.0, p.1)? + (1.0 - t) * f(q.0, q.1)?);
        worst = worst.max(excess);
    }
    Ok(ConvexityCheck {
        num_chords: chords,
        max_violation: worst,
    })
}

/// Two-pass convexification of `E_psi` given on an `(x, r)` grid (see
/// [`e_psi_xr_surface`]), resampled onto an `out_grid` simplex grid.
/// The `r` grid must have odd length so that `r = 1/2` is a node.
pub fn convexify_surgery(xr: &Surface, out_grid: usize, seed: u64) -> Result<SurgeryReport> {
    if xr.domain() != Domain::Rect {
        return Err(GmeError::BadShape("surgery input must be an (x, r) rectangle".into()));
    }
    let (xs, rs) = (xr.grid_x().to_vec(), xr.grid_y().to_vec());
    if rs.len() % 2 == 0 || rs.len() < 5 || xs.len() < 5 {
        return Err(GmeError::DegenerateGrid("need an odd r grid with r = 1/2 as a node".into()));
    }
    check_symmetry(xr)?;
    let mut v = xr.values().clone();
    let (nx, nr) = (xs.len(), rs.len());

    let rows: Vec<(Vec<f64>, Option<usize>)> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut row: Vec<f64> = (0..nr).map(|j| v[(i, j)]).collect();
            let cut = r_pass(&mut row);
            (row, cut)
        })
        .collect();
    let mut r_pass_segments = Vec::new();
    for (i, (row, cut)) in rows.into_iter().enumerate() {
        for (j, val) in row.into_iter().enumerate() {
            v[(i, j)] = val;
        }
        if let Some(j) = cut {
            r_pass_segments.push(RSegment {
                x: xs[i],
                r1: rs[j],
                r2: rs[nr - 1 - j],
            });
        }
    }

    let cols: Vec<std::result::Result<(Vec<f64>, Option<f64>), f64>> = (0..nr)
        .into_par_iter()
        .map(|j| {
            let mut col: Vec<f64> = (0..nx).map(|i| v[(i, j)]).collect();
            x_pass(&xs, &mut col).map(|x0| (col, x0)).map_err(|_| rs[j])
        })
        .collect();
    let mut x_pass_tangents = Vec::with_capacity(nr);
    let mut failed = None;
    for (j, c) in cols.into_iter().enumerate() {
        match c {
            Ok((col, x0)) => {
                for (i, val) in col.into_iter().enumerate() {
                    v[(i, j)] = val;
                }
                x_pass_tangents.push(XTangent { r: rs[j], x0 });
            }
            Err(r) => {
                failed.get_or_insert(r);
                x_pass_tangents.push(XTangent { r, x0: None });
            }
        }
    }

    let final_surface = match failed {
        None => {
            let flat = xr.with_values(v)?;
            let e_ghz = flat.value(nx - 1, 0);
            Surface::sample(Domain::Simplex2D, out_grid, |x, y| {
                if x >= 1.0 - 1e-12 {
                    Ok(e_ghz)
                } else {
                    flat.interpolate(x, (y / (1.0 - x)).clamp(0.0, 1.0))
                }
            })?
        }
        Some(_) => lower_envelope_2d(&e_psi_surface(out_grid)?)?,
    };
    let convexity_check = chord_convexity(|x, y| final_surface.interpolate(x, y), DEFAULT_CHORDS, seed)?;
    Ok(SurgeryReport {
        r_pass_segments,
        x_pass_tangents,
        convexity_check,
        check_target: CheckTarget::Interpolated,
        fallback: failed.is_some(),
        final_surface,
    })
}

/// Exact counterpart of the grid surgery for `E_psi`: untouched values come
/// straight from the cubic, cusp minima and tangent points are refined
/// against it, and the tangent abscissa is interpolated in `r`.
struct SurgeryModel {
    onset: Option<f64>,
    rs: Vec<f64>,
    x0: Vec<Option<f64>>,
    e1: f64,
}

impl SurgeryModel {
    fn build(grid: &SurgeryReport, xs: &[f64]) -> Result<Self> {
        let step = xs[1] - xs[0];
        let onset = grid.r_pass_segments.first().map(|s| s.x - step);
        let e1 = e_psi(1.0, 0.0)?;
        let half: Vec<XTangent> = grid.x_pass_tangents.iter().filter(|t| t.r <= 0.5).copied().collect();
        let mut model = Self {
            onset,
            rs: half.iter().map(|t| t.r).collect(),
            x0: vec![None; half.len()],
            e1,
        };
        let refined: Vec<Option<f64>> = half
            .par_iter()
            .map(|t| {
                t.x0.map(|x0| {
                    let lo = (x0 - 3.0 * step).max(0.0);
                    let hi = (x0 + 3.0 * step).min(1.0 - step);
                    let slope = |x: f64| (e1 - model.slice(x, t.r)) / (1.0 - x);
                    maximize_1d(slope, lo, hi, 32, 1e-12).0
                })
            })
            .collect();
        model.x0 = refined;
        Ok(model)
    }

    /// `E_psi` along `x = const` after flattening across the cusp.
    fn slice(&self, x: f64, r: f64) -> f64 {
        let r = r.min(1.0 - r);
        let e = |s: f64| e_psi(x, (1.0 - x) * s).unwrap_or(f64::NAN);
        let base = e(r);
        match self.onset {
            Some(o) if x >= o && x < 1.0 => {
                let (r1, floor) = minimize_1d(e, 0.0, 0.5, 64, 1e-10);
                if e(0.5) > floor + CUSP_TOL && r >= r1 {
                    floor
                } else {
                    base
                }
            }
            _ => base,
        }
    }

    fn tangent(&self, r: f64) -> Option<f64> {
        let k = self.rs.partition_point(|&g| g <= r).clamp(1, self.rs.len() - 1) - 1;
        let u = ((r - self.rs[k]) / (self.rs[k + 1] - self.rs[k])).clamp(0.0, 1.0);
        match (self.x0[k], self.x0[k + 1]) {
            (Some(a), Some(b)) => Some(a + u * (b - a)),
            (a, b) => a.or(b),
        }
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if check_simplex(x, y).is_err() {
            return Err(GmeError::OutOfDomain(x, y));
        }
        if x >= 1.0 - 1e-12 {
            return Ok(self.e1);
        }
        let r = (y / (1.0 - x)).clamp(0.0, 1.0);
        let r = r.min(1.0 - r);
        Ok(match self.tangent(r) {
            Some(x0) if x > x0 => {
                let g0 = self.slice(x0, r);
                g0 + (self.e1 - g0) * (x - x0) / (1.0 - x0)
            }
            _ => self.slice(x, r),
        })
    }
}

/// Surgery for `E_psi` on a `grid x grid` `(x, r)` sample (`grid` is rounded
/// up to odd). The grid passes locate the cusp segments and tangents; the
/// final surface is then sampled from the exact surgery function, and the
/// chord test runs on that function rather than on its bilinear interpolant.
pub fn surgery(grid: usize, seed: u64) -> Result<SurgeryReport> {
    let grid = grid | 1;
    let xr = e_psi_xr_surface(grid)?;
    let coarse = convexify_surgery(&xr, grid, seed)?;
    if coarse.fallback {
        return Ok(coarse);
    }
    let model = SurgeryModel::build(&coarse, xr.grid_x())?;
    let final_surface = Surface::sample(Domain::Simplex2D, grid, |x, y| model.eval(x, y))?;
    let convexity_check = chord_convexity(|x, y| model.eval(x, y), DEFAULT_CHORDS, seed)?;
    let mut x_pass_tangents = coarse.x_pass_tangents;
    for t in x_pass_tangents.iter_mut() {
        if t.x0.is_some() {
            t.x0 = model.tangent(t.r.min(1.0 - t.r));
        }
    }
    Ok(SurgeryReport {
        r_pass_segments: coarse.r_pass_segments,
        x_pass_tangents,
        convexity_check,
        check_target: CheckTarget::Exact,
        fallback: false,
        final_surface,
    })
}

/// Mixed-state entanglement at `(x, y)` read off the surgery surface.
pub fn e_rho(x: f64, y: f64, report: &SurgeryReport) -> Result<f64> {
    if check_simplex(x, y).is_err() {
        return Err(GmeError::OutOfDomain(x, y));
    }
    report.final_surface.interpolate(x, y.min(1.0 - x))
}

/// Negativity of `ghzw_mix(x, y)` with respect to the third qubit.
pub fn negativity(x: f64, y: f64) -> Result<f64> {
    ghzw_mix(x, y)?.negativity(2)
}

pub fn negativity_surface(grid: usize) -> Result<Surface> {
    check_grid(grid)?;
    Surface::sample(Domain::Simplex2D, grid, negativity)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrderingEntry {
    pub n1: f64,
    pub n2: f64,
    pub e1: f64,
    pub e2: f64,
    pub order_agrees: bool,
}

fn sign(a: f64, b: f64) -> i8 {
    let d = a - b;
    if d.abs() <= 1e-12 {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

/// Compares negativity and `E_rho` orderings for each pair of points.
pub fn ordering_report(pairs: &[((f64, f64), (f64, f64))], report: &SurgeryReport) -> Result<Vec<OrderingEntry>> {
    pairs
        .iter()
        .map(|&((x1, y1), (x2, y2))| {
            let (n1, n2) = (negativity(x1, y1)?, negativity(x2, y2)?);
            let (e1, e2) = (e_rho(x1, y1, report)?, e_rho(x2, y2, report)?);
            Ok(OrderingEntry {
                n1,
                n2,
                e1,
                e2,
                order_agrees: sign(n1, n2) == sign(e1, e2),
            })
        })
        .collect()
}

/// `sqrt(x)|GHZ> + e^{i p1} sqrt(y)|W> + e^{i p2} sqrt(1-x-y)|W~>`.
pub fn ghzw_phased(x: f64, y: f64, p1: f64, p2: f64) -> Result<PureState> {
    check_simplex(x, y)?;
    let z = (1.0 - x - y).max(0.0);
    let (g, w, wt) = (ghz(3)?, w_state(), w_tilde_state());
    let amps = (0..8)
        .map(|k| {
            g.amplitudes()[k] * x.sqrt()
                + w.amplitudes()[k] * Complex64::from_polar(y.sqrt(), p1)
                + wt.amplitudes()[k] * Complex64::from_polar(z.sqrt(), p2)
        })
        .collect();
    PureState::new(vec![2; 3], amps)
}

/// Smallest HOPM entanglement over a `steps x steps` grid of relative phases.
/// Returns `(phase-free E_psi, min over phases, argmin phases)`.
pub fn phase_scan(x: f64, y: f64, steps: usize, opts: &SolverOptions) -> Result<(f64, f64, (f64, f64))> {
    let base = e_psi(x, y)?;
    let phases = linspace(0.0, std::f64::consts::TAU, steps + 1);
    let grid: Vec<(f64, f64)> = phases[..steps]
        .iter()
        .flat_map(|&a| phases[..steps].iter().map(move |&b| (a, b)))
        .collect();
    let best = grid
        .par_iter()
        .map(|&(a, b)| {
            let e = entanglement_eigenvalue(&ghzw_phased(x, y, a, b)?, opts)?.e_sin2;
            Ok((e, (a, b)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|p, q| p.0.total_cmp(&q.0))
        .expect("non-empty phase grid");
    Ok((base, best.0, best.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::ww_lambda;

    #[test]
    fn e_psi_special_points() {
        assert!((e_psi(1.0, 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((e_psi(0.0, 1.0).unwrap() - 5.0 / 9.0).abs() < 1e-12);
        assert!((e_psi(0.0, 0.0).unwrap() - 5.0 / 9.0).abs() < 1e-12);
        assert!(e_psi(0.25, 0.375).unwrap().abs() < 1e-12);
        for s in [0.1, 0.37, 0.8] {
            let (_, l) = ww_lambda(s).unwrap();
            assert!((e_psi(0.0, s).unwrap() - (1.0 - l * l)).abs() < 1e-10);
        }
        assert!(e_psi_surface(50).is_err());
    }

    #[test]
    fn xr_surface_is_symmetric() {
        let s = e_psi_xr_surface(101).unwrap();
        check_symmetry(&s).unwrap();
    }

    #[test]
    fn asymmetric_input_is_refused() {
        let s = e_psi_xr_surface(101).unwrap();
        let mut v = s.values().clone();
        v[(10, 3)] += 1e-6;
        let bad = s.with_values(v).unwrap();
        assert!(matches!(convexify_surgery(&bad, 101, 1), Err(GmeError::SymmetryBroken(_))));
    }

    #[test]
    fn x_pass_on_concave_tail() {
        let xs = linspace(0.0, 1.0, 101);
        let mut g: Vec<f64> = xs.iter().map(|&x| x * x - 0.8 * x.powi(4)).collect();
        let before = g.clone();
        let x0 = x_pass(&xs, &mut g).unwrap().unwrap();
        // tangent from (1, 0.2) to x^2 - 0.8 x^4
        let p = |x: f64| 2.4 * x.powi(4) - 3.2 * x.powi(3) - x * x + 2.0 * x - 0.2;
        assert!(p(x0).abs() < 1e-3, "x0 = {x0}");
        // g(x0) is interpolated linearly, which overshoots by O(h^2 g'')
        for (a, b) in g.iter().zip(&before) {
            assert!(a <= &(b + 1e-4));
        }
        let mut convex: Vec<f64> = xs.iter().map(|&x| x * x).collect();
        assert_eq!(x_pass(&xs, &mut convex), Ok(None));
    }

    #[test]
    fn r_pass_flattens_cusp() {
        let rs = linspace(0.0, 1.0, 101);
        let mut row: Vec<f64> = rs.iter().map(|&r| (r - 0.3).powi(2).min((r - 0.7).powi(2))).collect();
        let j = r_pass(&mut row).unwrap();
        assert!((rs[j] - 0.3).abs() < 1e-12);
        assert!(row[30..=70].iter().all(|&v| v.abs() < 1e-20));
        let mut bowl: Vec<f64> = rs.iter().map(|&r| (r - 0.5).powi(2)).collect();
        assert_eq!(r_pass(&mut bowl), None);
    }

    #[test]
    fn coarse_surgery() {
        let rep = convexify_surgery(&e_psi_xr_surface(201).unwrap(), 201, 7).unwrap();
        assert_eq!(rep.check_target, CheckTarget::Interpolated);
        assert!(!rep.fallback);
        assert!(rep.r_pass_segments.iter().all(|s| s.x > 0.5));
        for seg in &rep.r_pass_segments {
            assert!((seg.r1 + seg.r2 - 1.0).abs() < 1e-12);
        }
        assert!((e_rho(1.0, 0.0, &rep).unwrap() - 0.5).abs() < 1e-12);
        assert!((e_rho(0.0, 1.0, &rep).unwrap() - 5.0 / 9.0).abs() < 1e-12);
        assert!(e_rho(0.25, 0.375, &rep).unwrap().abs() < 1e-6);
        assert!(matches!(e_rho(0.8, 0.8, &rep), Err(GmeError::OutOfDomain(..))));
        for (i, j, _, _, v) in rep.final_surface.nodes() {
            let x = rep.final_surface.grid_x()[i];
            let y = rep.final_surface.grid_y()[j].min(1.0 - x);
            assert!(v <= e_psi(x, y).unwrap() + 1e-3);
        }
    }

    #[test]
    fn exact_surgery_is_convex_and_below_e_psi() {
        let rep = surgery(201, 3).unwrap();
        assert_eq!(rep.check_target, CheckTarget::Exact);
        assert!(rep.convexity_check.max_violation <= 1e-7, "{:?}", rep.convexity_check);
        for (_, _, x, y, v) in rep.final_surface.nodes() {
            let e = e_psi(x, y.min(1.0 - x)).unwrap();
            // E_psi goes like sqrt(1-x-y) at the edge, so rounding in z costs ~1e-8
            assert!(v <= e + 1e-7, "({x}, {y}): {v} > {e}");
            if x < 0.7 {
                assert!((v - e).abs() < 1e-7);
            }
        }
        let mid = rep.x_pass_tangents.iter().find(|t| (t.r - 0.5).abs() < 1e-12).unwrap();
        assert!((0.7..0.9).contains(&mid.x0.unwrap()));
        assert_eq!(rep.x_pass_tangents.len(), 201);
    }

    #[test]
    fn negativity_values() {
        assert!((negativity(1.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((negativity(0.0, 1.0).unwrap() - 8f64.sqrt() / 3.0).abs() < 1e-10);
        assert!(negativity(0.25, 0.375).unwrap().abs() < 1e-9);
        let rho = ghzw_mix(0.3, 0.2).unwrap();
        let n: Vec<f64> = (0..3).map(|p| rho.negativity(p).unwrap()).collect();
        assert!((n[0] - n[1]).abs() < 1e-12 && (n[1] - n[2]).abs() < 1e-12);
    }

    #[test]
    fn phased_state_matches_real_one() {
        let a = ghzw_phased(0.3, 0.2, 0.0, 0.0).unwrap();
        let b = crate::states::ghzw_pure(0.3, 0.2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
    }
}
