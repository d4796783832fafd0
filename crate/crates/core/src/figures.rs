//! CSV data behind figures 1 to 10; figure 10 is the negativity surface.

use rand::Rng;
use rayon::prelude::*;

use crate::closed_forms::{gw_entanglement, ww_lambda};
use crate::convexify::{linspace, lower_envelope_1d, ss_pure_curve, Curve, Surface};
use crate::error::{GmeError, Result};
use crate::ghz_w_family::{e_psi, e_psi_surface, e_psi_xr_surface, negativity_surface, surgery};
use crate::io::csv;
use crate::random::rng;

pub const DEFAULT_CURVE_POINTS: usize = 201;
pub const DEFAULT_SURFACE_GRID: usize = 101;
pub const GW_SAMPLES: usize = 200;
pub const FIG7_X: [f64; 8] = [0.8, 0.85, 0.9, 0.92, 0.94, 0.96, 0.98, 1.0];
pub const FIG8_R: [f64; 5] = [0.0, 0.1, 0.2, 0.3, 0.5];

/// One output file: a name such as `fig2_samples.csv` and its contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FigureFile {
    pub name: String,
    pub csv: String,
}

fn file(name: &str, csv: String) -> FigureFile {
    FigureFile {
        name: name.to_string(),
        csv,
    }
}

fn columns(xs: &[f64], cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    xs.iter()
        .enumerate()
        .map(|(i, &x)| std::iter::once(x).chain(cols.iter().map(|c| c[i])).collect())
        .collect()
}

fn ww_curve(points: usize) -> Result<Curve> {
    Curve::sample(0.0, 1.0, points, |s| {
        let (_, l) = ww_lambda(s)?;
        Ok(1.0 - l * l)
    })
}

fn pure_and_hull(name: &str, head: &str, pure: Curve) -> Result<FigureFile> {
    let hull = lower_envelope_1d(&pure)?;
    let rows = columns(pure.xs(), &[pure.ys().to_vec(), hull.ys().to_vec()]);
    Ok(file(name, csv(&[head, "E_pure", "E_mixed"], rows)))
}

fn gw_figure(points: usize, seed: u64) -> Result<Vec<FigureFile>> {
    let s = linspace(0.0, 1.0, points);
    let curve = |phi: f64| s.par_iter().map(|&v| gw_entanglement(v, phi)).collect::<Result<Vec<_>>>();
    let (zero, pi) = (curve(0.0)?, curve(std::f64::consts::PI)?);
    let mut r = rng(seed, 2);
    let draws: Vec<(f64, f64)> = (0..GW_SAMPLES)
        .map(|_| (r.random::<f64>(), r.random::<f64>() * std::f64::consts::TAU))
        .collect();
    let dots = draws
        .par_iter()
        .map(|&(s, phi)| Ok(vec![s, phi, gw_entanglement(s, phi)?]))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        file("fig2.csv", csv(&["s", "E_phi0", "E_phiPi"], columns(&s, &[zero, pi]))),
        file("fig2_samples.csv", csv(&["s", "phi", "E"], dots)),
    ])
}

fn slices(name: &str, head: &str, labels: &[f64], prefix: &str, points: usize, f: impl Fn(f64, f64) -> Result<f64> + Sync) -> Result<FigureFile> {
    let grid = linspace(0.0, 1.0, points);
    let cols = labels
        .iter()
        .map(|&l| grid.par_iter().map(|&t| f(l, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = std::iter::once(head.to_string())
        .chain(labels.iter().map(|l| format!("{prefix}{l}")))
        .collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(file(name, csv(&names, columns(&grid, &cols))))
}

/// E_psi at `(x, (1-x) r)`.
fn e_xr(x: f64, r: f64) -> Result<f64> {
    e_psi(x, (1.0 - x) * r)
}

fn surface_file(name: &str, heads: [&str; 3], s: &Surface) -> FigureFile {
    file(name, s.to_csv(&heads))
}

/// Files for figure `id`. `grid` is the number of points per axis
/// (defaults: 201 for curves, 101 for surfaces); `seed` drives the random
/// samples of figure 2 and the convexity check of figure 9.
pub fn figure(id: u8, grid: Option<usize>, seed: u64) -> Result<Vec<FigureFile>> {
    let points = grid.unwrap_or(DEFAULT_CURVE_POINTS);
    let surf = grid.unwrap_or(DEFAULT_SURFACE_GRID);
    Ok(match id {
        1 => vec![pure_and_hull("fig1.csv", "s", ww_curve(points)?)?],
        2 => gw_figure(points, seed)?,
        3 => vec![pure_and_hull("fig3.csv", "r", ss_pure_curve(7, 2, 5, points)?)?],
        4 => vec![surface_file("fig4.csv", ["x", "y", "E_psi"], &e_psi_surface(surf)?)],
        5 => {
            let c = Curve::sample(0.0, 1.0, points, |x| e_psi(x, (1.0 - x) / 2.0))?;
            vec![file("fig5.csv", c.to_csv(&["x", "E_psi"]))]
        }
        6 => vec![surface_file("fig6.csv", ["x", "r", "E_psi"], &e_psi_xr_surface(surf)?)],
        7 => vec![slices("fig7.csv", "r", &FIG7_X, "E_x", points, e_xr)?],
        8 => vec![slices("fig8.csv", "x", &FIG8_R, "E_r", points, |r, x| e_xr(x, r))?],
        9 => vec![surface_file("fig9.csv", ["x", "y", "E_rho"], &surgery(surf, seed)?.final_surface)],
        10 => vec![surface_file("fig10.csv", ["x", "y", "N"], &negativity_surface(surf)?)],
        _ => {
            return Err(GmeError::ParamOutOfRange {
                name: "figure id",
                value: id as f64,
            })
        }
    })
}
