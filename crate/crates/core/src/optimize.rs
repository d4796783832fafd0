//! Bounded grid-then-zoom maximization for smooth low-dimensional objectives.

const ZOOM_POINTS: usize = 16;
const MAX_ZOOMS: usize = 200;

/// Maximizes `f` over `[lo, hi]`: dense scan on `grid` points, then repeated
/// re-gridding of the bracket around the incumbent until its width drops
/// below `tol`. Returns `(argmax, max)`.
pub fn maximize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> (f64, f64) {
    let grid = grid.max(3);
    let h = (hi - lo) / (grid - 1) as f64;
    let (mut best_x, mut best_f) = (lo, f(lo));
    for i in 1..grid {
        let x = lo + i as f64 * h;
        let v = f(x);
        if v > best_f {
            best_x = x;
            best_f = v;
        }
    }
    let mut half = h;
    for _ in 0..MAX_ZOOMS {
        if 2.0 * half < tol {
            break;
        }
        let a = (best_x - half).max(lo);
        let b = (best_x + half).min(hi);
        let step = (b - a) / (ZOOM_POINTS - 1) as f64;
        for i in 0..ZOOM_POINTS {
            let x = a + i as f64 * step;
            let v = f(x);
            if v > best_f {
                best_x = x;
                best_f = v;
            }
        }
        half = step;
    }
    (best_x, best_f)
}

/// Two-parameter version of [`maximize_1d`] over a box.
pub fn maximize_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    (xlo, xhi): (f64, f64),
    (ylo, yhi): (f64, f64),
    grid: usize,
    tol: f64,
) -> ((f64, f64), f64) {
    let grid = grid.max(3);
    let hx = (xhi - xlo) / (grid - 1) as f64;
    let hy = (yhi - ylo) / (grid - 1) as f64;
    let mut best = ((xlo, ylo), f(xlo, ylo));
    for i in 0..grid {
        let x = xlo + i as f64 * hx;
        for j in 0..grid {
            let y = ylo + j as f64 * hy;
            let v = f(x, y);
            if v > best.1 {
                best = ((x, y), v);
            }
        }
    }
    let (mut rx, mut ry) = (hx, hy);
    for _ in 0..MAX_ZOOMS {
        if 2.0 * rx.max(ry) < tol {
            break;
        }
        let ((cx, cy), _) = best;
        let (ax, bx) = ((cx - rx).max(xlo), (cx + rx).min(xhi));
        let (ay, by) = ((cy - ry).max(ylo), (cy + ry).min(yhi));
        let sx = (bx - ax) / (ZOOM_POINTS - 1) as f64;
        let sy = (by - ay) / (ZOOM_POINTS - 1) as f64;
        for i in 0..ZOOM_POINTS {
            let x = ax + i as f64 * sx;
            for j in 0..ZOOM_POINTS {
                let y = ay + j as f64 * sy;
                let v = f(x, y);
                if v > best.1 {
                    best = ((x, y), v);
                }
            }
        }
        rx = sx;
        ry = sy;
    }
    best
}

/// Minimizes `f` over `[lo, hi]`; see [`maximize_1d`].
pub fn minimize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, grid: usize, tol: f64) -> (f64, f64) {
    let (x, v) = maximize_1d(|t| -f(t), lo, hi, grid, tol);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_peak() {
        let (x, v) = maximize_1d(|t| 1.0 - (t - 0.3137).powi(2), 0.0, 1.0, 101, 1e-12);
        assert!((x - 0.3137).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn boundary_peak() {
        let (x, _) = maximize_1d(|t| t, 0.0, 2.0, 11, 1e-12);
        assert_eq!(x, 2.0);
    }

    #[test]
    fn two_dimensional_peak() {
        let ((x, y), v) = maximize_2d(
            |a, b| (a - 0.7).cos() * (b + 0.2).cos(),
            (0.0, 3.0),
            (-1.0, 1.0),
            64,
            1e-12,
        );
        assert!((x - 0.7).abs() < 1e-7 && (y + 0.2).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-13);
    }
}
