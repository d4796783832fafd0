//! Real roots of low-degree polynomials through companion-matrix eigenvalues.

use nalgebra::DMatrix;

/// Evaluates a polynomial given in descending powers.
pub fn eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * t + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len().saturating_sub(1);
    coeffs[..deg]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (deg - i) as f64)
        .collect()
}

/// All real roots of `coeffs[0] t^m + ... + coeffs[m]`, ascending, duplicates
/// merged. Leading coefficients that are negligible relative to the largest
/// one are dropped, so a cubic whose top coefficient vanishes is solved as a
/// quadratic. Each root gets one Newton step against the original polynomial.
pub fn real_roots(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let start = coeffs
        .iter()
        .position(|c| c.abs() > 1e-14 * scale)
        .unwrap_or(coeffs.len());
    let p = &coeffs[start..];
    let deg = p.len().saturating_sub(1);
    let mut roots = match deg {
        0 => Vec::new(),
        1 => vec![-p[1] / p[0]],
        _ => {
            let mut comp = DMatrix::<f64>::zeros(deg, deg);
            for j in 0..deg {
                comp[(0, j)] = -p[j + 1] / p[0];
            }
            for i in 1..deg {
                comp[(i, i - 1)] = 1.0;
            }
            comp.complex_eigenvalues()
                .iter()
                .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
                .map(|z| z.re)
                .collect()
        }
    };
    let dp = derivative(p);
    for r in roots.iter_mut() {
        let slope = eval(&dp, *r);
        if slope.abs() > 1e-300 {
            let step = eval(p, *r) / slope;
            if step.is_finite() && step.abs() < 1e-3 * (1.0 + r.abs()) {
                *r -= step;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9 * (1.0 + b.abs()));
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_cubics() {
        // t^3 + 2t^2 - 2t - 1 = (t - 1)(t^2 + 3t + 1)
        let r = real_roots(&[1.0, 2.0, -2.0, -1.0]);
        assert_eq!(r.len(), 3);
        let s5 = 5f64.sqrt();
        let expect = [(-3.0 - s5) / 2.0, (-3.0 + s5) / 2.0, 1.0];
        for (a, b) in r.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn degree_drops() {
        let r = real_roots(&[0.0, 2.0, 0.0, -1.0]);
        assert_eq!(r.len(), 2);
        assert!((r[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(real_roots(&[0.0, 0.0, 3.0, -6.0]), vec![2.0]);
        assert!(real_roots(&[0.0, 0.0, 0.0, 1.0]).is_empty());
        assert!(real_roots(&[1.0, 0.0, 1.0]).is_empty());
    }

    #[test]
    fn zero_and_double_roots() {
        let r = real_roots(&[1.0, 0.0, -2.0, 0.0]);
        assert_eq!(r.len(), 3);
        assert!(r[1].abs() < 1e-15);
        assert!((r[2] - 2f64.sqrt()).abs() < 1e-14);
        // (t - 1)^2 (t + 2)
        let r = real_roots(&[1.0, 0.0, -3.0, 2.0]);
        assert!(r.iter().any(|x| (x - 1.0).abs() < 1e-7));
        assert!(r.iter().any(|x| (x + 2.0).abs() < 1e-13));
    }

    proptest! {
        #[test]
        fn recovers_planted_roots(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, lead in 0.1f64..5.0) {
            prop_assume!((a - b).abs() > 1e-2 && (b - c).abs() > 1e-2 && (a - c).abs() > 1e-2);
            let coeffs = [lead, -lead * (a + b + c), lead * (a * b + b * c + a * c), -lead * a * b * c];
            let r = real_roots(&coeffs);
            prop_assert_eq!(r.len(), 3);
            for x in [a, b, c] {
                prop_assert!(r.iter().any(|y| (x - y).abs() < 1e-9));
            }
            for y in r {
                prop_assert!(eval(&coeffs, y).abs() < 1e-10);
            }
        }
    }
}
