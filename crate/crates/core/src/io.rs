//! JSON state files and CSV/number formatting.
//!
//! State files look like `{"dims":[2,2],"amplitudes":[[re,im],...]}` or
//! `{"dims":[2,2],"matrix":[[[re,im],...],...]}` and use the crate-wide
//! amplitude ordering. Floats are written with 17 significant digits.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::{GmeError, Result};
use crate::states::{CMatrix, DensityMatrix, PureState};

/// `%g`-style formatting with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV with a header row, 12 significant digits and LF line endings.
pub fn csv<I: IntoIterator<Item = Vec<f64>>>(headers: &[&str], rows: I) -> String {
    let mut out = headers.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_sig(v, 12)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            return writer.write_all(b"0.0");
        }
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with every float at 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| GmeError::Parse(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| GmeError::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct PureFile {
    dims: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DensityFile {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug)]
pub enum StateFile {
    Pure(PureState),
    Density(DensityMatrix),
}

fn pair(c: &Complex64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn pure_to_json(psi: &PureState) -> Result<String> {
    to_json(&PureFile {
        dims: psi.dims().to_vec(),
        amplitudes: psi.amplitudes().iter().map(pair).collect(),
    })
}

pub fn density_to_json(rho: &DensityMatrix) -> Result<String> {
    let m = rho.matrix();
    to_json(&DensityFile {
        dims: rho.dims().to_vec(),
        matrix: (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect())
            .collect(),
    })
}

/// Parses either kind of state file; pure amplitudes are normalized, density
/// matrices are validated.
pub fn parse_state(text: &str) -> Result<StateFile> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| GmeError::Parse(e.to_string()))?;
    if value.get("amplitudes").is_some() {
        let f: PureFile = serde_json::from_value(value).map_err(|e| GmeError::Parse(e.to_string()))?;
        let amps = f.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(StateFile::Pure(PureState::new(f.dims, amps)?))
    } else if value.get("matrix").is_some() {
        let f: DensityFile = serde_json::from_value(value).map_err(|e| GmeError::Parse(e.to_string()))?;
        let n = f.matrix.len();
        if f.matrix.iter().any(|row| row.len() != n) {
            return Err(GmeError::Parse("density matrix is not square".into()));
        }
        let m = CMatrix::from_fn(n, n, |i, j| {
            let [re, im] = f.matrix[i][j];
            Complex64::new(re, im)
        });
        Ok(StateFile::Density(DensityMatrix::new(f.dims, m)?))
    } else {
        Err(GmeError::Parse("expected an \"amplitudes\" or \"matrix\" field".into()))
    }
}

pub fn read_state_file(path: &Path) -> Result<StateFile> {
    let text = std::fs::read_to_string(path).map_err(|e| GmeError::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_pure_state, rng};
    use crate::states::{density, werner};
    use proptest::prelude::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(fmt_sig(0.5, 12), "0.5");
        assert_eq!(fmt_sig(5.0 / 9.0, 12), "0.555555555556");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(-0.0, 12), "0");
        assert_eq!(fmt_sig(1.5e-7, 12), "1.5e-07");
        assert_eq!(fmt_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(fmt_sig(0.999_999_999_999_9, 12), "1");
        assert_eq!(fmt_sig(f64::NAN, 12), "nan");
    }

    #[test]
    fn csv_layout() {
        let text = csv(&["x", "value"], vec![vec![0.0, 0.25], vec![1.0, 1.0 / 3.0]]);
        assert_eq!(text, "x,value\n0,0.25\n1,0.333333333333\n");
    }

    #[test]
    fn pure_round_trip_is_bit_exact() {
        let psi = random_pure_state(&[2, 3], &mut rng(4, 0)).unwrap();
        let text = pure_to_json(&psi).unwrap();
        match parse_state(&text).unwrap() {
            StateFile::Pure(back) => {
                for (a, b) in back.amplitudes().iter().zip(psi.amplitudes()) {
                    assert!((a - b).norm() < 1e-16);
                }
            }
            StateFile::Density(_) => panic!("wrong kind"),
        }
    }

    #[test]
    fn density_round_trip() {
        let rho = werner(2, -0.3).unwrap();
        let text = density_to_json(&rho).unwrap();
        match parse_state(&text).unwrap() {
            StateFile::Density(back) => assert!(back.max_abs_diff(&rho) < 1e-16),
            StateFile::Pure(_) => panic!("wrong kind"),
        }
        let g = density(&crate::states::PureState::basis(&[2, 2], &[0, 0]).unwrap());
        assert!(density_to_json(&g).unwrap().starts_with("{\"dims\":[2,2],\"matrix\":[[[1.0000000000000000e0,0.0]"));
    }

    #[test]
    fn malformed_files() {
        assert!(matches!(parse_state("{}"), Err(GmeError::Parse(_))));
        assert!(matches!(parse_state("not json"), Err(GmeError::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"dims":[2],"amplitudes":[[0,0],[0,0]]}"#),
            Err(GmeError::ZeroVector(_))
        ));
        assert!(matches!(
            parse_state(r#"{"dims":[2,2],"amplitudes":[[1,0]]}"#),
            Err(GmeError::DimensionMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(v in -1e6f64..1e6) {
            let text = to_json(&v).unwrap();
            let back: f64 = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }
    }
}
