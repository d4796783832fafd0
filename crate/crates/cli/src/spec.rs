//! State specifications such as `ghz:3`, `s:7,2` or `file:rho.json`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gme_core::io::{read_state_file, StateFile};
use gme_core::states::{
    density, determinant_state, generalized_determinant, ghz, symmetric_state, w_state, w_tilde_state,
};
use gme_core::{DensityMatrix, PureState};

fn numbers<T: std::str::FromStr>(args: &str, count: usize, spec: &str) -> Result<Vec<T>> {
    let parts: Vec<&str> = args.split(',').map(str::trim).collect();
    if parts.len() != count {
        bail!("`{spec}` expects {count} comma-separated argument(s)");
    }
    parts
        .iter()
        .map(|p| p.parse::<T>().map_err(|_| anyhow!("`{p}` in `{spec}` is not a valid number")))
        .collect()
}

/// Parses a pure-state spec: `ghz:n`, `w`, `wt`, `s:n,k`, `det:n`,
/// `gdet:d,p` or `file:path.json`.
pub fn pure(spec: &str) -> Result<PureState> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let psi = match name {
        "w" => w_state(),
        "wt" | "w~" => w_tilde_state(),
        "ghz" => ghz(numbers(args, 1, spec)?[0])?,
        "det" => determinant_state(numbers(args, 1, spec)?[0])?,
        "s" => {
            let v: Vec<usize> = numbers(args, 2, spec)?;
            symmetric_state(v[0], v[1])?
        }
        "gdet" => {
            let v: Vec<usize> = numbers(args, 2, spec)?;
            generalized_determinant(v[0], v[1])?
        }
        "file" => match read(args)? {
            StateFile::Pure(psi) => psi,
            StateFile::Density(_) => bail!("{args} holds a density matrix, expected a pure state"),
        },
        _ => bail!("unknown state `{spec}` (try ghz:3, w, wt, s:4,2, det:3, gdet:2,1 or file:path.json)"),
    };
    Ok(psi)
}

/// A density-matrix spec: `maximally-mixed:n` (n qubits), `file:path.json`
/// (pure or mixed) or any pure-state spec.
pub fn mixed(spec: &str) -> Result<DensityMatrix> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "maximally-mixed" => {
            let n: usize = numbers(args, 1, spec)?[0];
            Ok(DensityMatrix::maximally_mixed(&vec![2; n])?)
        }
        "file" => Ok(match read(args)? {
            StateFile::Pure(psi) => density(&psi),
            StateFile::Density(rho) => rho,
        }),
        _ => Ok(density(&pure(spec)?)),
    }
}

fn read(path: &str) -> Result<StateFile> {
    if path.is_empty() {
        bail!("`file:` needs a path");
    }
    read_state_file(Path::new(path)).with_context(|| format!("reading {path}"))
}

/// Comma-separated probabilities.
pub fn probabilities(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("`{p}` is not a probability"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_states() {
        assert_eq!(pure("ghz:3").unwrap().dims(), &[2, 2, 2]);
        assert_eq!(pure("s:4,2").unwrap().dims(), &[2, 2, 2, 2]);
        assert!(pure("w").unwrap().max_abs_diff(&w_state()) == 0.0);
        assert_eq!(pure("gdet:3,1").unwrap().dims(), &[3, 3, 3]);
        assert_eq!(mixed("maximally-mixed:2").unwrap().dims(), &[2, 2]);
    }

    #[test]
    fn malformed_specs() {
        for bad in ["ghz", "ghz:x", "s:4", "bogus", "file:"] {
            assert!(pure(bad).is_err(), "{bad}");
        }
        assert!(mixed("maximally-mixed:").is_err());
        assert!(probabilities("0.5,a").is_err());
    }
}
