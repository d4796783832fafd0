//! `gme`: geometric measure of entanglement from the command line.

mod spec;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gme_core::convexify::symmetric_mixture_entanglement;
use gme_core::figures::figure;
use gme_core::ghz_w_family::{e_rho, negativity, surgery};
use gme_core::hartree::DEFAULT_SEED;
use gme_core::io::{csv, fmt_sig, to_json};
use gme_core::mixed_bipartite::{e_isotropic, e_two_qubit, e_werner};
use gme_core::witnesses::{detector, optimal_witness, witness_validity_range};
use gme_core::{entanglement_eigenvalue, GmeError, SolverOptions};
use serde_json::json;

const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;
const EXIT_NOT_ENTANGLED: u8 = 4;

#[derive(Parser)]
#[command(name = "gme", version, about = "Geometric measure of entanglement")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Convergence tolerance on the overlap per sweep.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Random restarts of the product-state search.
    #[arg(long, global = true, default_value_t = 20)]
    restarts: usize,
    /// Sweep limit per restart.
    #[arg(long, global = true, default_value_t = 10_000)]
    max_sweeps: usize,
    /// Seed for the random restarts and sampled figure points.
    #[arg(long, global = true, env = "GME_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Points per axis for curves and surfaces.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(11..))]
    grid: Option<u64>,
    /// Output format; figures are CSV only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (for `figure`, a directory); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement of a pure state: ghz:N, w, wt, s:N,K, det:N, gdet:D,P or file:PATH.
    Pure { state: String },
    /// Entanglement of a mixed-state family member.
    Mixed {
        #[command(subcommand)]
        family: Family,
    },
    /// Write the CSV data of figure ID (1-10).
    Figure { id: u8 },
    /// Optimal witness of a pure state and its value on a density matrix.
    Witness {
        state: String,
        /// Density matrix to test: maximally-mixed:N, file:PATH or a pure-state spec.
        #[arg(long)]
        against: Option<String>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Two-qubit density matrix from a JSON file.
    TwoQubit { file: String },
    /// Werner state of two qudits with parameter F = <swap> in [-1, 1].
    Werner {
        d: usize,
        #[arg(allow_negative_numbers = true)]
        f: f64,
    },
    /// Isotropic state of two qudits with fidelity F to the maximally entangled state.
    Isotropic { d: usize, fidelity: f64 },
    /// x GHZ + y W + (1-x-y) W~; prints E and the negativity.
    Ghzw { x: f64, y: f64 },
    /// Mixture of symmetric states S(N, k) with probabilities p_0..p_N.
    SymMix { n: usize, probs: String },
}

impl RunConfig {
    fn solver(&self) -> SolverOptions {
        SolverOptions {
            restarts: self.restarts,
            tol: self.tol,
            max_sweeps: self.max_sweeps,
            seed: self.seed,
        }
    }

    fn grid(&self) -> Option<usize> {
        self.grid.map(|g| g as usize)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }

    fn table(&self, headers: &[&str], row: Vec<f64>) -> Result<()> {
        match self.format {
            Format::Csv => self.emit(&csv(headers, [row])),
            Format::Json => {
                let map: serde_json::Map<String, serde_json::Value> =
                    headers.iter().zip(row).map(|(h, v)| (h.to_string(), json!(v))).collect();
                self.emit(&(to_json(&map)? + "\n"))
            }
        }
    }
}

fn cmd_pure(run: &RunConfig, state: &str) -> Result<u8> {
    let psi = spec::pure(state)?;
    let r = entanglement_eigenvalue(&psi, &run.solver())?;
    match run.format {
        Format::Json => run.emit(&(to_json(&r)? + "\n"))?,
        Format::Csv => {
            let mut rows = vec![
                ("lambda_max".to_string(), r.lambda_max, 0.0),
                ("e_sin2".into(), r.e_sin2, 0.0),
                ("e_log".into(), r.e_log, 0.0),
                ("sweeps".into(), r.sweeps as f64, 0.0),
                ("converged".into(), if r.converged { 1.0 } else { 0.0 }, 0.0),
            ];
            for (p, factor) in r.maximizer.factors().iter().enumerate() {
                rows.extend(factor.iter().enumerate().map(|(i, c)| (format!("factor{}_{i}", p + 1), c.re, c.im)));
            }
            let mut text = String::from("name,re,im\n");
            for (name, re, im) in rows {
                text.push_str(&format!("{name},{},{}\n", fmt_sig(re, 12), fmt_sig(im, 12)));
            }
            run.emit(&text)?;
        }
    }
    Ok(if r.converged { 0 } else { EXIT_NOT_CONVERGED })
}

fn cmd_mixed(run: &RunConfig, family: &Family) -> Result<u8> {
    match family {
        Family::TwoQubit { file } => run.table(&["E"], vec![e_two_qubit(&spec::mixed(&format!("file:{file}"))?)?])?,
        Family::Werner { d, f } => {
            gme_core::states::werner(*d, *f)?;
            run.table(&["E"], vec![e_werner(*f)?])?
        }
        Family::Isotropic { d, fidelity } => run.table(&["E"], vec![e_isotropic(*d, *fidelity)?])?,
        Family::Ghzw { x, y } => {
            let n = negativity(*x, *y)?;
            let report = surgery(run.grid().unwrap_or(401), run.seed)?;
            run.table(&["E", "N"], vec![e_rho(*x, *y, &report)?, n])?
        }
        Family::SymMix { n, probs } => {
            run.table(&["E"], vec![symmetric_mixture_entanglement(*n, &spec::probabilities(probs)?)?])?
        }
    }
    Ok(0)
}

fn cmd_figure(run: &RunConfig, id: u8) -> Result<u8> {
    if run.format == Format::Json {
        bail!(GmeError::Parse("figures are written as CSV only".into()));
    }
    let files = figure(id, run.grid(), run.seed)?;
    match &run.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for f in &files {
                let path = dir.join(&f.name);
                fs::write(&path, &f.csv).with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
        }
        None => {
            std::io::stdout().write_all(files[0].csv.as_bytes())?;
            for f in &files[1..] {
                eprintln!("{} not shown; pass --out DIR to write it", f.name);
            }
        }
    }
    Ok(0)
}

fn cmd_witness(run: &RunConfig, state: &str, against: Option<&str>) -> Result<u8> {
    let psi = spec::pure(state)?;
    let opts = run.solver();
    let w = optimal_witness(&psi, &opts)?;
    let (lo, hi) = witness_validity_range(&psi, &opts)?;
    let rho = match against {
        Some(s) => spec::mixed(s)?,
        None => gme_core::states::density(&psi),
    };
    run.table(
        &["lambda_sq", "valid_from", "valid_to", "detector"],
        vec![w.lambda_sq(), lo, hi, detector(&w, &rho)?],
    )?;
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<GmeError>() {
        Some(GmeError::NotEntangled(_)) => EXIT_NOT_ENTANGLED,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = &cli.run;
    let outcome = match &cli.command {
        Command::Pure { state } => cmd_pure(run, state),
        Command::Mixed { family } => cmd_mixed(run, family),
        Command::Figure { id } => cmd_figure(run, *id),
        Command::Witness { state, against } => cmd_witness(run, state, against.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("gme: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
