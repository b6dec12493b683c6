// Copyright 2026 The polarrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line front end. Every command returns a [`CommandResult`]; the
//! binary only prints it and exits.
//!
//! Exit codes: 0 success, 1 invalid or inadmissible input, 2 I/O or parse
//! failure, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::ingest::{estimate_region, load_cloud, postulate_momentum_region, Estimator, IngestConfig, Slack};
use crate::json::{
    self, parse_covariance, parse_ellipsoid, CheckDoc, EllipsoidDoc, GaussianStateDoc, IngestDoc,
    WignerSummaryDoc,
};
use crate::polar::{polar_dual, translate, Space};
use crate::reconstruct::{project_covariance, reconstruct_mixed, reconstruct_pure, PURE_TOL};
use crate::states::{purity, rs_report, wigner_grid, GaussianState, GridAxis};
use crate::symplectic::{satisfies_quantum_condition, symplectic_eigenvalues};

#[derive(Debug, Parser)]
#[command(name = "polarrecon", version, about = "Gaussian state reconstruction from position localization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Onto {
    Position,
    Momentum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Loewner,
    John,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polar dual of a centered ellipsoid.
    Dual {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Covariance matrices compatible with a position ellipsoid and a momentum region.
    Reconstruct {
        /// Position ellipsoid, or the output of `ingest`.
        #[arg(long)]
        x: PathBuf,
        /// Momentum ellipsoid; defaults to the polar dual of X scaled by --slack.
        #[arg(long, conflicts_with = "slack")]
        p: Option<PathBuf>,
        #[arg(long)]
        slack: Option<f64>,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Fit a localization ellipsoid to a CSV of position samples.
    Ingest {
        #[arg(long)]
        csv: PathBuf,
        /// JSON config; individual flags below override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        estimator: Option<EstimatorArg>,
        #[arg(long)]
        trim_fraction: Option<f64>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Quantum condition, symplectic spectrum and purity of a covariance matrix.
    Check {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Projection of the covariance ellipsoid onto position or momentum space.
    Project {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, value_enum)]
        onto: Onto,
        #[arg(long)]
        hbar: Option<f64>,
    },
    /// Wigner distribution on a grid, written as CSV.
    Wigner {
        #[arg(long)]
        state: PathBuf,
        /// "min,max,steps" per axis joined by ';' (one axis is broadcast).
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        hbar: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    /// JSON payload (empty on failure).
    pub stdout: String,
    /// Human-readable diagnostics.
    pub stderr: String,
}

impl CommandResult {
    fn ok(payload: String, notes: Vec<String>) -> Self {
        let stderr = notes.into_iter().map(|l| l + "\n").collect();
        CommandResult { exit_code: 0, stdout: payload + "\n", stderr }
    }

    fn failed(err: &Error) -> Self {
        CommandResult { exit_code: err.exit_code(), stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                CommandResult { exit_code: 2, stdout: String::new(), stderr: text }
            } else {
                CommandResult { exit_code: 0, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(cli: &Cli) -> CommandResult {
    let mut notes = Vec::new();
    let outcome = match &cli.command {
        Command::Dual { input, hbar } => cmd_dual(input, *hbar),
        Command::Reconstruct { x, p, slack, mode, hbar } => {
            cmd_reconstruct(x, p.as_deref(), *slack, *mode, *hbar, &mut notes)
        }
        Command::Ingest { csv, config, estimator, trim_fraction, eps, hbar } => {
            let overrides = IngestOverrides {
                estimator: *estimator,
                trim_fraction: *trim_fraction,
                eps: *eps,
                hbar: *hbar,
            };
            cmd_ingest(csv, config.as_deref(), &overrides, &mut notes)
        }
        Command::Check { sigma, tol, hbar } => cmd_check(sigma, *tol, *hbar),
        Command::Project { sigma, onto, hbar } => cmd_project(sigma, *onto, *hbar),
        Command::Wigner { state, grid, out, hbar } => cmd_wigner(state, grid, out, *hbar, &mut notes),
    };
    match outcome {
        Ok(payload) => CommandResult::ok(payload, notes),
        Err(e) => CommandResult::failed(&e),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn cmd_dual(input: &Path, hbar: Option<f64>) -> Result<String> {
    let e = parse_ellipsoid(&read(input)?, hbar)?;
    if !e.is_centered() {
        return Err(Error::invalid(
            "polar duality needs a centered ellipsoid; translate it to the origin first",
        ));
    }
    json::to_string(&EllipsoidDoc::from_ellipsoid(&polar_dual(&e, true)?))
}

pub fn cmd_reconstruct(
    x_path: &Path,
    p_path: Option<&Path>,
    slack: Option<f64>,
    mode: Mode,
    hbar: Option<f64>,
    notes: &mut Vec<String>,
) -> Result<String> {
    let x = parse_ellipsoid(&read(x_path)?, hbar)?;
    let p = match p_path {
        Some(path) => parse_ellipsoid(&read(path)?, Some(x.hbar()))?,
        // P is postulated around p0 = 0 from X moved to the origin.
        None => {
            let origin = translate(&x, &(-x.center()))?;
            postulate_momentum_region(&origin, &Slack::Scalar(slack.unwrap_or(1.0)))?
        }
    };
    match mode {
        Mode::Pure => {
            let set = reconstruct_pure(&x, &p)?;
            notes.push(format!(
                "{} admissible partner(s), {} rejected sign pattern(s)",
                set.multiplicity(),
                set.rejected.len()
            ));
            let docs = set
                .partners
                .iter()
                .map(|partner| GaussianStateDoc::from_state(&GaussianState::from_partner(partner)?))
                .collect::<Result<Vec<_>>>()?;
            json::to_string(&docs)
        }
        Mode::Mixed => {
            let cov = reconstruct_mixed(&x, &p)?;
            json::to_string(&GaussianStateDoc::from_state(&GaussianState::new(cov)?)?)
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOverrides {
    pub estimator: Option<EstimatorArg>,
    pub trim_fraction: Option<f64>,
    pub eps: Option<f64>,
    pub hbar: Option<f64>,
}

pub fn cmd_ingest(
    csv: &Path,
    config: Option<&Path>,
    overrides: &IngestOverrides,
    notes: &mut Vec<String>,
) -> Result<String> {
    let mut cfg: IngestConfig = match config {
        Some(path) => serde_json::from_str(&read(path)?)?,
        None => IngestConfig::default(),
    };
    if let Some(e) = overrides.estimator {
        cfg.estimator = match e {
            EstimatorArg::Loewner => Estimator::Loewner,
            EstimatorArg::John => Estimator::John,
        };
    }
    if let Some(t) = overrides.trim_fraction {
        cfg.trim_fraction = t;
    }
    if let Some(eps) = overrides.eps {
        cfg.eps = eps;
    }
    if let Some(h) = overrides.hbar {
        if config.is_some() && h != cfg.hbar {
            return Err(Error::invalid(format!(
                "hbar mismatch: config has {}, command line has {h}",
                cfg.hbar
            )));
        }
        cfg.hbar = h;
    }
    cfg.validate()?;
    let cloud = load_cloud(csv, None)?;
    let est = estimate_region(&cloud, &cfg)?;
    notes.push(format!("retained {} of {} samples", est.retained, cloud.len()));
    json::to_string(&IngestDoc::from_estimate(&est))
}

pub fn cmd_check(sigma: &Path, tol: f64, hbar: Option<f64>) -> Result<String> {
    let cov = parse_covariance(&read(sigma)?, hbar)?;
    let doc = CheckDoc {
        quantum_ok: satisfies_quantum_condition(&cov, tol)?,
        symplectic_eigenvalues: symplectic_eigenvalues(cov.sigma())?,
        rs_margins: rs_report(&cov).margins,
        purity: purity(&cov),
        pure: cov.is_pure(PURE_TOL)?,
    };
    json::to_string(&doc)
}

pub fn cmd_project(sigma: &Path, onto: Onto, hbar: Option<f64>) -> Result<String> {
    let cov = parse_covariance(&read(sigma)?, hbar)?;
    let space = match onto {
        Onto::Position => Space::Position,
        Onto::Momentum => Space::Momentum,
    };
    json::to_string(&EllipsoidDoc::from_ellipsoid(&project_covariance(&cov, space)?))
}

pub fn cmd_wigner(
    state: &Path,
    grid: &str,
    out: &Path,
    hbar: Option<f64>,
    notes: &mut Vec<String>,
) -> Result<String> {
    let cov = parse_covariance(&read(state)?, hbar)?;
    if cov.n() > 2 {
        return Err(Error::invalid(format!(
            "grid output is limited to n <= 2 degrees of freedom, state has n = {}",
            cov.n()
        )));
    }
    let axes = GridAxis::parse_spec(grid)?;
    let hbar = cov.hbar();
    let st = GaussianState::new(cov)?;
    let g = wigner_grid(&st, &axes)?;
    let file = fs::File::create(out)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", out.display()))))?;
    let mut w = BufWriter::new(file);
    g.write_csv(&mut w, hbar)?;
    w.flush()?;
    notes.push(format!("wrote {} grid points to {}", g.values.len(), out.display()));
    json::to_string(&WignerSummaryDoc { integral_estimate: g.integral_estimate, max_at: g.max_at })
}
