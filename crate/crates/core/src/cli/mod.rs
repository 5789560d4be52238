//! Batch front end: requests, sweeps, result tables and exit codes.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 a failed
//! check, 1 I/O failure.

mod args;
pub mod check;
pub mod table;

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::eft::{self, ContactCouplings, EftError, RenormConditions, Scheme};
use crate::extension::{ExtensionError, ExtensionParams};
use crate::scattering::{self, ScatteringError};
use crate::trap::{TrapError, TrapProblem};

pub use args::{run_cli, Cli, ParamFile};
pub use table::{Cell, ColumnKind, Format, Table};

pub const THREADS_ENV: &str = "POINTSCAT_THREADS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::CheckFailed { .. } => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ScatteringError> for CliError {
    fn from(e: ScatteringError) -> Self {
        match e {
            ScatteringError::ZeroDenominator(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<EftError> for CliError {
    fn from(e: EftError) -> Self {
        match e {
            EftError::NoInverse
            | EftError::LandauPole
            | EftError::ComplexPoles
            | EftError::DictionarySingular(_)
            | EftError::DegenerateMixing => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<TrapError> for CliError {
    fn from(e: TrapError) -> Self {
        match e {
            TrapError::InvalidTrap { .. } | TrapError::ZeroScatteringLength | TrapError::InvalidCount => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KSweep {
    k_min: f64,
    k_max: f64,
    k_steps: usize,
    spacing: Spacing,
}

impl KSweep {
    pub fn new(k_min: f64, k_max: f64, k_steps: usize, spacing: Spacing) -> Result<Self, CliError> {
        if !(k_min > 0.0 && k_min.is_finite()) {
            return Err(CliError::Validation(format!("k_min must be positive, got {k_min}")));
        }
        if !(k_max >= k_min && k_max.is_finite()) {
            return Err(CliError::Validation(format!("k_max = {k_max} must be at least k_min = {k_min}")));
        }
        if k_steps == 0 {
            return Err(CliError::Validation("k_steps must be at least 1".into()));
        }
        Ok(KSweep {
            k_min,
            k_max,
            k_steps,
            spacing,
        })
    }

    pub fn single(k: f64) -> Result<Self, CliError> {
        KSweep::new(k, k, 1, Spacing::Linear)
    }

    /// Endpoints included; one step yields `k_min` alone.
    pub fn points(&self) -> Vec<f64> {
        if self.k_steps == 1 {
            return vec![self.k_min];
        }
        let n = (self.k_steps - 1) as f64;
        (0..self.k_steps)
            .map(|i| {
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.k_min + t * (self.k_max - self.k_min),
                    Spacing::Log => self.k_min * (self.k_max / self.k_min).powf(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DictionaryInput {
    Extension(ExtensionParams),
    Couplings(ContactCouplings),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FlowInput {
    /// Couplings tuned to fixed observables; `k cotΘ` does not run.
    Renormalized(RenormConditions),
    /// Bare `c₀ = 0` with the pole held at `κ₀`.
    Anomaly { kappa0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Scatter { params: ExtensionParams, sweep: KSweep },
    Spectrum { problem: TrapProblem, levels: usize },
    Dictionary(DictionaryInput),
    RgFlow { input: FlowInput, mus: Vec<f64> },
    Check,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub command: Command,
    pub format: Format,
    /// Standard output when `None`.
    pub out: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
}

fn scatter_table(params: &ExtensionParams, sweep: &KSweep) -> Result<Table, CliError> {
    use ColumnKind::*;
    let mut t = Table::new([
        ("k", Real),
        ("R_plus", Complex),
        ("R_minus", Complex),
        ("T_plus", Complex),
        ("T_minus", Complex),
        ("delta_plus", Real),
        ("delta_minus", Real),
        ("Theta", Real),
        ("Phi", Real),
        ("k_cot_Theta", Real),
        ("poles", Text),
    ]);
    let poles = scattering::smatrix_poles(params)
        .iter()
        .map(|p| table::fmt_real(p.kappa))
        .collect::<Vec<_>>()
        .join(";");
    let rows: Vec<Vec<Cell>> = sweep
        .points()
        .par_iter()
        .map(|&k| -> Result<Vec<Cell>, CliError> {
            let a = scattering::reflection_transmission(params, k)?;
            let o = scattering::eigen_observables(params, k)?;
            Ok(vec![
                k.into(),
                a.r_plus.into(),
                a.r_minus.into(),
                a.t_plus.into(),
                a.t_minus.into(),
                o.delta_plus.into(),
                o.delta_minus.into(),
                o.theta.into(),
                o.phi_rel.into(),
                o.k_cot_theta.into(),
                Cell::Text(poles.clone()),
            ])
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn spectrum_table(problem: &TrapProblem, levels: usize) -> Result<Table, CliError> {
    use ColumnKind::*;
    let mut t = Table::new([
        ("index", Int),
        ("E_over_omega", Real),
        ("bracket_lo", Real),
        ("bracket_hi", Real),
        ("residual", Real),
    ]);
    for l in problem.solve(levels)?.levels {
        t.push(vec![
            Cell::Int(l.index as i64),
            l.e_over_omega.into(),
            l.bracket_lo.into(),
            l.bracket_hi.into(),
            l.residual.into(),
        ]);
    }
    Ok(t)
}

fn params_distance(a: &ExtensionParams, b: &ExtensionParams) -> f64 {
    [
        a.alpha() - b.alpha(),
        a.beta() - b.beta(),
        a.gamma() - b.gamma(),
        a.delta() - b.delta(),
        a.phi() - b.phi(),
    ]
    .into_iter()
    .fold(0.0, |m: f64, x| m.max(x.abs()))
}

fn couplings_distance(a: &ContactCouplings, b: &ContactCouplings) -> f64 {
    [a.c0 - b.c0, a.c1 - b.c1, a.c1_tilde - b.c1_tilde, a.c2p - b.c2p]
        .into_iter()
        .fold(0.0, |m: f64, x| m.max(x.abs()))
}

fn dictionary_table(input: &DictionaryInput) -> Result<Table, CliError> {
    use ColumnKind::*;
    let mut t = Table::new([
        ("direction", Text),
        ("alpha", Real),
        ("beta", Real),
        ("gamma", Real),
        ("delta", Real),
        ("phi", Real),
        ("c0", Real),
        ("c1", Real),
        ("c1_tilde", Real),
        ("c2p", Real),
        ("round_trip_residual", Real),
    ]);
    let (direction, p, c, residual) = match input {
        DictionaryInput::Extension(p) => {
            let c = eft::sae_to_couplings(p)?;
            let back = eft::couplings_to_sae(&c)?;
            ("extension_to_couplings", *p, c, params_distance(p, &back))
        }
        DictionaryInput::Couplings(c) => {
            let p = eft::couplings_to_sae(c)?;
            let back = eft::sae_to_couplings(&p)?;
            ("couplings_to_extension", p, *c, couplings_distance(c, &back))
        }
    };
    t.push(vec![
        Cell::Text(direction.into()),
        p.alpha().into(),
        p.beta().into(),
        p.gamma().into(),
        p.delta().into(),
        p.phi().into(),
        c.c0.into(),
        c.c1.into(),
        c.c1_tilde.into(),
        c.c2p.into(),
        residual.into(),
    ]);
    Ok(t)
}

fn rgflow_table(input: &FlowInput, mus: &[f64]) -> Result<Table, CliError> {
    use ColumnKind::*;
    let mut t = Table::new([("mu", Real), ("c1_mod", Real), ("c0", Real), ("k_cot_Theta", Real)]);
    let rows: Vec<Vec<Cell>> = mus
        .par_iter()
        .map(|&mu| -> Result<Vec<Cell>, CliError> {
            match input {
                FlowInput::Renormalized(conds) => {
                    let c = eft::renormalize_odd(conds, Scheme::pds(mu)?)?;
                    Ok(vec![mu.into(), c.c1_mod().into(), c.c0.into(), eft::odd_k_cot_theta(&c).into()])
                }
                FlowInput::Anomaly { kappa0 } => {
                    let a = eft::anomaly_flow(*kappa0, mu, 1.0)?;
                    Ok(vec![mu.into(), a.c1_mod.into(), 0.0.into(), a.k_cot_theta.into()])
                }
            }
        })
        .collect::<Result<_, _>>()?;
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

fn check_table() -> (Table, Option<CliError>) {
    use ColumnKind::*;
    let mut t = Table::new([("check", Text), ("passed", Text), ("max_error", Real), ("tolerance", Real)]);
    let outcomes = check::run_all();
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    for o in &outcomes {
        // an unevaluable check is reported as failed with no error value
        let err = if o.max_error.is_finite() { Cell::Real(o.max_error) } else { Cell::Missing };
        t.push(vec![
            Cell::Text(o.name.into()),
            Cell::Text(if o.passed() { "true" } else { "false" }.into()),
            err,
            o.tolerance.into(),
        ]);
    }
    let failure = (failed > 0).then_some(CliError::CheckFailed {
        failed,
        total: outcomes.len(),
    });
    (t, failure)
}

/// The result table, plus an error to report after writing it.
pub fn execute(command: &Command) -> Result<(Table, Option<CliError>), CliError> {
    let table = match command {
        Command::Scatter { params, sweep } => scatter_table(params, sweep)?,
        Command::Spectrum { problem, levels } => spectrum_table(problem, *levels)?,
        Command::Dictionary(input) => dictionary_table(input)?,
        Command::RgFlow { input, mus } => rgflow_table(input, mus)?,
        Command::Check => return Ok(check_table()),
    };
    Ok((table, None))
}

fn run_inner(req: &RunRequest, stdout: &mut dyn Write) -> Result<Option<CliError>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.threads)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let (table, deferred) = pool.install(|| execute(&req.command))?;
    let mut buf = Vec::new();
    table.write(req.format, &mut buf)?;
    match &req.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => stdout.write_all(&buf)?,
    }
    Ok(deferred)
}

/// Runs the request and returns the process exit code; diagnostics go to `stderr`.
pub fn run(req: &RunRequest, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let err = match run_inner(req, stdout) {
        Ok(None) => return 0,
        Ok(Some(e)) | Err(e) => e,
    };
    // the diagnostic stream itself failing leaves nothing else to report to
    let _ = writeln!(stderr, "error: {err}");
    err.exit_code()
}
