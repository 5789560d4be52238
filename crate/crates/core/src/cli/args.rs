//! Command-line parsing and the optional JSON parameter file.
//!
//! The file may hold `params`, `couplings` and `conditions`, each partial;
//! individual flags override the corresponding file fields.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use super::{
    run, CliError, Command, DictionaryInput, FlowInput, Format, KSweep, RunRequest, Spacing, THREADS_ENV,
};
use crate::eft::{ContactCouplings, RenormConditions, Scheme};
use crate::extension::ExtensionParams;
use crate::trap::{Interaction, TrapProblem};

#[derive(Debug, Parser)]
#[command(name = "pointscat", version, about = "Point-interaction scattering, contact EFT and trapped spectra")]
pub struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON document with `params`, `couplings` and/or `conditions`.
    #[arg(long, global = true)]
    params: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Amplitudes, eigenphases and mixing angles over a k sweep.
    Scatter {
        #[command(flatten)]
        ext: ExtArgs,
        /// Single momentum; shorthand for k-min = k-max with one step.
        #[arg(long, conflicts_with_all = ["k_min", "k_max", "k_steps"])]
        k: Option<f64>,
        #[arg(long)]
        k_min: Option<f64>,
        #[arg(long)]
        k_max: Option<f64>,
        #[arg(long, default_value_t = 1)]
        k_steps: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Linear)]
        spacing: Spacing,
    },
    /// Trapped two-body levels in units of omega.
    Spectrum {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        dim: u8,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        /// 3D: infinite scattering length.
        #[arg(long, conflicts_with_all = ["a", "inv_a", "robin_beta"])]
        unitary: bool,
        /// 3D: scattering length.
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["inv_a", "robin_beta"])]
        a: Option<f64>,
        /// 3D: inverse scattering length.
        #[arg(long, allow_negative_numbers = true, conflicts_with = "robin_beta")]
        inv_a: Option<f64>,
        /// 3D: Robin parameter of the radial boundary condition.
        #[arg(long, allow_negative_numbers = true)]
        robin_beta: Option<f64>,
        #[command(flatten)]
        ext: ExtArgs,
    },
    /// Translate between extension parameters and NDR couplings.
    Dictionary {
        #[command(flatten)]
        ext: ExtArgs,
        #[command(flatten)]
        couplings: CouplingArgs,
    },
    /// Parity-odd couplings against the PDS scale.
    Rgflow {
        /// Comma-separated PDS scales.
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<f64>,
        /// Bare c0 = 0 with the pole held at kappa0.
        #[arg(long)]
        anomaly: bool,
        #[command(flatten)]
        conditions: ConditionArgs,
    },
    /// Run the built-in invariant suite.
    Check,
}

#[derive(Debug, Args, Default)]
struct ExtArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct CouplingArgs {
    #[arg(long, allow_negative_numbers = true)]
    c0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1_tilde: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2p: Option<f64>,
}

#[derive(Debug, Args, Default)]
struct ConditionArgs {
    #[arg(long, allow_negative_numbers = true)]
    kappa0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi_rel: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a_theta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialParams {
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    delta: Option<f64>,
    phi: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialCouplings {
    c0: Option<f64>,
    c1: Option<f64>,
    c1_tilde: Option<f64>,
    c2p: Option<f64>,
    scheme: Option<Scheme>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialConditions {
    kappa0: Option<f64>,
    phi_rel: Option<f64>,
    a_theta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    #[serde(default)]
    params: Option<PartialParams>,
    #[serde(default)]
    couplings: Option<PartialCouplings>,
    #[serde(default)]
    conditions: Option<PartialConditions>,
}

impl ParamFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl ExtArgs {
    fn any(&self) -> bool {
        [self.alpha, self.beta, self.gamma, self.delta, self.phi].iter().any(Option::is_some)
    }

    fn merge(&self, file: Option<&PartialParams>) -> Option<PartialParams> {
        if file.is_none() && !self.any() {
            return None;
        }
        let f = file.cloned().unwrap_or_default();
        Some(PartialParams {
            alpha: self.alpha.or(f.alpha),
            beta: self.beta.or(f.beta),
            gamma: self.gamma.or(f.gamma),
            delta: self.delta.or(f.delta),
            phi: self.phi.or(f.phi),
        })
    }
}

impl PartialParams {
    fn build(&self) -> Result<ExtensionParams, CliError> {
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| invalid(format!("missing extension parameter {name}")));
        Ok(ExtensionParams::new(
            need(self.alpha, "alpha")?,
            need(self.beta, "beta")?,
            need(self.gamma, "gamma")?,
            need(self.delta, "delta")?,
            self.phi.unwrap_or(0.0),
        )?)
    }
}

impl CouplingArgs {
    fn any(&self) -> bool {
        [self.c0, self.c1, self.c1_tilde, self.c2p].iter().any(Option::is_some)
    }

    fn merge(&self, file: Option<&PartialCouplings>) -> Option<ContactCouplings> {
        if file.is_none() && !self.any() {
            return None;
        }
        let f = file.cloned().unwrap_or_default();
        Some(ContactCouplings {
            c0: self.c0.or(f.c0).unwrap_or(0.0),
            c1: self.c1.or(f.c1).unwrap_or(0.0),
            c1_tilde: self.c1_tilde.or(f.c1_tilde).unwrap_or(0.0),
            c2p: self.c2p.or(f.c2p).unwrap_or(0.0),
            scheme: f.scheme.unwrap_or(Scheme::Ndr),
        })
    }
}

impl ConditionArgs {
    fn any(&self) -> bool {
        [self.kappa0, self.phi_rel, self.a_theta].iter().any(Option::is_some)
    }

    fn merge(&self, file: Option<&PartialConditions>) -> Option<PartialConditions> {
        if file.is_none() && !self.any() {
            return None;
        }
        let f = file.cloned().unwrap_or_default();
        Some(PartialConditions {
            kappa0: self.kappa0.or(f.kappa0),
            phi_rel: self.phi_rel.or(f.phi_rel),
            a_theta: self.a_theta.or(f.a_theta),
        })
    }
}

// At most the listed kinds may appear in the file.
fn only_file_keys(file: &ParamFile, allowed: &[&str]) -> Result<(), CliError> {
    let present = [
        ("params", file.params.is_some()),
        ("couplings", file.couplings.is_some()),
        ("conditions", file.conditions.is_some()),
    ];
    for (name, here) in present {
        if here && !allowed.contains(&name) {
            return Err(invalid(format!("parameter file entry `{name}` does not apply to this command")));
        }
    }
    Ok(())
}

fn three_d_interaction(unitary: bool, a: Option<f64>, inv_a: Option<f64>, robin: Option<f64>) -> Result<Interaction, CliError> {
    match (unitary, a, inv_a, robin) {
        (true, None, None, None) => Ok(Interaction::unitary()),
        (false, Some(a), None, None) => Ok(Interaction::scattering_length(a)?),
        (false, None, Some(inv_a), None) => Ok(Interaction::ScatteringLength3D { inv_a }),
        (false, None, None, Some(beta)) => Ok(Interaction::Robin { beta }),
        _ => Err(invalid("3D spectrum needs exactly one of --unitary, --a, --inv-a, --robin-beta")),
    }
}

impl Cli {
    pub fn into_request(self, threads: usize) -> Result<RunRequest, CliError> {
        let file = match &self.params {
            Some(p) => ParamFile::load(p)?,
            None => ParamFile::default(),
        };
        let command = match self.command {
            Sub::Scatter {
                ext,
                k,
                k_min,
                k_max,
                k_steps,
                spacing,
            } => {
                only_file_keys(&file, &["params"])?;
                let params = ext
                    .merge(file.params.as_ref())
                    .ok_or_else(|| invalid("scatter needs extension parameters"))?
                    .build()?;
                let sweep = match (k, k_min) {
                    (Some(k), _) => KSweep::single(k)?,
                    (None, Some(lo)) => KSweep::new(lo, k_max.unwrap_or(lo), k_steps, spacing)?,
                    (None, None) => return Err(invalid("scatter needs --k or --k-min")),
                };
                Command::Scatter { params, sweep }
            }
            Sub::Spectrum {
                dim,
                levels,
                m,
                omega,
                unitary,
                a,
                inv_a,
                robin_beta,
                ext,
            } => {
                let three_d_flags = unitary || a.is_some() || inv_a.is_some() || robin_beta.is_some();
                let interaction = match dim {
                    3 => {
                        only_file_keys(&file, &[])?;
                        if ext.any() {
                            return Err(invalid("extension parameters apply to --dim 1 only"));
                        }
                        three_d_interaction(unitary, a, inv_a, robin_beta)?
                    }
                    1 => {
                        only_file_keys(&file, &["params"])?;
                        if three_d_flags {
                            return Err(invalid("--unitary, --a, --inv-a and --robin-beta apply to --dim 3 only"));
                        }
                        let p = ext
                            .merge(file.params.as_ref())
                            .ok_or_else(|| invalid("1D spectrum needs extension parameters"))?
                            .build()?;
                        Interaction::Extension1D(p)
                    }
                    d => return Err(invalid(format!("--dim must be 1 or 3, got {d}"))),
                };
                Command::Spectrum {
                    problem: TrapProblem::new(m, omega, interaction)?,
                    levels,
                }
            }
            Sub::Dictionary { ext, couplings } => {
                only_file_keys(&file, &["params", "couplings"])?;
                let p = ext.merge(file.params.as_ref());
                let c = couplings.merge(file.couplings.as_ref());
                match (p, c) {
                    (Some(p), None) => Command::Dictionary(DictionaryInput::Extension(p.build()?)),
                    (None, Some(c)) => Command::Dictionary(DictionaryInput::Couplings(c)),
                    _ => return Err(invalid("dictionary needs exactly one of extension parameters or couplings")),
                }
            }
            Sub::Rgflow { mu, anomaly, conditions } => {
                only_file_keys(&file, &["conditions"])?;
                let c = conditions
                    .merge(file.conditions.as_ref())
                    .ok_or_else(|| invalid("rgflow needs --kappa0"))?;
                let kappa0 = c.kappa0.ok_or_else(|| invalid("rgflow needs --kappa0"))?;
                let input = if anomaly {
                    if c.phi_rel.is_some() || c.a_theta.is_some() {
                        return Err(invalid("--anomaly takes only --kappa0"));
                    }
                    FlowInput::Anomaly { kappa0 }
                } else {
                    FlowInput::Renormalized(RenormConditions {
                        kappa0,
                        phi_rel: c.phi_rel.unwrap_or(0.0),
                        a_theta: c.a_theta.unwrap_or(0.0),
                    })
                };
                Command::RgFlow { input, mus: mu }
            }
            Sub::Check => {
                only_file_keys(&file, &[])?;
                Command::Check
            }
        };
        Ok(RunRequest {
            command,
            format: self.format,
            out: self.out,
            threads,
        })
    }
}

/// Thread cap from the environment; unset or 0 means automatic.
pub fn threads_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(invalid(format!("{THREADS_ENV}: {e}"))),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match threads_from_env().and_then(|t| cli.into_request(t)) {
        Ok(req) => run(&req, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
