//! Run configuration from command-line flags and an optional `key = value`
//! file. Flags win over file values; both are validated together.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use tevo_core::{EvolverConfig, ExampleParams, Integrator};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Evolve the model and write observables.
    Evolve,
    /// Evolve forward, then backward with −H, and compare to the start.
    Roundtrip,
    /// Print the basis dimension and a memory estimate.
    Dims,
    /// Forward-backward check on a small random Hermitian matrix.
    Selftest,
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IntegratorKind {
    Tanhsinh,
    Gauss,
}

impl FromStr for IntegratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

impl IntegratorKind {
    pub fn integrator(self) -> Integrator {
        match self {
            Self::Tanhsinh => Integrator::default(),
            Self::Gauss => Integrator::fast_gauss(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: ExampleParams,
    pub m: usize,
    pub err_max: f64,
    pub t_total: f64,
    pub sample_step: f64,
    pub integrator: IntegratorKind,
    pub output_path: Option<PathBuf>,
    pub dump_state_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: ExampleParams::default(),
            m: 40,
            err_max: 1e-8,
            t_total: 10.0,
            sample_step: 0.1,
            integrator: IntegratorKind::Tanhsinh,
            output_path: None,
            dump_state_path: None,
        }
    }

    /// Evolver settings; `t_total = 0` is allowed here and handled by the
    /// runners without calling the evolver.
    pub fn evolver_config(&self) -> EvolverConfig {
        EvolverConfig::new(self.t_total, self.err_max)
            .with_m(self.m)
            .with_sample_step(self.sample_step)
            .with_integrator(self.integrator.integrator())
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |msg: String| Err(CliError::Usage(msg));
        if self.m < 1 {
            return usage("m must be at least 1".into());
        }
        if !(self.err_max > 0.0 && self.err_max.is_finite()) {
            return usage(format!("err_max must be positive, got {}", self.err_max));
        }
        if !(self.t_total >= 0.0 && self.t_total.is_finite()) {
            return usage(format!(
                "t_total must be non-negative, got {}",
                self.t_total
            ));
        }
        if !(self.sample_step >= 0.0 && self.sample_step.is_finite()) {
            return usage(format!(
                "sample_step must be non-negative, got {}",
                self.sample_step
            ));
        }
        self.params
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Applies one `key = value` setting; keys are the field names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
        }
        let p = &mut self.params;
        match key {
            "command" => self.command = parse(key, value)?,
            "eps_m" => p.eps_m = parse(key, value)?,
            "c0" => p.c0 = parse(key, value)?,
            "cm" => p.cm = parse(key, value)?,
            "n0" => p.n0 = parse(key, value)?,
            "nc" => p.nc = parse(key, value)?,
            "dnc" => p.dnc = parse(key, value)?,
            "k" => p.k = parse(key, value)?,
            "k1" => p.k1 = parse(key, value)?,
            "nm" => p.nm = parse(key, value)?,
            "m" => self.m = parse(key, value)?,
            "err_max" => self.err_max = parse(key, value)?,
            "t_total" => self.t_total = parse(key, value)?,
            "sample_step" => self.sample_step = parse(key, value)?,
            "integrator" => self.integrator = parse(key, value)?,
            "output_path" => self.output_path = Some(value.into()),
            "dump_state_path" => self.dump_state_path = Some(value.into()),
            _ => return Err(CliError::Usage(format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

/// Parses the `key = value` file format into ordered pairs.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "line {}: expected `key = value`, got {raw:?}",
                n + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!(
                "line {}: empty key or value",
                n + 1
            )));
        }
        out.push((key.to_string(), value.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Parser)]
#[command(
    name = "tevo",
    version,
    about = "Krylov time evolution with a rigorous error bound"
)]
pub struct Args {
    /// What to run; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Krylov dimension.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long = "err-max", allow_negative_numbers = true)]
    pub err_max: Option<f64>,
    #[arg(long = "t-total", allow_negative_numbers = true)]
    pub t_total: Option<f64>,
    #[arg(long = "sample-step", allow_negative_numbers = true)]
    pub sample_step: Option<f64>,
    #[arg(long, value_enum)]
    pub integrator: Option<IntegratorKind>,
    /// Observables CSV; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Binary dump of the final state.
    #[arg(long = "dump-state")]
    pub dump_state: Option<PathBuf>,
    /// `key = value` file with defaults for any field.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long = "K1")]
    pub k1: Option<usize>,
    #[arg(long = "Nm")]
    pub nm: Option<u32>,
    #[arg(long = "N0")]
    pub n0: Option<u32>,
    #[arg(long = "Nc")]
    pub nc: Option<u32>,
    #[arg(long = "dNc")]
    pub dnc: Option<u32>,
    #[arg(long = "eps-m", allow_negative_numbers = true)]
    pub eps_m: Option<f64>,
    #[arg(long = "C0", allow_negative_numbers = true)]
    pub c0: Option<f64>,
    #[arg(long = "Cm", allow_negative_numbers = true)]
    pub cm: Option<f64>,
}

fn read_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

/// Combines parsed flags with the optional config file.
pub fn resolve(args: Args) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => Vec::new(),
    };
    let file_command = file
        .iter()
        .rev()
        .find(|(k, _)| k == "command")
        .map(|(_, v)| {
            v.parse::<Command>()
                .map_err(|_| CliError::Usage(format!("invalid value {v:?} for command")))
        })
        .transpose()?;
    let command = args.command.or(file_command).ok_or_else(|| {
        CliError::Usage("missing command (evolve, roundtrip, dims or selftest)".into())
    })?;

    let mut cfg = RunConfig::new(command);
    for (key, value) in &file {
        cfg.set(key, value)?;
    }
    cfg.command = command;

    let p = &mut cfg.params;
    macro_rules! apply {
        ($($flag:expr => $field:expr),* $(,)?) => {
            $(if let Some(v) = $flag { $field = v; })*
        };
    }
    apply!(
        args.k => p.k,
        args.k1 => p.k1,
        args.nm => p.nm,
        args.n0 => p.n0,
        args.nc => p.nc,
        args.dnc => p.dnc,
        args.eps_m => p.eps_m,
        args.c0 => p.c0,
        args.cm => p.cm,
        args.m => cfg.m,
        args.err_max => cfg.err_max,
        args.t_total => cfg.t_total,
        args.sample_step => cfg.sample_step,
        args.integrator => cfg.integrator,
    );
    if args.output.is_some() {
        cfg.output_path = args.output;
    }
    if args.dump_state.is_some() {
        cfg.dump_state_path = args.dump_state;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses `argv` (including the program name) into a validated config.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(argv)?;
    resolve(args)
}
