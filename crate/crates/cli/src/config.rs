//! Harness configuration: defaults, the key=value config-file format, and
//! command-line parsing. Flags override file values; both feed the same
//! partial-config overlay.

use std::path::PathBuf;

use lgsim_core::SpectralProfile;
use thiserror::Error;

pub const DEFAULT_LAMBDA0: f64 = 0.78e-6;
pub const DEFAULT_SIGMA: f64 = 3.56e13;
pub const DEFAULT_R_MIN: f64 = 0.0;
pub const DEFAULT_R_MAX: f64 = 60.0;
pub const DEFAULT_R_STEP: f64 = 0.25;
pub const DEFAULT_TILT_SAMPLES: usize = 3600;
pub const DEFAULT_OUTPUT_DIR: &str = "out";
pub const DEFAULT_SEED: u64 = 42;

/// Minimum accepted phase samples per envelope scan.
pub const MIN_TILT_SAMPLES: usize = 360;

/// Caps keeping a mistyped range or sample count from running unbounded.
pub const MAX_SWEEP_ROWS: f64 = 1e7;
pub const MAX_TILT_SAMPLES: usize = 10_000_000;

/// Fully resolved harness configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spectrum: SpectralProfile,
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
    pub tilt_samples: usize,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        PartialConfig::default()
            .into_config()
            .expect("defaults are valid")
    }
}

/// Values supplied so far by a config file or by flags; unset fields fall
/// back to the defaults when resolved.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub sigma: Option<f64>,
    pub lambda0: Option<f64>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_step: Option<f64>,
    pub tilt_samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
    pub seed: Option<u64>,
}

impl PartialConfig {
    /// Layer `over` on top of `self`; set fields in `over` win.
    pub fn overlay(mut self, over: PartialConfig) -> PartialConfig {
        macro_rules! take {
            ($field:ident) => {
                if over.$field.is_some() {
                    self.$field = over.$field;
                }
            };
        }
        take!(sigma);
        take!(lambda0);
        take!(r_min);
        take!(r_max);
        take!(r_step);
        take!(tilt_samples);
        take!(out);
        take!(svg);
        take!(seed);
        self
    }

    /// Resolve against the defaults and validate.
    pub fn into_config(self) -> Result<SweepConfig, ConfigError> {
        let lambda0 = self.lambda0.unwrap_or(DEFAULT_LAMBDA0);
        let sigma = self.sigma.unwrap_or(DEFAULT_SIGMA);
        let spectrum = SpectralProfile::new(lambda0, sigma)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;

        let r_min = self.r_min.unwrap_or(DEFAULT_R_MIN);
        let r_max = self.r_max.unwrap_or(DEFAULT_R_MAX);
        let r_step = self.r_step.unwrap_or(DEFAULT_R_STEP);
        if !(r_min.is_finite() && r_min >= 0.0) {
            return Err(ConfigError::Invalid(format!(
                "r_min must be non-negative, got {r_min}"
            )));
        }
        if !(r_max.is_finite() && r_min <= r_max) {
            return Err(ConfigError::Invalid(format!(
                "need r_min <= r_max, got {r_min} > {r_max}"
            )));
        }
        if !(r_step.is_finite() && r_step > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "r_step must be positive, got {r_step}"
            )));
        }
        if (r_max - r_min) / r_step > MAX_SWEEP_ROWS {
            return Err(ConfigError::Invalid(format!(
                "sweep would exceed {MAX_SWEEP_ROWS:.0} rows; shrink the range or grow r_step"
            )));
        }
        let tilt_samples = self.tilt_samples.unwrap_or(DEFAULT_TILT_SAMPLES);
        if !(MIN_TILT_SAMPLES..=MAX_TILT_SAMPLES).contains(&tilt_samples) {
            return Err(ConfigError::Invalid(format!(
                "tilt_samples must lie in [{MIN_TILT_SAMPLES}, {MAX_TILT_SAMPLES}], got {tilt_samples}"
            )));
        }

        Ok(SweepConfig {
            spectrum,
            r_min,
            r_max,
            r_step,
            tilt_samples,
            output_dir: self.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            emit_svg: self.svg.unwrap_or(false),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
        })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {content:?}")]
    MalformedLine { line: usize, content: String },

    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: invalid value {value:?} for {key}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },

    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Parse the plain key=value config format: one assignment per line, `#`
/// starts a comment, blank lines are skipped, later assignments win.
pub fn parse_config_text(text: &str) -> Result<PartialConfig, ConfigError> {
    let mut partial = PartialConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped
            .split_once('=')
            .ok_or_else(|| ConfigError::MalformedLine {
                line,
                content: stripped.to_string(),
            })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |k: &str| ConfigError::InvalidValue {
            line,
            key: k.to_string(),
            value: value.to_string(),
        };
        match key {
            "sigma" => partial.sigma = Some(value.parse().map_err(|_| bad(key))?),
            "lambda0" => partial.lambda0 = Some(value.parse().map_err(|_| bad(key))?),
            "r_min" => partial.r_min = Some(value.parse().map_err(|_| bad(key))?),
            "r_max" => partial.r_max = Some(value.parse().map_err(|_| bad(key))?),
            "r_step" => partial.r_step = Some(value.parse().map_err(|_| bad(key))?),
            "tilt_samples" => partial.tilt_samples = Some(value.parse().map_err(|_| bad(key))?),
            "out" => partial.out = Some(PathBuf::from(value)),
            "svg" => partial.svg = Some(parse_bool(value).ok_or_else(|| bad(key))?),
            "seed" => partial.seed = Some(value.parse().map_err(|_| bad(key))?),
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }
    Ok(partial)
}

fn parse_bool(value: &str) -> Option<bool> {
    match value {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

/// Requested subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Command {
    /// Envelope sweep over retardation, CSV (and optional SVG) output.
    Sweep,
    /// Tilt scan of both inequalities at a single retardation.
    Tilt { retardation: f64 },
    /// Locate the transition retardation for both inequalities.
    Threshold,
    /// Emit the macrorealist-model curves over the flip probability.
    Classical,
    /// Run the full invariant suite; nonzero exit on any failure.
    Verify,
    /// Print usage.
    Help,
}

/// A parsed command line: subcommand, optional config-file path, and the
/// flag overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct CliInvocation {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    pub overrides: PartialConfig,
}

#[derive(Debug, Error, PartialEq)]
pub enum CliError {
    #[error("missing subcommand")]
    MissingSubcommand,

    #[error("unknown subcommand {0:?}")]
    UnknownSubcommand(String),

    #[error("unknown flag {0:?}")]
    UnknownFlag(String),

    #[error("flag {0} expects a value")]
    MissingValue(String),

    #[error("invalid value {value:?} for {flag}")]
    InvalidValue { flag: String, value: String },

    #[error("unexpected argument {0:?}")]
    UnexpectedPositional(String),
}

pub fn usage() -> &'static str {
    "usage: lgsim <subcommand> [flags]

subcommands:
  sweep              envelope sweep over retardation; writes sweep.csv (and
                     sweep.svg with --svg) into the output directory
  tilt [R]           scan both inequalities over the tilt phase at
                     retardation R waves (default 0); writes tilt.csv
  threshold          print the retardation at which each envelope minimum
                     returns to the classical bound -1
  classical          write the flip-model curves over p to classical.csv
  verify             run every module invariant; exit 1 on any failure

flags:
  --sigma <rad/s>        spectral spread          (default 3.56e13)
  --lambda0 <m>          central wavelength       (default 7.8e-7)
  --r-min <waves>        sweep start              (default 0)
  --r-max <waves>        sweep stop               (default 60)
  --r-step <waves>       sweep step               (default 0.25)
  --tilt-samples <n>     phase samples per scan   (default 3600, min 360)
  --out <dir>            output directory         (default out)
  --svg                  also write the SVG plot
  --seed <n>             seed for randomized checks (default 42)
  --config <file>        key=value file; flags override file values
  --help                 print this text"
}

/// Parse a full argument list (without the program name). Pure: no I/O, no
/// panics on any input.
pub fn parse_args(args: &[String]) -> Result<CliInvocation, CliError> {
    let mut command: Option<Command> = None;
    let mut config_path = None;
    let mut overrides = PartialConfig::default();
    let mut tilt_positional: Option<f64> = None;

    let mut iter = args.iter().peekable();
    while let Some(arg) = iter.next() {
        if arg == "--help" || arg == "-h" {
            return Ok(CliInvocation {
                command: Command::Help,
                config_path: None,
                overrides: PartialConfig::default(),
            });
        }
        if let Some(flag) = arg.strip_prefix("--") {
            if flag == "svg" {
                overrides.svg = Some(true);
                continue;
            }
            let value = iter
                .next()
                .ok_or_else(|| CliError::MissingValue(arg.clone()))?;
            let bad = || CliError::InvalidValue {
                flag: arg.clone(),
                value: value.clone(),
            };
            match flag {
                "sigma" => overrides.sigma = Some(value.parse().map_err(|_| bad())?),
                "lambda0" => overrides.lambda0 = Some(value.parse().map_err(|_| bad())?),
                "r-min" => overrides.r_min = Some(value.parse().map_err(|_| bad())?),
                "r-max" => overrides.r_max = Some(value.parse().map_err(|_| bad())?),
                "r-step" => overrides.r_step = Some(value.parse().map_err(|_| bad())?),
                "tilt-samples" => {
                    overrides.tilt_samples = Some(value.parse().map_err(|_| bad())?)
                }
                "out" => overrides.out = Some(PathBuf::from(value)),
                "seed" => overrides.seed = Some(value.parse().map_err(|_| bad())?),
                "config" => config_path = Some(PathBuf::from(value)),
                _ => return Err(CliError::UnknownFlag(arg.clone())),
            }
        } else if arg.starts_with('-') && arg.len() > 1 {
            return Err(CliError::UnknownFlag(arg.clone()));
        } else if command.is_none() {
            command = Some(match arg.as_str() {
                "sweep" => Command::Sweep,
                "tilt" => Command::Tilt { retardation: 0.0 },
                "threshold" => Command::Threshold,
                "classical" => Command::Classical,
                "verify" => Command::Verify,
                other => return Err(CliError::UnknownSubcommand(other.to_string())),
            });
        } else if matches!(command, Some(Command::Tilt { .. })) && tilt_positional.is_none() {
            let r: f64 = arg.parse().map_err(|_| CliError::InvalidValue {
                flag: "retardation".to_string(),
                value: arg.clone(),
            })?;
            if !(r.is_finite() && r >= 0.0) {
                return Err(CliError::InvalidValue {
                    flag: "retardation".to_string(),
                    value: arg.clone(),
                });
            }
            tilt_positional = Some(r);
        } else {
            return Err(CliError::UnexpectedPositional(arg.clone()));
        }
    }

    let mut command = command.ok_or(CliError::MissingSubcommand)?;
    if let Command::Tilt { retardation } = &mut command {
        *retardation = tilt_positional.unwrap_or(0.0);
    }
    Ok(CliInvocation {
        command,
        config_path,
        overrides,
    })
}
