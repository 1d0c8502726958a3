//! Configuration files and the resolution of flags into model inputs.

use std::fs;
use std::path::Path;

use clap::Parser;
use twoway_fso::channel::pointing_from_normalized;
use twoway_fso::outage::db_to_linear;
use twoway_fso::{Hop, HopPair, PointingParams, SeriesConfig, TurbulenceParams};

use crate::args::{ChannelArgs, Cli, Command, GridArgs};
use crate::error::CliError;

/// Reads `key = value` lines into the flags they stand for.
///
/// Keys are long flag names with or without the leading dashes; underscores
/// may stand in for hyphens. A switch is written as `key = true`.
pub fn config_tokens(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut tokens = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| CliError::Config {
            path: path.display().to_string(),
            line: n + 1,
            msg: msg.to_string(),
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad("expected `key = value`"))?;
        let key = key.trim().trim_start_matches('-').replace('_', "-");
        let value = value.trim();
        if key.is_empty() {
            return Err(bad("empty key"));
        }
        if key == "config" {
            return Err(bad("configuration files cannot include other files"));
        }
        match value {
            "true" => tokens.push(format!("--{key}")),
            "false" => {}
            _ => {
                tokens.push(format!("--{key}"));
                tokens.push(value.to_string());
            }
        }
    }
    Ok(tokens)
}

/// Applies the configuration file named by `--config`, if any, underneath
/// the command-line flags.
pub fn with_config_file(cmd: Command) -> Result<Command, CliError> {
    let Some(path) = cmd.common().config.clone() else {
        return Ok(cmd);
    };
    let tokens = config_tokens(&path)?;
    let argv = ["twoway-fso", cmd.name()]
        .into_iter()
        .map(String::from)
        .chain(tokens);
    let from_file = Cli::try_parse_from(argv).map_err(|e| {
        CliError::Usage(format!(
            "{}: {}",
            path.display(),
            first_line(&e.to_string())
        ))
    })?;
    Ok(cmd.merge_over(from_file.command))
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("").trim_start_matches("error: ")
}

/// Channel and threshold resolved from the flags. The threshold is linear.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub hops: HopPair,
    pub threshold: f64,
    pub cfg: SeriesConfig,
}

impl ChannelArgs {
    pub fn turbulence(&self) -> Result<TurbulenceParams, CliError> {
        match (self.regime, self.alpha, self.beta) {
            (Some(r), None, None) => Ok(r.params()),
            (None, Some(a), Some(b)) => Ok(TurbulenceParams::new(a, b)?),
            (None, None, None) => Err(CliError::Usage(
                "choose a turbulence model with --regime or --alpha/--beta".into(),
            )),
            (Some(_), _, _) => Err(CliError::Usage(
                "--regime cannot be combined with --alpha/--beta".into(),
            )),
            _ => Err(CliError::Usage("--alpha and --beta go together".into())),
        }
    }

    pub fn pointing(&self) -> Result<PointingParams, CliError> {
        let normalized = (self.wz_over_r, self.sigma_over_r);
        let explicit = (self.gamma_sq, self.a0);
        let given = [
            self.pointing_none,
            normalized != (None, None),
            explicit != (None, None),
        ];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(CliError::Usage(
                "use only one of --pointing-none, --wz-over-r/--sigma-over-r and --gamma-sq/--a0"
                    .into(),
            ));
        }
        match (normalized, explicit) {
            ((Some(w), Some(s)), _) => Ok(pointing_from_normalized(w, s)?),
            (_, (Some(g), Some(a))) => Ok(PointingParams::new(g, a)?),
            ((None, None), (None, None)) => Ok(PointingParams::none()),
            ((Some(_), None) | (None, Some(_)), _) => Err(CliError::Usage(
                "--wz-over-r and --sigma-over-r go together".into(),
            )),
            _ => Err(CliError::Usage("--gamma-sq and --a0 go together".into())),
        }
    }

    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let hop = Hop::new(self.turbulence()?, self.pointing()?);
        let threshold_db = self.threshold_db.unwrap_or(0.0);
        if !threshold_db.is_finite() {
            return Err(CliError::Usage("--threshold-db must be finite".into()));
        }
        Ok(Scenario {
            hops: HopPair::identical(hop),
            threshold: db_to_linear(threshold_db),
            cfg: SeriesConfig::new(self.truncation_j.unwrap_or(100)),
        })
    }
}

/// One grid point: the dB value as given (for display) and γ₀ in linear units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub db: f64,
    pub linear: f64,
}

impl SnrPoint {
    pub fn from_db(db: f64) -> Self {
        SnrPoint {
            db,
            linear: db_to_linear(db),
        }
    }
}

impl GridArgs {
    pub fn points(&self) -> Result<Vec<SnrPoint>, CliError> {
        let start = self
            .snr_db_start
            .ok_or_else(|| CliError::Usage("--snr-db-start is required".into()))?;
        let stop = self.snr_db_stop.unwrap_or(start);
        let step = self.snr_db_step.unwrap_or(1.0);
        if !(start.is_finite() && stop.is_finite()) {
            return Err(CliError::Usage("grid ends must be finite".into()));
        }
        if start > stop {
            return Err(CliError::Usage(format!(
                "--snr-db-start ({start}) exceeds --snr-db-stop ({stop})"
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(CliError::Usage(format!(
                "--snr-db-step must be positive, got {step}"
            )));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count)
            .map(|k| SnrPoint::from_db(tidy(start + k as f64 * step)))
            .collect())
    }
}

/// Drops binary noise such as 30.200000000000003 from grid values.
fn tidy(db: f64) -> f64 {
    (db * 1e9).round() / 1e9
}
