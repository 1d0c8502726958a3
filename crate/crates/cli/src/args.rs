use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twoway_fso::{BoundKind, Metric, Regime};

#[derive(Debug, Parser)]
#[command(
    name = "twoway-fso",
    version,
    about = "Outage and BER bounds for two-way AF relaying over FSO links with pointing errors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tabulate the bounds over an SNR grid
    Sweep(SweepArgs),
    /// Bound values against the truncation index J at one SNR
    Convergence(ConvergenceArgs),
    /// SNR at which a bound reaches the target probability
    RequiredSnr(RequiredSnrArgs),
    /// Compare the bounds with a Monte Carlo estimate
    Validate(ValidateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::Convergence(_) => "convergence",
            Command::RequiredSnr(_) => "required-snr",
            Command::Validate(_) => "validate",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Sweep(a) => &a.common,
            Command::Convergence(a) => &a.common,
            Command::RequiredSnr(a) => &a.common,
            Command::Validate(a) => &a.common,
        }
    }

    /// Fill every setting missing here from `base`.
    pub fn merge_over(self, base: Command) -> Command {
        match (self, base) {
            (Command::Sweep(a), Command::Sweep(b)) => Command::Sweep(SweepArgs {
                common: a.common.merge_over(b.common),
                grid: a.grid.merge_over(b.grid),
                select: a.select.merge_over(b.select),
            }),
            (Command::Convergence(a), Command::Convergence(b)) => {
                Command::Convergence(ConvergenceArgs {
                    common: a.common.merge_over(b.common),
                    snr_db: a.snr_db.or(b.snr_db),
                    j_values: a.j_values.or(b.j_values),
                    select: a.select.merge_over(b.select),
                })
            }
            (Command::RequiredSnr(a), Command::RequiredSnr(b)) => {
                Command::RequiredSnr(RequiredSnrArgs {
                    common: a.common.merge_over(b.common),
                    target: a.target.or(b.target),
                    select: a.select.merge_over(b.select),
                })
            }
            (Command::Validate(a), Command::Validate(b)) => Command::Validate(ValidateArgs {
                common: a.common.merge_over(b.common),
                grid: a.grid.merge_over(b.grid),
                metric: a.metric.or(b.metric),
                samples: a.samples.or(b.samples),
                seed: a.seed.or(b.seed),
            }),
            (a, _) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricSel {
    Outage,
    Ber,
    Both,
}

impl MetricSel {
    pub fn metrics(self) -> &'static [Metric] {
        match self {
            MetricSel::Outage => &[Metric::Outage],
            MetricSel::Ber => &[Metric::Ber],
            MetricSel::Both => &[Metric::Outage, Metric::Ber],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundSel {
    Upper,
    Lower,
    Both,
}

impl BoundSel {
    pub fn bounds(self) -> &'static [BoundKind] {
        match self {
            BoundSel::Upper => &[BoundKind::Upper],
            BoundSel::Lower => &[BoundKind::Lower],
            BoundSel::Both => &[BoundKind::Upper, BoundKind::Lower],
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Plain-text file of `key = value` lines; command-line flags take precedence
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Where to write the CSV (`-` or `stdout` for standard output)
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<String>,

    #[command(flatten)]
    pub channel: ChannelArgs,
}

impl Common {
    fn merge_over(self, base: Common) -> Common {
        Common {
            config: self.config,
            output: self.output.or(base.output),
            channel: self.channel.merge_over(base.channel),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChannelArgs {
    /// Turbulence preset
    #[arg(long, value_parser = clap::value_parser!(Regime))]
    pub regime: Option<Regime>,

    /// Large-scale turbulence shape α (with --beta)
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Small-scale turbulence shape β (with --alpha)
    #[arg(long)]
    pub beta: Option<f64>,

    /// No pointing error (γ² = 1e8, A₀ = 1); the default
    #[arg(long)]
    pub pointing_none: bool,

    /// Normalized beamwidth w_z/r (with --sigma-over-r)
    #[arg(long)]
    pub wz_over_r: Option<f64>,

    /// Normalized jitter σ_s/r (with --wz-over-r)
    #[arg(long)]
    pub sigma_over_r: Option<f64>,

    /// Pointing parameter γ² (with --a0)
    #[arg(long)]
    pub gamma_sq: Option<f64>,

    /// Fraction of collected power at zero displacement (with --gamma-sq)
    #[arg(long)]
    pub a0: Option<f64>,

    /// Outage threshold Γ_th in dB [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub threshold_db: Option<f64>,

    /// Truncation index J of the series [default: 100]
    #[arg(long)]
    pub truncation_j: Option<usize>,
}

impl ChannelArgs {
    fn turbulence_given(&self) -> bool {
        self.regime.is_some() || self.alpha.is_some() || self.beta.is_some()
    }

    fn pointing_given(&self) -> bool {
        self.pointing_none
            || self.wz_over_r.is_some()
            || self.sigma_over_r.is_some()
            || self.gamma_sq.is_some()
            || self.a0.is_some()
    }

    /// Turbulence and pointing are replaced as whole groups so that, say,
    /// `--alpha/--beta` on the command line displaces a `regime` in the file.
    fn merge_over(self, base: ChannelArgs) -> ChannelArgs {
        let turb = if self.turbulence_given() {
            &self
        } else {
            &base
        };
        let point = if self.pointing_given() { &self } else { &base };
        ChannelArgs {
            regime: turb.regime,
            alpha: turb.alpha,
            beta: turb.beta,
            pointing_none: point.pointing_none,
            wz_over_r: point.wz_over_r,
            sigma_over_r: point.sigma_over_r,
            gamma_sq: point.gamma_sq,
            a0: point.a0,
            threshold_db: self.threshold_db.or(base.threshold_db),
            truncation_j: self.truncation_j.or(base.truncation_j),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// First SNR γ₀ of the grid, in dB
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db_start: Option<f64>,

    /// Last SNR of the grid, in dB [default: the start]
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db_stop: Option<f64>,

    /// Grid spacing in dB [default: 1]
    #[arg(long)]
    pub snr_db_step: Option<f64>,
}

impl GridArgs {
    fn merge_over(self, base: GridArgs) -> GridArgs {
        GridArgs {
            snr_db_start: self.snr_db_start.or(base.snr_db_start),
            snr_db_stop: self.snr_db_stop.or(base.snr_db_stop),
            snr_db_step: self.snr_db_step.or(base.snr_db_step),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Select {
    /// Which quantity to report [default: both]
    #[arg(long, value_enum)]
    pub metric: Option<MetricSel>,

    /// Which bound to report [default: both]
    #[arg(long, value_enum)]
    pub bound: Option<BoundSel>,
}

impl Select {
    fn merge_over(self, base: Select) -> Select {
        Select {
            metric: self.metric.or(base.metric),
            bound: self.bound.or(base.bound),
        }
    }

    /// Selected (metric, bound) columns in a fixed order.
    pub fn columns(&self) -> Vec<(Metric, BoundKind)> {
        let metrics = self.metric.unwrap_or(MetricSel::Both).metrics();
        let bounds = self.bound.unwrap_or(BoundSel::Both).bounds();
        metrics
            .iter()
            .flat_map(|&m| bounds.iter().map(move |&b| (m, b)))
            .collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub select: Select,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub common: Common,

    /// SNR γ₀ in dB
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,

    /// Comma-separated truncation indices [default: 0,1,2,5,10,100]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub j_values: Option<Vec<usize>>,

    #[command(flatten)]
    pub select: Select,
}

#[derive(Debug, Clone, Args)]
pub struct RequiredSnrArgs {
    #[command(flatten)]
    pub common: Common,

    /// Target probability [default: 1e-6]
    #[arg(long)]
    pub target: Option<f64>,

    #[command(flatten)]
    pub select: Select,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub grid: GridArgs,

    /// Which quantity to simulate [default: both]
    #[arg(long, value_enum)]
    pub metric: Option<MetricSel>,

    /// Monte Carlo sample count [default: 1000000]
    #[arg(long)]
    pub samples: Option<usize>,

    /// Monte Carlo seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
}
