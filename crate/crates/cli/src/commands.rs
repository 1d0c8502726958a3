//! The four subcommands. Each returns the CSV it produced.

use std::fmt::Write as _;

use log::warn;
use rayon::prelude::*;
use twoway_fso::ber::BerModel;
use twoway_fso::montecarlo::{mc_ber, mc_outage};
use twoway_fso::outage::{required_snr, threshold_ratio, PairSeries};
use twoway_fso::{BoundKind, LinkConfig, McConfig, McEstimate, Metric, SeriesConfig};

use crate::args::{ConvergenceArgs, MetricSel, RequiredSnrArgs, SweepArgs, ValidateArgs};
use crate::error::CliError;
use crate::settings::{Scenario, SnrPoint};

pub const DEFAULT_J_VALUES: [usize; 6] = [0, 1, 2, 5, 10, 100];
pub const DEFAULT_TARGET: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

/// Nine significant digits.
pub fn prob(x: f64) -> String {
    format!("{x:.8e}")
}

fn column_name(metric: Metric, bound: BoundKind) -> String {
    format!("{metric}_{bound}")
}

/// Outage and BER bounds of one scenario, with the series built once.
enum Evaluator {
    Outage(PairSeries),
    Both(BerModel),
}

impl Evaluator {
    fn new(scn: &Scenario, cfg: SeriesConfig, metrics: &[Metric]) -> Result<Self, CliError> {
        Ok(if metrics.contains(&Metric::Ber) {
            Evaluator::Both(BerModel::new(&scn.hops, cfg)?)
        } else {
            Evaluator::Outage(PairSeries::new(&scn.hops, cfg)?)
        })
    }

    fn eval(
        &self,
        scn: &Scenario,
        metric: Metric,
        bound: BoundKind,
        link: &LinkConfig,
    ) -> twoway_fso::Result<f64> {
        let series = match self {
            Evaluator::Outage(s) => s,
            Evaluator::Both(m) => m.series(),
        };
        match (metric, self) {
            (Metric::Outage, _) => series.outage_at(threshold_ratio(link, scn.threshold)?, bound),
            (Metric::Ber, Evaluator::Both(m)) => m.ber_at(link, bound),
            (Metric::Ber, Evaluator::Outage(_)) => unreachable!("BER needs the A-series"),
        }
    }
}

/// Unreliable cells become NaN with a warning; anything else is a hard error.
fn soft(value: twoway_fso::Result<f64>, context: impl FnOnce() -> String) -> Result<f64, CliError> {
    match value {
        Ok(v) => Ok(v),
        Err(e) if e.is_unreliable() => {
            warn!("{}: {e}", context());
            Ok(f64::NAN)
        }
        Err(source) => Err(CliError::Row {
            context: context(),
            source,
        }),
    }
}

/// First error in row order, so that diagnostics do not depend on scheduling.
fn in_order<T>(rows: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    rows.into_iter().collect()
}

pub fn sweep(args: &SweepArgs) -> Result<String, CliError> {
    let scn = args.common.channel.scenario()?;
    let points = args.grid.points()?;
    let columns = args.select.columns();
    let metrics: Vec<Metric> = columns.iter().map(|c| c.0).collect();
    let model = Evaluator::new(&scn, scn.cfg, &metrics)?;

    let rows = in_order(
        points
            .par_iter()
            .map(|p| {
                let link = LinkConfig::new(p.linear)?;
                columns
                    .iter()
                    .map(|&(m, b)| {
                        soft(model.eval(&scn, m, b, &link), || {
                            format!("{} at {} dB", column_name(m, b), p.db)
                        })
                    })
                    .collect::<Result<Vec<f64>, CliError>>()
            })
            .collect(),
    )?;

    let mut out = String::from("snr_db");
    for &(m, b) in &columns {
        write!(out, ",{}", column_name(m, b)).unwrap();
    }
    out.push('\n');
    for (p, row) in points.iter().zip(rows) {
        write!(out, "{}", p.db).unwrap();
        for v in row {
            write!(out, ",{}", prob(v)).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn convergence(args: &ConvergenceArgs) -> Result<String, CliError> {
    let scn = args.common.channel.scenario()?;
    let db = args
        .snr_db
        .ok_or_else(|| CliError::Usage("--snr-db is required".into()))?;
    let point = SnrPoint::from_db(db);
    let link = LinkConfig::new(point.linear)?;
    let js = args
        .j_values
        .clone()
        .unwrap_or_else(|| DEFAULT_J_VALUES.to_vec());
    let j_ref = *js
        .iter()
        .max()
        .ok_or_else(|| CliError::Usage("--j-values must not be empty".into()))?;
    let columns = args.select.columns();
    let metrics: Vec<Metric> = columns.iter().map(|c| c.0).collect();

    let eval_at = |j: usize| -> Result<Vec<f64>, CliError> {
        let model = Evaluator::new(&scn, SeriesConfig::truncated(j), &metrics)?;
        columns
            .iter()
            .map(|&(m, b)| {
                soft(model.eval(&scn, m, b, &link), || {
                    format!("{} with J = {j}", column_name(m, b))
                })
            })
            .collect()
    };
    let mut all: Vec<usize> = js.clone();
    all.push(j_ref);
    let mut values = in_order(all.par_iter().map(|&j| eval_at(j)).collect())?;
    let reference = values.pop().expect("reference row");

    let mut out = String::from("j");
    for &(m, b) in &columns {
        let name = column_name(m, b);
        write!(out, ",{name},{name}_rel_delta").unwrap();
    }
    out.push('\n');
    for (j, row) in js.iter().zip(values) {
        write!(out, "{j}").unwrap();
        for (v, r) in row.iter().zip(&reference) {
            write!(out, ",{},{}", prob(*v), prob(((v - r) / r).abs())).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn required(args: &RequiredSnrArgs) -> Result<String, CliError> {
    let scn = args.common.channel.scenario()?;
    let target = args.target.unwrap_or(DEFAULT_TARGET);
    let link = LinkConfig::new(1.0)?;
    let columns = args.select.columns();
    let found = in_order(
        columns
            .par_iter()
            .map(|&(m, b)| {
                required_snr(target, b, scn.threshold, &link, &scn.hops, scn.cfg, m).map_err(
                    |source| CliError::Row {
                        context: format!("required SNR of the {m} {b} bound"),
                        source,
                    },
                )
            })
            .collect(),
    )?;
    let mut out = String::from("metric,bound,target,snr_db\n");
    for (&(m, b), db) in columns.iter().zip(found) {
        writeln!(out, "{m},{b},{},{db:.1}", prob(target)).unwrap();
    }
    Ok(out)
}

/// One validation row and whether the estimate sits within three standard
/// errors of the bounds.
struct Check {
    lower: f64,
    upper: f64,
    mc: McEstimate,
}

impl Check {
    /// With fewer than two samples there is no spread estimate, so the
    /// allowance is unbounded.
    fn sigma(&self) -> f64 {
        if self.mc.n < 2 {
            f64::INFINITY
        } else {
            self.mc.std_error
        }
    }

    fn bracketed(&self) -> bool {
        let s3 = 3.0 * self.sigma();
        self.lower - s3 <= self.mc.mean && self.mc.mean <= self.upper + s3
    }
}

/// Returns the CSV and the number of rows that were not bracketed.
pub fn validate(args: &ValidateArgs) -> Result<(String, usize), CliError> {
    let scn = args.common.channel.scenario()?;
    let points = args.grid.points()?;
    let metrics = args.metric.unwrap_or(MetricSel::Both).metrics();
    let mc = McConfig::new(
        args.samples.unwrap_or(DEFAULT_SAMPLES),
        args.seed.unwrap_or(DEFAULT_SEED),
    )?;
    let model = Evaluator::new(&scn, scn.cfg, metrics)?;

    let cells: Vec<(SnrPoint, Metric)> = points
        .iter()
        .flat_map(|&p| metrics.iter().map(move |&m| (p, m)))
        .collect();
    let checks = in_order(
        cells
            .par_iter()
            .map(|&(p, m)| {
                let link = LinkConfig::new(p.linear)?;
                let bound = |b: BoundKind| {
                    soft(model.eval(&scn, m, b, &link), || {
                        format!("{} at {} dB", column_name(m, b), p.db)
                    })
                };
                let mc = match m {
                    Metric::Outage => mc_outage(&link, scn.threshold, &scn.hops, &mc)?,
                    Metric::Ber => mc_ber(&link, &scn.hops, &mc)?,
                };
                Ok(Check {
                    lower: bound(BoundKind::Lower)?,
                    upper: bound(BoundKind::Upper)?,
                    mc,
                })
            })
            .collect(),
    )?;

    let mut out = String::from("snr_db,metric,n,lower,mc_mean,mc_stderr,upper,bracketed\n");
    let mut misses = 0;
    for ((p, m), c) in cells.iter().zip(&checks) {
        let ok = c.bracketed();
        misses += usize::from(!ok);
        writeln!(
            out,
            "{},{m},{},{},{},{},{},{}",
            p.db,
            c.mc.n,
            prob(c.lower),
            prob(c.mc.mean),
            prob(c.sigma()),
            prob(c.upper),
            if ok { "yes" } else { "no" }
        )
        .unwrap();
    }
    Ok((out, misses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probabilities_carry_nine_digits() {
        assert_eq!(prob(1.0 / 3.0), "3.33333333e-1");
        assert_eq!(prob(0.0), "0.00000000e0");
    }

    #[test]
    fn single_sample_is_always_bracketed() {
        let c = Check {
            lower: 0.1,
            upper: 0.2,
            mc: McEstimate {
                mean: 1.0,
                std_error: 0.0,
                n: 1,
            },
        };
        assert!(c.bracketed());
        let c = Check {
            mc: McEstimate { n: 2, ..c.mc },
            ..c
        };
        assert!(!c.bracketed());
    }
}
