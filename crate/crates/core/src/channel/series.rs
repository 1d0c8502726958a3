use std::f64::consts::PI;
use std::sync::OnceLock;

use super::params::{Hop, PointingParams, SeriesConfig, TurbulenceParams, POLE_TOLERANCE};
use crate::error::{Error, Result};
use crate::numerics::dd::{self, Dd};
use crate::numerics::{ln_gamma_positive, log_gamma_signed, SeriesSum, SignedLogValue};

/// Ratio of the last retained term to the sum above which a truncated series
/// is considered unconverged.
pub const LAST_TERM_RATIO: f64 = 1e-9;

/// Estimated rounding error, relative to the sum, above which an evaluation
/// is rejected as swamped by cancellation.
pub const ROUNDING_LIMIT: f64 = 1e-6;

/// Clamps larger than this are reported through `log`.
const CLAMP_REPORT: f64 = 1e-12;

/// Unit roundoff of a double-double operation.
const DD_UNIT: f64 = 4.93e-32;

/// sin(πd), reduced to the nearest integer first so that the result stays
/// accurate when d is large.
fn sin_pi(d: f64) -> f64 {
    let n = d.round();
    let s = (PI * (d - n)).sin();
    if n.rem_euclid(2.0) == 1.0 {
        -s
    } else {
        s
    }
}

/// Power-series coefficient
/// `a_j(a, b) = π (ab)^{j+b} / (sin[π(a−b)] Γ(a) Γ(b) Γ(j−a+b+1) j!)`.
pub fn series_coeff(j: usize, a: f64, b: f64) -> Result<SignedLogValue> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "series coefficient needs positive shapes, got ({a}, {b})"
        )));
    }
    let diff = a - b;
    let s = sin_pi(diff);
    if (diff - diff.round()).abs() < POLE_TOLERANCE {
        return Err(Error::Pole(format!(
            "sin[π(a−b)] vanishes for a − b = {diff}"
        )));
    }
    let jf = j as f64;
    let g = log_gamma_signed(jf - a + b + 1.0)
        .map_err(|_| Error::Pole(format!("Γ(j − a + b + 1) has a pole at j = {j}")))?;
    let log_mag = PI.ln() + (jf + b) * (a * b).ln()
        - s.abs().ln()
        - ln_gamma_positive(a)
        - ln_gamma_positive(b)
        - g.log_magnitude()
        - ln_gamma_positive(jf + 1.0);
    let sign = if s > 0.0 { 1 } else { -1 } * g.sign();
    Ok(SignedLogValue::new(sign, log_mag))
}

/// One term `coeff · i^exponent` of the combined CDF series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTerm {
    pub j: usize,
    /// `j + β` or `j + α`.
    pub exponent: f64,
    /// `(γ²/A₀) a_j / (p (γ² − p) A₀^{p−1})`.
    pub coeff: SignedLogValue,
}

/// Truncated power series of the combined turbulence and pointing law of one hop.
///
/// Coefficients are computed once; `cdf` and `pdf` then cost one pass over
/// `2(J + 1)` terms.
#[derive(Debug)]
pub struct IrradianceSeries {
    hop: Hop,
    cfg: SeriesConfig,
    terms: Vec<SeriesTerm>,
    factored: Option<Factored>,
    log_terms: OnceLock<Option<LogTerms>>,
    reliable_limit: OnceLock<f64>,
}

/// The series coefficients as `C_j = σ_j e^{ln_scale + ln_coeff_j}` with the
/// per-term logs in double-double precision; `ln_scale` is shared by every
/// term of the hop.
#[derive(Debug, Clone)]
pub struct LogTerms {
    pub ln_scale: f64,
    pub terms: Vec<LogTerm>,
}

#[derive(Debug, Clone, Copy)]
pub struct LogTerm {
    pub j: usize,
    pub exponent: Dd,
    pub ln_coeff: Dd,
    pub sign: f64,
    /// Sum of the magnitudes of the pieces of `ln_coeff`, which bounds its
    /// absolute rounding error in units of the double-double roundoff.
    pub ln_size: f64,
}

impl LogTerms {
    fn new(hop: &Hop, truncation: usize) -> Option<LogTerms> {
        let alpha = hop.turbulence.alpha();
        let beta = hop.turbulence.beta();
        let g2 = Dd::from_f64(hop.pointing.gamma_sq());
        let a0 = hop.pointing.a0();
        let s = sin_pi(alpha - beta);
        // C_j = K A₀ (±) x^p / (Γ(j+1∓d) j! p (γ² − p)) with x = αβ/A₀ per unit irradiance
        let ln_scale = hop.pointing.gamma_sq().ln() + PI.ln()
            - s.abs().ln()
            - ln_gamma_positive(alpha)
            - ln_gamma_positive(beta);
        let ln_rate = (Dd::product(alpha, beta) / Dd::from_f64(a0)).ln();
        let d = Dd::sum(alpha, -beta);
        let mut terms = Vec::with_capacity(2 * (truncation + 1));
        let mut ln_factorial = Dd::ZERO;
        for j in 0..=truncation {
            let jf = Dd::from_f64(j as f64);
            if j > 0 {
                ln_factorial = ln_factorial + jf.ln();
            }
            for (branch_sign, shape, offset) in [(1.0, beta, -d), (-1.0, alpha, d)] {
                let p = jf + Dd::from_f64(shape);
                let gap = g2 - p;
                let (ln_g, g_sign) = dd::ln_abs_gamma(jf + Dd::ONE + offset);
                let ln_p = p.ln();
                let ln_gap = gap.abs().ln();
                let ln_power = p * ln_rate;
                let ln_coeff = ln_power - ln_g - ln_factorial - ln_p - ln_gap;
                let ln_size = ln_power.hi.abs()
                    + ln_g.hi.abs()
                    + ln_factorial.hi
                    + ln_p.hi.abs()
                    + ln_gap.hi.abs();
                if !ln_coeff.is_finite() {
                    return None;
                }
                terms.push(LogTerm {
                    j,
                    exponent: p,
                    ln_coeff,
                    sign: s.signum() * branch_sign * g_sign * gap.hi.signum(),
                    ln_size,
                });
            }
        }
        ln_scale.is_finite().then_some(LogTerms { ln_scale, terms })
    }
}

/// The series rewritten as
/// `K A₀ x^β [Σ r1_j w(j+β) − x^{α−β} Σ r2_j w(j+α)]` with `x = αβ i / A₀`,
/// `r1_j = x^j / (Γ(j+1−d) j!)`, `r2_j = x^j / (Γ(j+1+d) j!)` and
/// `K = γ² π / (A₀ sin[πd] Γ(α) Γ(β))`.
///
/// The bracket is summed in double-double arithmetic, which keeps about 16
/// more digits through the cancellation between the two branches.
#[derive(Debug, Clone)]
struct Factored {
    alpha: Dd,
    beta: Dd,
    d: Dd,
    g2: Dd,
    a0: f64,
    /// ln |K A₀| and its sign.
    ln_scale: f64,
    sign: f64,
    inv_gamma1: Dd,
    inv_gamma2: Dd,
    truncation: usize,
}

/// A series value together with its guard quantities, all in f64.
#[derive(Debug, Clone, Copy)]
struct Evaluation {
    value: f64,
    rounding: f64,
    last: f64,
    max_term: f64,
}

impl Factored {
    fn new(hop: &Hop, truncation: usize) -> Option<Factored> {
        let alpha = hop.turbulence.alpha();
        let beta = hop.turbulence.beta();
        let g2 = hop.pointing.gamma_sq();
        let a0 = hop.pointing.a0();
        let d = Dd::sum(alpha, -beta);
        let s = sin_pi(alpha - beta);
        let ln_scale =
            g2.ln() + PI.ln() - s.abs().ln() - ln_gamma_positive(alpha) - ln_gamma_positive(beta);
        let inv_gamma1 = dd::gamma(Dd::ONE - d).recip();
        let inv_gamma2 = dd::gamma(Dd::ONE + d).recip();
        if !(inv_gamma1.is_finite() && inv_gamma2.is_finite() && ln_scale.is_finite()) {
            return None;
        }
        Some(Factored {
            alpha: Dd::from_f64(alpha),
            beta: Dd::from_f64(beta),
            d,
            g2: Dd::from_f64(g2),
            a0,
            ln_scale,
            sign: s.signum(),
            inv_gamma1,
            inv_gamma2,
            truncation,
        })
    }

    /// One branch: `Σ r_j w(j + shift)` with `r_0 = start` and
    /// `r_j = r_{j−1} x / (j (j + offset))`. Returns the sum, the sum of
    /// magnitudes and the magnitude of the last term.
    fn branch(&self, x: Dd, start: Dd, offset: Dd, shift: Dd, derivative: bool) -> (Dd, f64, f64) {
        let mut r = start;
        let mut sum = Dd::ZERO;
        let mut mag = 0.0;
        let mut last = 0.0;
        for j in 0..=self.truncation {
            if j > 0 {
                let jf = Dd::from_f64(j as f64);
                r = r * x / (jf * (jf + offset));
            }
            let p = Dd::from_f64(j as f64) + shift;
            let w = if derivative {
                (self.g2 - p).recip()
            } else {
                (p * (self.g2 - p)).recip()
            };
            let t = r * w;
            sum = sum + t;
            last = t.to_f64().abs();
            mag += last;
        }
        (sum, mag, last)
    }

    fn evaluate(&self, i: f64, derivative: bool) -> Option<Evaluation> {
        let x = Dd::product(self.alpha.hi, self.beta.hi).mul_f64(i) / Dd::from_f64(self.a0);
        let ln_x = x.ln();
        let x_d = (ln_x * self.d).exp();
        let (s1, m1, l1) = self.branch(x, self.inv_gamma1, -self.d, self.beta, derivative);
        let (s2, m2, l2) = self.branch(x, self.inv_gamma2, self.d, self.alpha, derivative);
        let xd = x_d.to_f64();
        let bracket = s1 - x_d * s2;
        if !(bracket.is_finite() && xd.is_finite() && m1.is_finite() && m2.is_finite()) {
            return None;
        }
        let mut ln_common = self.ln_scale + self.beta.hi * ln_x.to_f64();
        if derivative {
            ln_common -= i.ln();
        }
        // the x^d factor itself carries the error of exp over a range |d ln x|
        let ops = self.truncation as f64 + 1.0 + (self.d * ln_x).to_f64().abs();
        let xd_unit = if xd.abs() < 1e-290 {
            f64::EPSILON
        } else {
            DD_UNIT
        };
        let err = 8.0 * ops * (m1 * DD_UNIT + xd.abs() * m2 * (DD_UNIT + xd_unit));
        let b = bracket.to_f64();
        let scaled = |v: f64| (ln_common + v.ln()).exp();
        Some(Evaluation {
            value: self.sign * b.signum() * scaled(b.abs()),
            rounding: scaled(err),
            last: scaled(l1.max(xd.abs() * l2)),
            max_term: scaled(m1.max(xd.abs() * m2)),
        })
    }
}

impl Clone for IrradianceSeries {
    fn clone(&self) -> Self {
        IrradianceSeries {
            hop: self.hop,
            cfg: self.cfg,
            terms: self.terms.clone(),
            factored: self.factored.clone(),
            log_terms: self.log_terms.clone(),
            reliable_limit: self.reliable_limit.clone(),
        }
    }
}

impl IrradianceSeries {
    pub fn new(hop: &Hop, cfg: SeriesConfig) -> Result<Self> {
        let alpha = hop.turbulence.alpha();
        let beta = hop.turbulence.beta();
        let g2 = hop.pointing.gamma_sq();
        let a0 = hop.pointing.a0();
        let log_prefactor = g2.ln() - a0.ln();

        let mut terms = Vec::with_capacity(2 * (cfg.truncation + 1));
        for j in 0..=cfg.truncation {
            for (a, b) in [(alpha, beta), (beta, alpha)] {
                let p = j as f64 + b;
                let gap = g2 - p;
                if gap.abs() < POLE_TOLERANCE {
                    return Err(Error::Pole(format!(
                        "γ² = {g2} collides with j + {b} at j = {j}"
                    )));
                }
                let aj = series_coeff(j, a, b)?;
                let coeff = SignedLogValue::new(
                    aj.sign() * if gap > 0.0 { 1 } else { -1 },
                    aj.log_magnitude() + log_prefactor
                        - p.ln()
                        - gap.abs().ln()
                        - (p - 1.0) * a0.ln(),
                );
                terms.push(SeriesTerm {
                    j,
                    exponent: p,
                    coeff,
                });
            }
        }
        Ok(IrradianceSeries {
            hop: *hop,
            cfg,
            terms,
            factored: Factored::new(hop, cfg.truncation),
            log_terms: OnceLock::new(),
            reliable_limit: OnceLock::new(),
        })
    }

    pub fn hop(&self) -> &Hop {
        &self.hop
    }

    pub fn config(&self) -> SeriesConfig {
        self.cfg
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    /// Double-double logs of the coefficients, built on first use; `None`
    /// when a Gamma factor leaves the double-double range.
    pub fn log_terms(&self) -> Option<&LogTerms> {
        self.log_terms
            .get_or_init(|| LogTerms::new(&self.hop, self.cfg.truncation))
            .as_ref()
    }

    /// CDF series at `i > 0` summed term by term in f64, without guards.
    pub fn cdf_sum(&self, i: f64) -> Result<SeriesSum> {
        let ln_i = i.ln();
        SeriesSum::from_terms(
            self.terms
                .iter()
                .map(|t| t.coeff.scale_log(t.exponent * ln_i))
                .collect(),
        )
    }

    fn pdf_sum(&self, i: f64) -> Result<SeriesSum> {
        let ln_i = i.ln();
        SeriesSum::from_terms(
            self.terms
                .iter()
                .map(|t| {
                    t.coeff
                        .scale_log(t.exponent.ln() + (t.exponent - 1.0) * ln_i)
                })
                .collect(),
        )
    }

    fn evaluate(&self, i: f64, derivative: bool) -> Result<Evaluation> {
        if let Some(e) = self
            .factored
            .as_ref()
            .and_then(|f| f.evaluate(i, derivative))
        {
            return Ok(e);
        }
        let sum = if derivative {
            self.pdf_sum(i)?
        } else {
            self.cdf_sum(i)?
        };
        Ok(Evaluation {
            value: sum.value,
            rounding: sum.rounding_error(),
            last: self.last_term(i.ln(), derivative),
            max_term: sum.max_term,
        })
    }

    /// Checks the last-term and rounding guards for an evaluated series.
    fn check(&self, argument: f64, e: &Evaluation) -> Result<()> {
        let scale = e.value.abs();
        if self.cfg.enforce_convergence && e.last > LAST_TERM_RATIO * scale {
            return Err(Error::Unreliable {
                argument,
                reason: format!(
                    "last retained term {:e} exceeds {LAST_TERM_RATIO:e} × |sum| = {scale:e} at J = {}",
                    e.last, self.cfg.truncation
                ),
            });
        }
        if !(e.rounding <= ROUNDING_LIMIT * scale) {
            return Err(Error::Unreliable {
                argument,
                reason: format!(
                    "cancellation: terms up to {:e} leave a sum of {scale:e}",
                    e.max_term
                ),
            });
        }
        Ok(())
    }

    fn last_term(&self, ln_i: f64, derivative: bool) -> f64 {
        self.terms[self.terms.len() - 2..]
            .iter()
            .map(|t| {
                let extra = if derivative {
                    t.exponent.ln() - ln_i
                } else {
                    0.0
                };
                t.coeff.scale_log(t.exponent * ln_i + extra).to_f64().abs()
            })
            .fold(0.0, f64::max)
    }

    /// F_I(i), guarded against truncation and cancellation, clamped to [0, 1].
    pub fn cdf(&self, i: f64) -> Result<f64> {
        validate_irradiance(i)?;
        if i == 0.0 {
            return Ok(0.0);
        }
        let e = self.evaluate(i, false)?;
        self.check(i, &e)?;
        Ok(clamp_report(e.value, 0.0, 1.0, "cdf", i))
    }

    /// f_I(i), guarded like [`cdf`](Self::cdf) and clamped below at 0.
    pub fn pdf(&self, i: f64) -> Result<f64> {
        validate_irradiance(i)?;
        if i == 0.0 {
            let min_exp = self
                .terms
                .iter()
                .map(|t| t.exponent)
                .fold(f64::INFINITY, f64::min);
            return Ok(if min_exp > 1.0 {
                0.0
            } else if min_exp == 1.0 {
                self.terms
                    .iter()
                    .filter(|t| t.exponent == 1.0)
                    .map(|t| t.coeff.to_f64())
                    .sum::<f64>()
                    .max(0.0)
            } else {
                f64::INFINITY
            });
        }
        let e = self.evaluate(i, true)?;
        self.check(i, &e)?;
        Ok(clamp_report(e.value, 0.0, f64::INFINITY, "pdf", i))
    }

    /// Largest irradiance (with a 10% margin) at which [`cdf`](Self::cdf)
    /// still passes its guards.
    pub fn reliable_limit(&self) -> f64 {
        *self.reliable_limit.get_or_init(|| {
            let ok = |x: f64| self.cdf(x).is_ok();
            let (mut lo, mut hi) = (1e-8_f64.ln(), 1e4_f64.ln());
            if ok(hi.exp()) {
                return hi.exp();
            }
            if !ok(lo.exp()) {
                return 0.0;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if ok(mid.exp()) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.9 * lo.exp()
        })
    }
}

fn validate_irradiance(i: f64) -> Result<()> {
    if i.is_nan() || i < 0.0 {
        return Err(Error::Domain(format!(
            "irradiance must be nonnegative, got {i}"
        )));
    }
    Ok(())
}

pub(crate) fn clamp_report(x: f64, lo: f64, hi: f64, what: &str, at: f64) -> f64 {
    let c = x.clamp(lo, hi);
    if (c - x).abs() > CLAMP_REPORT {
        log::debug!("{what} clamped from {x:e} to {c} at {at:e}");
    }
    c
}

pub fn pdf_irradiance(
    i: f64,
    turb: TurbulenceParams,
    point: PointingParams,
    cfg: SeriesConfig,
) -> Result<f64> {
    IrradianceSeries::new(&Hop::new(turb, point), cfg)?.pdf(i)
}

pub fn cdf_irradiance(
    i: f64,
    turb: TurbulenceParams,
    point: PointingParams,
    cfg: SeriesConfig,
) -> Result<f64> {
    IrradianceSeries::new(&Hop::new(turb, point), cfg)?.cdf(i)
}
