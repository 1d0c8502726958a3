//! Average bit-error-probability bounds.
//!
//! With `F` the combined CDF of a hop,
//!
//! ```text
//! A₁(u)    = ∫₀^∞ F_{I₂}(√(x/u)) e^{−x/2} x^{−1/2} dx
//! A₂(v)    = ∫₀^∞ F_{I₁}(√(x/v)) e^{−x/2} x^{−1/2} dx
//! A₃(u, v) = ∫₀^∞ F_{I₂}(√(x/u)) F_{I₁}(√(x/v)) e^{−x/2} x^{−1/2} dx
//! A(u, v)  = √(2π) − A₁(u) − A₂(v) + A₃(u, v)
//! ```
//!
//! and every integral has a closed form term by term. The bounds only need
//! `D = √(2π) − A = A₁ + A₂ − A₃`, which is summed directly so the leading
//! √(2π) never cancels.

use std::f64::consts::LN_2;

use crate::channel::{Hop, IrradianceSeries, LogTerms, SeriesConfig, LAST_TERM_RATIO};
use crate::error::{Error, Result};
use crate::numerics::dd::{self, Dd};
use crate::numerics::{
    integrate, ln_gamma_positive, q_function, NeumaierSum, SeriesSum, SignedLogValue, Tolerance,
};
use crate::outage::{BoundKind, Bounds, HopPair, LinkConfig, PairSeries};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Largest estimated rounding error of a closed-form BER value, relative to
/// the value, before the quadrature route is used instead.
pub const CLOSED_FORM_LIMIT: f64 = 1e-8;

/// Accuracy demanded of the quadrature route, relative to the value.
pub const QUADRATURE_LIMIT: f64 = 1e-8;

/// Integration never extends past this many standard deviations.
const GAUSSIAN_CUTOFF: f64 = 12.0;

/// Scaled arguments `(u, v)` of A(u, v).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerArgs {
    pub u: f64,
    pub v: f64,
}

impl BerArgs {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        validate_arg(u)?;
        validate_arg(v)?;
        Ok(BerArgs { u, v })
    }
}

fn validate_arg(w: f64) -> Result<()> {
    if !(w > 0.0) || w.is_nan() {
        return Err(Error::Domain(format!(
            "A-function arguments must be positive, got {w}"
        )));
    }
    Ok(())
}

/// ln(2^{n/2} Γ(n/2)), the Gaussian moment ∫₀^∞ x^{n/2−1} e^{−x/2} dx.
fn ln_gaussian_moment(n: f64) -> f64 {
    0.5 * n * LN_2 + ln_gamma_positive(0.5 * n)
}

/// Terms `C_j w^{−p/2} 2^{(p+1)/2} Γ((p+1)/2)` of A₁ or A₂.
fn single_terms(series: &IrradianceSeries, w: f64) -> impl Iterator<Item = SignedLogValue> + '_ {
    let ln_w = w.ln();
    series.terms().iter().map(move |t| {
        t.coeff
            .scale_log(-0.5 * t.exponent * ln_w + ln_gaussian_moment(t.exponent + 1.0))
    })
}

/// A₁ at `u` over hop 2, or equally A₂ at `v` over hop 1.
pub fn a1_series(u: f64, hop: &Hop, cfg: SeriesConfig) -> Result<f64> {
    validate_arg(u)?;
    let series = IrradianceSeries::new(hop, cfg)?;
    SeriesSum::from_terms(single_terms(&series, u).collect()).map(|s| s.value)
}

/// Same routine as [`a1_series`]; the caller passes hop 1.
pub fn a2_series(v: f64, hop: &Hop, cfg: SeriesConfig) -> Result<f64> {
    a1_series(v, hop, cfg)
}

/// Which branches of the two hop series a convolution pairs.
///
/// The first letter names the hop-2 branch (argument `u`), the second the
/// hop-1 branch (argument `v`); B pairs with exponent `k + β`, A with `k + α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvKind {
    /// exponents β₂ + β₁
    BB,
    /// β₂ + α₁
    BA,
    /// α₂ + β₁
    AB,
    /// α₂ + α₁
    AA,
}

impl ConvKind {
    pub const ALL: [ConvKind; 4] = [ConvKind::BB, ConvKind::BA, ConvKind::AB, ConvKind::AA];

    /// Branch index (0 for the β exponent, 1 for α) of hop 2 and hop 1.
    fn branches(self) -> (usize, usize) {
        match self {
            ConvKind::BB => (0, 0),
            ConvKind::BA => (0, 1),
            ConvKind::AB => (1, 0),
            ConvKind::AA => (1, 1),
        }
    }
}

/// `g_k(w) = a_k w^{−p/2} / (p (p − γ²) A₀^{p−1})` with `p = k + shape`.
fn conv_factor(hop: &Hop, k: usize, branch: usize, w: f64) -> Result<SignedLogValue> {
    let (alpha, beta) = (hop.turbulence.alpha(), hop.turbulence.beta());
    let (a, b) = if branch == 0 {
        (alpha, beta)
    } else {
        (beta, alpha)
    };
    let p = k as f64 + b;
    let gap = p - hop.pointing.gamma_sq();
    if gap.abs() < crate::channel::POLE_TOLERANCE {
        return Err(Error::Pole(format!("p − γ² vanishes at k = {k}")));
    }
    let ak = crate::channel::series_coeff(k, a, b)?;
    Ok(SignedLogValue::new(
        ak.sign() * if gap > 0.0 { 1 } else { -1 },
        ak.log_magnitude()
            - 0.5 * p * w.ln()
            - p.ln()
            - gap.abs().ln()
            - (p - 1.0) * hop.pointing.a0().ln(),
    ))
}

/// Convolution coefficient `c_j = Σ_{k=0}^{j} g_k(u; hop 2) g_{j−k}(v; hop 1)`.
pub fn conv_coeff(
    kind: ConvKind,
    j: usize,
    u: f64,
    v: f64,
    hops: &HopPair,
) -> Result<SignedLogValue> {
    validate_arg(u)?;
    validate_arg(v)?;
    let (b2, b1) = kind.branches();
    let mut products = Vec::with_capacity(j + 1);
    for k in 0..=j {
        products.push(conv_factor(&hops.hop2, k, b2, u)? * conv_factor(&hops.hop1, j - k, b1, v)?);
    }
    Ok(sum_in_log_form(&products))
}

/// Sums signed-log values without leaving log form, by factoring out the
/// largest magnitude.
fn sum_in_log_form(terms: &[SignedLogValue]) -> SignedLogValue {
    let peak = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.log_magnitude())
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return SignedLogValue::ZERO;
    }
    let mut acc = NeumaierSum::default();
    let mut scaled: Vec<f64> = terms.iter().map(|t| t.scale_log(-peak).to_f64()).collect();
    scaled.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    acc.extend(scaled);
    SignedLogValue::from_f64(acc.value()).scale_log(peak)
}

/// One product of the double series of A₃, with the u- and v-dependence
/// factored out.
#[derive(Debug, Clone, Copy)]
struct PairTerm {
    /// C₂ C₁ 2^{(p₂+p₁+1)/2} Γ((p₂+p₁+1)/2)
    coeff: SignedLogValue,
    p2: f64,
    p1: f64,
    /// True on the last retained diagonal `j₂ + j₁ = J`.
    last: bool,
}

/// Double-double form of the A-series: per-term logs of the coefficients
/// with the Gaussian moments folded in.
#[derive(Debug, Clone)]
struct LogModel {
    hop2: LogHop,
    hop1: LogHop,
    /// (index into hop 2, index into hop 1, ln moment of the pair)
    pairs: Vec<(usize, usize, Dd)>,
}

#[derive(Debug, Clone)]
struct LogHop {
    terms: LogTerms,
    /// ln 2^{(p+1)/2} Γ((p+1)/2) for every term
    ln_moment: Vec<Dd>,
}

/// ln 2^{n/2} Γ(n/2) in double-double precision.
fn ln_gaussian_moment_dd(n: Dd) -> Dd {
    let half = n.mul_f64(0.5);
    half * DD_LN_2 + dd::ln_gamma(half)
}

const DD_LN_2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

/// Unit roundoff of a double-double operation.
const DD_UNIT: f64 = 4.93e-32;

/// Terms smaller than `e^{−PRUNE}` times the largest one are bounded rather
/// than summed.
const PRUNE: f64 = 80.0;

impl LogModel {
    fn new(series: &PairSeries) -> Option<LogModel> {
        let hop = |s: &IrradianceSeries| -> Option<LogHop> {
            let terms = s.log_terms()?.clone();
            let ln_moment = terms
                .terms
                .iter()
                .map(|t| ln_gaussian_moment_dd(t.exponent + Dd::ONE))
                .collect();
            Some(LogHop { terms, ln_moment })
        };
        let (hop2, hop1) = (hop(&series.hop2)?, hop(&series.hop1)?);
        let j_max = series.hop1.config().truncation;
        let mut pairs = Vec::new();
        for (i2, t2) in hop2.terms.terms.iter().enumerate() {
            for (i1, t1) in hop1.terms.terms.iter().enumerate() {
                if t2.j + t1.j <= j_max {
                    let m = ln_gaussian_moment_dd(t2.exponent + t1.exponent + Dd::ONE);
                    pairs.push((i2, i1, m));
                }
            }
        }
        Some(LogModel { hop2, hop1, pairs })
    }
}

/// A sum of terms `σ e^{ln_scale + ℓ}` sharing one `ln_scale`.
#[derive(Debug, Default)]
struct LogGroup {
    ln_scale: f64,
    sign: f64,
    /// (ℓ, σ, bound on |ℓ| pieces, on the last retained diagonal)
    entries: Vec<(Dd, f64, f64, bool)>,
}

/// Value, rounding-error estimate and largest last-diagonal term of a group.
#[derive(Debug, Clone, Copy, Default)]
struct GroupSum {
    value: f64,
    rounding: f64,
    last: f64,
    max_term: f64,
}

impl LogGroup {
    fn sum(&self) -> GroupSum {
        let peak = self
            .entries
            .iter()
            .map(|e| e.0.hi)
            .fold(f64::NEG_INFINITY, f64::max);
        if peak == f64::NEG_INFINITY {
            return GroupSum::default();
        }
        let shift = Dd::from_f64(peak);
        let mut acc = Dd::ZERO;
        let mut error = 0.0;
        let mut last: f64 = 0.0;
        let mut pruned = 0.0;
        for &(ell, sigma, size, is_last) in &self.entries {
            let x = ell.hi - peak;
            if x < -PRUNE {
                pruned += x.exp();
                if is_last {
                    last = last.max(x.exp());
                }
                continue;
            }
            let t = (ell - shift).exp();
            acc = acc + t.mul_f64(sigma);
            let mag = t.to_f64();
            error += mag * DD_UNIT * (64.0 + 4.0 * (size + peak.abs()));
            if is_last {
                last = last.max(mag);
            }
        }
        let b = acc.to_f64();
        let ln_common = self.ln_scale + peak;
        let scaled = |v: f64| (ln_common + v.ln()).exp();
        let value = self.sign * b.signum() * scaled(b.abs());
        // the shared f64 scale carries a relative error of a few ulps of its magnitude
        let scale_error = 4.0 * f64::EPSILON * (1.0 + self.ln_scale.abs() + peak.abs());
        GroupSum {
            value,
            rounding: scaled(error + pruned) + value.abs() * scale_error,
            last: scaled(last),
            max_term: scaled(1.0),
        }
    }
}

/// Which of A₁, A₂, A₃ enter a closed-form evaluation, with their signs.
#[derive(Debug, Clone, Copy)]
struct Parts {
    a1: f64,
    a2: f64,
    a3: f64,
}

impl Parts {
    /// D = A₁ + A₂ − A₃
    const COMPLEMENT: Parts = Parts {
        a1: 1.0,
        a2: 1.0,
        a3: -1.0,
    };
    const A1: Parts = Parts {
        a1: 1.0,
        a2: 0.0,
        a3: 0.0,
    };
    const A2: Parts = Parts {
        a1: 0.0,
        a2: 1.0,
        a3: 0.0,
    };
    const A3: Parts = Parts {
        a1: 0.0,
        a2: 0.0,
        a3: 1.0,
    };
}

/// Closed-form A-series of a hop pair plus the quadrature route used where
/// the closed form loses accuracy.
#[derive(Debug, Clone)]
pub struct BerModel {
    series: PairSeries,
    pairs: Vec<PairTerm>,
    logs: Option<LogModel>,
}

impl BerModel {
    pub fn new(hops: &HopPair, cfg: SeriesConfig) -> Result<Self> {
        let series = PairSeries::new(hops, cfg)?;
        let j_max = cfg.truncation;
        let mut pairs = Vec::new();
        for t2 in series.hop2.terms() {
            for t1 in series.hop1.terms() {
                if t2.j + t1.j > j_max {
                    continue;
                }
                let coeff = (t2.coeff * t1.coeff)
                    .scale_log(ln_gaussian_moment(t2.exponent + t1.exponent + 1.0));
                pairs.push(PairTerm {
                    coeff,
                    p2: t2.exponent,
                    p1: t1.exponent,
                    last: t2.j + t1.j == j_max,
                });
            }
        }
        let logs = LogModel::new(&series);
        Ok(BerModel {
            series,
            pairs,
            logs,
        })
    }

    pub fn series(&self) -> &PairSeries {
        &self.series
    }

    fn a3_terms(&self, u: f64, v: f64) -> impl Iterator<Item = (SignedLogValue, bool)> + '_ {
        let (ln_u, ln_v) = (u.ln(), v.ln());
        self.pairs.iter().map(move |t| {
            (
                t.coeff.scale_log(-0.5 * (t.p2 * ln_u + t.p1 * ln_v)),
                t.last,
            )
        })
    }

    /// A₁(u), guarded like the closed-form BER.
    pub fn a1(&self, u: f64) -> Result<f64> {
        self.closed_form_parts(&[(1.0, BerArgs::new(u, u)?)], Parts::A1)
    }

    pub fn a2(&self, v: f64) -> Result<f64> {
        self.closed_form_parts(&[(1.0, BerArgs::new(v, v)?)], Parts::A2)
    }

    pub fn a3(&self, args: BerArgs) -> Result<f64> {
        self.closed_form_parts(&[(1.0, args)], Parts::A3)
    }

    /// A(u, v), clamped to [0, √(2π)].
    pub fn a_func(&self, args: BerArgs) -> Result<f64> {
        let d = self.complement(&[(1.0, args)])?;
        Ok((SQRT_2PI - d).clamp(0.0, SQRT_2PI))
    }

    /// Σ wₖ D(uₖ, vₖ) with D = √(2π) − A.
    fn complement(&self, combo: &[(f64, BerArgs)]) -> Result<f64> {
        match self.closed_form(combo) {
            Ok(v) => Ok(v),
            Err(e) if e.is_unreliable() => {
                log::debug!("closed-form A-series rejected ({e}); integrating instead");
                self.quadrature(combo).map(|p| p * 2.0 * SQRT_2PI)
            }
            Err(e) => Err(e),
        }
    }

    fn closed_form(&self, combo: &[(f64, BerArgs)]) -> Result<f64> {
        self.closed_form_parts(combo, Parts::COMPLEMENT)
    }

    fn closed_form_parts(&self, combo: &[(f64, BerArgs)], parts: Parts) -> Result<f64> {
        let sum = match &self.logs {
            Some(logs) => self.sum_dd(logs, combo, parts),
            None => self.sum_f64(combo, parts)?,
        };
        let scale = sum.value.abs();
        let argument = combo[0].1.u;
        if self.series.hop1.config().enforce_convergence && sum.last > LAST_TERM_RATIO * scale {
            return Err(Error::Unreliable {
                argument,
                reason: format!(
                    "A-series not converged: last term {:e}, sum {scale:e}",
                    sum.last
                ),
            });
        }
        if !(sum.rounding <= CLOSED_FORM_LIMIT * scale) {
            return Err(Error::Unreliable {
                argument,
                reason: format!(
                    "A-series cancellation: terms up to {:e}, sum {scale:e}",
                    sum.max_term
                ),
            });
        }
        Ok(sum.value)
    }

    fn sum_dd(&self, logs: &LogModel, combo: &[(f64, BerArgs)], parts: Parts) -> GroupSum {
        let j_max = self.series.hop1.config().truncation;
        // ℓ + (−p/2) ln w for every term of one hop
        let shifted = |hop: &LogHop, w: f64| -> Vec<(Dd, f64)> {
            let ln_w = Dd::from_f64(w).ln();
            hop.terms
                .terms
                .iter()
                .map(|t| {
                    let power = t.exponent.mul_f64(-0.5) * ln_w;
                    (t.ln_coeff + power, t.ln_size + power.hi.abs())
                })
                .collect()
        };
        let mut groups = Vec::new();
        for &(w, args) in combo {
            let q2 = shifted(&logs.hop2, args.u);
            let q1 = shifted(&logs.hop1, args.v);
            for (weight, hop, q) in [(parts.a1, &logs.hop2, &q2), (parts.a2, &logs.hop1, &q1)] {
                if weight == 0.0 {
                    continue;
                }
                let entries = hop
                    .terms
                    .terms
                    .iter()
                    .zip(q)
                    .zip(&hop.ln_moment)
                    .map(|((t, &(ell, size)), &m)| {
                        (ell + m, t.sign, size + m.hi.abs(), t.j == j_max)
                    })
                    .collect();
                groups.push(LogGroup {
                    ln_scale: hop.terms.ln_scale,
                    sign: w * weight,
                    entries,
                });
            }
            if parts.a3 != 0.0 {
                let (t2, t1) = (&logs.hop2.terms.terms, &logs.hop1.terms.terms);
                let entries = logs
                    .pairs
                    .iter()
                    .map(|&(i2, i1, m)| {
                        let (a, sa) = q2[i2];
                        let (b, sb) = q1[i1];
                        (
                            a + b + m,
                            t2[i2].sign * t1[i1].sign,
                            sa + sb + m.hi.abs(),
                            t2[i2].j + t1[i1].j == j_max,
                        )
                    })
                    .collect();
                groups.push(LogGroup {
                    ln_scale: logs.hop2.terms.ln_scale + logs.hop1.terms.ln_scale,
                    sign: w * parts.a3,
                    entries,
                });
            }
        }
        let mut total = NeumaierSum::default();
        let mut out = GroupSum::default();
        for g in groups.iter().map(LogGroup::sum) {
            total.add(g.value);
            out.rounding += g.rounding;
            out.last = out.last.max(g.last);
            out.max_term = out.max_term.max(g.max_term);
        }
        out.value = total.value();
        out
    }

    /// The same sums term by term in f64, for hops whose coefficients leave
    /// the double-double range.
    fn sum_f64(&self, combo: &[(f64, BerArgs)], parts: Parts) -> Result<GroupSum> {
        let mut terms = Vec::new();
        let mut last = Vec::new();
        let j_max = self.series.hop1.config().truncation;
        for &(w, args) in combo {
            for (weight, series, arg) in [
                (parts.a1, &self.series.hop2, args.u),
                (parts.a2, &self.series.hop1, args.v),
            ] {
                if weight == 0.0 {
                    continue;
                }
                let sign = SignedLogValue::from_f64(w * weight);
                for (t, term) in single_terms(series, arg).zip(series.terms()) {
                    let t = t * sign;
                    if term.j == j_max {
                        last.push(t);
                    }
                    terms.push(t);
                }
            }
            if parts.a3 != 0.0 {
                let sign = SignedLogValue::from_f64(w * parts.a3);
                for (t, is_last) in self.a3_terms(args.u, args.v) {
                    let t = t * sign;
                    if is_last {
                        last.push(t);
                    }
                    terms.push(t);
                }
            }
        }
        let sum = SeriesSum::from_terms(terms)?;
        Ok(GroupSum {
            value: sum.value,
            rounding: sum.rounding_error(),
            last: last.iter().map(|t| t.to_f64().abs()).fold(0.0, f64::max),
            max_term: sum.max_term,
        })
    }

    /// `(1/√(2π)) ∫₀^∞ g(t) e^{−t²/2} dt` where `g` is the outage-type
    /// combination of the hop CDFs at `t/√uₖ`, `t/√vₖ`.
    fn quadrature(&self, combo: &[(f64, BerArgs)]) -> Result<f64> {
        let (h1, h2) = (&self.series.hop1, &self.series.hop2);
        let (l1, l2) = (h1.reliable_limit(), h2.reliable_limit());
        let mut upper = GAUSSIAN_CUTOFF;
        for &(_, a) in combo {
            upper = upper.min(l2 * a.u.sqrt()).min(l1 * a.v.sqrt());
        }
        let argument = combo[0].1.u;
        if !(upper > 0.0) {
            return Err(Error::Unreliable {
                argument,
                reason: "no reliable region for the quadrature route".into(),
            });
        }
        let g = |t: f64| -> Result<f64> {
            let mut acc = 0.0;
            for &(w, a) in combo {
                let f2 = h2.cdf(t / a.u.sqrt())?;
                let f1 = h1.cdf(t / a.v.sqrt())?;
                acc += w * (f2 + f1 - f2 * f1);
            }
            Ok(acc.clamp(0.0, 1.0))
        };
        let integral = integrate(
            |t| Ok(g(t)? * (-0.5 * t * t).exp()),
            0.0,
            upper,
            Tolerance {
                absolute: 0.0,
                relative: 1e-11,
                max_intervals: 4000,
            },
        )?;
        let body = integral.value / SQRT_2PI;
        // g is a nondecreasing probability, so the tail lies between g(upper) Q(upper) and Q(upper)
        let weight = q_function(upper)?;
        let g_edge = g(upper)?;
        let tail = 0.5 * weight * (1.0 + g_edge);
        let tail_halfwidth = 0.5 * weight * (1.0 - g_edge);
        let value = body + tail;
        let error = tail_halfwidth + integral.error / SQRT_2PI;
        if !integral.converged || error > QUADRATURE_LIMIT * value {
            return Err(Error::Unreliable {
                argument,
                reason: format!(
                    "quadrature route limited to t ≤ {upper:.3}: error {error:e} on {value:e}"
                ),
            });
        }
        Ok(value)
    }

    fn upper_combo(q: f64) -> Result<Vec<(f64, BerArgs)>> {
        Ok(vec![(1.0, BerArgs::new(q / 3.0, q / 3.0)?)])
    }

    fn lower_combo(q: f64) -> Result<Vec<(f64, BerArgs)>> {
        Ok(vec![
            (1.0, BerArgs::new(q / 2.0, q / 3.0)?),
            (1.0, BerArgs::new(q / 3.0, q / 2.0)?),
            (-1.0, BerArgs::new(q / 3.0, q / 3.0)?),
        ])
    }

    /// BER bound at `η²ξ²γ₀δ`, clamped to [0, 1/2].
    pub fn ber_at(&self, link: &LinkConfig, which: BoundKind) -> Result<f64> {
        let q = link.effective_snr() * link.delta;
        let combo = match which {
            BoundKind::Upper => Self::upper_combo(q)?,
            BoundKind::Lower => Self::lower_combo(q)?,
        };
        let d = self.complement(&combo)?;
        Ok((d / (2.0 * SQRT_2PI)).clamp(0.0, 0.5))
    }

    /// Integrates the BER bound numerically, bypassing the closed form.
    pub fn ber_by_quadrature(&self, link: &LinkConfig, which: BoundKind) -> Result<f64> {
        let q = link.effective_snr() * link.delta;
        let combo = match which {
            BoundKind::Upper => Self::upper_combo(q)?,
            BoundKind::Lower => Self::lower_combo(q)?,
        };
        self.quadrature(&combo)
    }
}

pub fn a3_series(args: BerArgs, hops: &HopPair, cfg: SeriesConfig) -> Result<f64> {
    BerModel::new(hops, cfg)?.a3(args)
}

pub fn a_func(args: BerArgs, hops: &HopPair, cfg: SeriesConfig) -> Result<f64> {
    BerModel::new(hops, cfg)?.a_func(args)
}

pub fn ber_upper(link: &LinkConfig, hops: &HopPair, cfg: SeriesConfig) -> Result<f64> {
    BerModel::new(hops, cfg)?.ber_at(link, BoundKind::Upper)
}

pub fn ber_lower(link: &LinkConfig, hops: &HopPair, cfg: SeriesConfig) -> Result<f64> {
    BerModel::new(hops, cfg)?.ber_at(link, BoundKind::Lower)
}

pub fn ber_bounds(link: &LinkConfig, hops: &HopPair, cfg: SeriesConfig) -> Result<Bounds> {
    let model = BerModel::new(hops, cfg)?;
    Ok(Bounds {
        lower: model.ber_at(link, BoundKind::Lower)?,
        upper: model.ber_at(link, BoundKind::Upper)?,
    })
}
