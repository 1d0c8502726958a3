//! Rectangular-region probability and the outage-probability bounds.

use std::fmt;
use std::str::FromStr;

use crate::ber::BerModel;
use crate::channel::{Hop, IrradianceSeries, SeriesConfig};
use crate::error::{Error, Result};

/// Search bracket of [`required_snr`], in dB.
pub const SNR_BRACKET_DB: (f64, f64) = (0.0, 140.0);

/// Width of the final bisection bracket, in dB.
pub const SNR_TOLERANCE_DB: f64 = 0.01;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// System constants of the link. All quantities are linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    /// η
    pub responsivity: f64,
    /// ξ
    pub modulation_index: f64,
    /// γ₀
    pub snr0: f64,
    /// δ, 2 for BPSK.
    pub delta: f64,
}

impl LinkConfig {
    /// η = ξ = 1 and BPSK.
    pub fn new(snr0: f64) -> Result<Self> {
        LinkConfig {
            responsivity: 1.0,
            modulation_index: 1.0,
            snr0,
            delta: 2.0,
        }
        .validated()
    }

    pub fn from_db(snr0_db: f64) -> Result<Self> {
        Self::new(db_to_linear(snr0_db))
    }

    pub fn validated(self) -> Result<Self> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(self.responsivity) && ok(self.snr0) && ok(self.delta)) {
            return Err(Error::InvalidParameter(format!(
                "η, γ₀ and δ must be positive and finite: {self:?}"
            )));
        }
        if !(self.modulation_index > 0.0 && self.modulation_index <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "modulation index must lie in (0, 1], got {}",
                self.modulation_index
            )));
        }
        Ok(self)
    }

    pub fn with_snr0(self, snr0: f64) -> Result<Self> {
        LinkConfig { snr0, ..self }.validated()
    }

    /// η²ξ²γ₀
    pub fn effective_snr(&self) -> f64 {
        (self.responsivity * self.modulation_index).powi(2) * self.snr0
    }
}

/// Channel laws of the two hops: `hop1` carries I₁ (A↔R), `hop2` carries I₂ (B↔R).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopPair {
    pub hop1: Hop,
    pub hop2: Hop,
}

impl HopPair {
    pub fn new(hop1: Hop, hop2: Hop) -> Self {
        HopPair { hop1, hop2 }
    }

    pub fn identical(hop: Hop) -> Self {
        HopPair {
            hop1: hop,
            hop2: hop,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Upper,
    Lower,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Upper => "upper",
            BoundKind::Lower => "lower",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(BoundKind::Upper),
            "lower" => Ok(BoundKind::Lower),
            other => Err(Error::InvalidParameter(format!("unknown bound `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Outage,
    Ber,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Ber => "ber",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outage" => Ok(Metric::Outage),
            "ber" => Ok(Metric::Ber),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

/// CDF series of both hops, built once and shared by every evaluation.
#[derive(Debug, Clone)]
pub struct PairSeries {
    pub hop1: IrradianceSeries,
    pub hop2: IrradianceSeries,
}

impl PairSeries {
    pub fn new(hops: &HopPair, cfg: SeriesConfig) -> Result<Self> {
        Ok(PairSeries {
            hop1: IrradianceSeries::new(&hops.hop1, cfg)?,
            hop2: IrradianceSeries::new(&hops.hop2, cfg)?,
        })
    }

    fn cdf_at(series: &IrradianceSeries, a: f64) -> Result<f64> {
        if !(a > 0.0) || a.is_nan() {
            return Err(Error::Domain(format!(
                "rectangle corner must be positive, got {a}"
            )));
        }
        series.cdf(1.0 / a.sqrt())
    }

    /// Ψ(a, c) = {1 − F_{I₂}(1/√a)}{1 − F_{I₁}(1/√c)}.
    pub fn psi(&self, a: f64, c: f64) -> Result<f64> {
        let f2 = Self::cdf_at(&self.hop2, a)?;
        let f1 = Self::cdf_at(&self.hop1, c)?;
        Ok((1.0 - f2) * (1.0 - f1))
    }

    /// 1 − Ψ(a, c), expanded so that small values keep full relative accuracy.
    pub fn psi_complement(&self, a: f64, c: f64) -> Result<f64> {
        let f2 = Self::cdf_at(&self.hop2, a)?;
        let f1 = Self::cdf_at(&self.hop1, c)?;
        Ok((f2 + f1 - f2 * f1).clamp(0.0, 1.0))
    }

    /// Upper bound 1 − Ψ(q/3, q/3) at `q = η²ξ²γ₀/Γ_th`.
    pub fn outage_upper_at(&self, q: f64) -> Result<f64> {
        self.psi_complement(q / 3.0, q / 3.0)
    }

    /// Lower bound 1 − {Ψ(q/2, q/3) + Ψ(q/3, q/2) − Ψ(q/3, q/3)}.
    pub fn outage_lower_at(&self, q: f64) -> Result<f64> {
        let f2a = Self::cdf_at(&self.hop2, q / 2.0)?;
        let f2b = Self::cdf_at(&self.hop2, q / 3.0)?;
        let f1a = Self::cdf_at(&self.hop1, q / 2.0)?;
        let f1b = Self::cdf_at(&self.hop1, q / 3.0)?;
        Ok(lower_combination(f2a, f2b, f1a, f1b).clamp(0.0, 1.0))
    }

    pub fn outage_at(&self, q: f64, which: BoundKind) -> Result<f64> {
        match which {
            BoundKind::Upper => self.outage_upper_at(q),
            BoundKind::Lower => self.outage_lower_at(q),
        }
    }
}

/// Expanded form of the lower-bound region with the `q/2` CDFs (`f2a`, `f1a`)
/// and the `q/3` CDFs (`f2b`, `f1b`); the ±1 and ±F terms cancel exactly.
pub(crate) fn lower_combination(f2a: f64, f2b: f64, f1a: f64, f1b: f64) -> f64 {
    f2a + f1a - f2a * f1b - f2b * f1a + f2b * f1b
}

/// `η²ξ²γ₀ / Γ_th`, the argument of the outage bounds.
pub fn threshold_ratio(link: &LinkConfig, threshold_snr: f64) -> Result<f64> {
    if !(threshold_snr > 0.0 && threshold_snr.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "threshold SNR must be positive and finite, got {threshold_snr}"
        )));
    }
    Ok(link.effective_snr() / threshold_snr)
}

pub fn psi(a: f64, c: f64, hops: &HopPair, cfg: SeriesConfig) -> Result<f64> {
    PairSeries::new(hops, cfg)?.psi(a, c)
}

pub fn outage_upper(
    link: &LinkConfig,
    threshold_snr: f64,
    hops: &HopPair,
    cfg: SeriesConfig,
) -> Result<f64> {
    let q = threshold_ratio(link, threshold_snr)?;
    PairSeries::new(hops, cfg)?.outage_upper_at(q)
}

pub fn outage_lower(
    link: &LinkConfig,
    threshold_snr: f64,
    hops: &HopPair,
    cfg: SeriesConfig,
) -> Result<f64> {
    let q = threshold_ratio(link, threshold_snr)?;
    PairSeries::new(hops, cfg)?.outage_lower_at(q)
}

pub fn outage_bounds(
    link: &LinkConfig,
    threshold_snr: f64,
    hops: &HopPair,
    cfg: SeriesConfig,
) -> Result<Bounds> {
    let q = threshold_ratio(link, threshold_snr)?;
    let series = PairSeries::new(hops, cfg)?;
    Ok(Bounds {
        lower: series.outage_lower_at(q)?,
        upper: series.outage_upper_at(q)?,
    })
}

/// Bound on the CDF of min(Γ_BRA, Γ_ARB) at `x`.
pub fn cdf_min_snr(
    x: f64,
    which: BoundKind,
    link: &LinkConfig,
    hops: &HopPair,
    cfg: SeriesConfig,
) -> Result<f64> {
    let q = threshold_ratio(link, x)?;
    PairSeries::new(hops, cfg)?.outage_at(q, which)
}

enum Model {
    Outage(PairSeries),
    Ber(BerModel),
}

/// γ₀ (in dB) at which the chosen bound equals `target`.
///
/// Bisects over [`SNR_BRACKET_DB`] down to [`SNR_TOLERANCE_DB`]. Points where
/// the series cannot be evaluated reliably lie at low SNR and are treated as
/// being above the target.
pub fn required_snr(
    target: f64,
    which: BoundKind,
    threshold_snr: f64,
    link: &LinkConfig,
    hops: &HopPair,
    cfg: SeriesConfig,
    metric: Metric,
) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "target probability must lie in (0, 1), got {target}"
        )));
    }
    let model = match metric {
        Metric::Outage => Model::Outage(PairSeries::new(hops, cfg)?),
        Metric::Ber => Model::Ber(BerModel::new(hops, cfg)?),
    };
    let eval = |db: f64| -> Result<f64> {
        let link = link.with_snr0(db_to_linear(db))?;
        match &model {
            Model::Outage(s) => s.outage_at(threshold_ratio(&link, threshold_snr)?, which),
            Model::Ber(m) => m.ber_at(&link, which),
        }
    };
    // Some(value) when reliable, None when the series gave up
    let probe = |db: f64| -> Result<Option<f64>> {
        match eval(db) {
            Ok(v) => Ok(Some(v)),
            Err(e) if e.is_unreliable() => Ok(None),
            Err(e) => Err(e),
        }
    };

    let (mut lo, mut hi) = SNR_BRACKET_DB;
    let bracket_err = |detail: String| Error::Bracket {
        target,
        lo_db: SNR_BRACKET_DB.0,
        hi_db: SNR_BRACKET_DB.1,
        detail,
    };
    match probe(hi)? {
        Some(v) if v <= target => {}
        Some(v) => {
            return Err(bracket_err(format!(
                "{metric} {which} bound is {v:e} at {hi} dB"
            )))
        }
        None => return Err(bracket_err(format!("series unreliable at {hi} dB"))),
    }
    let mut lo_reliable = match probe(lo)? {
        Some(v) if v <= target => {
            return Err(bracket_err(format!(
                "{metric} {which} bound is already {v:e} at {lo} dB"
            )))
        }
        Some(_) => true,
        None => false,
    };
    while hi - lo > SNR_TOLERANCE_DB {
        let mid = 0.5 * (lo + hi);
        match probe(mid)? {
            Some(v) if v <= target => hi = mid,
            Some(_) => {
                lo = mid;
                lo_reliable = true;
            }
            None => {
                lo = mid;
                lo_reliable = false;
            }
        }
    }
    if !lo_reliable {
        return Err(Error::Unreliable {
            argument: lo,
            reason: format!(
                "the {metric} {which} bound crosses {target:e} where the series cannot be evaluated"
            ),
        });
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Regime;
    use proptest::prelude::*;

    fn pair(regime: Regime) -> HopPair {
        HopPair::identical(Hop::without_pointing(regime.params()))
    }

    #[test]
    fn psi_limits_and_symmetry() {
        let cfg = SeriesConfig::default();
        let hops = pair(Regime::Weak);
        assert_eq!(psi(1e30, 1e30, &hops, cfg).unwrap(), 1.0);
        let a = psi(4.0, 9.0, &hops, cfg).unwrap();
        let b = psi(9.0, 4.0, &hops, cfg).unwrap();
        assert_eq!(a, b);
        assert!(psi(0.0, 1.0, &hops, cfg).is_err());
    }

    #[test]
    fn complement_matches_direct_form() {
        let s = PairSeries::new(&pair(Regime::Moderate), SeriesConfig::default()).unwrap();
        for q in [30.0, 300.0, 3000.0] {
            let direct = 1.0 - s.psi(q / 3.0, q / 3.0).unwrap();
            assert!((s.outage_upper_at(q).unwrap() - direct).abs() < 1e-14);
            let direct_lower = 1.0
                - (s.psi(q / 2.0, q / 3.0).unwrap() + s.psi(q / 3.0, q / 2.0).unwrap()
                    - s.psi(q / 3.0, q / 3.0).unwrap());
            assert!((s.outage_lower_at(q).unwrap() - direct_lower).abs() < 1e-14);
        }
    }

    #[test]
    fn high_snr_limit() {
        let link = LinkConfig::from_db(160.0).unwrap();
        let p = outage_upper(&link, 1.0, &pair(Regime::Strong), SeriesConfig::default()).unwrap();
        assert!(p < 1e-7, "{p}");
    }

    #[test]
    fn cdf_min_snr_is_the_outage_bound() {
        let link = LinkConfig::from_db(40.0).unwrap();
        let hops = pair(Regime::Weak);
        let cfg = SeriesConfig::default();
        let a = cdf_min_snr(3.0, BoundKind::Upper, &link, &hops, cfg).unwrap();
        assert_eq!(a, outage_upper(&link, 3.0, &hops, cfg).unwrap());
        let moderate = pair(Regime::Moderate);
        let link = LinkConfig::from_db(60.0).unwrap();
        let u = cdf_min_snr(1.0, BoundKind::Upper, &link, &moderate, cfg).unwrap();
        let l = cdf_min_snr(1.0, BoundKind::Lower, &link, &moderate, cfg).unwrap();
        assert!(l <= u);
        let mut prev = 0.0;
        for x in [0.5, 1.0, 2.0, 4.0, 8.0] {
            let f = cdf_min_snr(x, BoundKind::Upper, &link, &moderate, cfg).unwrap();
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn required_snr_hits_its_target() {
        let hops = pair(Regime::Moderate);
        let cfg = SeriesConfig::default();
        let link = LinkConfig::new(1.0).unwrap();
        let db = required_snr(
            0.5,
            BoundKind::Upper,
            1.0,
            &link,
            &hops,
            cfg,
            Metric::Outage,
        )
        .unwrap();
        let half = SNR_TOLERANCE_DB / 2.0;
        let above = outage_upper(
            &link.with_snr0(db_to_linear(db - half)).unwrap(),
            1.0,
            &hops,
            cfg,
        )
        .unwrap();
        let below = outage_upper(
            &link.with_snr0(db_to_linear(db + half)).unwrap(),
            1.0,
            &hops,
            cfg,
        )
        .unwrap();
        assert!(above >= 0.5 && below <= 0.5, "{above} {below}");
    }

    #[test]
    fn weak_median_crossing_is_found() {
        let link = LinkConfig::new(1.0).unwrap();
        let hops = pair(Regime::Weak);
        let cfg = SeriesConfig::default();
        let db = required_snr(
            0.5,
            BoundKind::Upper,
            1.0,
            &link,
            &hops,
            cfg,
            Metric::Outage,
        )
        .unwrap();
        let at = |x: f64| {
            outage_upper(&link.with_snr0(db_to_linear(x)).unwrap(), 1.0, &hops, cfg).unwrap()
        };
        assert!(
            at(db - SNR_TOLERANCE_DB) >= 0.5 && at(db + SNR_TOLERANCE_DB) <= 0.5,
            "{db}"
        );
    }

    #[test]
    fn crossing_outside_reliable_region_is_reported() {
        // an outage this close to one needs the weak series far beyond i = 4
        let link = LinkConfig::new(1.0).unwrap();
        let r = required_snr(
            1.0 - 1e-10,
            BoundKind::Upper,
            100.0,
            &link,
            &pair(Regime::Weak),
            SeriesConfig::default(),
            Metric::Outage,
        );
        assert!(r.unwrap_err().is_unreliable());
    }

    #[test]
    fn unattainable_target_is_a_bracket_error() {
        let link = LinkConfig::new(1.0).unwrap();
        let r = required_snr(
            1e-30,
            BoundKind::Upper,
            1.0,
            &link,
            &pair(Regime::Strong),
            SeriesConfig::default(),
            Metric::Outage,
        );
        assert!(matches!(r, Err(Error::Bracket { .. })));
        let r = required_snr(
            1.0 - 1e-12,
            BoundKind::Upper,
            1.0,
            &link,
            &pair(Regime::Moderate),
            SeriesConfig::default(),
            Metric::Outage,
        );
        assert!(matches!(r, Err(Error::Bracket { .. })), "{r:?}");
    }

    #[test]
    fn link_config_validation() {
        assert!(LinkConfig::new(0.0).is_err());
        let l = LinkConfig {
            modulation_index: 1.5,
            ..LinkConfig::new(1.0).unwrap()
        };
        assert!(l.validated().is_err());
        assert_eq!(LinkConfig::from_db(30.0).unwrap().snr0, 1000.0);
        assert!((linear_to_db(db_to_linear(37.3)) - 37.3).abs() < 1e-12);
    }

    #[test]
    fn names_round_trip() {
        for m in [Metric::Outage, Metric::Ber] {
            assert_eq!(m.to_string().parse::<Metric>().unwrap(), m);
        }
        for b in [BoundKind::Upper, BoundKind::Lower] {
            assert_eq!(b.to_string().parse::<BoundKind>().unwrap(), b);
        }
        assert!("both".parse::<Metric>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bounds_are_ordered_and_monotone(db in 25.0f64..120.0, th_db in -5.0f64..12.0, r in 0usize..3) {
            let hops = pair(Regime::ALL[r]);
            let cfg = SeriesConfig::default();
            let th = db_to_linear(th_db);
            let link = LinkConfig::from_db(db).unwrap();
            let b = match outage_bounds(&link, th, &hops, cfg) {
                Ok(b) => b,
                Err(e) if e.is_unreliable() => return Ok(()),
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            };
            prop_assert!(b.lower <= b.upper);
            let higher = outage_bounds(&LinkConfig::from_db(db + 1.0).unwrap(), th, &hops, cfg).unwrap();
            prop_assert!(higher.upper <= b.upper && higher.lower <= b.lower);
            if let Ok(stricter) = outage_bounds(&link, th * 1.5, &hops, cfg) {
                prop_assert!(stricter.upper >= b.upper && stricter.lower >= b.lower);
            }
        }
    }
}
