//! Monte Carlo estimates of outage probability and average BER obtained by
//! sampling the channel directly.
//!
//! The random stream is ChaCha20. Samples are drawn in fixed chunks of
//! [`CHUNK`] draws; chunk `k` uses `ChaCha20Rng::seed_from_u64(seed)` with
//! its stream set to `k`. Chunks run in parallel and are merged in index
//! order, so an estimate depends only on the seed and the sample count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::channel::{Hop, PointingParams, TurbulenceParams};
use crate::error::{Error, Result};
use crate::numerics::q_function;
use crate::outage::{HopPair, LinkConfig};

/// Draws per independently seeded chunk.
pub const CHUNK: usize = 1 << 16;

pub type McRng = ChaCha20Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub num_samples: usize,
    pub seed: u64,
}

impl McConfig {
    pub fn new(num_samples: usize, seed: u64) -> Result<Self> {
        if num_samples == 0 {
            return Err(Error::InvalidParameter(
                "Monte Carlo needs at least one sample".into(),
            ));
        }
        Ok(McConfig { num_samples, seed })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over √n; zero when n = 1.
    pub std_error: f64,
    pub n: usize,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + delta * other.n / n,
            m2: self.m2 + other.m2 + delta * delta * self.n * other.n / n,
        }
    }
}

/// Sampler for the irradiance of one hop: `I = X Y A₀ U^{1/γ²}` with unit-mean
/// Gamma factors `X`, `Y` and `U` uniform on (0, 1].
#[derive(Debug, Clone, Copy)]
pub struct IrradianceSampler {
    large: Gamma<f64>,
    small: Gamma<f64>,
    inv_gamma_sq: f64,
    a0: f64,
}

impl IrradianceSampler {
    pub fn new(turb: TurbulenceParams, point: PointingParams) -> Result<Self> {
        let gamma = |shape: f64| {
            Gamma::new(shape, 1.0 / shape)
                .map_err(|e| Error::InvalidParameter(format!("Gamma({shape}): {e}")))
        };
        Ok(IrradianceSampler {
            large: gamma(turb.alpha())?,
            small: gamma(turb.beta())?,
            inv_gamma_sq: 1.0 / point.gamma_sq(),
            a0: point.a0(),
        })
    }

    pub fn for_hop(hop: &Hop) -> Result<Self> {
        Self::new(hop.turbulence, hop.pointing)
    }

    /// Turbulence factor `X Y` alone.
    pub fn sample_turbulence<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.large.sample(rng) * self.small.sample(rng)
    }

    /// Pointing factor `A₀ U^{1/γ²}` alone.
    pub fn sample_pointing<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = 1.0 - rng.random::<f64>();
        self.a0 * u.powf(self.inv_gamma_sq)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_turbulence(rng) * self.sample_pointing(rng)
    }
}

pub fn sample_irradiance<R: Rng + ?Sized>(
    turb: TurbulenceParams,
    point: PointingParams,
    rng: &mut R,
) -> Result<f64> {
    Ok(IrradianceSampler::new(turb, point)?.sample(rng))
}

/// End-to-end SNRs `(Γ_BRA, Γ_ARB)` at terminals A and B for hop
/// irradiances `i1`, `i2`.
pub fn instantaneous_snrs(i1: f64, i2: f64, link: &LinkConfig) -> (f64, f64) {
    let g = link.effective_snr();
    let (s1, s2) = (i1 * i1, i2 * i2);
    let num = s1 * s2;
    (num / (2.0 * s1 + s2) * g, num / (s1 + 2.0 * s2) * g)
}

fn min_snr(i1: f64, i2: f64, link: &LinkConfig) -> f64 {
    let (a, b) = instantaneous_snrs(i1, i2, link);
    a.min(b)
}

/// Mean and standard error of `draw` over `mc.num_samples` draws.
pub fn estimate<F>(mc: &McConfig, draw: F) -> McEstimate
where
    F: Fn(&mut McRng) -> f64 + Sync,
{
    let chunks = mc.num_samples.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = McRng::seed_from_u64(mc.seed);
            rng.set_stream(k as u64);
            let len = CHUNK.min(mc.num_samples - k * CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(draw(&mut rng));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let std_error = if total.n > 1.0 {
        (total.m2 / (total.n - 1.0)).max(0.0).sqrt() / total.n.sqrt()
    } else {
        0.0
    };
    McEstimate {
        mean: total.mean,
        std_error,
        n: mc.num_samples,
    }
}

/// Pr[min(Γ_BRA, Γ_ARB) < Γ_th].
pub fn mc_outage(
    link: &LinkConfig,
    threshold_snr: f64,
    hops: &HopPair,
    mc: &McConfig,
) -> Result<McEstimate> {
    let (s1, s2) = pair_samplers(hops)?;
    Ok(estimate(mc, |rng| {
        let (i1, i2) = (s1.sample(rng), s2.sample(rng));
        f64::from(u8::from(min_snr(i1, i2, link) < threshold_snr))
    }))
}

/// E[Q(√(δ min(Γ_BRA, Γ_ARB)))] over sampled fading states.
pub fn mc_ber(link: &LinkConfig, hops: &HopPair, mc: &McConfig) -> Result<McEstimate> {
    let (s1, s2) = pair_samplers(hops)?;
    mc_ber_with(link, mc, |rng| (s1.sample(rng), s2.sample(rng)))
}

/// [`mc_ber`] with a caller-supplied draw of `(i1, i2)`.
pub fn mc_ber_with<F>(link: &LinkConfig, mc: &McConfig, draw: F) -> Result<McEstimate>
where
    F: Fn(&mut McRng) -> (f64, f64) + Sync,
{
    conditional_ber(1.0, 1.0, link)?;
    Ok(estimate(mc, |rng| {
        let (i1, i2) = draw(rng);
        conditional_ber(i1, i2, link).unwrap_or(0.5)
    }))
}

/// Q(√(δ min(Γ_BRA, Γ_ARB))) for one fading state.
pub fn conditional_ber(i1: f64, i2: f64, link: &LinkConfig) -> Result<f64> {
    q_function((link.delta * min_snr(i1, i2, link)).sqrt())
}

fn pair_samplers(hops: &HopPair) -> Result<(IrradianceSampler, IrradianceSampler)> {
    Ok((
        IrradianceSampler::for_hop(&hops.hop1)?,
        IrradianceSampler::for_hop(&hops.hop2)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{pointing_from_normalized, Regime};

    fn link(snr0: f64) -> LinkConfig {
        LinkConfig::new(snr0).unwrap()
    }

    #[test]
    fn snr_formulas() {
        let (a, b) = instantaneous_snrs(1.0, 1.0, &link(3.0));
        assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
        // (0.25·4)/(0.5 + 4)·10 and (0.25·4)/(0.25 + 8)·10
        let (a, b) = instantaneous_snrs(0.5, 2.0, &link(10.0));
        assert!((a - 10.0 / 4.5).abs() < 1e-14);
        assert!((b - 10.0 / 8.25).abs() < 1e-14);
        let (c, d) = instantaneous_snrs(2.0, 0.5, &link(10.0));
        assert_eq!((a, b), (d, c));
    }

    #[test]
    fn stub_channel_gives_q_of_root_two() {
        let mc = McConfig::new(1000, 1).unwrap();
        let est = mc_ber_with(&link(3.0), &mc, |_| (1.0, 1.0)).unwrap();
        // Q(√2) = erfc(1)/2
        assert!((est.mean - 0.078_649_603_525_142_98).abs() < 1e-15);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn estimates_are_reproducible() {
        let hops = HopPair::identical(Hop::without_pointing(Regime::Weak.params()));
        let mc = McConfig::new(100_000, 42).unwrap();
        let a = mc_ber(&link(100.0), &hops, &mc).unwrap();
        let b = mc_ber(&link(100.0), &hops, &mc).unwrap();
        assert_eq!(a, b);
        let c = mc_ber(&link(100.0), &hops, &McConfig::new(100_000, 43).unwrap()).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn result_is_independent_of_thread_count() {
        let hops = HopPair::identical(Hop::without_pointing(Regime::Strong.params()));
        let mc = McConfig::new(3 * CHUNK + 17, 9).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_outage(&link(1e3), 1.0, &hops, &mc).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn outage_limits() {
        let hops = HopPair::identical(Hop::without_pointing(Regime::Moderate.params()));
        let mc = McConfig::new(20_000, 3).unwrap();
        assert_eq!(
            mc_outage(&link(100.0), 1e-300, &hops, &mc).unwrap().mean,
            0.0
        );
        assert_eq!(mc_outage(&link(100.0), 1e20, &hops, &mc).unwrap().mean, 1.0);
    }

    #[test]
    fn zero_snr_ber_is_one_half() {
        let hops = HopPair::identical(Hop::without_pointing(Regime::Weak.params()));
        let mc = McConfig::new(1000, 3).unwrap();
        let est = mc_ber(&link(1e-300), &hops, &mc).unwrap();
        assert!((est.mean - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_sample() {
        let hops = HopPair::identical(Hop::without_pointing(Regime::Weak.params()));
        let est = mc_outage(&link(10.0), 1.0, &hops, &McConfig::new(1, 5).unwrap()).unwrap();
        assert_eq!(est.n, 1);
        assert_eq!(est.std_error, 0.0);
        assert!(McConfig::new(0, 5).is_err());
    }

    #[test]
    fn sampler_moments() {
        let p = pointing_from_normalized(10.0, 0.1).unwrap();
        let s = IrradianceSampler::new(Regime::Weak.params(), p).unwrap();
        let mc = McConfig::new(1_000_000, 11).unwrap();
        let ip = estimate(&mc, |rng| s.sample_pointing(rng));
        let g2 = p.gamma_sq();
        let expected = p.a0() * g2 / (g2 + 1.0);
        assert!(
            (ip.mean - expected).abs() < 3.0 * ip.std_error,
            "{ip:?} vs {expected}"
        );
        let ia = estimate(&mc, |rng| s.sample_turbulence(rng));
        assert!((ia.mean - 1.0).abs() < 3.0 * ia.std_error, "{ia:?}");
    }

    #[test]
    fn quadrupling_samples_halves_error() {
        let hops = HopPair::identical(Hop::without_pointing(Regime::Strong.params()));
        for seed in 0..3 {
            let small = mc_ber(&link(100.0), &hops, &McConfig::new(50_000, seed).unwrap()).unwrap();
            let large =
                mc_ber(&link(100.0), &hops, &McConfig::new(200_000, seed).unwrap()).unwrap();
            let ratio = small.std_error / large.std_error;
            assert!((1.6..=2.5).contains(&ratio), "{ratio}");
        }
    }
}
