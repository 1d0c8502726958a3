use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::erf;

/// Minimum distance kept from every pole of the series coefficients.
pub const POLE_TOLERANCE: f64 = 1e-6;

/// γ² used to stand in for "no pointing error" (γ² → ∞ limit).
pub const NO_POINTING_GAMMA_SQ: f64 = 1e8;

/// Default truncation index of the power series.
pub const DEFAULT_TRUNCATION: usize = 100;

/// Gamma-Gamma shape parameters of one hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurbulenceParams {
    alpha: f64,
    beta: f64,
}

impl TurbulenceParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "turbulence parameters must be positive and finite, got α = {alpha}, β = {beta}"
            )));
        }
        let diff = alpha - beta;
        let distance = (diff - diff.round()).abs();
        if distance < POLE_TOLERANCE {
            return Err(Error::Pole(format!(
                "α − β = {diff} is within {distance:e} of an integer (1/sin[π(α−β)] blows up)"
            )));
        }
        Ok(TurbulenceParams { alpha, beta })
    }

    /// Large-scale scintillation parameter α.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Small-scale scintillation parameter β.
    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Named turbulence regimes used in the reference figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Strong,
    Moderate,
    Weak,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::Strong, Regime::Moderate, Regime::Weak];

    pub fn params(self) -> TurbulenceParams {
        let (alpha, beta) = match self {
            Regime::Strong => (4.2, 1.4),
            Regime::Moderate => (4.0, 1.9),
            Regime::Weak => (8.5, 6.7),
        };
        TurbulenceParams { alpha, beta }
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Strong => "strong",
            Regime::Moderate => "moderate",
            Regime::Weak => "weak",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(Regime::Strong),
            "moderate" => Ok(Regime::Moderate),
            "weak" => Ok(Regime::Weak),
            other => Err(Error::UnknownRegime(other.to_string())),
        }
    }
}

pub fn regime_preset(name: &str) -> Result<TurbulenceParams> {
    name.parse::<Regime>().map(Regime::params)
}

/// Propagation geometry from which (α, β) follow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryInputs {
    /// C_n², m^(-2/3).
    pub refraction_structure: f64,
    /// λ, meters.
    pub wavelength: f64,
    /// Receiver lens diameter D, meters.
    pub aperture_diameter: f64,
    /// Link distance z, meters.
    pub link_distance: f64,
}

/// Raw (α, β) from the plane-wave scintillation formulas, without the
/// pole check that [`turbulence_from_geometry`] applies.
pub fn turbulence_shape(geom: &GeometryInputs) -> Result<(f64, f64)> {
    let fields = [
        geom.refraction_structure,
        geom.wavelength,
        geom.aperture_diameter,
        geom.link_distance,
    ];
    if fields.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "geometry inputs must be strictly positive, got {geom:?}"
        )));
    }
    let k = 2.0 * PI / geom.wavelength;
    let z = geom.link_distance;
    let chi_sq = 0.5 * geom.refraction_structure * k.powf(7.0 / 6.0) * z.powf(11.0 / 6.0);
    let d_sq = k * geom.aperture_diameter.powi(2) / (4.0 * z);
    // χ^{12/5}
    let chi_125 = chi_sq.powf(6.0 / 5.0);

    let alpha_arg = 0.49 * chi_sq / (1.0 + 0.18 * d_sq + 0.56 * chi_125).powf(7.0 / 6.0);
    let beta_arg = 0.51 * chi_sq * (1.0 + 0.69 * chi_125).powf(-5.0 / 6.0)
        / (1.0 + 0.9 * d_sq + 0.62 * d_sq * chi_125).powf(5.0 / 6.0);
    Ok((1.0 / alpha_arg.exp_m1(), 1.0 / beta_arg.exp_m1()))
}

pub fn turbulence_from_geometry(geom: &GeometryInputs) -> Result<TurbulenceParams> {
    let (alpha, beta) = turbulence_shape(geom)?;
    TurbulenceParams::new(alpha, beta)
}

/// Misalignment fading parameters of one hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointingParams {
    gamma_sq: f64,
    a0: f64,
}

impl PointingParams {
    pub fn new(gamma_sq: f64, a0: f64) -> Result<Self> {
        if !(gamma_sq > 0.0 && gamma_sq.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "γ² must be positive and finite, got {gamma_sq}"
            )));
        }
        if !(a0 > 0.0 && a0 <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "A₀ must lie in (0, 1], got {a0}"
            )));
        }
        Ok(PointingParams { gamma_sq, a0 })
    }

    /// The γ² → ∞, A₀ = 1 stand-in for a perfectly aligned link.
    pub fn none() -> Self {
        PointingParams {
            gamma_sq: NO_POINTING_GAMMA_SQ,
            a0: 1.0,
        }
    }

    pub fn gamma_sq(&self) -> f64 {
        self.gamma_sq
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }
}

/// Gaussian beam and detector geometry for misalignment fading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamInputs {
    pub aperture_radius: f64,
    pub beam_waist: f64,
    pub jitter_stddev: f64,
}

/// Derives (γ², A₀) for a Gaussian beam on a circular aperture.
///
/// Collisions of γ² with the series poles depend on (α, β, J) and are
/// reported when the series for a hop is built.
pub fn pointing_from_beam(beam: &BeamInputs) -> Result<PointingParams> {
    let BeamInputs {
        aperture_radius: r,
        beam_waist: wz,
        jitter_stddev: sigma,
    } = *beam;
    if [r, wz, sigma].iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "beam inputs must be strictly positive, got {beam:?}"
        )));
    }
    let v = PI.sqrt() * r / (2f64.sqrt() * wz);
    let erf_v = erf(v);
    let a0 = erf_v * erf_v;
    let wz_eq_sq = wz * wz * PI.sqrt() * erf_v / (2.0 * v * (-v * v).exp());
    let gamma_sq = wz_eq_sq / (4.0 * sigma * sigma);
    PointingParams::new(gamma_sq, a0)
}

/// Pointing parameters from the normalized beamwidth w_z/r and jitter σ_s/r.
///
/// The formulas are invariant under a joint scaling of (r, w_z, σ_s), so r = 1.
pub fn pointing_from_normalized(wz_over_r: f64, sigma_over_r: f64) -> Result<PointingParams> {
    pointing_from_beam(&BeamInputs {
        aperture_radius: 1.0,
        beam_waist: wz_over_r,
        jitter_stddev: sigma_over_r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesConfig {
    /// Index J of the last retained series term.
    pub truncation: usize,
    /// Reject evaluations whose last retained term is not negligible.
    ///
    /// Truncation studies switch this off to see the raw truncated value.
    pub enforce_convergence: bool,
}

impl SeriesConfig {
    pub fn new(truncation: usize) -> Self {
        SeriesConfig {
            truncation,
            enforce_convergence: true,
        }
    }

    /// Truncated evaluation without the convergence check.
    pub fn truncated(truncation: usize) -> Self {
        SeriesConfig {
            truncation,
            enforce_convergence: false,
        }
    }
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig::new(DEFAULT_TRUNCATION)
    }
}

/// Channel law of one hop: turbulence and misalignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hop {
    pub turbulence: TurbulenceParams,
    pub pointing: PointingParams,
}

impl Hop {
    pub fn new(turbulence: TurbulenceParams, pointing: PointingParams) -> Self {
        Hop {
            turbulence,
            pointing,
        }
    }

    pub fn without_pointing(turbulence: TurbulenceParams) -> Self {
        Hop::new(turbulence, PointingParams::none())
    }
}
