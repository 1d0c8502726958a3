//! Gamma-Gamma turbulence combined with misalignment fading.
//!
//! [`params`] derives the channel parameters; [`series`] evaluates the power
//! series of the combined PDF and CDF.

pub mod params;
pub mod series;

pub use params::{
    pointing_from_beam, pointing_from_normalized, regime_preset, turbulence_from_geometry,
    turbulence_shape, BeamInputs, GeometryInputs, Hop, PointingParams, Regime, SeriesConfig,
    TurbulenceParams, DEFAULT_TRUNCATION, NO_POINTING_GAMMA_SQ, POLE_TOLERANCE,
};
pub use series::{
    cdf_irradiance, pdf_irradiance, series_coeff, IrradianceSeries, LogTerm, LogTerms, SeriesTerm,
    LAST_TERM_RATIO, ROUNDING_LIMIT,
};
