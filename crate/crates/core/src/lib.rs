#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod ber;
pub mod channel;
pub mod error;
pub mod montecarlo;
pub mod numerics;
pub mod outage;

pub use channel::{Hop, PointingParams, Regime, SeriesConfig, TurbulenceParams};
pub use error::{Error, Result};
pub use montecarlo::{McConfig, McEstimate};
pub use outage::{BoundKind, Bounds, HopPair, LinkConfig, Metric};
