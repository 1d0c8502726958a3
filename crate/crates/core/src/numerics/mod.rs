//! Special functions and summation primitives shared by the analytic modules.

pub mod dd;
mod quadrature;
mod signed_log;
mod special;

pub use quadrature::{integrate, Integral, Tolerance};
pub use signed_log::{
    sum_signed_log, NeumaierSum, SeriesSum, SignedLogValue, MAX_LOG_MAGNITUDE, TERM_RELATIVE_ERROR,
};
pub(crate) use special::ln_gamma_positive;
pub use special::{erf, log_gamma_signed, q_function};
