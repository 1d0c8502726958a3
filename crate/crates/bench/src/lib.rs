//! Fixtures shared by the benchmarks.

use twoway_fso::channel::pointing_from_normalized;
use twoway_fso::{Hop, HopPair, Regime};

/// Identical hops without pointing error.
pub fn plain_pair(regime: Regime) -> HopPair {
    HopPair::identical(Hop::without_pointing(regime.params()))
}

/// Identical hops with w_z/r = 10 and σ_s/r = 0.1.
pub fn pointed_pair(regime: Regime) -> HopPair {
    let p = pointing_from_normalized(10.0, 0.1).expect("valid pointing");
    HopPair::identical(Hop::new(regime.params(), p))
}
