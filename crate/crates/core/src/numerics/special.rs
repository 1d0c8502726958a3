use std::f64::consts::FRAC_1_SQRT_2;

use super::SignedLogValue;
use crate::error::{Error, Result};

/// Sign and log-magnitude of Γ(x).
///
/// Negative non-integer arguments go through the reflection identity
/// (inside `lgamma_r`), which `a_j(α, β)` needs for Γ(j − α + β + 1).
pub fn log_gamma_signed(x: f64) -> Result<SignedLogValue> {
    if x.is_nan() {
        return Err(Error::Domain("log-gamma of NaN".into()));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Domain(format!("Γ has a pole at {x}")));
    }
    let (log_magnitude, sign) = libm::lgamma_r(x);
    Ok(SignedLogValue::new(
        if sign < 0 { -1 } else { 1 },
        log_magnitude,
    ))
}

/// ln Γ(x) for x > 0, where the sign is known to be positive.
pub(crate) fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    libm::lgamma_r(x).0
}

/// Gaussian tail probability Q(x) = erfc(x/√2)/2.
pub fn q_function(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Q is only evaluated at nonnegative arguments, got {x}"
        )));
    }
    Ok(0.5 * libm::erfc(x * FRAC_1_SQRT_2))
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn log_gamma_known_values() {
        let g = log_gamma_signed(1.0).unwrap();
        assert_eq!(g.sign(), 1);
        assert!(g.log_magnitude().abs() < 1e-16);

        let g = log_gamma_signed(0.5).unwrap();
        assert_eq!(g.sign(), 1);
        assert!((g.log_magnitude() - 0.572_364_942_924_700_087_07).abs() < 1e-15);

        // Γ(-1/2) = -2√π
        let g = log_gamma_signed(-0.5).unwrap();
        assert_eq!(g.sign(), -1);
        assert!((g.log_magnitude() - 1.265_512_123_484_645_396_5).abs() < 1e-15);
    }

    #[test]
    fn log_gamma_negative_arguments() {
        // values from a 40-digit evaluation
        let cases = [
            (-2.5, -1, -0.056_243_716_497_674_050_673),
            (-1.5, 1, 0.860_047_015_376_481_014_51),
            (-0.4, -1, 1.314_524_589_943_389_964_8),
            (100.5, 1, 361.435_540_467_777_621_56),
            (1e-8, 1, 18.420_680_738_180_208_905),
        ];
        for (x, sign, lg) in cases {
            let g = log_gamma_signed(x).unwrap();
            assert_eq!(g.sign(), sign, "sign at {x}");
            assert!(
                (g.log_magnitude() - lg).abs() < 1e-14 * lg.abs().max(1.0),
                "ln|Γ({x})| = {} vs {lg}",
                g.log_magnitude()
            );
        }
    }

    #[test]
    fn log_gamma_poles_are_domain_errors() {
        for x in [0.0, -1.0, -2.0, -17.0, f64::NAN] {
            assert!(
                matches!(log_gamma_signed(x), Err(Error::Domain(_))),
                "x = {x}"
            );
        }
    }

    #[test]
    fn log_gamma_recurrence() {
        for x in [0.3, 1.7, -0.4, 5.5] {
            let lhs = log_gamma_signed(x + 1.0).unwrap().to_f64();
            let rhs = x * log_gamma_signed(x).unwrap().to_f64();
            assert!(rel(lhs, rhs) < 1e-10, "x = {x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn q_function_values() {
        assert_eq!(q_function(0.0).unwrap(), 0.5);
        assert_eq!(q_function(f64::INFINITY).unwrap(), 0.0);
        // erfc(x/√2)/2 at 40 digits
        let cases = [
            (0.5, 0.308_537_538_725_986_896_36),
            (1.0, 0.158_655_253_931_457_051_41),
            (std::f64::consts::SQRT_2, 0.078_649_603_525_142_565_329),
            (2.0, 0.022_750_131_948_179_207_2),
            (5.0, 2.866_515_718_791_939_116_7e-7),
            (10.0, 7.619_853_024_160_526_066e-24),
            (20.0, 2.753_624_118_606_233_695_1e-89),
            (30.0, 4.906_713_927_148_187_059_5e-198),
            (37.0, 5.725_571_222_524_576_822_7e-300),
        ];
        for (x, q) in cases {
            let got = q_function(x).unwrap();
            assert!(rel(got, q) <= 1e-12, "Q({x}) = {got:e} vs {q:e}");
        }
    }

    #[test]
    fn q_function_rejects_negative() {
        assert!(q_function(-1e-9).is_err());
        assert!(q_function(f64::NAN).is_err());
    }

    #[test]
    fn q_function_is_monotone() {
        let mut prev = q_function(0.0).unwrap();
        for k in 1..=4000 {
            let q = q_function(k as f64 * 0.01).unwrap();
            assert!(q <= prev);
            prev = q;
        }
    }
}
