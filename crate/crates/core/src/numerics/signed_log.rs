use std::cmp::Ordering;
use std::ops::{Div, Mul, Neg};

use crate::error::{Error, Result};

/// Largest log-magnitude that still materializes to a finite f64.
pub const MAX_LOG_MAGNITUDE: f64 = 709.782_712_893_384;

/// Relative error assumed for a materialized series term.
///
/// Term log-magnitudes are assembled from components of size up to a few
/// hundred (ln j!, j ln u, ...), each rounded to one ulp, so a term carries
/// about 1e-14 relative error once exponentiated.
pub const TERM_RELATIVE_ERROR: f64 = 50.0 * f64::EPSILON;

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Series coefficients here routinely reach 10^±300 before they cancel, so
/// every term is carried in this form and only materialized when summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    log_magnitude: f64,
}

impl SignedLogValue {
    pub const ZERO: SignedLogValue = SignedLogValue {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };

    pub const ONE: SignedLogValue = SignedLogValue {
        sign: 1,
        log_magnitude: 0.0,
    };

    /// Builds a value from a sign and log-magnitude.
    ///
    /// A zero sign or a log-magnitude of negative infinity both yield zero.
    /// Signs other than -1, 0, +1 are clamped to their signum.
    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLogValue {
                sign: sign.signum(),
                log_magnitude,
            }
        }
    }

    pub fn positive(log_magnitude: f64) -> Self {
        Self::new(1, log_magnitude)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Materializes the value; overflows to ±inf and underflows to 0 silently.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    /// Materializes the value, failing if the magnitude exceeds the f64 range.
    pub fn try_to_f64(&self) -> Result<f64> {
        if self.sign != 0 && self.log_magnitude > MAX_LOG_MAGNITUDE {
            return Err(Error::Overflow(format!(
                "term with log-magnitude {} exceeds the f64 range",
                self.log_magnitude
            )));
        }
        Ok(self.to_f64())
    }

    /// Multiplies by `exp(delta)`.
    pub fn scale_log(self, delta: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self::new(self.sign, self.log_magnitude + delta)
        }
    }

    /// Raises a positive base to a real power, in log form.
    pub fn powf_positive(base: f64, exponent: f64) -> Self {
        debug_assert!(base > 0.0);
        Self::positive(exponent * base.ln())
    }

    pub fn abs(self) -> Self {
        Self::new(self.sign.abs(), self.log_magnitude)
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.log_magnitude
            .total_cmp(&other.log_magnitude)
            .then(self.sign.cmp(&other.sign))
    }
}

impl Mul for SignedLogValue {
    type Output = SignedLogValue;

    fn mul(self, rhs: SignedLogValue) -> SignedLogValue {
        if self.is_zero() || rhs.is_zero() {
            return SignedLogValue::ZERO;
        }
        SignedLogValue::new(self.sign * rhs.sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Div for SignedLogValue {
    type Output = SignedLogValue;

    /// Division by zero yields a value with infinite log-magnitude.
    fn div(self, rhs: SignedLogValue) -> SignedLogValue {
        if self.is_zero() {
            return SignedLogValue::ZERO;
        }
        let sign = if rhs.is_zero() {
            self.sign
        } else {
            self.sign * rhs.sign
        };
        SignedLogValue::new(sign, self.log_magnitude - rhs.log_magnitude)
    }
}

impl Neg for SignedLogValue {
    type Output = SignedLogValue;

    fn neg(self) -> SignedLogValue {
        SignedLogValue::new(-self.sign, self.log_magnitude)
    }
}

impl From<f64> for SignedLogValue {
    fn from(x: f64) -> Self {
        SignedLogValue::from_f64(x)
    }
}

/// Result of a compensated series summation, with the diagnostics needed to
/// judge how much of the value survived cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Sum of the absolute values of all terms.
    pub magnitude_sum: f64,
    /// Largest single term magnitude.
    pub max_term: f64,
    pub terms: usize,
}

impl SeriesSum {
    pub const EMPTY: SeriesSum = SeriesSum {
        value: 0.0,
        magnitude_sum: 0.0,
        max_term: 0.0,
        terms: 0,
    };

    /// Sorts terms by ascending magnitude and accumulates them with
    /// Neumaier's compensated summation.
    pub fn from_terms(mut terms: Vec<SignedLogValue>) -> Result<SeriesSum> {
        terms.retain(|t| !t.is_zero());
        terms.sort_unstable_by(SignedLogValue::cmp_magnitude);

        let mut acc = NeumaierSum::default();
        let mut magnitude = NeumaierSum::default();
        let mut max_term = 0.0_f64;
        for t in &terms {
            let x = t.try_to_f64()?;
            acc.add(x);
            magnitude.add(x.abs());
            max_term = max_term.max(x.abs());
        }
        let value = acc.value();
        if !value.is_finite() {
            return Err(Error::Overflow(
                "partial sum of series terms left the f64 range".into(),
            ));
        }
        Ok(SeriesSum {
            value,
            magnitude_sum: magnitude.value(),
            max_term,
            terms: terms.len(),
        })
    }

    /// Estimated absolute rounding error of `value`.
    pub fn rounding_error(&self) -> f64 {
        self.magnitude_sum * TERM_RELATIVE_ERROR
    }

    /// Ratio of the summed magnitudes to the magnitude of the sum.
    pub fn condition(&self) -> f64 {
        if self.value == 0.0 {
            if self.magnitude_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            self.magnitude_sum / self.value.abs()
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Sums signed-log terms: materialize, sort by ascending magnitude,
/// compensated accumulation. The empty sum is 0.
pub fn sum_signed_log(terms: &[SignedLogValue]) -> Result<f64> {
    SeriesSum::from_terms(terms.to_vec()).map(|s| s.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(sum_signed_log(&[]).unwrap(), 0.0);
    }

    #[test]
    fn exact_cancellation() {
        let ln2 = 2f64.ln();
        let s = sum_signed_log(&[SignedLogValue::new(1, ln2), SignedLogValue::new(-1, ln2)]);
        assert_eq!(s.unwrap(), 0.0);
    }

    #[test]
    fn large_but_finite_sum_is_returned() {
        // 1e300 + 1e300 is still well inside the f64 range.
        let t = SignedLogValue::positive(1e300f64.ln());
        let s = sum_signed_log(&[t, t]).unwrap();
        assert!((s / 2e300 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn overflowing_sum_is_an_error() {
        let t = SignedLogValue::positive(1e308f64.ln());
        assert!(matches!(sum_signed_log(&[t, t]), Err(Error::Overflow(_))));
    }

    #[test]
    fn unmaterializable_term_is_an_error() {
        let t = SignedLogValue::positive(800.0);
        assert!(matches!(sum_signed_log(&[t]), Err(Error::Overflow(_))));
    }

    #[test]
    fn zero_normalization() {
        assert!(SignedLogValue::new(1, f64::NEG_INFINITY).is_zero());
        assert_eq!(
            SignedLogValue::new(0, 3.0).log_magnitude(),
            f64::NEG_INFINITY
        );
        assert!(SignedLogValue::from_f64(0.0).is_zero());
        assert_eq!(SignedLogValue::from_f64(-0.0).sign(), 0);
    }

    #[test]
    fn arithmetic_in_log_form() {
        let a = SignedLogValue::from_f64(-3.0);
        let b = SignedLogValue::from_f64(0.5);
        assert!(((a * b).to_f64() + 1.5).abs() < 1e-15);
        assert!(((a / b).to_f64() + 6.0).abs() < 1e-14);
        assert!(((-a).to_f64() - 3.0).abs() < 1e-15);
        assert!((a * SignedLogValue::ZERO).is_zero());
    }

    #[test]
    fn tiny_terms_survive_large_cancellation() {
        let big = 1e16;
        let terms = [
            SignedLogValue::from_f64(big),
            SignedLogValue::from_f64(1.0),
            SignedLogValue::from_f64(-big),
            SignedLogValue::from_f64(1.0),
        ];
        assert_eq!(sum_signed_log(&terms).unwrap(), 2.0);
    }

    #[test]
    fn diagnostics_track_cancellation() {
        let terms = vec![
            SignedLogValue::from_f64(1e8),
            SignedLogValue::from_f64(-1e8),
            SignedLogValue::from_f64(1.0),
        ];
        let s = SeriesSum::from_terms(terms).unwrap();
        assert_eq!(s.value, 1.0);
        assert!((s.magnitude_sum - (2e8 + 1.0)).abs() < 1e-6);
        assert!((s.condition() - (2e8 + 1.0)).abs() < 1e-6);
        assert_eq!(s.terms, 3);
    }

    fn term() -> impl Strategy<Value = SignedLogValue> {
        (prop_oneof![Just(-1i8), Just(1i8)], -40.0f64..40.0)
            .prop_map(|(s, l)| SignedLogValue::new(s, l))
    }

    proptest! {
        #[test]
        fn round_trip_preserves_value(x in prop_oneof![-1e300f64..-1e-300, 1e-300f64..1e300]) {
            let v = SignedLogValue::from_f64(x);
            let back = v.to_f64();
            prop_assert!(((back - x) / x).abs() < 1e-12);
            let again = SignedLogValue::from_f64(back);
            prop_assert_eq!(again.sign(), v.sign());
            prop_assert!((again.log_magnitude() - v.log_magnitude()).abs()
                <= 4.0 * f64::EPSILON * v.log_magnitude().abs().max(1.0));
        }

        #[test]
        fn sum_is_permutation_invariant(mut terms in prop::collection::vec(term(), 0..60), seed in any::<u64>()) {
            let forward = sum_signed_log(&terms).unwrap();
            // deterministic shuffle driven by the seed
            let mut state = seed | 1;
            for i in (1..terms.len()).rev() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                terms.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let shuffled = sum_signed_log(&terms).unwrap();
            // canonical ordering makes the result independent of input order
            prop_assert_eq!(forward.to_bits(), shuffled.to_bits());
        }
    }
}
