//! Double-double arithmetic: an unevaluated sum `hi + lo` carrying about
//! 32 significant digits.
//!
//! Only what the irradiance series needs is provided: the four operations,
//! `exp`, `ln`, and `ln Γ` for positive arguments. The algorithms follow the
//! usual error-free transformations (two-sum and FMA two-product).

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Relative precision of a double-double value, with margin for the
/// transcendental functions.
pub const DD_EPSILON: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN_2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

const HALF_LN_2PI: Dd = Dd {
    hi: 0.918_938_533_204_672_8,
    lo: -3.878_294_158_067_241_4e-17,
};

/// (numerator, denominator) of the Bernoulli numbers B₂ … B₂₈.
const BERNOULLI: [(f64, f64); 14] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174_611.0, 330.0),
    (854_513.0, 138.0),
    (-236_364_091.0, 2730.0),
    (8_553_103.0, 6.0),
    (-23_749_461_029.0, 870.0),
];

/// Smallest argument at which the Stirling series is used directly.
const STIRLING_MIN: f64 = 30.0;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// Exact product of two doubles.
    pub fn product(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    /// Multiplies by `2^k` exactly.
    fn ldexp(self, k: i32) -> Dd {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    /// Full double-double precision holds for results above about 1e-292;
    /// below that the low word is subnormal.
    pub fn exp(self) -> Dd {
        if self.hi > 709.78 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 {
            return Dd::ONE;
        }
        // exp(x) = 2^k exp(r)^(2^SQUARINGS), |r| ≤ ln2 / 2^(SQUARINGS+1)
        const SQUARINGS: i32 = 9;
        let k = (self.hi / LN_2.hi).round();
        let r = (self - LN_2.mul_f64(k)).ldexp(-SQUARINGS);
        // Taylor series of exp(r) − 1
        let mut term = r;
        let mut sum = r;
        for n in 2..=14 {
            term = term * r / Dd::from_f64(n as f64);
            sum = sum + term;
        }
        // undo the scaling with (1 + s)² − 1 = s(2 + s) to keep the small part accurate
        for _ in 0..SQUARINGS {
            sum = sum * (sum + Dd::from_f64(2.0));
        }
        let result = sum + Dd::ONE;
        let ki = k as i32;
        // split the power of two to stay clear of overflow in 2^k
        result.ldexp(ki / 2).ldexp(ki - ki / 2)
    }

    /// Natural log of a positive value.
    ///
    /// The binary exponent is split off first, then one Newton step on `exp`
    /// refines the double estimate of the mantissa's log.
    pub fn ln(self) -> Dd {
        if !(self.hi > 0.0) || self.hi.is_infinite() {
            return Dd::from_f64(self.hi.ln());
        }
        let e = self.hi.log2().floor() as i32;
        let m = self.ldexp(-e / 2).ldexp(-(e - e / 2));
        let y = Dd::from_f64(m.hi.ln());
        y + m * (-y).exp() - Dd::ONE + LN_2.mul_f64(f64::from(e))
    }

    /// Positive base raised to a real power.
    pub fn powf(self, p: Dd) -> Dd {
        (self.ln() * p).exp()
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: Dd) -> Dd {
    debug_assert!(x.hi > 0.0);
    // shift into the Stirling range: Γ(x) = Γ(x + n) / (x (x+1) … (x+n−1))
    let mut z = x;
    let mut shift = Dd::ONE;
    let mut log_shift = Dd::ZERO;
    while z.hi < STIRLING_MIN {
        shift = shift * z;
        z = z + Dd::ONE;
        if shift.hi > 1e250 {
            log_shift = log_shift + shift.ln();
            shift = Dd::ONE;
        }
    }
    log_shift = log_shift + shift.ln();

    let z_inv = z.recip();
    let z_inv_sq = z_inv * z_inv;
    let mut power = z_inv;
    let mut series = Dd::ZERO;
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        let coeff = Dd::from_f64(num) / (Dd::from_f64(den) * Dd::product(two_k, two_k - 1.0));
        series = series + coeff * power;
        power = power * z_inv_sq;
    }
    (z - Dd::from_f64(0.5)) * z.ln() - z + HALF_LN_2PI + series - log_shift
}

/// Γ(x) for any x that is not a non-positive integer, as long as the
/// result is representable.
pub fn gamma(x: Dd) -> Dd {
    if x.hi > 0.0 {
        return ln_gamma(x).exp();
    }
    // Γ(x) = Γ(x + n) / (x (x+1) … (x+n−1)) with x + n > 0
    let mut z = x;
    let mut product = Dd::ONE;
    while z.hi <= 0.0 {
        product = product * z;
        z = z + Dd::ONE;
    }
    ln_gamma(z).exp() / product
}

/// ln |Γ(x)| and the sign of Γ(x), for x not a non-positive integer.
pub fn ln_abs_gamma(x: Dd) -> (Dd, f64) {
    if x.hi > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    let mut z = x;
    let mut product = Dd::ONE;
    let mut log_product = Dd::ZERO;
    while z.hi <= 0.0 {
        product = product * z;
        z = z + Dd::ONE;
        if product.hi.abs() > 1e250 {
            log_product = log_product + product.abs().ln();
            product = Dd::from_f64(product.hi.signum());
        }
    }
    let sign = product.hi.signum();
    (ln_gamma(z) - log_product - product.abs().ln(), sign)
}

impl Add for Dd {
    type Output = Dd;

    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;

    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;

    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;

    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::from_f64(x)
    }
}
