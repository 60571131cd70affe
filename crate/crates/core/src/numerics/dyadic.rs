//! Exact dyadic rationals `mantissa * 2^exponent`.
//!
//! Every ball midpoint and radius is a [`Dyadic`]. Arithmetic here is exact;
//! rounding only happens through the explicit `round_*` helpers so callers
//! always know how much error they introduced.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact number of the form `mantissa * 2^exponent`.
///
/// Kept normalized (odd mantissa, or zero with exponent 0) so that structural
/// equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: e,
        }
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exponent += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.mantissa.bits()
    }

    /// Exponent of the most significant bit, i.e. `floor(log2 |x|)`.
    /// Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exponent + self.bits() as i64 - 1
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
        )
    }

    pub fn mul_pow2(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + e,
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Round toward negative infinity keeping at most `bits` significant bits.
    pub fn round_floor(&self, bits: u32) -> Dyadic {
        self.round_with(bits, false)
    }

    /// Round toward positive infinity keeping at most `bits` significant bits.
    pub fn round_ceil(&self, bits: u32) -> Dyadic {
        self.round_with(bits, true)
    }

    fn round_with(&self, bits: u32, up: bool) -> Dyadic {
        let bits = bits.max(2) as u64;
        let have = self.bits();
        if have <= bits {
            return self.clone();
        }
        let shift = have - bits;
        // `>>` on BigInt rounds toward -inf
        let mut m = self.mantissa.clone() >> shift as usize;
        if up {
            let back = &m << shift as usize;
            if back != self.mantissa {
                m += 1;
            }
        }
        Dyadic::new(m, self.exponent + shift as i64)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as usize
        } else {
            // arithmetic shift floors
            &self.mantissa >> (-self.exponent) as usize
        }
    }

    /// Smallest integer not below the value.
    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    /// Nearest integer, ties rounded up.
    pub fn round_nearest(&self) -> BigInt {
        self.add(&Dyadic::pow2(-1)).floor()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as usize,
            )
        }
    }

    /// Exact conversion from a rational whose denominator is a power of two.
    pub fn from_rational_exact(r: &BigRational) -> Option<Dyadic> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
    }

    /// Quotient `num / den` rounded to about `bits` significant bits, returned
    /// together with an upper bound on the absolute rounding error.
    pub fn div_rounded(num: &BigRational, bits: u32) -> (Dyadic, Dyadic) {
        if let Some(d) = Dyadic::from_rational_exact(num) {
            let r = d.round_floor(bits);
            let err = d.sub(&r).abs();
            return (r, err);
        }
        let n = num.numer();
        let d = num.denom();
        // choose shift s so that n * 2^s / d has about `bits` bits
        let s = bits as i64 + d.bits() as i64 - n.bits() as i64 + 2;
        let scaled = if s >= 0 {
            n << s as usize
        } else {
            n >> (-s) as usize
        };
        let (q, _) = scaled.div_mod_floor(d);
        let mid = Dyadic::new(q, -s);
        // floor of a scaled quotient is within one unit 2^-s; the pre-shift
        // truncation for s < 0 adds at most another d^-1 * 2^-s
        let err = Dyadic::pow2(-s + 1);
        (mid, err)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.bits() as i64;
        let keep = 60.min(bits);
        let shifted = &self.mantissa >> (bits - keep) as usize;
        let m = shifted.to_f64().unwrap_or(f64::NAN);
        m * pow2_f64(self.exponent + bits - keep)
    }

    /// Exact decimal expansion (always terminates for dyadics).
    pub fn to_decimal_string(&self) -> String {
        if self.exponent >= 0 {
            return self.floor().to_string();
        }
        let k = (-self.exponent) as u32;
        let scaled = &self.mantissa * num_traits::pow(BigInt::from(5), k as usize);
        let neg = scaled.is_negative();
        let mut digits = scaled.abs().to_string();
        let k = k as usize;
        if digits.len() <= k {
            digits = format!("{}{}", "0".repeat(k + 1 - digits.len()), digits);
        }
        let (int_part, frac_part) = digits.split_at(digits.len() - k);
        let frac_part = frac_part.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(int_part);
        if !frac_part.is_empty() {
            out.push('.');
            out.push_str(frac_part);
        }
        out
    }

    /// Parse a plain decimal (`-12.5`, `0.001`) that denotes a dyadic exactly.
    pub fn parse_decimal(s: &str) -> Option<Dyadic> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits = format!("{int_part}{frac_part}");
        let mut n: BigInt = digits.parse().ok()?;
        if neg {
            n = -n;
        }
        let k = frac_part.len();
        let five_k = num_traits::pow(BigInt::from(5), k);
        let (q, r) = n.div_rem(&five_k);
        if !r.is_zero() {
            return None;
        }
        Some(Dyadic::new(q, -(k as i64)))
    }
}

fn pow2_f64(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        2f64.powi(-1022) * 2f64.powi((e + 1022) as i32)
    } else {
        2f64.powi(e as i32)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_int(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::from_bigint(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
        assert_eq!(Dyadic::new(BigInt::zero(), 7), Dyadic::zero());
    }

    #[test]
    fn rounding_brackets_value() {
        let x = Dyadic::new(BigInt::from(0b1011_0111), -3);
        let lo = x.round_floor(4);
        let hi = x.round_ceil(4);
        assert!(lo <= x && x <= hi);
        assert!(lo.bits() <= 4 && hi.bits() <= 4);
        let neg = x.neg();
        assert!(neg.round_floor(4) <= neg && neg <= neg.round_ceil(4));
    }

    #[test]
    fn floor_and_ceil_of_negative() {
        let x = Dyadic::new(BigInt::from(-5), -1); // -2.5
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        assert_eq!(x.round_nearest(), BigInt::from(-2));
    }

    #[test]
    fn decimal_round_trip() {
        for (m, e) in [(1i64, -1i64), (-3, -5), (7, 3), (12345, -20), (0, 0)] {
            let d = Dyadic::new(BigInt::from(m), e);
            let s = d.to_decimal_string();
            assert_eq!(Dyadic::parse_decimal(&s), Some(d), "{s}");
        }
        assert_eq!(Dyadic::parse_decimal("0.1"), None);
        assert_eq!(Dyadic::parse_decimal("abc"), None);
    }

    #[test]
    fn div_rounded_error_bound_holds() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        let (mid, err) = Dyadic::div_rounded(&r, 64);
        let diff = (mid.to_rational() - &r).abs();
        assert!(diff <= err.to_rational());
        assert!(err <= Dyadic::pow2(-60));
    }
}
