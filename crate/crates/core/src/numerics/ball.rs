//! Midpoint-radius balls over [`Dyadic`] numbers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::dyadic::Dyadic;
use super::NumericsError;

/// Significant bits kept in a radius. Radii are always rounded up.
pub const RADIUS_BITS: u32 = 32;

/// Outcome of a certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certainty {
    True,
    False,
    Unknown,
}

impl Certainty {
    pub fn is_true(self) -> bool {
        self == Certainty::True
    }

    pub fn is_false(self) -> bool {
        self == Certainty::False
    }
}

impl std::ops::Not for Certainty {
    type Output = Certainty;

    fn not(self) -> Certainty {
        match self {
            Certainty::True => Certainty::False,
            Certainty::False => Certainty::True,
            Certainty::Unknown => Certainty::Unknown,
        }
    }
}

/// A real number known to lie in `[mid - rad, mid + rad]`.
///
/// `prec` is the working precision (in bits) used for operations producing
/// new balls from this one; binary operations use the larger of the two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl Ball {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Result<Ball, NumericsError> {
        if rad.is_negative() {
            return Err(NumericsError::NegativeRadius);
        }
        if prec == 0 {
            return Err(NumericsError::InvalidPrecision(prec));
        }
        Ok(Ball {
            mid,
            rad: rad.round_ceil(RADIUS_BITS),
            prec,
        })
    }

    /// A ball holding `mid` exactly (zero radius, midpoint not rounded).
    pub fn exact(mid: Dyadic, prec: u32) -> Ball {
        Ball {
            mid,
            rad: Dyadic::zero(),
            prec: prec.max(1),
        }
    }

    pub fn zero(prec: u32) -> Ball {
        Ball::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Ball {
        Ball::exact(Dyadic::one(), prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Ball {
        Ball::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Ball {
        Ball::exact(Dyadic::from_bigint(v.clone()), prec)
    }

    /// Enclosure of `p/q`. Dyadic quotients are held exactly.
    pub fn from_rational(p: &BigInt, q: &BigInt, prec: u32) -> Result<Ball, NumericsError> {
        if q.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        Ok(Ball::from_ratio(
            &BigRational::new(p.clone(), q.clone()),
            prec,
        ))
    }

    pub fn from_ratio(r: &BigRational, prec: u32) -> Ball {
        let prec = prec.max(1);
        if let Some(d) = Dyadic::from_rational_exact(r) {
            return Ball::exact(d, prec);
        }
        let (mid, err) = Dyadic::div_rounded(r, prec);
        Ball {
            mid,
            rad: err.round_ceil(RADIUS_BITS),
            prec,
        }
    }

    /// The ball `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Result<Ball, NumericsError> {
        if lo > hi {
            return Err(NumericsError::Domain(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        let mid = lo.add(hi).mul_pow2(-1);
        let rad = hi.sub(lo).mul_pow2(-1);
        Ok(Ball::rounded(mid, rad, prec))
    }

    /// Build a ball, rounding the midpoint to `prec` bits and absorbing the
    /// rounding error into the radius.
    pub(crate) fn rounded(mid: Dyadic, rad: Dyadic, prec: u32) -> Ball {
        let r = mid.round_floor(prec);
        let err = mid.sub(&r).abs();
        Ball {
            mid: r,
            rad: rad.add(&err).round_ceil(RADIUS_BITS),
            prec,
        }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Ball {
        self.prec = prec.max(1);
        self
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Enlarge the radius by `extra` (rounded up).
    pub fn add_error(&self, extra: &Dyadic) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: self.rad.add(&extra.abs()).round_ceil(RADIUS_BITS),
            prec: self.prec,
        }
    }

    pub fn contains_dyadic(&self, x: &Dyadic) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lower().to_rational() <= *x && *x <= self.upper().to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_dyadic(&Dyadic::zero())
    }

    /// Whether `other`'s interval lies inside this one.
    pub fn contains(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// `sup(self) < inf(other)` is TRUE, `inf(self) > sup(other)` is FALSE,
    /// anything else (overlap or touching) is UNKNOWN.
    pub fn certify_lt(&self, other: &Ball) -> Certainty {
        if self.upper() < other.lower() {
            Certainty::True
        } else if self.lower() > other.upper() {
            Certainty::False
        } else {
            Certainty::Unknown
        }
    }

    /// `sup(self) <= inf(other)` is TRUE, `inf(self) > sup(other)` is FALSE.
    pub fn certify_le(&self, other: &Ball) -> Certainty {
        if self.upper() <= other.lower() {
            Certainty::True
        } else if self.lower() > other.upper() {
            Certainty::False
        } else {
            Certainty::Unknown
        }
    }

    pub fn certify_positive(&self) -> Certainty {
        Ball::zero(self.prec).certify_lt(self)
    }

    pub fn certify_negative(&self) -> Certainty {
        self.certify_lt(&Ball::zero(self.prec))
    }

    pub fn neg_ball(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Ball {
        if !self.contains_zero() || self.mid.is_zero() {
            return Ball {
                mid: self.mid.abs(),
                rad: self.rad.clone(),
                prec: self.prec,
            };
        }
        let hi = self.lower().abs().max(self.upper().abs());
        Ball::rounded(hi.mul_pow2(-1), hi.mul_pow2(-1), self.prec)
    }

    /// Intersect with `[0, inf)`; used for quantities known to be nonnegative.
    pub fn clamp_nonnegative(&self) -> Ball {
        if self.lower().is_negative() {
            let hi = self.upper().max(Dyadic::zero());
            Ball::rounded(hi.mul_pow2(-1), hi.mul_pow2(-1), self.prec)
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &Ball) -> Ball {
        let lo = self.lower().max(other.lower());
        let hi = self.upper().max(other.upper());
        let prec = self.prec.max(other.prec);
        Ball::from_endpoints(&lo, &hi, prec).expect("max of nonempty intervals")
    }

    pub fn min(&self, other: &Ball) -> Ball {
        let lo = self.lower().min(other.lower());
        let hi = self.upper().min(other.upper());
        let prec = self.prec.max(other.prec);
        Ball::from_endpoints(&lo, &hi, prec).expect("min of nonempty intervals")
    }

    pub fn mul_pow2(&self, e: i64) -> Ball {
        Ball {
            mid: self.mid.mul_pow2(e),
            rad: self.rad.mul_pow2(e),
            prec: self.prec,
        }
    }

    pub fn add_ball(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        Ball::rounded(self.mid.add(&other.mid), self.rad.add(&other.rad), prec)
    }

    pub fn sub_ball(&self, other: &Ball) -> Ball {
        self.add_ball(&other.neg_ball())
    }

    pub fn mul_ball(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let mid = self.mid.mul(&other.mid);
        let rad = self
            .mid
            .abs()
            .mul(&other.rad)
            .add(&other.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Ball::rounded(mid, rad.round_ceil(RADIUS_BITS + 8), prec)
    }

    pub fn mul_int(&self, k: &BigInt) -> Ball {
        self.mul_ball(&Ball::from_bigint(k, self.prec))
    }

    pub fn add_int(&self, k: i64) -> Ball {
        self.add_ball(&Ball::from_int(k, self.prec))
    }

    /// Division; fails when the divisor's interval contains zero.
    pub fn try_div(&self, other: &Ball) -> Result<Ball, NumericsError> {
        if other.contains_zero() {
            return Err(NumericsError::Domain(
                "division by a ball containing zero".into(),
            ));
        }
        let prec = self.prec.max(other.prec);
        let ratio = self.mid.to_rational() / other.mid.to_rational();
        let (q, q_err) = Dyadic::div_rounded(&ratio, prec);
        if self.rad.is_zero() && other.rad.is_zero() {
            return Ok(Ball {
                mid: q,
                rad: q_err.round_ceil(RADIUS_BITS),
                prec,
            });
        }
        // |x/y - ma/mb| <= (ra + |ma/mb| rb) / (|mb| - rb)
        let q_abs = q.abs().add(&q_err);
        let num = self
            .rad
            .add(&q_abs.mul(&other.rad))
            .round_ceil(RADIUS_BITS + 8);
        let den = other.mid.abs().sub(&other.rad).round_floor(RADIUS_BITS + 8);
        let prop = div_up(&num, &den);
        Ok(Ball {
            mid: q,
            rad: q_err.add(&prop).round_ceil(RADIUS_BITS),
            prec,
        })
    }

    pub fn div_int(&self, k: i64) -> Result<Ball, NumericsError> {
        self.try_div(&Ball::from_int(k, self.prec))
    }

    pub fn recip(&self) -> Result<Ball, NumericsError> {
        Ball::one(self.prec).try_div(self)
    }

    pub fn sqr(&self) -> Ball {
        if self.contains_zero() && !self.rad.is_zero() {
            // tighter than mul_ball for balls straddling zero
            let hi = self.lower().abs().max(self.upper().abs());
            let hi2 = hi.mul(&hi);
            return Ball::rounded(hi2.mul_pow2(-1), hi2.mul_pow2(-1), self.prec);
        }
        self.mul_ball(self)
    }

    /// Integer power; negative exponents need a zero-free ball.
    pub fn powi(&self, n: i64) -> Result<Ball, NumericsError> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut result = Ball::one(self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ball(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    /// Both endpoints share the same floor: that integer. Otherwise `None`.
    pub fn floor_certified(&self) -> Option<BigInt> {
        let lo = self.lower().floor();
        let hi = self.upper().floor();
        (lo == hi).then_some(lo)
    }

    /// `||x||`, the distance to the nearest integer. 1-Lipschitz, so the
    /// radius carries over unchanged.
    pub fn dist_to_nearest_int(&self) -> Ball {
        let nearest = Dyadic::from_bigint(self.mid.round_nearest());
        let d = self.mid.sub(&nearest).abs();
        Ball {
            mid: d,
            rad: self.rad.clone(),
            prec: self.prec,
        }
        .clamp_nonnegative()
    }

    /// Midpoint as an `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Upper endpoint rounded up to an `f64`-sized dyadic, for display only.
    pub fn upper_f64(&self) -> f64 {
        self.upper().round_ceil(53).to_f64()
    }

    pub fn lower_f64(&self) -> f64 {
        self.lower().round_floor(53).to_f64()
    }

    /// The exact upper endpoint as a zero-radius ball.
    pub fn upper_ball(&self) -> Ball {
        Ball::exact(self.upper(), self.prec)
    }

    pub fn lower_ball(&self) -> Ball {
        Ball::exact(self.lower(), self.prec)
    }

    pub fn cmp_mid(&self, other: &Ball) -> Ordering {
        self.mid.cmp(&other.mid)
    }
}

/// Upper bound for `n / d` with `n >= 0`, `d > 0`.
pub(crate) fn div_up(n: &Dyadic, d: &Dyadic) -> Dyadic {
    let (q, err) = Dyadic::div_rounded(&(n.to_rational() / d.to_rational()), RADIUS_BITS + 8);
    q.add(&err).round_ceil(RADIUS_BITS + 8)
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.17e} +/- {:.3e}]",
            self.mid.to_f64(),
            self.rad.to_f64()
        )
    }
}

impl Add<&Ball> for &Ball {
    type Output = Ball;
    fn add(self, rhs: &Ball) -> Ball {
        self.add_ball(rhs)
    }
}

impl Add for Ball {
    type Output = Ball;
    fn add(self, rhs: Ball) -> Ball {
        self.add_ball(&rhs)
    }
}

impl Sub<&Ball> for &Ball {
    type Output = Ball;
    fn sub(self, rhs: &Ball) -> Ball {
        self.sub_ball(rhs)
    }
}

impl Sub for Ball {
    type Output = Ball;
    fn sub(self, rhs: Ball) -> Ball {
        self.sub_ball(&rhs)
    }
}

impl Mul<&Ball> for &Ball {
    type Output = Ball;
    fn mul(self, rhs: &Ball) -> Ball {
        self.mul_ball(rhs)
    }
}

impl Mul for Ball {
    type Output = Ball;
    fn mul(self, rhs: Ball) -> Ball {
        self.mul_ball(&rhs)
    }
}

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        self.neg_ball()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(p: i64, q: i64) -> Ball {
        Ball::from_rational(&BigInt::from(p), &BigInt::from(q), 64).unwrap()
    }

    fn ball_r(mid: (i64, i64), rad: (i64, i64)) -> Ball {
        let m = ball(mid.0, mid.1);
        let r = ball(rad.0, rad.1);
        m.add_error(&r.upper())
    }

    #[test]
    fn dyadic_rational_is_exact() {
        let b = ball(1, 2);
        assert!(b.is_exact());
        assert_eq!(b.mid(), &Dyadic::pow2(-1));
    }

    #[test]
    fn non_dyadic_rational_has_small_radius() {
        let b = ball(1, 3);
        assert!(!b.is_exact());
        assert!(b.contains_rational(&BigRational::new(1.into(), 3.into())));
        assert!(*b.rad() <= Dyadic::pow2(-64));
    }

    #[test]
    fn zero_denominator_rejected() {
        let err = Ball::from_rational(&BigInt::from(1), &BigInt::from(0), 64);
        assert!(matches!(err, Err(NumericsError::ZeroDenominator)));
    }

    #[test]
    fn certify_lt_cases() {
        let a = ball_r((26, 100), (1, 1000));
        let b = ball_r((27, 100), (1, 1000));
        assert_eq!(a.certify_lt(&b), Certainty::True);
        assert_eq!(b.certify_lt(&a), Certainty::False);
        let c = ball_r((1, 2), (1, 5));
        assert_eq!(c.certify_lt(&c), Certainty::Unknown);
    }

    #[test]
    fn division_by_zero_ball_fails() {
        let z = ball_r((0, 1), (1, 10));
        assert!(ball(1, 1).try_div(&z).is_err());
    }

    #[test]
    fn division_encloses_quotient() {
        let x = ball_r((7, 3), (1, 100));
        let y = ball_r((-5, 4), (1, 50));
        let q = x.try_div(&y).unwrap();
        for (xn, yn) in [
            (7.0 / 3.0 - 0.01, -1.25 - 0.02),
            (7.0 / 3.0 + 0.01, -1.25 + 0.02),
        ] {
            let v = xn / yn;
            assert!(q.lower_f64() <= v && v <= q.upper_f64(), "{q} vs {v}");
        }
    }

    #[test]
    fn powi_negative_and_zero() {
        let x = ball(3, 2);
        assert_eq!(x.powi(0).unwrap(), Ball::one(64));
        let inv = x.powi(-2).unwrap();
        assert!(inv.contains_rational(&BigRational::new(4.into(), 9.into())));
    }

    #[test]
    fn distance_to_nearest_integer() {
        let x = ball(7, 4); // 1.75
        let d = x.dist_to_nearest_int();
        assert!(d.contains_rational(&BigRational::new(1.into(), 4.into())));
        let straddle = ball_r((0, 1), (1, 8)).dist_to_nearest_int();
        assert!(!straddle.lower().is_negative());
    }

    #[test]
    fn floor_certification() {
        assert_eq!(ball(7, 4).floor_certified(), Some(BigInt::from(1)));
        assert_eq!(ball_r((1, 1), (1, 8)).floor_certified(), None);
    }
}
