//! Logarithm, exponential and square root on balls.
//!
//! Each function evaluates at the midpoint with a guarded working precision,
//! bounds the series tail explicitly, then widens by a derivative bound for
//! the input radius.

use num_bigint::BigInt;

use super::ball::{div_up, Ball, RADIUS_BITS};
use super::dyadic::Dyadic;
use super::NumericsError;

const GUARD_BITS: u32 = 32;

/// `2 * atanh(z)` for an exact rational `0 <= z <= 1/3`, as a ball.
fn two_atanh_small(z: &Ball, wp: u32) -> Ball {
    // (1/3)^k <= 2^(-3k/2), tail <= (9/8) z^(2N+3) <= 2^(1 - floor(3(2N+3)/2))
    let mut n_terms: i64 = 0;
    while 1 - (3 * (2 * n_terms + 3)) / 2 > -(wp as i64) - 2 {
        n_terms += 1;
    }
    let z2 = z.sqr();
    let mut power = z.clone();
    let mut sum = Ball::zero(wp);
    for j in 0..=n_terms {
        let term = power
            .div_int(2 * j + 1)
            .expect("odd integer divisor is nonzero");
        sum = sum.add_ball(&term);
        power = power.mul_ball(&z2);
    }
    let tail = Dyadic::pow2(1 - (3 * (2 * n_terms + 3)) / 2);
    sum.add_error(&tail).mul_pow2(1)
}

/// `log 2` at `prec` bits.
pub fn ln2(prec: u32) -> Ball {
    let wp = prec + GUARD_BITS;
    let third =
        Ball::from_rational(&BigInt::from(1), &BigInt::from(3), wp).expect("nonzero denominator");
    round_to(two_atanh_small(&third, wp), prec)
}

fn round_to(b: Ball, prec: u32) -> Ball {
    Ball::rounded(b.mid().clone(), b.rad().clone(), prec)
}

impl Ball {
    /// Natural logarithm. The whole interval must be strictly positive.
    pub fn log(&self) -> Result<Ball, NumericsError> {
        let lower = self.lower();
        if !lower.is_positive() {
            return Err(NumericsError::Domain(format!(
                "log of a ball whose interval reaches {lower}"
            )));
        }
        let prec = self.prec();
        let wp = prec + GUARD_BITS;
        let m = self.mid();
        // m = u * 2^e with 1 <= u < 2
        let e = m.magnitude();
        let u = m.mul_pow2(-e);
        let one = Dyadic::one();
        let num = u.sub(&one);
        let log_mid = if num.is_zero() && e == 0 {
            Ball::zero(wp)
        } else {
            let z = Ball::from_ratio(&(num.to_rational() / u.add(&one).to_rational()), wp);
            let log_u = two_atanh_small(&z, wp);
            if e == 0 {
                log_u
            } else {
                let l2 = ln2(wp);
                log_u.add_ball(&l2.mul_int(&BigInt::from(e)))
            }
        };
        // |log x - log m| <= r / (m - r)
        let widened = if self.rad().is_zero() {
            log_mid
        } else {
            let den = lower.round_floor(RADIUS_BITS + 8);
            log_mid.add_error(&div_up(self.rad(), &den))
        };
        Ok(round_to(widened, prec))
    }

    /// Exponential function.
    pub fn exp(&self) -> Result<Ball, NumericsError> {
        let prec = self.prec();
        let sup = self.lower().abs().max(self.upper().abs());
        if sup.magnitude() > 40 {
            return Err(NumericsError::Domain("exp argument too large".into()));
        }
        // scale so |y| <= 1/16
        let s: i64 = if sup.is_zero() {
            0
        } else {
            (sup.magnitude() + 5).max(0)
        };
        let wp = prec + GUARD_BITS + s as u32;
        let y = self.clone().with_prec(wp).mul_pow2(-s);
        // tail <= 2 |y|^(N+1) / (N+1)! <= 2^(1 - 4(N+1))
        let mut n_terms: i64 = 1;
        while 1 - 4 * (n_terms + 1) > -(wp as i64) - 2 {
            n_terms += 1;
        }
        let mut sum = Ball::one(wp);
        let mut term = Ball::one(wp);
        for j in 1..=n_terms {
            term = term.mul_ball(&y).div_int(j)?;
            sum = sum.add_ball(&term);
        }
        let mut result = sum.add_error(&Dyadic::pow2(1 - 4 * (n_terms + 1)));
        for _ in 0..s {
            result = result.sqr();
        }
        Ok(round_to(result, prec))
    }

    /// Square root. The interval must not reach below zero.
    pub fn sqrt(&self) -> Result<Ball, NumericsError> {
        let lower = self.lower();
        if lower.is_negative() {
            return Err(NumericsError::Domain(format!(
                "sqrt of a ball whose interval reaches {lower}"
            )));
        }
        let prec = self.prec();
        let m = self.mid();
        if m.is_zero() {
            return Ok(Ball::zero(prec));
        }
        let wp = prec + GUARD_BITS;
        // m = M 2^E; pick t with E - t even and M 2^t of about 2 wp bits
        let big_m = m.mantissa();
        let big_e = m.exponent();
        let mut t = 2 * wp as i64 - big_m.bits() as i64;
        if t < 0 {
            t = 0;
        }
        if (big_e - t).rem_euclid(2) != 0 {
            t += 1;
        }
        let scaled: BigInt = big_m << t as usize;
        let root = scaled.sqrt();
        let half_e = (big_e - t) / 2;
        let floor_root = Dyadic::new(root, half_e);
        // true sqrt(m) in [floor_root, floor_root + 2^half_e)
        let unit = Dyadic::pow2(half_e);
        let mid_ball = Ball::from_endpoints(&floor_root, &floor_root.add(&unit), wp)?;
        let widened = if self.rad().is_zero() {
            mid_ball
        } else if floor_root.is_zero() {
            // midpoint tiny relative to wp: fall back to [0, sqrt(upper)]
            let hi = self.upper();
            let hb = Ball::exact(hi, prec).sqrt()?;
            Ball::from_endpoints(&Dyadic::zero(), &hb.upper(), prec)?
        } else {
            // |sqrt x - sqrt m| <= r / sqrt m
            mid_ball.add_error(&div_up(
                self.rad(),
                &floor_root.round_floor(RADIUS_BITS + 8),
            ))
        };
        Ok(round_to(widened, prec))
    }
}
