//! Matveev's lower bound for linear forms in logarithms and the
//! Guzmán–Luca lemma for inequalities `L < H (log L)^l`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::numerics::{lit, Ball, Certainty};

/// Data for Matveev's theorem: `t = a.len()` logarithms in a field of degree
/// `field_degree`, with `a[i] >= max(d h(eta_i), |log eta_i|, 0.16)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFormInstance {
    pub field_degree: u32,
    pub a: Vec<Ball>,
}

impl LinearFormInstance {
    /// Only the `0.16` floor on each `A_i` is rechecked here; the height and
    /// logarithm bounds are the caller's responsibility.
    pub fn new(field_degree: u32, a: Vec<Ball>) -> Result<Self> {
        if field_degree == 0 {
            return Err(Error::InvalidInput("field degree must be positive".into()));
        }
        if a.is_empty() {
            return Err(Error::InvalidInput("need at least one logarithm".into()));
        }
        let floor = BigRational::new(4.into(), 25.into());
        for (i, ai) in a.iter().enumerate() {
            // A_i is an upper bound, so its upper endpoint is what matters
            if ai.upper().to_rational() < floor {
                return Err(Error::InvalidInput(format!("A_{} is below 0.16", i + 1)));
            }
        }
        Ok(LinearFormInstance { field_degree, a })
    }

    pub fn t(&self) -> usize {
        self.a.len()
    }

    fn prec(&self) -> u32 {
        self.a.iter().map(Ball::prec).max().unwrap_or(64)
    }

    /// `C = 1.4 * 30^(t+3) * t^4.5 * d^2 * (1 + log d) * A_1 ... A_t`.
    pub fn matveev_coefficient(&self) -> Result<Ball> {
        let prec = self.prec();
        let t = self.t() as i64;
        let d = Ball::from_int(self.field_degree as i64, prec);
        let thirty = Ball::from_bigint(&BigInt::from(30).pow((t + 3) as u32), prec);
        let t_ball = Ball::from_int(t, prec);
        let t_pow = t_ball.powi(4)?.mul_ball(&t_ball.sqrt()?);
        let mut c = lit("1.4", prec)
            .mul_ball(&thirty)
            .mul_ball(&t_pow)
            .mul_ball(&d.sqr())
            .mul_ball(&d.log()?.add_int(1));
        for ai in &self.a {
            c = c.mul_ball(ai);
        }
        Ok(c)
    }

    /// `-C (1 + log B)`, a lower bound for `log |Lambda|` when `Lambda != 0`
    /// and `B >= max |b_i|`.
    pub fn log_lower_bound(&self, b: &Ball) -> Result<Ball> {
        require(Ball::one(b.prec()).certify_le(b), "B >= 1", b.prec())?;
        let c = self.matveev_coefficient()?;
        Ok(c.mul_ball(&b.log()?.add_int(1)).neg_ball())
    }
}

/// `2^l H (log H)^l`. Requires `H > (4 l^2)^l`.
///
/// If also `H > L / (log L)^l`, then `L` lies below the returned value.
pub fn guzman_luca_bound(l: u32, h: &Ball) -> Result<Ball> {
    if l == 0 {
        return Err(Error::InvalidInput("l must be positive".into()));
    }
    let prec = h.prec();
    let floor = Ball::from_bigint(&BigInt::from(4 * l * l).pow(l), prec);
    match h.certify_le(&floor) {
        Certainty::False => {}
        Certainty::True => {
            return Err(Error::Precondition(format!(
                "Guzman-Luca needs H > (4 l^2)^l = {} for l = {l}",
                BigInt::from(4 * l * l).pow(l)
            )))
        }
        Certainty::Unknown => return Err(Error::uncertified("H > (4 l^2)^l", prec)),
    }
    let log_h = h.log()?;
    Ok(h.mul_pow2(l as i64).mul_ball(&log_h.powi(l as i64)?))
}

/// Upper bound for every `k` with `k < c (log 2k)^l`, via the lemma with
/// `H = 2c` and `L = 2k`.
pub fn log_inequality_solve(c: &Ball, l: u32) -> Result<Ball> {
    Ok(guzman_luca_bound(l, &c.mul_pow2(1))?.mul_pow2(-1))
}
