//! Certified real arithmetic: dyadic midpoint-radius balls, elementary
//! functions and real-root isolation for integer polynomials.

mod ball;
mod dyadic;
mod elementary;
mod parse;
mod poly;

pub use ball::{Ball, Certainty, RADIUS_BITS};
pub use dyadic::Dyadic;
pub use elementary::ln2;
pub(crate) use parse::lit;
pub use parse::parse_rational;
pub use poly::{isolate_real_roots, IntPolynomial};

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative radius")]
    NegativeRadius,
    #[error("invalid precision {0}")]
    InvalidPrecision(u32),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// `ball_from_rational`: enclosure of `p/q` at `precision` bits.
pub fn ball_from_rational(p: &BigInt, q: &BigInt, precision: u32) -> Result<Ball, NumericsError> {
    Ball::from_rational(p, q, precision)
}

/// `ball_log`: natural log; the ball must be strictly positive.
pub fn ball_log(x: &Ball) -> Result<Ball, NumericsError> {
    x.log()
}

/// `certify_lt`: tri-state strict comparison.
pub fn certify_lt(x: &Ball, y: &Ball) -> Certainty {
    x.certify_lt(y)
}

/// Starting precision and cap for automatic precision doubling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub start: u32,
    pub cap: u32,
}

impl PrecisionPolicy {
    pub const DEFAULT_START: u32 = 192;
    pub const DEFAULT_CAP: u32 = 4096;

    pub fn new(start: u32, cap: u32) -> Self {
        PrecisionPolicy { start, cap }
    }

    /// Fixed precision, no escalation.
    pub fn fixed(bits: u32) -> Self {
        PrecisionPolicy::new(bits, bits)
    }

    /// `start, 2 start, 4 start, ...` while below `cap`, then `cap` itself.
    pub fn steps(&self) -> Vec<u32> {
        let mut out: Vec<u32> =
            std::iter::successors(Some(self.start.max(1)), |&p| p.checked_mul(2))
                .take_while(|&p| p <= self.cap)
                .collect();
        if out.last().is_none_or(|&p| p < self.cap) {
            out.push(self.cap);
        }
        out
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy::new(Self::DEFAULT_START, Self::DEFAULT_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policy_steps_double_to_cap() {
        let steps = PrecisionPolicy::default().steps();
        assert_eq!(steps, vec![192, 384, 768, 1536, 3072, 4096]);
        assert_eq!(PrecisionPolicy::fixed(32).steps(), vec![32]);
        assert_eq!(PrecisionPolicy::new(64, 32).steps(), vec![32]);
    }
}
