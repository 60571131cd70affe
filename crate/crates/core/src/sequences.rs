//! Narayana's cows sequence and the Fibonacci sequence, exactly.
//!
//! Terms are generated iteratively with big integers. The analytic checks
//! (`binet_error_check`, `growth_bounds_check`) compare exact terms against
//! ball enclosures of the dominant-root expressions.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::{build_constants, ConstantsTable};
use crate::error::{Error, Result};
use crate::numerics::{lit, Ball, Certainty, PrecisionPolicy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// `N_0 = 0, N_1 = N_2 = 1, N_{m+3} = N_{m+2} + N_m`
    Narayana,
    /// `F_0 = 0, F_1 = 1, F_{n+2} = F_{n+1} + F_n`
    Fibonacci,
}

impl SequenceKind {
    pub fn order(self) -> usize {
        match self {
            SequenceKind::Narayana => 3,
            SequenceKind::Fibonacci => 2,
        }
    }

    pub fn initial_terms(self) -> Vec<BigInt> {
        match self {
            SequenceKind::Narayana => vec![0.into(), 1.into(), 1.into()],
            SequenceKind::Fibonacci => vec![0.into(), 1.into()],
        }
    }

    /// Coefficients `c_j` of `x_{i+order} = sum_j c_j x_{i+j}`.
    pub fn recurrence(self) -> Vec<BigInt> {
        match self {
            SequenceKind::Narayana => vec![1.into(), 0.into(), 1.into()],
            SequenceKind::Fibonacci => vec![1.into(), 1.into()],
        }
    }

    /// Terms `x_0 ..= x_last`.
    pub fn terms(self, last: usize) -> Vec<BigInt> {
        let mut out = self.initial_terms();
        let coeffs = self.recurrence();
        let order = self.order();
        while out.len() <= last {
            let i = out.len() - order;
            let next = coeffs
                .iter()
                .zip(&out[i..])
                .filter(|(c, _)| !c.is_zero())
                .fold(BigInt::zero(), |acc, (c, x)| acc + c * x);
            out.push(next);
        }
        out.truncate(last + 1);
        out
    }

    pub fn term(self, i: usize) -> BigInt {
        match self {
            SequenceKind::Narayana => narayana(i as u64),
            SequenceKind::Fibonacci => fibonacci(i as u64),
        }
    }
}

pub fn narayana(m: u64) -> BigInt {
    let (mut a, mut b, mut c) = (BigInt::zero(), BigInt::one(), BigInt::one());
    for _ in 0..m {
        let next = &c + &a;
        a = std::mem::replace(&mut b, std::mem::replace(&mut c, next));
    }
    a
}

pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Smallest `n >= 1` with `F_n = v`.
pub fn fibonacci_index(v: &BigInt) -> Option<u64> {
    if v < &BigInt::one() {
        return None;
    }
    let (mut a, mut b) = (BigInt::one(), BigInt::one()); // F_1, F_2
    let mut n = 1u64;
    while &a < v {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
        n += 1;
    }
    (&a == v).then_some(n)
}

fn to_bool(c: Certainty, what: &str, precision: u32) -> Result<bool> {
    match c {
        Certainty::True => Ok(true),
        Certainty::False => Ok(false),
        Certainty::Unknown => Err(Error::uncertified(what, precision)),
    }
}

/// `|N_m - a alpha^m| < 0.558 alpha^(-m/2)` with the given constants.
pub fn binet_error_check_with(constants: &ConstantsTable, m: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::Precondition("binet error check needs m >= 1".into()));
    }
    let prec = constants.precision;
    let alpha = constants.alpha.root();
    let a = constants.a.root();
    let n_m = Ball::from_bigint(&narayana(m), prec);
    let err = n_m.sub_ball(&a.mul_ball(&alpha.powi(m as i64)?)).abs();
    // alpha^(-m/2) = abs_beta^m
    let bound = lit("0.558", prec).mul_ball(&constants.abs_beta.powi(m as i64)?);
    to_bool(err.certify_lt(&bound), "Narayana Binet error bound", prec)
}

/// [`binet_error_check_with`], building constants and doubling the precision
/// from `precision` up to the default cap until the answer is certified.
pub fn binet_error_check(m: u64, precision: u32) -> Result<bool> {
    with_escalation(precision, |c| binet_error_check_with(c, m))
}

fn with_escalation<T>(precision: u32, f: impl Fn(&ConstantsTable) -> Result<T>) -> Result<T> {
    let policy = PrecisionPolicy::new(precision, PrecisionPolicy::DEFAULT_CAP.max(precision));
    let mut last = Error::uncertified("no precision step", precision);
    for prec in policy.steps() {
        let constants = build_constants(prec)?;
        match f(&constants) {
            Err(e) if e.is_uncertified() => last = e,
            other => return other,
        }
    }
    Err(last)
}

/// Check `r^(i - lower_shift) <= x_i <= r^(i - upper_shift)` for the dominant
/// root `r` of the sequence.
fn sandwich(
    constants: &ConstantsTable,
    kind: SequenceKind,
    i: u64,
    lower_shift: i64,
    upper_shift: i64,
) -> Result<bool> {
    let prec = constants.precision;
    let root = match kind {
        SequenceKind::Narayana => constants.alpha.root(),
        SequenceKind::Fibonacci => constants.gamma.root(),
    };
    let x = Ball::from_bigint(&kind.term(i as usize), prec);
    let lo = root.powi(i as i64 - lower_shift)?;
    let hi = root.powi(i as i64 - upper_shift)?;
    let below = to_bool(lo.certify_le(&x), "growth lower bound", prec)?;
    let above = to_bool(x.certify_le(&hi), "growth upper bound", prec)?;
    Ok(below && above)
}

/// The growth sandwich as usually stated for both sequences:
/// `alpha^(m-2) <= N_m <= alpha^(m-1)` and `gamma^(n-2) <= F_n <= gamma^(n-1)`.
///
/// For Narayana the lower half fails from `m = 3` on (`N_m ~ 0.417 alpha^m`),
/// so this returns `Ok(false)` there; the pipeline relies on
/// [`narayana_growth_check`] instead.
pub fn growth_bounds_check_with(
    constants: &ConstantsTable,
    kind: SequenceKind,
    i: u64,
) -> Result<bool> {
    if i < 2 {
        return Err(Error::Precondition("growth bounds need i >= 2".into()));
    }
    sandwich(constants, kind, i, 2, 1)
}

pub fn growth_bounds_check(kind: SequenceKind, i: u64, precision: u32) -> Result<bool> {
    with_escalation(precision, |c| growth_bounds_check_with(c, kind, i))
}

/// `alpha^(m-3) <= N_m <= alpha^(m-1)`, valid for every `m >= 1`.
pub fn narayana_growth_check_with(constants: &ConstantsTable, m: u64) -> Result<bool> {
    if m < 1 {
        return Err(Error::Precondition(
            "Narayana growth bounds need m >= 1".into(),
        ));
    }
    sandwich(constants, SequenceKind::Narayana, m, 3, 1)
}

/// `|F_n - gamma^n / sqrt 5| < 1/2`.
pub fn fibonacci_binet_check_with(constants: &ConstantsTable, n: u64) -> Result<bool> {
    let prec = constants.precision;
    let approx = constants
        .gamma
        .root()
        .powi(n as i64)?
        .try_div(&constants.sqrt5)?;
    let diff = Ball::from_bigint(&fibonacci(n), prec)
        .sub_ball(&approx)
        .abs();
    to_bool(
        diff.certify_lt(&lit("0.5", prec)),
        "Fibonacci Binet rounding",
        prec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narayana_small_terms() {
        let expected = [0, 1, 1, 1, 2, 3, 4, 6, 9, 13];
        for (m, v) in expected.iter().enumerate() {
            assert_eq!(narayana(m as u64), BigInt::from(*v), "N_{m}");
        }
    }

    #[test]
    fn fibonacci_small_terms() {
        assert_eq!(fibonacci(0), BigInt::zero());
        assert_eq!(fibonacci(7), BigInt::from(13));
        assert_eq!(fibonacci(10), BigInt::from(55));
    }

    #[test]
    fn kind_terms_agree_with_direct() {
        let n = SequenceKind::Narayana.terms(50);
        let f = SequenceKind::Fibonacci.terms(50);
        for i in 0..=50 {
            assert_eq!(n[i], narayana(i as u64));
            assert_eq!(f[i], fibonacci(i as u64));
        }
    }

    #[test]
    fn fibonacci_index_examples() {
        assert_eq!(fibonacci_index(&BigInt::from(13)), Some(7));
        assert_eq!(fibonacci_index(&BigInt::from(1)), Some(1));
        assert_eq!(fibonacci_index(&BigInt::from(2)), Some(3));
        assert_eq!(fibonacci_index(&BigInt::from(4)), None);
        assert_eq!(fibonacci_index(&BigInt::from(0)), None);
    }

    #[test]
    fn binet_error_examples() {
        assert!(binet_error_check(1, 192).unwrap());
        assert!(binet_error_check(50, 192).unwrap());
        assert!(binet_error_check(438, 192).unwrap());
    }

    #[test]
    fn binet_error_rejects_zero_index() {
        assert!(matches!(
            binet_error_check(0, 64),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn growth_bounds_examples() {
        assert!(growth_bounds_check(SequenceKind::Narayana, 2, 192).unwrap());
        assert!(growth_bounds_check(SequenceKind::Fibonacci, 10, 192).unwrap());
        // N_3 = 1 < alpha: the stated lower bound does not hold
        assert!(!growth_bounds_check(SequenceKind::Narayana, 3, 192).unwrap());
        assert!(!growth_bounds_check(SequenceKind::Narayana, 438, 192).unwrap());
    }

    #[test]
    fn shifted_narayana_sandwich_holds_early() {
        let c = build_constants(192).unwrap();
        for m in 1..=60 {
            assert!(narayana_growth_check_with(&c, m).unwrap(), "m = {m}");
        }
    }
}
