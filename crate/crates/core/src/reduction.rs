//! Continued fractions of ball-valued reals and Dujella–Pethő reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::numerics::{Ball, Certainty, Dyadic, PrecisionPolicy};

/// A finite prefix of a continued fraction with its convergents.
///
/// `convergents[i] = p_i / q_i` uses the quotients `a_0 ..= a_i`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuedFraction {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    partial_quotients: Vec<BigInt>,
    #[serde_as(as = "Vec<(DisplayFromStr, DisplayFromStr)>")]
    convergents: Vec<(BigInt, BigInt)>,
    /// Precision of the ball the quotients were certified from, if any.
    precision: Option<u32>,
}

/// `(num, den)` with `den > 0`.
type Frac = (BigInt, BigInt);

fn frac_of(d: &Dyadic) -> Frac {
    let r = d.to_rational();
    (r.numer().clone(), r.denom().clone())
}

impl ContinuedFraction {
    /// Quotients certified for every real in the ball: Euclid runs on both
    /// endpoints and stops at the first disagreement. The value is assumed
    /// irrational, so an endpoint hitting an integer ends the expansion.
    pub fn expand(x: &Ball, max_terms: usize) -> ContinuedFraction {
        let (mut lo, mut hi) = (frac_of(&x.lower()), frac_of(&x.upper()));
        let mut quotients = Vec::new();
        while quotients.len() < max_terms {
            let a_lo = lo.0.div_floor(&lo.1);
            let a_hi = hi.0.div_floor(&hi.1);
            if a_lo != a_hi {
                break;
            }
            let r_lo = &lo.0 - &a_lo * &lo.1;
            let r_hi = &hi.0 - &a_hi * &hi.1;
            quotients.push(a_lo);
            if r_lo.is_zero() || r_hi.is_zero() {
                break;
            }
            lo = (std::mem::take(&mut lo.1), r_lo);
            hi = (std::mem::take(&mut hi.1), r_hi);
        }
        let mut cf = Self::from_partial_quotients(quotients)
            .expect("quotients after the first are positive");
        cf.precision = Some(x.prec());
        cf
    }

    /// Build from `a_0, a_1, ...`; every `a_i` with `i >= 1` must be positive.
    pub fn from_partial_quotients(quotients: Vec<BigInt>) -> Result<ContinuedFraction> {
        if quotients.iter().skip(1).any(|a| !a.is_positive()) {
            return Err(Error::InvalidInput(
                "partial quotients after the first must be positive".into(),
            ));
        }
        let mut convergents = Vec::with_capacity(quotients.len());
        let (mut p2, mut q2) = (BigInt::zero(), BigInt::one());
        let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
        for a in &quotients {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            convergents.push((p.clone(), q.clone()));
            p2 = std::mem::replace(&mut p1, p);
            q2 = std::mem::replace(&mut q1, q);
        }
        Ok(ContinuedFraction {
            partial_quotients: quotients,
            convergents,
            precision: None,
        })
    }

    pub fn partial_quotients(&self) -> &[BigInt] {
        &self.partial_quotients
    }

    pub fn convergents(&self) -> &[(BigInt, BigInt)] {
        &self.convergents
    }

    pub fn convergent(&self, i: usize) -> Option<&(BigInt, BigInt)> {
        self.convergents.get(i)
    }

    pub fn len(&self) -> usize {
        self.partial_quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partial_quotients.is_empty()
    }

    pub fn precision(&self) -> Option<u32> {
        self.precision
    }

    /// Ball containing every real whose expansion starts with these
    /// quotients: the hull of the last two convergents.
    pub fn enclosure(&self, prec: u32) -> Option<Ball> {
        let n = self.convergents.len();
        let last = self.convergents.last()?;
        let last = BigRational::new(last.0.clone(), last.1.clone());
        let other = if n >= 2 {
            let (p, q) = &self.convergents[n - 2];
            BigRational::new(p.clone(), q.clone())
        } else {
            // only a_0 known: x lies in [a_0, a_0 + 1]
            &last + BigRational::one()
        };
        let (lo, hi) = if last < other {
            (last, other)
        } else {
            (other, last)
        };
        let lo = Ball::from_ratio(&lo, prec);
        let hi = Ball::from_ratio(&hi, prec);
        Ball::from_endpoints(&lo.lower(), &hi.upper(), prec).ok()
    }
}

/// Expand `x` to `terms` quotients, recomputing it at each precision of the
/// policy until enough quotients are certified.
pub fn continued_fraction(
    x: impl Fn(u32) -> Result<Ball>,
    terms: usize,
    policy: &PrecisionPolicy,
) -> Result<ContinuedFraction> {
    let mut last_prec = policy.start;
    for prec in policy.steps() {
        last_prec = prec;
        let cf = ContinuedFraction::expand(&x(prec)?, terms);
        if cf.len() >= terms {
            return Ok(cf);
        }
    }
    Err(Error::uncertified(
        format!("{terms} continued fraction quotients"),
        last_prec,
    ))
}

/// Data for `0 < |u tau - v + mu| < A B^(-w)` with `u <= M`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionInstance {
    pub tau: Ball,
    pub mu: Ball,
    #[serde(rename = "A")]
    pub a: Ball,
    #[serde(rename = "B")]
    pub b: Ball,
    #[serde(rename = "M")]
    #[serde_as(as = "DisplayFromStr")]
    pub m: BigInt,
}

impl ReductionInstance {
    pub fn new(tau: Ball, mu: Ball, a: Ball, b: Ball, m: BigInt) -> Result<Self> {
        let prec = a.prec().max(b.prec());
        if !a.certify_positive().is_true() {
            return Err(Error::InvalidInput("A > 0 is not certified".into()));
        }
        if !Ball::one(prec).certify_lt(&b).is_true() {
            return Err(Error::InvalidInput("B > 1 is not certified".into()));
        }
        if !m.is_positive() {
            return Err(Error::InvalidInput("M must be positive".into()));
        }
        Ok(ReductionInstance { tau, mu, a, b, m })
    }

    fn six_m(&self) -> BigInt {
        &self.m * 6
    }

    /// `||mu q|| - M ||tau q||`.
    pub fn epsilon(&self, q: &BigInt) -> Ball {
        let mu_q = self.mu.mul_int(q).dist_to_nearest_int();
        let tau_q = self.tau.mul_int(q).dist_to_nearest_int();
        mu_q.sub_ball(&tau_q.mul_int(&self.m))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReductionStatus {
    Success,
    EpsilonNonpositive,
    PrecisionExhausted,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionResult {
    pub status: ReductionStatus,
    /// Index of the convergent the status refers to.
    pub convergent_index: Option<usize>,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub q: Option<BigInt>,
    pub epsilon: Option<Ball>,
    /// `log(A q / epsilon) / log B`; no solution has `w` at or above it.
    pub w_bound: Option<Ball>,
}

impl ReductionResult {
    fn failed(status: ReductionStatus, at: Option<(usize, &BigInt)>, eps: Option<Ball>) -> Self {
        ReductionResult {
            status,
            convergent_index: at.map(|(i, _)| i),
            q: at.map(|(_, q)| q.clone()),
            epsilon: eps,
            w_bound: None,
        }
    }

    pub fn is_success(&self) -> bool {
        self.status == ReductionStatus::Success
    }

    /// Largest integer strictly below the upper end of `w_bound`.
    pub fn max_w(&self) -> Option<BigInt> {
        let w = self.w_bound.as_ref()?;
        Some(w.upper().ceil() - 1)
    }
}

/// First convergent with `q > 6M` and certified `epsilon > 0`.
pub fn dp_reduce(inst: &ReductionInstance, cf: &ContinuedFraction) -> ReductionResult {
    dp_reduce_from(inst, cf, 0)
}

/// As [`dp_reduce`], ignoring convergents before `start`.
pub fn dp_reduce_from(
    inst: &ReductionInstance,
    cf: &ContinuedFraction,
    start: usize,
) -> ReductionResult {
    let six_m = inst.six_m();
    let mut last_nonpositive = None;
    for (i, (_, q)) in cf.convergents().iter().enumerate().skip(start) {
        if q <= &six_m {
            continue;
        }
        let r = dp_reduce_at_unchecked(inst, i, q);
        match r.status {
            ReductionStatus::EpsilonNonpositive => last_nonpositive = Some(r),
            _ => return r,
        }
    }
    // no convergent past 6M at all means the expansion was too short
    last_nonpositive
        .unwrap_or_else(|| ReductionResult::failed(ReductionStatus::PrecisionExhausted, None, None))
}

/// Evaluate the lemma at convergent `index` only.
pub fn dp_reduce_at(
    inst: &ReductionInstance,
    cf: &ContinuedFraction,
    index: usize,
) -> Result<ReductionResult> {
    let (_, q) = cf.convergent(index).ok_or_else(|| {
        Error::Precondition(format!(
            "convergent {index} not available ({} certified)",
            cf.len()
        ))
    })?;
    if q <= &inst.six_m() {
        return Err(Error::Precondition(format!(
            "convergent {index} has q = {q} <= 6M"
        )));
    }
    Ok(dp_reduce_at_unchecked(inst, index, q))
}

fn dp_reduce_at_unchecked(inst: &ReductionInstance, index: usize, q: &BigInt) -> ReductionResult {
    let eps = inst.epsilon(q);
    let zero = Ball::zero(eps.prec());
    match eps.certify_positive() {
        Certainty::True => {}
        _ if eps.certify_le(&zero).is_true() => {
            return ReductionResult::failed(
                ReductionStatus::EpsilonNonpositive,
                Some((index, q)),
                Some(eps),
            )
        }
        _ => {
            return ReductionResult::failed(
                ReductionStatus::PrecisionExhausted,
                Some((index, q)),
                Some(eps),
            )
        }
    }
    let w = inst
        .a
        .mul_int(q)
        .try_div(&eps)
        .and_then(|x| x.log())
        .and_then(|num| num.try_div(&inst.b.log()?));
    match w {
        Ok(w) => ReductionResult {
            status: ReductionStatus::Success,
            convergent_index: Some(index),
            q: Some(q.clone()),
            epsilon: Some(eps),
            w_bound: Some(w),
        },
        Err(_) => ReductionResult::failed(
            ReductionStatus::PrecisionExhausted,
            Some((index, q)),
            Some(eps),
        ),
    }
}

/// Rebuild the instance at each precision of the policy and reduce against
/// the continued fraction of its `tau` until the outcome is decided.
pub fn dp_reduce_escalating(
    build: impl Fn(u32) -> Result<ReductionInstance>,
    policy: &PrecisionPolicy,
) -> Result<(ReductionResult, u32)> {
    let mut last = None;
    for prec in policy.steps() {
        let inst = build(prec)?;
        let cf = ContinuedFraction::expand(&inst.tau, usize::MAX);
        let r = dp_reduce(&inst, &cf);
        if r.status != ReductionStatus::PrecisionExhausted {
            return Ok((r, prec));
        }
        last = Some((r, prec));
    }
    last.ok_or_else(|| Error::InvalidInput("empty precision policy".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::lit;

    fn golden(prec: u32) -> Ball {
        Ball::from_int(5, prec)
            .sqrt()
            .unwrap()
            .add_int(1)
            .mul_pow2(-1)
    }

    #[test]
    fn golden_ratio_is_all_ones() {
        let cf = ContinuedFraction::expand(&golden(128), 10);
        assert_eq!(cf.len(), 10);
        assert!(cf.partial_quotients().iter().all(|a| a == &BigInt::one()));
        // q_i = F_(i+1)
        assert_eq!(cf.convergent(9).unwrap().1, BigInt::from(55));
    }

    #[test]
    fn expansion_stops_at_uncertain_quotient() {
        let cf = ContinuedFraction::expand(&golden(64), usize::MAX);
        assert!(cf.len() > 30 && cf.len() < 64);
        assert!(cf.enclosure(128).unwrap().overlaps(&golden(128)));
    }

    #[test]
    fn rational_ball_terminates() {
        let x = Ball::from_rational(&BigInt::from(43), &BigInt::from(19), 64).unwrap();
        let cf = ContinuedFraction::expand(&x, usize::MAX);
        let q: Vec<i64> = cf
            .partial_quotients()
            .iter()
            .map(|a| a.try_into().unwrap())
            .collect();
        assert!(q.starts_with(&[2, 3, 1]));
    }

    #[test]
    fn convergents_satisfy_recurrence_and_are_coprime() {
        let x = Ball::from_int(2, 256).sqrt().unwrap();
        let cf = ContinuedFraction::expand(&x, 60);
        let c = cf.convergents();
        for i in 0..c.len() {
            assert!(c[i].0.gcd(&c[i].1).is_one());
            if i >= 2 {
                let a = &cf.partial_quotients()[i];
                assert_eq!(c[i].0, a * &c[i - 1].0 + &c[i - 2].0);
                assert_eq!(c[i].1, a * &c[i - 1].1 + &c[i - 2].1);
                assert!(c[i].1 > c[i - 1].1);
            }
        }
    }

    #[test]
    fn negative_quotients_rejected() {
        let bad = vec![BigInt::from(1), BigInt::from(0)];
        assert!(ContinuedFraction::from_partial_quotients(bad).is_err());
    }

    #[test]
    fn escalation_reaches_term_count() {
        let policy = PrecisionPolicy::new(64, 1024);
        let cf = continued_fraction(|p| Ok(golden(p)), 200, &policy).unwrap();
        assert_eq!(cf.len(), 200);
        assert!(cf.precision().unwrap() > 64);
        let tight = PrecisionPolicy::fixed(32);
        assert!(continued_fraction(|p| Ok(golden(p)), 200, &tight)
            .unwrap_err()
            .is_uncertified());
    }

    #[test]
    fn zero_mu_never_succeeds() {
        let prec = 256;
        let inst = ReductionInstance::new(
            golden(prec),
            Ball::zero(prec),
            lit("2", prec),
            golden(prec),
            BigInt::from(1000),
        )
        .unwrap();
        let cf = ContinuedFraction::expand(&inst.tau, usize::MAX);
        let r = dp_reduce(&inst, &cf);
        assert_eq!(r.status, ReductionStatus::EpsilonNonpositive);
    }

    #[test]
    fn instance_preconditions() {
        let g = golden(64);
        let one = Ball::one(64);
        assert!(
            ReductionInstance::new(g.clone(), g.clone(), one.clone(), one.clone(), 5.into())
                .is_err()
        );
        assert!(
            ReductionInstance::new(g.clone(), g.clone(), Ball::zero(64), g.clone(), 5.into())
                .is_err()
        );
        assert!(ReductionInstance::new(g.clone(), g.clone(), one, g, 0.into()).is_err());
    }

    #[test]
    fn success_satisfies_lemma_hypotheses() {
        let prec = 256;
        let inst = ReductionInstance::new(
            Ball::from_int(2, prec).sqrt().unwrap(),
            lit("0.3", prec),
            lit("10", prec),
            lit("2", prec),
            BigInt::from(10).pow(6),
        )
        .unwrap();
        let cf = ContinuedFraction::expand(&inst.tau, usize::MAX);
        let r = dp_reduce(&inst, &cf);
        assert!(r.is_success());
        assert!(r.q.as_ref().unwrap() > &(&inst.m * 6));
        assert!(r.epsilon.as_ref().unwrap().certify_positive().is_true());
        assert_eq!(r, dp_reduce(&inst, &cf));
        let at = dp_reduce_at(&inst, &cf, r.convergent_index.unwrap()).unwrap();
        assert_eq!(at, r);
        assert!(dp_reduce_at(&inst, &cf, 0).is_err());
    }
}
