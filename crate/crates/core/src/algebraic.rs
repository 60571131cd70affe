//! Real algebraic numbers given by a minimal polynomial and an isolating
//! ball, their absolute logarithmic Weil heights, and the constants of the
//! Narayana and Fibonacci recurrences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::numerics::{isolate_real_roots, lit, Ball, Certainty, Dyadic, IntPolynomial};

/// Which real root of the minimal polynomial is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootChoice {
    Largest,
    Smallest,
    /// Index into the ascending list of real roots.
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    root: Ball,
    real_roots: Vec<Ball>,
    conjugate_moduli: Vec<Ball>,
}

impl AlgebraicNumber {
    /// Select a real root of `minpoly`, which must be primitive, have a
    /// positive leading coefficient and be irreducible (checked for degree
    /// at most 3).
    pub fn real_root(minpoly: IntPolynomial, choice: RootChoice, precision: u32) -> Result<Self> {
        if !minpoly.is_primitive() {
            return Err(Error::InvalidInput(format!("{minpoly} is not primitive")));
        }
        if minpoly.leading().is_negative() {
            return Err(Error::InvalidInput(format!(
                "{minpoly} has a negative leading coefficient"
            )));
        }
        if !minpoly.is_irreducible_low_degree()? {
            return Err(Error::InvalidInput(format!(
                "{minpoly} is reducible over Q"
            )));
        }
        let real_roots = isolate_real_roots(&minpoly, precision)?;
        let idx = match choice {
            RootChoice::Largest => real_roots.len().checked_sub(1),
            RootChoice::Smallest => (!real_roots.is_empty()).then_some(0),
            RootChoice::Index(i) => (i < real_roots.len()).then_some(i),
        }
        .ok_or_else(|| Error::InvalidInput(format!("{minpoly} has no such real root")))?;
        let root = real_roots[idx].clone();
        let conjugate_moduli = conjugate_moduli(&minpoly, &real_roots, precision)?;
        Ok(AlgebraicNumber {
            minpoly,
            root,
            real_roots,
            conjugate_moduli,
        })
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn root(&self) -> &Ball {
        &self.root
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn real_roots(&self) -> &[Ball] {
        &self.real_roots
    }

    /// `|eta^(i)|` for all conjugates, real ones first.
    pub fn conjugate_moduli(&self) -> &[Ball] {
        &self.conjugate_moduli
    }

    /// The minimal polynomial changes sign across the selected root ball.
    pub fn isolates_root(&self) -> bool {
        let lo = self.minpoly.eval_dyadic(&self.root.lower());
        let hi = self.minpoly.eval_dyadic(&self.root.upper());
        lo.signum() * hi.signum() <= 0
    }
}

/// Moduli of all conjugates. Real roots come from isolation; at most one
/// complex pair is allowed, its modulus recovered from Vieta's product.
fn conjugate_moduli(p: &IntPolynomial, real_roots: &[Ball], precision: u32) -> Result<Vec<Ball>> {
    let d = p.degree();
    let mut moduli: Vec<Ball> = real_roots.iter().map(Ball::abs).collect();
    match d - real_roots.len() {
        0 => {}
        2 => {
            // product of all roots has modulus |c_0 / c_d|
            let prod_all = Ball::from_rational(p.constant(), p.leading(), precision)?.abs();
            let prod_real = moduli
                .iter()
                .fold(Ball::one(precision), |acc, m| acc.mul_ball(m));
            let pair = prod_all.try_div(&prod_real)?.sqrt()?;
            moduli.push(pair.clone());
            moduli.push(pair);
        }
        k => {
            return Err(Error::InvalidInput(format!(
                "{p}: {k} non-real roots, only a single conjugate pair is supported"
            )))
        }
    }
    Ok(moduli)
}

/// `max(0, log x)` for a ball `x > 0`.
fn log_plus(x: &Ball) -> Result<Ball> {
    let one = Ball::one(x.prec());
    match x.certify_le(&one) {
        Certainty::True => Ok(Ball::zero(x.prec())),
        Certainty::False => Ok(x.log()?),
        Certainty::Unknown => {
            let hi = Ball::exact(x.upper(), x.prec()).log()?;
            Ok(Ball::from_endpoints(
                &Dyadic::zero(),
                &hi.upper(),
                x.prec(),
            )?)
        }
    }
}

/// `h(eta) = (1/d) (log |c_d| + sum_i max(0, log |eta^(i)|))`.
pub fn weil_height(eta: &AlgebraicNumber) -> Result<Ball> {
    if !eta.minpoly.is_irreducible_low_degree()? {
        return Err(Error::InvalidInput(format!(
            "{} is reducible over Q",
            eta.minpoly
        )));
    }
    let prec = eta.root.prec();
    let lead = Ball::from_bigint(&eta.minpoly.leading().abs(), prec).log()?;
    let mut sum = lead;
    for m in &eta.conjugate_moduli {
        sum = sum.add_ball(&log_plus(m)?);
    }
    Ok(sum.div_int(eta.degree() as i64)?)
}

/// `h(p/q) = max(log |p|, log |q|)` for coprime `p, q`.
pub fn height_of_rational(p: &BigInt, q: &BigInt, precision: u32) -> Result<Ball> {
    if q.is_zero() {
        return Err(crate::numerics::NumericsError::ZeroDenominator.into());
    }
    if p.is_zero() {
        return Err(Error::InvalidInput("height of zero is undefined".into()));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::InvalidInput(format!("{p} and {q} are not coprime")));
    }
    let top = p.abs().max(q.abs());
    Ok(Ball::from_bigint(&top, precision).log()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightRule {
    /// `h(x_1 + ... + x_k) <= sum h(x_i) + log k`
    Sum,
    /// `h(x_1 ... x_k) <= sum h(x_i)` (inverses allowed)
    Product,
    /// `h(x^s) = |s| h(x)`
    Power(i64),
}

/// Upper bound for the height of a sum, product or power.
pub fn height_combine(rule: HeightRule, heights: &[Ball]) -> Result<Ball> {
    let prec = heights.iter().map(Ball::prec).max().unwrap_or(64);
    let total = || {
        heights
            .iter()
            .fold(Ball::zero(prec), |acc, h| acc.add_ball(h))
    };
    match rule {
        HeightRule::Product => Ok(total()),
        HeightRule::Sum => {
            if heights.len() < 2 {
                return Ok(total());
            }
            let log_k = Ball::from_int(heights.len() as i64, prec).log()?;
            Ok(total().add_ball(&log_k))
        }
        HeightRule::Power(s) => match heights {
            [h] => Ok(h.mul_int(&BigInt::from(s.unsigned_abs()))),
            _ => Err(Error::InvalidInput("power rule takes one height".into())),
        },
    }
}

/// Constants of both recurrences, certified at construction.
#[derive(Clone, Debug)]
pub struct ConstantsTable {
    pub precision: u32,
    /// Real root of `X^3 - X^2 - 1`.
    pub alpha: AlgebraicNumber,
    /// Positive root of `X^2 - X - 1`.
    pub gamma: AlgebraicNumber,
    /// Real root of `31X^3 - 3X - 1`, the Binet coefficient of `alpha^m`.
    pub a: AlgebraicNumber,
    /// `alpha^2 / (alpha^3 + 2)`, an independent route to `a`.
    pub a_from_alpha: Ball,
    /// `|beta| = alpha^(-1/2)`.
    pub abs_beta: Ball,
    /// `|b|`, from `a |b|^2 = 1/31`.
    pub abs_b: Ball,
    /// `(1 - sqrt 5) / 2`.
    pub delta: Ball,
    pub sqrt5: Ball,
    pub log_alpha: Ball,
    pub log_gamma: Ball,
}

fn strictly_between(x: &Ball, lo: &str, hi: &str, what: &str, prec: u32) -> Result<()> {
    require(lit(lo, prec).certify_lt(x), &format!("{lo} < {what}"), prec)?;
    require(
        x.certify_lt(&lit(hi, prec)),
        &format!("{what} < {hi}"),
        prec,
    )
}

/// Build and certify every constant at `precision` bits.
pub fn build_constants(precision: u32) -> Result<ConstantsTable> {
    let prec = precision;
    let alpha = AlgebraicNumber::real_root(
        IntPolynomial::from_i64(&[-1, 0, -1, 1])?,
        RootChoice::Largest,
        prec,
    )?;
    let gamma = AlgebraicNumber::real_root(
        IntPolynomial::from_i64(&[-1, -1, 1])?,
        RootChoice::Largest,
        prec,
    )?;
    let a = AlgebraicNumber::real_root(
        IntPolynomial::from_i64(&[-1, -3, 0, 31])?,
        RootChoice::Largest,
        prec,
    )?;
    let al = alpha.root();
    let a_from_alpha = al.sqr().try_div(&al.powi(3)?.add_int(2))?;
    if !a_from_alpha.overlaps(a.root()) {
        return Err(Error::Refuted(
            "a from its minimal polynomial disagrees with alpha^2/(alpha^3+2)".into(),
        ));
    }
    let abs_beta = al.sqrt()?.recip()?;
    let abs_b = a
        .conjugate_moduli()
        .last()
        .cloned()
        .ok_or_else(|| Error::InvalidInput("a has no complex conjugates".into()))?;
    let sqrt5 = Ball::from_int(5, prec).sqrt()?;
    let delta = Ball::one(prec).sub_ball(&sqrt5).mul_pow2(-1);
    let log_alpha = al.log()?;
    let log_gamma = gamma.root().log()?;

    strictly_between(al, "1.465", "1.466", "alpha", prec)?;
    strictly_between(&abs_beta, "0.826", "0.827", "|beta|", prec)?;
    strictly_between(a.root(), "0.417", "0.418", "a", prec)?;
    strictly_between(&abs_b, "0.278", "0.279", "|b|", prec)?;
    let half = lit("0.5", prec);
    require(
        a.root().abs().max(&abs_b).certify_lt(&half),
        "max(|a|,|b|) < 1/2",
        prec,
    )?;
    if !gamma
        .root()
        .mul_ball(&delta)
        .contains_dyadic(&Dyadic::from_int(-1))
    {
        return Err(Error::Refuted("gamma * delta != -1".into()));
    }

    Ok(ConstantsTable {
        precision: prec,
        alpha,
        gamma,
        a,
        a_from_alpha,
        abs_beta,
        abs_b,
        delta,
        sqrt5,
        log_alpha,
        log_gamma,
    })
}

/// Serializable enclosures of a [`ConstantsTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsSnapshot {
    pub precision: u32,
    pub alpha_minpoly: String,
    pub gamma_minpoly: String,
    pub a_minpoly: String,
    pub alpha: Ball,
    pub gamma: Ball,
    pub a: Ball,
    pub a_from_alpha: Ball,
    pub abs_beta: Ball,
    pub abs_b: Ball,
    pub delta: Ball,
    pub log_alpha: Ball,
    pub log_gamma: Ball,
}

impl ConstantsTable {
    pub fn snapshot(&self) -> ConstantsSnapshot {
        ConstantsSnapshot {
            precision: self.precision,
            alpha_minpoly: self.alpha.minpoly().to_string(),
            gamma_minpoly: self.gamma.minpoly().to_string(),
            a_minpoly: self.a.minpoly().to_string(),
            alpha: self.alpha.root().clone(),
            gamma: self.gamma.root().clone(),
            a: self.a.root().clone(),
            a_from_alpha: self.a_from_alpha.clone(),
            abs_beta: self.abs_beta.clone(),
            abs_b: self.abs_b.clone(),
            delta: self.delta.clone(),
            log_alpha: self.log_alpha.clone(),
            log_gamma: self.log_gamma.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> ConstantsTable {
        build_constants(192).unwrap()
    }

    #[test]
    fn heights_of_the_three_constants() {
        let c = consts();
        let h_gamma = weil_height(&c.gamma).unwrap();
        assert!(lit("0.240", 192).certify_lt(&h_gamma).is_true());
        assert!(h_gamma.certify_lt(&lit("0.241", 192)).is_true());
        let h_alpha = weil_height(&c.alpha).unwrap();
        assert!(lit("0.127", 192).certify_lt(&h_alpha).is_true());
        assert!(h_alpha.certify_lt(&lit("0.128", 192)).is_true());
        // all conjugates of a lie inside the unit disc
        for m in c.a.conjugate_moduli() {
            assert!(m.certify_lt(&Ball::one(192)).is_true());
        }
        let h_a = weil_height(&c.a).unwrap();
        let third_log31 = Ball::from_int(31, 192).log().unwrap().div_int(3).unwrap();
        assert!(h_a.overlaps(&third_log31));
    }

    #[test]
    fn gamma_height_is_half_log_gamma() {
        let c = consts();
        let h = weil_height(&c.gamma).unwrap();
        assert!(h.overlaps(&c.log_gamma.mul_pow2(-1)));
    }

    #[test]
    fn rational_heights() {
        let five = height_of_rational(&5.into(), &1.into(), 128).unwrap();
        assert!(five.overlaps(&Ball::from_int(5, 128).log().unwrap()));
        let one = height_of_rational(&1.into(), &1.into(), 128).unwrap();
        assert!(one.contains_zero());
        let h = height_of_rational(&13.into(), &2.into(), 128).unwrap();
        assert!(h.overlaps(&Ball::from_int(13, 128).log().unwrap()));
        assert!(height_of_rational(&4.into(), &2.into(), 128).is_err());
        assert!(height_of_rational(&4.into(), &0.into(), 128).is_err());
    }

    #[test]
    fn combine_rules() {
        let c = consts();
        let h5 = height_of_rational(&5.into(), &1.into(), 192).unwrap();
        let ha = weil_height(&c.a).unwrap();
        let h5a = height_combine(HeightRule::Product, &[h5, ha.clone()]).unwrap();
        assert!(h5a.certify_lt(&lit("2.755", 192)).is_true());
        let zero = height_combine(HeightRule::Power(0), std::slice::from_ref(&ha)).unwrap();
        assert!(zero.contains_zero() && zero.is_exact());
        let sum = height_combine(HeightRule::Sum, &[ha.clone(), ha.clone()]).unwrap();
        let expect = ha.mul_pow2(1).add_ball(&crate::numerics::ln2(192));
        assert!(sum.overlaps(&expect));
    }

    #[test]
    fn constants_table_invariants() {
        let c = consts();
        // 31 a^3 - 3 a - 1 = 0
        let v = c.a.minpoly().eval_ball(c.a.root());
        assert!(v.contains_zero());
        // |beta|^2 alpha = 1
        assert!(c
            .abs_beta
            .sqr()
            .mul_ball(c.alpha.root())
            .contains_dyadic(&Dyadic::one()));
        assert!(c.a_from_alpha.overlaps(c.a.root()));
        assert!(c.alpha.isolates_root() && c.gamma.isolates_root() && c.a.isolates_root());
        assert_eq!(c.alpha.conjugate_moduli().len(), 3);
    }

    #[test]
    fn reducible_minpoly_rejected() {
        let p = IntPolynomial::from_i64(&[-2, 1, 1]).unwrap(); // (X+2)(X-1)
        assert!(AlgebraicNumber::real_root(p, RootChoice::Largest, 64).is_err());
        let non_primitive = IntPolynomial::from_i64(&[-2, -2, 2]).unwrap();
        assert!(AlgebraicNumber::real_root(non_primitive, RootChoice::Largest, 64).is_err());
    }
}
