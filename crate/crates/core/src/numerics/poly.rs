//! Integer polynomials and certified real-root isolation.
//!
//! Isolation runs Sturm-sequence bisection over exact dyadic points; each
//! isolating interval is then narrowed with Newton steps whose result is
//! accepted only once an exact sign change brackets it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::Ball;
use super::dyadic::Dyadic;
use super::NumericsError;

/// Polynomial with big-integer coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped; the zero polynomial is rejected.
    pub fn new(mut coefficients: Vec<BigInt>) -> Result<Self, NumericsError> {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            return Err(NumericsError::ZeroPolynomial);
        }
        Ok(IntPolynomial { coefficients })
    }

    pub fn from_i64(coefficients: &[i64]) -> Result<Self, NumericsError> {
        IntPolynomial::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coefficients.last().expect("nonzero polynomial")
    }

    pub fn constant(&self) -> &BigInt {
        &self.coefficients[0]
    }

    /// gcd of the coefficients (always positive).
    pub fn content(&self) -> BigInt {
        self.coefficients
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn derivative(&self) -> Option<IntPolynomial> {
        let d: Vec<BigInt> = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPolynomial::new(d).ok()
    }

    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        self.coefficients
            .iter()
            .rev()
            .fold(Dyadic::zero(), |acc, c| {
                acc.mul(x).add(&Dyadic::from_bigint(c.clone()))
            })
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_ball(&self, x: &Ball) -> Ball {
        self.coefficients
            .iter()
            .rev()
            .fold(Ball::zero(x.prec()), |acc, c| {
                acc.mul_ball(x).add_ball(&Ball::from_bigint(c, x.prec()))
            })
    }

    fn to_rational_poly(&self) -> RatPoly {
        RatPoly(
            self.coefficients
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// True when `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> bool {
        match self.derivative() {
            None => true,
            Some(d) => self.to_rational_poly().gcd(&d.to_rational_poly()).degree() == 0,
        }
    }

    /// Rational roots via the rational root theorem.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        // strip x^j factors
        let zeros = self.coefficients.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            roots.push(BigRational::zero());
        }
        let a0 = &self.coefficients[zeros];
        let an = self.leading();
        let ps = divisors(a0);
        let qs = divisors(an);
        for p in &ps {
            for q in &qs {
                for sign in [1, -1] {
                    let r = BigRational::new(p * BigInt::from(sign), q.clone());
                    if self.eval_rational(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Irreducibility over Q for degree <= 3 (no rational root suffices).
    /// Higher degrees are not supported.
    pub fn is_irreducible_low_degree(&self) -> Result<bool, NumericsError> {
        match self.degree() {
            0 => Ok(false),
            1 => Ok(true),
            2 | 3 => Ok(self.rational_roots().is_empty()),
            d => Err(NumericsError::Unsupported(format!(
                "irreducibility test for degree {d}"
            ))),
        }
    }

    fn sturm_sequence(&self) -> Vec<RatPoly> {
        let p0 = self.to_rational_poly();
        let mut seq = vec![p0.clone()];
        if let Some(d) = self.derivative() {
            seq.push(d.to_rational_poly());
            loop {
                let n = seq.len();
                let r = seq[n - 2].rem(&seq[n - 1]);
                if r.is_zero() {
                    break;
                }
                seq.push(r.neg());
            }
        }
        seq
    }

    /// Upper bound `2^k` on the modulus of every root (Cauchy).
    fn root_bound_exponent(&self) -> i64 {
        let an = self.leading().abs();
        let max_ratio = self.coefficients[..self.degree()]
            .iter()
            .map(|c| BigRational::new(c.abs(), an.clone()))
            .max()
            .unwrap_or_else(BigRational::zero);
        let bound = max_ratio + BigRational::one();
        let mut k = 0i64;
        while BigRational::from_integer(BigInt::one() << k as usize) <= bound {
            k += 1;
        }
        k
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("X")?,
                (1, false) => write!(f, "{a}X")?,
                (_, true) => write!(f, "X^{i}")?,
                (_, false) => write!(f, "{a}X^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

#[derive(Clone, Debug)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    fn rem(&self, divisor: &RatPoly) -> RatPoly {
        let mut r = self.0.clone();
        let dl = divisor.0.last().expect("nonzero divisor").clone();
        let dd = divisor.degree();
        while r.len() > dd && !r.is_empty() {
            let lead = r.last().unwrap().clone();
            if lead.is_zero() {
                r.pop();
                continue;
            }
            let factor = lead / &dl;
            let shift = r.len() - 1 - dd;
            for (i, c) in divisor.0.iter().enumerate() {
                r[shift + i] -= &factor * c;
            }
            r.pop();
        }
        RatPoly(r).trim()
    }

    fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone().trim();
        let mut b = other.clone().trim();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn sign_at(&self, x: &Dyadic) -> i32 {
        let xr = x.to_rational();
        let v = self
            .0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &xr + c);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }
}

fn sign_changes(seq: &[RatPoly], x: &Dyadic) -> usize {
    let mut changes = 0;
    let mut last = 0;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Isolating balls for every real root of a squarefree polynomial, sorted
/// ascending, each of relative width about `2^-precision`.
pub fn isolate_real_roots(p: &IntPolynomial, precision: u32) -> Result<Vec<Ball>, NumericsError> {
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    if !p.is_squarefree() {
        return Err(NumericsError::NotSquarefree(format!(
            "{p} shares a factor with its derivative"
        )));
    }
    let seq = p.sturm_sequence();
    let k = p.root_bound_exponent();
    let lo = Dyadic::pow2(k).neg();
    let hi = Dyadic::pow2(k);

    // (lo, hi] intervals holding exactly one root
    let mut isolated: Vec<(Dyadic, Dyadic)> = Vec::new();
    let mut stack = vec![(
        lo.clone(),
        hi.clone(),
        sign_changes(&seq, &lo),
        sign_changes(&seq, &hi),
    )];
    while let Some((a, b, va, vb)) = stack.pop() {
        let count = va.saturating_sub(vb);
        match count {
            0 => {}
            1 => isolated.push((a, b)),
            _ => {
                let c = a.add(&b).mul_pow2(-1);
                let vc = sign_changes(&seq, &c);
                stack.push((a, c.clone(), va, vc));
                stack.push((c, b, vc, vb));
            }
        }
    }
    isolated.sort();

    let mut roots = Vec::with_capacity(isolated.len());
    for (a, b) in isolated {
        roots.push(refine_root(p, &seq, a, b, precision)?);
    }
    Ok(roots)
}

/// Narrow `(a, b]` (exactly one simple root) to a ball of width
/// about `2^-precision` relative to the root.
fn refine_root(
    p: &IntPolynomial,
    seq: &[RatPoly],
    mut a: Dyadic,
    mut b: Dyadic,
    precision: u32,
) -> Result<Ball, NumericsError> {
    if p.eval_dyadic(&b).is_zero() {
        return Ok(Ball::exact(b, precision));
    }
    // make both endpoints non-roots: a may be a root owned by a neighbour
    while p.eval_dyadic(&a).is_zero() {
        let c = a.add(&b).mul_pow2(-1);
        if sign_changes(seq, &c) == sign_changes(seq, &b) {
            // root lies in (a, c]
            if p.eval_dyadic(&c).is_zero() {
                return Ok(Ball::exact(c, precision));
            }
            b = c;
        } else {
            a = c;
        }
    }
    let sa = p.eval_dyadic(&a).signum();
    let deriv = p.derivative().expect("degree >= 1");

    // bisect until the bracket is small enough for Newton to behave
    let bisect = |a: &mut Dyadic, b: &mut Dyadic, steps: usize| -> Option<Dyadic> {
        for _ in 0..steps {
            let c = a.add(b).mul_pow2(-1);
            let sc = p.eval_dyadic(&c).signum();
            if sc == 0 {
                return Some(c);
            }
            if sc == sa {
                *a = c;
            } else {
                *b = c;
            }
        }
        None
    };
    if let Some(exact) = bisect(&mut a, &mut b, 24) {
        return Ok(Ball::exact(exact, precision));
    }

    let target = |x: &Dyadic| -> Dyadic {
        let mag = x.abs().max(Dyadic::pow2(-(precision as i64))).magnitude();
        Dyadic::pow2(mag - precision as i64)
    };

    let mut x = a.add(&b).mul_pow2(-1);
    let mut work_bits = 64u32;
    for _ in 0..64 {
        let width = target(&x);
        if b.sub(&a) <= width.mul_pow2(1) {
            break;
        }
        let fx = p.eval_dyadic(&x);
        let dfx = deriv.eval_dyadic(&x);
        if !dfx.is_zero() {
            let step = Dyadic::div_rounded(&(fx.to_rational() / dfx.to_rational()), work_bits).0;
            let candidate = x.sub(&step).round_floor(work_bits + precision / 2 + 8);
            if candidate > a && candidate < b {
                x = candidate;
            }
        }
        // try a tight bracket around the Newton iterate
        let h = target(&x).max(b.sub(&a).mul_pow2(-(work_bits as i64)));
        let lo = x.sub(&h).max(a.clone());
        let hi = x.add(&h).min(b.clone());
        let (slo, shi) = (p.eval_dyadic(&lo).signum(), p.eval_dyadic(&hi).signum());
        if slo == 0 {
            return Ok(Ball::exact(lo, precision));
        }
        if shi == 0 {
            return Ok(Ball::exact(hi, precision));
        }
        if slo != shi {
            a = lo;
            b = hi;
        } else if let Some(exact) = bisect(&mut a, &mut b, 4) {
            return Ok(Ball::exact(exact, precision));
        }
        if !(x > a && x < b) {
            x = a.add(&b).mul_pow2(-1);
        }
        work_bits = (work_bits * 2).min(precision + 64);
    }
    // Newton did not converge in time: finish by bisection
    while b.sub(&a) > target(&a.add(&b).mul_pow2(-1)).mul_pow2(1) {
        if let Some(exact) = bisect(&mut a, &mut b, 1) {
            return Ok(Ball::exact(exact, precision));
        }
    }
    Ball::from_endpoints(&a, &b, precision)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c).unwrap()
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            IntPolynomial::from_i64(&[0, 0]),
            Err(NumericsError::ZeroPolynomial)
        ));
    }

    #[test]
    fn narayana_characteristic_has_one_real_root() {
        let roots = isolate_real_roots(&poly(&[-1, 0, -1, 1]), 128).unwrap();
        assert_eq!(roots.len(), 1);
        let r = &roots[0];
        // inside (1.465, 1.466)
        let lo = Ball::from_rational(&1465.into(), &1000.into(), 64).unwrap();
        let hi = Ball::from_rational(&1466.into(), &1000.into(), 64).unwrap();
        assert!(lo.certify_lt(r).is_true() && r.certify_lt(&hi).is_true());
        assert!(*r.rad() <= Dyadic::pow2(-126));
    }

    #[test]
    fn cubic_with_integer_roots() {
        // (X-1)(X-2)(X-3)
        let roots = isolate_real_roots(&poly(&[-6, 11, -6, 1]), 64).unwrap();
        assert_eq!(roots.len(), 3);
        for (r, v) in roots.iter().zip([1, 2, 3]) {
            assert!(r.contains_dyadic(&Dyadic::from_int(v)), "{r}");
        }
    }

    #[test]
    fn golden_quadratic_two_roots_sorted() {
        let roots = isolate_real_roots(&poly(&[-1, -1, 1]), 96).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].certify_lt(&roots[1]).is_true());
        let gamma_lo = Ball::from_rational(&1618.into(), &1000.into(), 64).unwrap();
        let gamma_hi = Ball::from_rational(&16181.into(), &10000.into(), 64).unwrap();
        assert!(gamma_lo.certify_lt(&roots[1]).is_true());
        assert!(roots[1].certify_lt(&gamma_hi).is_true());
    }

    #[test]
    fn non_squarefree_rejected() {
        // (X-1)^2
        let err = isolate_real_roots(&poly(&[1, -2, 1]), 64);
        assert!(matches!(err, Err(NumericsError::NotSquarefree(_))));
    }

    #[test]
    fn rational_roots_and_irreducibility() {
        assert!(poly(&[-1, 0, -1, 1]).is_irreducible_low_degree().unwrap());
        assert!(poly(&[-1, -3, 0, 31]).is_irreducible_low_degree().unwrap());
        // 2X^2 - 3X + 1 = (2X - 1)(X - 1)
        let p = poly(&[1, -3, 2]);
        assert!(!p.is_irreducible_low_degree().unwrap());
        assert_eq!(p.rational_roots().len(), 2);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(poly(&[-1, 0, -1, 1]).to_string(), "X^3 - X^2 - 1");
        assert_eq!(poly(&[-1, -3, 0, 31]).to_string(), "31X^3 - 3X - 1");
    }
}
