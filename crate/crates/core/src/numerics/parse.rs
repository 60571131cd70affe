use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Ball, NumericsError};

/// Parse an exact rational: `p/q`, or a decimal with optional exponent
/// (`15.306`, `-0.5`, `2.864e33`).
pub fn parse_rational(s: &str) -> Result<BigRational, NumericsError> {
    let s = s.trim();
    let bad = || NumericsError::Domain(format!("not an exact number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(NumericsError::ZeroDenominator);
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let mut n: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    if scale.unsigned_abs() > 100_000 {
        return Err(bad());
    }
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * factor)
    } else {
        BigRational::new(n, factor)
    })
}

impl Ball {
    /// Enclosure of an exact decimal or `p/q` literal.
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<Ball, NumericsError> {
        Ok(Ball::from_ratio(&parse_rational(s)?, prec))
    }
}

/// Shorthand used throughout for literal constants.
pub(crate) fn lit(s: &str, prec: u32) -> Ball {
    Ball::from_decimal_str(s, prec).unwrap_or_else(|e| panic!("bad literal {s}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(
            parse_rational("15.306").unwrap(),
            BigRational::new(15306.into(), 1000.into())
        );
        assert_eq!(
            parse_rational("2.864e33").unwrap(),
            BigRational::from_integer(BigInt::from(2864) * num_traits::pow(BigInt::from(10), 30))
        );
        assert_eq!(
            parse_rational("-3/6").unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
    }
}
