//! Key-value input files for `reduce` and `cf`.
//!
//! One `key = value` pair per line; `#` starts a comment. Values are
//! decimals (`15.306`, `2.864e33`), exact rationals (`"1/3"`, quotes
//! optional) or named constants:
//!
//! | name                  | value                              |
//! |-----------------------|------------------------------------|
//! | `alpha`               | real root of `X^3 - X^2 - 1`       |
//! | `gamma`               | `(1 + sqrt 5) / 2`                 |
//! | `tau`                 | `log alpha / log gamma`            |
//! | `mu-5a`               | `log(5a) / log gamma`              |
//! | `mu-sqrt5a-over-Fn:n` | `log(sqrt5 a / F_n) / log gamma`   |
//!
//! A `cf` spec file has a `value` key holding a named constant, `root`
//! (with `poly` and `root` keys) or `log-ratio` (with `numerator-poly`,
//! `numerator-root`, `denominator-poly`, `denominator-root`). Polynomials
//! are integer coefficients, leading first: `poly = 1, -1, -1` is
//! `X^2 - X - 1`. Roots are `largest`, `smallest` or a 0-based index into
//! the ascending real roots.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use baker_kit::algebraic::{build_constants, AlgebraicNumber, RootChoice};
use baker_kit::numerics::parse_rational;
use baker_kit::pipeline::{mu_5a, mu_sqrt5a_over_fn, tau};
use baker_kit::{Ball, ConstantsTable, IntPolynomial, ReductionInstance};
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("unknown key `{0}`")]
    Unknown(String),
    #[error("`{key}`: {reason}")]
    Value { key: String, reason: String },
}

fn bad(key: &str, reason: impl Into<String>) -> SpecError {
    SpecError::Value {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyValues(BTreeMap<String, String>);

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or(SpecError::Syntax { line: i + 1 })?;
            let (k, v) = (k.trim(), v.trim().trim_matches('"').trim());
            if k.is_empty() || v.is_empty() {
                return Err(SpecError::Syntax { line: i + 1 });
            }
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(SpecError::Duplicate {
                    line: i + 1,
                    key: k.to_string(),
                });
            }
        }
        Ok(KeyValues(map))
    }

    pub fn get(&self, key: &str) -> Result<&str, SpecError> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| SpecError::Missing(key.to_string()))
    }

    fn only(&self, allowed: &[&str]) -> Result<(), SpecError> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(SpecError::Unknown(k.clone())),
            None => Ok(()),
        }
    }

    pub fn as_map(&self) -> &BTreeMap<String, String> {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    Alpha,
    Gamma,
    Tau,
    Mu5a,
    MuSqrt5aOverFn(u64),
}

impl Named {
    pub fn parse(s: &str) -> Option<Named> {
        Some(match s {
            "alpha" => Named::Alpha,
            "gamma" => Named::Gamma,
            "tau" => Named::Tau,
            "mu-5a" => Named::Mu5a,
            _ => {
                let n = s.strip_prefix("mu-sqrt5a-over-Fn:")?.parse().ok()?;
                if n == 0 {
                    return None;
                }
                Named::MuSqrt5aOverFn(n)
            }
        })
    }

    fn eval(self, c: &ConstantsTable) -> baker_kit::Result<Ball> {
        match self {
            Named::Alpha => Ok(c.alpha.root().clone()),
            Named::Gamma => Ok(c.gamma.root().clone()),
            Named::Tau => tau(c),
            Named::Mu5a => mu_5a(c),
            Named::MuSqrt5aOverFn(n) => mu_sqrt5a_over_fn(c, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSpec {
    pub poly: IntPolynomial,
    pub choice: RootChoice,
}

impl RootSpec {
    fn parse(kv: &KeyValues, poly_key: &str, root_key: &str) -> Result<Self, SpecError> {
        let mut coefficients = kv
            .get(poly_key)?
            .split(',')
            .map(|c| c.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(poly_key, e.to_string()))?;
        coefficients.reverse();
        let poly = IntPolynomial::new(coefficients).map_err(|e| bad(poly_key, e.to_string()))?;
        if poly.degree() == 0 {
            return Err(bad(poly_key, "constant polynomial"));
        }
        let choice = match kv.get(root_key)? {
            "largest" => RootChoice::Largest,
            "smallest" => RootChoice::Smallest,
            s => RootChoice::Index(
                s.parse()
                    .map_err(|_| bad(root_key, "expected largest, smallest or an index"))?,
            ),
        };
        Ok(RootSpec { poly, choice })
    }

    fn eval(&self, prec: u32) -> baker_kit::Result<Ball> {
        Ok(
            AlgebraicNumber::real_root(self.poly.clone(), self.choice, prec)?
                .root()
                .clone(),
        )
    }
}

/// A real number an input file can name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueSpec {
    Named(Named),
    Rational(BigRational),
    Root(RootSpec),
    /// `log x / log y`.
    LogRatio(RootSpec, RootSpec),
}

impl ValueSpec {
    /// A single token: named constant, rational or decimal.
    pub fn parse_scalar(key: &str, s: &str) -> Result<Self, SpecError> {
        if let Some(n) = Named::parse(s) {
            return Ok(ValueSpec::Named(n));
        }
        parse_rational(s)
            .map(ValueSpec::Rational)
            .map_err(|_| bad(key, format!("`{s}` is not a number or a known constant")))
    }

    pub fn eval(&self, prec: u32, constants: &Constants) -> baker_kit::Result<Ball> {
        match self {
            ValueSpec::Named(n) => n.eval(&*constants.at(prec)?),
            ValueSpec::Rational(r) => Ok(Ball::from_ratio(r, prec)),
            ValueSpec::Root(r) => r.eval(prec),
            ValueSpec::LogRatio(x, y) => {
                let (x, y) = (r_log(x, prec)?, r_log(y, prec)?);
                Ok(x.try_div(&y)?)
            }
        }
    }
}

fn r_log(r: &RootSpec, prec: u32) -> baker_kit::Result<Ball> {
    Ok(r.eval(prec)?.log()?)
}

/// Constants table built on first use and rebuilt when the precision changes.
#[derive(Default)]
pub struct Constants(RefCell<Option<Rc<ConstantsTable>>>);

impl Constants {
    pub fn at(&self, prec: u32) -> baker_kit::Result<Rc<ConstantsTable>> {
        let mut slot = self.0.borrow_mut();
        match slot.as_ref() {
            Some(c) if c.precision == prec => Ok(c.clone()),
            _ => {
                let c = Rc::new(build_constants(prec)?);
                *slot = Some(c.clone());
                Ok(c)
            }
        }
    }
}

/// The value `cf` expands.
pub fn parse_cf_spec(text: &str) -> Result<ValueSpec, SpecError> {
    let kv = KeyValues::parse(text)?;
    match kv.get("value")? {
        "root" => {
            kv.only(&["value", "poly", "root"])?;
            Ok(ValueSpec::Root(RootSpec::parse(&kv, "poly", "root")?))
        }
        "log-ratio" => {
            kv.only(&[
                "value",
                "numerator-poly",
                "numerator-root",
                "denominator-poly",
                "denominator-root",
            ])?;
            Ok(ValueSpec::LogRatio(
                RootSpec::parse(&kv, "numerator-poly", "numerator-root")?,
                RootSpec::parse(&kv, "denominator-poly", "denominator-root")?,
            ))
        }
        s => {
            kv.only(&["value"])?;
            match Named::parse(s) {
                Some(n) => Ok(ValueSpec::Named(n)),
                None => Err(bad(
                    "value",
                    format!("`{s}` is not root, log-ratio or a known constant"),
                )),
            }
        }
    }
}

/// `0 < |u tau - v + mu| < A B^(-w)` with `u <= M`, as read from a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionSpec {
    pub tau: ValueSpec,
    pub mu: ValueSpec,
    pub a: ValueSpec,
    pub b: ValueSpec,
    pub m: BigInt,
    pub fields: BTreeMap<String, String>,
}

impl ReductionSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let kv = KeyValues::parse(text)?;
        kv.only(&["tau", "mu", "A", "B", "M"])?;
        let scalar = |k: &str| ValueSpec::parse_scalar(k, kv.get(k)?);
        let m = parse_rational(kv.get("M")?).map_err(|e| bad("M", e.to_string()))?;
        if !m.is_integer() {
            return Err(bad("M", "must be an integer"));
        }
        Ok(ReductionSpec {
            tau: scalar("tau")?,
            mu: scalar("mu")?,
            a: scalar("A")?,
            b: scalar("B")?,
            m: m.to_integer(),
            fields: kv.as_map().clone(),
        })
    }

    pub fn build(&self, prec: u32, constants: &Constants) -> baker_kit::Result<ReductionInstance> {
        ReductionInstance::new(
            self.tau.eval(prec, constants)?,
            self.mu.eval(prec, constants)?,
            self.a.eval(prec, constants)?,
            self.b.eval(prec, constants)?,
            self.m.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_values_skip_comments_and_quotes() {
        let kv = KeyValues::parse("# header\nA = \"1/3\"  # third\n\nB=gamma\n").unwrap();
        assert_eq!(kv.get("A").unwrap(), "1/3");
        assert_eq!(kv.get("B").unwrap(), "gamma");
        assert_eq!(KeyValues::parse("A 1"), Err(SpecError::Syntax { line: 1 }));
        assert!(matches!(
            KeyValues::parse("A = 1\nA = 2"),
            Err(SpecError::Duplicate { line: 2, .. })
        ));
    }

    #[test]
    fn named_constants() {
        assert_eq!(Named::parse("tau"), Some(Named::Tau));
        assert_eq!(
            Named::parse("mu-sqrt5a-over-Fn:86"),
            Some(Named::MuSqrt5aOverFn(86))
        );
        assert_eq!(Named::parse("mu-sqrt5a-over-Fn:0"), None);
        assert_eq!(Named::parse("pi"), None);
    }

    #[test]
    fn reduction_spec_reads_round_one_instance() {
        let spec =
            ReductionSpec::parse("tau = tau\nmu = mu-5a\nA = 15.306\nB = gamma\nM = 2.864e33\n")
                .unwrap();
        assert_eq!(
            spec.m,
            "2864000000000000000000000000000000".parse().unwrap()
        );
        let inst = spec.build(256, &Constants::default()).unwrap();
        let c = build_constants(256).unwrap();
        assert_eq!(inst.tau, tau(&c).unwrap());
        assert_eq!(inst.mu, mu_5a(&c).unwrap());
        assert_eq!(&inst.b, c.gamma.root());
    }

    #[test]
    fn reduction_spec_rejects_bad_fields() {
        let base = "tau = tau\nmu = mu-5a\nA = 15.306\nB = gamma\n";
        assert_eq!(
            ReductionSpec::parse(base),
            Err(SpecError::Missing("M".into()))
        );
        assert!(ReductionSpec::parse(&format!("{base}M = 1.5")).is_err());
        assert!(ReductionSpec::parse(&format!("{base}M = 10\nC = 1")).is_err());
        assert!(ReductionSpec::parse(&base.replace("gamma", "pi")).is_err());
    }

    #[test]
    fn cf_spec_forms() {
        let golden = parse_cf_spec("value = root\npoly = 1, -1, -1\nroot = largest").unwrap();
        let g = golden.eval(128, &Constants::default()).unwrap();
        assert!(g.overlaps(
            &Ball::from_decimal_str(
                "1.6180339887498948482045868343656381177203091798057628",
                200
            )
            .unwrap()
        ));
        let ratio = parse_cf_spec(
            "value = log-ratio\nnumerator-poly = 1, -1, 0, -1\nnumerator-root = 0\n\
             denominator-poly = 1, -1, -1\ndenominator-root = largest",
        )
        .unwrap();
        let t = ratio.eval(128, &Constants::default()).unwrap();
        assert!(t.overlaps(
            &Ball::from_decimal_str("0.79433851359053848570557671444314662940428217079998", 200)
                .unwrap()
        ));
        assert_eq!(
            parse_cf_spec("value = tau").unwrap(),
            ValueSpec::Named(Named::Tau)
        );
        assert!(parse_cf_spec("value = root\npoly = 0\nroot = 0").is_err());
        assert!(parse_cf_spec("value = 1/3").is_err());
    }
}
