#![allow(dead_code)]

use baker_kit::numerics::parse_rational;
use baker_kit::{Ball, Dyadic};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

pub fn dec(s: &str, prec: u32) -> Ball {
    Ball::from_decimal_str(s, prec).expect("valid literal")
}

/// `x` is within `tol` of the ball.
pub fn near(ball: &Ball, x: &str, tol: &str) -> bool {
    let v = parse_rational(x).expect("valid literal");
    let t = parse_rational(tol).expect("valid literal");
    // widen by a dyadic at least as large as tol
    let widen = Dyadic::from_rational_exact(&t).unwrap_or_else(|| Ball::from_ratio(&t, 64).upper());
    ball.add_error(&widen).contains_rational(&v)
}

/// Random expression over small rationals, `+ - * /`, integer powers,
/// `log`, `exp` and `sqrt`.
#[derive(Clone, Debug)]
pub enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {
    pub fn random(rng: &mut impl Rng, depth: u32) -> Expr {
        if depth == 0 || rng.gen_bool(0.25) {
            let q = rng.gen_range(1..=1000);
            return Expr::Leaf(rng.gen_range(-5000..=5000), q);
        }
        let sub = |rng: &mut _| Box::new(Expr::random(rng, depth - 1));
        match rng.gen_range(0..9) {
            0 => Expr::Add(sub(rng), sub(rng)),
            1 => Expr::Sub(sub(rng), sub(rng)),
            2 => Expr::Mul(sub(rng), sub(rng)),
            3 => Expr::Div(sub(rng), sub(rng)),
            4 => Expr::Pow(sub(rng), rng.gen_range(-3..=4)),
            5 => Expr::Log(sub(rng)),
            6 => Expr::Exp(sub(rng)),
            7 => Expr::Sqrt(sub(rng)),
            _ => Expr::Leaf(rng.gen_range(1..=50), 1),
        }
    }

    /// `None` when an operation leaves its domain at this precision.
    pub fn eval(&self, prec: u32) -> Option<Ball> {
        Some(match self {
            Expr::Leaf(p, q) => Ball::from_rational(&(*p).into(), &(*q).into(), prec).ok()?,
            Expr::Add(a, b) => a.eval(prec)?.add_ball(&b.eval(prec)?),
            Expr::Sub(a, b) => a.eval(prec)?.sub_ball(&b.eval(prec)?),
            Expr::Mul(a, b) => a.eval(prec)?.mul_ball(&b.eval(prec)?),
            Expr::Div(a, b) => a.eval(prec)?.try_div(&b.eval(prec)?).ok()?,
            Expr::Pow(a, n) => a.eval(prec)?.powi(*n).ok()?,
            Expr::Log(a) => a.eval(prec)?.log().ok()?,
            Expr::Exp(a) => a.eval(prec)?.exp().ok()?,
            Expr::Sqrt(a) => a.eval(prec)?.sqrt().ok()?,
        })
    }

    /// Exact value when only rational operations occur.
    pub fn exact(&self) -> Option<BigRational> {
        Some(match self {
            Expr::Leaf(p, q) => BigRational::new((*p).into(), (*q).into()),
            Expr::Add(a, b) => a.exact()? + b.exact()?,
            Expr::Sub(a, b) => a.exact()? - b.exact()?,
            Expr::Mul(a, b) => a.exact()? * b.exact()?,
            Expr::Div(a, b) => {
                let d = b.exact()?;
                if d.is_zero() {
                    return None;
                }
                a.exact()? / d
            }
            Expr::Pow(a, n) => {
                let x = a.exact()?;
                if x.is_zero() && *n < 0 {
                    return None;
                }
                let mut r = BigRational::from_integer(BigInt::from(1));
                for _ in 0..n.abs() {
                    r *= &x;
                }
                if *n < 0 {
                    r.recip()
                } else {
                    r
                }
            }
            _ => return None,
        })
    }
}

/// Containment under refinement for one expression at 64, 128 and 512 bits.
/// `None` when the expression leaves its domain at some precision.
pub fn refinement_ok(e: &Expr) -> Option<Result<(), String>> {
    let b64 = e.eval(64)?;
    let b128 = e.eval(128)?;
    let b512 = e.eval(512)?;
    let check = || -> Result<(), String> {
        if !(b128.overlaps(&b64) && b512.overlaps(&b128) && b512.overlaps(&b64)) {
            return Err(format!("refinements disjoint for {e:?}"));
        }
        if b128.rad() > b64.rad() || b512.rad() > b128.rad() {
            return Err(format!("radius grew under refinement for {e:?}"));
        }
        if let Some(x) = e.exact() {
            for b in [&b64, &b128, &b512] {
                if !b.contains_rational(&x) {
                    return Err(format!("exact value {x} escapes {b} for {e:?}"));
                }
            }
        }
        Ok(())
    };
    Some(check())
}
