//! The complete argument for `N_m = F_n F_k`, stage by stage.
//!
//! Write `rho = log gamma / log alpha` and `B_0 = 10^10`. The first linear
//! form is `Lambda_1 = 5a alpha^m gamma^-(n+k) - 1` with
//! `|Lambda_1| < 4.91 gamma^-2n`, the second is
//! `Lambda_2 = sqrt5 a alpha^m / (F_n gamma^k) - 1` with
//! `|Lambda_2| < 2.637 gamma^-k`, always for `n <= k`.
//!
//! Matveev's theorem is applied with `B = rho (n+k) + 0.5`, which dominates
//! every exponent. If `n + k < B_0` then `k < B_0` outright, so every
//! absolute bound is at least `B_0`, and otherwise `1 + log B` is at most
//! `kappa log(n+k)`.

mod certificate;
mod reference;

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{
    build_constants, height_combine, height_of_rational, weil_height, AlgebraicNumber,
    ConstantsTable, HeightRule, RootChoice,
};
use crate::baker::{log_inequality_solve, LinearFormInstance};
use crate::error::{require, Error, Result};
use crate::numerics::{lit, Ball, Certainty, IntPolynomial, PrecisionPolicy};
use crate::reduction::{dp_reduce, ContinuedFraction, ReductionInstance, ReductionStatus};
use crate::search::find_products;
use crate::sequences::{fibonacci, narayana_growth_check_with};

pub use certificate::{
    Assumption, Certificate, CertificateStatus, CheckedFact, Comparison, FamilyEntry,
    HeightsRecord, IntermediateRecord, Reduction1Record, Reduction2Record, SearchRanges, SpotCheck,
    Stage, Stage1Record, Stage2Record,
};
pub use reference::{published_reference, PublishedReference};

/// `B_0`: below it the bound `k < B_0` is immediate.
pub const CASE_SPLIT: u64 = 10_000_000_000;

fn case_split() -> BigInt {
    BigInt::from(CASE_SPLIT)
}

/// `log gamma / log alpha`.
pub fn rho(c: &ConstantsTable) -> Result<Ball> {
    Ok(c.log_gamma.try_div(&c.log_alpha)?)
}

/// `tau = log alpha / log gamma`.
pub fn tau(c: &ConstantsTable) -> Result<Ball> {
    Ok(c.log_alpha.try_div(&c.log_gamma)?)
}

/// `log(5a) / log gamma`.
pub fn mu_5a(c: &ConstantsTable) -> Result<Ball> {
    let five_a = c.a.root().mul_int(&BigInt::from(5));
    Ok(five_a.log()?.try_div(&c.log_gamma)?)
}

/// `log(sqrt5 a / F_n) / log gamma`.
pub fn mu_sqrt5a_over_fn(c: &ConstantsTable, n: u64) -> Result<Ball> {
    if n == 0 {
        return Err(Error::InvalidInput("F_0 = 0 has no logarithm".into()));
    }
    let f = Ball::from_bigint(&fibonacci(n), c.precision);
    let x = c.sqrt5.mul_ball(c.a.root()).try_div(&f)?;
    Ok(x.log()?.try_div(&c.log_gamma)?)
}

/// Upper end of `1.5 * lambda_const / log gamma`, the reduction constant.
fn reduction_a(c: &ConstantsTable, lambda_const: &str) -> Result<Ball> {
    let prec = c.precision;
    Ok(lit("1.5", prec)
        .mul_ball(&lit(lambda_const, prec))
        .try_div(&c.log_gamma)?
        .upper_ball())
}

/// `|m tau - (n+k) + mu_5a| < (1.5 * 4.91 / log gamma) gamma^(-2n)`, `m <= M`.
pub fn round1_instance(c: &ConstantsTable, m_bound: BigInt) -> Result<ReductionInstance> {
    ReductionInstance::new(
        tau(c)?,
        mu_5a(c)?,
        reduction_a(c, "4.91")?,
        c.gamma.root().clone(),
        m_bound,
    )
}

/// `|m tau - k + mu_n| < (1.5 * 2.637 / log gamma) gamma^(-k)`, `m <= M`.
pub fn round2_instance(c: &ConstantsTable, n: u64, m_bound: BigInt) -> Result<ReductionInstance> {
    ReductionInstance::new(
        tau(c)?,
        mu_sqrt5a_over_fn(c, n)?,
        reduction_a(c, "2.637")?,
        c.gamma.root().clone(),
        m_bound,
    )
}

pub fn lambda1_residual_with(c: &ConstantsTable, m: u64, n: u64, k: u64) -> Result<Ball> {
    let num =
        c.a.root()
            .mul_int(&BigInt::from(5))
            .mul_ball(&c.alpha.root().powi(m as i64)?);
    let den = c.gamma.root().powi((n + k) as i64)?;
    Ok(num.try_div(&den)?.add_int(-1).abs())
}

/// `|5a alpha^m gamma^-(n+k) - 1|`.
pub fn lambda1_residual(m: u64, n: u64, k: u64, precision: u32) -> Result<Ball> {
    lambda1_residual_with(&build_constants(precision)?, m, n, k)
}

pub fn lambda2_residual_with(c: &ConstantsTable, m: u64, n: u64, k: u64) -> Result<Ball> {
    let num = c
        .sqrt5
        .mul_ball(c.a.root())
        .mul_ball(&c.alpha.root().powi(m as i64)?);
    let den =
        Ball::from_bigint(&fibonacci(n), c.precision).mul_ball(&c.gamma.root().powi(k as i64)?);
    Ok(num.try_div(&den)?.add_int(-1).abs())
}

/// `|sqrt5 a alpha^m / (F_n gamma^k) - 1|`.
pub fn lambda2_residual(m: u64, n: u64, k: u64, precision: u32) -> Result<Ball> {
    lambda2_residual_with(&build_constants(precision)?, m, n, k)
}

/// Where `m` can lie given `n + k`: from `alpha^(m-3) <= N_m <= alpha^(m-1)`
/// and `gamma^(n-2) <= F_n <= gamma^(n-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MWindow {
    pub n_plus_k: u64,
    /// `rho (n+k-4) + 1`
    pub lower: Ball,
    /// `rho (n+k) + 0.5`
    pub upper: Ball,
}

impl MWindow {
    /// Certified `lower <= m <= upper`.
    pub fn contains(&self, m: u64) -> Certainty {
        let mb = Ball::from_int(m as i64, self.upper.prec());
        match (self.lower.certify_le(&mb), mb.certify_le(&self.upper)) {
            (Certainty::True, Certainty::True) => Certainty::True,
            (Certainty::False, _) | (_, Certainty::False) => Certainty::False,
            _ => Certainty::Unknown,
        }
    }
}

pub fn m_window_with(c: &ConstantsTable, n_plus_k: u64) -> Result<MWindow> {
    if n_plus_k < 2 {
        return Err(Error::Precondition("n + k must be at least 2".into()));
    }
    let rho = rho(c)?;
    let nk = n_plus_k as i64;
    Ok(MWindow {
        n_plus_k,
        lower: rho.mul_int(&BigInt::from(nk - 4)).add_int(1),
        upper: rho
            .mul_int(&BigInt::from(nk))
            .add_ball(&lit("0.5", c.precision)),
    })
}

pub fn m_window(n_plus_k: u64, precision: u32) -> Result<MWindow> {
    m_window_with(&build_constants(precision)?, n_plus_k)
}

/// Certify `name` and log it among the facts.
fn certify(facts: &mut Vec<CheckedFact>, name: &str, c: Certainty, prec: u32) -> Result<()> {
    let r = require(c, name, prec);
    if !matches!(r, Err(ref e) if e.is_uncertified()) {
        facts.push(CheckedFact {
            name: name.to_string(),
            holds: r.is_ok(),
        });
    }
    r
}

fn from_bool(b: bool) -> Certainty {
    if b {
        Certainty::True
    } else {
        Certainty::False
    }
}

fn floor_upper(x: &Ball) -> BigInt {
    x.upper().floor()
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::Refuted(format!("{what} = {x} does not fit in 64 bits")))
}

pub fn compute_heights(c: &ConstantsTable) -> Result<HeightsRecord> {
    let prec = c.precision;
    let h_alpha = weil_height(&c.alpha)?;
    let h_gamma = weil_height(&c.gamma)?;
    let h_a = weil_height(&c.a)?;
    let h_5 = height_of_rational(&5.into(), &1.into(), prec)?;
    let h_5a = height_combine(HeightRule::Product, &[h_5, h_a.clone()])?;
    let sqrt5 = AlgebraicNumber::real_root(
        IntPolynomial::from_i64(&[-5, 0, 1])?,
        RootChoice::Largest,
        prec,
    )?;
    let offset = height_combine(HeightRule::Product, &[weil_height(&sqrt5)?, h_a.clone()])?;
    let small = (1..=3u64)
        .map(|n| {
            let h_f = height_of_rational(&fibonacci(n), &1.into(), prec)?;
            height_combine(HeightRule::Product, &[offset.clone(), h_f])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HeightsRecord {
        h_alpha,
        h_gamma,
        h_a,
        h_5a,
        h_sqrt5a_over_fn_small: small,
        h_sqrt5a_offset: offset,
    })
}

/// `A_i` as the upper end of `max(6 h, |log eta|, 0.16)`.
fn a_value(h: &Ball, log_eta: &Ball) -> Ball {
    let prec = h.prec();
    h.mul_int(&BigInt::from(6))
        .max(&log_eta.abs())
        .max(&lit("0.16", prec))
        .upper_ball()
}

/// `kappa = 1 + (1 + log(rho + 0.5/B_0)) / log B_0`.
fn kappa(c: &ConstantsTable) -> Result<(Ball, Ball)> {
    let prec = c.precision;
    let b0 = Ball::from_bigint(&case_split(), prec);
    let log_b0 = b0.log()?;
    let inner = rho(c)?.add_ball(&lit("0.5", prec).try_div(&b0)?).log()?;
    let k = inner.add_int(1).try_div(&log_b0)?.add_int(1);
    Ok((k.upper_ball(), log_b0))
}

/// Inequalities the derivation of both forms relies on.
fn certify_side_facts(c: &ConstantsTable, facts: &mut Vec<CheckedFact>) -> Result<()> {
    let prec = c.precision;
    let al = c.alpha.root();
    let ga = c.gamma.root();
    let half = lit("0.5", prec);
    certify(
        facts,
        "2|b| < 0.558",
        c.abs_b.mul_pow2(1).certify_lt(&lit("0.558", prec)),
        prec,
    )?;
    certify(
        facts,
        "5 * 0.558 / alpha + 3 < 4.91",
        lit("2.79", prec)
            .try_div(al)?
            .add_int(3)
            .certify_lt(&lit("4.91", prec)),
        prec,
    )?;
    certify(
        facts,
        "sqrt5 + gamma^-2 < 2.637",
        c.sqrt5
            .add_ball(&ga.powi(-2)?)
            .certify_lt(&lit("2.637", prec)),
        prec,
    )?;
    certify(
        facts,
        "4.91 gamma^-6 < 1/2",
        lit("4.91", prec).mul_ball(&ga.powi(-6)?).certify_lt(&half),
        prec,
    )?;
    certify(
        facts,
        "2.637 gamma^-4 < 1/2",
        lit("2.637", prec).mul_ball(&ga.powi(-4)?).certify_lt(&half),
        prec,
    )?;
    for m in 1..=3 {
        certify(
            facts,
            &format!("alpha^{} <= N_{m} <= alpha^{}", m as i64 - 3, m - 1),
            from_bool(narayana_growth_check_with(c, m)?),
            prec,
        )?;
    }
    // gamma^(n-2) <= F_n <= gamma^(n-1) for n = 1, 2
    let one = Ball::one(prec);
    certify(
        facts,
        "gamma^-1 <= F_1",
        ga.powi(-1)?.certify_le(&one),
        prec,
    )?;
    certify(facts, "F_2 <= gamma", one.certify_le(ga), prec)?;
    Ok(())
}

pub fn run_stage1(
    c: &ConstantsTable,
    h: &HeightsRecord,
    facts: &mut Vec<CheckedFact>,
) -> Result<Stage1Record> {
    let prec = c.precision;
    certify_side_facts(c, facts)?;
    let log_5a = c.a.root().mul_int(&BigInt::from(5)).log()?;
    let a_values = vec![
        a_value(&h.h_alpha, &c.log_alpha),
        a_value(&h.h_gamma, &c.log_gamma),
        a_value(&h.h_5a, &log_5a),
    ];
    let coefficient = LinearFormInstance::new(6, a_values.clone())?.matveev_coefficient()?;
    let (kappa, log_b0) = kappa(c)?;
    // 2n log gamma < log 4.91 + C (1 + log B)
    let log_491 = lit("4.91", prec).log()?;
    let c1 = coefficient
        .mul_ball(&kappa)
        .add_ball(&log_491.try_div(&log_b0)?)
        .mul_pow2(-1)
        .upper_ball();
    Ok(Stage1Record {
        a_values,
        lambda1_coefficient: coefficient,
        kappa,
        n_log_gamma_bound: c1,
    })
}

pub fn run_stage2(
    c: &ConstantsTable,
    h: &HeightsRecord,
    s1: &Stage1Record,
    facts: &mut Vec<CheckedFact>,
) -> Result<Stage2Record> {
    let prec = c.precision;
    let lg = &c.log_gamma;
    let (_, log_b0) = kappa(c)?;
    // h(sqrt5 a / F_n) <= 2 max(n,3) log gamma
    let six_lg = lg.mul_int(&BigInt::from(6));
    for (i, s) in h.h_sqrt5a_over_fn_small.iter().enumerate() {
        certify(
            facts,
            &format!("h(sqrt5 a / F_{}) < 6 log gamma", i + 1),
            s.certify_lt(&six_lg),
            prec,
        )?;
    }
    certify(
        facts,
        "(1/3) log 31 + (1/2) log 5 < 5 log gamma",
        h.h_sqrt5a_offset.certify_lt(&lg.mul_int(&BigInt::from(5))),
        prec,
    )?;
    let log_sqrt5a = c.sqrt5.mul_ball(c.a.root()).log()?;
    certify(
        facts,
        "|log(sqrt5 a)| < log gamma",
        log_sqrt5a.abs().certify_lt(lg),
        prec,
    )?;

    let a3_per_n = lg.mul_int(&BigInt::from(12)).upper_ball();
    let a = &s1.a_values;
    let matveev = LinearFormInstance::new(6, vec![a[0].clone(), a[1].clone(), a3_per_n.clone()])?
        .matveev_coefficient()?;
    let per_unit = matveev.try_div(lg)?;
    // k log gamma < log 2.637 + K kappa max(n,3) log gamma log(n+k)
    let log_2637 = lit("2.637", prec).log()?;
    let c2 = per_unit
        .mul_ball(&s1.kappa)
        .add_ball(&log_2637.try_div(&lg.mul_int(&BigInt::from(3)).mul_ball(&log_b0))?)
        .try_div(lg)?
        .upper_ball();
    let c1 = &s1.n_log_gamma_bound;
    certify(
        facts,
        "3 log gamma <= c_1 log B_0",
        lg.mul_int(&BigInt::from(3))
            .certify_le(&c1.mul_ball(&log_b0)),
        prec,
    )?;
    let combined = c1.mul_ball(&c2).upper_ball();
    let k_raw = log_inequality_solve(&combined, 2)?;
    let k_abs = floor_upper(&k_raw).max(case_split());
    let rho = rho(c)?;
    let m_abs = floor_upper(&rho.mul_pow2(1).mul_int(&k_abs).add_ball(&lit("0.5", prec)));
    Ok(Stage2Record {
        a3_per_n,
        lambda2_coefficient: per_unit,
        k_coefficient: c2,
        combined_coefficient: combined,
        k_raw_bound: k_raw,
        absolute_k_bound: k_abs,
        absolute_m_bound: m_abs,
    })
}

fn reduction_error(status: ReductionStatus, what: &str, prec: u32) -> Error {
    match status {
        ReductionStatus::PrecisionExhausted => Error::uncertified(what, prec),
        _ => Error::Refuted(format!("{what}: no convergent gives a positive epsilon")),
    }
}

/// Both reductions and the intermediate bound between them. Returns the
/// final search box.
pub fn run_reductions(
    c: &ConstantsTable,
    s2: &Stage2Record,
    cert: &mut Certificate,
) -> Result<SearchRanges> {
    let r1 = reduction1(c, s2)?;
    let n_b = r1.n_bound;
    cert.reduction1 = Some(r1);
    let mid = intermediate(c, &s2.k_coefficient, n_b)?;
    let m_int = mid.m_bound.clone();
    cert.intermediate = Some(mid);
    let r2 = reduction2(c, n_b, m_int)?;
    let ranges = SearchRanges {
        m_max: r2.m_bound,
        n_max: n_b.min(r2.k_bound),
        k_max: r2.k_bound,
    };
    cert.reduction2 = Some(r2);
    Ok(ranges)
}

fn cf_of_tau(c: &ConstantsTable) -> Result<ContinuedFraction> {
    Ok(ContinuedFraction::expand(&tau(c)?, usize::MAX))
}

pub fn reduction1(c: &ConstantsTable, s2: &Stage2Record) -> Result<Reduction1Record> {
    let prec = c.precision;
    let inst = round1_instance(c, s2.absolute_m_bound.clone())?;
    let cf = cf_of_tau(c)?;
    let result = dp_reduce(&inst, &cf);
    if !result.is_success() {
        return Err(reduction_error(result.status, "first reduction", prec));
    }
    let max_w = result.max_w().expect("success carries w");
    // w = 2n
    let n_bound = to_u64(&(max_w / 2), "n bound")?.max(2);
    let published_index = published_reference().reduction1.convergent_index;
    Ok(Reduction1Record {
        a: inst.a,
        matches_published_index: result.convergent_index == Some(published_index),
        published_index,
        result,
        n_bound,
    })
}

/// `k < c_2 max(n_bound,3) log gamma log(2k)`, solved with `l = 1`.
pub fn intermediate(c: &ConstantsTable, c2: &Ball, n_bound: u64) -> Result<IntermediateRecord> {
    let prec = c.precision;
    let coefficient = c2
        .mul_int(&BigInt::from(n_bound.max(3)))
        .mul_ball(&c.log_gamma)
        .upper_ball();
    let k_raw = log_inequality_solve(&coefficient, 1)?;
    let k_bound = floor_upper(&k_raw).max(case_split());
    let m_bound = floor_upper(
        &rho(c)?
            .mul_pow2(1)
            .mul_int(&k_bound)
            .add_ball(&lit("0.5", prec)),
    );
    Ok(IntermediateRecord {
        coefficient,
        l: 1,
        k_raw_bound: k_raw,
        k_bound,
        m_bound,
    })
}

pub fn reduction2(c: &ConstantsTable, n_bound: u64, m_bound: BigInt) -> Result<Reduction2Record> {
    let prec = c.precision;
    let cf = cf_of_tau(c)?;
    let family: Vec<FamilyEntry> = (1..=n_bound)
        .into_par_iter()
        .map(|n| {
            let inst = round2_instance(c, n, m_bound.clone())?;
            Ok(FamilyEntry {
                n,
                result: dp_reduce(&inst, &cf),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut k_bound = 3u64;
    for e in &family {
        if !e.result.is_success() {
            return Err(reduction_error(
                e.result.status,
                &format!("second reduction at n = {}", e.n),
                prec,
            ));
        }
        // w = k
        k_bound = k_bound.max(to_u64(
            &e.result.max_w().expect("success carries w"),
            "k bound",
        )?);
    }
    let (min_epsilon_n, min_epsilon) = family
        .iter()
        .map(|e| {
            (
                e.n,
                e.result.epsilon.clone().expect("success carries epsilon"),
            )
        })
        .min_by(|a, b| a.1.cmp_mid(&b.1))
        .ok_or_else(|| Error::Precondition("empty family".into()))?;
    let n_eff = n_bound.min(k_bound);
    let m_ball = rho(c)?
        .mul_int(&BigInt::from(n_eff + k_bound))
        .add_ball(&lit("0.5", prec));
    let m_bound_final = to_u64(&floor_upper(&m_ball), "m bound")?;
    Ok(Reduction2Record {
        a: reduction_a(c, "2.637")?,
        family,
        min_epsilon,
        min_epsilon_n,
        k_bound,
        m_bound: m_bound_final,
    })
}

fn compare_ball(cert: &mut Certificate, name: &str, computed: &Ball, published: &str) {
    let p = lit(published, computed.prec().max(64));
    cert.comparisons.push(Comparison {
        name: name.to_string(),
        computed: format!("{:.6e}", computed.upper_f64()),
        published: published.to_string(),
        holds: computed.certify_le(&p).is_true(),
    });
}

fn compare_int(cert: &mut Certificate, name: &str, computed: &BigInt, published: &str) {
    let b = Ball::from_bigint(computed, 256);
    compare_ball(cert, name, &b, published);
    if let Some(last) = cert.comparisons.last_mut() {
        last.computed = computed.to_string();
    }
}

fn record_comparisons(cert: &mut Certificate) {
    let r = published_reference();
    if let Some(h) = cert.heights.clone() {
        compare_ball(cert, "h(alpha)", &h.h_alpha, &r.heights.h_alpha);
        compare_ball(cert, "h(gamma)", &h.h_gamma, &r.heights.h_gamma);
        compare_ball(cert, "h(5a)", &h.h_5a, &r.heights.h_5a);
    }
    if let Some(s1) = cert.stage1.clone() {
        for (i, (a, p)) in s1.a_values.iter().zip(&r.stage1.a_values).enumerate() {
            compare_ball(cert, &format!("A_{}", i + 1), a, p);
        }
        compare_ball(cert, "c_1", &s1.n_log_gamma_bound, &r.stage1.c1);
    }
    if let Some(s2) = cert.stage2.clone() {
        compare_ball(cert, "c_2", &s2.k_coefficient, &r.stage2.c2);
        compare_ball(
            cert,
            "c_1 c_2",
            &s2.combined_coefficient,
            &r.stage2.combined,
        );
        compare_int(
            cert,
            "absolute k bound",
            &s2.absolute_k_bound,
            &r.stage2.k_bound,
        );
        compare_int(
            cert,
            "absolute m bound",
            &s2.absolute_m_bound,
            &r.stage2.m_bound,
        );
    }
    if let Some(r1) = cert.reduction1.clone() {
        compare_ball(cert, "first reduction A", &r1.a, &r.reduction1.a);
        compare_int(
            cert,
            "n bound",
            &r1.n_bound.into(),
            &r.reduction1.n_bound.to_string(),
        );
    }
    if let Some(mid) = cert.intermediate.clone() {
        compare_ball(
            cert,
            "intermediate coefficient",
            &mid.coefficient,
            &r.intermediate.coefficient,
        );
        compare_int(
            cert,
            "intermediate k bound",
            &mid.k_bound,
            &r.intermediate.k_bound,
        );
        compare_int(
            cert,
            "intermediate m bound",
            &mid.m_bound,
            &r.intermediate.m_bound,
        );
    }
    if let Some(r2) = cert.reduction2.clone() {
        compare_ball(cert, "second reduction A", &r2.a, &r.reduction2.a);
        compare_int(
            cert,
            "k bound",
            &r2.k_bound.into(),
            &r.reduction2.k_bound.to_string(),
        );
        compare_int(
            cert,
            "m bound",
            &r2.m_bound.into(),
            &r.reduction2.m_bound.to_string(),
        );
    }
}

fn spot_checks(c: &ConstantsTable, cert: &mut Certificate) -> Result<()> {
    let prec = c.precision;
    let ga = c.gamma.root();
    let mut points: Vec<(u64, u64, u64, bool)> = cert
        .solutions
        .iter()
        .filter(|t| t.m >= 2 && t.n >= 2)
        .map(|t| (t.m, t.n, t.k, true))
        .collect();
    points.extend([
        (100, 3, 3, false),
        (50, 5, 20, false),
        (438, 86, 174, false),
    ]);
    for (m, n, k, is_solution) in points {
        let l1 = lambda1_residual_with(c, m, n, k)?;
        let l2 = lambda2_residual_with(c, m, n, k)?;
        let nonzero = l1.certify_positive().is_true() && l2.certify_positive().is_true();
        let within_bounds = if is_solution {
            let b1 = lit("4.91", prec).mul_ball(&ga.powi(-2 * n as i64)?);
            let b2 = lit("2.637", prec).mul_ball(&ga.powi(-(k as i64))?);
            Some(l1.certify_lt(&b1).is_true() && l2.certify_lt(&b2).is_true())
        } else {
            None
        };
        cert.spot_checks.push(SpotCheck {
            m,
            n,
            k,
            lambda1: l1,
            lambda2: l2,
            nonzero,
            within_bounds,
        });
    }
    Ok(())
}

fn assumptions() -> Vec<Assumption> {
    let a = |name: &str, statement: &str| Assumption {
        name: name.into(),
        statement: statement.into(),
    };
    vec![
        a(
            "lambda1-nonzero",
            "5a alpha^m != gamma^(n+k): applying the automorphism fixing gamma and sending alpha to beta gives a contradiction in absolute value",
        ),
        a(
            "lambda2-nonzero",
            "sqrt5 a alpha^m != F_n gamma^k, by the same automorphism argument",
        ),
        a(
            "tau-irrational",
            "log alpha / log gamma is irrational because alpha and gamma are multiplicatively independent",
        ),
        a(
            "log-linearization",
            "|log x| < 1.5 |x - 1| whenever |x - 1| < 1/2",
        ),
        a(
            "matveev",
            "Matveev's lower bound for nonzero linear forms in logarithms, stated with B >= max |b_i|",
        ),
        a(
            "guzman-luca",
            "if H > (4 l^2)^l and H > L/(log L)^l then L < 2^l H (log H)^l",
        ),
        a(
            "dujella-petho",
            "a convergent q > 6M of tau with epsilon > 0 rules out solutions of 0 < |u tau - v + mu| < A B^-w with u <= M and w >= log(Aq/epsilon)/log B",
        ),
        a(
            "small-indices",
            "the analytic chain needs n <= k, m >= 2, n >= 3 for the first reduction and k >= 4 for the second; every other case lies inside the search box, which starts at index 1",
        ),
    ]
}

/// Wall time of one stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: Stage,
    pub precision: u32,
    pub seconds: f64,
}

type StageResult<T> = std::result::Result<T, (Stage, Error)>;

fn timed<T>(
    stage: Stage,
    prec: u32,
    timings: &mut Vec<StageTiming>,
    f: impl FnOnce() -> Result<T>,
) -> StageResult<T> {
    let start = Instant::now();
    let out = f().map_err(|e| (stage, e));
    timings.push(StageTiming {
        stage,
        precision: prec,
        seconds: start.elapsed().as_secs_f64(),
    });
    out
}

fn run_all(prec: u32, cert: &mut Certificate, timings: &mut Vec<StageTiming>) -> StageResult<()> {
    let c = timed(Stage::Constants, prec, timings, || build_constants(prec))?;
    cert.constants = Some(c.snapshot());
    let h = timed(Stage::Heights, prec, timings, || compute_heights(&c))?;
    cert.heights = Some(h.clone());
    let mut facts = Vec::new();
    let s1 = timed(Stage::Stage1, prec, timings, || {
        run_stage1(&c, &h, &mut facts)
    });
    cert.facts.append(&mut facts);
    let s1 = s1?;
    cert.stage1 = Some(s1.clone());
    let s2 = timed(Stage::Stage2, prec, timings, || {
        run_stage2(&c, &h, &s1, &mut facts)
    });
    cert.facts.append(&mut facts);
    let s2 = s2?;
    cert.stage2 = Some(s2.clone());

    let r1 = timed(Stage::Reduction1, prec, timings, || reduction1(&c, &s2))?;
    let n_b = r1.n_bound;
    cert.reduction1 = Some(r1);
    let mid = timed(Stage::Intermediate, prec, timings, || {
        intermediate(&c, &s2.k_coefficient, n_b)
    })?;
    let m_int = mid.m_bound.clone();
    cert.intermediate = Some(mid);
    let r2 = timed(Stage::Reduction2, prec, timings, || {
        reduction2(&c, n_b, m_int)
    })?;
    let ranges = SearchRanges {
        m_max: r2.m_bound,
        n_max: n_b.min(r2.k_bound),
        k_max: r2.k_bound,
    };
    cert.reduction2 = Some(r2);
    cert.search_ranges = Some(ranges);
    cert.solutions = timed(Stage::Search, prec, timings, || {
        Ok(find_products(
            ranges.m_max,
            ranges.n_max,
            ranges.k_max,
            false,
        ))
    })?;
    spot_checks(&c, cert).map_err(|e| (Stage::Search, e))?;
    Ok(())
}

/// Run every stage, escalating the working precision along `policy` when a
/// comparison cannot be decided. The returned certificate is either
/// complete at one precision or marked failed at the stage that stopped it.
pub fn prove_main_timed(policy: &PrecisionPolicy) -> (Certificate, Vec<StageTiming>) {
    let mut timings = Vec::new();
    let steps = policy.steps();
    let mut cert = Certificate::empty(policy.start);
    for (i, &prec) in steps.iter().enumerate() {
        cert = Certificate::empty(prec);
        cert.assumptions = assumptions();
        match run_all(prec, &mut cert, &mut timings) {
            Ok(()) => break,
            Err((_, e)) if e.is_uncertified() && i + 1 < steps.len() => continue,
            Err((stage, e)) => {
                cert.status = CertificateStatus::Failed {
                    stage,
                    reason: e.to_string(),
                };
                break;
            }
        }
    }
    record_comparisons(&mut cert);
    (cert, timings)
}

pub fn prove_main(policy: &PrecisionPolicy) -> Certificate {
    prove_main_timed(policy).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Dyadic;

    fn consts() -> ConstantsTable {
        build_constants(192).unwrap()
    }

    #[test]
    fn residuals_at_solutions() {
        let c = consts();
        let ga = c.gamma.root();
        let l1 = lambda1_residual_with(&c, 9, 1, 7).unwrap();
        assert!(l1
            .certify_lt(&lit("4.91", 192).mul_ball(&ga.powi(-2).unwrap()))
            .is_true());
        let l1 = lambda1_residual_with(&c, 8, 4, 4).unwrap();
        assert!(l1
            .certify_lt(&lit("4.91", 192).mul_ball(&ga.powi(-8).unwrap()))
            .is_true());
        assert!(lambda1_residual_with(&c, 100, 3, 3)
            .unwrap()
            .certify_positive()
            .is_true());
        for (m, n, k) in [(8, 4, 4), (9, 2, 7), (7, 3, 4)] {
            let l2 = lambda2_residual_with(&c, m, n, k).unwrap();
            let bound = lit("2.637", 192).mul_ball(&ga.powi(-(k as i64)).unwrap());
            assert!(l2.certify_lt(&bound).is_true(), "({m},{n},{k})");
        }
    }

    #[test]
    fn windows() {
        let c = consts();
        let w = m_window_with(&c, 8).unwrap();
        assert!(w.contains(8).is_true());
        assert!(w.upper.certify_lt(&lit("10.58", 192)).is_true());
        assert!(m_window_with(&c, 6).unwrap().contains(6).is_true());
        let w = m_window_with(&c, 348).unwrap();
        assert!(w.upper.certify_lt(&lit("438.7", 192)).is_true());
        assert!(w.contains(439).is_false());
    }

    #[test]
    fn every_solution_lies_in_its_window() {
        let c = consts();
        for t in find_products(60, 30, 30, false) {
            let w = m_window_with(&c, t.n + t.k).unwrap();
            assert!(w.contains(t.m).is_true(), "{t:?}");
        }
    }

    #[test]
    fn named_values() {
        let c = consts();
        assert!(tau(&c)
            .unwrap()
            .overlaps(&lit("0.79433", 192).add_error(&Dyadic::pow2(-14))));
        assert!(mu_sqrt5a_over_fn(&c, 0).is_err());
        let a1 = reduction_a(&c, "4.91").unwrap();
        assert!(a1.certify_le(&lit("15.306", 192)).is_true());
        let a2 = reduction_a(&c, "2.637").unwrap();
        assert!(a2.certify_le(&lit("8.22", 192)).is_true());
    }

    #[test]
    fn height_family_bound_at_86() {
        let c = consts();
        let h = compute_heights(&c).unwrap();
        let lhs = h
            .h_sqrt5a_offset
            .add_ball(&c.log_gamma.mul_int(&BigInt::from(85)));
        let rhs = c.log_gamma.mul_int(&BigInt::from(2 * 86));
        assert!(lhs.certify_lt(&rhs).is_true());
    }

    #[test]
    fn stage_one_and_two_bounds() {
        let c = consts();
        let h = compute_heights(&c).unwrap();
        let mut facts = Vec::new();
        let s1 = run_stage1(&c, &h, &mut facts).unwrap();
        assert!(facts.iter().all(|f| f.holds));
        assert!(s1
            .n_log_gamma_bound
            .certify_le(&lit("1.471e14", 192))
            .is_true());
        let s2 = run_stage2(&c, &h, &s1, &mut facts).unwrap();
        assert!(s2.k_coefficient.certify_le(&lit("4.294e14", 192)).is_true());
        assert!(s2.absolute_m_bound < "2864000000000000000000000000000000".parse().unwrap());
    }

    #[test]
    fn low_cap_fails_cleanly() {
        let cert = prove_main(&PrecisionPolicy::fixed(32));
        assert!(matches!(cert.status, CertificateStatus::Failed { .. }));
        assert!(!cert.verdict());
    }
}
