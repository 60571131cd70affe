use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use baker_kit::algebraic::build_constants;
use baker_kit::pipeline::{prove_main_timed, CertificateStatus};
use baker_kit::reduction::{continued_fraction, dp_reduce_escalating};
use baker_kit::search::{distinct_values, find_products, find_squares};
use baker_kit::{ContinuedFraction, PrecisionPolicy, ReductionResult, SolutionTriple};
use serde::Serialize;

use crate::error::CliError;
use crate::instance::{parse_cf_spec, Constants, Named, ReductionSpec, ValueSpec};
use crate::report::ReportDocument;

/// A finished command: the report, a plain-text rendering and the exit code.
#[derive(Debug)]
pub struct Output {
    pub doc: ReportDocument,
    pub text: String,
    pub exit: u8,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Precision {
    pub precision: u32,
    pub precision_cap: u32,
}

impl Precision {
    fn policy(self) -> PrecisionPolicy {
        PrecisionPolicy::new(self.precision, self.precision_cap)
    }
}

pub fn prove(p: Precision) -> Output {
    let start = Instant::now();
    let (cert, timings) = prove_main_timed(&p.policy());
    let total = start.elapsed().as_secs_f64();
    let verdict = cert.verdict();

    let mut text = String::new();
    match &cert.status {
        CertificateStatus::Proved => {
            let _ = writeln!(
                text,
                "verdict: {} ({} bits)",
                if verdict { "TRUE" } else { "FALSE" },
                cert.precision
            );
        }
        CertificateStatus::Failed { stage, reason } => {
            let _ = writeln!(text, "verdict: FALSE (stage {stage} failed: {reason})");
        }
    }
    if let Some(r) = &cert.search_ranges {
        let _ = writeln!(
            text,
            "search box: m <= {}, n <= {}, k <= {}",
            r.m_max, r.n_max, r.k_max
        );
    }
    if !cert.solutions.is_empty() {
        let _ = writeln!(text, "solutions ({}):", cert.solutions.len());
        for t in &cert.solutions {
            let _ = writeln!(text, "  N_{} = F_{} F_{} = {}", t.m, t.n, t.k, t.value);
        }
        let _ = writeln!(text, "distinct values: {}", join(&cert.distinct_values()));
        let _ = writeln!(text, "squares: {}", join(&cert.squares()));
    }
    for c in cert.comparisons.iter().filter(|c| !c.holds) {
        let _ = writeln!(
            text,
            "not within published bound: {} = {} > {}",
            c.name, c.computed, c.published
        );
    }

    let mut doc = ReportDocument::new("prove", p, &cert);
    for t in &timings {
        doc = doc.with_timing(&t.stage.to_string(), Some(t.precision), t.seconds);
    }
    doc = doc.with_timing("total", None, total);
    Output {
        doc,
        text,
        exit: if verdict { 0 } else { 1 },
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchArgs {
    pub m_max: u64,
    pub n_max: u64,
    pub k_max: u64,
    pub squares_only: bool,
    pub both_orders: bool,
}

#[derive(Serialize)]
struct SearchBody {
    triples: Vec<SolutionTriple>,
    distinct_values: Vec<String>,
}

pub fn search(args: SearchArgs) -> Result<Output, CliError> {
    if args.m_max == 0 || args.n_max == 0 || args.k_max == 0 {
        return Err(CliError::Usage("search bounds must be positive".into()));
    }
    let start = Instant::now();
    let triples = if args.squares_only {
        find_squares(args.m_max, args.n_max.min(args.k_max))
    } else {
        find_products(args.m_max, args.n_max, args.k_max, args.both_orders)
    };
    let seconds = start.elapsed().as_secs_f64();
    let values = distinct_values(&triples);

    let mut text = String::new();
    for t in &triples {
        let _ = writeln!(text, "N_{} = F_{} F_{} = {}", t.m, t.n, t.k, t.value);
    }
    let _ = writeln!(
        text,
        "{} triples; distinct values: {}",
        triples.len(),
        join(&values)
    );

    let body = SearchBody {
        distinct_values: values.iter().map(ToString::to_string).collect(),
        triples,
    };
    Ok(Output {
        doc: ReportDocument::new("search", args, body).with_timing("search", None, seconds),
        text,
        exit: 0,
    })
}

#[derive(Serialize)]
struct CfInputs<'a> {
    value: &'a str,
    terms: usize,
    #[serde(flatten)]
    precision: Precision,
}

#[derive(Serialize)]
struct CfBody<'a> {
    precision: Option<u32>,
    continued_fraction: &'a ContinuedFraction,
}

/// `value` is a named constant or the path of a spec file.
pub fn cf(value: &str, terms: usize, p: Precision) -> Result<Output, CliError> {
    if terms == 0 {
        return Err(CliError::Usage("--terms must be positive".into()));
    }
    let spec = match Named::parse(value) {
        Some(n) => ValueSpec::Named(n),
        None => parse_cf_spec(&read(Path::new(value))?)?,
    };
    let constants = Constants::default();
    let start = Instant::now();
    let cf = continued_fraction(|prec| spec.eval(prec, &constants), terms, &p.policy())?;
    let seconds = start.elapsed().as_secs_f64();

    let mut text = String::new();
    let _ = writeln!(text, "precision: {} bits", cf.precision().unwrap_or(0));
    for (i, (a, (num, den))) in cf
        .partial_quotients()
        .iter()
        .zip(cf.convergents())
        .enumerate()
    {
        let _ = writeln!(text, "{i:>4}  a = {a}  p/q = {num}/{den}");
    }
    let body = CfBody {
        precision: cf.precision(),
        continued_fraction: &cf,
    };
    let inputs = CfInputs {
        value,
        terms,
        precision: p,
    };
    Ok(Output {
        doc: ReportDocument::new("cf", inputs, body).with_timing("cf", cf.precision(), seconds),
        text,
        exit: 0,
    })
}

#[derive(Serialize)]
struct ReduceInputs<'a> {
    instance: &'a std::collections::BTreeMap<String, String>,
    #[serde(flatten)]
    precision: Precision,
}

#[derive(Serialize)]
struct ReduceBody<'a> {
    precision: u32,
    instance: &'a baker_kit::ReductionInstance,
    result: &'a ReductionResult,
    max_w: Option<String>,
}

pub fn reduce(instance_path: &Path, p: Precision) -> Result<Output, CliError> {
    let spec = ReductionSpec::parse(&read(instance_path)?)?;
    let constants = Constants::default();
    let start = Instant::now();
    let (result, prec) = dp_reduce_escalating(|prec| spec.build(prec, &constants), &p.policy())?;
    let seconds = start.elapsed().as_secs_f64();
    let instance = spec.build(prec, &constants)?;
    let max_w = result.max_w();

    let mut text = String::new();
    let status = serde_json::to_value(result.status).expect("status serializes");
    let _ = writeln!(
        text,
        "status: {} ({prec} bits)",
        status.as_str().unwrap_or("?")
    );
    if let (Some(i), Some(q)) = (result.convergent_index, &result.q) {
        let _ = writeln!(text, "convergent {i}: q = {q}");
    }
    if let Some(e) = &result.epsilon {
        let _ = writeln!(text, "epsilon: {e}");
    }
    if let Some(w) = &max_w {
        let _ = writeln!(text, "w <= {w}");
    }

    let body = ReduceBody {
        precision: prec,
        instance: &instance,
        result: &result,
        max_w: max_w.map(|w| w.to_string()),
    };
    let inputs = ReduceInputs {
        instance: &spec.fields,
        precision: p,
    };
    Ok(Output {
        doc: ReportDocument::new("reduce", inputs, body).with_timing("reduce", Some(prec), seconds),
        text,
        exit: if result.is_success() { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct ConstantsInputs {
    precision: u32,
}

pub fn constants(precision: u32) -> Result<Output, CliError> {
    let start = Instant::now();
    let table = build_constants(precision)?;
    let seconds = start.elapsed().as_secs_f64();
    let snap = table.snapshot();

    let mut text = String::new();
    let rows = [
        ("alpha", &snap.alpha),
        ("gamma", &snap.gamma),
        ("a", &snap.a),
        ("a (via alpha)", &snap.a_from_alpha),
        ("|beta|", &snap.abs_beta),
        ("|b|", &snap.abs_b),
        ("delta", &snap.delta),
        ("log alpha", &snap.log_alpha),
        ("log gamma", &snap.log_gamma),
    ];
    let _ = writeln!(text, "precision: {precision} bits");
    for (name, ball) in rows {
        let _ = writeln!(text, "{name:>14}  {ball}");
    }
    Ok(Output {
        doc: ReportDocument::new("constants", ConstantsInputs { precision }, &snap).with_timing(
            "constants",
            Some(precision),
            seconds,
        ),
        text,
        exit: 0,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn join(values: &[num_bigint::BigInt]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}
