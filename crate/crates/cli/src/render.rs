use std::fmt::Write as _;

use clap::ValueEnum;
use dzeta_core::numerics::FitResult;
use dzeta_core::verify::{BatchSummary, Report};
use dzeta_core::{BigRat, FormalValue, NumericValue, RealCtx, RelationSet};
use serde::Serialize;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub type Rendered = Result<String, Box<dyn std::error::Error>>;

#[derive(Debug, Clone, Serialize)]
pub struct Coefficient {
    pub power: u32,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalOutput {
    pub target: String,
    /// The value itself, or the constant term for a polynomial in T.
    pub value: String,
    pub digits: u32,
    pub precision: u32,
    pub error_bound: String,
    pub achieved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<Coefficient>>,
}

impl EvalOutput {
    pub fn evaluate(target: String, value: &FormalValue, ctx: &RealCtx) -> EvalOutput {
        let p = ctx.precision();
        let zero = BigRat::zero();
        let degree = value.t_degree();
        let mut coefs: Vec<(u32, NumericValue)> = (0..=degree)
            .rev()
            .map(|e| (e, ctx.eval_formal_at(&value.t_coefficient(e), &zero)))
            .collect();
        let worst = coefs.iter().map(|(_, v)| v.err).fold(0.0, f64::max);
        let achieved = coefs.iter().all(|(_, v)| ctx.achieved(v));
        let constant = coefs.pop().expect("degree ≥ 0").1;
        let coefficients = (degree > 0).then(|| {
            coefs
                .iter()
                .chain(std::iter::once(&(0, constant.clone())))
                .map(|(e, v)| Coefficient {
                    power: *e,
                    value: v.to_decimal(p),
                })
                .collect()
        });
        EvalOutput {
            target,
            digits: p.min(constant.digits_justified()),
            value: constant.to_decimal(p),
            precision: p,
            error_bound: format!("{worst:.1e}"),
            achieved,
            coefficients,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitOutput {
    #[serde(flatten)]
    pub fit: FitResult,
    pub reference_constant: f64,
    pub reference_slope: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_quadratic: Option<f64>,
    pub dev_constant: f64,
    pub dev_slope: f64,
}

impl FitOutput {
    pub fn new(fit: FitResult, reference: [f64; 3]) -> FitOutput {
        FitOutput {
            dev_constant: (fit.constant - reference[0]).abs(),
            dev_slope: (fit.slope - reference[1]).abs(),
            reference_constant: reference[0],
            reference_slope: reference[1],
            reference_quadratic: fit.quadratic.map(|_| reference[2]),
            fit,
        }
    }
}

fn json<T: Serialize>(v: &T) -> Rendered {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Rendered {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn eval(out: &EvalOutput, fmt: Format) -> Rendered {
    match fmt {
        Format::Json => json(out),
        Format::Csv => {
            let rows: Vec<Vec<String>> = match &out.coefficients {
                Some(cs) => cs
                    .iter()
                    .map(|c| vec![out.target.clone(), c.power.to_string(), c.value.clone()])
                    .collect(),
                None => vec![vec![out.target.clone(), "0".into(), out.value.clone()]],
            };
            csv_rows(&["target", "t_power", "value"], rows)
        }
        Format::Text => {
            let mut s = String::new();
            match &out.coefficients {
                Some(cs) => {
                    writeln!(s, "{} coefficients:", out.target)?;
                    for c in cs {
                        writeln!(s, "  T^{}: {}", c.power, c.value)?;
                    }
                }
                None => writeln!(s, "{} = {}", out.target, out.value)?,
            }
            writeln!(
                s,
                "digits: {} of {} requested, error ≤ {}",
                out.digits, out.precision, out.error_bound
            )?;
            if !out.achieved {
                writeln!(s, "warning: requested precision not achieved")?;
            }
            Ok(s)
        }
    }
}

fn params(r: &Report) -> String {
    r.params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn report_text(r: &Report, s: &mut String) -> std::fmt::Result {
    write!(s, "{}", r.identity)?;
    match (r.m, r.n) {
        (Some(m), Some(n)) => write!(s, " (m={m}, n={n})")?,
        (Some(m), None) => write!(s, " (m={m})")?,
        _ => {}
    }
    write!(s, " weight {}", r.weight)?;
    if !r.params.is_empty() {
        write!(s, " [{}]", params(r))?;
    }
    writeln!(s)?;
    if let Some(sym) = &r.symbolic {
        write!(s, "  symbolic ({}): {}", sym.axioms, sym.status)?;
        if let Some(c) = &sym.certificate {
            if !c.is_empty() {
                write!(s, "  certificate {c}")?;
            }
        }
        writeln!(s)?;
        if let Some(res) = &sym.residue {
            writeln!(s, "  residue: {res}")?;
        }
    }
    if let Some(num) = &r.numeric {
        let ts: Vec<String> = num.t_samples.iter().map(ToString::to_string).collect();
        let over = if ts.is_empty() {
            String::new()
        } else {
            format!(" over T = {}", ts.join(", "))
        };
        writeln!(
            s,
            "  numeric: max residual {}{} (precision {}, tolerance {}, error bound {}){}",
            num.max_residual,
            over,
            num.precision,
            num.tolerance,
            num.error_bound,
            if num.achieved { "" } else { " precision not achieved" },
        )?;
    }
    if let Some(ex) = &r.exact {
        writeln!(s, "  {} = {}", ex.lhs, ex.rhs)?;
        if !ex.printed_equal {
            writeln!(s, "  swapped exponents give {} ≠ {}", ex.printed_lhs, ex.rhs)?;
        }
    }
    for note in &r.notes {
        writeln!(s, "  note: {note}")?;
    }
    if let Some(ms) = r.ms {
        writeln!(s, "  time: {ms} ms")?;
    }
    writeln!(s, "  result: {}", pass(r.passed()))
}

fn report_row(r: &Report) -> Vec<String> {
    let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
    let cert = r.certificate();
    vec![
        r.identity.to_string(),
        opt(r.m),
        opt(r.n),
        r.weight.to_string(),
        params(r),
        r.status().map(|s| s.to_string()).unwrap_or_default(),
        cert.map(|c| c.len().to_string()).unwrap_or_default(),
        cert.map(|c| c.to_string()).unwrap_or_default(),
        r.numeric
            .as_ref()
            .map(|n| n.max_residual.clone())
            .unwrap_or_default(),
        r.passed().to_string(),
        r.ms.map(|x| x.to_string()).unwrap_or_default(),
    ]
}

const REPORT_HEADER: [&str; 11] = [
    "identity",
    "m",
    "n",
    "weight",
    "params",
    "status",
    "certificate_size",
    "certificate",
    "max_residual",
    "passed",
    "ms",
];

pub fn report(r: &Report, fmt: Format) -> Rendered {
    match fmt {
        Format::Json => json(r),
        Format::Csv => csv_rows(&REPORT_HEADER, [report_row(r)]),
        Format::Text => {
            let mut s = String::new();
            report_text(r, &mut s)?;
            Ok(s)
        }
    }
}

pub fn batch(b: &BatchSummary, fmt: Format) -> Rendered {
    match fmt {
        Format::Json => json(b),
        Format::Csv => csv_rows(&REPORT_HEADER, b.reports.iter().map(report_row)),
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "{:<16} {:>3} {:>3} {:>3} {:<10} {:>5} {:>9} result",
                "identity", "m", "n", "w", "status", "cert", "residual"
            )?;
            for r in &b.reports {
                let row = report_row(r);
                let extra = if r.params.is_empty() {
                    String::new()
                } else {
                    format!(" {}", params(r))
                };
                writeln!(
                    s,
                    "{:<16} {:>3} {:>3} {:>3} {:<10} {:>5} {:>9} {}{}",
                    row[0],
                    row[1],
                    row[2],
                    row[3],
                    if row[5].is_empty() { "-" } else { &row[5] },
                    if row[6].is_empty() { "-" } else { &row[6] },
                    if row[8].is_empty() { "-" } else { &row[8] },
                    pass(r.passed()),
                    extra,
                )?;
            }
            writeln!(
                s,
                "total {}, passed {}, failed {}, ExactZero {}, Proven {}, NotInSpan {}, precision failures {}, worst residual {}",
                b.total,
                b.passed,
                b.failed,
                b.exact_zero,
                b.proven,
                b.not_in_span,
                b.precision_failures,
                b.worst_residual.as_deref().unwrap_or("-"),
            )?;
            Ok(s)
        }
    }
}

pub fn relations(set: &RelationSet, print_basis: bool, fmt: Format) -> Rendered {
    let dump = set.to_json(print_basis);
    match fmt {
        Format::Json => json(&dump),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = dump
                .rows
                .iter()
                .map(|r| vec!["row".into(), r.id.to_string(), r.value.to_string()])
                .collect();
            for p in dump.pivots.iter().flatten() {
                rows.push(vec!["pivot".into(), p.pivot.to_string(), p.row.to_string()]);
            }
            csv_rows(&["section", "key", "value"], rows)
        }
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "weight {} ({} axioms): {} rows, rank {}",
                dump.weight,
                dump.axioms,
                dump.rows.len(),
                dump.rank
            )?;
            for r in &dump.rows {
                writeln!(s, "  {}: {}", r.id, r.value)?;
            }
            if let Some(pivots) = &dump.pivots {
                writeln!(s, "echelon basis:")?;
                for p in pivots {
                    writeln!(s, "  pivot {}: {}", p.pivot, p.row)?;
                }
            }
            Ok(s)
        }
    }
}

pub fn fits(fits: &[FitOutput], fmt: Format) -> Rendered {
    match fmt {
        Format::Json => json(&fits),
        Format::Csv => csv_rows(
            &[
                "kind",
                "a",
                "depth",
                "points",
                "constant",
                "reference_constant",
                "dev_constant",
                "slope",
                "reference_slope",
                "dev_slope",
                "quadratic",
                "reference_quadratic",
                "rms_residual",
            ],
            fits.iter().map(|f| {
                vec![
                    f.fit.kind.to_string(),
                    f.fit.a.to_string(),
                    f.fit.depth.to_string(),
                    f.fit.points.to_string(),
                    f.fit.constant.to_string(),
                    f.reference_constant.to_string(),
                    format!("{:.1e}", f.dev_constant),
                    f.fit.slope.to_string(),
                    f.reference_slope.to_string(),
                    format!("{:.1e}", f.dev_slope),
                    f.fit.quadratic.map(|q| q.to_string()).unwrap_or_default(),
                    f.reference_quadratic.map(|q| q.to_string()).unwrap_or_default(),
                    format!("{:.1e}", f.fit.rms_residual),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            for f in fits {
                writeln!(
                    s,
                    "{} fit, a = {}, depth {}, {} points, rms residual {:.1e}",
                    f.fit.kind, f.fit.a, f.fit.depth, f.fit.points, f.fit.rms_residual
                )?;
                writeln!(s, "  {:<10} {:>20} {:>20} {:>9}", "", "estimate", "reference", "deviation")?;
                let line = |s: &mut String, name: &str, est: f64, r: f64| {
                    writeln!(s, "  {name:<10} {est:>20.12} {r:>20.12} {:>9.1e}", (est - r).abs())
                };
                if let (Some(q), Some(r)) = (f.fit.quadratic, f.reference_quadratic) {
                    line(&mut s, "L^2", q, r)?;
                }
                line(&mut s, "L^1", f.fit.slope, f.reference_slope)?;
                line(&mut s, "L^0", f.fit.constant, f.reference_constant)?;
            }
            Ok(s)
        }
    }
}
