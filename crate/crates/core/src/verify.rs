//! Identity verification: symbolic span membership plus numeric evaluation.
//!
//! Every identity is built as a pair `(constructed side, target side)` in
//! normal form. The residual is `constructed − target`; it is either the zero
//! value, a certified member of the relation span at its weight, or not in
//! the span. Independently both sides are evaluated numerically at several
//! values of T.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, FormalValue, Rule};
use crate::error::{Error, Result};
use crate::exact::{binom, BigRat};
use crate::genfun;
use crate::numerics::{NumericValue, Real, RealCtx};
use crate::relations::{row_s, Axioms, Certificate, Membership, RelationSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Prima,
    Harmonic,
    Shuffle,
    PartialFraction,
    KeyNumeric,
    Thm1,
    Secunda,
    Tertia,
    Gkz,
    GkzSub,
    Eds,
    SumFormula,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 12] = [
        IdentityKind::Prima,
        IdentityKind::Harmonic,
        IdentityKind::Shuffle,
        IdentityKind::PartialFraction,
        IdentityKind::KeyNumeric,
        IdentityKind::Thm1,
        IdentityKind::Secunda,
        IdentityKind::Tertia,
        IdentityKind::Gkz,
        IdentityKind::GkzSub,
        IdentityKind::Eds,
        IdentityKind::SumFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityKind::Prima => "prima",
            IdentityKind::Harmonic => "harmonic",
            IdentityKind::Shuffle => "shuffle",
            IdentityKind::PartialFraction => "partial_fraction",
            IdentityKind::KeyNumeric => "key_numeric",
            IdentityKind::Thm1 => "thm1",
            IdentityKind::Secunda => "secunda",
            IdentityKind::Tertia => "tertia",
            IdentityKind::Gkz => "gkz",
            IdentityKind::GkzSub => "gkz_sub",
            IdentityKind::Eds => "eds",
            IdentityKind::SumFormula => "sum_formula",
        }
    }

    /// Human-readable parameter domain.
    pub fn domain(self) -> &'static str {
        match self {
            IdentityKind::Prima
            | IdentityKind::Harmonic
            | IdentityKind::Shuffle
            | IdentityKind::Thm1
            | IdentityKind::Secunda
            | IdentityKind::Tertia
            | IdentityKind::GkzSub
            | IdentityKind::KeyNumeric => "m, n ≥ 2",
            IdentityKind::Eds => "m, n ≥ 1",
            IdentityKind::PartialFraction => "n, m, x, a ≥ 1",
            IdentityKind::Gkz => "weight k ≥ 3",
            IdentityKind::SumFormula => "weight w ≥ 3",
        }
    }

    /// Kinds parameterized by a single weight rather than a pair (m, n).
    pub fn is_weight_only(self) -> bool {
        matches!(self, IdentityKind::Gkz | IdentityKind::SumFormula)
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::Parse(format!("unknown identity '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Numeric,
    #[default]
    Both,
}

impl Mode {
    pub fn symbolic(self) -> bool {
        self != Mode::Numeric
    }

    pub fn numeric(self) -> bool {
        self != Mode::Symbolic
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Symbolic => "symbolic",
            Mode::Numeric => "numeric",
            Mode::Both => "both",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "numeric" => Ok(Mode::Numeric),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Parse(format!("unknown mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub mode: Mode,
    pub axioms: Axioms,
    pub t_samples: Vec<BigRat>,
    /// Record wall-clock time in each report.
    pub timings: bool,
    /// Upper summation limit for `key_numeric`.
    pub key_limit: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: Mode::Both,
            axioms: Axioms::Extended,
            t_samples: (0..3).map(BigRat::from).collect(),
            timings: false,
            key_limit: 1000,
        }
    }
}

impl VerifyOptions {
    pub fn symbolic(axioms: Axioms) -> Self {
        VerifyOptions {
            mode: Mode::Symbolic,
            axioms,
            ..Default::default()
        }
    }

    pub fn numeric() -> Self {
        VerifyOptions {
            mode: Mode::Numeric,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    ExactZero,
    Proven,
    NotInSpan,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ExactZero => "ExactZero",
            Status::Proven => "Proven",
            Status::NotInSpan => "NotInSpan",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicResult {
    pub status: Status,
    pub axioms: Axioms,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Normal-form residual (only reported when it is nonzero).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<FormalValue>,
    /// What is left after reduction modulo the span, for `NotInSpan`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<FormalValue>,
}

impl SymbolicResult {
    pub fn passed(&self) -> bool {
        self.status != Status::NotInSpan
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericResult {
    pub t_samples: Vec<BigRat>,
    /// `max |residual|` over the samples, formatted `{:.1e}`.
    pub max_residual: String,
    pub precision: u32,
    /// Acceptance threshold for `max_residual`.
    pub tolerance: String,
    /// Largest error estimate of the evaluated residuals.
    pub error_bound: String,
    /// Whether the evaluation error stayed below the tolerance.
    pub achieved: bool,
    pub passed: bool,
}

impl NumericResult {
    pub fn max_residual_f64(&self) -> f64 {
        self.max_residual.parse().unwrap_or(f64::INFINITY)
    }
}

/// Exact rational comparison used by `partial_fraction`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCheck {
    pub lhs: BigRat,
    pub rhs: BigRat,
    pub equal: bool,
    /// `1/(x^n (x+a)^m)`, the left side with the indices as printed.
    pub printed_lhs: BigRat,
    pub printed_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub identity: IdentityKind,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub weight: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbolic: Option<SymbolicResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

impl Report {
    fn new(identity: IdentityKind, m: Option<u32>, n: Option<u32>, weight: u32) -> Report {
        Report {
            identity,
            m,
            n,
            weight,
            params: BTreeMap::new(),
            symbolic: None,
            numeric: None,
            exact: None,
            notes: Vec::new(),
            ms: None,
        }
    }

    pub fn status(&self) -> Option<Status> {
        self.symbolic.as_ref().map(|s| s.status)
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        self.symbolic.as_ref().and_then(|s| s.certificate.as_ref())
    }

    /// All performed checks succeeded.
    pub fn passed(&self) -> bool {
        self.symbolic.as_ref().is_none_or(SymbolicResult::passed)
            && self.numeric.as_ref().is_none_or(|n| n.passed)
            && self.exact.as_ref().is_none_or(|e| e.equal)
    }

    /// The numeric evaluation could not reach the requested precision.
    pub fn precision_failed(&self) -> bool {
        self.numeric.as_ref().is_some_and(|n| !n.achieved)
    }

    /// Stable ordering key: kind, then parameters.
    pub fn sort_key(&self) -> (IdentityKind, u32, u32, u32, Vec<(String, u64)>) {
        (
            self.identity,
            self.weight,
            self.m.unwrap_or(0),
            self.n.unwrap_or(0),
            self.params.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        )
    }
}

fn domain_error(kind: IdentityKind, detail: String) -> Error {
    Error::DomainError {
        kind: kind.name().into(),
        detail,
    }
}

fn need_pair(kind: IdentityKind, m: u32, n: u32, min: u32) -> Result<()> {
    if m < min || n < min {
        return Err(domain_error(
            kind,
            format!("need m, n ≥ {min}, got ({m},{n})"),
        ));
    }
    Ok(())
}

fn need_weight(kind: IdentityKind, w: u32) -> Result<()> {
    if w < 3 {
        return Err(domain_error(kind, format!("need weight ≥ 3, got {w}")));
    }
    Ok(())
}

/// The two sides of an identity, `(constructed, target)`.
pub fn sides(kind: IdentityKind, m: u32, n: u32) -> Result<(FormalValue, FormalValue)> {
    use algebra::{double, product_singles, single, star};
    let st = Rule::Stuffle;
    match kind {
        IdentityKind::Prima => {
            need_pair(kind, m, n, 2)?;
            Ok((
                star(n, m)? + star(m, n)?,
                product_singles(n, m, st)? + single(m + n)?,
            ))
        }
        IdentityKind::Harmonic => {
            need_pair(kind, m, n, 2)?;
            Ok((
                double(m, n)? + double(n, m)? + single(m + n)?,
                product_singles(m, n, st)?,
            ))
        }
        IdentityKind::Shuffle => {
            need_pair(kind, m, n, 2)?;
            Ok((product_singles(m, n, Rule::Shuffle)?, product_singles(m, n, st)?))
        }
        IdentityKind::Eds => {
            need_pair(kind, m, n, 1)?;
            Ok((product_singles(m, n, Rule::Shuffle)?, product_singles(m, n, st)?))
        }
        IdentityKind::Thm1 => {
            need_pair(kind, m, n, 2)?;
            Ok((genfun::build_p(m, n)?, double(m, n)?))
        }
        IdentityKind::Secunda => {
            need_pair(kind, m, n, 2)?;
            Ok((
                genfun::build_p(m, n)? + genfun::build_p(n, m)?,
                product_singles(m, n, st)? - single(m + n)?,
            ))
        }
        IdentityKind::Tertia => {
            need_pair(kind, m, n, 2)?;
            Ok((tertia_rhs(m, n)?, double(m, n)?))
        }
        IdentityKind::GkzSub => {
            need_pair(kind, m, n, 2)?;
            gkz_sub_sides(m, n)
        }
        IdentityKind::SumFormula => {
            need_weight(kind, m)?;
            let mut rhs = FormalValue::zero();
            for a in 1..=m - 2 {
                rhs = rhs + double(a, m - a)?;
            }
            Ok((single(m)?, rhs))
        }
        IdentityKind::Gkz | IdentityKind::PartialFraction | IdentityKind::KeyNumeric => {
            Err(domain_error(
                kind,
                "not a single pair of formal values".into(),
            ))
        }
    }
}

/// `Σ_{i<m} (−1)^i C(n+i−1,i) {ζ_*(n+i,m−i) + ζ(m−i,n+i) + ζ(m+n)}
///   + (−1)^m Σ_{j<n} C(m+j−1,j) ζ_*(m+j,n−j)`.
fn tertia_rhs(m: u32, n: u32) -> Result<FormalValue> {
    let st = Rule::Stuffle;
    let mut v = FormalValue::zero();
    for i in 0..m {
        let c = BigRat::sign_pow(i) * binom((n + i - 1) as u64, i as u64);
        let inner = algebra::reg_double(n + i, m - i, st)?
            + algebra::double(m - i, n + i)?
            + algebra::single(m + n)?;
        v.add_scaled(&inner, &c);
    }
    let outer = BigRat::sign_pow(m);
    for j in 0..n {
        let c = &outer * &binom((m + j - 1) as u64, j as u64);
        v.add_scaled(&algebra::reg_double(m + j, n - j, st)?, &c);
    }
    Ok(v)
}

/// Coefficient of `X^{n−1}Y^{m−1}` in `Q(X−Y,Y)` against that of
/// `D(X,Y) + D(X,X−Y)`.
fn gkz_sub_sides(m: u32, n: u32) -> Result<(FormalValue, FormalValue)> {
    let k = m + n;
    let (one, zero, neg) = (BigRat::one(), BigRat::zero(), -BigRat::one());
    let q = genfun::build_q(k)?.substitute(&one, &neg, &zero, &one);
    let d = genfun::build_d(k)?;
    let d_sub = d.substitute(&one, &zero, &one, &neg);
    let (i, j) = (n - 1, m - 1);
    Ok((q.coeff(i, j), d.coeff(i, j) + d_sub.coeff(i, j)))
}

fn fmt_e(x: f64) -> String {
    format!("{x:.1e}")
}

/// Shared state for a run of verifications: options, numeric context and
/// one immutable relation set per weight.
pub struct Verifier<'a> {
    opts: VerifyOptions,
    ctx: &'a RealCtx,
    sets: RwLock<HashMap<u32, Arc<RelationSet>>>,
}

impl<'a> Verifier<'a> {
    pub fn new(opts: VerifyOptions, ctx: &'a RealCtx) -> Self {
        Verifier {
            opts,
            ctx,
            sets: RwLock::default(),
        }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    pub fn relation_set(&self, weight: u32) -> Result<Arc<RelationSet>> {
        if let Some(s) = self.sets.read().expect("lock").get(&weight) {
            return Ok(s.clone());
        }
        let set = Arc::new(RelationSet::build(weight, self.opts.axioms)?);
        Ok(self
            .sets
            .write()
            .expect("lock")
            .entry(weight)
            .or_insert(set)
            .clone())
    }

    /// Verify one identity. For weight-only kinds `m` is the weight and `n`
    /// is ignored.
    pub fn verify(&self, kind: IdentityKind, m: u32, n: u32) -> Result<Report> {
        let start = Instant::now();
        let mut report = match kind {
            IdentityKind::PartialFraction => {
                return Err(domain_error(
                    kind,
                    "use verify_partial_fraction with (n, m, x, a)".into(),
                ))
            }
            IdentityKind::KeyNumeric => {
                verify_key_numeric(m, n, self.opts.key_limit, self.ctx)?
            }
            IdentityKind::Gkz => self.verify_gkz(m)?,
            _ => self.verify_pair(kind, m, n)?,
        };
        if self.opts.timings {
            report.ms = Some(start.elapsed().as_millis() as u64);
        }
        Ok(report)
    }

    fn check_numeric_samples(&self) -> Result<()> {
        let mut distinct = self.opts.t_samples.clone();
        distinct.sort();
        distinct.dedup();
        if self.opts.mode.numeric() && distinct.len() < 3 {
            return Err(Error::DomainError {
                kind: "verify".into(),
                detail: format!("need at least 3 distinct T samples, got {}", distinct.len()),
            });
        }
        Ok(())
    }

    fn symbolic(&self, residual: &FormalValue) -> Result<SymbolicResult> {
        if residual.is_zero() {
            return Ok(SymbolicResult {
                status: Status::ExactZero,
                axioms: self.opts.axioms,
                certificate: None,
                residual: None,
                residue: None,
            });
        }
        let set = self.relation_set(residual.weight()?)?;
        Ok(match set.member(residual)? {
            Membership::Member(cert) => SymbolicResult {
                status: Status::Proven,
                axioms: self.opts.axioms,
                certificate: Some(cert),
                residual: Some(residual.clone()),
                residue: None,
            },
            Membership::NotInSpan { residue } => SymbolicResult {
                status: Status::NotInSpan,
                axioms: self.opts.axioms,
                certificate: None,
                residual: Some(residual.clone()),
                residue: Some(residue),
            },
        })
    }

    /// Evaluate each `(lhs, rhs)` pair at every T sample.
    fn numeric(&self, pairs: &[(FormalValue, FormalValue)]) -> NumericResult {
        let mut max_res: f64 = 0.0;
        let mut max_err: f64 = 0.0;
        for t in &self.opts.t_samples {
            for (lhs, rhs) in pairs {
                let d = self
                    .ctx
                    .eval_formal_at(lhs, t)
                    .sub(&self.ctx.eval_formal_at(rhs, t));
                max_res = max_res.max(d.value.abs().to_f64());
                max_err = max_err.max(d.err);
            }
        }
        let tol = self.ctx.identity_tolerance();
        NumericResult {
            t_samples: self.opts.t_samples.clone(),
            max_residual: fmt_e(max_res),
            precision: self.ctx.precision(),
            tolerance: fmt_e(tol),
            error_bound: fmt_e(max_err),
            achieved: max_err < tol,
            passed: max_res < tol,
        }
    }

    fn verify_pair(&self, kind: IdentityKind, m: u32, n: u32) -> Result<Report> {
        let (lhs, rhs) = sides(kind, m, n)?;
        let weight = if kind.is_weight_only() { m } else { m + n };
        let mut report = if kind.is_weight_only() {
            Report::new(kind, None, None, weight)
        } else {
            Report::new(kind, Some(m), Some(n), weight)
        };
        if self.opts.mode.symbolic() {
            report.symbolic = Some(self.symbolic(&(&lhs - &rhs))?);
        }
        if self.opts.mode.numeric() {
            self.check_numeric_samples()?;
            report.numeric = Some(self.numeric(&[(lhs, rhs)]));
        }
        Ok(report)
    }

    fn verify_gkz(&self, k: u32) -> Result<Report> {
        need_weight(IdentityKind::Gkz, k)?;
        let lhs = genfun::gkz_lhs(k)?;
        let rhs = genfun::build_q_with(k, Rule::Shuffle)?;
        let mut report = Report::new(IdentityKind::Gkz, None, None, k);
        if self.opts.mode.symbolic() {
            let mut result = SymbolicResult {
                status: Status::ExactZero,
                axioms: self.opts.axioms,
                certificate: None,
                residual: None,
                residue: None,
            };
            for (_, residual) in genfun::check_gkz(k)? {
                if residual.is_zero() {
                    continue;
                }
                let sym = self.symbolic(&residual)?;
                if sym.status == Status::NotInSpan || result.status == Status::ExactZero {
                    result = sym;
                }
                if result.status == Status::NotInSpan {
                    break;
                }
            }
            report.symbolic = Some(result);
        }
        if self.opts.mode.numeric() {
            self.check_numeric_samples()?;
            let pairs: Vec<_> = (0..=k - 2)
                .map(|i| (lhs.coeff(i, k - 2 - i), rhs.coeff(i, k - 2 - i)))
                .collect();
            report.numeric = Some(self.numeric(&pairs));
        }
        Ok(report)
    }

    /// Parameter sweep for `kind` up to `max_weight`.
    pub fn domain(kind: IdentityKind, max_weight: u32) -> Vec<(u32, u32)> {
        match kind {
            IdentityKind::Gkz | IdentityKind::SumFormula => {
                (3..=max_weight).map(|w| (w, 0)).collect()
            }
            IdentityKind::PartialFraction => Vec::new(),
            _ => {
                let min = if kind == IdentityKind::Eds { 1 } else { 2 };
                let mut out = Vec::new();
                for w in 2 * min..=max_weight {
                    for m in min..=w - min {
                        out.push((m, w - m));
                    }
                }
                out
            }
        }
    }

    /// Run every kind over its domain, in parallel, and aggregate.
    pub fn batch(&self, max_weight: u32, kinds: &[IdentityKind]) -> Result<BatchSummary> {
        if max_weight < 4 {
            return Err(Error::DomainError {
                kind: "batch".into(),
                detail: format!("max weight must be ≥ 4, got {max_weight}"),
            });
        }
        let mut kinds = kinds.to_vec();
        kinds.sort();
        kinds.dedup();
        let mut reports: Vec<Report> = Vec::new();
        let pair_jobs: Vec<(IdentityKind, u32, u32)> = kinds
            .iter()
            .flat_map(|&k| Self::domain(k, max_weight).into_iter().map(move |(m, n)| (k, m, n)))
            .collect();
        let results: Vec<Result<Report>> = pair_jobs
            .par_iter()
            .map(|&(k, m, n)| self.verify(k, m, n))
            .collect();
        for r in results {
            reports.push(r?);
        }
        if kinds.contains(&IdentityKind::PartialFraction) {
            reports.extend(partial_fraction_sweep(max_weight));
        }
        reports.sort_by_key(Report::sort_key);
        Ok(BatchSummary::from_reports(reports))
    }
}

/// Partial fraction cases with `n + m ≤ max_weight`, `x, a ≤ 6`.
fn partial_fraction_sweep(max_weight: u32) -> Vec<Report> {
    let mut out = Vec::new();
    for w in 2..=max_weight {
        for m in 1..w {
            for x in 1..=6 {
                for a in 1..=6 {
                    out.push(verify_partial_fraction(w - m, m, x, a).expect("positive parameters"));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub exact_zero: usize,
    pub proven: usize,
    pub not_in_span: usize,
    pub precision_failures: usize,
    /// Largest numeric residual over all reports, `{:.1e}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_residual: Option<String>,
    pub reports: Vec<Report>,
}

impl BatchSummary {
    pub fn from_reports(reports: Vec<Report>) -> BatchSummary {
        let count = |s: Status| reports.iter().filter(|r| r.status() == Some(s)).count();
        let passed = reports.iter().filter(|r| r.passed()).count();
        let worst = reports
            .iter()
            .filter_map(|r| r.numeric.as_ref())
            .map(NumericResult::max_residual_f64)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
        BatchSummary {
            total: reports.len(),
            passed,
            failed: reports.len() - passed,
            exact_zero: count(Status::ExactZero),
            proven: count(Status::Proven),
            not_in_span: count(Status::NotInSpan),
            precision_failures: reports.iter().filter(|r| r.precision_failed()).count(),
            worst_residual: worst.map(fmt_e),
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Convenience wrapper around [`Verifier::verify`].
pub fn verify(
    kind: IdentityKind,
    m: u32,
    n: u32,
    opts: &VerifyOptions,
    ctx: &RealCtx,
) -> Result<Report> {
    Verifier::new(opts.clone(), ctx).verify(kind, m, n)
}

/// Convenience wrapper around [`Verifier::batch`].
pub fn batch(
    max_weight: u32,
    kinds: &[IdentityKind],
    opts: &VerifyOptions,
    ctx: &RealCtx,
) -> Result<BatchSummary> {
    Verifier::new(opts.clone(), ctx).batch(max_weight, kinds)
}

pub fn verify_sum_formula(w: u32, opts: &VerifyOptions, ctx: &RealCtx) -> Result<Report> {
    let report = verify(IdentityKind::SumFormula, w, 0, opts, ctx)?;
    debug_assert!(report.symbolic.as_ref().is_none_or(|s| s
        .residual
        .as_ref()
        .is_none_or(|r| *r == row_s(w).expect("w ≥ 3").value)));
    Ok(report)
}

/// `1/(x^m (x+a)^n)`.
pub fn partial_fraction_lhs(n: u32, m: u32, x: u64, a: u64) -> BigRat {
    let x = BigRat::from(x as i64);
    let xa = &x + &BigRat::from(a as i64);
    (x.pow(m as i32) * xa.pow(n as i32)).recip()
}

/// `Σ_{i<m} (−1)^i C(n+i−1,i) a^{−(n+i)} x^{−(m−i)}
///   + (−1)^m Σ_{j<n} C(m+j−1,j) a^{−(m+j)} (x+a)^{−(n−j)}`.
pub fn partial_fraction_rhs(n: u32, m: u32, x: u64, a: u64) -> BigRat {
    let xr = BigRat::from(x as i64);
    let ar = BigRat::from(a as i64);
    let xa = &xr + &ar;
    let mut acc = BigRat::zero();
    for i in 0..m {
        let c = BigRat::sign_pow(i) * binom((n + i - 1) as u64, i as u64);
        acc += &(c * ar.pow(-((n + i) as i32)) * xr.pow(-((m - i) as i32)));
    }
    let outer = BigRat::sign_pow(m);
    for j in 0..n {
        let c = &outer * &binom((m + j - 1) as u64, j as u64);
        acc += &(c * ar.pow(-((m + j) as i32)) * xa.pow(-((n - j) as i32)));
    }
    acc
}

pub fn verify_partial_fraction(n: u32, m: u32, x: u64, a: u64) -> Result<Report> {
    if n < 1 || m < 1 || x < 1 || a < 1 {
        return Err(domain_error(
            IdentityKind::PartialFraction,
            format!("need n, m, x, a ≥ 1, got ({n},{m},{x},{a})"),
        ));
    }
    let lhs = partial_fraction_lhs(n, m, x, a);
    let rhs = partial_fraction_rhs(n, m, x, a);
    let printed_lhs = partial_fraction_lhs(m, n, x, a);
    let mut report = Report::new(IdentityKind::PartialFraction, Some(m), Some(n), m + n);
    report.params.insert("x".into(), x);
    report.params.insert("a".into(), a);
    report.exact = Some(ExactCheck {
        equal: lhs == rhs,
        printed_equal: printed_lhs == rhs,
        lhs,
        rhs,
        printed_lhs,
    });
    report.notes.push(
        "left side taken as 1/(x^m (x+a)^n); the printed pairing 1/(x^n (x+a)^m) \
         does not match the right side unless m = n"
            .into(),
    );
    Ok(report)
}

/// Partial sums `Σ_{a≤A} s_a` with `s_a = Σ_{x≥1} 1/(x^m (x+a)^n)`, for each
/// `A` in `checkpoints` (sorted ascending).
///
/// Partial fractions reduce `s_a` to single zeta values and generalized
/// harmonic numbers `H_a^{(e)}`; the two weight-one pieces telescope to
/// `H_a`.
pub fn key_partial_sums(m: u32, n: u32, checkpoints: &[u64], ctx: &RealCtx) -> Vec<NumericValue> {
    let bits = ctx.bits();
    let zetas: Vec<NumericValue> = (0..=m.max(n))
        .map(|e| {
            if e >= 2 {
                ctx.zeta_single(e)
            } else {
                NumericValue::new(Real::zero(bits), 0.0)
            }
        })
        .collect();
    let ci: Vec<BigRat> = (0..m)
        .map(|i| BigRat::sign_pow(i) * binom((n + i - 1) as u64, i as u64))
        .collect();
    let dj: Vec<BigRat> = (0..n)
        .map(|j| BigRat::sign_pow(m) * binom((m + j - 1) as u64, j as u64))
        .collect();
    let mut harm = vec![Real::zero(bits); n.max(1) as usize + 1];
    let mut acc = Real::zero(bits);
    let mut err = 0.0;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    let last = checkpoints.last().copied().unwrap_or(0);
    for a in 1..=last {
        for (e, h) in harm.iter_mut().enumerate().skip(1) {
            *h = &*h + &Real::recip_pow(a, e as u32, bits);
        }
        let mut s = Real::zero(bits);
        let mut s_err = 0.0;
        for (i, c) in ci.iter().enumerate() {
            let i = i as u32;
            let pow = Real::recip_pow(a, n + i, bits);
            let body = if m - i >= 2 {
                s_err += zetas[(m - i) as usize].err;
                zetas[(m - i) as usize].value.clone()
            } else {
                harm[1].clone()
            };
            s = s + body.mul(&pow).mul_rat(c);
        }
        for (j, c) in dj.iter().enumerate() {
            let j = j as u32;
            if n - j < 2 {
                continue;
            }
            let pow = Real::recip_pow(a, m + j, bits);
            let e = (n - j) as usize;
            s_err += zetas[e].err;
            let body = &zetas[e].value - &harm[e];
            s = s + body.mul(&pow).mul_rat(c);
        }
        acc = acc + s;
        err += s_err + 16.0 * 2f64.powi(-(bits as i32));
        while next.peek().is_some_and(|&&c| c == a) {
            out.push(NumericValue::new(acc.clone(), err));
            next.next();
        }
    }
    out
}

/// Upper bound on `Σ_{a>A} s_a ≤ ζ(m) A^{1−n}/(n−1)`.
pub fn key_tail_bound(m: u32, n: u32, limit: u64) -> f64 {
    let zm = 1.0 + 1.0 / (m as f64 - 1.0);
    zm * (limit as f64).powf(1.0 - n as f64) / (n as f64 - 1.0)
}

pub fn verify_key_numeric(m: u32, n: u32, limit: u64, ctx: &RealCtx) -> Result<Report> {
    let kind = IdentityKind::KeyNumeric;
    need_pair(kind, m, n, 2)?;
    if limit < 2 {
        return Err(domain_error(kind, format!("need A ≥ 2, got {limit}")));
    }
    let mut checkpoints: Vec<u64> = std::iter::successors(Some(limit), |&a| Some(a / 2))
        .take_while(|&a| a >= 1)
        .collect();
    checkpoints.reverse();
    checkpoints.dedup();
    let sums = key_partial_sums(m, n, &checkpoints, ctx);
    let target = ctx.zeta_double(m, n)?;
    let gaps: Vec<NumericValue> = sums.iter().map(|s| target.sub(s)).collect();
    let monotone = gaps.windows(2).all(|w| w[1].value < w[0].value);
    let gap = gaps.last().expect("nonempty checkpoints");
    let gap_f = gap.value.to_f64();
    let bound = key_tail_bound(m, n, limit);
    let tol = ctx.identity_tolerance();
    let mut report = Report::new(kind, Some(m), Some(n), m + n);
    report.params.insert("A".into(), limit);
    report.numeric = Some(NumericResult {
        t_samples: Vec::new(),
        max_residual: fmt_e(gap_f.abs()),
        precision: ctx.precision(),
        tolerance: fmt_e(bound),
        error_bound: fmt_e(gap.err),
        achieved: gap.err < tol,
        passed: monotone && gap_f >= 0.0 && gap_f <= bound,
    });
    report.notes.push(format!(
        "gap over A = {}: {}",
        checkpoints
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(","),
        gaps.iter()
            .map(|g| fmt_e(g.value.to_f64()))
            .collect::<Vec<_>>()
            .join(",")
    ));
    if !monotone {
        report.notes.push("gap is not monotone in A".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::RelationId;

    fn sym(axioms: Axioms) -> VerifyOptions {
        VerifyOptions::symbolic(axioms)
    }

    #[test]
    fn kind_names_round_trip() {
        for k in IdentityKind::ALL {
            assert_eq!(k.name().parse::<IdentityKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert_eq!(
            "partial-fraction".parse::<IdentityKind>().unwrap(),
            IdentityKind::PartialFraction
        );
        assert!("thm9".parse::<IdentityKind>().is_err());
    }

    #[test]
    fn thm1_two_two() {
        let ctx = RealCtx::new(30);
        let r = verify(IdentityKind::Thm1, 2, 2, &sym(Axioms::Extended), &ctx).unwrap();
        assert_eq!(r.status(), Some(Status::Proven));
        let cert = r.certificate().unwrap();
        assert_eq!(cert.coef(RelationId::E(2, 2)), BigRat::from(-1));
        assert_eq!(cert.coef(RelationId::S(4)), BigRat::from(-2));
        let r = verify(IdentityKind::Thm1, 2, 2, &sym(Axioms::Strict), &ctx).unwrap();
        assert_eq!(r.status(), Some(Status::NotInSpan));
        assert!(!r.passed());
        assert!(r.symbolic.unwrap().residue.is_some());
    }

    #[test]
    fn eds_with_index_one_vanishes() {
        let ctx = RealCtx::new(20);
        let r = verify(IdentityKind::Eds, 1, 2, &sym(Axioms::Extended), &ctx).unwrap();
        assert_eq!(r.status(), Some(Status::ExactZero));
    }

    #[test]
    fn shuffle_residual_is_its_row() {
        let ctx = RealCtx::new(20);
        let r = verify(IdentityKind::Shuffle, 2, 3, &sym(Axioms::Strict), &ctx).unwrap();
        let cert = r.certificate().unwrap();
        assert_eq!(cert.len(), 1);
        assert_eq!(cert.coef(RelationId::E(2, 3)), BigRat::one());
    }

    #[test]
    fn prima_numeric() {
        let ctx = RealCtx::new(50);
        let r = verify(IdentityKind::Prima, 2, 3, &VerifyOptions::numeric(), &ctx).unwrap();
        let num = r.numeric.unwrap();
        assert!(num.passed && num.achieved);
        assert!(num.max_residual_f64() < 1e-40);
    }

    #[test]
    fn domains_are_enforced() {
        let ctx = RealCtx::new(20);
        let o = sym(Axioms::Extended);
        assert!(matches!(
            verify(IdentityKind::Thm1, 1, 3, &o, &ctx),
            Err(Error::DomainError { .. })
        ));
        assert!(verify(IdentityKind::SumFormula, 2, 0, &o, &ctx).is_err());
        assert!(verify(IdentityKind::PartialFraction, 1, 1, &o, &ctx).is_err());
        assert!(verify_partial_fraction(0, 1, 1, 1).is_err());
        assert!(verify_key_numeric(1, 2, 10, &ctx).is_err());
    }

    #[test]
    fn too_few_samples_rejected() {
        let ctx = RealCtx::new(20);
        let opts = VerifyOptions {
            t_samples: vec![BigRat::zero(), BigRat::one(), BigRat::one()],
            ..Default::default()
        };
        assert!(verify(IdentityKind::Harmonic, 2, 2, &opts, &ctx).is_err());
    }

    #[test]
    fn partial_fraction_examples() {
        let quarter = BigRat::new(1, 4);
        for (n, m, x, a, v) in [
            (1, 1, 1, 1, BigRat::new(1, 2)),
            (2, 1, 1, 1, quarter.clone()),
            (2, 2, 1, 1, quarter.clone()),
        ] {
            let r = verify_partial_fraction(n, m, x, a).unwrap();
            let e = r.exact.as_ref().unwrap();
            assert!(e.equal);
            assert_eq!(e.lhs, v);
            assert!(r.passed());
        }
        let e = verify_partial_fraction(1, 2, 1, 1).unwrap().exact.unwrap();
        assert_eq!(e.printed_lhs, quarter);
        assert_eq!(e.rhs, BigRat::new(1, 2));
        assert!(!e.printed_equal);
    }

    #[test]
    fn key_sums_match_direct_summation() {
        let ctx = RealCtx::new(30);
        // s_1 + s_2 for (m,n) = (2,3), summed directly with an integral tail.
        let mut direct = 0.0f64;
        for a in 1..=2u64 {
            for x in 1..200_000u64 {
                let xf = x as f64;
                direct += 1.0 / (xf * xf * (xf + a as f64).powi(3));
            }
        }
        let got = key_partial_sums(2, 3, &[2], &ctx)[0].to_f64();
        assert!((got - direct).abs() < 1e-12, "{got} vs {direct}");
    }

    #[test]
    fn key_numeric_two_two() {
        let ctx = RealCtx::new(30);
        let r = verify_key_numeric(2, 2, 1000, &ctx).unwrap();
        let num = r.numeric.as_ref().unwrap();
        assert!(num.passed, "{r:?}");
        assert!(num.max_residual_f64() < 1e-2);
    }

    #[test]
    fn report_json_round_trip() {
        let ctx = RealCtx::new(20);
        let opts = VerifyOptions {
            timings: true,
            ..Default::default()
        };
        for r in [
            verify(IdentityKind::Thm1, 2, 3, &opts, &ctx).unwrap(),
            verify(IdentityKind::Gkz, 5, 0, &opts, &ctx).unwrap(),
            verify_partial_fraction(2, 3, 4, 5).unwrap(),
            verify_key_numeric(2, 3, 50, &ctx).unwrap(),
        ] {
            let json = serde_json::to_string(&r).unwrap();
            let back: Report = serde_json::from_str(&json).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn batch_is_sorted_and_complete() {
        let ctx = RealCtx::new(20);
        let s = batch(
            6,
            &[IdentityKind::Tertia, IdentityKind::Thm1],
            &sym(Axioms::Extended),
            &ctx,
        )
        .unwrap();
        // pairs (m,n) with m,n ≥ 2 and m+n ≤ 6: 1 + 2 + 3 = 6 per kind
        assert_eq!(s.total, 12);
        assert!(s.all_passed());
        let keys: Vec<_> = s.reports.iter().map(Report::sort_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(batch(3, &[IdentityKind::Thm1], &sym(Axioms::Extended), &ctx).is_err());
    }
}
