//! `dzeta`: evaluate double zeta values, verify identities, dump relation
//! sets and run regularization fits.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or domain
//! error, 3 requested precision not achieved.

mod render;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dzeta_core::numerics::{default_schedule, fit_reference, reg_fit, FitKind};
use dzeta_core::verify::{self, verify_key_numeric, verify_partial_fraction, Verifier};
use dzeta_core::{algebra, Axioms, BigRat, FormalValue, IdentityKind, Mode, RealCtx, RelationSet, Rule};

use render::{EvalOutput, FitOutput, Format};

#[derive(Parser, Debug)]
#[command(name = "dzeta", version, about = "Exact and numeric verification of double zeta identities")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Decimal digits of working precision (≥ 15).
    #[arg(long, global = true, env = "DZETA_PREC", default_value_t = 50)]
    prec: u32,
    #[arg(long, global = true, default_value = "extended", value_parser = parse_axioms)]
    axioms: Axioms,
    /// Comma-separated values of T for numeric checks (rationals allowed).
    #[arg(long, global = true, default_value = "0,1,2", value_parser = parse_samples)]
    t_samples: Samples,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Which engines to run for verifications.
    #[arg(long, global = true, default_value = "both", value_parser = parse_mode)]
    mode: Mode,
    /// Worker threads for batch runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Omit wall-clock timings, making output byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timings: bool,
    /// Override the Euler–Maclaurin cutoff (default max(50, prec)).
    #[arg(long, global = true)]
    cutoff: Option<u64>,
}

#[derive(Debug, Clone)]
struct Samples(Vec<BigRat>);

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a single, double, star or regularized value.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
    /// Verify one identity.
    Verify(VerifyArgs),
    /// Verify every identity of the given kinds up to a maximum weight.
    VerifyAll {
        #[arg(long)]
        max_weight: u32,
        /// Comma-separated identity kinds.
        #[arg(long, value_delimiter = ',', value_parser = parse_kind, default_value = "thm1,secunda,tertia")]
        identities: Vec<IdentityKind>,
    },
    /// Dump the relation set of a weight.
    Relations {
        #[arg(long)]
        weight: u32,
        /// Include the echelon basis with its pivots.
        #[arg(long)]
        print_basis: bool,
    },
    /// Fit divergent partial sums against their logarithmic growth.
    Fit {
        #[arg(long, value_enum)]
        kind: FitKindArg,
        #[arg(long, default_value_t = 2)]
        a: u32,
        /// Largest N for the harmonic kind.
        #[arg(long, default_value_t = 1_000_000.0)]
        max_n: f64,
        /// Smallest ε for the abel kind.
        #[arg(long, default_value_t = 1e-5)]
        min_eps: f64,
        /// Number of sample points.
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
}

#[derive(Subcommand, Debug)]
enum EvalTarget {
    /// ζ(w), w ≥ 2.
    Single { w: u32 },
    /// ζ(a,b), b ≥ 2.
    Double { a: u32, b: u32 },
    /// ζ⋆(a,b) = ζ(a,b) + ζ(a+b).
    Star { a: u32, b: u32 },
    /// Regularized ζ(a,b) as a polynomial in T.
    Reg {
        a: u32,
        b: u32,
        #[arg(default_value = "stuffle", value_parser = parse_rule)]
        flavor: Rule,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_parser = parse_kind)]
    kind: IdentityKind,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Weight, for gkz and sum_formula.
    #[arg(long, alias = "k")]
    weight: Option<u32>,
    /// Partial fraction variable.
    #[arg(long)]
    x: Option<u64>,
    /// Partial fraction shift.
    #[arg(long)]
    a: Option<u64>,
    /// Upper summation limit A for key_numeric.
    #[arg(long, default_value_t = 1000)]
    limit: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FitKindArg {
    Harmonic,
    Abel,
}

fn parse_axioms(s: &str) -> Result<Axioms, String> {
    s.parse().map_err(|e: dzeta_core::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: dzeta_core::Error| e.to_string())
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    s.parse().map_err(|e: dzeta_core::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<IdentityKind, String> {
    s.parse().map_err(|e: dzeta_core::Error| e.to_string())
}

fn parse_samples(s: &str) -> Result<Samples, String> {
    s.split(',')
        .map(|t| t.trim().parse::<BigRat>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .map(Samples)
}

/// How a command ended, ordered by precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Passed,
    Failed,
    PrecisionNotAchieved,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Passed => 0,
            Outcome::Failed => 1,
            Outcome::PrecisionNotAchieved => 3,
        }
    }
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn context(cfg: &Config) -> RealCtx {
    let ctx = RealCtx::new(cfg.prec);
    match cfg.cutoff {
        Some(k) => ctx.with_cutoff(k),
        None => ctx,
    }
}

fn options(cfg: &Config, key_limit: u64) -> verify::VerifyOptions {
    verify::VerifyOptions {
        mode: cfg.mode,
        axioms: cfg.axioms,
        t_samples: cfg.t_samples.0.clone(),
        timings: !cfg.no_timings,
        key_limit,
    }
}

fn validate(cfg: &Config) -> Result<(), UsageError> {
    if cfg.prec < 15 {
        return Err(UsageError(format!("--prec must be at least 15, got {}", cfg.prec)));
    }
    let mut distinct = cfg.t_samples.0.clone();
    distinct.sort();
    distinct.dedup();
    if cfg.mode.numeric() && distinct.len() < 3 {
        return Err(UsageError(format!(
            "numeric checks need at least 3 distinct T samples, got {}",
            distinct.len()
        )));
    }
    if cfg.jobs == Some(0) {
        return Err(UsageError("--jobs must be positive".into()));
    }
    Ok(())
}

fn require(v: Option<u32>, flag: &str, kind: IdentityKind) -> Result<u32, UsageError> {
    v.ok_or_else(|| UsageError(format!("{kind} needs --{flag}")))
}

fn run(cli: &Cli) -> Result<(String, Outcome), UsageError> {
    let cfg = &cli.config;
    validate(cfg)?;
    let fmt = cfg.format;
    match &cli.command {
        Command::Eval { target } => {
            let ctx = context(cfg);
            let out = eval(target, &ctx)?;
            let outcome = if out.achieved {
                Outcome::Passed
            } else {
                Outcome::PrecisionNotAchieved
            };
            Ok((render::eval(&out, fmt)?, outcome))
        }
        Command::Verify(args) => {
            let ctx = context(cfg);
            let report = match args.kind {
                IdentityKind::PartialFraction => {
                    let n = require(args.n, "n", args.kind)?;
                    let m = require(args.m, "m", args.kind)?;
                    let x = args.x.ok_or_else(|| UsageError("partial_fraction needs --x".into()))?;
                    let a = args.a.ok_or_else(|| UsageError("partial_fraction needs --a".into()))?;
                    verify_partial_fraction(n, m, x, a)?
                }
                IdentityKind::KeyNumeric => {
                    let m = require(args.m, "m", args.kind)?;
                    let n = require(args.n, "n", args.kind)?;
                    verify_key_numeric(m, n, args.limit, &ctx)?
                }
                kind if kind.is_weight_only() => {
                    let w = require(args.weight.or(args.m), "weight", kind)?;
                    Verifier::new(options(cfg, args.limit), &ctx).verify(kind, w, 0)?
                }
                kind => {
                    let m = require(args.m, "m", kind)?;
                    let n = require(args.n, "n", kind)?;
                    Verifier::new(options(cfg, args.limit), &ctx).verify(kind, m, n)?
                }
            };
            let mut report = report;
            if cfg.no_timings {
                report.ms = None;
            }
            let outcome = summarize(std::slice::from_ref(&report));
            Ok((render::report(&report, fmt)?, outcome))
        }
        Command::VerifyAll {
            max_weight,
            identities,
        } => {
            let ctx = context(cfg);
            let verifier = Verifier::new(options(cfg, 1000), &ctx);
            let summary = match cfg.jobs {
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()?
                    .install(|| verifier.batch(*max_weight, identities))?,
                None => verifier.batch(*max_weight, identities)?,
            };
            let outcome = summarize(&summary.reports);
            Ok((render::batch(&summary, fmt)?, outcome))
        }
        Command::Relations {
            weight,
            print_basis,
        } => {
            let set = RelationSet::build(*weight, cfg.axioms)?;
            Ok((render::relations(&set, *print_basis, fmt)?, Outcome::Passed))
        }
        Command::Fit {
            kind,
            a,
            max_n,
            min_eps,
            points,
        } => {
            let ctx = context(cfg);
            let kind = match kind {
                FitKindArg::Harmonic => FitKind::Harmonic,
                FitKindArg::Abel => FitKind::Abel,
            };
            let limit = match kind {
                FitKind::Harmonic => *max_n,
                FitKind::Abel => *min_eps,
            };
            let schedule = default_schedule(kind, limit, *points);
            let depths: &[u32] = if *a == 1 { &[1, 2] } else { &[2] };
            let mut fits = Vec::new();
            for &depth in depths {
                let fit = reg_fit(kind, *a, depth, &ctx, &schedule)?;
                let reference = fit_reference(kind, *a, depth, &ctx)?;
                fits.push(FitOutput::new(fit, reference));
            }
            Ok((render::fits(&fits, fmt)?, Outcome::Passed))
        }
    }
}

fn summarize(reports: &[verify::Report]) -> Outcome {
    reports
        .iter()
        .map(|r| {
            if r.precision_failed() {
                Outcome::PrecisionNotAchieved
            } else if r.passed() {
                Outcome::Passed
            } else {
                Outcome::Failed
            }
        })
        .max()
        .unwrap_or(Outcome::Passed)
}

fn eval(target: &EvalTarget, ctx: &RealCtx) -> Result<EvalOutput, UsageError> {
    let (label, value): (String, FormalValue) = match *target {
        EvalTarget::Single { w } => (format!("ζ({w})"), algebra::single(w)?),
        EvalTarget::Double { a, b } => (format!("ζ({a},{b})"), algebra::double(a, b)?),
        EvalTarget::Star { a, b } => (format!("ζ⋆({a},{b})"), algebra::star(a, b)?),
        EvalTarget::Reg { a, b, flavor } => (
            format!("ζ_{flavor}({a},{b})"),
            algebra::reg_double(a, b, flavor)?,
        ),
    };
    Ok(EvalOutput::evaluate(label, &value, ctx))
}

fn emit(text: &str, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((text, outcome)) => {
            if let Err(e) = emit(&text, cli.config.out.as_ref()) {
                eprintln!("dzeta: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code())
        }
        Err(UsageError(msg)) => {
            eprintln!("dzeta: {msg}");
            ExitCode::from(2)
        }
    }
}
