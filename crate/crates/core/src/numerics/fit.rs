//! Regression fits of divergent partial sums against their log-divergence.
//!
//! Harmonic kind: `Σ_{0<k1<k2<N} k1^-a k2^-1 ~ b0 + b1 L + b2 L²` with
//! `L = log N + γ`. Abel kind: `Σ_{0<k1<k2} (1−ε)^{k2} k1^-a k2^-1` with
//! `L = −log ε`. Depth one uses the single sums `Σ_{k<N} k^-a` and
//! `Σ (1−ε)^k k^-a`. Subleading corrections (`1/N`, `ε`, times powers of L)
//! are fitted as nuisance columns and discarded.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::RealCtx;
use crate::algebra::{self, Rule};
use crate::error::{Error, Result};
use crate::exact::BigRat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    Harmonic,
    Abel,
}

impl fmt::Display for FitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitKind::Harmonic => "harmonic",
            FitKind::Abel => "abel",
        })
    }
}

impl FromStr for FitKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "harmonic" => Ok(FitKind::Harmonic),
            "abel" => Ok(FitKind::Abel),
            _ => Err(Error::Parse(format!("unknown fit kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: FitKind,
    pub a: u32,
    pub depth: u32,
    /// Coefficient of `L^0`.
    pub constant: f64,
    /// Coefficient of `L^1`.
    pub slope: f64,
    /// Coefficient of `L^2`, only fitted for the word (1,1).
    pub quadratic: Option<f64>,
    pub points: usize,
    pub rms_residual: f64,
}

/// Log-spaced sample points: N from 10^3 to `limit` for the harmonic kind,
/// ε from 10^-2 down to `limit` for the Abel kind.
pub fn default_schedule(kind: FitKind, limit: f64, points: usize) -> Vec<f64> {
    let (lo, hi) = match kind {
        FitKind::Harmonic => (1e3f64.min(limit), limit),
        FitKind::Abel => (limit, 1e-2f64.max(limit)),
    };
    let points = points.max(1);
    let mut out: Vec<f64> = (0..points)
        .map(|i| {
            let t = if points == 1 { 1.0 } else { i as f64 / (points - 1) as f64 };
            let v = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
            match kind {
                FitKind::Harmonic => v.round(),
                FitKind::Abel => v,
            }
        })
        .collect();
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite schedule"));
    out.dedup();
    out
}

/// Compensated running sum.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Summand weights `w_k`: `k^-a` in depth one, `H_{k−1}^{(a)}/k` in depth two.
struct Weights {
    a: i32,
    depth: u32,
    inner: Neumaier,
}

impl Weights {
    fn next(&mut self, k: u64) -> f64 {
        let kf = k as f64;
        if self.depth == 1 {
            return kf.powi(-self.a);
        }
        let w = self.inner.value() / kf;
        self.inner.add(kf.powi(-self.a));
        w
    }
}

fn harmonic_samples(a: u32, depth: u32, schedule: &[f64]) -> Vec<f64> {
    let ns: Vec<u64> = schedule.iter().map(|&n| n as u64).collect();
    let max = ns.iter().copied().max().unwrap_or(0);
    let mut weights = Weights {
        a: a as i32,
        depth,
        inner: Neumaier::default(),
    };
    let mut acc = Neumaier::default();
    let mut out = vec![0.0; ns.len()];
    for k in 1..=max {
        for (slot, &n) in out.iter_mut().zip(&ns) {
            if n == k {
                *slot = acc.value();
            }
        }
        acc.add(weights.next(k));
    }
    out
}

fn abel_samples(a: u32, depth: u32, schedule: &[f64]) -> Vec<f64> {
    let mut weights = Weights {
        a: a as i32,
        depth,
        inner: Neumaier::default(),
    };
    let ratios: Vec<f64> = schedule.iter().map(|e| 1.0 - e).collect();
    let mut powers = vec![1.0f64; schedule.len()];
    let mut sums = vec![Neumaier::default(); schedule.len()];
    let mut k: u64 = 1;
    loop {
        let w = weights.next(k);
        let mut active = false;
        for ((p, r), s) in powers.iter_mut().zip(&ratios).zip(sums.iter_mut()) {
            if *p < 1e-20 {
                continue;
            }
            *p *= r;
            s.add(*p * w);
            active = true;
        }
        if !active {
            break;
        }
        k += 1;
    }
    sums.iter().map(Neumaier::value).collect()
}

/// Least-squares fit of the regularization asymptotics.
pub fn reg_fit(
    kind: FitKind,
    a: u32,
    depth: u32,
    ctx: &RealCtx,
    schedule: &[f64],
) -> Result<FitResult> {
    if a < 1 || !(1..=2).contains(&depth) {
        return Err(Error::DomainError {
            kind: "reg_fit".into(),
            detail: format!("need a ≥ 1 and depth 1 or 2, got a={a}, depth={depth}"),
        });
    }
    if schedule.len() < 3 {
        return Err(Error::ScheduleTooShort(schedule.len()));
    }
    let gamma = ctx.gamma().to_f64();
    let (ys, ls, us): (Vec<f64>, Vec<f64>, Vec<f64>) = match kind {
        FitKind::Harmonic => {
            if schedule.iter().any(|&n| n < 2.0) {
                return Err(Error::DomainError {
                    kind: "reg_fit".into(),
                    detail: "harmonic schedule needs N ≥ 2".into(),
                });
            }
            let ys = harmonic_samples(a, depth, schedule);
            let ls = schedule.iter().map(|n| n.ln() + gamma).collect();
            let us = schedule.iter().map(|n| 1.0 / n).collect();
            (ys, ls, us)
        }
        FitKind::Abel => {
            if schedule.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
                return Err(Error::DomainError {
                    kind: "reg_fit".into(),
                    detail: "abel schedule needs 0 < ε < 1".into(),
                });
            }
            let ys = abel_samples(a, depth, schedule);
            let ls = schedule.iter().map(|e| -e.ln()).collect();
            (ys, ls, schedule.to_vec())
        }
    };
    let quad = a == 1 && depth == 2;
    let max_pow = if quad { 2 } else { 1 };
    // Leading columns L^0..L^max_pow, then nuisance u·L^0..u·L^max_pow.
    let mut columns: Vec<Box<dyn Fn(usize) -> f64>> = Vec::new();
    for p in 0..=max_pow {
        let ls = ls.clone();
        columns.push(Box::new(move |i| ls[i].powi(p)));
    }
    for p in 0..=max_pow {
        let (ls, us) = (ls.clone(), us.clone());
        columns.push(Box::new(move |i| us[i] * ls[i].powi(p)));
    }
    columns.truncate(ys.len());
    let rows = ys.len();
    let mut design = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j](i));
    let scales: Vec<f64> = (0..design.ncols())
        .map(|j| design.column(j).amax().max(f64::MIN_POSITIVE))
        .collect();
    for (j, s) in scales.iter().enumerate() {
        design.column_mut(j).unscale_mut(*s);
    }
    let rhs = DVector::from_vec(ys.clone());
    let svd = design.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-15)
        .map_err(|e| Error::Numeric(format!("least squares failed: {e}")))?;
    let resid = &design * &sol - &rhs;
    let coef: Vec<f64> = sol.iter().zip(&scales).map(|(c, s)| c / s).collect();
    Ok(FitResult {
        kind,
        a,
        depth,
        constant: coef[0],
        slope: coef[1],
        quadratic: quad.then(|| coef[2]),
        points: rows,
        rms_residual: (resid.norm_squared() / rows as f64).sqrt(),
    })
}

/// Symbolic prediction `[c0, c1, c2]` for the coefficients of `T^0, T^1, T^2`:
/// `ζ_*(a)` / `ζ_*(a,1)` for the harmonic kind, `ζ_Ш(a)` / `ζ_Ш(a,1)` for Abel.
pub fn fit_reference(kind: FitKind, a: u32, depth: u32, ctx: &RealCtx) -> Result<[f64; 3]> {
    let rule = match kind {
        FitKind::Harmonic => Rule::Stuffle,
        FitKind::Abel => Rule::Shuffle,
    };
    let v = match depth {
        1 => algebra::reg_single(a)?,
        _ => algebra::reg_double(a, 1, rule)?,
    };
    let zero = BigRat::zero();
    Ok([0, 1, 2].map(|e| ctx.eval_formal_at(&v.t_coefficient(e), &zero).to_f64()))
}
