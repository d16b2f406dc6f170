//! Generating polynomials of double zeta values.
//!
//! `D_k(X,Y) = Σ_{i=1}^{k-1} ζ_Ш(k−i, i) X^{i−1} Y^{k−i−1}` and
//! `Q_k(X,Y) = Σ_{i=1}^{k-1} ζ_Ш(i) ζ_Ш(k−i) X^{i−1} Y^{k−i−1}`, with the
//! coefficient identity `D_k(X+Y, Y) + D_k(X+Y, X) = Q_k(X, Y)` and the
//! construction of `P(m,n)`.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::{self, FormalValue, Rule};
use crate::error::{Error, Result};
use crate::exact::{binom, BigRat};

/// Bivariate polynomial in X, Y with [`FormalValue`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), FormalValue>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(i: u32, j: u32, value: FormalValue) -> Self {
        let mut p = Self::zero();
        p.add_at(i, j, &value, &BigRat::one());
        p
    }

    /// `coeff[i,j] += scale · value`, dropping entries that cancel.
    pub fn add_at(&mut self, i: u32, j: u32, value: &FormalValue, scale: &BigRat) {
        let entry = self.coeffs.entry((i, j)).or_default();
        entry.add_scaled(value, scale);
        if entry.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    /// Coefficient of `X^i Y^j`; the zero value when absent.
    pub fn coeff(&self, i: u32, j: u32) -> FormalValue {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &FormalValue)> {
        self.coeffs.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|(i, j)| i + j).max()
    }

    /// Linear change of variables `X ← aX + bY`, `Y ← cX + dY`.
    pub fn substitute(&self, a: &BigRat, b: &BigRat, c: &BigRat, d: &BigRat) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), value) in &self.coeffs {
            // (aX + bY)^i = Σ_p C(i,p) a^p b^(i−p) X^p Y^(i−p)
            let left = binomial_expansion(a, b, i);
            let right = binomial_expansion(c, d, j);
            for (p, lc) in left.iter().enumerate() {
                if lc.is_zero() {
                    continue;
                }
                for (q, rc) in right.iter().enumerate() {
                    if rc.is_zero() {
                        continue;
                    }
                    let (p, q) = (p as u32, q as u32);
                    out.add_at(p + q, (i - p) + (j - q), value, &(lc * rc));
                }
            }
        }
        out
    }
}

/// Coefficients of `(uX + vY)^e` indexed by the power of X.
fn binomial_expansion(u: &BigRat, v: &BigRat, e: u32) -> Vec<BigRat> {
    (0..=e)
        .map(|p| binom(e as u64, p as u64) * u.pow(p as i32) * v.pow((e - p) as i32))
        .collect()
}

impl Add<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.coeffs {
            out.add_at(i, j, v, &BigRat::one());
        }
        out
    }
}

impl Sub<&BiPoly> for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), v) in &rhs.coeffs {
            out.add_at(i, j, v, &-BigRat::one());
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    i: u32,
    j: u32,
    value: FormalValue,
}

#[derive(Serialize, Deserialize)]
struct BiPolyJson {
    coeffs: Vec<CoeffJson>,
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BiPolyJson {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(i, j), v)| CoeffJson {
                    i,
                    j,
                    value: v.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BiPolyJson::deserialize(d)?;
        let mut p = BiPoly::zero();
        for c in raw.coeffs {
            p.add_at(c.i, c.j, &c.value, &BigRat::one());
        }
        Ok(p)
    }
}

fn need_k(k: u32, min: u32, what: &str) -> Result<()> {
    if k < min {
        return Err(Error::DomainError {
            kind: what.into(),
            detail: format!("k must be ≥ {min}, got {k}"),
        });
    }
    Ok(())
}

/// `D_k(X,Y)`; the coefficient at `(i−1, k−i−1)` is `ζ_Ш(k−i, i)`.
pub fn build_d(k: u32) -> Result<BiPoly> {
    need_k(k, 2, "build_D")?;
    let mut p = BiPoly::zero();
    for i in 1..k {
        let c = algebra::reg_double(k - i, i, Rule::Shuffle)?;
        p.add_at(i - 1, k - i - 1, &c, &BigRat::one());
    }
    Ok(p)
}

/// `Q_k(X,Y)` with each product `ζ_Ш(i)ζ_Ш(k−i)` linearized by stuffle.
pub fn build_q(k: u32) -> Result<BiPoly> {
    build_q_with(k, Rule::Stuffle)
}

/// `Q_k(X,Y)` with products linearized by the given rule.
pub fn build_q_with(k: u32, rule: Rule) -> Result<BiPoly> {
    need_k(k, 2, "build_Q")?;
    let mut p = BiPoly::zero();
    for i in 1..k {
        let c = algebra::product_singles(i, k - i, rule)?;
        p.add_at(i - 1, k - i - 1, &c, &BigRat::one());
    }
    Ok(p)
}

/// `D_k(X+Y, Y) + D_k(X+Y, X)`.
pub fn gkz_lhs(k: u32) -> Result<BiPoly> {
    let d = build_d(k)?;
    let (one, zero) = (BigRat::one(), BigRat::zero());
    Ok(&d.substitute(&one, &one, &zero, &one) + &d.substitute(&one, &one, &one, &zero))
}

/// Per-coefficient residuals of `D_k(X+Y,Y) + D_k(X+Y,X) − Q_k(X,Y)`.
///
/// The coefficient of `X^{r−1}Y^{s−1}` on the left is the shuffle expansion
/// of `ζ_Ш(r)ζ_Ш(s)`, so `Q_k` is linearized with the shuffle rule here.
/// Every residual is expected to be exactly zero.
pub fn check_gkz(k: u32) -> Result<Vec<((u32, u32), FormalValue)>> {
    check_gkz_with(k, Rule::Shuffle)
}

/// As [`check_gkz`], with `Q_k` linearized by `rule`. Under stuffle the
/// residual at `X^{r−1}Y^{s−1}` is the relation row `E(r,s)`.
pub fn check_gkz_with(k: u32, rule: Rule) -> Result<Vec<((u32, u32), FormalValue)>> {
    need_k(k, 3, "check_gkz")?;
    let diff = &gkz_lhs(k)? - &build_q_with(k, rule)?;
    Ok((0..=k - 2)
        .map(|i| ((i, k - 2 - i), diff.coeff(i, k - 2 - i)))
        .collect())
}

/// Coefficient of `X^{n−1}Y^{m−1}` in
/// `Q_{m+n}(X−Y, Y) − D_{m+n}(X, Y) − D_{m+n}(X, X−Y)`, with `Q` stuffle-linearized.
pub fn gkz_sub_residual(m: u32, n: u32) -> Result<FormalValue> {
    if m < 2 || n < 2 {
        return Err(Error::DomainError {
            kind: "gkz_sub".into(),
            detail: format!("need m,n ≥ 2, got ({m},{n})"),
        });
    }
    let k = m + n;
    let (one, zero, neg) = (BigRat::one(), BigRat::zero(), -BigRat::one());
    let q = build_q(k)?.substitute(&one, &neg, &zero, &one);
    let d = build_d(k)?;
    let d_sub = d.substitute(&one, &zero, &one, &neg);
    let (i, j) = (n - 1, m - 1);
    Ok(q.coeff(i, j) - d.coeff(i, j) - d_sub.coeff(i, j))
}

/// ```text
/// P(m,n) = Σ_{i<m} (−1)^i C(n+i−1,i) ζ(n+i) ζ_Ш(m−i)
///        + (−1)^m Σ_{j<n} C(m+j−1,j) {ζ(m+j) ζ_Ш(n−j) − ζ⋆(n−j, m+j)}
/// ```
///
/// with products linearized by stuffle.
pub fn build_p(m: u32, n: u32) -> Result<FormalValue> {
    if m < 2 || n < 2 {
        return Err(Error::DomainError {
            kind: "build_P".into(),
            detail: format!("need m,n ≥ 2, got ({m},{n})"),
        });
    }
    let mut p = FormalValue::zero();
    for i in 0..m {
        let c = BigRat::sign_pow(i) * binom((n + i - 1) as u64, i as u64);
        p.add_scaled(&algebra::product_singles(n + i, m - i, Rule::Stuffle)?, &c);
    }
    let outer = BigRat::sign_pow(m);
    for j in 0..n {
        let c = &outer * &binom((m + j - 1) as u64, j as u64);
        let term = algebra::product_singles(m + j, n - j, Rule::Stuffle)?
            - algebra::star(n - j, m + j)?;
        p.add_scaled(&term, &c);
    }
    Ok(p)
}
