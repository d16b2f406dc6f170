//! Symbolic zeta values in canonical normal form.
//!
//! A [`FormalValue`] is a finite rational combination of monomials
//! `T^e · atom`, where an atom is the unit, a convergent single zeta value
//! `ζ(w)` (w ≥ 2) or a convergent double zeta value `ζ(a,b)` (b ≥ 2).
//!
//! Regularized values are never stored as atoms. A divergent regularized
//! double `ζ_*(a,1)` or `ζ_Ш(a,1)` is expanded on construction into
//! T-monomials, singles and convergent doubles, and products of single zeta
//! values are linearized immediately with the stuffle or shuffle rule. Two
//! expressions that agree as polynomials in these atoms therefore compare
//! equal structurally.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{binom, BigRat};

/// A convergent zeta atom. The derived order (kind, then arguments) is the
/// pivot order used by the relation engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Unit,
    Single(u32),
    Double(u32, u32),
}

impl Atom {
    pub fn weight(&self) -> u32 {
        match *self {
            Atom::Unit => 0,
            Atom::Single(w) => w,
            Atom::Double(a, b) => a + b,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Atom::Unit => "unit",
            Atom::Single(_) => "single",
            Atom::Double(..) => "double",
        }
    }

    fn args(&self) -> Vec<u32> {
        match *self {
            Atom::Unit => vec![],
            Atom::Single(w) => vec![w],
            Atom::Double(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Unit => write!(f, "1"),
            Atom::Single(w) => write!(f, "ζ({w})"),
            Atom::Double(a, b) => write!(f, "ζ({a},{b})"),
        }
    }
}

/// `T^t · atom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub t: u32,
    pub atom: Atom,
}

impl Mono {
    pub fn new(t: u32, atom: Atom) -> Self {
        Mono { t, atom }
    }

    pub fn atom(atom: Atom) -> Self {
        Mono { t: 0, atom }
    }

    pub fn weight(&self) -> u32 {
        self.t + self.atom.weight()
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.t, self.atom) {
            (0, a) => write!(f, "{a}"),
            (1, Atom::Unit) => write!(f, "T"),
            (t, Atom::Unit) => write!(f, "T^{t}"),
            (1, a) => write!(f, "T·{a}"),
            (t, a) => write!(f, "T^{t}·{a}"),
        }
    }
}

/// Linearization rule for a product of two single zeta values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Harmonic product (`*`), from merging the summation indices.
    Stuffle,
    /// Shuffle product (`Ш`), from the iterated integral representation.
    Shuffle,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Stuffle => "stuffle",
            Rule::Shuffle => "shuffle",
        })
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stuffle" | "harmonic" | "st" => Ok(Rule::Stuffle),
            "shuffle" | "sh" => Ok(Rule::Shuffle),
            _ => Err(Error::Parse(format!("unknown rule '{s}'"))),
        }
    }
}

/// Exact rational combination of monomials. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct FormalValue {
    terms: BTreeMap<Mono, BigRat>,
}

impl FormalValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::term(Mono::atom(Atom::Unit), BigRat::one())
    }

    /// `T^e`.
    pub fn t_power(e: u32) -> Self {
        Self::term(Mono::new(e, Atom::Unit), BigRat::one())
    }

    pub fn term(mono: Mono, coef: BigRat) -> Self {
        let mut v = Self::zero();
        v.add_term(mono, &coef);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, BigRat)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (m, c) in iter {
            v.add_term(m, &c);
        }
        v
    }

    pub fn add_term(&mut self, mono: Mono, coef: &BigRat) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_default();
        *entry += coef;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &FormalValue, scale: &BigRat) {
        if scale.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(*m, &(c * scale));
        }
    }

    pub fn scale(&self, k: &BigRat) -> FormalValue {
        let mut out = FormalValue::zero();
        out.add_scaled(self, k);
        out
    }

    /// Multiply every monomial by `T^e`.
    pub fn mul_t(&self, e: u32) -> FormalValue {
        FormalValue {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Mono::new(m.t + e, m.atom), c.clone()))
                .collect(),
        }
    }

    pub fn coeff(&self, mono: &Mono) -> BigRat {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &BigRat)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Mono, &BigRat)> {
        self.terms.iter().next()
    }

    /// Common weight of all monomials; zero for the zero value.
    pub fn weight(&self) -> Result<u32> {
        let mut it = self.terms.keys().map(Mono::weight);
        let Some(w) = it.next() else { return Ok(0) };
        match it.find(|&x| x != w) {
            Some(other) => Err(Error::NotHomogeneous(w, other)),
            None => Ok(w),
        }
    }

    /// Highest power of T present (0 for the zero value).
    pub fn t_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.t).max().unwrap_or(0)
    }

    pub fn is_t_free(&self) -> bool {
        self.terms.keys().all(|m| m.t == 0)
    }

    /// Coefficient of `T^e` as a T-free value.
    pub fn t_coefficient(&self, e: u32) -> FormalValue {
        FormalValue {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.t == e)
                .map(|(m, c)| (Mono::atom(m.atom), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for FormalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.atom == Atom::Unit && m.t == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FormalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalValue({self})")
    }
}

impl Add<&FormalValue> for &FormalValue {
    type Output = FormalValue;
    fn add(self, rhs: &FormalValue) -> FormalValue {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigRat::one());
        out
    }
}

impl Add for FormalValue {
    type Output = FormalValue;
    fn add(self, rhs: FormalValue) -> FormalValue {
        &self + &rhs
    }
}

impl Sub<&FormalValue> for &FormalValue {
    type Output = FormalValue;
    fn sub(self, rhs: &FormalValue) -> FormalValue {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRat::one());
        out
    }
}

impl Sub for FormalValue {
    type Output = FormalValue;
    fn sub(self, rhs: FormalValue) -> FormalValue {
        &self - &rhs
    }
}

impl Neg for &FormalValue {
    type Output = FormalValue;
    fn neg(self) -> FormalValue {
        self.scale(&-BigRat::one())
    }
}

impl Neg for FormalValue {
    type Output = FormalValue;
    fn neg(self) -> FormalValue {
        -&self
    }
}

impl Mul<&FormalValue> for &BigRat {
    type Output = FormalValue;
    fn mul(self, rhs: &FormalValue) -> FormalValue {
        rhs.scale(self)
    }
}

impl std::iter::Sum for FormalValue {
    fn sum<I: Iterator<Item = FormalValue>>(iter: I) -> FormalValue {
        iter.fold(FormalValue::zero(), |mut acc, v| {
            acc.add_scaled(&v, &BigRat::one());
            acc
        })
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    kind: String,
    args: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    t: u32,
    atom: AtomJson,
    coef: BigRat,
}

impl Serialize for FormalValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries: Vec<(u32, &str, Vec<u32>, &BigRat)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.t, m.atom.kind(), m.atom.args(), c))
            .collect();
        entries.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
        s.collect_seq(entries.into_iter().map(|(t, kind, args, coef)| TermJson {
            t,
            atom: AtomJson {
                kind: kind.to_string(),
                args,
            },
            coef: coef.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for FormalValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<TermJson>::deserialize(d)?;
        let mut v = FormalValue::zero();
        for term in raw {
            let atom = match (term.atom.kind.as_str(), term.atom.args.as_slice()) {
                ("unit", []) => Atom::Unit,
                ("single", &[w]) if w >= 2 => Atom::Single(w),
                ("double", &[a, b]) if a >= 1 && b >= 2 => Atom::Double(a, b),
                (k, args) => {
                    return Err(D::Error::custom(format!("invalid atom {k} {args:?}")));
                }
            };
            v.add_term(Mono::new(term.t, atom), &term.coef);
        }
        Ok(v)
    }
}

/// `ζ(w)`, w ≥ 2.
pub fn single(w: u32) -> Result<FormalValue> {
    if w < 2 {
        return Err(Error::DivergentValue(format!(
            "ζ({w}) is divergent; use reg_single"
        )));
    }
    Ok(FormalValue::term(Mono::atom(Atom::Single(w)), BigRat::one()))
}

/// Regularized single value: `T` for m = 1, otherwise `ζ(m)`.
/// Harmonic and shuffle regularization agree in depth one.
pub fn reg_single(m: u32) -> Result<FormalValue> {
    match m {
        0 => Err(Error::DomainError {
            kind: "reg_single".into(),
            detail: "m must be ≥ 1".into(),
        }),
        1 => Ok(FormalValue::t_power(1)),
        _ => single(m),
    }
}

/// Convergent `ζ(a,b) = Σ_{k1<k2} k1^-a k2^-b`, a ≥ 1, b ≥ 2.
pub fn double(a: u32, b: u32) -> Result<FormalValue> {
    if b < 2 {
        return Err(Error::DivergentValue(format!(
            "ζ({a},{b}) is divergent; use reg_double"
        )));
    }
    if a < 1 {
        return Err(Error::DomainError {
            kind: "double".into(),
            detail: format!("first index must be ≥ 1, got {a}"),
        });
    }
    Ok(FormalValue::term(Mono::atom(Atom::Double(a, b)), BigRat::one()))
}

/// `ζ⋆(a,b) = ζ(a,b) + ζ(a+b)`.
pub fn star(a: u32, b: u32) -> Result<FormalValue> {
    Ok(double(a, b)? + single(a + b)?)
}

/// Regularized double value, expanded into normal form.
pub fn reg_double(a: u32, b: u32, rule: Rule) -> Result<FormalValue> {
    if a < 1 || b < 1 {
        return Err(Error::DomainError {
            kind: "reg_double".into(),
            detail: format!("indices must be ≥ 1, got ({a},{b})"),
        });
    }
    if b >= 2 {
        return double(a, b);
    }
    let half = BigRat::new(1, 2);
    if a == 1 {
        // ζ_*(1,1) = (T² − ζ(2))/2, ζ_Ш(1,1) = T²/2
        let mut v = FormalValue::t_power(2).scale(&half);
        if rule == Rule::Stuffle {
            v.add_scaled(&single(2)?, &-&half);
        }
        return Ok(v);
    }
    // ζ_reg(a)·T minus the remaining terms of the corresponding product
    // expansion of ζ(a)·ζ_reg(1).
    let mut v = single(a)?.mul_t(1) - double(1, a)?;
    match rule {
        Rule::Stuffle => v = v - single(a + 1)?,
        Rule::Shuffle => {
            for i in 1..a {
                v = v - double(a - i, 1 + i)?;
            }
        }
    }
    Ok(v)
}

/// Linearized `ζ_reg(m) · ζ_reg(n)` under the given product rule.
pub fn product_singles(m: u32, n: u32, rule: Rule) -> Result<FormalValue> {
    if m < 1 || n < 1 {
        return Err(Error::DomainError {
            kind: "product_singles".into(),
            detail: format!("indices must be ≥ 1, got ({m},{n})"),
        });
    }
    match rule {
        Rule::Stuffle => {
            Ok(reg_double(m, n, rule)? + reg_double(n, m, rule)? + reg_single(m + n)?)
        }
        Rule::Shuffle => {
            let mut v = FormalValue::zero();
            for i in 0..m {
                let c = binom((n + i - 1) as u64, i as u64);
                v.add_scaled(&reg_double(m - i, n + i, rule)?, &c);
            }
            for j in 0..n {
                let c = binom((m + j - 1) as u64, j as u64);
                v.add_scaled(&reg_double(n - j, m + j, rule)?, &c);
            }
            Ok(v)
        }
    }
}

/// Shorthand used across the crate and its tests: `ζ(args)` as a one-term value.
pub fn z(args: &[u32]) -> FormalValue {
    match *args {
        [] => FormalValue::unit(),
        [w] => single(w).expect("convergent single"),
        [a, b] => double(a, b).expect("convergent double"),
        _ => panic!("depth > 2 is not supported"),
    }
}
