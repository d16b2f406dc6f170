//! Relation rows at a fixed weight, exact echelonization and span membership.
//!
//! Two axiom families are generated:
//!
//! * `E(m,n)` for m, n ≥ 2: shuffle expansion minus stuffle expansion of
//!   `ζ(m)ζ(n)`;
//! * `S(w)` for w ≥ 3: `ζ(w) − Σ_{a=1}^{w−2} ζ(a, w−a)`, which in normal form
//!   is the comparison `ζ_Ш(w−1,1) − ζ_*(w−1,1)`.
//!
//! Membership answers carry a [`Certificate`] whose replay reproduces the
//! queried value exactly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{self, FormalValue, Mono, Rule};
use crate::error::{Error, Result};
use crate::exact::BigRat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    /// Extended double shuffle row for the product `ζ(m)ζ(n)`, m ≤ n.
    E(u32, u32),
    /// Sum formula / regularization comparison at weight w.
    S(u32),
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RelationId::E(m, n) => write!(f, "E({m},{n})"),
            RelationId::S(w) => write!(f, "S({w})"),
        }
    }
}

impl FromStr for RelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid relation id '{s}'"));
        let (tag, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let nums: Vec<u32> = inner
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (tag, nums.as_slice()) {
            ("E", &[m, n]) => Ok(RelationId::E(m, n)),
            ("S", &[w]) => Ok(RelationId::S(w)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for RelationId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RelationId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRow {
    pub id: RelationId,
    pub value: FormalValue,
}

/// Which axiom families span the relation space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axioms {
    /// `E` rows only.
    Strict,
    /// `E` and `S` rows.
    #[default]
    Extended,
}

impl fmt::Display for Axioms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axioms::Strict => "strict",
            Axioms::Extended => "extended",
        })
    }
}

impl FromStr for Axioms {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Axioms::Strict),
            "extended" => Ok(Axioms::Extended),
            _ => Err(Error::Parse(format!("unknown axiom set '{s}'"))),
        }
    }
}

pub fn row_e(m: u32, n: u32) -> Result<RelationRow> {
    if m < 2 || n < 2 {
        return Err(Error::DomainError {
            kind: "row_e".into(),
            detail: format!("E(m,n) needs m,n ≥ 2, got ({m},{n})"),
        });
    }
    let value = algebra::product_singles(m, n, Rule::Shuffle)?
        - algebra::product_singles(m, n, Rule::Stuffle)?;
    Ok(RelationRow {
        id: RelationId::E(m.min(n), m.max(n)),
        value,
    })
}

pub fn row_s(w: u32) -> Result<RelationRow> {
    if w < 3 {
        return Err(Error::DomainError {
            kind: "row_s".into(),
            detail: format!("S(w) needs w ≥ 3, got {w}"),
        });
    }
    let mut value = algebra::single(w)?;
    for a in 1..=w - 2 {
        value = value - algebra::double(a, w - a)?;
    }
    Ok(RelationRow {
        id: RelationId::S(w),
        value,
    })
}

/// A proof object: `Σ coef · row` equals the certified value.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Certificate(pub Vec<CertificateEntry>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub row: RelationId,
    pub coef: BigRat,
}

impl Certificate {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn coef(&self, id: RelationId) -> BigRat {
        self.0
            .iter()
            .find(|e| e.row == id)
            .map(|e| e.coef.clone())
            .unwrap_or_default()
    }

    /// Recompute `Σ coef · row` from freshly generated rows.
    pub fn replay(&self) -> Result<FormalValue> {
        let mut acc = FormalValue::zero();
        for e in &self.0 {
            let row = match e.row {
                RelationId::E(m, n) => row_e(m, n)?,
                RelationId::S(w) => row_s(w)?,
            };
            acc.add_scaled(&row.value, &e.coef);
        }
        Ok(acc)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| format!("{}*{}", e.row, e.coef)).collect();
        f.write_str(&parts.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(Certificate),
    /// The value reduced to a nonzero residue modulo the span.
    NotInSpan { residue: FormalValue },
}

impl Membership {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Membership::Member(c) => Some(c),
            Membership::NotInSpan { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
struct EchelonRow {
    pivot: Mono,
    /// Reduced row, pivot coefficient normalized to 1.
    value: FormalValue,
    /// Expression of `value` in terms of the original rows.
    combo: Vec<BigRat>,
}

#[derive(Debug, Clone)]
pub struct RelationSet {
    weight: u32,
    axioms: Axioms,
    rows: Vec<RelationRow>,
    echelon: Vec<EchelonRow>,
}

impl RelationSet {
    /// Rows `E(m,n)` with 2 ≤ m ≤ n, m + n = weight, then `S(weight)` when extended.
    pub fn build(weight: u32, axioms: Axioms) -> Result<RelationSet> {
        if weight < 3 {
            return Err(Error::DomainError {
                kind: "build_set".into(),
                detail: format!("weight must be ≥ 3, got {weight}"),
            });
        }
        let mut rows = Vec::new();
        for m in 2..=weight / 2 {
            rows.push(row_e(m, weight - m)?);
        }
        if axioms == Axioms::Extended {
            rows.push(row_s(weight)?);
        }
        Ok(Self::from_rows(weight, axioms, rows))
    }

    pub fn from_rows(weight: u32, axioms: Axioms, rows: Vec<RelationRow>) -> RelationSet {
        let n = rows.len();
        let mut echelon: Vec<EchelonRow> = Vec::new();
        for (idx, row) in rows.iter().enumerate() {
            let mut combo = vec![BigRat::zero(); n];
            combo[idx] = BigRat::one();
            let (value, combo) = reduce(&echelon, row.value.clone(), combo);
            let Some((&pivot, lead)) = value.leading() else {
                continue;
            };
            let inv = lead.recip();
            let value = value.scale(&inv);
            let combo = combo.iter().map(|c| c * &inv).collect();
            echelon.push(EchelonRow {
                pivot,
                value,
                combo,
            });
        }
        RelationSet {
            weight,
            axioms,
            rows,
            echelon,
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn axioms(&self) -> Axioms {
        self.axioms
    }

    pub fn rows(&self) -> &[RelationRow] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    pub fn pivots(&self) -> Vec<Mono> {
        self.echelon.iter().map(|e| e.pivot).collect()
    }

    /// Echelon basis rows (pivot-normalized).
    pub fn basis(&self) -> Vec<&FormalValue> {
        self.echelon.iter().map(|e| &e.value).collect()
    }

    pub fn member(&self, v: &FormalValue) -> Result<Membership> {
        if !v.is_t_free() {
            return Err(Error::NotTFree);
        }
        let w = v.weight()?;
        if !v.is_zero() && w != self.weight {
            return Err(Error::WeightMismatch {
                expected: self.weight,
                found: w,
            });
        }
        let n = self.rows.len();
        let (residue, combo) = reduce(&self.echelon, v.clone(), vec![BigRat::zero(); n]);
        if !residue.is_zero() {
            return Ok(Membership::NotInSpan { residue });
        }
        // reduce() computed v − Σ c_i e_i = 0 with combo = −Σ c_i combo_i.
        let cert = Certificate(
            self.rows
                .iter()
                .zip(combo)
                .filter(|(_, c)| !c.is_zero())
                .map(|(row, c)| CertificateEntry {
                    row: row.id,
                    coef: -c,
                })
                .collect(),
        );
        debug_assert_eq!(&self.replay(&cert), v, "certificate replay failed");
        Ok(Membership::Member(cert))
    }

    /// `Σ coef · row` using this set's stored rows.
    pub fn replay(&self, cert: &Certificate) -> FormalValue {
        let mut acc = FormalValue::zero();
        for e in &cert.0 {
            if let Some(row) = self.rows.iter().find(|r| r.id == e.row) {
                acc.add_scaled(&row.value, &e.coef);
            }
        }
        acc
    }

    pub fn to_json(&self, print_basis: bool) -> RelationSetJson {
        RelationSetJson {
            weight: self.weight,
            axioms: self.axioms,
            rows: self.rows.clone(),
            rank: self.rank(),
            pivots: print_basis.then(|| {
                self.echelon
                    .iter()
                    .map(|e| PivotJson {
                        pivot: FormalValue::term(e.pivot, BigRat::one()),
                        row: e.value.clone(),
                    })
                    .collect()
            }),
        }
    }
}

/// Eliminate echelon pivots from `value`, tracking the subtracted
/// combination of original rows in `combo`.
fn reduce(
    echelon: &[EchelonRow],
    mut value: FormalValue,
    mut combo: Vec<BigRat>,
) -> (FormalValue, Vec<BigRat>) {
    for e in echelon {
        let c = value.coeff(&e.pivot);
        if c.is_zero() {
            continue;
        }
        let neg = -&c;
        value.add_scaled(&e.value, &neg);
        for (acc, x) in combo.iter_mut().zip(&e.combo) {
            *acc -= &(&c * x);
        }
    }
    (value, combo)
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationSetJson {
    pub weight: u32,
    pub axioms: Axioms,
    pub rows: Vec<RelationRow>,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivots: Option<Vec<PivotJson>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PivotJson {
    pub pivot: FormalValue,
    pub row: FormalValue,
}
