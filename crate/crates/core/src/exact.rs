//! Exact rational arithmetic, binomial coefficients and Bernoulli numbers.
//!
//! [`BigRat`] is a thin newtype over [`num_rational::BigRational`], which keeps
//! every value in lowest terms with a positive denominator. The textual form is
//! `num/den` in base 10, with the denominator omitted when it is one.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number, always canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigRat(BigRational);

impl BigRat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        BigRat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        BigRat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        BigRat(BigRational::zero())
    }

    pub fn one() -> Self {
        BigRat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        BigRat(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        BigRat(self.0.recip())
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, exp: i32) -> Self {
        let base = if exp < 0 { self.recip() } else { self.clone() };
        let mut acc = BigRat::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// `(-1)^k` as a rational.
    pub fn sign_pow(k: u32) -> Self {
        if k.is_multiple_of(2) {
            BigRat::one()
        } else {
            -BigRat::one()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for BigRat {
    fn from(r: BigRational) -> Self {
        BigRat(r)
    }
}

impl From<i64> for BigRat {
    fn from(n: i64) -> Self {
        BigRat::from_integer(n)
    }
}

impl From<BigInt> for BigRat {
    fn from(n: BigInt) -> Self {
        BigRat::from_integer(n)
    }
}

impl fmt::Display for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BigRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("invalid rational '{s}'"));
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(BigRat::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRat::new(n, d))
            }
        }
    }
}

impl Serialize for BigRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BigRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&BigRat> for &BigRat {
            type Output = BigRat;
            fn $method(self, rhs: &BigRat) -> BigRat {
                BigRat((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<BigRat> for BigRat {
            type Output = BigRat;
            fn $method(self, rhs: BigRat) -> BigRat {
                BigRat(self.0.$method(rhs.0))
            }
        }
        impl $tr<&BigRat> for BigRat {
            type Output = BigRat;
            fn $method(self, rhs: &BigRat) -> BigRat {
                BigRat(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&BigRat> for BigRat {
    fn add_assign(&mut self, rhs: &BigRat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&BigRat> for BigRat {
    fn sub_assign(&mut self, rhs: &BigRat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&BigRat> for BigRat {
    fn mul_assign(&mut self, rhs: &BigRat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        BigRat(-self.0)
    }
}

impl Neg for &BigRat {
    type Output = BigRat;
    fn neg(self) -> BigRat {
        BigRat(-&self.0)
    }
}

impl Sum for BigRat {
    fn sum<I: Iterator<Item = BigRat>>(iter: I) -> BigRat {
        iter.fold(BigRat::zero(), |acc, x| acc + x)
    }
}

/// Binomial coefficient `C(n, k)` as an exact integer; zero when `k > n`.
pub fn binom_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> BigRat {
    BigRat::from_integer(binom_int(n, k))
}

/// Append-only table of Bernoulli numbers with `B_1 = -1/2`.
///
/// Entries are produced by `B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j`.
/// Readers of already-computed entries only take the shared lock.
#[derive(Debug)]
pub struct BernoulliCache {
    entries: RwLock<Vec<BigRat>>,
}

impl Default for BernoulliCache {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            entries: RwLock::new(vec![BigRat::one()]),
        }
    }

    pub fn get(&self, k: usize) -> BigRat {
        {
            let entries = self.entries.read().expect("bernoulli cache poisoned");
            if let Some(b) = entries.get(k) {
                return b.clone();
            }
        }
        let mut entries = self.entries.write().expect("bernoulli cache poisoned");
        while entries.len() <= k {
            let n = entries.len();
            let next = if n >= 3 && n % 2 == 1 {
                BigRat::zero()
            } else {
                let s: BigRat = entries
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !b.is_zero())
                    .map(|(j, b)| binom(n as u64 + 1, j as u64) * b)
                    .sum();
                -s / BigRat::from_integer(n as i64 + 1)
            };
            entries.push(next);
        }
        entries[k].clone()
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("bernoulli cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

static BERNOULLI: LazyLock<BernoulliCache> = LazyLock::new(BernoulliCache::new);

/// Bernoulli number `B_k` from the process-wide cache.
pub fn bernoulli(k: usize) -> BigRat {
    BERNOULLI.get(k)
}
