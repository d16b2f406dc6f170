//! Fixed-point binary reals: `mant / 2^bits` with a BigInt mantissa.
//!
//! All values in one evaluation share the same `bits`; every operation
//! rounds to nearest. Magnitudes handled here are small (zeta values,
//! logarithms of moderate integers), so fixed point is enough.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::BigRat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Real {
    mant: BigInt,
    bits: u32,
}

/// `num / den` rounded to nearest, den > 0.
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * two))
}

impl Real {
    pub fn zero(bits: u32) -> Real {
        Real {
            mant: BigInt::zero(),
            bits,
        }
    }

    pub fn one(bits: u32) -> Real {
        Real {
            mant: BigInt::one() << bits,
            bits,
        }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Real {
        Real {
            mant: n.into() << bits,
            bits,
        }
    }

    pub fn from_rat(r: &BigRat, bits: u32) -> Real {
        Real {
            mant: div_round(&(r.numer() << bits), r.denom()),
            bits,
        }
    }

    /// `1 / k^s`.
    pub fn recip_pow(k: u64, s: u32, bits: u32) -> Real {
        let den = num_traits::pow(BigInt::from(k), s as usize);
        Real {
            mant: div_round(&(BigInt::one() << bits), &den),
            bits,
        }
    }

    /// `2^-e`, the smallest power of two below the requested tolerance.
    pub fn pow2_neg(e: u32, bits: u32) -> Real {
        if e > bits {
            return Real::zero(bits);
        }
        Real {
            mant: BigInt::one() << (bits - e),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Real {
        Real {
            mant: self.mant.abs(),
            bits: self.bits,
        }
    }

    /// Change precision, rounding when reducing.
    pub fn with_bits(&self, bits: u32) -> Real {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => div_round(&self.mant, &(BigInt::one() << (self.bits - bits))),
        };
        Real { mant, bits }
    }

    pub fn mul(&self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real {
            mant: div_round(&(&self.mant * &rhs.mant), &(BigInt::one() << self.bits)),
            bits: self.bits,
        }
    }

    pub fn div(&self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        assert!(!rhs.is_zero(), "division by zero");
        let (num, den) = if rhs.mant.is_negative() {
            (-(&self.mant << self.bits), -rhs.mant.clone())
        } else {
            (&self.mant << self.bits, rhs.mant.clone())
        };
        Real {
            mant: div_round(&num, &den),
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Real {
        Real {
            mant: &self.mant * k.into(),
            bits: self.bits,
        }
    }

    /// Division by a positive or negative integer.
    pub fn div_int(&self, k: impl Into<BigInt>) -> Real {
        let k = k.into();
        assert!(!k.is_zero(), "division by zero");
        let (num, den) = if k.is_negative() {
            (-self.mant.clone(), -k)
        } else {
            (self.mant.clone(), k)
        };
        Real {
            mant: div_round(&num, &den),
            bits: self.bits,
        }
    }

    pub fn mul_rat(&self, r: &BigRat) -> Real {
        Real {
            mant: div_round(&(&self.mant * r.numer()), r.denom()),
            bits: self.bits,
        }
    }

    pub fn powi(&self, e: u32) -> Real {
        let mut acc = Real::one(self.bits);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Real {
        assert!(self.mant.sign() == Sign::Plus, "ln of non-positive value");
        // Work with 64 extra bits; x = 2^e · y, y ∈ [1, 2).
        let wb = self.bits + 64;
        let x = self.with_bits(wb);
        let e = x.mant.bits() as i64 - 1 - wb as i64;
        let y = if e >= 0 {
            Real {
                mant: &x.mant >> e as u64,
                bits: wb,
            }
        } else {
            Real {
                mant: &x.mant << (-e) as u64,
                bits: wb,
            }
        };
        let one = Real::one(wb);
        let ln_y = atanh_series(&(&y - &one).div(&(&y + &one))).mul_int(2);
        let ln2 = ln2(wb);
        (ln_y + ln2.mul_int(e)).with_bits(self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let excess = self.mant.bits().saturating_sub(60);
        let m = (&self.mant >> excess).to_f64().unwrap_or(0.0);
        m * 2f64.powi(excess as i32 - self.bits as i32)
    }

    /// `log10 |self|`, `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let excess = self.mant.bits().saturating_sub(60);
        let m = (&self.mant >> excess).abs().to_f64().unwrap_or(1.0);
        m.log10() + (excess as f64 - self.bits as f64) * std::f64::consts::LOG10_2
    }

    /// Decimal expansion with `digits` fractional digits, rounded to nearest.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = div_round(
            &(&self.mant * num_traits::pow(BigInt::from(10), digits as usize)),
            &(BigInt::one() << self.bits),
        );
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let d = digits as usize;
        let s = if s.len() <= d {
            format!("{}{}", "0".repeat(d + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

/// `Σ z^(2i+1)/(2i+1)` for |z| ≤ 1/3.
fn atanh_series(z: &Real) -> Real {
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut acc = Real::zero(z.bits);
    let mut i: u64 = 0;
    while !power.is_zero() {
        acc = acc + power.div_int(2 * i + 1);
        power = power.mul(&z2);
        i += 1;
    }
    acc
}

fn ln2(bits: u32) -> Real {
    let third = Real::one(bits).div_int(3);
    atanh_series(&third).mul_int(2)
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Real) -> Ordering {
        debug_assert_eq!(self.bits, other.bits);
        self.mant.cmp(&other.mant)
    }
}

impl Add<&Real> for &Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real {
            mant: &self.mant + &rhs.mant,
            bits: self.bits,
        }
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, rhs: Real) -> Real {
        &self + &rhs
    }
}

impl Sub<&Real> for &Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        debug_assert_eq!(self.bits, rhs.bits);
        Real {
            mant: &self.mant - &rhs.mant,
            bits: self.bits,
        }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, rhs: Real) -> Real {
        &self - &rhs
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real {
            mant: -self.mant,
            bits: self.bits,
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_decimal(20))
    }
}
