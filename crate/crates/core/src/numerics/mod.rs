//! Arbitrary-precision evaluation of single and double zeta values.
//!
//! Every series is split into an exact head `k ≤ K` and a tail handled by
//! Euler–Maclaurin summation at `K`. Asymptotic expansions are truncated as
//! soon as a term drops below `10^-(P+guard)`; the first omitted term is the
//! error estimate. If the terms start growing first, the smallest term
//! reached becomes the estimate and the value is reported as not achieving
//! the requested precision.

mod fit;
mod real;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{Atom, FormalValue};
use crate::error::{Error, Result};
use crate::exact::{bernoulli, BigRat};

pub use fit::{default_schedule, fit_reference, reg_fit, FitKind, FitResult};
pub use real::Real;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// A real value with an absolute error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericValue {
    pub value: Real,
    pub err: f64,
}

impl NumericValue {
    pub fn new(value: Real, err: f64) -> Self {
        NumericValue { value, err }
    }

    /// `⌈log10 err⌉`, the exponent of the error estimate.
    pub fn err_exp(&self) -> i32 {
        if self.err <= 0.0 {
            -(self.value.bits() as f64 / LOG2_10) as i32
        } else {
            self.err.log10().ceil() as i32
        }
    }

    /// Fractional digits supported by the error estimate.
    pub fn digits_justified(&self) -> u32 {
        (-self.err_exp()).max(0) as u32
    }

    /// Decimal string with at most `max_digits` fractional digits, never
    /// more than the error estimate justifies.
    pub fn to_decimal(&self, max_digits: u32) -> String {
        self.value.to_decimal(max_digits.min(self.digits_justified()))
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn add(&self, rhs: &NumericValue) -> NumericValue {
        NumericValue::new(&self.value + &rhs.value, self.err + rhs.err)
    }

    pub fn sub(&self, rhs: &NumericValue) -> NumericValue {
        NumericValue::new(&self.value - &rhs.value, self.err + rhs.err)
    }

    pub fn scale(&self, k: &BigRat) -> NumericValue {
        NumericValue::new(self.value.mul_rat(k), self.err * k.abs().to_f64())
    }

    pub fn mul(&self, rhs: &NumericValue) -> NumericValue {
        let err = self.err * rhs.value.abs().to_f64()
            + rhs.err * self.value.abs().to_f64()
            + self.err * rhs.err;
        NumericValue::new(self.value.mul(&rhs.value), err)
    }
}

/// Evaluation context: precision policy plus value caches.
///
/// Caches are append-only behind read/write locks, so a context may be
/// shared across threads.
#[derive(Debug)]
pub struct RealCtx {
    precision: u32,
    guard: u32,
    bits: u32,
    cutoff: u64,
    singles: RwLock<HashMap<u32, NumericValue>>,
    doubles: RwLock<HashMap<(u32, u32), NumericValue>>,
    gamma: OnceLock<NumericValue>,
}

impl Clone for RealCtx {
    fn clone(&self) -> Self {
        RealCtx::with_params(self.precision, self.guard, self.cutoff)
    }
}

/// Size up to which harmonic numbers are summed term by term.
const HARMONIC_DIRECT_LIMIT: u64 = 20_000;
/// Hard cap on asymptotic expansion length.
const MAX_ASYMPTOTIC_TERMS: u32 = 2_000;

impl RealCtx {
    /// Context for `precision` decimal digits with 10 guard digits and
    /// cutoff `K = max(50, precision)`.
    pub fn new(precision: u32) -> RealCtx {
        RealCtx::with_params(precision, 10, u64::from(precision.max(50)))
    }

    pub fn with_params(precision: u32, guard: u32, cutoff: u64) -> RealCtx {
        let guard = guard.max(10);
        let bits = ((precision + guard) as f64 * LOG2_10).ceil() as u32 + 32;
        RealCtx {
            precision,
            guard,
            bits,
            cutoff: cutoff.max(1),
            singles: RwLock::default(),
            doubles: RwLock::default(),
            gamma: OnceLock::new(),
        }
    }

    /// Same precision policy with a different Euler–Maclaurin cutoff.
    pub fn with_cutoff(&self, cutoff: u64) -> RealCtx {
        RealCtx::with_params(self.precision, self.guard, cutoff)
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    /// Truncation threshold `10^-(P+guard)` expressed in bits.
    fn tol_bits(&self) -> u32 {
        ((self.precision + self.guard) as f64 * LOG2_10).ceil() as u32
    }

    fn ulp(&self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }

    /// Identity tolerance `10^(5−P)` used by the verification layer.
    pub fn identity_tolerance(&self) -> f64 {
        10f64.powi(5 - self.precision as i32)
    }

    /// Whether `v` is known to `P` decimal digits.
    pub fn achieved(&self, v: &NumericValue) -> bool {
        v.err <= 10f64.powi(-(self.precision as i32))
    }

    pub fn real(&self, r: &BigRat) -> Real {
        Real::from_rat(r, self.bits)
    }

    /// Sum terms of an asymptotic series until one drops below tolerance.
    /// Returns the sum and an error estimate.
    fn sum_asymptotic(&self, mut term: impl FnMut(u32) -> Real) -> (Real, f64) {
        let tol = Real::pow2_neg(self.tol_bits(), self.bits);
        let mut acc = Real::zero(self.bits);
        let mut prev: Option<Real> = None;
        for j in 1..=MAX_ASYMPTOTIC_TERMS {
            let t = term(j);
            let mag = t.abs();
            if mag < tol {
                let err = mag.to_f64() + j as f64 * self.ulp();
                return (acc + t, err);
            }
            if let Some(p) = &prev {
                if mag > *p {
                    return (acc, p.to_f64());
                }
            }
            acc = acc + t;
            prev = Some(mag);
        }
        (acc, prev.map_or(0.0, |p| p.to_f64()))
    }

    fn head_sum(&self, s: u32, from: u64, to: u64) -> Real {
        (from..=to).fold(Real::zero(self.bits), |acc, k| {
            acc + Real::recip_pow(k, s, self.bits)
        })
    }

    /// `K^{s−1} Σ_{k>K} k^-s` by Euler–Maclaurin at K ≥ 1:
    /// `1/(s−1) − 1/(2K) + Σ_j B_{2j}/(2j)! (s)_{2j−1} K^{−2j}`.
    ///
    /// Each correction term is an exact rational rounded once. The scaled
    /// form keeps full relative precision for large s, where the tail itself
    /// is below one ulp but gets multiplied by large coefficients.
    fn scaled_tail_em(&self, s: u32, k: u64) -> NumericValue {
        let lead = BigRat::new(1, s - 1) - BigRat::new(1, 2 * k);
        let k2 = BigInt::from(k) * k;
        let mut fact = BigInt::one();
        let mut rising = BigInt::from(s);
        let mut kpow = BigInt::one();
        let (corr, err) = self.sum_asymptotic(|j| {
            fact *= (2 * j - 1) * (2 * j);
            kpow *= &k2;
            if j > 1 {
                rising *= (s + 2 * j - 3) * (s + 2 * j - 2);
            }
            let c = bernoulli(2 * j as usize) * BigRat::new(rising.clone(), &fact * &kpow);
            self.real(&c)
        });
        NumericValue::new(self.real(&lead) + corr, err + 4.0 * self.ulp())
    }

    /// `c · Σ_{k>K} k^-s` from the scaled tail, for possibly large `c`.
    fn tail_times(&self, s: u32, k: u64, c: &BigRat) -> NumericValue {
        let scaled = self.scaled_tail_em(s, k);
        let f = c * &inv_pow(k, s - 1);
        NumericValue::new(scaled.value.mul_rat(&f), scaled.err * f.abs().to_f64() + self.ulp())
    }

    fn tail_sum_em(&self, s: u32, k: u64) -> NumericValue {
        self.tail_times(s, k, &BigRat::one())
    }

    /// `Σ_{k>K} k^-s`, s ≥ 2. For K below the cutoff the terms up to the
    /// cutoff are summed exactly first.
    pub fn tail_sum(&self, s: u32, k: u64) -> NumericValue {
        assert!(s >= 2, "tail_sum needs s ≥ 2");
        if k >= self.cutoff {
            return self.tail_sum_em(s, k);
        }
        let head = self.head_sum(s, k + 1, self.cutoff);
        let tail = self.tail_sum_em(s, self.cutoff);
        NumericValue::new(head + tail.value, tail.err + self.cutoff as f64 * self.ulp())
    }

    /// `ζ(s)` for integer s ≥ 2.
    pub fn zeta_single(&self, s: u32) -> NumericValue {
        if let Some(v) = self.singles.read().expect("cache poisoned").get(&s) {
            return v.clone();
        }
        let v = self.tail_sum(s, 0);
        self.singles
            .write()
            .expect("cache poisoned")
            .entry(s)
            .or_insert(v)
            .clone()
    }

    fn ln_int(&self, k: u64) -> Real {
        Real::from_int(k, self.bits).ln()
    }

    /// `Σ_{k>K} (log k) k^-s` by Euler–Maclaurin at K, computed in the
    /// same scaled form as [`scaled_tail_em`](Self::scaled_tail_em).
    fn log_tail_sum_em(&self, s: u32, k: u64) -> NumericValue {
        let ln_k = self.ln_int(k);
        let sm1 = BigInt::from(s - 1);
        // ∫_K^∞ x^-s log x dx = K^{1−s} (log K/(s−1) + 1/(s−1)²)
        let lead_log = BigRat::new(1, s - 1) - BigRat::new(1, 2 * k);
        let lead_const = BigRat::new(1, &sm1 * &sm1);
        // f^{(n)}(x) = x^{−s−n}(α_n log x + β_n)
        let mut alpha = BigInt::one();
        let mut beta = BigInt::from(0);
        let mut n: u32 = 0;
        let k2 = BigInt::from(k) * k;
        let mut fact = BigInt::one();
        let mut kpow = BigInt::one();
        let (corr, err) = self.sum_asymptotic(|j| {
            fact *= (2 * j - 1) * (2 * j);
            kpow *= &k2;
            while n < 2 * j - 1 {
                let f = BigInt::from(s + n);
                let next_alpha = -&f * &alpha;
                beta = &alpha - &f * &beta;
                alpha = next_alpha;
                n += 1;
            }
            let c = -bernoulli(2 * j as usize) / BigRat::from_integer(&fact * &kpow);
            ln_k.mul_rat(&(&c * &BigRat::from_integer(alpha.clone())))
                + self.real(&(&c * &BigRat::from_integer(beta.clone())))
        });
        let scaled = ln_k.mul_rat(&lead_log) + self.real(&lead_const) + corr;
        let f = inv_pow(k, s - 1);
        NumericValue::new(
            scaled.mul_rat(&f),
            (err + 8.0 * self.ulp()) * f.to_f64() + self.ulp(),
        )
    }

    /// `Σ_{k>K} (log k) k^-s`, s ≥ 2.
    pub fn log_tail_sum(&self, s: u32, k: u64) -> NumericValue {
        assert!(s >= 2, "log_tail_sum needs s ≥ 2");
        if k >= self.cutoff {
            return self.log_tail_sum_em(s, k);
        }
        let head = (k.max(1) + 1..=self.cutoff).fold(Real::zero(self.bits), |acc, i| {
            acc + self.ln_int(i).mul(&Real::recip_pow(i, s, self.bits))
        });
        let tail = self.log_tail_sum_em(s, self.cutoff);
        NumericValue::new(
            head + tail.value,
            tail.err + 2.0 * self.cutoff as f64 * self.ulp(),
        )
    }

    /// Euler's constant, `H_K − log K − 1/(2K) + Σ_j B_{2j}/(2j) K^{−2j}`.
    pub fn gamma(&self) -> NumericValue {
        self.gamma
            .get_or_init(|| {
                let k = self.cutoff;
                let bits = self.bits;
                let h = self.head_sum(1, 1, k);
                let half = Real::one(bits).div_int(2 * k);
                let k2 = BigInt::from(k) * k;
                let mut kpow = BigInt::one();
                let (corr, err) = self.sum_asymptotic(|j| {
                    kpow *= &k2;
                    let c = bernoulli(2 * j as usize) / BigRat::from_integer(&kpow * (2 * j));
                    self.real(&c)
                });
                NumericValue::new(
                    h - self.ln_int(k) - half + corr,
                    err + (k as f64 + 8.0) * self.ulp(),
                )
            })
            .clone()
    }

    /// Exact `H_N^{(s)}` as a rational.
    pub fn harmonic_exact(s: u32, n: u64) -> BigRat {
        (1..=n)
            .map(|k| BigRat::new(1, num_traits::pow(BigInt::from(k), s as usize)))
            .sum()
    }

    /// `H_N^{(s)} = Σ_{k≤N} k^-s`.
    pub fn harmonic(&self, s: u32, n: u64) -> NumericValue {
        assert!(s >= 1, "harmonic needs s ≥ 1");
        if n <= HARMONIC_DIRECT_LIMIT {
            return NumericValue::new(self.head_sum(s, 1, n), (n as f64 + 1.0) * self.ulp());
        }
        if s >= 2 {
            return self.zeta_single(s).sub(&self.tail_sum(s, n));
        }
        // log N + γ + 1/(2N) − Σ_j B_{2j}/(2j) N^{−2j}
        let bits = self.bits;
        let n2 = BigInt::from(n) * n;
        let mut npow = BigInt::one();
        let (corr, err) = self.sum_asymptotic(|j| {
            npow *= &n2;
            let c = -bernoulli(2 * j as usize) / BigRat::from_integer(&npow * (2 * j));
            self.real(&c)
        });
        let gamma = self.gamma();
        NumericValue::new(
            self.ln_int(n) + gamma.value + Real::one(bits).div_int(2 * n) + corr,
            err + gamma.err + 4.0 * self.ulp(),
        )
    }

    /// Convergent double zeta value `ζ(a,b)`, a ≥ 1, b ≥ 2.
    pub fn zeta_double(&self, a: u32, b: u32) -> Result<NumericValue> {
        if b < 2 {
            return Err(Error::DivergentValue(format!("ζ({a},{b}) is divergent")));
        }
        if a < 1 {
            return Err(Error::DomainError {
                kind: "zeta_double".into(),
                detail: format!("first index must be ≥ 1, got {a}"),
            });
        }
        if let Some(v) = self.doubles.read().expect("cache poisoned").get(&(a, b)) {
            return Ok(v.clone());
        }
        let v = self.zeta_double_uncached(a, b);
        Ok(self
            .doubles
            .write()
            .expect("cache poisoned")
            .entry((a, b))
            .or_insert(v)
            .clone())
    }

    fn zeta_double_uncached(&self, a: u32, b: u32) -> NumericValue {
        let bits = self.bits;
        let k = self.cutoff;
        // head: Σ_{k2 ≤ K} H_{k2−1}^{(a)} k2^{−b}
        let mut h = Real::zero(bits);
        let mut head = Real::zero(bits);
        for k2 in 2..=k {
            h = h + Real::recip_pow(k2 - 1, a, bits);
            head = head + h.mul(&Real::recip_pow(k2, b, bits));
        }
        let head_err = 2.0 * k as f64 * self.ulp();
        let tail = if a >= 2 {
            // H_{k−1}^{(a)} = ζ(a) − Σ_{j≥k} j^{−a}, the latter expanded by
            // Euler–Maclaurin at k and summed termwise against k^{−b}.
            let za = self.zeta_single(a);
            let tb = self.tail_sum(b, k);
            let t1 = self.tail_sum(a + b - 1, k);
            let t0 = self.tail_sum(a + b, k);
            let mut err = za.err * tb.value.to_f64().abs() + tb.err * za.value.to_f64().abs();
            err += t1.err + t0.err;
            let base = za.value.mul(&tb.value) - t1.value.div_int(a - 1) - t0.value.div_int(2);
            let mut fact = BigInt::one();
            let mut rising = BigInt::from(a);
            let (rest, tail_err) = self.sum_asymptotic(|l| {
                fact *= (2 * l - 1) * (2 * l);
                if l > 1 {
                    rising *= (a + 2 * l - 3) * (a + 2 * l - 2);
                }
                let c = bernoulli(2 * l as usize) * BigRat::new(rising.clone(), fact.clone());
                let t = self.tail_times(a + b + 2 * l - 1, k, &c);
                err += t.err;
                -t.value
            });
            NumericValue::new(base + rest, err + tail_err)
        } else {
            // H_{k−1} = log k + γ − 1/(2k) − Σ_j B_{2j}/(2j) k^{−2j}
            let lt = self.log_tail_sum(b, k);
            let gamma = self.gamma();
            let tb = self.tail_sum(b, k);
            let t1 = self.tail_sum(b + 1, k);
            let mut err = lt.err + gamma.err * tb.value.to_f64().abs() + tb.err + t1.err;
            let base = lt.value + gamma.value.mul(&tb.value) - t1.value.div_int(2);
            let (rest, tail_err) = self.sum_asymptotic(|j| {
                let c = bernoulli(2 * j as usize) / BigRat::from_integer(2 * j as i64);
                let t = self.tail_times(b + 2 * j, k, &c);
                err += t.err;
                -t.value
            });
            NumericValue::new(base + rest, err + tail_err)
        };
        NumericValue::new(head + tail.value, head_err + tail.err + 8.0 * self.ulp())
    }

    /// Value of a convergent atom.
    pub fn eval_atom(&self, atom: &Atom) -> NumericValue {
        match *atom {
            Atom::Unit => NumericValue::new(Real::one(self.bits), 0.0),
            Atom::Single(w) => self.zeta_single(w),
            Atom::Double(a, b) => self
                .zeta_double(a, b)
                .expect("atoms are convergent by construction"),
        }
    }

    /// `Σ coef · T^e · atom` at the given value of T.
    pub fn eval_formal(&self, v: &FormalValue, t: &NumericValue) -> NumericValue {
        let mut acc = NumericValue::new(Real::zero(self.bits), 0.0);
        for (mono, coef) in v.iter() {
            let mut term = self.eval_atom(&mono.atom);
            for _ in 0..mono.t {
                term = term.mul(t);
            }
            acc = acc.add(&term.scale(coef));
        }
        acc
    }

    /// [`eval_formal`](Self::eval_formal) at a rational T.
    pub fn eval_formal_at(&self, v: &FormalValue, t: &BigRat) -> NumericValue {
        let t = NumericValue::new(self.real(t), self.ulp());
        self.eval_formal(v, &t)
    }
}

/// `1/k^e` as an exact rational.
fn inv_pow(k: u64, e: u32) -> BigRat {
    BigRat::new(1, num_traits::pow(BigInt::from(k), e as usize))
}

/// Plain partial sum `Σ_{0<k1<k2≤N} k1^-a k2^-b` in the context's precision.
pub fn zeta_double_bruteforce(a: u32, b: u32, n: u64, ctx: &RealCtx) -> NumericValue {
    let bits = ctx.bits();
    let mut h = Real::zero(bits);
    let mut acc = Real::zero(bits);
    for k2 in 2..=n {
        h = h + Real::recip_pow(k2 - 1, a, bits);
        acc = acc + h.mul(&Real::recip_pow(k2, b, bits));
    }
    NumericValue::new(acc, 3.0 * n as f64 * ctx.ulp())
}

/// Upper bound for `ζ(a,b) − Σ_{k1<k2≤N} k1^-a k2^-b`.
///
/// For a ≥ 2 the inner sums are below ζ(a) ≤ 1 + 1/(a−1); for a = 1 they are
/// below 1 + log k, and the outer tail is bounded by its integral.
pub fn bruteforce_tail_bound(a: u32, b: u32, n: u64) -> f64 {
    let nf = n as f64;
    let bm1 = (b - 1) as f64;
    let outer = nf.powf(1.0 - b as f64);
    if a >= 2 {
        (1.0 + 1.0 / (a - 1) as f64) * outer / bm1
    } else {
        outer * ((1.0 + nf.ln()) / bm1 + 1.0 / (bm1 * bm1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> RealCtx {
        RealCtx::new(50)
    }

    /// `|v − reference| < 10^exp`, the reference given as a decimal string.
    fn close(c: &RealCtx, v: &NumericValue, reference: &str, exp: i32) -> bool {
        let (int, frac) = reference.split_once('.').unwrap_or((reference, ""));
        let num: BigInt = format!("{int}{frac}").parse().unwrap();
        let r = BigRat::new(num, num_traits::pow(BigInt::from(10), frac.len()));
        (&v.value - &c.real(&r)).log10_abs() < exp as f64
    }

    #[test]
    fn single_values() {
        let c = ctx();
        assert!(c.zeta_single(2).to_decimal(15).starts_with("1.644934066848226"));
        assert!(c.zeta_single(3).to_decimal(15).starts_with("1.202056903159594"));
        assert!(c.zeta_single(10).to_decimal(15).starts_with("1.000994575127818"));
        assert!(c.achieved(&c.zeta_single(2)));
    }

    #[test]
    fn tail_sums() {
        let c = ctx();
        assert!(c.tail_sum(2, 10).to_decimal(15).starts_with("0.095166335681686"));
        assert_eq!(c.tail_sum(2, 0).value, c.zeta_single(2).value);
        assert!(c.tail_sum(4, 1).to_decimal(15).starts_with("0.082323233711138"));
        // Directly at a large K the expansion converges very fast.
        let direct = c.tail_sum(3, 1000);
        let via_head = c
            .zeta_single(3)
            .sub(&NumericValue::new(c.head_sum(3, 1, 1000), 0.0));
        assert!((&direct.value - &via_head.value).log10_abs() < -55.0);
    }

    #[test]
    fn log_tail_sums() {
        let c = ctx();
        assert!(c.log_tail_sum(2, 0).to_decimal(15).starts_with("0.937548254315844"));
        let a = c.log_tail_sum(2, 5);
        let b = c.log_tail_sum(2, 6);
        assert!(a.value > b.value && !b.value.is_negative());
        assert!(c.log_tail_sum(3, 1_000_000).to_f64() < 1e-10);
    }

    #[test]
    fn harmonic_numbers() {
        let c = ctx();
        assert_eq!(RealCtx::harmonic_exact(2, 10), BigRat::new(1968329, 1270080));
        assert_eq!(RealCtx::harmonic_exact(1, 3), BigRat::new(11, 6));
        // H_10^(2) = 1968329/1270080
        assert!(close(&c, &c.harmonic(2, 10), "1.5497677311665406903502141597379692617787855883093978", -50));
        let h3 = c.harmonic(1, 3);
        assert!((&h3.value - &c.real(&BigRat::new(11, 6))).log10_abs() < -60.0);
        // Above the direct limit both routes must agree.
        let n = HARMONIC_DIRECT_LIMIT + 1;
        let asym = c.harmonic(1, n);
        let direct = c.head_sum(1, 1, n);
        assert!((&asym.value - &direct).log10_abs() < -55.0);
        let asym2 = c.harmonic(2, n);
        let direct2 = c.head_sum(2, 1, n);
        assert!((&asym2.value - &direct2).log10_abs() < -55.0);
    }

    #[test]
    fn double_values() {
        let c = ctx();
        assert!(close(&c, &c.zeta_double(1, 2).unwrap(), "1.2020569031595942853997381615114499907649862923404988817922", -55));
        // (ζ(2)² − ζ(4))/2
        assert!(close(&c, &c.zeta_double(2, 2).unwrap(), "0.81174242528335364363700277240587592708106321393904", -48));
        // ζ(4)/4
        assert!(close(&c, &c.zeta_double(1, 3).unwrap(), "0.27058080842778454787900092413529197569368773797968", -48));
        assert!(matches!(c.zeta_double(2, 1), Err(Error::DivergentValue(_))));
    }

    #[test]
    fn bruteforce_small_cases() {
        let c = RealCtx::new(30);
        let two = zeta_double_bruteforce(3, 4, 2, &c);
        assert!((&two.value - &c.real(&BigRat::new(1, 16))).log10_abs() < -35.0);
        let x = zeta_double_bruteforce(2, 2, 10_000, &c);
        assert!((x.to_f64() - 0.811742425283354).abs() < 2e-4);
        let a = zeta_double_bruteforce(1, 2, 100, &c);
        let b = zeta_double_bruteforce(1, 2, 200, &c);
        assert!(a.value < b.value && b.to_f64() < 1.2020569031595942);
    }

    #[test]
    fn eval_examples() {
        let c = ctx();
        let st = crate::algebra::reg_double(2, 1, crate::algebra::Rule::Stuffle).unwrap();
        let v = c.eval_formal_at(&st, &BigRat::zero());
        let minus_two_zeta3 = "-2.4041138063191885707994763230228999815299725846809977635844";
        assert!(close(&c, &v, minus_two_zeta3, -55));
        assert!(c.eval_formal_at(&FormalValue::zero(), &BigRat::from_integer(7)).value.is_zero());
        let t3 = crate::algebra::z(&[3]).mul_t(1).scale(&BigRat::from_integer(-2));
        let v = c.eval_formal_at(&t3, &BigRat::one());
        assert!(close(&c, &v, minus_two_zeta3, -55));
    }

    #[test]
    fn small_cutoff_misses_precision() {
        let c = RealCtx::new(50).with_cutoff(2);
        let v = c.zeta_single(3);
        assert!(!c.achieved(&v));
        assert!(v.digits_justified() < 50);
    }
}
