//! High-precision reals and rigorous rational enclosures.
//!
//! [`HighPrecisionReal`] is self-validating: a value is computed at two
//! working precisions (`precision + g` and `precision + 2g` digits, `g = 10`
//! initially) and accepted only when both agree to `precision + 5`
//! significant digits; otherwise the guard `g` is doubled and the evaluation
//! retried. The kernels (`ln`, `exp`, `sqrt`, `π`, `ln Γ`) work on
//! [`BigRational`]s rounded to a fixed number of significant bits.
//!
//! [`Enclosure`] carries certified lower/upper rational bounds and is used
//! wherever a strict inequality must be decided without rounding doubt.

use std::cmp::Ordering;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{decimal_string, int, pow10, round_half_away};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighPrecisionReal {
    value: BigRational,
    precision: u32,
}

impl HighPrecisionReal {
    /// Runs the two-precision agreement protocol on `f`, which receives a
    /// working precision in significant decimal digits.
    pub fn evaluate<F>(precision: u32, f: F) -> Result<Self>
    where
        F: Fn(u32) -> Result<BigRational>,
    {
        let precision = precision.max(1);
        let mut guard = 10;
        for _ in 0..MAX_ATTEMPTS {
            let a = f(precision + guard)?;
            let b = f(precision + 2 * guard)?;
            if agree(&a, &b, precision + 5) {
                return Ok(HighPrecisionReal {
                    value: round_rel(&b, digits_to_bits(precision + guard)),
                    precision,
                });
            }
            guard *= 2;
        }
        Err(Error::PrecisionNotReached {
            precision,
            attempts: MAX_ATTEMPTS,
        })
    }

    /// Lifts an exact rational.
    pub fn exact(value: BigRational, precision: u32) -> Self {
        HighPrecisionReal { value, precision }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn to_decimal(&self) -> String {
        decimal_string(&self.value, self.precision)
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// Strict ordering certified only when the gap exceeds ten units in the
    /// last kept digit of the less precise operand; `None` otherwise.
    pub fn cmp_with_margin(&self, other: &Self) -> Option<Ordering> {
        let p = self.precision.min(other.precision) as i64;
        let scale = if self.value.abs() > other.value.abs() {
            self.value.abs()
        } else {
            other.value.abs()
        };
        let unit = scale * pow10(-p);
        let gap = &self.value - &other.value;
        if gap.abs() > unit * int(10) {
            Some(if gap.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            })
        } else {
            None
        }
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Option<Ordering> {
        self.cmp_with_margin(&HighPrecisionReal::exact(r.clone(), self.precision))
    }
}

fn agree(a: &BigRational, b: &BigRational, digits: u32) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= b.abs() * pow10(-(digits as i64))
}

pub fn digits_to_bits(digits: u32) -> u64 {
    (digits as u64 * 3322).div_ceil(1000) + 8
}

fn bit_len(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// Approximate `log2 |r|` (within ±1).
fn log2_estimate(r: &BigRational) -> i64 {
    bit_len(r.numer()) - bit_len(r.denom())
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Rounds to `bits` significant bits.
pub fn round_rel(r: &BigRational, bits: u64) -> BigRational {
    if r.is_zero() {
        return r.clone();
    }
    let scale = bits as i64 - log2_estimate(r);
    round_abs_scaled(r, scale)
}

/// Rounds to a multiple of `2^-bits`.
fn round_abs(r: &BigRational, bits: u64) -> BigRational {
    round_abs_scaled(r, bits as i64)
}

fn round_abs_scaled(r: &BigRational, scale: i64) -> BigRational {
    let m = round_half_away(&(r * pow2(scale)));
    BigRational::from_integer(m) * pow2(-scale)
}

/// Certified bounds `lo ≤ x ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn exact(r: BigRational) -> Self {
        Enclosure {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty enclosure");
        Enclosure { lo, hi }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Certified `self < other`.
    pub fn certainly_below(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Enclosure::new(lo, hi)
    }

    pub fn scale(&self, r: &BigRational) -> Enclosure {
        self.mul(&Enclosure::exact(r.clone()))
    }

    pub fn recip(&self) -> Enclosure {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an enclosure containing zero"
        );
        Enclosure::new(self.hi.recip(), self.lo.recip())
    }

    pub fn powi(&self, e: i64) -> Enclosure {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let mut acc = Enclosure::exact(BigRational::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Outward rounding to multiples of `2^-bits`, keeps sizes bounded.
    pub fn outward(&self, bits: u64) -> Enclosure {
        let s = pow2(bits as i64);
        let lo = BigRational::from_integer(super::floor(&(&self.lo * &s))) / &s;
        let hi = BigRational::from_integer(super::ceil(&(&self.hi * &s))) / &s;
        Enclosure::new(lo, hi)
    }
}

/// Enclosure of `√x` for rational `x ≥ 0` with relative width about `2^-bits`.
pub fn sqrt_enclosure(x: &BigRational, bits: u64) -> Enclosure {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return Enclosure::exact(BigRational::zero());
    }
    // √(p/q) = √(pq)/q
    let pq: BigUint = (x.numer() * x.denom())
        .to_biguint()
        .expect("positive product");
    let have = pq.bits() as i64;
    let s = ((2 * (bits as i64 + 4) - have) / 2 + 1).max(0) as usize;
    let n = pq << (2 * s);
    let root = n.sqrt();
    let exact = &root * &root == n;
    let den = x.denom().clone() << s;
    let lo = BigRational::new(BigInt::from(root.clone()), den.clone());
    let hi = if exact {
        lo.clone()
    } else {
        BigRational::new(BigInt::from(root + 1u32), den)
    };
    Enclosure::new(lo, hi)
}

/// `atan(1/x)` enclosure from consecutive partial sums of the alternating
/// series, accurate to about `2^-bits`.
fn atan_inv_enclosure(x: u64, bits: u64) -> Enclosure {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let tol = pow2(-(bits as i64) - 4);
    let mut power = x.clone(); // x^(2n+1)
    let mut sum = BigRational::zero();
    let mut n: u64 = 0;
    loop {
        let term = BigRational::new(BigInt::one(), &power * BigInt::from(2 * n + 1));
        let next = if n % 2 == 0 { &sum + &term } else { &sum - &term };
        if term < tol {
            let (lo, hi) = if sum < next { (sum, next) } else { (next, sum) };
            return Enclosure::new(lo, hi).outward(bits + 8);
        }
        sum = next;
        power *= &x2;
        n += 1;
    }
}

/// Machin: `π = 16 atan(1/5) − 4 atan(1/239)`.
pub fn pi_enclosure(bits: u64) -> Enclosure {
    let a = atan_inv_enclosure(5, bits + 6);
    let b = atan_inv_enclosure(239, bits + 6);
    a.scale(&int(16)).sub(&b.scale(&int(4))).outward(bits + 4)
}

pub fn sqrt(x: &BigRational, bits: u64) -> BigRational {
    sqrt_enclosure(x, bits).lo
}

pub fn pi(bits: u64) -> BigRational {
    pi_enclosure(bits).midpoint()
}

/// `atanh(z)` for `|z| ≤ 1/3`, absolute error below `2^-bits`.
fn atanh_small(z: &BigRational, bits: u64) -> BigRational {
    let guard = bits + 8;
    let z2 = round_abs(&(z * z), guard);
    let tol = pow2(-(guard as i64));
    let mut power = round_abs(z, guard);
    let mut sum = BigRational::zero();
    let mut k: i64 = 1;
    loop {
        let term = &power / int(k);
        if term.abs() < tol {
            break;
        }
        sum += term;
        power = round_abs(&(&power * &z2), guard);
        k += 2;
    }
    round_abs(&sum, guard)
}

fn ln2(bits: u64) -> BigRational {
    atanh_small(&super::rat(1, 3), bits + 2) * int(2)
}

/// Natural logarithm of a positive rational, about `bits` significant bits.
pub fn ln(x: &BigRational, bits: u64) -> BigRational {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if x.is_one() {
        return BigRational::zero();
    }
    let k = log2_estimate(x);
    let m = x * pow2(-k); // in (1/2, 2)
    let kbits = 64 - k.unsigned_abs().leading_zeros() as u64;
    let guard = bits + kbits + 16;
    let z = (&m - int(1)) / (&m + int(1));
    let z = round_abs(&z, guard + 4);
    let lnm = atanh_small(&z, guard) * int(2);
    let result = lnm + ln2(guard) * int(k);
    round_abs(&result, guard)
}

/// `e^y`, about `bits` significant bits.
pub fn exp(y: &BigRational, bits: u64) -> BigRational {
    if y.is_zero() {
        return BigRational::one();
    }
    let mag = super::floor(&y.abs()).bits();
    let guard = bits + mag + 24;
    let l2 = ln2(guard);
    let k = round_half_away(&(y / &l2));
    let k = k.to_i64().expect("exponent out of range");
    let r = y - &l2 * int(k);
    const HALVINGS: i64 = 10;
    let r = round_abs(&(r * pow2(-HALVINGS)), guard);
    let tol = pow2(-(guard as i64));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let mut n: i64 = 1;
    loop {
        term = round_abs(&(&term * &r / int(n)), guard);
        if term.abs() < tol {
            break;
        }
        sum += &term;
        n += 1;
    }
    for _ in 0..HALVINGS {
        sum = round_rel(&(&sum * &sum), guard);
    }
    round_rel(&(sum * pow2(k)), bits + 4)
}

/// `x^y` for `x > 0`.
pub fn powr(x: &BigRational, y: &BigRational, bits: u64) -> BigRational {
    if y.is_integer() {
        if let Some(e) = y.to_integer().to_i64() {
            return super::powi(x, e);
        }
    }
    let lx = ln(x, bits + 32);
    exp(&round_abs(&(lx * y), bits + 32), bits)
}

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`), from a shared table
/// that grows on demand.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let mut b = TABLE
        .get_or_init(|| Mutex::new(vec![BigRational::one()]))
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    for m in b.len()..=n {
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, j)
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b[..=n].to_vec()
}

/// `ln Γ(x)` for rational `x > 0`, absolute error about `2^-bits`: upward
/// shift by an exact rational product, then the Stirling series.
pub fn ln_gamma(x: &BigRational, bits: u64) -> BigRational {
    assert!(x.is_positive(), "ln Gamma needs x > 0");
    let guard = bits + 24;
    let zmin = (guard as i64 * 12) / 100 + 10;
    let shift = (zmin - super::floor(x).to_i64().unwrap_or(0)).max(0);
    let mut prod = BigRational::one();
    for i in 0..shift {
        prod *= x + int(i);
    }
    let z = x + int(shift);
    let lnz = ln(&z, guard);
    let half = super::rat(1, 2);
    let ln2pi = ln(&(pi(guard) * int(2)), guard);
    let mut acc = (&z - &half) * &lnz - &z + ln2pi * &half;
    let tol = pow2(-(guard as i64));
    let max_k = (3 * zmin as usize).max(8);
    let mut b = bernoulli(16);
    let z2 = &z * &z;
    let mut zpow = z.clone(); // z^(2k-1)
    for k in 1..=max_k {
        if 2 * k >= b.len() {
            b = bernoulli(4 * k);
        }
        let kk = int(2 * k as i64);
        let term = &b[2 * k] / (&kk * (&kk - int(1)) * &zpow);
        let term = round_abs(&term, guard);
        if term.abs() < tol {
            break;
        }
        acc += term;
        zpow *= &z2;
    }
    if shift > 0 {
        acc -= ln(&prod, guard);
    }
    round_abs(&acc, bits + 8)
}

/// `Γ(x)` for rational `x > 0`.
pub fn gamma(x: &BigRational, bits: u64) -> BigRational {
    let lg = ln_gamma(x, bits + 16 + super::floor(&x.abs()).bits());
    exp(&lg, bits)
}
