//! Sturm sequences, certified root brackets and exact bisection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::Polynomial;
use super::{fraction_string, int};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(r: &BigRational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Negative => "-",
            Sign::Zero => "0",
            Sign::Positive => "+",
        }
    }
}

/// Anything whose sign can be decided exactly at a rational point.
pub trait ExactSign {
    fn sign_at(&self, x: &BigRational) -> Sign;
}

impl ExactSign for Polynomial {
    fn sign_at(&self, x: &BigRational) -> Sign {
        Sign::of(&self.eval(x))
    }
}

impl<F: Fn(&BigRational) -> Sign> ExactSign for F {
    fn sign_at(&self, x: &BigRational) -> Sign {
        self(x)
    }
}

/// Signed remainder chain `p, p', -rem(p, p'), ...`, each member scaled by a
/// positive constant to a primitive integer polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<Vec<BigInt>>,
}

fn primitive_ints(p: &Polynomial) -> Vec<BigInt> {
    p.primitive_positive()
        .coeffs()
        .iter()
        .map(|c| c.numer().clone())
        .collect()
}

fn make_primitive(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let g = c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in c.iter_mut() {
            *x /= &g;
        }
    }
    c
}

/// Positive multiple of `-rem(a, b)`, computed by pseudo-division over the
/// integers.
fn neg_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let mut r = a.to_vec();
    let mut flips = false;
    while r.len() > db {
        let k = r.len() - 1;
        let coef = r[k].clone();
        for x in r.iter_mut() {
            *x *= lc;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] -= &coef * bj;
        }
        if lc.is_negative() {
            flips = !flips;
        }
        r.pop();
        r = make_primitive(r);
    }
    if !flips {
        for x in r.iter_mut() {
            *x = -&*x;
        }
    }
    make_primitive(r)
}

fn int_sign_at(c: &[BigInt], x: &BigRational) -> Sign {
    let Some((last, rest)) = c.split_last() else {
        return Sign::Zero;
    };
    let (n, m) = (x.numer(), x.denom());
    let mut acc = last.clone();
    let mut mpow = BigInt::one();
    for ci in rest.iter().rev() {
        mpow *= m;
        acc = acc * n + ci * &mpow;
    }
    int_sign(&acc)
}

fn int_sign(v: &BigInt) -> Sign {
    if v.is_zero() {
        Sign::Zero
    } else if v.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

impl SturmSequence {
    pub fn new(p: &Polynomial) -> Self {
        let mut chain = vec![primitive_ints(p)];
        let dp = primitive_ints(&p.derivative());
        if !dp.is_empty() {
            chain.push(dp);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let r = neg_pseudo_rem(&chain[n - 2], &chain[n - 1]);
            if r.is_empty() {
                break;
            }
            chain.push(r);
        }
        SturmSequence { chain }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn variations<I: Iterator<Item = Sign>>(signs: I) -> usize {
        let mut last = Sign::Zero;
        let mut count = 0;
        for s in signs {
            if s == Sign::Zero {
                continue;
            }
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| int_sign_at(p, x)))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| int_sign(p.last().expect("nonzero member"))))
    }

    /// Distinct real roots in `(lo, hi)`; both endpoints must be non-roots.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> Result<usize> {
        let p = &self.chain[0];
        for x in [lo, hi] {
            if int_sign_at(p, x) == Sign::Zero {
                return Err(Error::EndpointRoot {
                    point: fraction_string(x),
                });
            }
        }
        if lo >= hi {
            return Ok(0);
        }
        Ok(self.variations_at(lo) - self.variations_at(hi))
    }

    /// Distinct real roots in `(lo, +∞)`.
    pub fn count_above(&self, lo: &BigRational) -> Result<usize> {
        if int_sign_at(&self.chain[0], lo) == Sign::Zero {
            return Err(Error::EndpointRoot {
                point: fraction_string(lo),
            });
        }
        Ok(self.variations_at(lo) - self.variations_at_pos_infinity())
    }
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
pub fn sturm_count(p: &Polynomial, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Precondition("Sturm count of the zero polynomial".into()));
    }
    SturmSequence::new(p).count(lo, hi)
}

/// Sign variations in the coefficients of `p(u + a)`: an upper bound on the
/// number of roots above `a`, exact when it is 0 or 1.
pub fn descartes_variations_above(p: &Polynomial, a: &BigRational) -> usize {
    let shifted = primitive_ints(&p.shift(a));
    SturmSequence::variations(shifted.iter().map(int_sign))
}

/// True iff `p` has exactly one real root in `(a, ∞)`. Descartes' rule
/// settles most cases; a Sturm count decides the rest.
pub fn unique_root_above(p: &Polynomial, a: &BigRational) -> Result<bool> {
    match descartes_variations_above(p, a) {
        0 => Ok(false),
        1 => Ok(true),
        _ => Ok(SturmSequence::new(p).count_above(a)? == 1),
    }
}

/// Sign of `p` at `x` via integer Horner on a primitive copy; cheaper than
/// rational evaluation when called repeatedly.
pub struct IntegerSign(Vec<BigInt>);

impl IntegerSign {
    pub fn new(p: &Polynomial) -> Self {
        IntegerSign(primitive_ints(p))
    }
}

impl ExactSign for IntegerSign {
    fn sign_at(&self, x: &BigRational) -> Sign {
        int_sign_at(&self.0, x)
    }
}

/// Cauchy bound: every real root lies strictly below the returned value.
pub fn root_upper_bound(p: &Polynomial) -> BigRational {
    let lead = p.leading().abs();
    let deg = p.degree().unwrap_or(0);
    let m = (0..deg)
        .map(|i| p.coeff(i).abs() / &lead)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + int(1)
}

/// Smallest `1/2^k` nudge (k = 1, 2, ...) of `x` in direction `dir` such that
/// `p` does not vanish there. Returns the nudged point and `k`.
pub fn nudge_off_root(p: &Polynomial, x: &BigRational, dir: i8, scale: &BigRational) -> (BigRational, u32) {
    let mut step = scale.clone();
    let mut k = 0;
    loop {
        step /= int(2);
        k += 1;
        let y = if dir >= 0 { x + &step } else { x - &step };
        if !p.eval(&y).is_zero() {
            return (y, k);
        }
    }
}

/// Interval `(lower, upper)` with opposite nonzero signs at the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBracket {
    pub lower: BigRational,
    pub upper: BigRational,
    pub sign_at_lower: Sign,
    pub sign_at_upper: Sign,
}

impl RootBracket {
    /// Validates signs only.
    pub fn new<F: ExactSign + ?Sized>(f: &F, lower: BigRational, upper: BigRational) -> Result<Self> {
        if lower >= upper {
            return Err(Error::InvalidBracket(format!(
                "lower {} >= upper {}",
                fraction_string(&lower),
                fraction_string(&upper)
            )));
        }
        let sl = f.sign_at(&lower);
        let su = f.sign_at(&upper);
        if sl == Sign::Zero || su == Sign::Zero || sl == su {
            return Err(Error::InvalidBracket(format!(
                "signs {} / {} at {} / {}",
                sl.symbol(),
                su.symbol(),
                fraction_string(&lower),
                fraction_string(&upper)
            )));
        }
        Ok(RootBracket {
            lower,
            upper,
            sign_at_lower: sl,
            sign_at_upper: su,
        })
    }

    /// Sign-validated bracket whose polynomial has exactly one root inside,
    /// certified by a Sturm count.
    pub fn certified(p: &Polynomial, lower: BigRational, upper: BigRational) -> Result<Self> {
        let b = Self::new(p, lower, upper)?;
        let n = sturm_count(p, &b.lower, &b.upper)?;
        if n != 1 {
            return Err(Error::InvalidBracket(format!("Sturm count {n}, expected 1")));
        }
        Ok(b)
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / int(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower < x && x < &self.upper
    }

    /// Strictly inside `(lo, hi)`.
    pub fn inside(&self, lo: &BigRational, hi: &BigRational) -> bool {
        lo < &self.lower && &self.upper < hi
    }
}

/// Halves `bracket` until its width is at most `width`. If a midpoint hits
/// the root exactly, a symmetric sub-bracket of width `width/2` around it is
/// returned instead.
pub fn bisect_root<F: ExactSign + ?Sized>(f: &F, bracket: &RootBracket, width: &BigRational) -> RootBracket {
    assert!(width.is_positive(), "bisection width must be positive");
    let mut b = bracket.clone();
    while &b.width() > width {
        let mid = b.midpoint();
        match f.sign_at(&mid) {
            Sign::Zero => {
                let mut h = width / int(4);
                loop {
                    let lo = &mid - &h;
                    let hi = &mid + &h;
                    let (sl, su) = (f.sign_at(&lo), f.sign_at(&hi));
                    if sl == b.sign_at_lower && su == b.sign_at_upper {
                        return RootBracket {
                            lower: lo,
                            upper: hi,
                            sign_at_lower: sl,
                            sign_at_upper: su,
                        };
                    }
                    h /= int(2);
                }
            }
            s if s == b.sign_at_lower => b.lower = mid,
            _ => b.upper = mid,
        }
    }
    b
}

/// `(lo, hi)` widened to avoid endpoint roots of `p`, via 1/2^k nudges.
pub fn safe_interval(p: &Polynomial, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let one = BigRational::one();
    let lo = if p.eval(lo).is_zero() {
        nudge_off_root(p, lo, -1, &one).0
    } else {
        lo.clone()
    };
    let hi = if p.eval(hi).is_zero() {
        nudge_off_root(p, hi, 1, &one).0
    } else {
        hi.clone()
    };
    (lo, hi)
}
