//! Rational functions as co-prime numerator/denominator pairs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Polynomial;
use super::{fraction_string, int};
use crate::error::{Error, Result};

/// `numerator / denominator` with `gcd(numerator, denominator) = 1` and a
/// monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionPair {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
}

/// Reduces `num / den` to lowest terms with a monic denominator.
pub fn ratfun_reduce(num: Polynomial, den: Polynomial) -> Result<RationalFunctionPair> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RationalFunctionPair {
            numerator: Polynomial::zero(),
            denominator: Polynomial::one(),
        });
    }
    let g = num.gcd(&den);
    let (n, r1) = num.div_rem(&g);
    let (d, r2) = den.div_rem(&g);
    debug_assert!(r1.is_zero() && r2.is_zero());
    let lead = d.leading().recip();
    Ok(RationalFunctionPair {
        numerator: n.scale(&lead),
        denominator: d.scale(&lead),
    })
}

impl RationalFunctionPair {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        ratfun_reduce(num, den)
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFunctionPair {
            numerator: p,
            denominator: Polynomial::one(),
        }
    }

    /// `Σ c_i / (t + a_i)`. Residues at a repeated pole are merged and zero
    /// residues dropped; the remaining poles are simple with nonzero residue,
    /// so the sum over their product is already in lowest terms.
    pub fn from_partial_fractions(terms: &[(BigRational, BigRational)]) -> Result<Self> {
        let mut residues: BTreeMap<BigRational, BigRational> = BTreeMap::new();
        for (c, a) in terms {
            *residues.entry(a.clone()).or_insert_with(BigRational::zero) += c;
        }
        residues.retain(|_, c| !c.is_zero());
        // Integer arithmetic over the common denominator `L` of the poles and
        // `M` of the residues: every factor becomes `L t + L a`.
        let l = residues.keys().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let m = residues.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let factors: Vec<BigInt> = residues.keys().map(|a| a.numer() * (&l / a.denom())).collect();
        let mut den = vec![BigInt::one()];
        for f in &factors {
            den.push(BigInt::zero());
            for i in (0..den.len()).rev() {
                let lower = if i > 0 { &den[i - 1] * &l } else { BigInt::zero() };
                den[i] = &den[i] * f + lower;
            }
        }
        let n = factors.len();
        let mut num = vec![BigInt::zero(); n.max(1)];
        for (f, c) in factors.iter().zip(residues.values()) {
            let scale = c.numer() * (&m / c.denom());
            // Exact synthetic division of `den` by `L t + f`.
            let mut rem = den.clone();
            for k in (1..=n).rev() {
                let q = &rem[k] / &l;
                rem[k - 1] -= &q * f;
                num[k - 1] += &q * &scale;
            }
        }
        let num_scale = &m * l.pow(n.saturating_sub(1) as u32);
        let den_scale = l.pow(n as u32);
        let numerator = Polynomial::new(
            num.into_iter().map(|c| BigRational::new(c, num_scale.clone())).collect(),
        );
        let denominator = Polynomial::new(
            den.into_iter().map(|c| BigRational::new(c, den_scale.clone())).collect(),
        );
        Ok(RationalFunctionPair {
            numerator,
            denominator,
        })
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let den = self.denominator.eval(x);
        if den.is_zero() {
            return Err(Error::Pole {
                point: fraction_string(x),
            });
        }
        Ok(self.numerator.eval(x) / den)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ratfun_reduce(
            &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator),
            &self.denominator * &other.denominator,
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        ratfun_reduce(
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RationalFunctionPair {
            numerator: self.numerator.scale(c),
            denominator: self.denominator.clone(),
        }
    }

    pub fn derivative(&self) -> Result<Self> {
        let n = &self.numerator;
        let d = &self.denominator;
        ratfun_reduce(
            &(&n.derivative() * d) - &(n * &d.derivative()),
            d * d,
        )
    }

    /// `(N'D - ND') / (ND)`, the logarithmic derivative.
    pub fn log_derivative(&self) -> Result<Self> {
        let n = &self.numerator;
        let d = &self.denominator;
        if n.is_zero() {
            return Err(Error::Precondition("log-derivative of zero".into()));
        }
        ratfun_reduce(&(&n.derivative() * d) - &(n * &d.derivative()), n * d)
    }

    /// Identity of rational functions by cross-multiplication; independent of
    /// whether either side has been reduced.
    pub fn same_function(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }

    /// True iff numerator and denominator share no non-constant factor.
    pub fn is_coprime(&self) -> bool {
        self.numerator.gcd(&self.denominator).degree() == Some(0)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn one() -> Self {
        Self::polynomial(Polynomial::one())
    }
}

/// `1/(t + k)` for `k = from..=to`.
pub fn unit_terms(from: i64, to: i64) -> Vec<(BigRational, BigRational)> {
    (from..=to).map(|k| (BigRational::one(), int(k))).collect()
}
