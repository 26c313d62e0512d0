//! Negative eigenvalues of `-Δ - η/|x| + 1` and their power sums.
//!
//! Level `j` sits at `λ_j = 1 - η²/(2j+d-1)²` with multiplicity
//! `μ_j = (d-2+j)! (d-1+2j) / ((d-1)! j!)`. Levels with `λ_j = 0` exactly are
//! not counted.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::hpr::{self, digits_to_bits, sqrt_enclosure, Enclosure, HighPrecisionReal};
use crate::exact::{ceil, factorial, from_biguint, int, powi, rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumParams {
    pub d: u32,
    pub eta: BigRational,
}

impl SpectrumParams {
    pub fn new(d: u32, eta: BigRational) -> Result<Self> {
        if d < 3 {
            return Err(Error::Precondition(format!("dimension d = {d} < 3")));
        }
        if !eta.is_positive() {
            return Err(Error::Precondition("eta must be positive".into()));
        }
        Ok(SpectrumParams { d, eta })
    }

    /// `τ = (η + 1 - d)/2`.
    pub fn tau(&self) -> BigRational {
        (&self.eta + int(1) - int(self.d as i64)) / int(2)
    }

    /// Index of the highest negative level, `⌈τ⌉ - 1`; `None` when `η ≤ d-1`.
    pub fn ell(&self) -> Option<u64> {
        if self.eta <= int(self.d as i64 - 1) {
            return None;
        }
        let l: BigInt = ceil(&self.tau()) - 1;
        Some(l.to_u64().expect("level index fits in u64"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelData {
    pub j: u64,
    pub mu: BigUint,
    /// `λ_j` in units of `Λ`.
    pub lambda: BigRational,
}

fn level_denominator(d: u32, j: u64) -> BigRational {
    let n = int(2 * j as i64 + d as i64 - 1);
    &n * &n
}

/// `-λ_j = η²/(2j+d-1)² - 1`.
fn depth(params: &SpectrumParams, j: u64) -> BigRational {
    &params.eta * &params.eta / level_denominator(params.d, j) - int(1)
}

pub fn levels(params: &SpectrumParams) -> Vec<LevelData> {
    let Some(ell) = params.ell() else {
        return Vec::new();
    };
    (0..=ell)
        .map(|j| LevelData {
            j,
            mu: multiplicity(params.d, j),
            lambda: -depth(params, j),
        })
        .collect()
}

/// Degeneracy of level `j` from the factorial formula.
pub fn multiplicity(d: u32, j: u64) -> BigUint {
    let d = d as u64;
    factorial(d - 2 + j) * (d - 1 + 2 * j) / (factorial(d - 1) * factorial(j))
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `C(d-1+j, d-1) + C(d-2+j, d-1)`.
pub fn multiplicity_binomial(d: u32, j: u64) -> BigUint {
    let d = d as u64;
    binomial(d - 1 + j, d - 1) + binomial(d - 2 + j, d - 1)
}

/// Closed form `N_k = (d+2k)(d+k-1)!/(d! k!)` for the first `k+1` levels.
pub fn cumulative_count(d: u32, k: u64) -> BigUint {
    let d = d as u64;
    factorial(d + k - 1) * (d + 2 * k) / (factorial(d) * factorial(k))
}

/// Number of negative eigenvalues with multiplicity.
pub fn counting_function(params: &SpectrumParams) -> BigUint {
    match params.ell() {
        Some(ell) => cumulative_count(params.d, ell),
        None => BigUint::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RieszValue {
    Exact(BigRational),
    Approx(HighPrecisionReal),
}

impl RieszValue {
    pub fn approx(&self, precision: u32) -> HighPrecisionReal {
        match self {
            RieszValue::Exact(r) => HighPrecisionReal::exact(r.clone(), precision),
            RieszValue::Approx(h) => h.clone(),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            RieszValue::Exact(r) => Some(r),
            RieszValue::Approx(_) => None,
        }
    }
}

/// `Σ_j μ_j |λ_j|^γ`, exact for integer `γ`.
pub fn riesz_mean(params: &SpectrumParams, gamma: &BigRational, precision: u32) -> Result<RieszValue> {
    if gamma.is_negative() {
        return Err(Error::Precondition("gamma must be non-negative".into()));
    }
    if gamma.is_zero() {
        return Ok(RieszValue::Exact(from_biguint(&counting_function(params))));
    }
    if gamma.is_integer() {
        let g = gamma.to_integer().to_i64().ok_or_else(|| Error::Precondition("gamma too large".into()))?;
        return Ok(RieszValue::Exact(riesz_mean_integer(params, g)));
    }
    let lv = levels(params);
    if lv.is_empty() {
        return Ok(RieszValue::Exact(BigRational::zero()));
    }
    let value = HighPrecisionReal::evaluate(precision, |digits| {
        let bits = digits_to_bits(digits);
        let mut acc = BigRational::zero();
        for l in &lv {
            let x = -&l.lambda;
            acc += from_biguint(&l.mu) * hpr::powr(&x, gamma, bits + 8);
        }
        Ok(hpr::round_rel(&acc, bits))
    })?;
    Ok(RieszValue::Approx(value))
}

fn riesz_mean_integer(params: &SpectrumParams, gamma: i64) -> BigRational {
    levels(params)
        .iter()
        .map(|l| from_biguint(&l.mu) * powi(&-&l.lambda, gamma))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Rigorous enclosure of the Riesz mean when `2γ` is an integer.
pub fn riesz_mean_enclosure(params: &SpectrumParams, gamma: &BigRational, bits: u64) -> Option<Enclosure> {
    let twice = gamma * int(2);
    if !twice.is_integer() || gamma.is_negative() {
        return None;
    }
    if gamma.is_integer() || levels(params).is_empty() {
        let g = gamma.to_integer().to_i64()?;
        let v = if g == 0 {
            from_biguint(&counting_function(params))
        } else {
            riesz_mean_integer(params, g)
        };
        return Some(Enclosure::exact(v));
    }
    let k = (gamma - rat(1, 2)).to_integer().to_i64()?;
    let mut acc = Enclosure::exact(BigRational::zero());
    for l in levels(params) {
        let x = -&l.lambda;
        let term = sqrt_enclosure(&x, bits + 8).scale(&(powi(&x, k) * from_biguint(&l.mu)));
        acc = acc.add(&term);
    }
    Some(acc.outward(bits + 4))
}

/// Closed form of the `γ = 1`, `d = 3` Riesz mean:
/// `(ℓ+1)η²/4 - (ℓ+1)(ℓ+2)(2ℓ+3)/6`, or 0 when `η ≤ 2`.
pub fn riesz_mean_d3_closed_form(eta: &BigRational) -> BigRational {
    if eta <= &int(2) {
        return BigRational::zero();
    }
    let tau = (eta - int(2)) / int(2);
    let l = BigRational::from_integer(ceil(&tau) - BigInt::one());
    let l1 = &l + int(1);
    &l1 * eta * eta / int(4) - &l1 * (&l + int(2)) * (&l * int(2) + int(3)) / int(6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;
    use proptest::prelude::*;

    fn params(d: u32, eta: &str) -> SpectrumParams {
        SpectrumParams::new(d, parse_rational(eta).unwrap()).unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        for d in 3..10 {
            assert_eq!(multiplicity(d, 0), BigUint::one());
        }
        assert_eq!(multiplicity(3, 2), BigUint::from(9u32));
        // 7!·11/(5!·3!)
        assert_eq!(multiplicity(6, 3), factorial(7) * 11u32 / (factorial(5) * factorial(3)));
        assert_eq!(multiplicity(6, 3), BigUint::from(77u32));
        for j in 0..10u64 {
            assert_eq!(multiplicity(3, j), BigUint::from((j + 1) * (j + 1)));
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_function(&params(3, "2")), BigUint::zero());
        assert_eq!(counting_function(&params(3, "3")), BigUint::one());
        let p = params(6, "11.1");
        assert_eq!(p.ell(), Some(3));
        let direct: BigUint = (0..=3).map(|j| multiplicity(6, j)).sum();
        assert_eq!(direct, BigUint::from(1u32 + 7 + 27 + 77));
        assert_eq!(counting_function(&p), BigUint::from(112u32));
    }

    #[test]
    fn riesz_examples() {
        let one = int(1);
        assert_eq!(riesz_mean(&params(3, "2"), &one, 30).unwrap(), RieszValue::Exact(int(0)));
        assert_eq!(riesz_mean(&params(3, "3"), &one, 30).unwrap(), RieszValue::Exact(rat(5, 4)));
        let expect = rat(91, 9) + int(15) + rat(102, 7) + rat(190, 27);
        assert_eq!(expect, rat(8830, 189));
        assert_eq!(riesz_mean(&params(4, "10"), &one, 30).unwrap(), RieszValue::Exact(expect));
    }

    #[test]
    fn d3_closed_form_examples() {
        assert_eq!(riesz_mean_d3_closed_form(&int(3)), rat(5, 4));
        assert_eq!(riesz_mean_d3_closed_form(&int(5)), rat(15, 2));
        assert_eq!(riesz_mean_d3_closed_form(&int(2)), int(0));
        for k in 21..=200 {
            let eta = rat(k, 10);
            let p = SpectrumParams::new(3, eta.clone()).unwrap();
            assert_eq!(
                riesz_mean(&p, &int(1), 30).unwrap(),
                RieszValue::Exact(riesz_mean_d3_closed_form(&eta))
            );
        }
    }

    #[test]
    fn hockey_stick_and_binomial_forms() {
        for d in 3..=30u32 {
            let mut running = BigUint::zero();
            for k in 0..=60u64 {
                let m = multiplicity(d, k);
                assert_eq!(m, multiplicity_binomial(d, k), "d={d} j={k}");
                running += m;
                assert_eq!(running, cumulative_count(d, k), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn zero_energy_level_not_counted() {
        for d in 3..12u32 {
            for j in 0..8u64 {
                let at = int(2 * j as i64 + d as i64 - 1);
                let below = &at - rat(1, 1_000_000);
                let p_at = SpectrumParams::new(d, at).unwrap();
                let p_below = SpectrumParams::new(d, below).unwrap();
                assert_eq!(p_at.ell(), p_below.ell());
                assert_eq!(counting_function(&p_at), counting_function(&p_below));
            }
        }
    }

    #[test]
    fn half_integer_gamma_enclosure_matches_high_precision() {
        let p = params(5, "10");
        let g = rat(3, 2);
        let e = riesz_mean_enclosure(&p, &g, 200).unwrap();
        let h = riesz_mean(&p, &g, 30).unwrap().approx(30);
        assert!(e.width() < rat(1, 10).pow(40));
        let tol = rat(1, 10).pow(25);
        assert!(&e.lo - &tol < *h.value() && *h.value() < &e.hi + &tol);
    }

    proptest! {
        #[test]
        fn gamma_zero_is_the_count(d in 3u32..20, num in 1i64..4000, den in 1i64..40) {
            let p = SpectrumParams::new(d, rat(num, den)).unwrap();
            prop_assert_eq!(
                riesz_mean(&p, &int(0), 30).unwrap(),
                RieszValue::Exact(from_biguint(&counting_function(&p)))
            );
        }
    }
}
