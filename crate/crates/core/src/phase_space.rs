//! Semiclassical constants and the phase-space side of the LT and CLR bounds.
//!
//! With `Λ = 1`, the right-hand side of the LT inequality is
//! `η^d/2^{d-1} · Γ(γ+1)Γ(d/2-γ) / (Γ(d+1)Γ(d/2))`, finite for `0 ≤ γ < d/2`.
//! When `2γ` is an integer every Gamma factor is `r·π^{m/2}`, so the product
//! is assembled symbolically before anything is evaluated.

use std::cmp::Ordering;
use std::ops::{Div, Mul};

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::hpr::{self, digits_to_bits, pi_enclosure, sqrt_enclosure, Enclosure, HighPrecisionReal};
use crate::exact::{factorial, fraction_string, from_biguint, int, powi, rat};

/// `ratio · π^{pi_half_power/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiScaledRational {
    pub ratio: BigRational,
    pub pi_half_power: i64,
}

impl PiScaledRational {
    pub fn rational(r: BigRational) -> Self {
        PiScaledRational {
            ratio: r,
            pi_half_power: 0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.pi_half_power == 0 || self.ratio.is_zero()).then_some(&self.ratio)
    }

    /// Exact comparison; only defined for equal powers of `π`.
    pub fn cmp_exact(&self, other: &Self) -> Option<Ordering> {
        // π^{m/2} > 0, so the ratios decide.
        (self.pi_half_power == other.pi_half_power).then(|| self.ratio.cmp(&other.ratio))
    }

    /// Rigorous enclosure of the real value.
    pub fn enclosure(&self, bits: u64) -> Enclosure {
        let m = self.pi_half_power;
        let extra = 8 + 4 * m.unsigned_abs();
        let pi = pi_enclosure(bits + extra);
        let mut e = pi.powi(m.div_euclid(2));
        if m.rem_euclid(2) == 1 {
            let root = Enclosure::new(
                sqrt_enclosure(&pi.lo, bits + extra).lo,
                sqrt_enclosure(&pi.hi, bits + extra).hi,
            );
            e = e.mul(&root);
        }
        e.scale(&self.ratio).outward(bits + 4 + self.ratio.numer().bits().max(self.ratio.denom().bits()))
    }

    pub fn to_high_precision(&self, precision: u32) -> HighPrecisionReal {
        match self.as_rational() {
            Some(r) => HighPrecisionReal::exact(r.clone(), precision),
            None => {
                let bits = digits_to_bits(precision + 10);
                HighPrecisionReal::exact(hpr::round_rel(&self.enclosure(bits).midpoint(), bits), precision)
            }
        }
    }

    pub fn render(&self) -> String {
        let r = fraction_string(&self.ratio);
        match self.pi_half_power {
            0 => r,
            2 => format!("{r}*pi"),
            1 => format!("{r}*pi^(1/2)"),
            m if m % 2 == 0 => format!("{r}*pi^{}", m / 2),
            m => format!("{r}*pi^({m}/2)"),
        }
    }
}

impl Mul for &PiScaledRational {
    type Output = PiScaledRational;
    fn mul(self, rhs: &PiScaledRational) -> PiScaledRational {
        PiScaledRational {
            ratio: &self.ratio * &rhs.ratio,
            pi_half_power: self.pi_half_power + rhs.pi_half_power,
        }
    }
}

impl Div for &PiScaledRational {
    type Output = PiScaledRational;
    fn div(self, rhs: &PiScaledRational) -> PiScaledRational {
        PiScaledRational {
            ratio: &self.ratio / &rhs.ratio,
            pi_half_power: self.pi_half_power - rhs.pi_half_power,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GammaValue {
    Exact(PiScaledRational),
    Approx(HighPrecisionReal),
}

/// Exact `Γ(x)` for `2x ∈ ℕ`.
pub fn gamma_half_integer(x: &BigRational) -> Option<PiScaledRational> {
    if !x.is_positive() || !(x * int(2)).is_integer() {
        return None;
    }
    if x.is_integer() {
        let n = x.to_integer().to_u64()?;
        return Some(PiScaledRational::rational(from_biguint(&factorial(n - 1))));
    }
    // Γ(n + 1/2) = (2n)! √π / (4^n n!)
    let n = (x - rat(1, 2)).to_integer().to_u64()?;
    let num = from_biguint(&factorial(2 * n));
    let den = powi(&int(4), n as i64) * from_biguint(&factorial(n));
    Some(PiScaledRational {
        ratio: num / den,
        pi_half_power: 1,
    })
}

pub fn gamma_at(x: &BigRational, precision: u32) -> Result<GammaValue> {
    if !x.is_positive() {
        return Err(Error::Precondition(format!(
            "Gamma needs x > 0, got {}",
            fraction_string(x)
        )));
    }
    if let Some(v) = gamma_half_integer(x) {
        return Ok(GammaValue::Exact(v));
    }
    let v = HighPrecisionReal::evaluate(precision, |digits| Ok(hpr::gamma(x, digits_to_bits(digits))))?;
    Ok(GammaValue::Approx(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhaseValue {
    Exact(PiScaledRational),
    Approx(HighPrecisionReal),
}

impl PhaseValue {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            PhaseValue::Exact(p) => p.as_rational(),
            PhaseValue::Approx(_) => None,
        }
    }

    pub fn to_high_precision(&self, precision: u32) -> HighPrecisionReal {
        match self {
            PhaseValue::Exact(p) => p.to_high_precision(precision),
            PhaseValue::Approx(h) => h.clone(),
        }
    }
}

fn check_gamma_range(d: u32, gamma: &BigRational) -> Result<()> {
    if gamma.is_negative() {
        return Err(Error::Precondition("gamma must be non-negative".into()));
    }
    let half_d = rat(d as i64, 2);
    if gamma >= &half_d {
        return Err(Error::PhaseSpaceDiverges {
            gamma: fraction_string(gamma),
            half_d: fraction_string(&half_d),
        });
    }
    Ok(())
}

fn eta_prefactor(d: u32, eta: &BigRational) -> BigRational {
    powi(eta, d as i64) / powi(&int(2), d as i64 - 1)
}

/// Right-hand side of the LT inequality in units `Λ^γ`.
pub fn lt_rhs(d: u32, eta: &BigRational, gamma: &BigRational, precision: u32) -> Result<PhaseValue> {
    check_gamma_range(d, gamma)?;
    let half_d = rat(d as i64, 2);
    let pre = PiScaledRational::rational(eta_prefactor(d, eta));
    let g = |x: &BigRational| gamma_half_integer(x);
    if let (Some(a), Some(b), Some(c), Some(e)) = (
        g(&(gamma + int(1))),
        g(&(&half_d - gamma)),
        g(&int(d as i64 + 1)),
        g(&half_d),
    ) {
        let v = &(&(&pre * &a) * &b) / &(&c * &e);
        return Ok(PhaseValue::Exact(v));
    }
    let eta = eta.clone();
    let gamma = gamma.clone();
    let v = HighPrecisionReal::evaluate(precision, move |digits| {
        let bits = digits_to_bits(digits) + 16;
        let lg = hpr::ln_gamma(&(&gamma + int(1)), bits) + hpr::ln_gamma(&(&half_d - &gamma), bits)
            - hpr::ln_gamma(&int(d as i64 + 1), bits)
            - hpr::ln_gamma(&half_d, bits);
        Ok(hpr::round_rel(&(hpr::exp(&lg, bits) * eta_prefactor(d, &eta)), bits))
    })?;
    Ok(PhaseValue::Approx(v))
}

/// CLR right-hand side `η^d / (2^{d-1} d!)`.
pub fn clr_rhs(d: u32, eta: &BigRational) -> BigRational {
    eta_prefactor(d, eta) / from_biguint(&factorial(d as u64))
}

/// `γ = 1` right-hand side `2^{2-d} η^d / (d! (d-2))`.
pub fn lt_rhs_gamma1(d: u32, eta: &BigRational) -> BigRational {
    powi(&int(2), 2 - d as i64) * powi(eta, d as i64)
        / (from_biguint(&factorial(d as u64)) * int(d as i64 - 2))
}

/// `L^cl_{γ,d} = Γ(γ+1) / ((4π)^{d/2} Γ(γ+1+d/2))`; carries `π^{-d/2}` and is
/// only ever returned as a high-precision real.
pub fn semiclassical_constant(gamma: &BigRational, d: u32, precision: u32) -> Result<HighPrecisionReal> {
    if gamma.is_negative() {
        return Err(Error::Precondition("gamma must be non-negative".into()));
    }
    let half_d = rat(d as i64, 2);
    let gamma = gamma.clone();
    HighPrecisionReal::evaluate(precision, move |digits| {
        let bits = digits_to_bits(digits) + 16;
        let lg = hpr::ln_gamma(&(&gamma + int(1)), bits) - hpr::ln_gamma(&(&gamma + int(1) + &half_d), bits);
        let four_pi = hpr::pi(bits) * int(4);
        let denom = hpr::powr(&four_pi, &half_d, bits);
        Ok(hpr::round_rel(&(hpr::exp(&lg, bits) / denom), bits))
    })
}

/// `∫(η/|x| - 1)_+^{γ+d/2} dx` times `L^cl`, the product in `lt_rhs`, as a
/// sanity path through the standalone constant.
pub fn lt_rhs_via_constant(d: u32, eta: &BigRational, gamma: &BigRational, precision: u32) -> Result<HighPrecisionReal> {
    check_gamma_range(d, gamma)?;
    let l = semiclassical_constant(gamma, d, precision + 10)?;
    let half_d = rat(d as i64, 2);
    let eta = eta.clone();
    let gamma = gamma.clone();
    HighPrecisionReal::evaluate(precision, move |digits| {
        let bits = digits_to_bits(digits) + 16;
        let lg = hpr::ln_gamma(&(&gamma + int(1) + &half_d), bits) + hpr::ln_gamma(&(&half_d - &gamma), bits)
            - hpr::ln_gamma(&int(d as i64 + 1), bits)
            - hpr::ln_gamma(&half_d, bits);
        let four_pi = hpr::pi(bits) * int(4);
        let integral = hpr::powr(&four_pi, &half_d, bits) * hpr::exp(&lg, bits) * eta_prefactor(d, &eta);
        Ok(hpr::round_rel(&(integral * l.value()), bits))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    #[test]
    fn gamma_examples() {
        assert_eq!(
            gamma_at(&int(1), 30).unwrap(),
            GammaValue::Exact(PiScaledRational::rational(int(1)))
        );
        let half = gamma_at(&rat(1, 2), 30).unwrap();
        assert_eq!(
            half,
            GammaValue::Exact(PiScaledRational {
                ratio: int(1),
                pi_half_power: 1
            })
        );
        assert_eq!(gamma_half_integer(&rat(7, 2)).unwrap().ratio, rat(15, 8));
        assert!(gamma_at(&int(0), 30).is_err());
        assert!(gamma_at(&rat(-1, 2), 30).is_err());
    }

    #[test]
    fn gamma_recurrence_on_half_integer_grid() {
        for k in 1..=100i64 {
            let x = rat(k, 2);
            let gx = gamma_half_integer(&x).unwrap();
            let gx1 = gamma_half_integer(&(&x + int(1))).unwrap();
            assert_eq!(gx1, &gx * &PiScaledRational::rational(x.clone()));
        }
    }

    #[test]
    fn gamma_generic_point_matches_reference() {
        // Γ(1/3)
        let GammaValue::Approx(v) = gamma_at(&rat(1, 3), 30).unwrap() else {
            panic!("expected numeric path");
        };
        assert_eq!(v.to_decimal(), "2.67893853470774763365569294097");
    }

    #[test]
    fn lt_rhs_examples() {
        let v = lt_rhs(3, &int(3), &int(0), 30).unwrap();
        assert_eq!(v.as_rational(), Some(&rat(9, 8)));
        for eta in ["5/2", "7", "13/3"] {
            let eta = parse_rational(eta).unwrap();
            let v = lt_rhs(3, &eta, &int(1), 30).unwrap();
            assert_eq!(v.as_rational(), Some(&(powi(&eta, 3) / int(12))));
        }
        let v = lt_rhs(4, &int(10), &int(1), 30).unwrap();
        assert_eq!(v.as_rational(), Some(&rat(2500, 48)));
        assert!(matches!(
            lt_rhs(4, &int(10), &int(2), 30),
            Err(Error::PhaseSpaceDiverges { .. })
        ));
    }

    #[test]
    fn clr_examples() {
        assert_eq!(clr_rhs(3, &int(2)), rat(1, 3));
        let eta = rat(111, 10);
        let v = clr_rhs(6, &eta);
        assert_eq!(v, powi(&int(111), 6) / (powi(&int(10), 6) * int(23040)));
        assert!(v > rat(8118, 100) && v < rat(8119, 100));
        assert_eq!(clr_rhs(3, &rat(1, 10)), rat(1, 24000));
        let mut prev = clr_rhs(3, &int(1));
        for k in 1..50 {
            let v = clr_rhs(3, &rat(1, k + 1));
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn gamma_one_and_zero_closed_forms() {
        for d in 3..=30u32 {
            for eta in ["1/3", "5", "111/10", "47"] {
                let eta = parse_rational(eta).unwrap();
                let v = lt_rhs(d, &eta, &int(1), 30).unwrap();
                assert_eq!(v.as_rational(), Some(&lt_rhs_gamma1(d, &eta)), "d={d}");
                let v = lt_rhs(d, &eta, &int(0), 30).unwrap();
                assert_eq!(v.as_rational(), Some(&clr_rhs(d, &eta)), "d={d}");
            }
        }
    }

    #[test]
    fn half_integer_gamma_pi_bookkeeping() {
        // Odd d: the half-integer factors pair up.
        let v = lt_rhs(5, &int(10), &rat(3, 2), 30).unwrap();
        assert!(v.as_rational().is_some());
        // Even d: one factor of π survives.
        let PhaseValue::Exact(v) = lt_rhs(4, &int(10), &rat(1, 2), 30).unwrap() else {
            panic!("expected exact path");
        };
        assert_eq!(v.pi_half_power, 2);
        let e = v.enclosure(120);
        let h = lt_rhs_via_constant(4, &int(10), &rat(1, 2), 30).unwrap();
        let tol = rat(1, 10).pow(25);
        assert!(&e.lo - &tol < *h.value() && *h.value() < &e.hi + &tol);
    }

    #[test]
    fn generic_gamma_is_self_consistent() {
        let eta = rat(37, 3);
        for (d, g) in [(5u32, rat(7, 5)), (6, rat(5, 3)), (9, rat(13, 4))] {
            let a = lt_rhs(d, &eta, &g, 20).unwrap().to_high_precision(20);
            let b = lt_rhs(d, &eta, &g, 30).unwrap().to_high_precision(30);
            let rel = ((a.value() - b.value()) / b.value()).abs();
            assert!(rel < rat(1, 10).pow(19));
            let c = lt_rhs_via_constant(d, &eta, &g, 20).unwrap();
            let rel = ((c.value() - b.value()) / b.value()).abs();
            assert!(rel < rat(1, 10).pow(18));
        }
    }

    #[test]
    fn semiclassical_constant_d3_gamma0() {
        // L^cl_{0,3} = 1/(6π²)
        let v = semiclassical_constant(&int(0), 3, 25).unwrap();
        let pi = hpr::pi(120);
        let expect = (&pi * &pi * int(6)).recip();
        assert!(((v.value() - &expect) / &expect).abs() < rat(1, 10).pow(24));
    }
}
