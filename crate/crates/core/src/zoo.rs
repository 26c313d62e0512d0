//! The named functions `Q_d`, `R_d`, `f_d`, `A_d`, `g_d`, `g̃_d`, `h_a`, `G`
//! and the shifted Pochhammer symbols, with exact evaluation and co-prime
//! polynomial expansions.
//!
//! `A_d` and `G` carry half-integer powers when `d` is odd; their squares are
//! rational functions, and every order comparison goes through the square.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::hpr::{self, digits_to_bits, HighPrecisionReal};
use crate::exact::poly::Polynomial;
use crate::exact::ratfun::RationalFunctionPair;
use crate::exact::{fraction_string, from_biguint, int, powi, rat};
use crate::phase_space::clr_rhs;
use crate::spectrum::{counting_function, SpectrumParams};

fn half(n: i64) -> BigRational {
    rat(n, 2)
}

fn pole_error(t: &BigRational) -> Error {
    Error::Pole {
        point: fraction_string(t),
    }
}

/// `p_m(t) = ∏_{k=1}^{m} (t+k)`.
pub fn pochhammer_eval(m: u64, t: &BigRational) -> BigRational {
    BigRational::new(pochhammer_numer(m, t), t.denom().pow(m as u32))
}

/// `∏ (n + k·q)` for `t = n/q`.
fn pochhammer_numer(m: u64, t: &BigRational) -> BigInt {
    let (n, q) = (t.numer(), t.denom());
    (1..=m as i64).fold(BigInt::one(), |acc, k| acc * (n + q * k))
}

/// `2n + c·q` for `t = n/q`, i.e. `2q(t + c/2)`.
fn twice_shifted(t: &BigRational, c: i64) -> BigInt {
    t.numer() * 2 + t.denom() * c
}

pub fn pochhammer_poly(m: u64) -> Polynomial {
    if m == 0 {
        return Polynomial::one();
    }
    let shifts: Vec<BigRational> = (1..=m as i64).map(int).collect();
    Polynomial::from_linear_factors(&shifts)
}

/// `Q_d(t) = (t+(d-1)/2)^{-d} (t+d/2) ∏_{j=1}^{d-1} (t+j)`.
pub fn q_eval(d: u32, t: &BigRational) -> Result<BigRational> {
    let base = twice_shifted(t, d as i64 - 1);
    if base.is_zero() {
        return Err(pole_error(t));
    }
    let num = twice_shifted(t, d as i64) * pochhammer_numer(d as u64 - 1, t) * (BigInt::one() << (d - 1));
    Ok(BigRational::new(num, base.pow(d)))
}

pub fn q_as_ratfun(d: u32) -> RationalFunctionPair {
    let num = Polynomial::linear(half(d as i64)) * pochhammer_poly(d as u64 - 1);
    let den = Polynomial::linear(half(d as i64 - 1)).pow(d as usize);
    RationalFunctionPair::new(num, den).expect("nonzero denominator")
}

/// CLR excess factor `R_d(η) = N / (L^cl ∫ ...)`; 0 when the spectrum is empty.
pub fn r_eval(d: u32, eta: &BigRational) -> Result<BigRational> {
    let p = SpectrumParams::new(d, eta.clone())?;
    Ok(from_biguint(&counting_function(&p)) / clr_rhs(d, eta))
}

/// `R_d` through the product form `(d+2ℓ) ∏(ℓ+j) / (2^{1-d} η^d)`.
pub fn r_eval_product(d: u32, eta: &BigRational) -> Result<BigRational> {
    let p = SpectrumParams::new(d, eta.clone())?;
    let Some(ell) = p.ell() else {
        return Ok(BigRational::zero());
    };
    let l = int(ell as i64);
    Ok((int(d as i64) + &l * int(2)) * pochhammer_eval(d as u64 - 1, &l)
        / (powi(&int(2), 1 - d as i64) * powi(eta, d as i64)))
}

fn unit_range(from: i64, to: i64) -> impl Iterator<Item = (BigRational, BigRational)> {
    (from..=to).map(|k| (BigRational::one(), int(k)))
}

/// `f_d = 1/(t+d/2) - d/(t+(d-1)/2) + Σ_{k=1}^{d-1} 1/(t+k)`, the
/// log-derivative of `Q_d`.
pub fn f_as_ratfun(d: u32) -> RationalFunctionPair {
    let d = d as i64;
    let mut terms = vec![(int(1), half(d)), (int(-d), half(d - 1))];
    terms.extend(unit_range(1, d - 1));
    RationalFunctionPair::from_partial_fractions(&terms).expect("nonempty")
}

/// `g_d = (1-d/2)/(t+d/2) - (d/2)/(t+d/2-1) + Σ_{k=1}^{d-1} 1/(t+k)`, the
/// log-derivative of `A_d`.
pub fn g_as_ratfun(d: u32) -> RationalFunctionPair {
    let d = d as i64;
    let mut terms = vec![(int(1) - half(d), half(d)), (-half(d), half(d - 2))];
    terms.extend(unit_range(1, d - 1));
    RationalFunctionPair::from_partial_fractions(&terms).expect("nonempty")
}

/// `g̃_d(s) = g_d(s - (d-1)/2)`, built directly in the shifted variable.
pub fn g_shifted_as_ratfun(d: u32) -> RationalFunctionPair {
    let d = d as i64;
    let c = half(d - 1);
    let mut terms = vec![(int(1) - half(d), half(1)), (-half(d), half(-1))];
    terms.extend((1..d).map(|k| (BigRational::one(), int(k) - &c)));
    RationalFunctionPair::from_partial_fractions(&terms).expect("nonempty")
}

fn require_odd(d: u32) -> Result<()> {
    if d < 5 || d.is_multiple_of(2) {
        return Err(Error::Precondition(format!("needs odd d >= 5, got d = {d}")));
    }
    Ok(())
}

/// `a_d = 1/2 + 1/(2(d-3))`.
pub fn a_d(d: u32) -> BigRational {
    half(1) + rat(1, 2 * (d as i64 - 3))
}

/// `h_a(s)`: `g̃_d` with the pole `1/s` replaced by `(1-a)/(s-1/2) + a/(s+1/2)`.
pub fn h_a_as_ratfun(d: u32, a: &BigRational) -> Result<RationalFunctionPair> {
    require_odd(d)?;
    if a.is_negative() || a > &int(1) {
        return Err(Error::Precondition("a must lie in [0, 1]".into()));
    }
    let di = d as i64;
    let mut terms = vec![
        (int(1) - half(di), half(1)),
        (-half(di), half(-1)),
        (int(1) - a, half(-1)),
        (a.clone(), half(1)),
    ];
    terms.extend(unit_range(-(di - 3) / 2, (di - 1) / 2).filter(|(_, k)| !k.is_zero()));
    RationalFunctionPair::from_partial_fractions(&terms)
}

/// `A_d(t)² = (t+d/2)^{2-d} (t+d/2-1)^{-d} ∏ (t+k)²`.
pub fn a_eval_squared(d: u32, t: &BigRational) -> Result<BigRational> {
    let u = twice_shifted(t, d as i64);
    let v = twice_shifted(t, d as i64 - 2);
    if u.is_zero() || v.is_zero() {
        return Err(pole_error(t));
    }
    let p = pochhammer_numer(d as u64 - 1, t);
    Ok(BigRational::new((&p * &p) << (2 * d - 2), u.pow(d - 2) * v.pow(d)))
}

pub fn a_squared_as_ratfun(d: u32) -> RationalFunctionPair {
    let d = d as usize;
    let p = pochhammer_poly(d as u64 - 1);
    let num = &p * &p;
    let den = Polynomial::linear(half(d as i64)).pow(d - 2) * Polynomial::linear(half(d as i64 - 2)).pow(d);
    RationalFunctionPair::new(num, den).expect("nonzero denominator")
}

/// Exact `A_d(t)` for even `d`.
pub fn a_eval_exact(d: u32, t: &BigRational) -> Result<Option<BigRational>> {
    if d % 2 == 1 {
        return Ok(None);
    }
    let d = d as i64;
    let u = t + half(d);
    let v = t + half(d - 2);
    if u.is_zero() || v.is_zero() {
        return Err(pole_error(t));
    }
    Ok(Some(powi(&u, 1 - d / 2) * powi(&v, -d / 2) * pochhammer_eval(d as u64 - 1, t)))
}

fn sqrt_positive(sq: BigRational, precision: u32) -> Result<HighPrecisionReal> {
    HighPrecisionReal::evaluate(precision, |digits| Ok(hpr::sqrt(&sq, digits_to_bits(digits))))
}

/// Positive `A_d(t)` for `t ≥ 0`.
pub fn a_eval(d: u32, t: &BigRational, precision: u32) -> Result<HighPrecisionReal> {
    if t.is_negative() {
        return Err(Error::Precondition("A_d is evaluated for t >= 0".into()));
    }
    if let Some(v) = a_eval_exact(d, t)? {
        return Ok(HighPrecisionReal::exact(v, precision));
    }
    sqrt_positive(a_eval_squared(d, t)?, precision)
}

/// `α(t) = 1 + (d-3)/(d-1+2t) + 1/(2(d-2+t))`, the bracket inside `G`.
fn g_bracket(d: u32, t: &BigRational) -> BigRational {
    let d = d as i64;
    int(1) + int(d - 3) / (t * int(2) + int(d - 1)) + (int(2) * (t + int(d - 2))).recip()
}

/// `G(t)² = p_{d-2}(t)² α^d ((d/2+t)(d+t-1))^{2-d}`.
pub fn big_g_squared(d: u32, t: &BigRational) -> Result<BigRational> {
    if d < 4 || t.is_negative() {
        return Err(Error::Precondition("G needs d >= 4 and t >= 0".into()));
    }
    let di = d as i64;
    let p = pochhammer_eval(d as u64 - 2, t);
    let w = (t + half(di)) * (t + int(di - 1));
    Ok(&p * &p * powi(&g_bracket(d, t), di) * powi(&w, 2 - di))
}

/// Exact `G(t)` for even `d`.
pub fn big_g_exact(d: u32, t: &BigRational) -> Result<Option<BigRational>> {
    big_g_squared(d, t)?;
    if d % 2 == 1 {
        return Ok(None);
    }
    let di = d as i64;
    let w = (t + half(di)) * (t + int(di - 1));
    Ok(Some(
        pochhammer_eval(d as u64 - 2, t) * powi(&g_bracket(d, t), di / 2) * powi(&w, 1 - di / 2),
    ))
}

pub fn big_g_eval(d: u32, t: &BigRational, precision: u32) -> Result<HighPrecisionReal> {
    if let Some(v) = big_g_exact(d, t)? {
        return Ok(HighPrecisionReal::exact(v, precision));
    }
    sqrt_positive(big_g_squared(d, t)?, precision)
}

/// `g(t) = G(t - (d-1)/2)`, squared.
pub fn big_g_shifted_squared(d: u32, t: &BigRational) -> Result<BigRational> {
    big_g_squared(d, &(t - half(d as i64 - 1)))
}

/// Numerator of `Σ c_i/(t - r_i)` over `∏(t - r_i)`, without cancellation.
fn unreduced_numerator(terms: &[(BigRational, BigRational)]) -> Polynomial {
    let mut num = Polynomial::zero();
    for (i, (c, _)) in terms.iter().enumerate() {
        let others: Vec<BigRational> = terms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (_, r))| -r)
            .collect();
        num = &num + &Polynomial::from_linear_factors(&others).scale(c);
    }
    num
}

/// The lower bound for `(log g)'` as the five-term sum
/// `1/(t-(d-3)/2) - (d/2)/t + (d/2-2)/(t+1/2) + (d/2)/(t+(d-2)/2) - (d/2-1)/(t+(d-1)/2)`,
/// returned as its numerator over the product of the five linear factors.
pub fn h_poly_symbolic(d: u32) -> Polynomial {
    let d = d as i64;
    let terms = [
        (int(1), half(d - 3)),
        (-half(d), int(0)),
        (half(d) - int(2), half(-1)),
        (half(d), -half(d - 2)),
        (int(1) - half(d), -half(d - 1)),
    ];
    unreduced_numerator(&terms)
}

/// `h(t) = (d-2)(d-4)/4 t² + (5d-16)(d-1)(d-2)/16 t + d(d-1)(d-2)(d-3)/32`.
pub fn h_poly_closed_form(d: u32) -> Polynomial {
    let d = d as i64;
    Polynomial::new(vec![
        rat(d * (d - 1) * (d - 2) * (d - 3), 32),
        rat((5 * d - 16) * (d - 1) * (d - 2), 16),
        rat((d - 2) * (d - 4), 4),
    ])
}

/// Log-derivative identities checked as rational-function identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogDerivKind {
    Q,
    ASquared,
}

pub fn logderiv_check(kind: LogDerivKind, d: u32) -> bool {
    match kind {
        LogDerivKind::Q => match q_as_ratfun(d).log_derivative() {
            Ok(ld) => ld.same_function(&f_as_ratfun(d)),
            Err(_) => false,
        },
        LogDerivKind::ASquared => match a_squared_as_ratfun(d).log_derivative() {
            Ok(ld) => ld.same_function(&g_as_ratfun(d).scale(&int(2))),
            Err(_) => false,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichCertificate {
    pub s: BigRational,
    pub lower: BigRational,
    pub middle: BigRational,
    pub upper: BigRational,
    pub strict: bool,
}

/// Certifies `h_{a_d}(s) < g̃_d(s) < h_{1/2}(s)` at a point `s > (d-3)/2`.
pub fn g_shifted_sandwich_check(d: u32, s: &BigRational) -> Result<SandwichCertificate> {
    require_odd(d)?;
    if s <= &half(d as i64 - 3) {
        return Err(Error::Precondition(format!(
            "sandwich needs s > (d-3)/2 = {}",
            fraction_string(&half(d as i64 - 3))
        )));
    }
    let lower = h_a_as_ratfun(d, &a_d(d))?.eval(s)?;
    let middle = g_shifted_as_ratfun(d).eval(s)?;
    let upper = h_a_as_ratfun(d, &half(1))?.eval(s)?;
    let strict = lower < middle && middle < upper;
    Ok(SandwichCertificate {
        s: s.clone(),
        lower,
        middle,
        upper,
        strict,
    })
}

/// Top two numerator coefficients `(t^{d-2}, t^{d-3})` of `f_d` predicted in
/// closed form: `-d/2 · (1, d²/3 - ⌊d/2⌋ - 1/3)`.
pub fn f_coefficient_formula(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let lead = -half(di);
    let next = &lead * (rat(di * di, 3) - int(di / 2) - rat(1, 3));
    (lead, next)
}

/// Even `d ≥ 6`: `g_d` numerator `-d/2 · (t^{d-3} + (d²/3 - d + 2/3) t^{d-4} + …)`.
pub fn g_even_coefficient_formula(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let lead = -half(di);
    let next = &lead * (rat(di * di, 3) - int(di) + rat(2, 3));
    (lead, next)
}

/// Odd `d`: `p_a` leading coefficients `-((d-1)/2 + a)` and
/// `(d³ - 6d² + 8d)/12 - (d-1)a/2`.
pub fn h_a_coefficient_formula(d: u32, a: &BigRational) -> (BigRational, BigRational) {
    let di = d as i64;
    let lead = -(half(di - 1) + a);
    let next = rat(di * di * di - 6 * di * di + 8 * di, 12) - half(di - 1) * a;
    (lead, next)
}

/// Coefficients of `t^{deg}` and `t^{deg-1}` of a numerator.
pub fn top_two(p: &Polynomial, deg: usize) -> (BigRational, BigRational) {
    (p.coeff(deg), if deg == 0 { BigRational::zero() } else { p.coeff(deg - 1) })
}

/// `S(d) = Σ_{k=1, k≠⌊d/2⌋}^{d-1} k` by direct summation, and its closed form.
pub fn appendix_s(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let direct: i64 = (1..di).filter(|&k| k != di / 2).sum();
    (int(direct), int((di - 1) * di / 2 - di / 2))
}

/// `T_1(d)` as `(d/2 - ⌊d/2⌋ - 1) S(d)` and in expanded form.
pub fn appendix_t1(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let fl = int(di / 2);
    let dd = int(di);
    let s = appendix_s(d).0;
    let product = (half(di) - &fl - int(1)) * s;
    let expanded = &fl * &fl + (int(1) - &dd * &dd / int(2)) * &fl + powi(&dd, 3) / int(4)
        - &dd * &dd * rat(3, 4)
        + &dd / int(2);
    (product, expanded)
}

/// `T_2(d)` as the defining sum and in expanded form.
pub fn appendix_t2(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let fl = int(di / 2);
    let dd = int(di);
    let s = appendix_s(d).0;
    let mut direct = BigRational::zero();
    for k in (1..di).filter(|&k| k != di / 2) {
        direct += (half(di - 1) - int(k)) * (half(di) + &s - int(k));
    }
    let expanded = -int(2) * &fl * &fl + (&dd * &dd / int(2) + &dd * rat(3, 2) - rat(3, 2)) * &fl
        - powi(&dd, 3) * rat(5, 12)
        + &dd * &dd / int(2)
        - &dd / int(12);
    (direct, expanded)
}

/// `Σ_{j=1}^{d-1} (2j-d+1)` directly and as `d-1`.
pub fn appendix_sum1(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let direct: i64 = (1..di).map(|j| 2 * j - di + 1).sum();
    (int(direct), int(di - 1))
}

/// `Σ_{j=1}^{d-1} (2j-d+1)²` directly and as `(4/3)d(d²-1) - (d-1)(d²+2d-1)`.
pub fn appendix_sum2(d: u32) -> (BigRational, BigRational) {
    let di = d as i64;
    let direct: i64 = (1..di).map(|j| (2 * j - di + 1).pow(2)).sum();
    let closed = rat(4 * di * (di * di - 1), 3) - int((di - 1) * (di * di + 2 * di - 1));
    (int(direct), closed)
}

/// `t_d = d²/6 - (d-1)/2`, chosen so that `2t_d + d - 1 = d²/3`.
pub fn appendix_t_d(d: u32) -> BigRational {
    let di = d as i64;
    rat(di * di, 6) - half(di - 1)
}

/// Intervals (in `s`) that each hold exactly one zero of `h_a`, for odd
/// `d ≥ 5`, followed by `((d-3)/2, ∞)` represented with upper bound `None`.
pub fn h_a_zero_intervals(d: u32) -> Vec<(BigRational, Option<BigRational>)> {
    let di = d as i64;
    let c = half(di - 1);
    let mut out = Vec::new();
    for j in 1..=(di - 3) / 2 {
        out.push((int(j - 1) - &c, Some(int(j) - &c)));
    }
    out.push((half(-1), Some(half(1))));
    for j in (di + 1) / 2..=di - 3 {
        out.push((int(j) - &c, Some(int(j + 1) - &c)));
    }
    out.push((half(di - 3), None));
    out
}

/// `X_a = ((d-1)/2 + a)^{-1} ((d³ - 6d² + 11d - 3)/12 - (d-2)a/2)`: `h_a ≥ 0`
/// on `((d-3)/2, X_a]` and `h_a ≤ 0` on `[X_a + d - 3, ∞)`.
pub fn h_a_sign_threshold(d: u32, a: &BigRational) -> BigRational {
    let di = d as i64;
    (rat(di * di * di - 6 * di * di + 11 * di - 3, 12) - half(di - 2) * a) / (half(di - 1) + a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    Q,
    R,
    F,
    A,
    ASquared,
    G,
    GShifted,
    HA,
    BigG,
    BigGShifted,
}

/// A named function instance with validated parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedFunction {
    pub kind: FunctionKind,
    pub d: u32,
    pub a: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionValue {
    Exact(BigRational),
    Approx(HighPrecisionReal),
}

impl NamedFunction {
    pub fn new(kind: FunctionKind, d: u32, a: Option<BigRational>) -> Result<Self> {
        if d < 3 {
            return Err(Error::Precondition(format!("d = {d} < 3")));
        }
        match kind {
            FunctionKind::HA => {
                require_odd(d)?;
                match &a {
                    Some(a) if !a.is_negative() && a <= &int(1) => {}
                    _ => return Err(Error::Precondition("h_a needs a in [0, 1]".into())),
                }
            }
            FunctionKind::BigG | FunctionKind::BigGShifted if d < 4 => {
                return Err(Error::Precondition("G needs d >= 4".into()));
            }
            _ => {}
        }
        Ok(NamedFunction { kind, d, a })
    }

    /// Rational-function form, where one exists.
    pub fn as_ratfun(&self) -> Option<RationalFunctionPair> {
        match self.kind {
            FunctionKind::Q => Some(q_as_ratfun(self.d)),
            FunctionKind::F => Some(f_as_ratfun(self.d)),
            FunctionKind::ASquared => Some(a_squared_as_ratfun(self.d)),
            FunctionKind::G => Some(g_as_ratfun(self.d)),
            FunctionKind::GShifted => Some(g_shifted_as_ratfun(self.d)),
            FunctionKind::HA => h_a_as_ratfun(self.d, self.a.as_ref()?).ok(),
            _ => None,
        }
    }

    pub fn eval(&self, x: &BigRational, precision: u32) -> Result<FunctionValue> {
        let exact = FunctionValue::Exact;
        Ok(match self.kind {
            FunctionKind::Q => exact(q_eval(self.d, x)?),
            FunctionKind::R => exact(r_eval(self.d, x)?),
            FunctionKind::A => match a_eval_exact(self.d, x)? {
                Some(v) => exact(v),
                None => FunctionValue::Approx(a_eval(self.d, x, precision)?),
            },
            FunctionKind::ASquared => exact(a_eval_squared(self.d, x)?),
            FunctionKind::BigG => match big_g_exact(self.d, x)? {
                Some(v) => exact(v),
                None => FunctionValue::Approx(big_g_eval(self.d, x, precision)?),
            },
            FunctionKind::BigGShifted => {
                let t = x - half(self.d as i64 - 1);
                match big_g_exact(self.d, &t)? {
                    Some(v) => exact(v),
                    None => FunctionValue::Approx(big_g_eval(self.d, &t, precision)?),
                }
            }
            _ => exact(self.as_ratfun().expect("rational kind").eval(x)?),
        })
    }
}

/// `μ`-free check of the closed-form level count used by `R_d`:
/// `N_ℓ · d! = (d+2ℓ)(d+ℓ-1) p_{d-2}(ℓ)`.
pub fn count_pochhammer_identity(d: u32, ell: u64) -> bool {
    let lhs = from_biguint(&(crate::spectrum::cumulative_count(d, ell) * crate::exact::factorial(d as u64)));
    let l = int(ell as i64);
    let rhs = (int(d as i64) + &l * int(2)) * (int(d as i64 - 1) + &l) * pochhammer_eval(d as u64 - 2, &l);
    lhs == rhs
}

/// Numerator degree of a rational function (`None` for zero).
pub fn numerator_degree(r: &RationalFunctionPair) -> Option<usize> {
    r.numerator.degree()
}

pub fn as_u64(r: &BigRational) -> Option<u64> {
    if r.is_integer() {
        r.to_integer().to_u64()
    } else {
        None
    }
}

pub fn biguint_of(n: u64) -> BigUint {
    BigUint::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::sturm::{bisect_root, sturm_count, RootBracket, SturmSequence};
    use crate::exact::parse_rational;
    use proptest::prelude::*;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_eval(0, &rat(7, 3)), int(1));
        for m in 1..10 {
            assert!(pochhammer_eval(m, &int(-1)).is_zero());
        }
        assert_eq!(pochhammer_eval(3, &int(2)), int(60));
        assert_eq!(pochhammer_poly(3).eval(&int(2)), int(60));
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_eval(3, &int(0)).unwrap(), int(3));
        assert_eq!(q_eval(4, &int(0)).unwrap(), rat(64, 27));
        assert_eq!(q_eval(5, &int(1)).unwrap(), rat(420, 243));
        assert!(q_eval(5, &int(-2)).is_err());
        assert_eq!(q_as_ratfun(5).eval(&int(1)).unwrap(), rat(420, 243));
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_eval(3, &int(3)).unwrap(), rat(8, 9));
        assert_eq!(r_eval(3, &int(2)).unwrap(), int(0));
        let r = r_eval(6, &rat(111, 10)).unwrap();
        assert!(r > rat(1379, 1000) && r < rat(1380, 1000));
        assert_eq!(r, r_eval_product(6, &rat(111, 10)).unwrap());
    }

    #[test]
    fn f_coprime_form() {
        for d in 3..=12u32 {
            let f = f_as_ratfun(d);
            assert!(f.is_coprime());
            let di = d as i64;
            let ceil_half = (di + 1) / 2;
            let q = Polynomial::linear(int(ceil_half) - half(1)) * pochhammer_poly(d as u64 - 1);
            assert_eq!(f.denominator, q, "d={d}");
            assert_eq!(f.numerator.degree(), Some(d as usize - 2));
        }
        let f4 = f_as_ratfun(4);
        assert_eq!(f4.denominator.degree(), Some(4));
        assert_eq!(top_two(&f4.numerator, 2), (int(-2), int(-6)));
    }

    #[test]
    fn f6_matches_hand_expansion() {
        // (2t+5)∏(t+k) denominator, numerator [-6,-52,-124,-20,130]/2 after making it monic
        let f = f_as_ratfun(6);
        let expect = Polynomial::from_ints(&[130, -20, -124, -52, -6]).scale(&rat(1, 2));
        assert_eq!(f.numerator, expect);
    }

    #[test]
    fn f3_negative_on_domain() {
        let f = f_as_ratfun(3);
        for k in 1..400 {
            let t = int(-1) + rat(k, 20);
            assert!(f.eval(&t).unwrap().is_negative(), "t={t}");
        }
        // Sturm: numerator has no zero in (-1, ∞)
        let b = crate::exact::sturm::root_upper_bound(&f.numerator);
        assert_eq!(sturm_count(&f.numerator, &int(-1), &b).unwrap(), 0);
    }

    #[test]
    fn f6_zero_layout() {
        let p = f_as_ratfun(6).numerator;
        assert_eq!(sturm_count(&p, &int(-5), &int(-1)).unwrap(), 3);
        assert_eq!(sturm_count(&p, &int(-1), &int(1_000_000)).unwrap(), 1);
    }

    #[test]
    fn f_zero_brackets() {
        let p4 = f_as_ratfun(4).numerator;
        let b = RootBracket::certified(&p4, int(-1), int(10)).unwrap();
        let r = bisect_root(&p4, &b, &rat(1, 1_000_000));
        assert!(r.inside(&int(-1), &int(0)));
        let p6 = f_as_ratfun(6).numerator;
        let b = RootBracket::certified(&p6, int(-1), int(1_000_000)).unwrap();
        let r = bisect_root(&p6, &b, &rat(1, 1_000_000));
        assert!(r.inside(&rat(-2, 3), &rat(7, 3)));
    }

    #[test]
    fn logderiv_identities() {
        assert!(logderiv_check(LogDerivKind::Q, 3));
        assert!(logderiv_check(LogDerivKind::Q, 10));
        assert!(logderiv_check(LogDerivKind::ASquared, 7));
        for d in 3..=16 {
            assert!(logderiv_check(LogDerivKind::Q, d));
            assert!(logderiv_check(LogDerivKind::ASquared, d));
        }
    }

    #[test]
    fn a_examples() {
        assert_eq!(a_eval_squared(3, &int(0)).unwrap(), rat(64, 3));
        assert_eq!(a_eval_squared(5, &int(0)).unwrap(), rat(147456, 30375));
        assert_eq!(a_eval_exact(4, &int(0)).unwrap(), Some(int(3)));
        assert_eq!(a_eval(4, &int(0), 30).unwrap().value(), &int(3));
        let v = a_eval(3, &int(0), 30).unwrap();
        // √(64/3) = 8/√3
        assert!(v.to_decimal().starts_with("4.61880215351700611607319"));
        assert!(a_eval_squared(4, &int(-2)).is_err());
        assert!(a_eval(5, &int(-1), 30).is_err());
    }

    #[test]
    fn h_a_examples() {
        let h = h_a_as_ratfun(5, &half(1)).unwrap();
        assert_eq!(h.numerator.leading(), rat(-5, 2));
        let h = h_a_as_ratfun(7, &rat(3, 4)).unwrap();
        assert_eq!(h.numerator.coeff(4), rat(26, 4));
        assert_eq!(a_d(9), rat(7, 12));
        for d in [5u32, 7, 9, 11] {
            for a in [half(1), a_d(d), int(0), int(1)] {
                let h = h_a_as_ratfun(d, &a).unwrap();
                let deg = d as usize - 2;
                assert_eq!(h.numerator.degree(), Some(deg));
                assert_eq!(top_two(&h.numerator, deg), h_a_coefficient_formula(d, &a));
                assert_eq!(h.denominator.degree(), Some(d as usize));
            }
        }
        assert!(h_a_as_ratfun(6, &half(1)).is_err());
        assert!(h_a_as_ratfun(7, &int(2)).is_err());
    }

    #[test]
    fn h_a_denominator_matches_closed_form() {
        for d in [5u32, 7, 9, 13] {
            let di = d as i64;
            let mut q = Polynomial::from_ints(&[0, 0, 1]) - Polynomial::constant(rat(1, 4));
            q = q * Polynomial::linear(half(di - 1));
            for k in 1..=(di - 3) / 2 {
                q = q * Polynomial::from_ints(&[-k * k, 0, 1]);
            }
            assert_eq!(h_a_as_ratfun(d, &a_d(d)).unwrap().denominator, q);
        }
    }

    #[test]
    fn h_a_zero_intervals_certified() {
        for d in (5..=21u32).step_by(2) {
            for a in [half(1), a_d(d)] {
                let p = h_a_as_ratfun(d, &a).unwrap().numerator;
                let seq = SturmSequence::new(&p);
                let ivs = h_a_zero_intervals(d);
                assert_eq!(ivs.len(), d as usize - 2);
                for (lo, hi) in &ivs {
                    let n = match hi {
                        Some(hi) => seq.count(lo, hi).unwrap(),
                        None => seq.count_above(lo).unwrap(),
                    };
                    assert_eq!(n, 1, "d={d} a={a} ({lo}, {hi:?})");
                }
            }
        }
    }

    #[test]
    fn g_shifted_is_shifted_g() {
        for d in [5u32, 7, 8, 9] {
            let g = g_as_ratfun(d);
            let c = half(d as i64 - 1);
            for k in 0..20 {
                let s = half(d as i64 - 3) + rat(2 * k + 1, 7);
                let lhs = g_shifted_as_ratfun(d).eval(&s).unwrap();
                assert_eq!(lhs, g.eval(&(&s - &c)).unwrap());
            }
        }
    }

    #[test]
    fn g_even_form() {
        for d in (6..=20u32).step_by(2) {
            let g = g_as_ratfun(d);
            assert_eq!(g.denominator, pochhammer_poly(d as u64 - 1));
            let deg = d as usize - 3;
            assert_eq!(g.numerator.degree(), Some(deg));
            assert_eq!(top_two(&g.numerator, deg), g_even_coefficient_formula(d));
        }
        // d = 4: the pole at -2 cancels.
        assert_eq!(g_as_ratfun(4).denominator.degree(), Some(2));
    }

    #[test]
    fn sandwich_examples() {
        assert!(g_shifted_sandwich_check(5, &int(3)).unwrap().strict);
        assert!(g_shifted_sandwich_check(7, &int(10)).unwrap().strict);
        assert!(matches!(
            g_shifted_sandwich_check(5, &int(1)),
            Err(Error::Precondition(_))
        ));
        for d in (5..=15u32).step_by(2) {
            for k in 1..30 {
                let s = half(d as i64 - 3) + rat(k, 3);
                assert!(g_shifted_sandwich_check(d, &s).unwrap().strict);
            }
        }
    }

    #[test]
    fn big_g_examples() {
        assert_eq!(big_g_exact(4, &int(0)).unwrap(), Some(rat(361, 432)));
        let far = big_g_exact(4, &int(1_000_000)).unwrap().unwrap();
        assert!((far - int(1)).abs() < rat(1, 100_000));
        let g5 = big_g_squared(5, &int(0)).unwrap();
        assert!(g5 < int(1));
        let v = big_g_eval(5, &int(0), 30).unwrap();
        assert!(v.value() < &int(1));
        assert!(big_g_squared(3, &int(0)).is_err());
    }

    #[test]
    fn h_polynomial_identity() {
        for d in 4..=60u32 {
            let sym = h_poly_symbolic(d);
            assert_eq!(sym, h_poly_closed_form(d), "d={d}");
            assert!(h_poly_closed_form(d).coeffs().iter().all(|c| !c.is_negative()));
        }
    }

    #[test]
    fn appendix_identities() {
        for d in 3..=80u32 {
            let (a, b) = appendix_s(d);
            assert_eq!(a, b);
            let (a, b) = appendix_t1(d);
            assert_eq!(a, b);
            let (a, b) = appendix_t2(d);
            assert_eq!(a, b);
            let sum = appendix_t1(d).0 + appendix_t2(d).0;
            assert_eq!(sum, f_coefficient_formula(d).1, "d={d}");
            let (a, b) = appendix_sum1(d);
            assert_eq!(a, b);
            let (a, b) = appendix_sum2(d);
            assert_eq!(a, b);
            assert_eq!(appendix_t_d(d) * int(2) + int(d as i64 - 1), rat((d * d) as i64, 3));
        }
    }

    #[test]
    fn named_function_validation() {
        assert!(NamedFunction::new(FunctionKind::HA, 7, Some(half(1))).is_ok());
        assert!(NamedFunction::new(FunctionKind::HA, 8, Some(half(1))).is_err());
        assert!(NamedFunction::new(FunctionKind::HA, 7, None).is_err());
        assert!(NamedFunction::new(FunctionKind::F, 2, None).is_err());
        let q = NamedFunction::new(FunctionKind::Q, 4, None).unwrap();
        assert_eq!(q.eval(&int(0), 30).unwrap(), FunctionValue::Exact(rat(64, 27)));
        let g = NamedFunction::new(FunctionKind::BigGShifted, 4, None).unwrap();
        assert_eq!(g.eval(&rat(3, 2), 30).unwrap(), FunctionValue::Exact(rat(361, 432)));
        let a = NamedFunction::new(FunctionKind::A, 5, None).unwrap();
        assert!(matches!(a.eval(&int(0), 30).unwrap(), FunctionValue::Approx(_)));
    }

    #[test]
    fn count_identity() {
        for d in 3..=20 {
            for l in 0..30 {
                assert!(count_pochhammer_identity(d, l));
            }
        }
    }

    #[test]
    fn right_limit_identity() {
        for d in 3..=10u32 {
            for tau0 in 0..=40i64 {
                let t = int(tau0);
                let di = d as i64;
                let rhs = (int(di) + &t * int(2)) * pochhammer_eval(d as u64 - 1, &t)
                    / (powi(&int(2), 1 - di) * powi(&(&t * int(2) + int(di - 1)), di));
                assert_eq!(q_eval(d, &t).unwrap(), rhs);
            }
        }
    }

    #[test]
    fn a_dominates_q() {
        for d in 3..=12u32 {
            for k in 0..60 {
                let t = rat(k, 3);
                let q = q_eval(d, &t).unwrap();
                assert!(a_eval_squared(d, &t).unwrap() > &q * &q, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn f_degree_bound() {
        for d in 3..=60u32 {
            assert!(f_as_ratfun(d).numerator.degree().unwrap() <= d as usize - 2);
        }
    }

    proptest! {
        #[test]
        fn pochhammer_recursion(m in 1u64..=40, n in -500i64..500, den in 1i64..50) {
            let t = rat(n, den);
            let lhs = int(m as i64) * pochhammer_eval(m - 1, &t);
            prop_assert_eq!(lhs, pochhammer_eval(m, &t) - pochhammer_eval(m, &(&t - int(1))));
        }

        #[test]
        fn telescoping(m in 1u64..=20, ell in 0i64..=50) {
            let sum = (0..=ell).fold(BigRational::zero(), |a, j| a + pochhammer_eval(m - 1, &int(j)));
            prop_assert_eq!(int(m as i64) * sum, pochhammer_eval(m, &int(ell)));
        }

        #[test]
        fn r_below_q(d in 3u32..20, num in 1i64..20000, den in 1i64..100) {
            let eta = int(d as i64 - 1) + rat(num, den);
            let tau = (&eta + int(1) - int(d as i64)) / int(2);
            prop_assert!(r_eval(d, &eta).unwrap() <= q_eval(d, &tau).unwrap());
        }

        #[test]
        fn fast_paths_match_rational_formulas(d in 3u32..25, n in 0i64..2000, den in 1i64..40) {
            let t = rat(n, den);
            let di = d as i64;
            let p = (1..di).fold(int(1), |a, k| a * (&t + int(k)));
            let q = powi(&(&t + half(di - 1)), -di) * (&t + half(di)) * &p;
            prop_assert_eq!(q_eval(d, &t).unwrap(), q);
            let a2 = powi(&(&t + half(di)), 2 - di) * powi(&(&t + half(di - 2)), -di) * &p * &p;
            prop_assert_eq!(a_eval_squared(d, &t).unwrap(), a2);
            prop_assert_eq!(pochhammer_eval(d as u64 - 1, &t), p);
        }

        #[test]
        fn decimal_inputs_parse_exactly(k in 1i64..100000) {
            let s = format!("{}.{:02}", k / 100, k % 100);
            prop_assert_eq!(parse_rational(&s).unwrap(), rat(k, 100));
        }
    }
}
