//! Maximizer localization for `Q_d` and `A_d`, the sharp constants
//! `Q_d*`, `A_d*`, and counterexample scans for `R_d > 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::poly::Polynomial;
use crate::exact::sturm::{bisect_root, unique_root_above, IntegerSign, RootBracket};
use crate::exact::{ceil, floor, int, pow10, rat};
use crate::zoo::{
    a_eval_exact, a_eval_squared, f_as_ratfun, g_as_ratfun, h_a_as_ratfun, h_a_sign_threshold, q_eval, r_eval,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarResult {
    pub d: u32,
    pub argmax_ell: u64,
    pub value_squared: BigRational,
    pub value: Option<BigRational>,
    pub candidate_window: (u64, u64),
    pub maximizer_bracket: Option<RootBracket>,
    /// Candidates tied with the maximum (smaller index wins).
    pub ties: Vec<u64>,
    pub notes: Vec<String>,
}

fn clamp_nonneg(n: BigInt) -> u64 {
    if n.is_negative() {
        0
    } else {
        n.to_u64().expect("window fits in u64")
    }
}

/// `d²/6 + a·d + b`.
fn quad(d: u32, a: BigRational, b: BigRational) -> BigRational {
    let d = int(d as i64);
    &d * &d / int(6) + a * d + b
}

/// Bounds `(d²/6 - 3d/2 + 7/3, d²/6 - d/2 - 2/3)` on the maximizer of `Q_d`.
pub fn t_star_bounds(d: u32) -> (BigRational, BigRational) {
    (quad(d, rat(-3, 2), rat(7, 3)), quad(d, rat(-1, 2), rat(-2, 3)))
}

fn far() -> BigRational {
    pow10(10)
}

/// Bisects the unique root of `p` on `(-1, ∞)` until it sits strictly inside
/// `inner` with width at most `width`.
fn tight_bracket(p: &Polynomial, width: &BigRational, inner: &(BigRational, BigRational)) -> Result<RootBracket> {
    if !unique_root_above(p, &int(-1))? {
        return Err(Error::InvalidBracket("no unique root on (-1, ∞)".into()));
    }
    let sign = IntegerSign::new(p);
    let lo = if inner.0 < int(-1) { int(-1) } else { inner.0.clone() };
    let start = RootBracket::new(&sign, lo, inner.1.clone())?;
    let mut w = width.clone();
    loop {
        let b = bisect_root(&sign, &start, &w);
        if b.inside(&inner.0, &inner.1) || w < rat(1, 1 << 40) {
            return Ok(b);
        }
        w /= int(2);
    }
}

/// Certified bracket for the unique maximizer `t*_d` of `Q_d` on `(-1, ∞)`.
pub fn locate_t_star(d: u32, width: &BigRational) -> Result<RootBracket> {
    if d == 3 {
        return Err(Error::StrictlyDecreasing);
    }
    if d < 3 || !width.is_positive() {
        return Err(Error::Precondition(format!("locate_t_star needs d >= 4 and width > 0 (d = {d})")));
    }
    let p = f_as_ratfun(d).numerator;
    let b = tight_bracket(&p, width, &t_star_bounds(d))?;
    let (lo, hi) = t_star_bounds(d);
    if !b.inside(&lo, &hi) {
        return Err(Error::InvalidBracket("maximizer escapes its stated bounds".into()));
    }
    Ok(b)
}

/// Integer candidate window for `Q_d*`, clamped below at 0.
pub fn q_window(d: u32) -> (u64, u64) {
    let (lo, hi) = t_star_bounds(d);
    (clamp_nonneg(floor(&lo)), clamp_nonneg(ceil(&hi)))
}

/// Integer candidate window for `A_d*`; `{0}` for `d = 3, 4`.
pub fn a_window(d: u32) -> (u64, u64) {
    if d <= 4 {
        return (0, 0);
    }
    let lo = quad(d, rat(-3, 2), rat(5, 3));
    let hi = quad(d, rat(-1, 2), int(-1));
    (clamp_nonneg(floor(&lo)), clamp_nonneg(ceil(&hi)))
}

/// Exact argmax of `score` over the window; ties go to the smaller index.
fn argmax<F>(window: (u64, u64), score: F) -> Result<(u64, BigRational, Vec<u64>)>
where
    F: Fn(u64) -> Result<BigRational> + Sync,
{
    let vals: Vec<(u64, BigRational)> = (window.0..=window.1)
        .into_par_iter()
        .map(|l| score(l).map(|v| (l, v)))
        .collect::<Result<_>>()?;
    let mut best = vals[0].clone();
    let mut ties = Vec::new();
    for (l, v) in vals.into_iter().skip(1) {
        if v > best.1 {
            best = (l, v);
            ties.clear();
        } else if v == best.1 {
            ties.push(l);
        }
    }
    Ok((best.0, best.1, ties))
}

fn maximizer_bracket(p: &Polynomial) -> Option<RootBracket> {
    if !unique_root_above(p, &int(-1)).ok()? {
        return None;
    }
    let sign = IntegerSign::new(p);
    let b = RootBracket::new(&sign, int(-1), far()).ok()?;
    Some(bisect_root(&sign, &b, &rat(1, 1000)))
}

/// `Q_d* = max Q_d(ℓ)` over the integer window.
pub fn q_star(d: u32) -> Result<StarResult> {
    if d < 3 {
        return Err(Error::Precondition(format!("d = {d} < 3")));
    }
    let window = q_window(d);
    let (ell, value, ties) = argmax(window, |l| q_eval(d, &int(l as i64)))?;
    let mut notes = Vec::new();
    let bracket = if d == 3 {
        None
    } else {
        let p = f_as_ratfun(d).numerator;
        let b = locate_t_star(d, &rat(1, 1000))?;
        let lo = ceil(&b.lower);
        if lo == floor(&b.upper) && p.eval(&BigRational::from_integer(lo.clone())).is_zero() {
            notes.push(format!("t*_{d} = {lo} is an integer"));
        }
        Some(b)
    };
    if !ties.is_empty() {
        notes.push(format!("tie between candidates {ell} and {ties:?}"));
    }
    Ok(StarResult {
        d,
        argmax_ell: ell,
        value_squared: &value * &value,
        value: Some(value),
        candidate_window: window,
        maximizer_bracket: bracket,
        ties,
        notes,
    })
}

/// `A_d* = max A_d(ℓ)`, compared through exact squares.
pub fn a_star(d: u32) -> Result<StarResult> {
    if d < 3 {
        return Err(Error::Precondition(format!("d = {d} < 3")));
    }
    let window = a_window(d);
    let (ell, value_squared, ties) = argmax(window, |l| a_eval_squared(d, &int(l as i64)))?;
    let value = a_eval_exact(d, &int(ell as i64))?;
    let mut notes = Vec::new();
    if !ties.is_empty() {
        notes.push(format!("tie between candidates {ell} and {ties:?}"));
    }
    Ok(StarResult {
        d,
        argmax_ell: ell,
        value_squared,
        value,
        candidate_window: window,
        maximizer_bracket: maximizer_bracket(&g_as_ratfun(d).numerator),
        ties,
        notes,
    })
}

/// `(argmax, Q_d*)` without the maximizer bracket.
pub fn q_star_value(d: u32) -> Result<(u64, BigRational)> {
    let (l, v, _) = argmax(q_window(d), |l| q_eval(d, &int(l as i64)))?;
    Ok((l, v))
}

/// `(argmax, (A_d*)²)` without the maximizer bracket.
pub fn a_star_value_squared(d: u32) -> Result<(u64, BigRational)> {
    let (l, v, _) = argmax(a_window(d), |l| a_eval_squared(d, &int(l as i64)))?;
    Ok((l, v))
}

/// Grid points with `R_d(η) > 1`, sorted by `η`.
pub fn counterexample_scan(d: u32, eta_grid: &[BigRational]) -> Result<Vec<(BigRational, BigRational)>> {
    let floor_eta = int(d as i64 - 1);
    if let Some(bad) = eta_grid.iter().find(|e| **e <= floor_eta) {
        return Err(Error::Precondition(format!("grid value {bad} is not above d-1")));
    }
    let vals: Vec<(BigRational, BigRational)> = eta_grid
        .par_iter()
        .map(|e| r_eval(d, e).map(|r| (e.clone(), r)))
        .collect::<Result<_>>()?;
    let mut out: Vec<_> = vals.into_iter().filter(|(_, r)| r > &int(1)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn samples(lo: &BigRational, hi: &BigRational, n: i64) -> Vec<BigRational> {
    (1..=n).map(|k| lo + (hi - lo) * rat(k, n)).collect()
}

/// Exact sign check of `g_d < 0` on `[d²/6 - d/2 - 1, ∞)` and `g_d > 0` on
/// `(-1, d²/6 - 3d/2 + 5/3]` at the endpoints and 16 samples per side.
pub fn a_zero_window_check(d: u32) -> Result<bool> {
    if d < 5 || d.is_multiple_of(2) {
        return Err(Error::Precondition(format!("needs odd d >= 5, got d = {d}")));
    }
    let g = g_as_ratfun(d);
    let upper = quad(d, rat(-1, 2), int(-1));
    let mut upper_pts = vec![upper.clone()];
    upper_pts.extend(samples(&upper, &(&upper + int(4 * d as i64)), 16));
    for t in &upper_pts {
        if !g.eval(t)?.is_negative() {
            return Ok(false);
        }
    }
    let lower = quad(d, rat(-3, 2), rat(5, 3));
    if lower > int(-1) {
        for t in samples(&int(-1), &lower, 16) {
            if !g.eval(&t)?.is_positive() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact sign check of `h_a ≥ 0` on `((d-3)/2, X_a]` and `h_a ≤ 0` on
/// `[X_a + d - 3, ∞)` at sample points.
pub fn h_a_sign_check(d: u32, a: &BigRational) -> Result<bool> {
    let h = h_a_as_ratfun(d, a)?;
    let x = h_a_sign_threshold(d, a);
    let start = rat(d as i64 - 3, 2);
    if x > start {
        for s in samples(&start, &x, 16) {
            if h.eval(&s)?.is_negative() {
                return Ok(false);
            }
        }
    }
    let from = &x + int(d as i64 - 3);
    let mut pts = vec![from.clone()];
    pts.extend(samples(&from, &(&from + int(4 * d as i64)), 16));
    for s in pts {
        if h.eval(&s)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::sturm::sturm_count;
    use crate::zoo::{a_d, g_even_coefficient_formula, top_two};

    #[test]
    fn t_star_examples() {
        let b = locate_t_star(4, &rat(1, 1000)).unwrap();
        assert!(b.inside(&int(-1), &int(0)) && b.width() <= rat(1, 1000));
        let b = locate_t_star(6, &rat(1, 1000)).unwrap();
        assert!(b.inside(&rat(-2, 3), &rat(7, 3)));
        let b = locate_t_star(20, &rat(1, 1000)).unwrap();
        assert!(b.inside(&rat(109, 3), &rat(177, 3)));
        assert!(matches!(locate_t_star(3, &rat(1, 1000)), Err(Error::StrictlyDecreasing)));
    }

    #[test]
    fn q_star_examples() {
        let r = q_star(3).unwrap();
        assert_eq!((r.argmax_ell, r.value.clone().unwrap()), (0, int(3)));
        let r = q_star(4).unwrap();
        assert_eq!((r.argmax_ell, r.value.clone().unwrap()), (0, rat(64, 27)));
        assert_eq!(r.candidate_window, (0, 0));
        let r = q_star(5).unwrap();
        assert_eq!(r.candidate_window, (0, 1));
        assert_eq!((r.argmax_ell, r.value.clone().unwrap()), (0, rat(15, 8)));
        assert!(rat(15, 8) > rat(420, 243));
    }

    #[test]
    fn a_star_examples() {
        let r = a_star(3).unwrap();
        assert_eq!((r.argmax_ell, r.value_squared.clone()), (0, rat(64, 3)));
        let r = a_star(4).unwrap();
        assert_eq!(r.value, Some(int(3)));
        let r = a_star(5).unwrap();
        assert_eq!(r.candidate_window, (0, 1));
        assert_eq!((r.argmax_ell, r.value_squared), (0, rat(147456, 30375)));
    }

    #[test]
    fn counterexample_examples() {
        let hits = counterexample_scan(6, &[rat(111, 10)]).unwrap();
        assert_eq!(hits.len(), 1);
        assert!(hits[0].1 > rat(1379, 1000) && hits[0].1 < rat(138, 100));
        assert!(counterexample_scan(3, &[int(3)]).unwrap().is_empty());
        let hits = counterexample_scan(3, &[rat(201, 100)]).unwrap();
        assert_eq!(hits.len(), 1);
        assert!(hits[0].1 < int(3));
        assert!(counterexample_scan(3, &[int(2)]).is_err());
    }

    #[test]
    fn scan_is_sorted() {
        let grid: Vec<_> = (0..40).rev().map(|k| rat(201 + 7 * k, 100)).collect();
        let hits = counterexample_scan(3, &grid).unwrap();
        assert!(hits.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn a_zero_windows() {
        for d in (5..=39).step_by(2) {
            assert!(a_zero_window_check(d).unwrap(), "d={d}");
        }
        assert!(a_zero_window_check(6).is_err());
    }

    #[test]
    fn h_a_signs() {
        for d in (5..=39u32).step_by(2) {
            assert!(h_a_sign_check(d, &rat(1, 2)).unwrap(), "d={d}");
            assert!(h_a_sign_check(d, &a_d(d)).unwrap(), "d={d}");
        }
    }

    #[test]
    fn uniqueness_of_t_star() {
        for d in 4..=60u32 {
            let p = f_as_ratfun(d).numerator;
            assert_eq!(sturm_count(&p, &int(-1), &pow10(10)).unwrap(), 1, "d={d}");
        }
    }

    #[test]
    fn window_contains_brute_force_argmax() {
        for d in 3..=60u32 {
            let r = q_star(d).unwrap();
            let (brute, _, _) = argmax((0, (d * d) as u64), |l| q_eval(d, &int(l as i64))).unwrap();
            assert_eq!(brute, r.argmax_ell, "d={d}");
            let (w0, w1) = r.candidate_window;
            assert!(w0 <= r.argmax_ell && r.argmax_ell <= w1);
        }
    }

    #[test]
    fn star_values() {
        for d in 3..=60u32 {
            let q = q_star(d).unwrap();
            assert!(q.value.clone().unwrap() > int(1), "d={d}");
            let a = a_star(d).unwrap();
            assert!(a.value_squared > q.value_squared, "d={d}");
            let (w0, w1) = a.candidate_window;
            assert!(w0 <= a.argmax_ell && a.argmax_ell <= w1);
        }
    }

    #[test]
    fn even_g_coefficients() {
        for d in (6..=40u32).step_by(2) {
            let p = g_as_ratfun(d).numerator;
            let deg = p.degree().unwrap();
            assert!(deg <= d as usize - 3);
            assert_eq!(top_two(&p, d as usize - 3), g_even_coefficient_formula(d));
        }
    }
}
