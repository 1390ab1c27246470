//! Integer-order Bessel functions of the first kind, zeros of `J_l'`, and the
//! roots of the Robin condition `alpha J_l(r) + r J_l'(r) = 0`.
//!
//! `J_l` is summed from its power series while the terms decrease monotonically
//! (or `x <= 8`), and otherwise computed by Miller's backward recurrence
//! normalized with `J_0 + 2 sum_k J_{2k} = 1`.

use alloc::vec::Vec;

use libm::{cbrt, fabs, sqrt};

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 8.0;
const RESCALE_ABOVE: f64 = 1e250;
const BISECTION_STEPS: usize = 80;
const NEWTON_STEPS: usize = 5;
const SCAN_STEP: f64 = 0.05;

/// `J_l(x)`. Negative arguments use `J_l(-x) = (-1)^l J_l(x)`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order.is_multiple_of(2) { v } else { -v };
    }
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let l = order as f64;
    if x <= SERIES_LIMIT || 0.25 * x * x < l + 1.0 {
        series(order, x)
    } else {
        miller(order, x)
    }
}

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=order {
        term *= half / i as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + order as f64));
        sum += term;
        if fabs(term) <= 1e-17 * fabs(sum) && k > half {
            break;
        }
        if term == 0.0 {
            break;
        }
    }
    sum
}

fn miller(order: u32, x: f64) -> f64 {
    let top = (order as f64).max(x);
    let mut start = (top + 30.0 + 2.0 * sqrt(40.0 * top)) as usize;
    start += start % 2;
    let two_over_x = 2.0 / x;
    let (mut above, mut current) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut result = 0.0;
    // current holds J_n (unnormalized), above holds J_{n+1}.
    for n in (0..=start).rev() {
        if n == order as usize {
            result = current;
        }
        if n % 2 == 0 {
            norm += if n == 0 { current } else { 2.0 * current };
        }
        if n == 0 {
            break;
        }
        let below = n as f64 * two_over_x * current - above;
        above = current;
        current = below;
        if fabs(current) > RESCALE_ABOVE {
            current /= RESCALE_ABOVE;
            above /= RESCALE_ABOVE;
            norm /= RESCALE_ABOVE;
            result /= RESCALE_ABOVE;
        }
    }
    result / norm
}

/// `J_l` for a possibly negative integer order, `J_{-n} = (-1)^n J_n`.
fn bessel_j_signed(order: i64, x: f64) -> f64 {
    let v = bessel_j(order.unsigned_abs() as u32, x);
    if order < 0 && order % 2 != 0 { -v } else { v }
}

/// `J_l'(x) = (J_{l-1}(x) - J_{l+1}(x)) / 2`, with `J_0' = -J_1`.
pub fn bessel_j_prime(order: u32, x: f64) -> f64 {
    if order == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x))
    }
}

/// `J_l''(x) = (J_{l-2}(x) - 2 J_l(x) + J_{l+2}(x)) / 4`, from applying the
/// derivative recurrence twice.
pub fn bessel_j_second(order: u32, x: f64) -> f64 {
    let l = order as i64;
    0.25 * (bessel_j_signed(l - 2, x) - 2.0 * bessel_j(order, x) + bessel_j_signed(l + 2, x))
}

/// Which equation a [`BesselZero`] solves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZeroKind {
    /// Zero of `J_l'`.
    Derivative,
    /// Zero of `J_l` itself (the `alpha -> infinity` limit).
    Function,
    /// Root of `alpha J_l(r) + r J_l'(r)`.
    Robin { alpha: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselZero {
    pub order: u32,
    /// 1-based index among the positive roots.
    pub index: u32,
    pub value: f64,
    pub kind: ZeroKind,
}

fn check_order_index(order: u32, index: u32) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidArgument("Bessel zeros are only provided for order l >= 1".into()));
    }
    if index == 0 {
        return Err(Error::InvalidArgument("zero index m starts at 1".into()));
    }
    Ok(())
}

/// Bisection on a sign-changing bracket followed by guarded Newton polishing.
fn refine_root(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    let width = (hi - lo).max(f64::EPSILON * fabs(x));
    let (lo, hi) = (lo - width, hi + width);
    for _ in 0..NEWTON_STEPS {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let next = x - f(x) / d;
        if !(lo..=hi).contains(&next) || next == x {
            break;
        }
        x = next;
    }
    x
}

/// Scans forward from `start` in steps of [`SCAN_STEP`] until `f` changes sign.
fn scan_bracket(f: &impl Fn(f64) -> f64, start: f64, limit: f64) -> Option<(f64, f64)> {
    let mut a = start;
    let mut fa = f(a);
    while a < limit {
        let b = a + SCAN_STEP;
        let fb = f(b);
        if fa == 0.0 || (fa > 0.0) != (fb > 0.0) {
            return Some((a, b));
        }
        a = b;
        fa = fb;
    }
    None
}

/// The first `count` positive zeros of `J_l'`, `l >= 1`.
///
/// The first zero is bracketed by `sqrt(l(l+2)) < j'_{l,1} <= l + 2 l^{1/3}`;
/// later zeros are found by scanning forward from the previous one.
pub fn bessel_prime_zeros(order: u32, count: u32) -> Result<Vec<f64>> {
    check_order_index(order, count.max(1))?;
    let l = order as f64;
    let f = |x: f64| bessel_j_prime(order, x);
    let df = |x: f64| bessel_j_second(order, x);
    let mut zeros = Vec::with_capacity(count as usize);
    for m in 1..=count {
        let (lo, hi) = if m == 1 {
            let lo = sqrt(l * (l + 2.0));
            let hi = l + 2.0 * cbrt(l);
            if !(f(lo) > 0.0 && f(hi) < 0.0) {
                return Err(Error::BracketFailure { order, index: m });
            }
            (lo, hi)
        } else {
            let prev = zeros[m as usize - 2];
            scan_bracket(&f, prev + SCAN_STEP, prev + 4.0 * core::f64::consts::PI)
                .ok_or(Error::BracketFailure { order, index: m })?
        };
        zeros.push(refine_root(f, df, lo, hi));
    }
    Ok(zeros)
}

/// `j'_{l,m}`, the `m`'th positive zero of `J_l'`.
pub fn bessel_prime_zero(order: u32, index: u32) -> Result<BesselZero> {
    check_order_index(order, index)?;
    let zeros = bessel_prime_zeros(order, index)?;
    Ok(BesselZero {
        order,
        index,
        value: zeros[index as usize - 1],
        kind: ZeroKind::Derivative,
    })
}

/// The first `count` positive zeros of `J_l`, using `j'_{l,m} < j_{l,m} < j'_{l,m+1}`.
pub fn bessel_zeros(order: u32, count: u32) -> Result<Vec<f64>> {
    check_order_index(order, count.max(1))?;
    let brackets = bessel_prime_zeros(order, count + 1)?;
    let f = |x: f64| bessel_j(order, x);
    let df = |x: f64| bessel_j_prime(order, x);
    (0..count as usize)
        .map(|i| {
            let (lo, hi) = (brackets[i], brackets[i + 1]);
            if (f(lo) > 0.0) == (f(hi) > 0.0) {
                return Err(Error::BracketFailure { order, index: i as u32 + 1 });
            }
            Ok(refine_root(f, df, lo, hi))
        })
        .collect()
}

pub fn bessel_zero(order: u32, index: u32) -> Result<BesselZero> {
    check_order_index(order, index)?;
    let zeros = bessel_zeros(order, index)?;
    Ok(BesselZero {
        order,
        index,
        value: zeros[index as usize - 1],
        kind: ZeroKind::Function,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(alloc::format!("alpha = {alpha} must be finite and >= 0")))
    }
}

/// The first `count` positive roots `j^alpha_{l,m}` of `alpha J_l(r) + r J_l'(r)`.
///
/// The `m`'th root lies in `[j'_{l,m}, j_{l,m})`, and equals `j'_{l,m}` at `alpha = 0`.
pub fn robin_zeros(order: u32, count: u32, alpha: f64) -> Result<Vec<f64>> {
    check_order_index(order, count.max(1))?;
    check_alpha(alpha)?;
    let lower = bessel_prime_zeros(order, count)?;
    if alpha == 0.0 {
        return Ok(lower);
    }
    let upper = bessel_zeros(order, count)?;
    let f = |r: f64| alpha * bessel_j(order, r) + r * bessel_j_prime(order, r);
    let df = |r: f64| (alpha + 1.0) * bessel_j_prime(order, r) + r * bessel_j_second(order, r);
    lower
        .iter()
        .zip(&upper)
        .enumerate()
        .map(|(i, (&lo, &hi))| {
            if (f(lo) > 0.0) == (f(hi) > 0.0) {
                return Err(Error::BracketFailure { order, index: i as u32 + 1 });
            }
            Ok(refine_root(f, df, lo, hi))
        })
        .collect()
}

pub fn robin_zero(order: u32, index: u32, alpha: f64) -> Result<BesselZero> {
    check_order_index(order, index)?;
    let zeros = robin_zeros(order, index, alpha)?;
    Ok(BesselZero {
        order,
        index,
        value: zeros[index as usize - 1],
        kind: ZeroKind::Robin { alpha },
    })
}

/// `d lambda / d alpha` at `alpha = 0` for the half-disk Robin eigenvalue
/// `lambda(alpha) = (j^alpha_{l,m})^2`: `2 j'^2 / (j'^2 - l^2)`.
pub fn robin_eigenvalue_derivative_at_zero(order: u32, index: u32) -> Result<f64> {
    let j = bessel_prime_zero(order, index)?.value;
    let l = order as f64;
    Ok(2.0 * j * j / (j * j - l * l))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent special-function library.
    const REFERENCE_J: [(u32, f64, f64); 12] = [
        (0, 1.0, 0.7651976865579666),
        (1, 10.0, 0.0434727461688616),
        (0, 100.0, 0.01998585030422312),
        (5, 50.0, -0.08140024769656964),
        (3, 5.0, 0.364831230613667),
        (20, 30.0, 0.004831019993404039),
        (0, 200.0, -0.015437439930565088),
        (7, 150.0, 0.06443595496820806),
        (10, 0.5, 2.613177360822802e-13),
        (40, 35.0, 0.014965632617051026),
        (2, 12.0, -0.08493049487860475),
        (13, 26.0, -0.04241629163684289),
    ];

    #[test]
    fn matches_reference_values() {
        for (l, x, want) in REFERENCE_J {
            let got = bessel_j(l, x);
            assert!((got - want).abs() < 1e-13, "J_{l}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        assert_eq!(bessel_j(1, -2.0), -bessel_j(1, 2.0));
        assert_eq!(bessel_j(2, -2.0), bessel_j(2, 2.0));
    }

    #[test]
    fn series_and_recurrence_agree_at_switchover() {
        for l in [0u32, 1, 2, 5] {
            for x in [7.0, 8.0, 9.0] {
                assert!((series(l, x) - miller(l, x)).abs() < 1e-13, "l={l} x={x}");
            }
        }
    }

    #[test]
    fn ode_residual_at_three_five() {
        let (l, r) = (3u32, 5.0);
        let lf = l as f64;
        let res = r * r * bessel_j_second(l, r) + r * bessel_j_prime(l, r) + (r * r - lf * lf) * bessel_j(l, r);
        assert!(res.abs() < 1e-10, "{res}");
    }

    #[test]
    fn derivative_zeros_match_reference() {
        let reference: [(u32, [f64; 4]); 5] = [
            (1, [1.8411837813406595, 5.3314427735250325, 8.536316366346286, 11.706004902592063]),
            (2, [3.0542369282271404, 6.706133194158459, 9.969467823087596, 13.170370856016124]),
            (5, [6.415616375700241, 10.519860873772307, 13.9871886301403, 17.312842487884627]),
            (20, [22.2191464829013, 27.71212684307483, 31.973715219698164, 35.87394150117867]),
            (50, [52.99764038731665, 60.026319332799424, 65.27272332702691, 69.95169273437227]),
        ];
        for (l, want) in reference {
            let got = bessel_prime_zeros(l, 4).unwrap();
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-12, "l={l}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn first_derivative_zero_by_sampling() {
        // Oracle: sign changes of J_1' on a 0.01 grid, then plain bisection.
        let f = |x: f64| bessel_j_prime(1, x);
        let mut x = 0.01;
        while f(x) > 0.0 {
            x += 0.01;
        }
        let (mut a, mut b) = (x - 0.01, x);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if f(m) > 0.0 { a = m } else { b = m }
        }
        let z = bessel_prime_zero(1, 1).unwrap().value;
        assert!((z - 0.5 * (a + b)).abs() < 1e-12);
        assert!((z - 1.84118).abs() < 1e-5);
        assert!(bessel_j_prime(1, z).abs() < 1e-10);
    }

    #[test]
    fn zeros_of_j() {
        let z = bessel_zeros(1, 3).unwrap();
        let want = [3.8317059702075125, 7.015586669815619, 10.173468135062722];
        for (g, w) in z.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn robin_zero_values() {
        let want = [
            (0.1, 1.9153928588349975),
            (0.5, 2.165871271488751),
            (1.0, 2.404825557695773),
            (2.0, 2.734621844635441),
            (10.0, 3.4797593228646555),
        ];
        let mut prev = 0.0;
        for (alpha, w) in want {
            let z = robin_zero(1, 1, alpha).unwrap().value;
            assert!((z - w).abs() < 1e-12, "alpha={alpha}: {z} vs {w}");
            assert!(z > prev);
            prev = z;
        }
        assert!((robin_zero(2, 1, 1.0).unwrap().value - 3.5183243928759227).abs() < 1e-12);
        assert!((robin_zero(1, 2, 1.0).unwrap().value - 5.5200781102863115).abs() < 1e-12);
        assert_eq!(robin_zero(1, 1, 0.0).unwrap().value, bessel_prime_zero(1, 1).unwrap().value);
    }

    #[test]
    fn robin_zero_tends_to_zero_of_j() {
        let z = robin_zero(1, 1, 1e4).unwrap().value;
        let j = bessel_zero(1, 1).unwrap().value;
        assert!((z - j).abs() < 1e-3);
        assert!(z < j);
    }

    #[test]
    fn robin_derivative_value() {
        let d = robin_eigenvalue_derivative_at_zero(1, 1).unwrap();
        assert!((d - 2.8368348887716217).abs() < 1e-12);
        assert!(d > 0.0);
    }

    #[test]
    fn invalid_arguments() {
        assert!(bessel_prime_zero(0, 1).is_err());
        assert!(bessel_prime_zero(1, 0).is_err());
        assert!(robin_zero(1, 1, -1.0).is_err());
        assert!(robin_zero(1, 1, f64::NAN).is_err());
    }
}
