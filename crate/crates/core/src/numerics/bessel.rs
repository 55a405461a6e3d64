//! Bessel functions of the first kind and integer order.
//!
//! Power series below x = 1, Miller backward recurrence on [1, 25) and the
//! Hankel asymptotic expansion above.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

pub const MAX_BESSEL_ORDER: u32 = 7;

const SERIES_MAX: f64 = 1.0;
const ASYMPTOTIC_MIN: f64 = 25.0;

/// `J_order(x)` for `order <= 7` and `x >= 0`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > MAX_BESSEL_ORDER {
        return Err(Error::invalid(format!(
            "Bessel order {order} unsupported (max {MAX_BESSEL_ORDER})"
        )));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(jn(order as i32, x))
}

/// Unchecked `J_n(x)` for any integer order with `|n| <= 12` and real `x`.
pub fn jn(n: i32, x: f64) -> f64 {
    if n < 0 {
        let v = jn(-n, x);
        return if n % 2 == 0 { v } else { -v };
    }
    if x < 0.0 {
        let v = jn(n, -x);
        return if n % 2 == 0 { v } else { -v };
    }
    let n = n as u32;
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_MAX {
        series(n, x)
    } else if x < ASYMPTOTIC_MIN {
        miller(n, x)
    } else {
        asymptotic(n, x)
    }
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = half.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    let q = -half * half;
    for k in 1..40u32 {
        term *= q / (f64::from(k) * f64::from(k + n));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let top = (x as u32).max(n) + 30 + (40.0 * x.max(f64::from(n))).sqrt() as u32;
    let start = top + (top & 1);
    let (mut jp1, mut j) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut want = 0.0;
    let mut k = start;
    while k > 0 {
        let jm1 = 2.0 * f64::from(k) / x * j - jp1;
        jp1 = j;
        j = jm1;
        k -= 1;
        if k == n {
            want = j;
        }
        if k % 2 == 0 && k > 0 {
            norm += 2.0 * j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
    }
    norm += j;
    want / norm
}

fn asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(n * n);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    let eight_x = 8.0 * x;
    for k in 1..80u32 {
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (f64::from(k) * eight_x);
        if term.abs() > prev || term == 0.0 {
            break;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (f64::from(n) * FRAC_PI_2 + FRAC_PI_4);
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
