//! Bessel functions of the first kind of small integer order and the
//! modified functions `I_0`, `I_1` on moderate arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument accepted by [`bessel_j`].
pub const MAX_ARG: f64 = 50.0;
const SERIES_LIMIT: f64 = 12.0;

/// First positive zero of `J_1`.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512_3;

/// `J_n(x)` for `n` in `{0, 1}` and `0 <= x <= 50`, absolute error below `1e-12`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return Err(Error::InvalidInput(format!("Bessel order {order} not supported")));
    }
    if !(0.0..=MAX_ARG).contains(&x) {
        return Err(Error::InvalidInput(format!("Bessel argument {x} outside [0, {MAX_ARG}]")));
    }
    Ok(jn(order, x))
}

/// `J_1'(x) = J_0(x) - J_1(x)/x`, with `J_1'(0) = 1/2`.
pub fn bessel_j1_prime(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        return 0.5 - 3.0 * x * x / 16.0;
    }
    jn(0, x) - jn(1, x) / x
}

/// Unchecked `J_n(x)` for `n <= 2`, `x >= 0`.
pub(crate) fn jn(order: u32, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        series_j(order, x)
    } else {
        integral_j(order, x)
    }
}

fn series_j(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut lead = 1.0;
    for k in 1..=order {
        lead *= half / k as f64;
    }
    let mut term = lead;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + order as usize) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

// Bessel's integral, J_n(x) = (1/2π) ∫ cos(nτ - x sin τ) dτ over a period;
// the periodic trapezoid rule converges geometrically once K exceeds x.
fn integral_j(order: u32, x: f64) -> f64 {
    let k = (x as usize + 48).next_multiple_of(8);
    let h = 2.0 * PI / k as f64;
    let n = order as f64;
    (0..k)
        .map(|j| {
            let tau = j as f64 * h;
            (n * tau - x * tau.sin()).cos()
        })
        .sum::<f64>()
        / k as f64
}

/// `J_2(x)` via the three-term recurrence.
pub(crate) fn j2(x: f64) -> f64 {
    if x < 1e-3 {
        return series_j(2, x);
    }
    2.0 / x * jn(1, x) - jn(0, x)
}

/// Modified Bessel function `I_n(x)` for `n` in `{0, 1}` by power series.
pub(crate) fn bessel_i(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    for k in 1..300 {
        term *= q / (k as f64 * (k + order as usize) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}
