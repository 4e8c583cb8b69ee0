//! Integer-order Bessel functions of the first and second kind.
//!
//! `J_n` comes from the ascending series for small arguments and from Miller's
//! backward recurrence (normalised with `J_0 + 2 sum J_2k = 1`) elsewhere. `Y_0`
//! and `Y_1` are Neumann series in the same `J_2k`, and higher orders follow by
//! forward recurrence, which is stable for `Y`.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// Highest supported order.
pub const MAX_ORDER: u32 = 64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 1.0;
const RESCALE: f64 = 1e250;

fn check_order(ell: u32) -> Result<()> {
    if ell > MAX_ORDER {
        return Err(Error::Range(format!(
            "Bessel order {ell} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    Ok(())
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(())
}

/// `J_ell(x)`.
pub fn bessel_j(ell: u32, x: f64) -> Result<f64> {
    check_order(ell)?;
    check_arg(x)?;
    Ok(j_unchecked(ell, x))
}

/// `J_ell'(x)` from `J_ell' = (J_{ell-1} - J_{ell+1}) / 2`.
pub fn bessel_j_prime(ell: u32, x: f64) -> Result<f64> {
    check_order(ell)?;
    check_arg(x)?;
    Ok(jp_unchecked(ell, x))
}

/// `Y_ell(x)` for `x > 0`.
pub fn bessel_y(ell: u32, x: f64) -> Result<f64> {
    check_order(ell)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Y_{ell} requires a finite argument > 0, got {x}"
        )));
    }
    Ok(y_unchecked(ell, x))
}

pub(crate) fn j_unchecked(ell: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if ell == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        return j_series(ell, x);
    }
    miller(x, ell as usize)[ell as usize]
}

/// `J_0(x) .. J_m(x)` for some `m >= nmax`, with the tail negligible.
fn j_table(x: f64, nmax: usize) -> Vec<f64> {
    if x <= SERIES_LIMIT {
        (0..=nmax.max(30)).map(|n| j_series(n as u32, x)).collect()
    } else {
        miller(x, nmax)
    }
}

pub(crate) fn jp_unchecked(ell: u32, x: f64) -> f64 {
    if ell == 0 {
        return -j_unchecked(1, x);
    }
    0.5 * (j_unchecked(ell - 1, x) - j_unchecked(ell + 1, x))
}

fn j_series(ell: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    // (x/2)^ell / ell!
    let mut term = (1..=ell).fold(1.0, |t, i| t * half / i as f64);
    let mut sum = term;
    for k in 1..60 {
        term *= q / (k as f64 * (k + ell) as f64);
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

/// Normalised values `J_0(x) .. J_m(x)` for some `m >= nmax`, `x > 0`.
fn miller(x: f64, nmax: usize) -> Vec<f64> {
    let top = nmax.max(x.ceil() as usize);
    let mut start = top + 20 + (10.0 * (top as f64).sqrt()) as usize;
    start += start % 2;
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = (2.0 * k as f64 / x) * vals[k] - vals[k + 1];
        vals[k - 1] = prev;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * prev;
        }
        if prev.abs() > RESCALE {
            for v in vals.iter_mut().skip(k - 1) {
                *v /= RESCALE;
            }
            norm /= RESCALE;
        }
    }
    norm += vals[0];
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals.truncate(start + 1);
    vals
}

pub(crate) fn y_unchecked(ell: u32, x: f64) -> f64 {
    let (y0, y1) = y01(x);
    if ell == 0 {
        return y0;
    }
    let (mut prev, mut cur) = (y0, y1);
    for k in 1..ell {
        let next = (2.0 * k as f64 / x) * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn y01(x: f64) -> (f64, f64) {
    let j = j_table(x, 2);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sign * j[2 * k] / k as f64;
        s1 += sign * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
        k += 1;
    }
    let y0 = FRAC_2_PI * log_term * j[0] - 2.0 * FRAC_2_PI * s0;
    let y1 = -FRAC_2_PI * j[0] / x + FRAC_2_PI * log_term * j[1] + FRAC_2_PI * s1;
    (y0, y1)
}

/// Wronskian `J_{n+1} Y_n - J_n Y_{n+1} = 2 / (pi x)`, used by tests as a consistency check.
pub fn wronskian_defect(ell: u32, x: f64) -> Result<f64> {
    check_order(ell + 1)?;
    let lhs = bessel_j(ell + 1, x)? * bessel_y(ell, x)? - bessel_j(ell, x)? * bessel_y(ell + 1, x)?;
    Ok(lhs - 2.0 / (PI * x))
}
