//! Cylindrical Bessel functions of integer order.
//!
//! `J_n` comes from Miller's downward recurrence normalised with
//! `J_0 + 2 sum J_2k = 1`. `Y_0` and `Y_1` follow from their Neumann series
//! in the same `J` values, and higher `Y_n` from the upward recurrence, which
//! is stable for the second kind.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported order magnitude.
pub const MAX_ORDER: usize = 200;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

fn check_args(order: usize, x: f64, allow_zero: bool) -> Result<()> {
    let bad_x = !x.is_finite() || x < 0.0 || (!allow_zero && x == 0.0);
    if order > MAX_ORDER || bad_x {
        return Err(Error::BesselDomain { order: order as i64, x });
    }
    Ok(())
}

/// Starting order for the downward recurrence.
fn miller_start(top: usize, x: f64) -> usize {
    let top = top.max(x.ceil() as usize);
    let start = top + 30 + (50.0 * top as f64).sqrt() as usize;
    start + start % 2
}

/// `J_0..=J_len-1` with `len` at least `n_max + 1`; the tail beyond `n_max`
/// is kept because the `Y` series need it.
fn j_miller(n_max: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    let start = miller_start(n_max, x);
    let mut values = vec![0.0; start + 1];
    let mut next = 0.0; // f_{k+1}
    let mut current = 1e-30; // f_k
    values[start] = current;
    let mut norm = current; // start is even
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * current - next;
        next = current;
        current = prev;
        values[k - 1] = current;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * current;
        }
        if current.abs() > RESCALE_ABOVE {
            for v in &mut values[k - 1..] {
                *v *= RESCALE_BY;
            }
            next *= RESCALE_BY;
            current *= RESCALE_BY;
            norm *= RESCALE_BY;
        }
    }
    // `norm` so far counts f_start once and even k >= 2 twice; fix f_start
    // and add f_0
    norm += values[start] + values[0];
    for v in &mut values {
        *v /= norm;
    }
    values
}

/// `J_0(x), ..., J_n_max(x)`.
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_args(n_max, x, true)?;
    let mut values = j_miller(n_max, x);
    values.truncate(n_max + 1);
    Ok(values)
}

/// `Y_0(x), ..., Y_n_max(x)`.
pub fn bessel_y_sequence(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_args(n_max, x, false)?;
    Ok(jy_sequences(n_max, x)?.1)
}

fn jy_sequences(n_max: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let j = j_miller(n_max.max(1), x);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    let mut even_sum = 0.0;
    let mut odd_sum = 0.0;
    let mut k = 1;
    while 2 * k + 1 < j.len() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        even_sum += sign * j[2 * k] / kf;
        odd_sum += sign * (2.0 * kf + 1.0) / (kf * (kf + 1.0)) * j[2 * k + 1];
        k += 1;
    }
    let y0 = FRAC_2_PI * log_term * j[0] - 2.0 * FRAC_2_PI * even_sum;
    let y1 = FRAC_2_PI * ((log_term - 1.0) * j[1] - j[0] / x) - FRAC_2_PI * odd_sum;

    let mut y = Vec::with_capacity(n_max + 1);
    y.push(y0);
    if n_max >= 1 {
        y.push(y1);
    }
    for n in 1..n_max {
        let next = 2.0 * n as f64 / x * y[n] - y[n - 1];
        y.push(next);
    }
    if let Some(n) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::BesselDomain { order: n as i64, x });
    }
    let mut j = j;
    j.truncate(n_max + 1);
    Ok((j, y))
}

/// `H^(1)_0(x), ..., H^(1)_n_max(x)` with `H^(1) = J + iY`.
pub fn hankel1_sequence(n_max: usize, x: f64) -> Result<Vec<Complex64>> {
    check_args(n_max, x, false)?;
    let (j, y) = jy_sequences(n_max, x)?;
    Ok(j.into_iter().zip(y).map(|(a, b)| Complex64::new(a, b)).collect())
}

fn reflection_sign(order: i64) -> f64 {
    if order < 0 && order % 2 != 0 {
        -1.0
    } else {
        1.0
    }
}

/// `J_m(x)` for integer `m` and `x >= 0`.
pub fn bessel_j(order: i64, x: f64) -> Result<f64> {
    let n = order.unsigned_abs() as usize;
    let seq = bessel_j_sequence(n, x).map_err(|_| Error::BesselDomain { order, x })?;
    Ok(reflection_sign(order) * seq[n])
}

/// `Y_m(x)` for integer `m` and `x > 0`.
pub fn bessel_y(order: i64, x: f64) -> Result<f64> {
    let n = order.unsigned_abs() as usize;
    let seq = bessel_y_sequence(n, x).map_err(|_| Error::BesselDomain { order, x })?;
    Ok(reflection_sign(order) * seq[n])
}

/// `H^(1)_m(x) = J_m(x) + i Y_m(x)`.
pub fn hankel1(order: i64, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j(order, x)?, bessel_y(order, x)?))
}

/// Table of `C_n(x)` for `n` in `-n_max..=n_max`, indexed by `n + n_max`.
#[derive(Debug, Clone)]
pub struct SignedOrders<T> {
    n_max: usize,
    values: Vec<T>,
}

impl<T: Copy + std::ops::Neg<Output = T>> SignedOrders<T> {
    fn from_nonnegative(seq: Vec<T>) -> Self {
        let n_max = seq.len() - 1;
        let mut values = Vec::with_capacity(2 * n_max + 1);
        for n in (1..=n_max).rev() {
            values.push(if n % 2 == 0 { seq[n] } else { -seq[n] });
        }
        values.extend(seq);
        Self { n_max, values }
    }

    pub fn get(&self, n: i64) -> T {
        self.values[(n + self.n_max as i64) as usize]
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

pub fn bessel_j_signed(n_max: usize, x: f64) -> Result<SignedOrders<f64>> {
    Ok(SignedOrders::from_nonnegative(bessel_j_sequence(n_max, x)?))
}

pub fn hankel1_signed(n_max: usize, x: f64) -> Result<SignedOrders<Complex64>> {
    Ok(SignedOrders::from_nonnegative(hankel1_sequence(n_max, x)?))
}

/// `2 / (pi x)`, the value of `J_{m+1} Y_m - J_m Y_{m+1}`.
pub fn wronskian(x: f64) -> f64 {
    2.0 / (PI * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for m in [1, 2, -3, 17] {
            assert_eq!(bessel_j(m, 0.0).unwrap(), 0.0);
        }
        assert!(bessel_y(0, 0.0).is_err());
    }

    #[test]
    fn first_zero_of_j0() {
        assert!(bessel_j(0, 2.404_825_557_695_773).unwrap().abs() < 1e-12);
    }

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun tables
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6, 0.088_256_964_215_676_96),
            (1, 1.0, 0.440_050_585_744_933_5, -0.781_212_821_300_288_7),
            (2, 10.0, 0.254_630_313_685_120_6, -0.005_868_082_442_208_615),
        ];
        for (m, x, j, y) in cases {
            assert!((bessel_j(m, x).unwrap() - j).abs() < 1e-14, "J_{m}({x})");
            assert!((bessel_y(m, x).unwrap() - y).abs() < 1e-14, "Y_{m}({x})");
        }
    }

    #[test]
    fn negative_orders_reflect() {
        for m in 1..6 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(bessel_j(-m, 3.3).unwrap(), sign * bessel_j(m, 3.3).unwrap());
            assert_eq!(bessel_y(-m, 3.3).unwrap(), sign * bessel_y(m, 3.3).unwrap());
        }
        let t = bessel_j_signed(4, 2.0).unwrap();
        assert_eq!(t.get(-3), -t.get(3));
        assert_eq!(t.get(-2), t.get(2));
    }

    #[test]
    fn wronskian_identity() {
        for &x in &[0.3, 1.0, 4.7, 12.0, 33.3, 50.0] {
            let j = bessel_j_sequence(61, x).unwrap();
            let y = bessel_y_sequence(61, x).unwrap();
            for m in 0..60 {
                let w = j[m + 1] * y[m] - j[m] * y[m + 1];
                let scale = 1.0f64.max((j[m + 1] * y[m]).abs());
                assert!((w - wronskian(x)).abs() <= 1e-12 * scale, "m = {m}, x = {x}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_j(201, 1.0), Err(Error::BesselDomain { .. })));
        assert!(bessel_j(3, -1.0).is_err());
        assert!(bessel_j(3, f64::NAN).is_err());
        assert!(bessel_y(2, -0.5).is_err());
        assert!(bessel_j(200, 1.0).is_ok());
    }

    #[test]
    fn tiny_and_huge_arguments() {
        // J_1(x) ~ x / 2 for small x
        let x = 1e-8;
        assert!((bessel_j(1, x).unwrap() - x / 2.0).abs() < 1e-24);
        assert!(bessel_j(150, 1e-3).unwrap() == 0.0 || bessel_j(150, 1e-3).unwrap().abs() < 1e-300);
        let j = bessel_j_sequence(5, 150.0).unwrap();
        let y = bessel_y_sequence(5, 150.0).unwrap();
        // large-argument amplitude sqrt(2 / (pi x))
        let amp = (j[0] * j[0] + y[0] * y[0]).sqrt();
        assert!((amp - (2.0 / (PI * 150.0)).sqrt()).abs() < 1e-5);
    }
}
