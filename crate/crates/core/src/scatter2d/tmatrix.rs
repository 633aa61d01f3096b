use num_complex::Complex64;

use crate::bessel::{bessel_j_sequence, hankel1_sequence};
use crate::error::{Error, Result};

/// Diagonal T-matrix of a sound-soft disc, `t_m = -J_m(ka) / H^(1)_m(ka)`
/// for `m = -order..=order` (indexed by `m + order`).
///
/// Each channel is lossless: `|1 + 2 t_m| = 1`.
pub fn single_disc_tmatrix(radius: f64, wavenumber: f64, order: usize) -> Result<Vec<Complex64>> {
    let ka = wavenumber * radius;
    if !(ka.is_finite() && ka > 0.0) {
        return Err(Error::InvalidScene(format!("k a = {ka} must be positive")));
    }
    let j = bessel_j_sequence(order, ka)?;
    let h = hankel1_sequence(order, ka)?;
    let half: Vec<Complex64> = j.iter().zip(&h).map(|(&j, &h)| -j / h).collect();
    // J_{-m} / H_{-m} = J_m / H_m
    Ok((0..=2 * order)
        .map(|i| half[(i as i64 - order as i64).unsigned_abs() as usize])
        .collect())
}
