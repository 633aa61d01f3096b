use num_complex::Complex64;

use crate::bessel::{bessel_j_signed, hankel1_signed};
use crate::error::{Error, Result};
use crate::operator::ComplexMatrix;

use super::{multipole_labels, slot};

/// Which cylindrical waves are re-expanded by [`graf_translation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslationKind {
    /// Regular waves about the source origin to regular waves about the
    /// destination. The same matrix maps outgoing waves to outgoing waves
    /// outside a circle enclosing the source origin.
    RegularToRegular,
    /// Outgoing waves about the source origin to regular waves about the
    /// destination, valid inside a circle of radius `|d|`.
    OutgoingToRegular,
}

/// Graf addition-theorem matrix `R[n][m] = C_{m-n}(k|d|) e^{i (m-n) arg d}`
/// taking source coefficients (`|m| <= order_src`) to destination
/// coefficients (`|n| <= order_dst`), where `d` is the displacement from the
/// source origin to the destination origin.
pub fn graf_translation(
    displacement: [f64; 2],
    wavenumber: f64,
    order_src: usize,
    order_dst: usize,
    kind: TranslationKind,
) -> Result<ComplexMatrix> {
    if order_src < 1 || order_dst < 1 {
        return Err(Error::InvalidConfig("translation orders must be at least 1".into()));
    }
    let distance = displacement[0].hypot(displacement[1]);
    let kd = wavenumber * distance;
    let angle = displacement[1].atan2(displacement[0]);
    let span = order_src + order_dst;
    let coefficient: Box<dyn Fn(i64) -> Complex64> = match kind {
        TranslationKind::RegularToRegular => {
            let j = bessel_j_signed(span, kd)?;
            Box::new(move |n| Complex64::new(j.get(n), 0.0))
        }
        TranslationKind::OutgoingToRegular => {
            if distance == 0.0 {
                return Err(Error::InvalidArgument(
                    "outgoing-to-regular translation needs a nonzero displacement".into(),
                ));
            }
            let h = hankel1_signed(span, kd)?;
            Box::new(move |n| h.get(n))
        }
    };
    let (src, dst) = (order_src as i64, order_dst as i64);
    let mut r = ComplexMatrix::zeros(2 * order_dst + 1, 2 * order_src + 1);
    for n in -dst..=dst {
        for m in -src..=src {
            let diff = m - n;
            r[(slot(n, order_dst), slot(m, order_src))] =
                coefficient(diff) * Complex64::from_polar(1.0, diff as f64 * angle);
        }
    }
    r.with_labels(multipole_labels(order_dst), multipole_labels(order_src))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_shift_is_identity() {
        let r = graf_translation([0.0, 0.0], 3.0, 5, 5, TranslationKind::RegularToRegular).unwrap();
        assert_eq!(r.as_slice(), ComplexMatrix::identity(11).as_slice());
        assert!(graf_translation([0.0, 0.0], 3.0, 5, 5, TranslationKind::OutgoingToRegular).is_err());
    }

    #[test]
    fn round_trip_shift() {
        let d = [0.4, -0.3];
        let k = 2.0;
        let there = graf_translation(d, k, 6, 40, TranslationKind::RegularToRegular).unwrap();
        let back = graf_translation([-d[0], -d[1]], k, 40, 6, TranslationKind::RegularToRegular).unwrap();
        let composed = back.matmul(&there).unwrap();
        assert!(composed.relative_distance(&ComplexMatrix::identity(13)).unwrap() < 1e-8);
    }

    #[test]
    fn plane_wave_shift() {
        // e^{ikx} = sum i^m J_m(kr) e^{im phi}
        let (k, x0, big, small) = (1.7, 1.3, 60usize, 10usize);
        let plane: Vec<Complex64> = (-(big as i64)..=big as i64)
            .map(|m| Complex64::i().powi(m as i32))
            .collect();
        let r = graf_translation([x0, 0.0], k, big, small, TranslationKind::RegularToRegular).unwrap();
        let shifted = r.apply(&plane).unwrap();
        let phase = Complex64::from_polar(1.0, k * x0);
        for (i, c) in shifted.iter().enumerate() {
            let m = i as i32 - small as i32;
            assert!((c - phase * Complex64::i().powi(m)).norm() < 1e-10, "m = {m}");
        }
    }
}
