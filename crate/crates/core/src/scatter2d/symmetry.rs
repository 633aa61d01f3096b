use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grading::{SymmetryGrading, SymmetryKind};
use crate::measures::build_continuous_transform;
use crate::operator::{BasisLabel, ComplexMatrix};

use super::slot;

/// Grading of the rotation generator: eigenvalue `m` on multipole `m`.
pub fn rotation_grading(order: usize) -> SymmetryGrading {
    let gammas: Vec<f64> = (-(order as i64)..=order as i64).map(|m| m as f64).collect();
    SymmetryGrading::continuous(&gammas).expect("integer eigenvalues are finite")
}

/// Rotation by `angle` about the origin, `diag(e^{-i m angle})`.
pub fn rotation_operator(order: usize, angle: f64) -> ComplexMatrix {
    build_continuous_transform(&rotation_grading(order), angle).expect("rotation grading is continuous")
}

fn parity(m: i64) -> f64 {
    if m % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Reflection across the x-axis on the multipole basis.
///
/// `phi -> -phi` sends `Z_m(kr) e^{i m phi}` to `(-1)^m Z_{-m}(kr) e^{-i m phi}`,
/// so the operator is the `m <-> -m` exchange with signs `(-1)^m`.
pub fn mirror_operator(order: usize) -> ComplexMatrix {
    let n = 2 * order + 1;
    let mut q = ComplexMatrix::zeros(n, n);
    for m in -(order as i64)..=order as i64 {
        q[(slot(-m, order), slot(m, order))] = Complex64::new(parity(m), 0.0);
    }
    q
}

/// Orthonormal eigenbasis of [`mirror_operator`] (as columns) and its
/// discrete grading. Columns are `(e_m +- (-1)^m e_{-m}) / sqrt 2` labelled
/// `gamma = +-1`, `eta = [m]`, plus `e_0` with `gamma = +1`.
pub fn mirror_eigenbasis(order: usize) -> (ComplexMatrix, SymmetryGrading) {
    let n = 2 * order + 1;
    let mut basis = ComplexMatrix::zeros(n, n);
    let mut labels = Vec::with_capacity(n);
    basis[(slot(0, order), 0)] = Complex64::new(1.0, 0.0);
    labels.push(BasisLabel::real(1.0, vec![0]));
    let mut col = 1;
    for m in 1..=order as i64 {
        for sign in [1.0, -1.0] {
            basis[(slot(m, order), col)] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            basis[(slot(-m, order), col)] = Complex64::new(sign * parity(m) * FRAC_1_SQRT_2, 0.0);
            labels.push(BasisLabel::real(sign, vec![m]));
            col += 1;
        }
    }
    let grading = SymmetryGrading::from_labels(SymmetryKind::Discrete, &labels).expect("eigenvalues are +-1");
    let rows = basis.row_labels().to_vec();
    let basis = basis.with_labels(rows, labels).expect("labels are unique");
    (basis, grading)
}

/// Mirror operator on a basis labelled by integer multipole eigenvalues, in
/// whatever order the labels list them.
pub fn mirror_from_labels(labels: &[BasisLabel]) -> Result<ComplexMatrix> {
    let orders: Vec<i64> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let g = l.gamma;
            if g.im != 0.0 || g.re.fract() != 0.0 || !g.re.is_finite() {
                Err(Error::InvalidLabels(format!("label {i} ({g}) is not an integer multipole index")))
            } else {
                Ok(g.re as i64)
            }
        })
        .collect::<Result<_>>()?;
    let n = labels.len();
    let mut q = ComplexMatrix::zeros(n, n);
    for (j, &m) in orders.iter().enumerate() {
        let i = orders
            .iter()
            .position(|&p| p == -m)
            .ok_or_else(|| Error::InvalidLabels(format!("multipole {m} has no partner {}", -m)))?;
        q[(i, j)] = Complex64::new(parity(m), 0.0);
    }
    q.with_square_labels(labels.to_vec())
}
