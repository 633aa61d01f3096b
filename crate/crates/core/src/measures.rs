//! Symmetry-breaking measures.
//!
//! For a scattering operator `S` and a unitary symmetry transform `T` the
//! measure is
//!
//! ```text
//! M(S, T) = ||S - T S T^-1||_F^2 / (4 ||S||_F^2)      in [0, 1]
//! ```
//!
//! It vanishes iff `T` commutes with `S` and equals one iff they anti-commute.
//! When `T` is diagonal in the graded basis, `M` depends on `S` only through
//! the coupling strengths `X[gamma_out][gamma_in]`, which makes it measurable
//! from intensities alone:
//!
//! * continuous symmetry `T = exp(-i theta Gamma)`:
//!   `M(theta) = sum (1 - cos((gamma_out - gamma_in) theta)) X / (2 sum X)`
//!   ([`measure_continuous_closed`]), which is the resummation of a
//!   quadruple power series in `theta` ([`measure_continuous_series`]);
//! * discrete symmetry with eigenvalues `gamma`:
//!   `M = sum (1 - Re(gamma_in conj(gamma_out))) X / (2 sum X)`
//!   ([`measure_discrete`]).
//!
//! The small-angle behaviour `M ~ B theta^2` defines the local slope `B`
//! ([`local_slope`]); for unitary `S` the quantity `C = sqrt(4 B sum X)`
//! ([`exchange_ability`]) bounds the change of `<Gamma>` on any normalised
//! input.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grading::{CouplingTable, SymmetryGrading, SymmetryKind};
use crate::operator::ComplexMatrix;

/// Largest unitarity residual accepted for a symmetry transform.
pub const TRANSFORM_UNITARITY_TOLERANCE: f64 = 1e-10;

/// Remainder bound accepted by [`measure_continuous_series`].
pub const SERIES_TOLERANCE: f64 = 1e-12;

/// `B` at or below this value counts as zero in [`check_b0_implies_m0`].
pub const ZERO_SLOPE_THRESHOLD: f64 = 1e-14;

/// `M` at or below this value counts as zero in [`check_b0_implies_m0`].
pub const ZERO_MEASURE_THRESHOLD: f64 = 1e-12;

/// Direct measure `||S - T S T^dagger||_F^2 / (4 ||S||_F^2)` for any unitary `T`.
pub fn measure_direct(s: &ComplexMatrix, t: &ComplexMatrix) -> Result<f64> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            op: "measure_direct",
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    if t.rows() != s.rows() || t.cols() != s.cols() {
        return Err(Error::dims(
            "measure_direct",
            format!("{0}x{0} transform", s.rows()),
            format!("{}x{}", t.rows(), t.cols()),
        ));
    }
    let residual = t.unitarity_residual()?;
    if residual > TRANSFORM_UNITARITY_TOLERANCE {
        return Err(Error::NotUnitary { residual });
    }
    let norm = s.frobenius_norm_sq();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let conjugated = t.matmul(s)?.matmul(&t.adjoint())?;
    Ok(s.sub(&conjugated)?.frobenius_norm_sq() / (4.0 * norm))
}

/// `exp(-i theta Gamma)` for the diagonal generator described by `grading`.
pub fn build_continuous_transform(grading: &SymmetryGrading, theta: f64) -> Result<ComplexMatrix> {
    if grading.kind() != SymmetryKind::Continuous {
        return Err(Error::WrongSymmetryKind {
            expected: "continuous",
        });
    }
    let diag: Vec<Complex64> = grading
        .eigenvalues()
        .iter()
        .map(|g| Complex64::from_polar(1.0, -theta * g.re))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

fn require_kind(x: &CouplingTable, kind: SymmetryKind) -> Result<()> {
    if x.kind() != kind {
        return Err(Error::WrongSymmetryKind { expected: kind.name() });
    }
    Ok(())
}

fn require_mass(x: &CouplingTable) -> Result<f64> {
    let total = x.total();
    if total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(total)
}

/// Closed-form continuous measure at angle `theta` from the coupling table.
pub fn measure_continuous_closed(x: &CouplingTable, theta: f64) -> Result<f64> {
    require_kind(x, SymmetryKind::Continuous)?;
    let total = require_mass(x)?;
    // 1 - cos(a) = 2 sin^2(a / 2), kept accurate at small angles
    let weighted: f64 = x
        .entries()
        .map(|(go, gi, v)| {
            let half = 0.5 * (go.re - gi.re) * theta;
            2.0 * half.sin().powi(2) * v
        })
        .sum();
    Ok(weighted / (2.0 * total))
}

/// Closed-form measure on every angle of `thetas`, in input order.
pub fn sweep_continuous(x: &CouplingTable, thetas: &[f64]) -> Result<Vec<(f64, f64)>> {
    thetas
        .par_iter()
        .map(|&theta| Ok((theta, measure_continuous_closed(x, theta)?)))
        .collect()
}

/// Outcome of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesEvaluation {
    pub value: f64,
    /// Imaginary part of the accumulated complex sum (zero in exact arithmetic).
    pub imaginary_residue: f64,
    /// Ratio-test estimate of the neglected tail.
    pub remainder_estimate: f64,
    pub max_total_order: usize,
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Powers of the imaginary unit.
fn i_pow(e: i64) -> Complex64 {
    match e.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Literal quadruple power series for the continuous measure,
///
/// ```text
/// M = 1/(4 sum X) * sum_{p,q,n,m} i^(p-q+m-n) theta^(p+q+n+m) / (p! q! n! m!)
///                   * sum_{gin,gout} gin^(q+m) gout^(p+n) X[gout][gin]
/// ```
///
/// over `(p,q) != (0,0)`, `(n,m) != (0,0)`, with `p-q+m-n` and `p+q+n+m`
/// even, truncated at total order `p+q+n+m <= max_total_order`. Orders are
/// accumulated in ascending order.
pub fn measure_continuous_series(x: &CouplingTable, theta: f64, max_total_order: usize) -> Result<SeriesEvaluation> {
    require_kind(x, SymmetryKind::Continuous)?;
    let total = require_mass(x)?;
    let k_max = max_total_order;

    // moments[a][b] = sum gin^a gout^b X
    let mut moments = vec![vec![0.0; k_max + 1]; k_max + 1];
    for (go, gi, v) in x.entries() {
        if v == 0.0 {
            continue;
        }
        let mut pa = v;
        for row in moments.iter_mut() {
            let mut pb = pa;
            for cell in row.iter_mut() {
                *cell += pb;
                pb *= go.re;
            }
            pa *= gi.re;
        }
    }
    let fact = factorials(k_max);

    let mut sum = Complex64::new(0.0, 0.0);
    let mut order_magnitudes: Vec<f64> = Vec::new();
    for k in (2..=k_max).step_by(2) {
        let theta_k = theta.powi(k as i32);
        let mut order_sum = Complex64::new(0.0, 0.0);
        for p in 0..=k {
            for q in 0..=k - p {
                if p == 0 && q == 0 {
                    continue;
                }
                for n in 0..=k - p - q {
                    let m = k - p - q - n;
                    if n == 0 && m == 0 {
                        continue;
                    }
                    let phase_exp = p as i64 - q as i64 + m as i64 - n as i64;
                    if phase_exp.rem_euclid(2) != 0 {
                        continue;
                    }
                    let weight = theta_k / (fact[p] * fact[q] * fact[n] * fact[m]);
                    order_sum += i_pow(phase_exp) * (weight * moments[q + m][p + n]);
                }
            }
        }
        let order_sum = order_sum / (4.0 * total);
        order_magnitudes.push(order_sum.norm());
        sum += order_sum;
    }

    let remainder_estimate = match order_magnitudes.as_slice() {
        [] => 0.0,
        [.., last] if *last == 0.0 => 0.0,
        [only] => *only,
        [.., prev, last] => {
            let ratio = if *prev == 0.0 { f64::INFINITY } else { last / prev };
            if ratio < 1.0 {
                last * ratio / (1.0 - ratio)
            } else {
                f64::INFINITY
            }
        }
    };
    if remainder_estimate > SERIES_TOLERANCE {
        return Err(Error::SeriesNotConverged {
            remainder: remainder_estimate,
            tolerance: SERIES_TOLERANCE,
        });
    }
    Ok(SeriesEvaluation {
        value: sum.re,
        imaginary_residue: sum.im,
        remainder_estimate,
        max_total_order,
    })
}

/// Discrete measure from a table graded by the eigenvalues of `T`.
pub fn measure_discrete(x: &CouplingTable) -> Result<f64> {
    require_kind(x, SymmetryKind::Discrete)?;
    let total = require_mass(x)?;
    let weighted: f64 = x
        .entries()
        .map(|(go, gi, v)| (1.0 - (gi * go.conj()).re) * v)
        .sum();
    Ok(weighted / (2.0 * total))
}

fn squared_gap_sum(x: &CouplingTable) -> f64 {
    x.entries().map(|(go, gi, v)| (gi.re - go.re).powi(2) * v).sum()
}

/// Local slope `B = sum (gin - gout)^2 X / (4 sum X)`, the `theta^2`
/// coefficient of `M(theta)`.
pub fn local_slope(x: &CouplingTable) -> Result<f64> {
    require_kind(x, SymmetryKind::Continuous)?;
    let total = require_mass(x)?;
    Ok(squared_gap_sum(x) / (4.0 * total))
}

/// Exchange ability `C = sqrt(sum (gin - gout)^2 X)`.
///
/// For unitary `S`, `|<S v, Gamma S v> - <v, Gamma v>| <= C` for every
/// normalised `v`.
pub fn exchange_ability(x: &CouplingTable) -> Result<f64> {
    require_kind(x, SymmetryKind::Continuous)?;
    require_mass(x)?;
    Ok(squared_gap_sum(x).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSlopeReport {
    pub b_gamma: f64,
    /// Whether `B` is zero, i.e. whether the implication had to be checked.
    pub precondition_met: bool,
    pub passed: bool,
    pub max_measure: f64,
    /// Angle of the largest measure on the grid.
    pub worst_theta: Option<f64>,
}

/// Checks that a vanishing local slope forces `M(theta) = 0` on `thetas`.
pub fn check_b0_implies_m0(x: &CouplingTable, thetas: &[f64]) -> Result<ZeroSlopeReport> {
    let b_gamma = local_slope(x)?;
    let precondition_met = b_gamma <= ZERO_SLOPE_THRESHOLD;
    let mut max_measure = 0.0;
    let mut worst_theta = None;
    for &(theta, m) in &sweep_continuous(x, thetas)? {
        if worst_theta.is_none() || m > max_measure {
            max_measure = m;
            worst_theta = Some(theta);
        }
    }
    Ok(ZeroSlopeReport {
        b_gamma,
        precondition_met,
        passed: !precondition_met || max_measure <= ZERO_MEASURE_THRESHOLD,
        max_measure,
        worst_theta,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MeasureDiagnostics {
    pub truncation_order: Option<usize>,
    pub unitarity_residual: Option<f64>,
    pub series_order: Option<usize>,
}

/// Everything measured for one system and one symmetry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub kind: SymmetryKind,
    /// `(theta, M(theta))` for continuous symmetries.
    pub theta_samples: Vec<(f64, f64)>,
    /// `M` of a discrete symmetry.
    pub discrete_measure: Option<f64>,
    pub b_gamma: Option<f64>,
    pub c_s_gamma: Option<f64>,
    pub total_coupling: f64,
    pub diagnostics: MeasureDiagnostics,
}

impl MeasureReport {
    pub fn continuous(x: &CouplingTable, thetas: &[f64], diagnostics: MeasureDiagnostics) -> Result<Self> {
        Ok(Self {
            kind: SymmetryKind::Continuous,
            theta_samples: sweep_continuous(x, thetas)?,
            discrete_measure: None,
            b_gamma: Some(local_slope(x)?),
            c_s_gamma: Some(exchange_ability(x)?),
            total_coupling: x.total(),
            diagnostics,
        })
    }

    pub fn discrete(x: &CouplingTable, diagnostics: MeasureDiagnostics) -> Result<Self> {
        Ok(Self {
            kind: SymmetryKind::Discrete,
            theta_samples: Vec::new(),
            discrete_measure: Some(measure_discrete(x)?),
            b_gamma: None,
            c_s_gamma: None,
            total_coupling: x.total(),
            diagnostics,
        })
    }
}
