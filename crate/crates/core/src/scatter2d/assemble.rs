use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::grading::{coupling_strengths, BlackBoxSystem};
use crate::measures::{measure_direct, sweep_continuous};
use crate::operator::{BasisLabel, ComplexMatrix};

use super::{mirror_operator, rotation_grading, FoldyLax, OperatorMode, Scene, SimConfig};

/// Largest change of any measure under `L -> L + 2` accepted as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

/// Labels `gamma = m`, `m = -order..=order`.
pub fn multipole_labels(order: usize) -> Vec<BasisLabel> {
    (-(order as i64)..=order as i64)
        .map(|m| BasisLabel::real(m as f64, vec![]))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssemblyDiagnostics {
    pub mode: OperatorMode,
    pub global_order: usize,
    pub local_orders: Vec<usize>,
    pub condition_estimate: f64,
    /// Unitarity residual of `1 + 2T`, whatever the output mode.
    pub unitarity_residual: f64,
    /// Share of `||T||_F^2` in the outermost rows and columns `|m| = L`.
    pub edge_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct AssembledOperator {
    pub operator: ComplexMatrix,
    pub diagnostics: AssemblyDiagnostics,
}

fn edge_fraction(t: &ComplexMatrix) -> f64 {
    let n = t.rows();
    let total = t.frobenius_norm_sq();
    if total == 0.0 {
        return 0.0;
    }
    let mut edge = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                edge += t[(i, j)].norm_sqr();
            }
        }
    }
    edge / total
}

fn full_from_transition(t: &ComplexMatrix) -> ComplexMatrix {
    let mut s = t.scale(Complex64::new(2.0, 0.0));
    for i in 0..s.rows() {
        s[(i, i)] += 1.0;
    }
    s
}

/// Scattering operator of a scene on the global multipole basis: the
/// transition operator `T`, or `S = 1 + 2T` in [`OperatorMode::FullS`].
/// Row and column labels carry `gamma = m`.
pub fn assemble_scattering_operator(scene: &Scene, cfg: &SimConfig) -> Result<AssembledOperator> {
    let fl = FoldyLax::new(scene, cfg)?;
    let t = fl.transition_matrix()?;
    let full = full_from_transition(&t);
    let diagnostics = AssemblyDiagnostics {
        mode: cfg.mode,
        global_order: cfg.global_order,
        local_orders: fl.local_orders().to_vec(),
        condition_estimate: fl.condition_estimate(),
        unitarity_residual: full.unitarity_residual()?,
        edge_fraction: edge_fraction(&t),
    };
    let operator = match cfg.mode {
        OperatorMode::Transition => t,
        OperatorMode::FullS => full,
    };
    let labels = multipole_labels(cfg.global_order);
    Ok(AssembledOperator {
        operator: operator.with_square_labels(labels)?,
        diagnostics,
    })
}

/// A scene probed one incoming field at a time, without forming its operator.
pub struct SceneSystem {
    solver: FoldyLax,
    mode: OperatorMode,
    labels: Vec<BasisLabel>,
}

impl SceneSystem {
    pub fn new(scene: &Scene, cfg: &SimConfig) -> Result<Self> {
        Ok(Self {
            solver: FoldyLax::new(scene, cfg)?,
            mode: cfg.mode,
            labels: multipole_labels(cfg.global_order),
        })
    }

    pub fn solver(&self) -> &FoldyLax {
        &self.solver
    }
}

impl BlackBoxSystem for SceneSystem {
    fn incoming_labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    fn outgoing_labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    fn respond(&self, incoming: &[Complex64]) -> Result<Vec<Complex64>> {
        let scattered = self.solver.project_outgoing(&self.solver.solve(incoming)?)?;
        Ok(match self.mode {
            OperatorMode::Transition => scattered,
            OperatorMode::FullS => incoming.iter().zip(scattered).map(|(a, b)| a + 2.0 * b).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub base_order: usize,
    pub refined_order: usize,
    /// Largest `|dM|` over the rotation sweep and the mirror measure.
    pub max_delta: f64,
    pub passed: bool,
}

fn measures_at(scene: &Scene, cfg: &SimConfig, thetas: &[f64]) -> Result<Vec<f64>> {
    let s = assemble_scattering_operator(scene, cfg)?.operator;
    let grading = rotation_grading(cfg.global_order);
    let x = coupling_strengths(&s, &grading, &grading)?;
    let mut out: Vec<f64> = sweep_continuous(&x, thetas)?.into_iter().map(|(_, m)| m).collect();
    out.push(measure_direct(&s, &mirror_operator(cfg.global_order))?);
    Ok(out)
}

/// Compares rotation and mirror measures at `L` and `L + 2`.
pub fn check_convergence(scene: &Scene, cfg: &SimConfig, thetas: &[f64]) -> Result<ConvergenceReport> {
    let refined = cfg.clone().with_global_order(cfg.global_order + 2);
    let base = measures_at(scene, cfg, thetas)?;
    let finer = measures_at(scene, &refined, thetas)?;
    let max_delta = base
        .iter()
        .zip(&finer)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ConvergenceReport {
        base_order: cfg.global_order,
        refined_order: refined.global_order,
        max_delta,
        passed: max_delta <= CONVERGENCE_TOLERANCE,
    })
}
