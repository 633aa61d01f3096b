//! The operations behind the `symbreak` command line.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grading::{coupling_from_intensities, coupling_strengths, BasisChangeSystem, CouplingTable, SymmetryGrading, SymmetryKind};
use crate::io;
use crate::measures::{measure_direct, sweep_continuous, MeasureDiagnostics, MeasureReport};
use crate::operator::{BasisLabel, ComplexMatrix};
use crate::scatter2d::{
    assemble_scattering_operator, check_convergence, mirror_eigenbasis, mirror_operator, multipole_labels,
    rotation_grading, rotation_operator, AssemblyDiagnostics, ConvergenceReport, OperatorMode, Scene, SceneSystem,
};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_INPUT
    }
}

/// Which symmetry a command measures.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetrySpec {
    /// Continuous symmetry generated by the eigenvalues stored in the
    /// operator's basis labels (the multipole index for simulated scenes).
    Rotation,
    /// Reflection across the x-axis, on a multipole-labelled basis.
    Mirror,
    /// Continuous symmetry with explicit generator eigenvalues per basis vector.
    Generator(Vec<f64>),
    /// Explicit unitary transform.
    Transform(ComplexMatrix),
}

impl FromStr for SymmetrySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotation" => Ok(SymmetrySpec::Rotation),
            "mirror" => Ok(SymmetrySpec::Mirror),
            other => Err(Error::InvalidArgument(format!(
                "unknown symmetry '{other}' (expected rotation or mirror)"
            ))),
        }
    }
}

impl SymmetrySpec {
    /// Resolves `--symmetry`, `--generator` and `--transform`; at most one
    /// of the two files may be given and it overrides the name.
    pub fn resolve(name: Option<&str>, generator: Option<&Path>, transform: Option<&Path>) -> Result<Self> {
        match (generator, transform) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument(
                "--generator and --transform are mutually exclusive".into(),
            )),
            (Some(g), None) => Ok(SymmetrySpec::Generator(io::read_generator(g)?)),
            (None, Some(t)) => Ok(SymmetrySpec::Transform(io::read_matrix(t)?)),
            (None, None) => name.unwrap_or("rotation").parse(),
        }
    }
}

/// Closed `theta` grid `min:max:samples`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

impl SweepSpec {
    pub fn new(min: f64, max: f64, samples: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidArgument(format!("theta range needs min < max, got {min}:{max}")));
        }
        if samples < 2 {
            return Err(Error::InvalidArgument(format!("theta range needs at least 2 samples, got {samples}")));
        }
        Ok(Self { min, max, samples })
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| {
                if i + 1 == self.samples {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("theta range '{s}' must be min:max:n"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse().map_err(|_| bad())?;
        let max = parts[1].trim().parse().map_err(|_| bad())?;
        let samples = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(min, max, samples)
    }
}

/// `L` when the labels are exactly the multipoles `-L..=L` in order.
fn multipole_order(labels: &[BasisLabel]) -> Option<usize> {
    if labels.len().is_multiple_of(2) {
        return None;
    }
    let order = (labels.len() - 1) / 2;
    let expected = multipole_labels(order);
    labels
        .iter()
        .zip(&expected)
        .all(|(a, b)| a.gamma == b.gamma && a.eta.is_empty())
        .then_some(order)
}

fn require_multipoles(s: &ComplexMatrix) -> Result<usize> {
    match (multipole_order(s.row_labels()), multipole_order(s.col_labels())) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(Error::InvalidLabels(
            "mirror needs an operator labelled by multipoles -L..=L on both sides".into(),
        )),
    }
}

fn is_diagonal(t: &ComplexMatrix) -> bool {
    t.is_square() && (0..t.rows()).all(|i| (0..t.cols()).all(|j| i == j || t[(i, j)] == Complex64::new(0.0, 0.0)))
}

fn continuous_gradings(s: &ComplexMatrix, symmetry: &SymmetrySpec) -> Result<Option<(SymmetryGrading, SymmetryGrading)>> {
    Ok(match symmetry {
        SymmetrySpec::Rotation => Some((
            SymmetryGrading::from_labels(SymmetryKind::Continuous, s.col_labels())?,
            SymmetryGrading::from_labels(SymmetryKind::Continuous, s.row_labels())?,
        )),
        SymmetrySpec::Generator(g) => {
            if !s.is_square() {
                return Err(Error::NotSquare {
                    op: "generator symmetry",
                    rows: s.rows(),
                    cols: s.cols(),
                });
            }
            let grading = SymmetryGrading::continuous(g)?;
            Some((grading.clone(), grading))
        }
        _ => None,
    })
}

/// Coupling table of `s` under a discrete symmetry, or `None` when the
/// transform is not diagonal and only the direct measure is available.
fn discrete_table(s: &ComplexMatrix, symmetry: &SymmetrySpec) -> Result<Option<CouplingTable>> {
    match symmetry {
        SymmetrySpec::Mirror => {
            let order = require_multipoles(s)?;
            let (v, grading) = mirror_eigenbasis(order);
            let rotated = v.adjoint().matmul(s)?.matmul(&v)?;
            Ok(Some(coupling_strengths(&rotated, &grading, &grading)?))
        }
        SymmetrySpec::Transform(t) if is_diagonal(t) => {
            let grading = SymmetryGrading::discrete(&t.diagonal())?;
            Ok(Some(coupling_strengths(s, &grading, &grading)?))
        }
        _ => Ok(None),
    }
}

/// Measures plus the coupling table they were computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureOutcome {
    pub report: MeasureReport,
    pub table: Option<CouplingTable>,
}

/// Everything `measure` reports for one operator and symmetry.
pub fn measure_operator(s: &ComplexMatrix, symmetry: &SymmetrySpec, thetas: &[f64]) -> Result<MeasureOutcome> {
    let diagnostics = MeasureDiagnostics {
        truncation_order: multipole_order(s.row_labels()),
        unitarity_residual: if s.is_square() { Some(s.unitarity_residual()?) } else { None },
        series_order: None,
    };
    if let Some((gin, gout)) = continuous_gradings(s, symmetry)? {
        let x = coupling_strengths(s, &gin, &gout)?;
        let report = MeasureReport::continuous(&x, thetas, diagnostics)?;
        return Ok(MeasureOutcome { report, table: Some(x) });
    }
    if let Some(x) = discrete_table(s, symmetry)? {
        let report = MeasureReport::discrete(&x, diagnostics)?;
        return Ok(MeasureOutcome { report, table: Some(x) });
    }
    let SymmetrySpec::Transform(t) = symmetry else {
        unreachable!("continuous and mirror symmetries always produce a table")
    };
    let report = MeasureReport {
        kind: SymmetryKind::Discrete,
        theta_samples: Vec::new(),
        discrete_measure: Some(measure_direct(s, t)?),
        b_gamma: None,
        c_s_gamma: None,
        total_coupling: s.frobenius_norm_sq(),
        diagnostics,
    };
    Ok(MeasureOutcome { report, table: None })
}

/// Human-readable summary of a measure report.
pub fn render_report(report: &MeasureReport, table_path: Option<&Path>) -> String {
    let mut out = format!("symmetry kind: {}\n", report.kind.name());
    for (theta, m) in &report.theta_samples {
        writeln!(out, "M({}) = {}", io::format_real(*theta), io::format_real(*m)).unwrap();
    }
    if let Some(m) = report.discrete_measure {
        writeln!(out, "M = {}", io::format_real(m)).unwrap();
    }
    if let Some(b) = report.b_gamma {
        writeln!(out, "B = {}", io::format_real(b)).unwrap();
    }
    if let Some(c) = report.c_s_gamma {
        writeln!(out, "C = {}", io::format_real(c)).unwrap();
    }
    writeln!(out, "sum X = {}", io::format_real(report.total_coupling)).unwrap();
    if let Some(r) = report.diagnostics.unitarity_residual {
        writeln!(out, "unitarity residual = {}", io::format_real(r)).unwrap();
    }
    if let Some(l) = report.diagnostics.truncation_order {
        writeln!(out, "truncation order = {l}").unwrap();
    }
    if let Some(p) = table_path {
        writeln!(out, "coupling table: {}", p.display()).unwrap();
    }
    out
}

/// Path of the coupling table written next to a measure report.
pub fn table_path(report_path: &Path) -> PathBuf {
    report_path.with_extension("table")
}

/// `measure`: loads an operator, measures it, and when `out` is given writes
/// the JSON report there and the coupling table beside it. Returns the text
/// summary.
pub fn cmd_measure(operator_path: &Path, symmetry: &SymmetrySpec, thetas: &[f64], out: Option<&Path>) -> Result<String> {
    let s = io::read_matrix(operator_path)?;
    let outcome = measure_operator(&s, symmetry, thetas)?;
    let mut written_table = None;
    if let Some(out) = out {
        if let Some(x) = &outcome.table {
            let path = table_path(out);
            io::write_coupling_table(&path, x)?;
            written_table = Some(path);
        }
        #[derive(Serialize)]
        struct Json<'a> {
            #[serde(flatten)]
            report: &'a MeasureReport,
            table_path: Option<String>,
        }
        let json = Json {
            report: &outcome.report,
            table_path: written_table.as_ref().map(|p| p.display().to_string()),
        };
        fs::write(out, serde_json::to_string_pretty(&json).expect("report serialises") + "\n")?;
    }
    Ok(render_report(&outcome.report, written_table.as_deref()))
}

/// `M(theta)` over a sweep grid. Rotation and generator symmetries use the
/// coupling table; `mirror` sweeps the angle of the mirror axis.
pub fn sweep_operator(s: &ComplexMatrix, symmetry: &SymmetrySpec, spec: &SweepSpec) -> Result<Vec<(f64, f64)>> {
    let thetas = spec.grid();
    if let Some((gin, gout)) = continuous_gradings(s, symmetry)? {
        return sweep_continuous(&coupling_strengths(s, &gin, &gout)?, &thetas);
    }
    match symmetry {
        SymmetrySpec::Mirror => {
            let order = require_multipoles(s)?;
            let q = mirror_operator(order);
            thetas
                .iter()
                .map(|&a| {
                    let axis = rotation_operator(order, a).matmul(&q)?.matmul(&rotation_operator(order, -a))?;
                    Ok((a, measure_direct(s, &axis)?))
                })
                .collect()
        }
        _ => Err(Error::InvalidArgument(
            "a fixed transform has no angle to sweep; use measure".into(),
        )),
    }
}

/// `sweep`: CSV with header `theta,M`, written to `out` when given.
pub fn cmd_sweep(operator_path: &Path, symmetry: &SymmetrySpec, spec: &SweepSpec, out: Option<&Path>) -> Result<String> {
    let s = io::read_matrix(operator_path)?;
    let csv = io::sweep_to_csv(&sweep_operator(&s, symmetry, spec)?);
    if let Some(out) = out {
        fs::write(out, &csv)?;
    }
    Ok(csv)
}

/// Angles at which the truncation check compares measures.
pub fn convergence_angles() -> Vec<f64> {
    (1..=8).map(|k| k as f64 * PI / 8.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateReport {
    pub wavenumber: f64,
    pub discs: usize,
    pub diagnostics: AssemblyDiagnostics,
    /// Always run on the transition operator; see [`check_convergence`].
    pub convergence: ConvergenceReport,
}

/// Sidecar diagnostics path of an operator file.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".report.json");
    PathBuf::from(s)
}

fn scene_config(scene_path: &Path, mode: Option<OperatorMode>) -> Result<(Scene, crate::scatter2d::SimConfig)> {
    let file = io::read_scene(scene_path)?;
    let mut cfg = file.config();
    if let Some(m) = mode {
        cfg.mode = m;
    }
    Ok((file.scene, cfg))
}

/// `simulate`: assembles a scene's operator, checks truncation convergence
/// and writes the operator to `out` with a JSON sidecar report.
pub fn cmd_simulate(scene_path: &Path, mode: Option<OperatorMode>, out: &Path) -> Result<SimulateReport> {
    let (scene, cfg) = scene_config(scene_path, mode)?;
    let assembled = assemble_scattering_operator(&scene, &cfg)?;
    let convergence = check_convergence(&scene, &cfg.clone().with_mode(OperatorMode::Transition), &convergence_angles())?;
    if !convergence.passed {
        return Err(Error::NotConverged {
            delta: convergence.max_delta,
            tolerance: crate::scatter2d::CONVERGENCE_TOLERANCE,
        });
    }
    let report = SimulateReport {
        wavenumber: scene.wavenumber,
        discs: scene.discs.len(),
        diagnostics: assembled.diagnostics,
        convergence,
    };
    io::write_matrix(out, &assembled.operator)?;
    fs::write(
        sidecar_path(out),
        serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
    )?;
    Ok(report)
}

/// Coupling table of a simulated scene from intensity-only probes; the
/// scattering operator is never formed.
pub fn experiment_table(scene: &Scene, cfg: &crate::scatter2d::SimConfig, symmetry: &SymmetrySpec) -> Result<CouplingTable> {
    let system = SceneSystem::new(scene, cfg)?;
    match symmetry {
        SymmetrySpec::Rotation => {
            let g = rotation_grading(cfg.global_order);
            coupling_from_intensities(&system, &g, &g)
        }
        SymmetrySpec::Generator(gammas) => {
            let g = SymmetryGrading::continuous(gammas)?;
            coupling_from_intensities(&system, &g, &g)
        }
        SymmetrySpec::Mirror => {
            let (v, g) = mirror_eigenbasis(cfg.global_order);
            let rotated = BasisChangeSystem::new(&system, v.clone(), v)?;
            coupling_from_intensities(&rotated, &g, &g)
        }
        SymmetrySpec::Transform(_) => Err(Error::InvalidArgument(
            "experiment needs rotation, mirror or a generator".into(),
        )),
    }
}

/// `experiment`: writes the intensity-only coupling table to `out` when
/// given and returns it in file format.
pub fn cmd_experiment(scene_path: &Path, symmetry: &SymmetrySpec, mode: Option<OperatorMode>, out: Option<&Path>) -> Result<String> {
    let (scene, cfg) = scene_config(scene_path, mode)?;
    let text = io::coupling_table_to_string(&experiment_table(&scene, &cfg, symmetry)?);
    if let Some(out) = out {
        fs::write(out, &text)?;
    }
    Ok(text)
}

/// `verify`: runs the self-check suite, optionally with a user transform in
/// place of the random unitaries.
pub fn cmd_verify(seed: u64, transform: Option<&Path>) -> Result<crate::verify::VerifyReport> {
    let transform = transform.map(io::read_matrix).transpose()?;
    Ok(crate::verify::run_verify(&crate::verify::VerifyOptions { seed, transform }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter2d::scenes;

    #[test]
    fn sweep_spec_parsing() {
        let s: SweepSpec = "-3.141592653589793:3.141592653589793:721".parse().unwrap();
        let g = s.grid();
        assert_eq!(g.len(), 721);
        assert_eq!(g[0], -PI);
        assert_eq!(g[720], PI);
        assert!((g[600] - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!("1:0:5".parse::<SweepSpec>().is_err());
        assert!("0:1:1".parse::<SweepSpec>().is_err());
        assert!("0:1".parse::<SweepSpec>().is_err());
    }

    #[test]
    fn symmetry_names() {
        assert_eq!("mirror".parse::<SymmetrySpec>().unwrap(), SymmetrySpec::Mirror);
        assert!("glide".parse::<SymmetrySpec>().is_err());
    }

    #[test]
    fn anti_commuting_toy_via_transform() {
        let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let t = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let outcome = measure_operator(&s, &SymmetrySpec::Transform(t), &[]).unwrap();
        assert_eq!(outcome.report.discrete_measure, Some(1.0));
        assert!(outcome.table.is_some());
    }

    #[test]
    fn diagonal_operator_has_no_rotation_breaking() {
        let diag: Vec<Complex64> = (0..5).map(|i| Complex64::new(0.3 * i as f64, 1.0)).collect();
        let s = ComplexMatrix::from_diagonal(&diag).with_square_labels(multipole_labels(2)).unwrap();
        let r = measure_operator(&s, &SymmetrySpec::Rotation, &[0.4, 2.0]).unwrap().report;
        assert!(r.theta_samples.iter().all(|&(_, m)| m == 0.0));
        assert_eq!(r.b_gamma, Some(0.0));
        assert_eq!(r.c_s_gamma, Some(0.0));
    }

    #[test]
    fn mirror_table_matches_experiment() {
        let scene = scenes::three_stacked_on_big();
        let cfg = crate::scatter2d::SimConfig::default_for(&scene);
        let s = assemble_scattering_operator(&scene, &cfg).unwrap().operator;
        let operator_side = measure_operator(&s, &SymmetrySpec::Mirror, &[]).unwrap().table.unwrap();
        let probe_side = experiment_table(&scene, &cfg, &SymmetrySpec::Mirror).unwrap();
        assert!(operator_side.max_relative_difference(&probe_side) <= 1e-12);
    }

    #[test]
    fn mirror_sweep_at_zero_is_mirror_measure() {
        let scene = scenes::one_small_on_big();
        let cfg = crate::scatter2d::SimConfig::default_for(&scene);
        let s = assemble_scattering_operator(&scene, &cfg).unwrap().operator;
        let spec = SweepSpec::new(0.0, PI / 2.0, 3).unwrap();
        let sweep = sweep_operator(&s, &SymmetrySpec::Mirror, &spec).unwrap();
        let direct = measure_operator(&s, &SymmetrySpec::Mirror, &[]).unwrap().report.discrete_measure.unwrap();
        assert!((sweep[0].1 - direct).abs() < 1e-12);
        // the scene sits on the y-axis, which is a mirror line
        assert!(sweep[2].1 < 1e-20, "{}", sweep[2].1);
    }
}
