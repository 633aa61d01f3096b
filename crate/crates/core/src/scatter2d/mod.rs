//! Two-dimensional scalar multiple scattering by sound-soft discs.
//!
//! Fields are expanded in cylindrical multipoles `Z_m(k r) e^{i m phi}`,
//! `m = -L..=L`, about the global origin: regular waves (`Z = J`) for the
//! incoming field and outgoing waves (`Z = H^(1)`) for the scattered one.
//! Each disc scatters according to its diagonal T-matrix, the discs are
//! coupled through Graf translation matrices (Foldy-Lax equations), and the
//! per-disc outgoing fields are re-expanded about the origin. The resulting
//! transition operator `T` maps incoming to outgoing coefficients; the
//! lossless scattering operator is `S = 1 + 2T`.
//!
//! Rotations about the origin act diagonally with eigenvalue `m`, so the
//! multipole index is the grading of the rotation generator.

mod assemble;
mod solver;
mod symmetry;
mod tmatrix;
mod translation;

pub mod scenes;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use assemble::{
    assemble_scattering_operator, check_convergence, multipole_labels, AssembledOperator, AssemblyDiagnostics,
    ConvergenceReport, SceneSystem, CONVERGENCE_TOLERANCE,
};
pub use solver::{foldy_lax_solve, FoldyLax, MAX_CONDITION};
pub use symmetry::{mirror_eigenbasis, mirror_from_labels, mirror_operator, rotation_grading, rotation_operator};
pub use tmatrix::single_disc_tmatrix;
pub use translation::{graf_translation, TranslationKind};

/// A sound-soft circular scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disc {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

impl Disc {
    pub fn new(x: f64, y: f64, radius: f64) -> Self {
        Self { x, y, radius }
    }

    pub fn center(&self) -> [f64; 2] {
        [self.x, self.y]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scene {
    pub discs: Vec<Disc>,
    pub wavenumber: f64,
}

impl Scene {
    pub fn new(discs: Vec<Disc>, wavenumber: f64) -> Result<Self> {
        let scene = Self { discs, wavenumber };
        scene.validate()?;
        Ok(scene)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavenumber.is_finite() && self.wavenumber > 0.0) {
            return Err(Error::InvalidScene(format!("wavenumber {} must be positive", self.wavenumber)));
        }
        if self.discs.is_empty() {
            return Err(Error::InvalidScene("scene has no discs".into()));
        }
        for (i, d) in self.discs.iter().enumerate() {
            if !(d.x.is_finite() && d.y.is_finite()) {
                return Err(Error::InvalidScene(format!("disc {i} has a non-finite center")));
            }
            if !(d.radius.is_finite() && d.radius > 0.0) {
                return Err(Error::InvalidScene(format!("disc {i} has radius {}", d.radius)));
            }
        }
        for (i, a) in self.discs.iter().enumerate() {
            for (j, b) in self.discs.iter().enumerate().skip(i + 1) {
                let dist = (a.x - b.x).hypot(a.y - b.y);
                if dist <= a.radius + b.radius {
                    return Err(Error::InvalidScene(format!("discs {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Radius of the smallest origin-centred circle containing every disc.
    pub fn circumscribing_radius(&self) -> f64 {
        self.discs
            .iter()
            .map(|d| d.x.hypot(d.y) + d.radius)
            .fold(0.0, f64::max)
    }

    /// The scene rotated by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> Scene {
        let (s, c) = angle.sin_cos();
        Scene {
            discs: self
                .discs
                .iter()
                .map(|d| Disc::new(c * d.x - s * d.y, s * d.x + c * d.y, d.radius))
                .collect(),
            wavenumber: self.wavenumber,
        }
    }

    /// The scene reflected across the x-axis.
    pub fn mirrored(&self) -> Scene {
        Scene {
            discs: self.discs.iter().map(|d| Disc::new(d.x, -d.y, d.radius)).collect(),
            wavenumber: self.wavenumber,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum OperatorMode {
    /// The transition operator `T`.
    #[default]
    #[serde(rename = "transition")]
    Transition,
    /// The scattering operator `S = 1 + 2T`.
    #[serde(rename = "full_s")]
    FullS,
}

impl fmt::Display for OperatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorMode::Transition => "transition",
            OperatorMode::FullS => "full_s",
        })
    }
}

impl FromStr for OperatorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transition" => Ok(OperatorMode::Transition),
            "full_s" => Ok(OperatorMode::FullS),
            other => Err(Error::InvalidArgument(format!(
                "unknown operator mode '{other}' (expected transition or full_s)"
            ))),
        }
    }
}

/// Truncation orders and output mode of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    /// Global multipoles run over `m = -global_order..=global_order`.
    pub global_order: usize,
    /// Per-disc multipole order; `None` picks `ceil(k a) + 8` for each disc.
    pub local_order: Option<usize>,
    pub mode: OperatorMode,
}

impl SimConfig {
    /// `L = ceil(k R) + 10` with `R` the circumscribing radius.
    pub fn default_for(scene: &Scene) -> Self {
        Self {
            global_order: default_global_order(scene),
            local_order: None,
            mode: OperatorMode::Transition,
        }
    }

    pub fn with_mode(mut self, mode: OperatorMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_global_order(mut self, order: usize) -> Self {
        self.global_order = order;
        self
    }

    /// Resolved multipole order for each disc.
    pub fn local_orders(&self, scene: &Scene) -> Vec<usize> {
        scene
            .discs
            .iter()
            .map(|d| {
                self.local_order
                    .unwrap_or_else(|| (scene.wavenumber * d.radius).ceil() as usize + 8)
            })
            .collect()
    }

    pub fn validate(&self, scene: &Scene) -> Result<()> {
        for (i, l) in self.local_orders(scene).into_iter().enumerate() {
            if l < 1 || l > self.global_order {
                return Err(Error::InvalidConfig(format!(
                    "disc {i}: local order {l} must lie in 1..={}",
                    self.global_order
                )));
            }
        }
        Ok(())
    }
}

pub fn default_global_order(scene: &Scene) -> usize {
    (scene.wavenumber * scene.circumscribing_radius()).ceil() as usize + 10
}

/// Position of multipole `m` in a vector of order `order`.
pub(crate) fn slot(m: i64, order: usize) -> usize {
    (m + order as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_validation() {
        assert!(Scene::new(vec![Disc::new(0.0, 0.0, 1.0)], 1.0).is_ok());
        assert!(Scene::new(vec![], 1.0).is_err());
        assert!(Scene::new(vec![Disc::new(0.0, 0.0, 1.0)], 0.0).is_err());
        assert!(Scene::new(vec![Disc::new(0.0, 0.0, -1.0)], 1.0).is_err());
        let overlapping = vec![Disc::new(0.0, 0.0, 1.0), Disc::new(1.5, 0.0, 0.6)];
        assert!(matches!(Scene::new(overlapping, 1.0), Err(Error::InvalidScene(_))));
    }

    #[test]
    fn default_orders() {
        let scene = scenes::one_small_on_big();
        let cfg = SimConfig::default_for(&scene);
        let r = scene.circumscribing_radius();
        assert!((r - 1.65).abs() < 1e-12);
        assert_eq!(cfg.global_order, (2.0 * std::f64::consts::PI * 1.65f64).ceil() as usize + 10);
        assert_eq!(cfg.local_orders(&scene), vec![15, 10]);
        assert!(cfg.validate(&scene).is_ok());
        let too_small = cfg.clone().with_global_order(12);
        assert!(matches!(too_small.validate(&scene), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("full_s".parse::<OperatorMode>().unwrap(), OperatorMode::FullS);
        assert_eq!(OperatorMode::Transition.to_string(), "transition");
        assert!("full".parse::<OperatorMode>().is_err());
    }
}
