//! Observation-based measures of symmetry breaking for scattering operators.
//!
//! A scattering operator `S` and a symmetry transformation `T` are compared
//! through `M = ||S - T S T^dagger||_F^2 / (4 ||S||_F^2)`. When `T` is generated
//! by a graded observable the same number follows from the coupling table
//! `X[gbar][g]`, which in turn can be measured with intensity-only probes.
//! [`scatter2d`] supplies test systems from a 2D multiple-scattering solver.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod grading;
pub mod io;
pub mod measures;
pub mod operator;
pub mod scatter2d;
pub mod verify;

pub use error::{Error, Result};
pub use grading::{
    coupling_from_intensities, coupling_strengths, group_indices, restrict_block, BasisChangeSystem, BlackBoxSystem,
    CouplingTable, OperatorSystem, SymmetryGrading, SymmetryKind,
};
pub use measures::{
    build_continuous_transform, check_b0_implies_m0, exchange_ability, local_slope, measure_continuous_closed,
    measure_continuous_series, measure_direct, measure_discrete, sweep_continuous, MeasureReport,
};
pub use operator::{BasisLabel, ComplexMatrix};
