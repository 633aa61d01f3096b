//! Symmetry gradings of a basis and the coupling strengths between
//! eigen-subspaces.
//!
//! A [`SymmetryGrading`] assigns an eigenvalue to each basis index: a real
//! eigenvalue of the Hermitian generator for a continuous symmetry, or a
//! unit-modulus eigenvalue of the transform itself for a discrete one.
//! Grouping equal eigenvalues partitions the space into subspaces, and the
//! squared Frobenius norms of the operator blocks between them form a
//! [`CouplingTable`].
//!
//! The table can be built from a known operator ([`coupling_strengths`]) or
//! from intensity-only measurements on a [`BlackBoxSystem`]
//! ([`coupling_from_intensities`]); both accumulate in the same canonical
//! order (incoming group ascending, then basis index).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{BasisLabel, ComplexMatrix};

/// Default absolute tolerance for treating two eigenvalues as equal.
pub const DEFAULT_GROUPING_TOLERANCE: f64 = 1e-9;

/// Allowed deviation of a discrete eigenvalue's modulus from one.
pub const UNIMODULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    /// Eigenvalues of a Hermitian generator; the transform is `exp(-i theta Gamma)`.
    Continuous,
    /// Eigenvalues of a unitary transform.
    Discrete,
}

impl SymmetryKind {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryKind::Continuous => "continuous",
            SymmetryKind::Discrete => "discrete",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryGrading {
    kind: SymmetryKind,
    eigenvalues: Vec<Complex64>,
    tolerance: f64,
}

impl SymmetryGrading {
    pub fn continuous(eigenvalues: &[f64]) -> Result<Self> {
        if let Some(i) = eigenvalues.iter().position(|g| !g.is_finite()) {
            return Err(Error::InvalidLabels(format!("eigenvalue {i} is not finite")));
        }
        Ok(Self {
            kind: SymmetryKind::Continuous,
            eigenvalues: eigenvalues.iter().map(|&g| Complex64::new(g, 0.0)).collect(),
            tolerance: DEFAULT_GROUPING_TOLERANCE,
        })
    }

    pub fn discrete(eigenvalues: &[Complex64]) -> Result<Self> {
        for (index, g) in eigenvalues.iter().enumerate() {
            let modulus = g.norm();
            if !modulus.is_finite() || (modulus - 1.0).abs() > UNIMODULAR_TOLERANCE {
                return Err(Error::NonUnimodular { index, modulus });
            }
        }
        Ok(Self {
            kind: SymmetryKind::Discrete,
            eigenvalues: eigenvalues.to_vec(),
            tolerance: DEFAULT_GROUPING_TOLERANCE,
        })
    }

    /// Reads the eigenvalues off basis labels.
    pub fn from_labels(kind: SymmetryKind, labels: &[BasisLabel]) -> Result<Self> {
        match kind {
            SymmetryKind::Continuous => {
                if let Some(i) = labels.iter().position(|l| l.gamma.im != 0.0) {
                    return Err(Error::InvalidLabels(format!(
                        "label {i} has a complex eigenvalue but the grading is continuous"
                    )));
                }
                let g: Vec<f64> = labels.iter().map(|l| l.gamma.re).collect();
                Self::continuous(&g)
            }
            SymmetryKind::Discrete => {
                let g: Vec<Complex64> = labels.iter().map(|l| l.gamma).collect();
                Self::discrete(&g)
            }
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    /// Real parts of the eigenvalues; meaningful for continuous gradings.
    pub fn real_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|g| g.re).collect()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    fn sort_key(&self, g: Complex64) -> f64 {
        match self.kind {
            SymmetryKind::Continuous => g.re,
            SymmetryKind::Discrete => {
                let phase = g.arg();
                if phase <= -PI {
                    PI
                } else {
                    phase
                }
            }
        }
    }

    /// Partitions the basis into groups of equal eigenvalue.
    pub fn partition(&self) -> Result<Partition> {
        let tol = self.tolerance;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.sort_key(self.eigenvalues[a])
                .total_cmp(&self.sort_key(self.eigenvalues[b]))
                .then(a.cmp(&b))
        });

        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            let g = self.eigenvalues[i];
            match clusters.last_mut() {
                Some(cluster) if (g - self.eigenvalues[*cluster.last().unwrap()]).norm() <= tol => {
                    let first = self.eigenvalues[cluster[0]];
                    if (g - first).norm() > tol {
                        return Err(Error::AmbiguousGrouping {
                            first,
                            last: g,
                            tolerance: tol,
                        });
                    }
                    cluster.push(i);
                }
                _ => clusters.push(vec![i]),
            }
        }

        // phases just below +pi and just above -pi are neighbours
        if self.kind == SymmetryKind::Discrete && clusters.len() > 1 {
            let head = self.eigenvalues[*clusters[0].first().unwrap()];
            let tail = self.eigenvalues[*clusters.last().unwrap().last().unwrap()];
            if (head - tail).norm() <= tol {
                let wrapped = clusters.remove(0);
                let last = clusters.last_mut().unwrap();
                for &i in &wrapped {
                    for &j in last.iter() {
                        if (self.eigenvalues[i] - self.eigenvalues[j]).norm() > tol {
                            return Err(Error::AmbiguousGrouping {
                                first: self.eigenvalues[j],
                                last: self.eigenvalues[i],
                                tolerance: tol,
                            });
                        }
                    }
                }
                last.extend(wrapped);
            }
        }

        let mut group_of = vec![0; self.len()];
        let groups = clusters
            .into_iter()
            .enumerate()
            .map(|(gi, mut indices)| {
                indices.sort_unstable();
                for &i in &indices {
                    group_of[i] = gi;
                }
                Group {
                    gamma: self.eigenvalues[indices[0]],
                    indices,
                }
            })
            .collect();
        Ok(Partition { groups, group_of })
    }
}

/// One eigen-subspace: its eigenvalue and the basis indices spanning it.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub gamma: Complex64,
    pub indices: Vec<usize>,
}

/// Disjoint cover of a basis by eigen-subspaces, ordered by eigenvalue
/// (ascending for continuous gradings, by phase in (-pi, pi] for discrete).
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    groups: Vec<Group>,
    group_of: Vec<usize>,
}

impl Partition {
    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Group position of each basis index.
    pub fn group_of(&self) -> &[usize] {
        &self.group_of
    }

    pub fn gammas(&self) -> Vec<Complex64> {
        self.groups.iter().map(|g| g.gamma).collect()
    }

    pub fn find(&self, gamma: Complex64, tolerance: f64) -> Result<&Group> {
        self.groups
            .iter()
            .find(|g| (g.gamma - gamma).norm() <= tolerance)
            .ok_or(Error::UnknownEigenvalue(gamma))
    }
}

/// Groups basis indices by eigenvalue, checking the grading matches the labels.
pub fn group_indices(labels: &[BasisLabel], grading: &SymmetryGrading) -> Result<Partition> {
    if labels.len() != grading.len() {
        return Err(Error::dims("group_indices", labels.len(), grading.len()));
    }
    grading.partition()
}

fn check_operator_gradings(
    op: &'static str,
    s: &ComplexMatrix,
    grading_in: &SymmetryGrading,
    grading_out: &SymmetryGrading,
) -> Result<()> {
    if grading_in.len() != s.cols() {
        return Err(Error::dims(op, format!("{} incoming eigenvalues", s.cols()), grading_in.len()));
    }
    if grading_out.len() != s.rows() {
        return Err(Error::dims(op, format!("{} outgoing eigenvalues", s.rows()), grading_out.len()));
    }
    if grading_in.kind() != grading_out.kind() {
        return Err(Error::WrongSymmetryKind {
            expected: grading_in.kind().name(),
        });
    }
    Ok(())
}

/// The block `S_{gamma_out, gamma_in}` connecting the incoming `gamma_in`
/// subspace to the outgoing `gamma_out` subspace.
pub fn restrict_block(
    s: &ComplexMatrix,
    grading_in: &SymmetryGrading,
    grading_out: &SymmetryGrading,
    gamma_in: Complex64,
    gamma_out: Complex64,
) -> Result<ComplexMatrix> {
    check_operator_gradings("restrict_block", s, grading_in, grading_out)?;
    let pin = grading_in.partition()?;
    let pout = grading_out.partition()?;
    let cols = &pin.find(gamma_in, grading_in.tolerance())?.indices;
    let rows = &pout.find(gamma_out, grading_out.tolerance())?.indices;
    Ok(s.select(rows, cols))
}

/// Coupling strengths `X[gamma_out][gamma_in]`: squared Frobenius norms of
/// the operator blocks between eigen-subspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    kind: SymmetryKind,
    incoming: Vec<Complex64>,
    outgoing: Vec<Complex64>,
    /// Row-major, rows = outgoing eigenvalue, columns = incoming eigenvalue.
    values: Vec<f64>,
    total: f64,
}

impl CouplingTable {
    pub fn new(
        kind: SymmetryKind,
        incoming: Vec<Complex64>,
        outgoing: Vec<Complex64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if values.len() != incoming.len() * outgoing.len() {
            return Err(Error::dims(
                "CouplingTable::new",
                incoming.len() * outgoing.len(),
                values.len(),
            ));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coupling strength {i} = {} is not a nonnegative number",
                values[i]
            )));
        }
        if kind == SymmetryKind::Continuous {
            if let Some(g) = incoming.iter().chain(&outgoing).find(|g| g.im != 0.0) {
                return Err(Error::InvalidLabels(format!("continuous eigenvalue {g} is not real")));
            }
        } else {
            for (index, g) in incoming.iter().chain(&outgoing).enumerate() {
                if (g.norm() - 1.0).abs() > UNIMODULAR_TOLERANCE {
                    return Err(Error::NonUnimodular {
                        index,
                        modulus: g.norm(),
                    });
                }
            }
        }
        let total = values.iter().sum();
        Ok(Self {
            kind,
            incoming,
            outgoing,
            values,
            total,
        })
    }

    /// Convenience constructor for continuous tables; `rows[out][in]`.
    pub fn continuous(incoming: &[f64], outgoing: &[f64], rows: &[&[f64]]) -> Result<Self> {
        let values: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(
            SymmetryKind::Continuous,
            incoming.iter().map(|&g| Complex64::new(g, 0.0)).collect(),
            outgoing.iter().map(|&g| Complex64::new(g, 0.0)).collect(),
            values,
        )
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn incoming_gammas(&self) -> &[Complex64] {
        &self.incoming
    }

    pub fn outgoing_gammas(&self) -> &[Complex64] {
        &self.outgoing
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, out_index: usize, in_index: usize) -> f64 {
        self.values[out_index * self.incoming.len() + in_index]
    }

    /// Sum of all coupling strengths.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Iterates `(gamma_out, gamma_in, X)` over every cell.
    pub fn entries(&self) -> impl Iterator<Item = (Complex64, Complex64, f64)> + '_ {
        self.outgoing.iter().enumerate().flat_map(move |(r, &go)| {
            self.incoming
                .iter()
                .enumerate()
                .map(move |(c, &gi)| (go, gi, self.get(r, c)))
        })
    }

    /// Strength between the given eigenvalues, zero when either is absent.
    pub fn lookup(&self, gamma_out: Complex64, gamma_in: Complex64, tolerance: f64) -> f64 {
        let r = self.outgoing.iter().position(|g| (g - gamma_out).norm() <= tolerance);
        let c = self.incoming.iter().position(|g| (g - gamma_in).norm() <= tolerance);
        match (r, c) {
            (Some(r), Some(c)) => self.get(r, c),
            _ => 0.0,
        }
    }

    /// Same table over the union of both eigenvalue alphabets; missing
    /// subspaces enter as zero-dimensional groups with zero coupling.
    pub fn aligned(&self) -> CouplingTable {
        let tol = DEFAULT_GROUPING_TOLERANCE;
        let mut alphabet = self.incoming.clone();
        for &g in &self.outgoing {
            if !alphabet.iter().any(|a| (a - g).norm() <= tol) {
                alphabet.push(g);
            }
        }
        let key = |g: &Complex64| match self.kind {
            SymmetryKind::Continuous => g.re,
            SymmetryKind::Discrete => {
                let p = g.arg();
                if p <= -PI {
                    PI
                } else {
                    p
                }
            }
        };
        alphabet.sort_by(|a, b| key(a).total_cmp(&key(b)));
        let mut values = Vec::with_capacity(alphabet.len() * alphabet.len());
        for &go in &alphabet {
            for &gi in &alphabet {
                values.push(self.lookup(go, gi, tol));
            }
        }
        CouplingTable {
            kind: self.kind,
            incoming: alphabet.clone(),
            outgoing: alphabet,
            values,
            total: self.total,
        }
    }

    /// Largest entrywise relative difference to `other` over the aligned
    /// alphabets. Entries are compared relative to their own size, floored
    /// at `1e-14` of the larger table total.
    pub fn max_relative_difference(&self, other: &CouplingTable) -> f64 {
        let a = self.aligned();
        let b = other.aligned();
        let tol = DEFAULT_GROUPING_TOLERANCE;
        let floor = 1e-14 * a.total.max(b.total);
        let mut alphabet: Vec<Complex64> = a.incoming.clone();
        alphabet.extend(b.incoming.iter().filter(|g| !a.incoming.iter().any(|x| (*x - **g).norm() <= tol)));
        let mut worst: f64 = 0.0;
        for &go in &alphabet {
            for &gi in &alphabet {
                let x = a.lookup(go, gi, tol);
                let y = b.lookup(go, gi, tol);
                let denom = x.abs().max(y.abs()).max(floor);
                if denom > 0.0 {
                    worst = worst.max((x - y).abs() / denom);
                }
            }
        }
        worst
    }
}

/// `X[gamma_out][gamma_in] = ||S_{gamma_out gamma_in}||_F^2` for every pair
/// of groups.
pub fn coupling_strengths(
    s: &ComplexMatrix,
    grading_in: &SymmetryGrading,
    grading_out: &SymmetryGrading,
) -> Result<CouplingTable> {
    if s.is_empty() {
        return Err(Error::EmptyOperator);
    }
    check_operator_gradings("coupling_strengths", s, grading_in, grading_out)?;
    let pin = grading_in.partition()?;
    let pout = grading_out.partition()?;
    let n_in = pin.groups().len();
    let mut values = vec![0.0; pout.groups().len() * n_in];
    for (gi, group) in pin.groups().iter().enumerate() {
        for &j in &group.indices {
            for i in 0..s.rows() {
                values[pout.group_of()[i] * n_in + gi] += s[(i, j)].norm_sqr();
            }
        }
    }
    CouplingTable::new(grading_in.kind(), pin.gammas(), pout.gammas(), values)
}

/// A system probed only through its response to incoming states.
///
/// `respond` must be deterministic: the same input yields the same output.
pub trait BlackBoxSystem: Sync {
    fn incoming_labels(&self) -> &[BasisLabel];
    fn outgoing_labels(&self) -> &[BasisLabel];
    /// Outgoing coordinates produced by the given incoming coordinates.
    fn respond(&self, incoming: &[Complex64]) -> Result<Vec<Complex64>>;
}

/// Replays a stored operator as a black box.
#[derive(Debug, Clone, Copy)]
pub struct OperatorSystem<'a> {
    operator: &'a ComplexMatrix,
}

impl<'a> OperatorSystem<'a> {
    pub fn new(operator: &'a ComplexMatrix) -> Self {
        Self { operator }
    }
}

impl BlackBoxSystem for OperatorSystem<'_> {
    fn incoming_labels(&self) -> &[BasisLabel] {
        self.operator.col_labels()
    }

    fn outgoing_labels(&self) -> &[BasisLabel] {
        self.operator.row_labels()
    }

    fn respond(&self, incoming: &[Complex64]) -> Result<Vec<Complex64>> {
        self.operator.apply(incoming)
    }
}

/// Views a system in different orthonormal bases: incoming coordinates `c`
/// are prepared as `V_in c` and the response is read out as `V_out^dagger b`.
/// The columns of each basis matrix are the new basis vectors, and their
/// column labels become the labels of the new bases.
pub struct BasisChangeSystem<'a, S: BlackBoxSystem> {
    inner: &'a S,
    incoming_basis: ComplexMatrix,
    outgoing_basis_adjoint: ComplexMatrix,
    outgoing_labels: Vec<BasisLabel>,
}

impl<'a, S: BlackBoxSystem> BasisChangeSystem<'a, S> {
    pub fn new(inner: &'a S, incoming_basis: ComplexMatrix, outgoing_basis: ComplexMatrix) -> Result<Self> {
        if incoming_basis.rows() != inner.incoming_labels().len() {
            return Err(Error::dims(
                "BasisChangeSystem",
                inner.incoming_labels().len(),
                incoming_basis.rows(),
            ));
        }
        if outgoing_basis.rows() != inner.outgoing_labels().len() {
            return Err(Error::dims(
                "BasisChangeSystem",
                inner.outgoing_labels().len(),
                outgoing_basis.rows(),
            ));
        }
        Ok(Self {
            inner,
            outgoing_labels: outgoing_basis.col_labels().to_vec(),
            outgoing_basis_adjoint: outgoing_basis.adjoint(),
            incoming_basis,
        })
    }
}

impl<S: BlackBoxSystem> BlackBoxSystem for BasisChangeSystem<'_, S> {
    fn incoming_labels(&self) -> &[BasisLabel] {
        self.incoming_basis.col_labels()
    }

    fn outgoing_labels(&self) -> &[BasisLabel] {
        &self.outgoing_labels
    }

    fn respond(&self, incoming: &[Complex64]) -> Result<Vec<Complex64>> {
        let prepared = self.incoming_basis.apply(incoming)?;
        let response = self.inner.respond(&prepared)?;
        self.outgoing_basis_adjoint.apply(&response)
    }
}

/// Coupling strengths from intensity-only data: every incoming basis vector
/// is sent through the system once and the squared moduli of the outgoing
/// coordinates are summed per outgoing eigen-subspace. Phases are never used.
pub fn coupling_from_intensities<S: BlackBoxSystem + ?Sized>(
    system: &S,
    grading_in: &SymmetryGrading,
    grading_out: &SymmetryGrading,
) -> Result<CouplingTable> {
    let n_in = system.incoming_labels().len();
    let n_out = system.outgoing_labels().len();
    if n_in == 0 || n_out == 0 {
        return Err(Error::EmptyOperator);
    }
    if grading_in.len() != n_in {
        return Err(Error::dims("coupling_from_intensities", n_in, grading_in.len()));
    }
    if grading_out.len() != n_out {
        return Err(Error::dims("coupling_from_intensities", n_out, grading_out.len()));
    }
    if grading_in.kind() != grading_out.kind() {
        return Err(Error::WrongSymmetryKind {
            expected: grading_in.kind().name(),
        });
    }
    let pin = grading_in.partition()?;
    let pout = grading_out.partition()?;

    let probes: Vec<(usize, usize)> = pin
        .groups()
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| g.indices.iter().map(move |&j| (gi, j)))
        .collect();
    let intensities: Vec<Vec<f64>> = probes
        .par_iter()
        .map(|&(_, j)| {
            let mut probe = vec![Complex64::new(0.0, 0.0); n_in];
            probe[j] = Complex64::new(1.0, 0.0);
            let out = system.respond(&probe)?;
            if out.len() != n_out {
                return Err(Error::dims("black-box response", n_out, out.len()));
            }
            Ok(out.iter().map(Complex64::norm_sqr).collect())
        })
        .collect::<Result<_>>()?;

    let n_groups_in = pin.groups().len();
    let mut values = vec![0.0; pout.groups().len() * n_groups_in];
    for (&(gi, _), column) in probes.iter().zip(&intensities) {
        for (i, &intensity) in column.iter().enumerate() {
            values[pout.group_of()[i] * n_groups_in + gi] += intensity;
        }
    }
    CouplingTable::new(grading_in.kind(), pin.gammas(), pout.gammas(), values)
}
