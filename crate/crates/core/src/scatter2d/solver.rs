use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{ComplexMatrix, LuFactorization};

use super::{graf_translation, single_disc_tmatrix, Scene, SimConfig, TranslationKind};

/// Condition estimates above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Factorised Foldy-Lax system of a scene.
///
/// Unknowns are the outgoing coefficients `b_i` of every disc, stacked disc
/// by disc. They satisfy
///
/// ```text
/// b_i = T_i (a_i + sum_{j != i} G_ij b_j)
/// ```
///
/// where `a_i` is the incoming field re-expanded at disc `i` and `G_ij`
/// re-expands the outgoing field of disc `j` as a regular field at disc `i`.
///
/// The system is solved for `y = b / sqrt|t|`: high orders have tiny `t_n`
/// and huge Hankel couplings, and this symmetric scaling keeps the matrix
/// well conditioned as the local orders grow.
pub struct FoldyLax {
    global_order: usize,
    local_orders: Vec<usize>,
    offsets: Vec<usize>,
    tmatrices: Vec<Vec<Complex64>>,
    scales: Vec<Vec<f64>>,
    incident_maps: Vec<ComplexMatrix>,
    outgoing_maps: Vec<ComplexMatrix>,
    lu: LuFactorization,
    condition: f64,
}

impl FoldyLax {
    pub fn new(scene: &Scene, cfg: &SimConfig) -> Result<Self> {
        scene.validate()?;
        cfg.validate(scene)?;
        let k = scene.wavenumber;
        let local_orders = cfg.local_orders(scene);
        let mut offsets = Vec::with_capacity(local_orders.len());
        let mut dim = 0;
        for &l in &local_orders {
            offsets.push(dim);
            dim += 2 * l + 1;
        }

        let tmatrices = scene
            .discs
            .iter()
            .zip(&local_orders)
            .map(|(d, &l)| single_disc_tmatrix(d.radius, k, l))
            .collect::<Result<Vec<_>>>()?;

        let scales: Vec<Vec<f64>> = tmatrices
            .iter()
            .map(|t| t.iter().map(|t| t.norm().sqrt().max(f64::MIN_POSITIVE)).collect())
            .collect();

        let mut system = ComplexMatrix::identity(dim);
        for (i, di) in scene.discs.iter().enumerate() {
            for (j, dj) in scene.discs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let shift = [di.x - dj.x, di.y - dj.y];
                let g = graf_translation(shift, k, local_orders[j], local_orders[i], TranslationKind::OutgoingToRegular)?;
                for r in 0..g.rows() {
                    let t = tmatrices[i][r] / scales[i][r];
                    for c in 0..g.cols() {
                        system[(offsets[i] + r, offsets[j] + c)] = -t * g[(r, c)] * scales[j][c];
                    }
                }
            }
        }
        let lu = system.lu()?;
        let condition = lu.condition_estimate()?;
        if !condition.is_finite() || condition > MAX_CONDITION {
            return Err(Error::IllConditioned { condition });
        }

        let l_glob = cfg.global_order;
        let incident_maps = scene
            .discs
            .iter()
            .zip(&local_orders)
            .map(|(d, &l)| graf_translation(d.center(), k, l_glob, l, TranslationKind::RegularToRegular))
            .collect::<Result<Vec<_>>>()?;
        let outgoing_maps = scene
            .discs
            .iter()
            .zip(&local_orders)
            .map(|(d, &l)| graf_translation([-d.x, -d.y], k, l, l_glob, TranslationKind::RegularToRegular))
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            global_order: l_glob,
            local_orders,
            offsets,
            tmatrices,
            scales,
            incident_maps,
            outgoing_maps,
            lu,
            condition,
        })
    }

    pub fn global_order(&self) -> usize {
        self.global_order
    }

    pub fn local_orders(&self) -> &[usize] {
        &self.local_orders
    }

    /// 1-norm condition estimate of the (scaled) Foldy-Lax matrix.
    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    fn dim(&self) -> usize {
        self.lu.dim()
    }

    /// Scaled `T_i a_i` for every disc, stacked: the right-hand side for `incoming`.
    fn driven(&self, incoming: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut rhs = Vec::with_capacity(self.dim());
        for ((map, t), d) in self.incident_maps.iter().zip(&self.tmatrices).zip(&self.scales) {
            let local = map.apply(incoming)?;
            rhs.extend(local.iter().zip(t).zip(d).map(|((a, t), d)| t / d * a));
        }
        Ok(rhs)
    }

    /// Undoes the scaling and splits the stacked solution per disc.
    fn split(&self, stacked: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.offsets
            .iter()
            .zip(&self.scales)
            .map(|(&o, d)| stacked[o..o + d.len()].iter().zip(d).map(|(y, d)| y * d).collect())
            .collect()
    }

    /// Outgoing coefficients of every disc, about its own centre, for the
    /// given global incoming coefficients.
    pub fn solve(&self, incoming: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
        let expected = 2 * self.global_order + 1;
        if incoming.len() != expected {
            return Err(Error::dims("foldy_lax_solve", expected, incoming.len()));
        }
        let b = self.lu.solve_vec(&self.driven(incoming)?)?;
        Ok(self.split(&b))
    }

    /// Re-expands per-disc outgoing coefficients about the global origin.
    pub fn project_outgoing(&self, per_disc: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        let mut total = vec![Complex64::new(0.0, 0.0); 2 * self.global_order + 1];
        for (map, b) in self.outgoing_maps.iter().zip(per_disc) {
            for (acc, v) in total.iter_mut().zip(map.apply(b)?) {
                *acc += v;
            }
        }
        Ok(total)
    }

    /// Transition operator on the global multipole basis, all columns at once.
    pub fn transition_matrix(&self) -> Result<ComplexMatrix> {
        let n_glob = 2 * self.global_order + 1;
        let mut rhs = ComplexMatrix::zeros(self.dim(), n_glob);
        for (((map, t), d), &offset) in self.incident_maps.iter().zip(&self.tmatrices).zip(&self.scales).zip(&self.offsets) {
            for r in 0..map.rows() {
                for c in 0..n_glob {
                    rhs[(offset + r, c)] = t[r] / d[r] * map[(r, c)];
                }
            }
        }
        let mut b = self.lu.solve(&rhs)?;
        for (d, &offset) in self.scales.iter().zip(&self.offsets) {
            for (r, d) in d.iter().enumerate() {
                for c in 0..n_glob {
                    b[(offset + r, c)] *= d;
                }
            }
        }
        let mut total = ComplexMatrix::zeros(n_glob, n_glob);
        for (map, (&offset, &l)) in self.outgoing_maps.iter().zip(self.offsets.iter().zip(&self.local_orders)) {
            let rows: Vec<usize> = (offset..offset + 2 * l + 1).collect();
            let cols: Vec<usize> = (0..n_glob).collect();
            total = total.add(&map.matmul(&b.select(&rows, &cols))?)?;
        }
        Ok(total)
    }
}

/// Per-disc outgoing coefficients for one incoming field.
pub fn foldy_lax_solve(scene: &Scene, cfg: &SimConfig, incoming: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    FoldyLax::new(scene, cfg)?.solve(incoming)
}
