//! Seeded random operators, gradings and vectors for fuzzing and examples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::operator::ComplexMatrix;

pub type FixtureRng = ChaCha8Rng;

pub fn rng(seed: u64) -> FixtureRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex number with real and imaginary parts uniform in [-1, 1).
pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    let mut v = random_vector(rng, n);
    normalize(&mut v);
    v
}

/// Random unitary from modified Gram-Schmidt on a random matrix, with one
/// re-orthogonalisation pass.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(q, v)| q.conj() * v).sum();
                let qk = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&qk) {
                    *v -= proj * q;
                }
            }
        }
        normalize(&mut cols[j]);
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Integer eigenvalues drawn uniformly from `-max..=max`.
pub fn random_integer_grading(rng: &mut impl Rng, n: usize, max: i64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-max..=max) as f64).collect()
}

/// `n` unit-modulus eigenvalues drawn from `distinct` random phases, so that
/// eigenspaces are typically degenerate.
pub fn random_phase_grading(rng: &mut impl Rng, n: usize, distinct: usize) -> Vec<Complex64> {
    let phases: Vec<f64> = (0..distinct)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    (0..n)
        .map(|_| Complex64::from_polar(1.0, phases[rng.gen_range(0..distinct)]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(11);
        for n in [1, 2, 7, 16] {
            let u = random_unitary(&mut r, n);
            assert!(u.unitarity_residual().unwrap() < 1e-26, "n = {n}");
        }
    }

    #[test]
    fn seeded_is_deterministic() {
        let a = random_matrix(&mut rng(9), 3, 3);
        let b = random_matrix(&mut rng(9), 3, 3);
        assert_eq!(a, b);
    }
}
