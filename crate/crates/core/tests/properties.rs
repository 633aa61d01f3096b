use num_complex::Complex64;
use proptest::prelude::*;
use symbreak::measures::{
    build_continuous_transform, local_slope, measure_continuous_closed, measure_direct, measure_discrete,
};
use symbreak::{coupling_from_intensities, coupling_strengths, ComplexMatrix, OperatorSystem, SymmetryGrading};

fn entries(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

/// Square matrix with an integer grading.
fn graded() -> impl Strategy<Value = (ComplexMatrix, Vec<f64>)> {
    (1usize..9).prop_flat_map(|n| {
        (
            entries(n * n).prop_map(move |d| ComplexMatrix::from_vec(n, n, d).unwrap()),
            prop::collection::vec((-3i32..=3).prop_map(f64::from), n),
        )
    })
}

fn nonzero(s: &ComplexMatrix) -> bool {
    s.frobenius_norm_sq() > 1e-6
}

/// Unitary from the QR factor of a random matrix.
fn unitary(n: usize, seed: &[Complex64]) -> ComplexMatrix {
    let q = nalgebra::DMatrix::from_row_slice(n, n, seed).qr().q();
    ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)])
}

proptest! {
    #[test]
    fn frobenius_norm_is_unitarily_invariant(
        (s, u) in (1usize..8).prop_flat_map(|n| (entries(n * n), entries(n * n)).prop_map(move |(a, b)| (ComplexMatrix::from_vec(n, n, a).unwrap(), unitary(n, &b))))
    ) {
        let rotated = u.matmul(&s).unwrap().matmul(&u.adjoint()).unwrap();
        prop_assert!((rotated.frobenius_norm() - s.frobenius_norm()).abs() <= 1e-12 * s.frobenius_norm().max(1.0));
    }

    #[test]
    fn matmul_is_associative(
        (a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(p, q, r, t)| (
            entries(p * q).prop_map(move |d| ComplexMatrix::from_vec(p, q, d).unwrap()),
            entries(q * r).prop_map(move |d| ComplexMatrix::from_vec(q, r, d).unwrap()),
            entries(r * t).prop_map(move |d| ComplexMatrix::from_vec(r, t, d).unwrap()),
        ))
    ) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-13));
    }

    #[test]
    fn coupling_strengths_sum_to_the_norm((s, g) in graded()) {
        let g = SymmetryGrading::continuous(&g).unwrap();
        let x = coupling_strengths(&s, &g, &g).unwrap();
        prop_assert!((x.total() - s.frobenius_norm_sq()).abs() <= 1e-12 * s.frobenius_norm_sq().max(1e-300));
    }

    #[test]
    fn relabelling_the_basis_leaves_the_table((s, g) in graded(), shift in 0usize..8) {
        let n = s.rows();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let grading = SymmetryGrading::continuous(&g).unwrap();
        let permuted = SymmetryGrading::continuous(&perm.iter().map(|&i| g[i]).collect::<Vec<_>>()).unwrap();
        let x = coupling_strengths(&s, &grading, &grading).unwrap();
        let y = coupling_strengths(&s.select(&perm, &perm), &permuted, &permuted).unwrap();
        prop_assert!(x.max_relative_difference(&y) <= 1e-12);
    }

    #[test]
    fn measure_lies_in_the_unit_interval((s, g) in graded(), theta in -7.0f64..7.0) {
        prop_assume!(nonzero(&s));
        let t = build_continuous_transform(&SymmetryGrading::continuous(&g).unwrap(), theta).unwrap();
        let m = measure_direct(&s, &t).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m));
    }

    #[test]
    fn measure_ignores_overall_scale((s, g) in graded(), theta in -3.0f64..3.0, re in 0.1f64..50.0, im in -50.0f64..50.0) {
        prop_assume!(nonzero(&s));
        let grading = SymmetryGrading::continuous(&g).unwrap();
        let a = coupling_strengths(&s, &grading, &grading).unwrap();
        let b = coupling_strengths(&s.scale(Complex64::new(re, im)), &grading, &grading).unwrap();
        let (ma, mb) = (measure_continuous_closed(&a, theta).unwrap(), measure_continuous_closed(&b, theta).unwrap());
        prop_assert!((ma - mb).abs() <= 1e-12 * ma.max(1e-300) + 1e-15);
    }

    #[test]
    fn integer_gradings_are_two_pi_periodic((s, g) in graded(), theta in -3.2f64..3.2, turns in -3i32..=3) {
        prop_assume!(nonzero(&s));
        let grading = SymmetryGrading::continuous(&g).unwrap();
        let x = coupling_strengths(&s, &grading, &grading).unwrap();
        let shifted = theta + 2.0 * std::f64::consts::PI * f64::from(turns);
        let d = measure_continuous_closed(&x, theta).unwrap() - measure_continuous_closed(&x, shifted).unwrap();
        prop_assert!(d.abs() <= 1e-12);
    }

    #[test]
    fn onset_is_quadratic_with_slope_b((s, g) in graded()) {
        prop_assume!(nonzero(&s));
        let grading = SymmetryGrading::continuous(&g).unwrap();
        let x = coupling_strengths(&s, &grading, &grading).unwrap();
        let b = local_slope(&x).unwrap();
        let theta = 1e-4;
        let m = measure_continuous_closed(&x, theta).unwrap();
        // M = B theta^2 - O(theta^4 * 36 B)
        prop_assert!((m / (theta * theta) - b).abs() <= 1e-6 * b + 1e-15);
    }

    #[test]
    fn discrete_grading_of_the_rotation_matches((s, g) in graded(), theta in 0.01f64..3.0) {
        prop_assume!(nonzero(&s));
        let continuous = SymmetryGrading::continuous(&g).unwrap();
        let phases: Vec<Complex64> = g.iter().map(|&gamma| Complex64::from_polar(1.0, -gamma * theta)).collect();
        let discrete = SymmetryGrading::discrete(&phases).unwrap();
        let mc = measure_continuous_closed(&coupling_strengths(&s, &continuous, &continuous).unwrap(), theta).unwrap();
        let md = measure_discrete(&coupling_strengths(&s, &discrete, &discrete).unwrap()).unwrap();
        prop_assert!((mc - md).abs() <= 1e-12);
    }

    #[test]
    fn commuting_operators_do_not_break((s, g) in graded(), theta in -3.0f64..3.0) {
        let block = ComplexMatrix::from_fn(s.rows(), s.cols(), |i, j| if g[i] == g[j] { s[(i, j)] } else { Complex64::new(0.0, 0.0) });
        prop_assume!(nonzero(&block));
        let t = build_continuous_transform(&SymmetryGrading::continuous(&g).unwrap(), theta).unwrap();
        prop_assert!(measure_direct(&block, &t).unwrap() <= 1e-15);
    }

    #[test]
    fn intensity_probes_reproduce_the_table((s, g) in graded()) {
        prop_assume!(nonzero(&s));
        let grading = SymmetryGrading::continuous(&g).unwrap();
        let x = coupling_strengths(&s, &grading, &grading).unwrap();
        let y = coupling_from_intensities(&OperatorSystem::new(&s), &grading, &grading).unwrap();
        prop_assert_eq!(x, y);
    }
}
