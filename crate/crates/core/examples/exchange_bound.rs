// `C` bounds how much a unitary `S` can shift the mean of the generator.
// Random inputs never get closer than the printed margin.

use num_complex::Complex64;
use symbreak::fixtures::{random_unit_vector, random_unitary, rng};
use symbreak::{coupling_strengths, exchange_ability, SymmetryGrading};

pub fn run_example() -> symbreak::Result<()> {
    let mut r = rng(7);
    let n = 10;
    let s = random_unitary(&mut r, n);
    let gammas: Vec<f64> = (0..n).map(|i| i as f64 - 4.5).collect();
    let grading = SymmetryGrading::continuous(&gammas)?;
    let c = exchange_ability(&coupling_strengths(&s, &grading, &grading)?)?;

    let mean = |v: &[Complex64]| v.iter().zip(&gammas).map(|(a, g)| a.norm_sqr() * g).sum::<f64>();
    let mut largest = 0.0f64;
    for _ in 0..5000 {
        let a = random_unit_vector(&mut r, n);
        let shift = (mean(&s.apply(&a)?) - mean(&a)).abs();
        largest = largest.max(shift);
    }
    println!("C = {c:.6}");
    println!("largest shift of <gamma> seen = {largest:.6}");
    assert!(largest <= c);
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
