// Smallest possible case: a swap operator against parity.
//
// `S` exchanges the two channels and `T = diag(1, -1)` flips the sign of the
// second, so `T S T^dagger = -S` and the measure saturates at 1.

use num_complex::Complex64;
use symbreak::{coupling_strengths, measure_direct, measure_discrete, ComplexMatrix, SymmetryGrading};

pub fn run_example() -> symbreak::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let swap = ComplexMatrix::from_vec(2, 2, vec![zero, one, one, zero])?;
    let parity = ComplexMatrix::from_vec(2, 2, vec![one, zero, zero, -one])?;

    let direct = measure_direct(&swap, &parity)?;

    // same number from the coupling table
    let grading = SymmetryGrading::discrete(&[one, -one])?;
    let x = coupling_strengths(&swap, &grading, &grading)?;
    let from_table = measure_discrete(&x)?;

    println!("direct     M = {direct}");
    println!("from table M = {from_table}");
    assert_eq!(direct, 1.0);
    assert!((from_table - 1.0).abs() < 1e-15);

    // the identity commutes with everything
    let identity = ComplexMatrix::identity(2);
    println!("identity   M = {}", measure_direct(&identity, &parity)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
