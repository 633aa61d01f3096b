// Bessel and Hankel values used by the scattering solver.

use symbreak::bessel::{bessel_j, bessel_y, hankel1, wronskian};

pub fn run_example() -> symbreak::Result<()> {
    println!("{:>3} {:>6} {:>24} {:>24}", "m", "x", "J_m(x)", "Y_m(x)");
    for m in [0, 1, 5, 20] {
        for x in [0.5, std::f64::consts::TAU, 30.0] {
            println!("{m:>3} {x:>6.3} {:>24.16e} {:>24.16e}", bessel_j(m, x)?, bessel_y(m, x)?);
        }
    }
    let h = hankel1(3, 2.0)?;
    println!("H1_3(2) = {} + {}i", h.re, h.im);
    // J_{m+1} Y_m - J_m Y_{m+1} = 2 / (pi x)
    let (m, x) = (10, 4.0);
    let w = bessel_j(m + 1, x)? * bessel_y(m, x)? - bessel_j(m, x)? * bessel_y(m + 1, x)?;
    println!("Wronskian residual at m = 10, x = 4: {:.3e}", (w / wronskian(x) - 1.0).abs());
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
