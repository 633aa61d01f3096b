// Rotational symmetry breaking of a big disc with a small disc on top.
//
// Prints `M(theta)` over half a turn together with the local slope `B` and
// the exchange ability `C`.

use std::f64::consts::PI;

use symbreak::measures::{exchange_ability, local_slope, sweep_continuous};
use symbreak::scatter2d::{assemble_scattering_operator, rotation_grading, scenes, SimConfig};
use symbreak::coupling_strengths;

pub fn run_example() -> symbreak::Result<()> {
    let scene = scenes::one_small_on_big();
    let cfg = SimConfig::default_for(&scene);
    let assembled = assemble_scattering_operator(&scene, &cfg)?;
    let d = &assembled.diagnostics;
    println!(
        "L = {}, {} channels, condition {:.2e}, unitarity residual {:.2e}",
        d.global_order,
        assembled.operator.rows(),
        d.condition_estimate,
        d.unitarity_residual
    );

    let grading = rotation_grading(cfg.global_order);
    let x = coupling_strengths(&assembled.operator, &grading, &grading)?;
    let thetas: Vec<f64> = (0..=8).map(|k| k as f64 * PI / 8.0).collect();
    for (theta, m) in sweep_continuous(&x, &thetas)? {
        println!("theta = {:6.3}  M = {m:.6}", theta);
    }
    println!("B = {:.6}", local_slope(&x)?);
    println!("C = {:.6}", exchange_ability(&x)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
