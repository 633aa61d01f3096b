// Three discs at 120 degrees. The operator only couples sectors whose
// angular momenta differ by a multiple of 3, so `M` vanishes at a third of
// a turn.

use std::f64::consts::PI;

use symbreak::scatter2d::{assemble_scattering_operator, rotation_grading, scenes, SimConfig};
use symbreak::{coupling_strengths, measure_continuous_closed};

pub fn run_example() -> symbreak::Result<()> {
    let scene = scenes::c3_ring();
    let cfg = SimConfig::default_for(&scene);
    let s = assemble_scattering_operator(&scene, &cfg)?.operator;
    let g = rotation_grading(cfg.global_order);
    let x = coupling_strengths(&s, &g, &g)?;

    let mut leak = 0.0f64;
    for (out, inc, v) in x.entries() {
        if (out.re - inc.re).rem_euclid(3.0) != 0.0 {
            leak = leak.max(v / x.total());
        }
    }
    println!("largest coupling outside the mod-3 pattern: {leak:.3e}");
    for k in 0..=6 {
        let theta = k as f64 * PI / 6.0;
        println!("theta = {:>5.1} deg  M = {:.3e}", theta.to_degrees(), measure_continuous_closed(&x, theta)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
