// In two dimensions the mirror through the vertical axis and the half turn
// give the same measure for scenes that are themselves mirror symmetric.
// The mirror is measured both directly and through its eigenbasis.

use std::f64::consts::PI;

use symbreak::scatter2d::{
    assemble_scattering_operator, mirror_eigenbasis, mirror_operator, rotation_operator, scenes, SimConfig,
};
use symbreak::{coupling_strengths, measure_direct, measure_discrete};

pub fn run_example() -> symbreak::Result<()> {
    for (name, scene) in [("one small", scenes::one_small_on_big()), ("three stacked", scenes::three_stacked_on_big())] {
        let cfg = SimConfig::default_for(&scene);
        let s = assemble_scattering_operator(&scene, &cfg)?.operator;
        let l = cfg.global_order;

        let mirror = measure_direct(&s, &mirror_operator(l))?;
        let half_turn = measure_direct(&s, &rotation_operator(l, PI))?;

        let (v, grading) = mirror_eigenbasis(l);
        let rotated = v.adjoint().matmul(&s)?.matmul(&v)?;
        let table = measure_discrete(&coupling_strengths(&rotated, &grading, &grading)?)?;

        println!("{name:>13}: mirror {mirror:.12}  half turn {half_turn:.12}  eigenbasis table {table:.12}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
