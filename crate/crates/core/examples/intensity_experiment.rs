// Coupling table from intensity-only probes.
//
// The scene is treated as a black box: feed in one channel or a sum of two,
// read back only output intensities per symmetry sector. The result matches
// the table computed from the full operator.

use symbreak::scatter2d::{assemble_scattering_operator, rotation_grading, scenes, SceneSystem, SimConfig};
use symbreak::{coupling_from_intensities, coupling_strengths, measure_continuous_closed};

pub fn run_example() -> symbreak::Result<()> {
    let scene = scenes::three_stacked_on_big();
    let cfg = SimConfig::default_for(&scene);
    let grading = rotation_grading(cfg.global_order);

    let system = SceneSystem::new(&scene, &cfg)?;
    let measured = coupling_from_intensities(&system, &grading, &grading)?;

    let s = assemble_scattering_operator(&scene, &cfg)?.operator;
    let exact = coupling_strengths(&s, &grading, &grading)?;

    println!("sectors: {}", measured.incoming_gammas().len());
    println!("max relative difference: {:.3e}", measured.max_relative_difference(&exact));
    let theta = 0.3;
    println!(
        "M(0.3) from probes {:.12}, from operator {:.12}",
        measure_continuous_closed(&measured, theta)?,
        measure_continuous_closed(&exact, theta)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
