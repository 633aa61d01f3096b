// File-based workflow: write a scene file, simulate it, measure the operator
// file and sweep it to CSV, the same steps the `symbreak` binary performs.

use std::fs;

use symbreak::cli::{cmd_measure, cmd_simulate, cmd_sweep, SweepSpec, SymmetrySpec};

const SCENE: &str = "\
# big disc with a small one resting on top
k = 6.283185307179586
mode = transition
disc 0 0 1
disc 0 1.35 0.3
";

pub fn run_example() -> symbreak::Result<()> {
    let dir = std::env::temp_dir().join(format!("symbreak-example-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let scene = dir.join("scene.txt");
    let operator = dir.join("operator.txt");
    fs::write(&scene, SCENE)?;

    let report = cmd_simulate(&scene, None, &operator)?;
    println!(
        "simulated L = {}, truncation check max change {:.2e}",
        report.diagnostics.global_order, report.convergence.max_delta
    );

    let json = cmd_measure(&operator, &SymmetrySpec::Rotation, &[0.5, 1.0], Some(&dir.join("measure.json")))?;
    println!("{json}");

    let csv = cmd_sweep(&operator, &SymmetrySpec::Mirror, &SweepSpec::new(0.0, std::f64::consts::PI, 5)?, None)?;
    print!("{csv}");

    fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
