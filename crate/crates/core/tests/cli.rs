use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use symbreak::io::{read_matrix, read_scene, write_matrix};
use symbreak::cli::{cmd_sweep, SweepSpec, SymmetrySpec};
use symbreak::io::sweep_from_csv;
use symbreak::scatter2d::{assemble_scattering_operator, rotation_grading, scenes, SimConfig};
use symbreak::{coupling_strengths, measure_continuous_closed};
use symbreak::ComplexMatrix;

fn symbreak(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_symbreak"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RAYON_NUM_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const TWO_DISCS: &str = "# two discs\nk = 6.283185307179586\ndisc 0 0 1\ndisc 0 1.35 0.3\n";

fn real(m: [[f64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| Complex64::new(m[i][j], 0.0))
}

#[test]
fn simulate_writes_the_in_process_operator_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.txt");
    let out = dir.path().join("op.txt");
    fs::write(&scene, TWO_DISCS).unwrap();

    let run = symbreak(&["simulate", "--scene", p(&scene), "--out", p(&out)], None);
    assert_eq!(code(&run), 0, "{}", stderr(&run));

    let file = read_scene(&scene).unwrap();
    let expected = assemble_scattering_operator(&file.scene, &file.config()).unwrap().operator;
    let written = read_matrix(&out).unwrap();
    assert_eq!(written.rows(), 2 * file.config().global_order + 1);
    assert!(written.approx_eq(&expected, 0.0));
    assert_eq!(written.row_labels(), expected.row_labels());

    let sidecar: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("op.txt.report.json")).unwrap()).unwrap();
    assert_eq!(sidecar["convergence"]["passed"], true);
}

#[test]
fn malformed_scene_exits_2_and_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.txt");
    fs::write(&scene, "k = 6.28\ndisc 0 0 1\ndisc 0 oops 0.3\n").unwrap();
    let run = symbreak(&["simulate", "--scene", p(&scene), "--out", p(&dir.path().join("op.txt"))], None);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("line 3"), "{}", stderr(&run));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(code(&symbreak(&["measure"], None)), 2);
    assert_eq!(code(&symbreak(&["sweep", "--operator", "/nonexistent", "--symmetry", "rotation", "--theta-range", "0:1:3"], None)), 2);
    assert_eq!(code(&symbreak(&["nope"], None)), 2);
}

#[test]
fn truncation_too_small_to_converge_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.txt");
    fs::write(&scene, "# far too few multipoles for a disc this far out\nk = 6.283185307179586\nL = 15\ndisc 0 0 1\ndisc 0 5 0.3\n").unwrap();
    let run = symbreak(&["simulate", "--scene", p(&scene), "--out", p(&dir.path().join("op.txt"))], None);
    assert_eq!(code(&run), 3, "{}", stderr(&run));
}

#[test]
fn anti_commuting_toy_measures_one() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("swap.txt");
    let t = dir.path().join("parity.txt");
    write_matrix(&op, &real([[0.0, 1.0], [1.0, 0.0]])).unwrap();
    write_matrix(&t, &real([[1.0, 0.0], [0.0, -1.0]])).unwrap();
    let report = dir.path().join("report.json");

    let run = symbreak(&["measure", "--operator", p(&op), "--transform", p(&t), "--out", p(&report)], None);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["discrete_measure"].as_f64(), Some(1.0), "{json}");
}

#[test]
fn non_unitary_transform_fails_verification_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    write_matrix(&t, &real([[2.0, 0.0], [0.0, 1.0]])).unwrap();
    let run = symbreak(&["verify", "--transform", p(&t)], None);
    assert_eq!(code(&run), 4);
    assert!(String::from_utf8_lossy(&run.stdout).contains("FAIL"));
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("scene.txt");
    fs::write(&scene, TWO_DISCS).unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let op = dir.path().join(format!("op{threads}.txt"));
        assert_eq!(code(&symbreak(&["simulate", "--scene", p(&scene), "--out", p(&op)], Some(threads))), 0);
        let sweep = symbreak(&["sweep", "--operator", p(&op), "--symmetry", "rotation", "--theta-range", "0:3.14:9"], Some(threads));
        let verify = symbreak(&["verify"], Some(threads));
        assert_eq!(code(&verify), 0);
        outputs.push((fs::read(&op).unwrap(), sweep.stdout, verify.stdout));
    }
    assert!(outputs[0] == outputs[1]);
}

#[test]
fn sweep_file_reproduces_in_process_curve() {
    let dir = tempfile::tempdir().unwrap();
    let scene = scenes::c3_ring();
    let cfg = SimConfig::default_for(&scene);
    let s = assemble_scattering_operator(&scene, &cfg).unwrap().operator;
    let op = dir.path().join("c3.op");
    write_matrix(&op, &s).unwrap();

    let csv = cmd_sweep(&op, &SymmetrySpec::Rotation, &SweepSpec::new(-std::f64::consts::PI, std::f64::consts::PI, 721).unwrap(), None).unwrap();
    let g = rotation_grading(cfg.global_order);
    let x = coupling_strengths(&s, &g, &g).unwrap();
    for (theta, m) in sweep_from_csv(&csv).unwrap() {
        assert_eq!(m, measure_continuous_closed(&x, theta).unwrap());
    }
}
