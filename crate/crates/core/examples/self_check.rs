// Runs the built-in verification suite with a fixed seed.

use symbreak::verify::{run_verify, VerifyOptions, DEFAULT_SEED};

pub fn run_example() -> symbreak::Result<()> {
    let report = run_verify(&VerifyOptions { seed: DEFAULT_SEED, transform: None });
    print!("{}", report.to_text());
    assert!(report.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> symbreak::Result<()> {
    run_example()
}
