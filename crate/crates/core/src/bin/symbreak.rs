use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use symbreak::cli::{self, SweepSpec, SymmetrySpec};
use symbreak::scatter2d::OperatorMode;
use symbreak::verify::DEFAULT_SEED;

#[derive(Parser)]
#[command(name = "symbreak", version, about = "Symmetry-breaking measures for scattering operators")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SymmetryArgs {
    /// rotation or mirror
    #[arg(long)]
    symmetry: Option<String>,
    /// File of generator eigenvalues, one per basis vector
    #[arg(long)]
    generator: Option<PathBuf>,
    /// Matrix file of a unitary transform
    #[arg(long)]
    transform: Option<PathBuf>,
}

impl SymmetryArgs {
    fn resolve(&self) -> symbreak::Result<SymmetrySpec> {
        SymmetrySpec::resolve(self.symmetry.as_deref(), self.generator.as_deref(), self.transform.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a scene's scattering operator
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        /// transition or full_s (overrides the scene file)
        #[arg(long)]
        mode: Option<OperatorMode>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measures of an operator file
    Measure {
        #[arg(long)]
        operator: PathBuf,
        #[command(flatten)]
        symmetry: SymmetryArgs,
        #[arg(long, allow_negative_numbers = true)]
        theta: Vec<f64>,
        /// min:max:n, added to any --theta values
        #[arg(long, allow_hyphen_values = true)]
        theta_range: Option<SweepSpec>,
        /// JSON report; the coupling table goes next to it
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// M(theta) over a closed grid, as CSV
    Sweep {
        #[arg(long)]
        operator: PathBuf,
        #[command(flatten)]
        symmetry: SymmetryArgs,
        #[arg(long, allow_hyphen_values = true)]
        theta_range: SweepSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coupling table of a scene from intensity-only probes
    Experiment {
        #[arg(long)]
        scene: PathBuf,
        #[command(flatten)]
        symmetry: SymmetryArgs,
        #[arg(long)]
        mode: Option<OperatorMode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in self-check suite
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Use this transform in the discrete-symmetry checks
        #[arg(long)]
        transform: Option<PathBuf>,
    },
}

fn run(args: Args) -> symbreak::Result<i32> {
    match args.command {
        Command::Simulate { scene, mode, out } => {
            let report = cli::cmd_simulate(&scene, mode, &out)?;
            eprintln!(
                "wrote {} (L = {}, unitarity residual {:.3e}, condition {:.3e})",
                out.display(),
                report.diagnostics.global_order,
                report.diagnostics.unitarity_residual,
                report.diagnostics.condition_estimate
            );
        }
        Command::Measure { operator, symmetry, theta, theta_range, out } => {
            let mut thetas = theta;
            if let Some(r) = theta_range {
                thetas.extend(r.grid());
            }
            print!("{}", cli::cmd_measure(&operator, &symmetry.resolve()?, &thetas, out.as_deref())?);
        }
        Command::Sweep { operator, symmetry, theta_range, out } => {
            let csv = cli::cmd_sweep(&operator, &symmetry.resolve()?, &theta_range, out.as_deref())?;
            if out.is_none() {
                print!("{csv}");
            }
        }
        Command::Experiment { scene, symmetry, mode, out } => {
            let table = cli::cmd_experiment(&scene, &symmetry.resolve()?, mode, out.as_deref())?;
            if out.is_none() {
                print!("{table}");
            }
        }
        Command::Verify { seed, transform } => {
            let report = cli::cmd_verify(seed, transform.as_deref())?;
            print!("{}", report.to_text());
            eprint!("{}", report.timings());
            if !report.passed() {
                return Ok(cli::EXIT_VERIFICATION);
            }
        }
    }
    Ok(cli::EXIT_SUCCESS)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_INPUT as u8 } else { 0 });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
