//! Self-check suite run by `symbreak verify`.
//!
//! Every check draws its fixtures from its own seeded generator, so the
//! report text depends only on the seed. Timings are kept apart from the text.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use crate::bessel::{bessel_j, bessel_j_sequence, bessel_y, bessel_y_sequence, wronskian};
use crate::error::Result;
use crate::fixtures::{
    random_integer_grading, random_matrix, random_phase_grading, random_unit_vector, random_unitary, rng, FixtureRng,
};
use crate::grading::{coupling_from_intensities, coupling_strengths, CouplingTable, OperatorSystem, SymmetryGrading};
use crate::io;
use crate::measures::{
    build_continuous_transform, check_b0_implies_m0, exchange_ability, local_slope, measure_continuous_closed,
    measure_continuous_series, measure_direct, measure_discrete,
};
use crate::operator::ComplexMatrix;
use crate::scatter2d::{
    assemble_scattering_operator, check_convergence, mirror_operator, rotation_grading, rotation_operator, scenes,
    OperatorMode, SceneSystem, SimConfig,
};

pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces the random unitaries of the discrete-symmetry checks.
    pub transform: Option<ComplexMatrix>,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Deterministic report: one line per check plus a summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("verify seed {}\n", self.seed);
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{status} {}: {}", c.name, c.detail).unwrap();
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(out, "{passed}/{} checks passed", self.checks.len()).unwrap();
        out
    }

    pub fn timings(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            writeln!(out, "{:>10.3} ms  {}", c.elapsed.as_secs_f64() * 1e3, c.name).unwrap();
        }
        out
    }
}

type Outcome = std::result::Result<String, String>;

struct Ctx<'a> {
    rng: FixtureRng,
    opts: &'a VerifyOptions,
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d == 0.0 {
        0.0
    } else {
        d / a.abs().max(b.abs())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> std::result::Result<f64, String> {
    it.into_iter().try_fold(0.0f64, |w, x| x.map(|x| w.max(x)).map_err(err))
}

fn dim(rng: &mut FixtureRng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

fn frobenius_invariance(c: &mut Ctx) -> Outcome {
    let w = worst((0..20).map(|_| {
        let n = dim(&mut c.rng, 3, 12);
        let s = random_matrix(&mut c.rng, n, n);
        let u = random_unitary(&mut c.rng, n);
        let v = random_unitary(&mut c.rng, n);
        Ok(rel(u.matmul(&s)?.matmul(&v)?.frobenius_norm(), s.frobenius_norm()))
    }))?;
    ensure(w <= 1e-12, format!("max rel deviation {w:.3e}"))
}

fn associativity(c: &mut Ctx) -> Outcome {
    let w = worst((0..20).map(|_| {
        let (a, b, d, e) = (dim(&mut c.rng, 1, 9), dim(&mut c.rng, 1, 9), dim(&mut c.rng, 1, 9), dim(&mut c.rng, 1, 9));
        let x = random_matrix(&mut c.rng, a, b);
        let y = random_matrix(&mut c.rng, b, d);
        let z = random_matrix(&mut c.rng, d, e);
        x.matmul(&y)?.matmul(&z)?.relative_distance(&x.matmul(&y.matmul(&z)?)?)
    }))?;
    ensure(w <= 1e-12, format!("max rel difference {w:.3e}"))
}

fn lu_solve(c: &mut Ctx) -> Outcome {
    let w = worst((0..20).map(|_| {
        let n = dim(&mut c.rng, 2, 16);
        let a = random_matrix(&mut c.rng, n, n);
        let b = random_matrix(&mut c.rng, n, 2);
        let x = a.lu()?.solve(&b)?;
        a.matmul(&x)?.relative_distance(&b)
    }))?;
    ensure(w <= 1e-10, format!("max rel residual {w:.3e}"))
}

fn random_table(c: &mut Ctx, n: usize) -> Result<(ComplexMatrix, SymmetryGrading, CouplingTable)> {
    let s = random_matrix(&mut c.rng, n, n);
    let g = SymmetryGrading::continuous(&random_integer_grading(&mut c.rng, n, 3))?;
    let x = coupling_strengths(&s, &g, &g)?;
    Ok((s, g, x))
}

fn sum_rule(c: &mut Ctx) -> Outcome {
    let w = worst((0..20).map(|_| {
        let n = dim(&mut c.rng, 2, 14);
        let (s, _, x) = random_table(c, n)?;
        let d = SymmetryGrading::discrete(&random_phase_grading(&mut c.rng, n, 3))?;
        let xd = coupling_strengths(&s, &d, &d)?;
        let total = s.frobenius_norm_sq();
        Ok(rel(x.total(), total).max(rel(xd.total(), total)))
    }))?;
    ensure(w <= 1e-12, format!("max rel deviation of sum X from ||S||^2 {w:.3e}"))
}

fn relabel_invariance(c: &mut Ctx) -> Outcome {
    let w = worst((0..20).map(|_| {
        let n = dim(&mut c.rng, 2, 14);
        let (s, g, x) = random_table(c, n)?;
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, c.rng.gen_range(0..=i));
        }
        let sp = s.select(&perm, &perm);
        let gp = SymmetryGrading::continuous(&perm.iter().map(|&i| g.eigenvalues()[i].re).collect::<Vec<_>>())?;
        Ok(x.max_relative_difference(&coupling_strengths(&sp, &gp, &gp)?))
    }))?;
    ensure(w <= 1e-12, format!("max rel table change {w:.3e}"))
}

fn continuous_formulas(c: &mut Ctx) -> Outcome {
    let w = worst((0..10).map(|_| {
        let n = dim(&mut c.rng, 6, 20);
        let (s, g, x) = random_table(c, n)?;
        let mut w: f64 = 0.0;
        for theta in [0.05, 0.2, 0.5] {
            let direct = measure_direct(&s, &build_continuous_transform(&g, theta)?)?;
            let closed = measure_continuous_closed(&x, theta)?;
            let series = measure_continuous_series(&x, theta, 24)?.value;
            w = w.max(rel(direct, closed)).max(rel(closed, series));
        }
        Ok(w)
    }))?;
    ensure(w <= 1e-10, format!("max rel disagreement direct/closed/series {w:.3e}"))
}

/// Unitary `T` with its eigen-decomposition: `T = V diag(d) V^dagger`.
fn random_transform(c: &mut Ctx, n: usize) -> (ComplexMatrix, ComplexMatrix, Vec<Complex64>) {
    let v = random_unitary(&mut c.rng, n);
    let d = random_phase_grading(&mut c.rng, n, 3);
    let t = v.matmul(&ComplexMatrix::from_diagonal(&d)).unwrap().matmul(&v.adjoint()).unwrap();
    (t, v, d)
}

fn discrete_formulas(c: &mut Ctx) -> Outcome {
    if let Some(t) = &c.opts.transform {
        let s = random_matrix(&mut c.rng, t.rows(), t.cols());
        let m = measure_direct(&s, t).map_err(err)?;
        return Ok(format!("override transform accepted, M = {m:.6e}"));
    }
    let w = worst((0..20).map(|_| {
        let n = dim(&mut c.rng, 2, 14);
        let s = random_matrix(&mut c.rng, n, n);
        let (t, v, d) = random_transform(c, n);
        let g = SymmetryGrading::discrete(&d)?;
        let x = coupling_strengths(&v.adjoint().matmul(&s)?.matmul(&v)?, &g, &g)?;
        Ok((measure_direct(&s, &t)? - measure_discrete(&x)?).abs())
    }))?;
    ensure(w <= 1e-12, format!("max |direct - discrete| {w:.3e}"))
}

fn range_and_bound(c: &mut Ctx) -> Outcome {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..50 {
        let n = dim(&mut c.rng, 1, 12);
        let s = random_matrix(&mut c.rng, n, n);
        let t = match &c.opts.transform {
            Some(t) if t.rows() == n => t.clone(),
            Some(t) => {
                let s = random_matrix(&mut c.rng, t.rows(), t.cols());
                measure_direct(&s, t).map_err(err)?;
                continue;
            }
            None => random_transform(c, n).0,
        };
        let m = measure_direct(&s, &t).map_err(err)?;
        lo = lo.min(m);
        hi = hi.max(m);
    }
    let s = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).map_err(err)?;
    let t = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).map_err(err)?;
    let anti = measure_direct(&s, &t).map_err(err)?;
    ensure(
        lo >= 0.0 && hi <= 1.0 + 1e-12 && anti == 1.0,
        format!("M in [{lo:.3e}, {hi:.6}], anti-commuting pair M = {anti}"),
    )
}

fn scale_and_period(c: &mut Ctx) -> Outcome {
    let w = worst((0..20).map(|_| {
        let n = dim(&mut c.rng, 2, 12);
        let (s, g, x) = random_table(c, n)?;
        let theta = c.rng.gen_range(-PI..PI);
        let scaled = s.scale(Complex64::new(-3.7, 1e3));
        let xs = coupling_strengths(&scaled, &g, &g)?;
        let m = measure_continuous_closed(&x, theta)?;
        Ok(rel(m, measure_continuous_closed(&xs, theta)?).max((m - measure_continuous_closed(&x, theta + 2.0 * PI)?).abs()))
    }))?;
    ensure(w <= 1e-12, format!("max scale/period deviation {w:.3e}"))
}

fn slope(c: &mut Ctx) -> Outcome {
    let w = worst((0..50).map(|_| {
        let n = dim(&mut c.rng, 3, 12);
        let (_, _, x) = random_table(c, n)?;
        let b = local_slope(&x)?;
        if b == 0.0 {
            return Ok(0.0);
        }
        Ok(rel(measure_continuous_closed(&x, 1e-3)? / 1e-6, b))
    }))?;
    let mut zero = 0.0f64;
    for _ in 0..10 {
        let n = dim(&mut c.rng, 2, 8);
        let g = SymmetryGrading::continuous(&random_integer_grading(&mut c.rng, n, 3)).map_err(err)?;
        let block = ComplexMatrix::from_fn(n, n, |i, j| {
            if g.eigenvalues()[i] == g.eigenvalues()[j] {
                Complex64::new(1.0 + i as f64, j as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let x = coupling_strengths(&block, &g, &g).map_err(err)?;
        let thetas: Vec<f64> = (0..100).map(|i| -PI + 2.0 * PI * i as f64 / 99.0).collect();
        let report = check_b0_implies_m0(&x, &thetas).map_err(err)?;
        if !report.passed {
            return Err(format!("B = 0 fixture reached M = {:.3e}", report.max_measure));
        }
        zero = zero.max(report.max_measure);
    }
    ensure(w <= 1e-4, format!("max rel slope error {w:.3e}, B = 0 fixtures max M {zero:.3e}"))
}

fn exchange_bound(c: &mut Ctx) -> Outcome {
    let mut violations = 0;
    let mut margin = f64::INFINITY;
    for _ in 0..5 {
        let n = dim(&mut c.rng, 2, 16);
        let s = random_unitary(&mut c.rng, n);
        let gammas = random_integer_grading(&mut c.rng, n, 4);
        let g = SymmetryGrading::continuous(&gammas).map_err(err)?;
        let bound = exchange_ability(&coupling_strengths(&s, &g, &g).map_err(err)?).map_err(err)?;
        let mean = |v: &[Complex64]| v.iter().zip(&gammas).map(|(a, g)| a.norm_sqr() * g).sum::<f64>();
        for _ in 0..200 {
            let a = random_unit_vector(&mut c.rng, n);
            let out = s.apply(&a).map_err(err)?;
            let gap = bound - (mean(&out) - mean(&a)).abs();
            margin = margin.min(gap);
            if gap < -1e-10 {
                violations += 1;
            }
        }
    }
    ensure(violations == 0, format!("{violations} violations, smallest margin {margin:.3e}"))
}

fn intensity_pathway(c: &mut Ctx) -> Outcome {
    let w = worst((0..10).map(|_| {
        let n = dim(&mut c.rng, 2, 14);
        let (s, g, x) = random_table(c, n)?;
        Ok(x.max_relative_difference(&coupling_from_intensities(&OperatorSystem::new(&s), &g, &g)?))
    }))?;
    ensure(w <= 1e-12, format!("max rel difference {w:.3e}"))
}

fn bessel_identities(_: &mut Ctx) -> Outcome {
    let mut w = 0.0f64;
    for &x in &[0.25, 1.0, 3.3, 9.5, 27.0] {
        let j = bessel_j_sequence(41, x).map_err(err)?;
        let y = bessel_y_sequence(41, x).map_err(err)?;
        for m in 0..40 {
            let wr = j[m + 1] * y[m] - j[m] * y[m + 1];
            w = w.max((wr - wronskian(x)).abs() / 1.0f64.max((j[m + 1] * y[m]).abs()));
        }
    }
    let refs = [
        (bessel_j(0, 1.0), 0.7651976865579666),
        (bessel_y(0, 1.0), 0.08825696421567696),
        (bessel_j(1, 1.0), 0.4400505857449335),
        (bessel_y(1, 1.0), -0.7812128213002887),
        (bessel_j(2, 10.0), 0.2546303136851206),
    ];
    let mut table = 0.0f64;
    for (v, r) in refs {
        table = table.max((v.map_err(err)? - r).abs());
    }
    ensure(w <= 1e-12 && table <= 1e-15, format!("Wronskian error {w:.3e}, table error {table:.3e}"))
}

fn simulator_physics(_: &mut Ctx) -> Outcome {
    let scene = scenes::one_small_on_big();
    let cfg = SimConfig::default_for(&scene);
    let big_l = cfg.global_order;
    let t = assemble_scattering_operator(&scene, &cfg).map_err(err)?.operator;
    let full = assemble_scattering_operator(&scene, &cfg.clone().with_mode(OperatorMode::FullS)).map_err(err)?;
    let unitarity = full.diagnostics.unitarity_residual;

    let alpha = 0.7;
    let u = rotation_operator(big_l, alpha);
    let rotated = assemble_scattering_operator(&scene.rotated(alpha), &cfg).map_err(err)?.operator;
    let expected = u.matmul(&t).map_err(err)?.matmul(&u.adjoint()).map_err(err)?;
    let rot_cov = rotated.relative_distance(&expected).map_err(err)?;

    let q = mirror_operator(big_l);
    let mirrored = assemble_scattering_operator(&scene.mirrored(), &cfg).map_err(err)?.operator;
    let expected = q.matmul(&t).map_err(err)?.matmul(&q).map_err(err)?;
    let mir_cov = mirrored.relative_distance(&expected).map_err(err)?;

    let conv = check_convergence(&scene, &cfg, &crate::cli::convergence_angles()).map_err(err)?;
    ensure(
        unitarity <= 1e-6 && rot_cov <= 1e-8 && mir_cov <= 1e-8 && conv.passed,
        format!(
            "unitarity {unitarity:.3e}, rotation covariance {rot_cov:.3e}, mirror covariance {mir_cov:.3e}, L -> L+2 change {:.3e}",
            conv.max_delta
        ),
    )
}

fn rotation_table(scene: &crate::scatter2d::Scene) -> Result<(ComplexMatrix, CouplingTable, SimConfig)> {
    let cfg = SimConfig::default_for(scene);
    let s = assemble_scattering_operator(scene, &cfg)?.operator;
    let g = rotation_grading(cfg.global_order);
    let x = coupling_strengths(&s, &g, &g)?;
    Ok((s, x, cfg))
}

fn forced_structure(_: &mut Ctx) -> Outcome {
    let (_, x, _) = rotation_table(&scenes::centered_disc()).map_err(err)?;
    let thetas: Vec<f64> = (0..73).map(|i| -PI + 2.0 * PI * i as f64 / 72.0).collect();
    let centred = thetas
        .iter()
        .map(|&t| measure_continuous_closed(&x, t))
        .try_fold(0.0f64, |w, m| m.map(|m| w.max(m)))
        .map_err(err)?;

    let (_, x, _) = rotation_table(&scenes::c3_ring()).map_err(err)?;
    let third = 2.0 * PI / 3.0;
    let zeros = measure_continuous_closed(&x, third).map_err(err)?.max(measure_continuous_closed(&x, -third).map_err(err)?);
    let mut leak = 0.0f64;
    for (go, gi, v) in x.entries() {
        if (go.re - gi.re).rem_euclid(3.0) != 0.0 {
            leak = leak.max(v / x.total());
        }
    }

    let (s, _, cfg) = rotation_table(&scenes::three_stacked_on_big()).map_err(err)?;
    let mirror = measure_direct(&s, &mirror_operator(cfg.global_order)).map_err(err)?;
    let half_turn = measure_direct(&s, &rotation_operator(cfg.global_order, PI)).map_err(err)?;
    let gap = (mirror - half_turn).abs();
    ensure(
        centred <= 1e-12 && zeros <= 1e-10 && leak <= 1e-12 && gap <= 1e-10,
        format!(
            "centred disc max M {centred:.3e}, C3 M(+-2pi/3) {zeros:.3e}, mod-3 leak {leak:.3e}, |mirror - half turn| {gap:.3e}"
        ),
    )
}

fn dual_path(_: &mut Ctx) -> Outcome {
    let mut w = 0.0f64;
    for (_, scene) in scenes::all() {
        let (_, x, cfg) = rotation_table(&scene).map_err(err)?;
        let sys = SceneSystem::new(&scene, &cfg).map_err(err)?;
        let g = rotation_grading(cfg.global_order);
        w = w.max(x.max_relative_difference(&coupling_from_intensities(&sys, &g, &g).map_err(err)?));
    }
    ensure(w <= 1e-12, format!("max rel difference over bundled scenes {w:.3e}"))
}

fn round_trips(c: &mut Ctx) -> Outcome {
    let (s, _, x) = random_table(c, 7).map_err(err)?;
    let s = s.scale(Complex64::new(1.0 / 3.0, -1e-200));
    let m_ok = io::matrix_from_str(&io::matrix_to_string(&s)).map_err(err)? == s;
    let x_ok = io::coupling_table_from_str(&io::coupling_table_to_string(&x)).map_err(err)? == x;
    let samples: Vec<(f64, f64)> = (0..5).map(|_| (c.rng.gen::<f64>(), c.rng.gen::<f64>() * 1e-9)).collect();
    let csv_ok = io::sweep_from_csv(&io::sweep_to_csv(&samples)).map_err(err)? == samples;
    ensure(m_ok && x_ok && csv_ok, format!("matrix {m_ok}, table {x_ok}, csv {csv_ok}"))
}

type Check = fn(&mut Ctx) -> Outcome;

const CHECKS: &[(&str, Check)] = &[
    ("frobenius_unitary_invariance", frobenius_invariance),
    ("matmul_associativity", associativity),
    ("lu_solve_residual", lu_solve),
    ("coupling_sum_rule", sum_rule),
    ("coupling_relabel_invariance", relabel_invariance),
    ("continuous_formulas_agree", continuous_formulas),
    ("discrete_formula_agrees", discrete_formulas),
    ("measure_range_and_bound", range_and_bound),
    ("scale_invariance_and_period", scale_and_period),
    ("local_slope", slope),
    ("exchange_bound", exchange_bound),
    ("intensity_pathway", intensity_pathway),
    ("bessel_identities", bessel_identities),
    ("simulator_physics", simulator_physics),
    ("symmetry_forced_structure", forced_structure),
    ("scene_dual_path", dual_path),
    ("file_round_trips", round_trips),
];

pub fn run_verify(opts: &VerifyOptions) -> VerifyReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, &(name, check))| {
            let mut ctx = Ctx {
                rng: rng(opts.seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
                opts,
            };
            let start = Instant::now();
            let outcome = check(&mut ctx);
            let elapsed = start.elapsed();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                name,
                passed,
                detail,
                elapsed,
            }
        })
        .collect();
    VerifyReport {
        seed: opts.seed,
        checks,
    }
}
