//! Command-line driver. [`run`] parses arguments, executes one command and
//! returns the rendered report together with the exit status.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::classifier::{classify, ClassifierError};
use crate::curvature::{
    samples_to_csv, sectional_spectrum, su2_benchmark_chart, CurvatureError, CurvatureReport, OrbitChart,
};
use crate::geometry::{koszul_solve, lemma_deviation, FramePoint, GeometryError, LemmaCase, NablaJ, ProfileSet};
use crate::lie::{su2su2_split_exact, su3_split_exact};
use crate::nk::{
    closed_form, grid, integrate_ode, nk_residual, reduced_system_check, rows_to_csv, sample, NkError,
    SolutionParams,
};
use crate::report::{envelope, sig17, sig17_matrix, sig17_vec, to_pretty, Check};
use crate::RealSplit;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "NKLAB_SEED";

#[derive(Debug, Parser)]
#[command(name = "nklab", version, about = "Cohomogeneity-one nearly Kähler verification runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Homothety parameter of the solution family.
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    pub k: f64,
    /// Grid points for `solve` and random samples for `lemmas`.
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
    /// Random tangent planes per curvature evaluation.
    #[arg(long, global = true, default_value_t = 200)]
    pub planes: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Finite-difference step for curvature.
    #[arg(long, global = true, default_value_t = 1e-5)]
    pub fd_step: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Benchmark {
    Su2,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Closed-form solution, residuals and RK4 cross-check.
    Solve,
    /// Sectional, Ricci and constant-type curvature data.
    Curvature {
        #[arg(long, value_enum)]
        benchmark: Option<Benchmark>,
    },
    /// Admissible triples for a group.
    Classify {
        #[arg(long)]
        group: String,
    },
    /// Closed-form versus Koszul covariant derivatives of J.
    Lemmas,
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub k: f64,
    pub samples: usize,
    pub planes: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Nk(#[from] NkError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<ClassifierError> for CliError {
    fn from(e: ClassifierError) -> Self {
        Self::Usage(e.to_string())
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli, env_seed: Option<&str>) -> Result<Self, CliError> {
        let seed = match env_seed {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}={s:?} is not an unsigned integer")))?,
            None => cli.seed,
        };
        if !(cli.k > 0.0 && cli.k.is_finite()) {
            return Err(CliError::Usage(format!("--k must be positive, got {}", cli.k)));
        }
        if cli.samples == 0 || cli.planes == 0 {
            return Err(CliError::Usage("--samples and --planes must be positive".into()));
        }
        if !(cli.fd_step > 0.0 && cli.fd_step.is_finite()) {
            return Err(CliError::Usage(format!("--fd-step must be positive, got {}", cli.fd_step)));
        }
        Ok(Self {
            command: cli.command,
            k: cli.k,
            samples: cli.samples,
            planes: cli.planes,
            seed,
            fd_step: cli.fd_step,
            output: cli.output,
            format: cli.format,
        })
    }
}

/// A rendered report and whether all of its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub ok: bool,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name), runs the command and, when
/// `--output` is given, writes the report there.
pub fn run<I, S>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { code, stdout, stderr };
        }
    };
    let result = RunConfig::from_cli(cli, env_seed).and_then(|cfg| {
        let report = execute(&cfg)?;
        match &cfg.output {
            Some(path) => {
                std::fs::write(path, &report.text)
                    .map_err(|source| CliError::Io { path: path.clone(), source })?;
                Ok((String::new(), report.ok))
            }
            None => Ok((report.text, report.ok)),
        }
    });
    match result {
        Ok((stdout, ok)) => Outcome {
            code: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout,
            stderr: if ok { String::new() } else { "one or more checks failed\n".into() },
        },
        Err(e @ CliError::Usage(_)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("{e}\n") },
        Err(e) => Outcome { code: EXIT_CHECK_FAILED, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match &cfg.command {
        Command::Solve => cmd_solve(cfg),
        Command::Curvature { benchmark: Some(Benchmark::Su2) } => cmd_benchmark(cfg),
        Command::Curvature { benchmark: None } => cmd_curvature(cfg),
        Command::Classify { group } => cmd_classify(cfg, group),
        Command::Lemmas => cmd_lemmas(cfg),
    }
}

fn finish(cfg: &RunConfig, command: &str, checks: &[Check], body: Map<String, Value>, csv: impl FnOnce() -> Result<String, CliError>) -> Result<Report, CliError> {
    let ok = checks.iter().all(|c| c.passed);
    let text = match cfg.format {
        Format::Json => to_pretty(&envelope(command, checks, body)),
        Format::Csv => csv()?,
    };
    Ok(Report { text, ok })
}

fn checks_csv(checks: &[Check]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "value", "tolerance", "passed"])?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            format!("{:.16e}", c.value),
            format!("{:.16e}", c.tolerance),
            c.passed.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Tolerances of the `solve` checks.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-12;
pub const SOLVE_RK4_TOL: f64 = 1e-8;
pub const SOLVE_DRIFT_TOL: f64 = 1e-10;
/// Fraction of the regular interval covered by the `solve` grid.
pub const GRID_FRACTION: f64 = 0.8;

pub fn cmd_solve(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = SolutionParams::canonical(cfg.k)?;
    let profiles = closed_form(params)?;
    let ts = grid(profiles.domain, GRID_FRACTION, cfg.samples);
    let (mut nk_max, mut reduced_max, mut unit_max) = (0.0f64, 0.0f64, 0.0f64);
    for &t in &ts {
        nk_max = nk_max.max(nk_residual(&profiles, t)?.max_abs());
        reduced_max = reduced_system_check(&profiles, t)?.iter().fold(reduced_max, |m, r| m.max(r.abs()));
        unit_max = unit_max.max(profiles.unit_defect(t));
    }
    let rows = sample(&profiles, &ts);

    // the trajectory through the peak, over three units of k-rescaled time
    let t_end = 3.0 / cfg.k;
    let traj = integrate_ode(1.0 / cfg.k, 0.0, cfg.k, (0.0, t_end), 1e-3 / cfg.k)?;
    let f0 = params.f(crate::jet::Jet::constant(0.0)).value;
    let rk4_err = traj
        .samples
        .iter()
        .map(|&(t, f, _)| (f - params.f(crate::jet::Jet::constant(t)).value).abs())
        .fold(0.0, f64::max)
        / f0;

    let checks = vec![
        Check::below("nk_residual_max", nk_max, SOLVE_RESIDUAL_TOL),
        Check::below("reduced_system_max", reduced_max, SOLVE_RESIDUAL_TOL),
        Check::below("unit_coefficient_defect_max", unit_max, SOLVE_RESIDUAL_TOL),
        Check::below("rk4_sup_relative_error", rk4_err, SOLVE_RK4_TOL),
        Check::below("rk4_first_integral_drift", traj.first_integral_drift, SOLVE_DRIFT_TOL),
        Check::holds("rk4_not_truncated", traj.truncated_at.is_none()),
    ];
    let mut body = Map::new();
    body.insert(
        "params".into(),
        serde_json::json!({"A": sig17(params.a), "B": sig17(params.b), "k": sig17(params.k)}),
    );
    body.insert("f0".into(), sig17(f0));
    body.insert("domain".into(), sig17_vec(&[profiles.domain.0, profiles.domain.1]));
    body.insert("grid_fraction".into(), sig17(GRID_FRACTION));
    body.insert(
        "rk4".into(),
        serde_json::json!({
            "t_span": sig17_vec(&[0.0, t_end]),
            "step": sig17(1e-3 / cfg.k),
            "steps": traj.samples.len() - 1,
            "sup_relative_error": sig17(rk4_err),
            "first_integral_drift": sig17(traj.first_integral_drift),
        }),
    );
    body.insert(
        "profiles".into(),
        Value::Array(
            rows.iter()
                .map(|r| {
                    serde_json::json!({
                        "t": sig17(r.t), "f": sig17(r.f), "fp": sig17(r.fp), "h": sig17(r.h),
                        "a": sig17_vec(&[r.a1, r.a2, r.a3]), "u": sig17(r.u),
                    })
                })
                .collect(),
        ),
    );
    finish(cfg, "solve", &checks, body, || Ok(rows_to_csv(&rows)?))
}

/// Expected constant sectional curvature of the SU(2) benchmark.
pub const BENCHMARK_K: f64 = 0.125;
pub const BENCHMARK_TOL: f64 = 1e-4;

fn benchmark_summary(cfg: &RunConfig) -> Result<(CurvatureReport<f64>, f64), CliError> {
    let r = sectional_spectrum(&su2_benchmark_chart(), 0.0, cfg.planes, cfg.seed, cfg.fd_step)?;
    let dev = r.sectional_samples.iter().map(|s| (s.sectional - BENCHMARK_K).abs()).fold(0.0, f64::max);
    Ok((r, dev))
}

fn report_json(r: &CurvatureReport<f64>) -> Value {
    let ks: Vec<f64> = r.sectional_samples.iter().map(|s| s.sectional).collect();
    serde_json::json!({
        "t": sig17(r.t),
        "sectional_mean": sig17(r.sectional_mean),
        "sectional_spread": sig17(r.sectional_spread),
        "einstein_lambda": sig17(r.einstein_lambda),
        "einstein_residual": sig17(r.einstein_residual),
        "symmetry_residual": sig17(r.symmetry_residual),
        "bianchi_residual": sig17(r.bianchi_residual),
        "alpha_constant_type": r.alpha_constant_type.map_or(Value::Null, sig17),
        "alpha_spread": r.alpha_spread.map_or(Value::Null, sig17),
        "ricci_matrix": sig17_matrix(&r.ricci_matrix),
        "sectional_samples": sig17_vec(&ks),
    })
}

pub fn cmd_benchmark(cfg: &RunConfig) -> Result<Report, CliError> {
    let (r, dev) = benchmark_summary(cfg)?;
    let checks = vec![Check::below("benchmark_su2_max_deviation", dev, BENCHMARK_TOL)];
    let mut body = Map::new();
    body.insert("benchmark".into(), Value::String("su2".into()));
    body.insert("expected_sectional".into(), sig17(BENCHMARK_K));
    body.insert("seed".into(), Value::from(cfg.seed));
    body.insert("report".into(), report_json(&r));
    let reports = [r];
    finish(cfg, "curvature", &checks, body, || Ok(samples_to_csv(&reports)?))
}

/// Relative tolerance of the round-sphere curvature checks.
pub const CURVATURE_TOL: f64 = 1e-3;

/// Curvature sample points: fractions of 80% of the half-width around the
/// peak.
pub fn curvature_t_values(params: &SolutionParams<f64>) -> Vec<f64> {
    [-0.8, -0.4, 0.0, 0.4, 0.8]
        .iter()
        .map(|c| params.peak() + c * GRID_FRACTION * params.half_width())
        .collect()
}

pub fn cmd_curvature(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = SolutionParams::canonical(cfg.k)?;
    let profiles = closed_form(params)?;
    let split: RealSplit = su3_split_exact().to_real();
    let chart = OrbitChart::new(&split, profiles);
    let expected = cfg.k * cfg.k / 12.0;
    let mut reports = Vec::new();
    for (i, t) in curvature_t_values(&params).into_iter().enumerate() {
        reports.push(sectional_spectrum(&chart, t, cfg.planes, cfg.seed.wrapping_add(i as u64), cfg.fd_step)?);
    }
    let (bench, bench_dev) = benchmark_summary(cfg)?;

    let all_k: Vec<f64> = reports.iter().flat_map(|r| r.sectional_samples.iter().map(|s| s.sectional)).collect();
    let mean = all_k.iter().sum::<f64>() / all_k.len() as f64;
    let (lo, hi) = all_k.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| (a.min(k), b.max(k)));
    let alphas: Vec<f64> = reports.iter().filter_map(|r| r.alpha_constant_type).collect();
    let (alo, ahi) = alphas.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &k| (a.min(k), b.max(k)));
    let alpha_mean = alphas.iter().sum::<f64>() / alphas.len().max(1) as f64;
    let worst = |f: fn(&CurvatureReport<f64>) -> f64| reports.iter().map(f).fold(0.0, f64::max);

    let checks = vec![
        Check::below("sectional_spread_over_mean", (hi - lo) / mean, CURVATURE_TOL),
        Check::below("sectional_mean_relative_error", (mean - expected).abs() / expected, CURVATURE_TOL),
        Check::below("einstein_residual_max", worst(|r| r.einstein_residual), CURVATURE_TOL),
        Check::holds("einstein_lambda_positive", reports.iter().all(|r| r.einstein_lambda > 0.0)),
        Check::holds("alpha_positive", alphas.len() == reports.len() && alo > 0.0),
        Check::below("alpha_spread_within_t_max", worst(|r| r.alpha_spread.unwrap_or(f64::INFINITY)), CURVATURE_TOL),
        Check::below("alpha_spread_across_t", (ahi - alo) / alpha_mean, CURVATURE_TOL),
        Check::below("benchmark_su2_max_deviation", bench_dev, BENCHMARK_TOL),
    ];
    let mut body = Map::new();
    body.insert("k".into(), sig17(cfg.k));
    body.insert("seed".into(), Value::from(cfg.seed));
    body.insert("expected_sectional".into(), sig17(expected));
    body.insert("sectional_mean".into(), sig17(mean));
    body.insert("sectional_spread".into(), sig17(hi - lo));
    body.insert("alpha_mean".into(), sig17(alpha_mean));
    body.insert("reports".into(), Value::Array(reports.iter().map(report_json).collect()));
    body.insert(
        "benchmark".into(),
        serde_json::json!({
            "group": "su2",
            "expected_sectional": sig17(BENCHMARK_K),
            "sectional_mean": sig17(bench.sectional_mean),
            "max_deviation": sig17(bench_dev),
        }),
    );
    finish(cfg, "curvature", &checks, body, || Ok(samples_to_csv(&reports)?))
}

pub fn cmd_classify(cfg: &RunConfig, group: &str) -> Result<Report, CliError> {
    let c = classify(group)?;
    let text = match cfg.format {
        Format::Json => c.to_json_string(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["group", "H1", "K", "H2", "model"])?;
            for t in &c.triples {
                w.write_record([&c.group, &t.h1, &t.k, &t.h2, &t.model])?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
            String::from_utf8(bytes).expect("csv output is utf-8")
        }
    };
    Ok(Report { text, ok: true })
}

pub const LEMMA_TOL: f64 = 1e-10;
pub const GRAY_TOL: f64 = 1e-8;
pub const KOSZUL_TOL: f64 = 1e-12;
pub const OBSTRUCTION_TOL: f64 = 1e-12;
pub const GRAY_VECTORS: usize = 1000;
pub const GRAY_T_POINTS: usize = 20;
pub const OBSTRUCTION_INSTANCES: usize = 5;

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn cmd_lemmas(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let su3: RealSplit = su3_split_exact().to_real();
    let su2su2: RealSplit = su2su2_split_exact().to_real();

    // closed forms versus the Koszul oracle on non-solution profiles
    let mut lemma_max = [0.0f64; 5];
    let mut koszul_max = 0.0f64;
    for _ in 0..cfg.samples {
        let p = ProfileSet::random_su3(&mut rng);
        let t = rng.random_range(p.domain.0 * 0.9..p.domain.1 * 0.9);
        let v = random_vec(&mut rng, 4);
        let fp = FramePoint::new(&su3, &p, t)?;
        let conn = koszul_solve(&fp)?;
        koszul_max = koszul_max.max(conn.torsion_residual(&fp)).max(conn.metric_residual(&fp));
        let nj = NablaJ::with_connection(&fp, conn);
        for (slot, case) in lemma_max.iter_mut().zip(LemmaCase::ALL) {
            *slot = slot.max(lemma_deviation(&nj, case, &v)?);
        }
    }

    // Gray's identity on the canonical solution
    let params = SolutionParams::canonical(cfg.k)?;
    let canonical = closed_form(params)?;
    let mut gray = 0.0f64;
    for t in grid(canonical.domain, GRID_FRACTION, GRAY_T_POINTS) {
        let fp = FramePoint::new(&su3, &canonical, t)?;
        let nj = NablaJ::new(&fp)?;
        for _ in 0..GRAY_VECTORS {
            gray = gray.max(nj.gray_defect(&random_vec(&mut rng, 6)));
        }
    }

    // su2+su2 with invariant data: components of dω allowed by K-invariance
    let (mut block, mut all) = (0.0f64, 0.0f64);
    let mut instances = Vec::new();
    for _ in 0..OBSTRUCTION_INSTANCES {
        let p = ProfileSet::random_su2su2(&mut rng);
        let t = rng.random_range(p.domain.0 * 0.9..p.domain.1 * 0.9);
        let fp = FramePoint::new(&su2su2, &p, t)?;
        let m = NablaJ::new(&fp)?.d_omega_max();
        block = block.max(m.block);
        all = all.max(m.all);
        instances.push(serde_json::json!({
            "t": sig17(t),
            "J": sig17_vec(&p.eval(t).coefficients.iter().map(|c| c.value).collect::<Vec<_>>()),
            "invariant_components_max": sig17(m.block),
            "all_triples_max": sig17(m.all),
        }));
    }

    let mut checks: Vec<Check> = LemmaCase::ALL
        .iter()
        .zip(lemma_max)
        .map(|(c, m)| Check::below(format!("lemma {}", c.label()), m, LEMMA_TOL))
        .collect();
    checks.push(Check::below("koszul_residual_max", koszul_max, KOSZUL_TOL));
    checks.push(Check::below("gray_defect_max", gray, GRAY_TOL));
    checks.push(Check::below("su2xsu2_invariant_d_omega_max", block, OBSTRUCTION_TOL));

    let mut body = Map::new();
    body.insert("seed".into(), Value::from(cfg.seed));
    body.insert("samples".into(), Value::from(cfg.samples));
    body.insert(
        "lemmas".into(),
        Value::Array(
            LemmaCase::ALL
                .iter()
                .zip(lemma_max)
                .map(|(c, m)| serde_json::json!({"case": c.label(), "max_relative_deviation": sig17(m)}))
                .collect(),
        ),
    );
    body.insert(
        "gray".into(),
        serde_json::json!({"k": sig17(cfg.k), "t_points": GRAY_T_POINTS, "vectors_per_t": GRAY_VECTORS, "max_defect": sig17(gray)}),
    );
    body.insert(
        "su2xsu2_d_omega".into(),
        serde_json::json!({
            "invariant_components_max": sig17(block),
            "all_triples_max_informational": sig17(all),
            "instances": instances,
        }),
    );
    finish(cfg, "lemmas", &checks, body, || checks_csv(&checks))
}
