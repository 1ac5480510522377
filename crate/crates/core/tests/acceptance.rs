//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nklab::classifier::{classify, enumerate_pairs};
use nklab::curvature::{sectional_spectrum, su2_benchmark_chart, OrbitChart};
use nklab::geometry::{koszul_solve, lemma_deviation, FramePoint, LemmaCase, NablaJ, ProfileSet};
use nklab::lie::{build_algebra, su2su2_split_exact, su3_split_exact, AlgebraName};
use nklab::nk::{closed_form, grid, integrate_ode, nk_residual, reduced_system_check, SolutionParams};
use nklab::{RealSplit, Q};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn su3() -> RealSplit {
    su3_split_exact().to_real()
}

fn su2su2() -> RealSplit {
    su2su2_split_exact().to_real()
}

fn canonical() -> (SolutionParams<f64>, ProfileSet<f64>) {
    let p = SolutionParams::canonical(1.0).unwrap();
    (p, closed_form(p).unwrap())
}

fn c1_algebra_exactness() -> Outcome {
    let mut worst = Q::zero();
    for name in [AlgebraName::Su2, AlgebraName::Su3, AlgebraName::Su2PlusSu2] {
        let alg = build_algebra::<Q>(name).unwrap();
        let r = alg.jacobi_residual();
        if r > worst {
            worst = r;
        }
    }
    let norm = su3_split_exact().a_norm_sq();
    outcome(
        worst.is_zero() && norm == Q::from_integer(4),
        format!("Jacobi residual = {worst}, B(A,A) = {norm}"),
    )
}

const KOSZUL_TOL: f64 = 1e-12;

fn c2_koszul() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (s3, s22) = (su3(), su2su2());
    let (mut torsion, mut metric) = (0.0f64, 0.0f64);
    for (split, random) in [
        (&s3, ProfileSet::random_su3 as fn(&mut ChaCha8Rng) -> ProfileSet<f64>),
        (&s22, ProfileSet::random_su2su2 as fn(&mut ChaCha8Rng) -> ProfileSet<f64>),
    ] {
        let p = random(&mut rng);
        for t in grid(p.domain, 0.9, 20) {
            let fp = FramePoint::new(split, &p, t).unwrap();
            let conn = koszul_solve(&fp).unwrap();
            torsion = torsion.max(conn.torsion_residual(&fp));
            metric = metric.max(conn.metric_residual(&fp));
        }
    }
    outcome(
        torsion < KOSZUL_TOL && metric < KOSZUL_TOL,
        format!("torsion {torsion:.3e}, metric {metric:.3e} (tol {KOSZUL_TOL:e})"),
    )
}

const LEMMA_TOL: f64 = 1e-10;

fn c3_lemmas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let split = su3();
    let mut worst = [0.0f64; 5];
    for _ in 0..50 {
        let p = ProfileSet::random_su3(&mut rng);
        let t = rng.random_range(-1.8..1.8);
        let v = random_vec(&mut rng, 4);
        let fp = FramePoint::new(&split, &p, t).unwrap();
        let nj = NablaJ::new(&fp).unwrap();
        for (w, case) in worst.iter_mut().zip(LemmaCase::ALL) {
            *w = w.max(lemma_deviation(&nj, case, &v).unwrap());
        }
    }
    let max = worst.iter().copied().fold(0.0, f64::max);
    outcome(max < LEMMA_TOL, format!("max relative deviation {max:.3e} over 50 samples x 5 cases (tol {LEMMA_TOL:e})"))
}

const NK_TOL: f64 = 1e-12;

fn c4_nk_solution() -> Outcome {
    let (_, p) = canonical();
    let (mut res, mut red, mut unit) = (0.0f64, 0.0f64, 0.0f64);
    for t in grid(p.domain, 0.8, 64) {
        res = res.max(nk_residual(&p, t).unwrap().max_abs());
        red = reduced_system_check(&p, t).unwrap().iter().fold(red, |m, x| m.max(x.abs()));
        unit = unit.max(p.unit_defect(t));
    }
    outcome(
        res < NK_TOL && red < NK_TOL && unit < NK_TOL,
        format!("nk_residual {res:.3e}, reduced {red:.3e}, |a|^2-1 {unit:.3e} (tol {NK_TOL:e})"),
    )
}

fn c5_integrator() -> Outcome {
    let (params, _) = canonical();
    let traj = integrate_ode(1.0, 0.0, 1.0, (0.0, 3.0), 1e-3).unwrap();
    // oracle: f(t) = cos(t / √12)
    let err = traj
        .samples
        .iter()
        .map(|&(t, f, _)| (f - (t / 12f64.sqrt()).cos()).abs())
        .fold(0.0, f64::max);
    let drift = traj.first_integral_drift;
    let reached = traj.samples.last().map(|s| s.0).unwrap_or(0.0);
    outcome(
        err < 1e-8 && drift < 1e-10 && (reached - 3.0).abs() < 1e-9 && params.a == 1.0,
        format!("sup error {err:.3e} (tol 1e-8), first-integral drift {drift:.3e} (tol 1e-10)"),
    )
}

const GRAY_TOL: f64 = 1e-8;

fn c6_gray() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let split = su3();
    let (_, p) = canonical();
    let mut worst = 0.0f64;
    for t in grid(p.domain, 0.8, 20) {
        let fp = FramePoint::new(&split, &p, t).unwrap();
        let nj = NablaJ::new(&fp).unwrap();
        for _ in 0..1000 {
            worst = worst.max(nj.gray_defect(&random_vec(&mut rng, 6)));
        }
    }
    outcome(worst < GRAY_TOL, format!("max |(nabla_X J)X| {worst:.3e} over 20 x 1000 vectors (tol {GRAY_TOL:e})"))
}

const OBSTRUCTION_TOL: f64 = 1e-12;

/// `(invariant-component max, all-triples max)` over five seeded instances.
fn su2su2_d_omega() -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let split = su2su2();
    let (mut block, mut all) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let p = ProfileSet::random_su2su2(&mut rng);
        let t = rng.random_range(-1.8..1.8);
        let fp = FramePoint::new(&split, &p, t).unwrap();
        let m = NablaJ::new(&fp).unwrap().d_omega_max();
        block = block.max(m.block);
        all = all.max(m.all);
    }
    (block, all)
}

fn c7_obstruction_all_triples() -> Outcome {
    let (_, all) = su2su2_d_omega();
    outcome(
        all < OBSTRUCTION_TOL,
        format!("max |3 g((nabla J) E_i, E_j, E_k)| over all frame triples {all:.3e} (tol {OBSTRUCTION_TOL:e})"),
    )
}

fn c7a_obstruction_invariant_components() -> Outcome {
    let (block, _) = su2su2_d_omega();
    outcome(
        block < OBSTRUCTION_TOL,
        format!("max over (xi|A, n_i, n_i) components {block:.3e} (tol {OBSTRUCTION_TOL:e})"),
    )
}

fn c8_benchmark() -> Outcome {
    let chart = su2_benchmark_chart();
    let r = sectional_spectrum(&chart, 0.0, 100, 8, 1e-5).unwrap();
    // oracle: K(X, Y) = ¼ B([X,Y],[X,Y]) for B-orthonormal X, Y
    let b = &chart.form;
    let mut worst_formula = 0.0f64;
    let mut worst_const = 0.0f64;
    for s in &r.sectional_samples {
        let br = chart.algebra.bracket(&s.x, &s.y);
        let oracle = 0.25 * b.bilinear(&br, &br);
        worst_formula = worst_formula.max((s.sectional - oracle).abs());
        worst_const = worst_const.max((s.sectional - 0.125).abs());
    }
    outcome(
        worst_const < 1e-4 && worst_formula < 1e-4 && r.sectional_samples.len() == 100,
        format!("max |K - 1/8| {worst_const:.3e}, max |K - bracket formula| {worst_formula:.3e} (tol 1e-4)"),
    )
}

fn c9_constant_curvature() -> Outcome {
    let (params, p) = canonical();
    // oracle: a round sphere of radius R has normal geodesics of length πR
    let radius = (p.domain.1 - p.domain.0) / std::f64::consts::PI;
    let expected = 1.0 / (radius * radius);
    let split = su3();
    let chart = OrbitChart::new(&split, p);
    let ts: Vec<f64> = [-0.8, -0.4, 0.0, 0.4, 0.8]
        .iter()
        .map(|c| params.peak() + c * 0.8 * params.half_width())
        .collect();
    let mut ks = Vec::new();
    let (mut einstein, mut lambda_ok, mut alphas, mut alpha_within) = (0.0f64, true, Vec::new(), 0.0f64);
    for (i, &t) in ts.iter().enumerate() {
        let r = sectional_spectrum(&chart, t, 200, 90 + i as u64, 1e-5).unwrap();
        ks.extend(r.sectional_samples.iter().map(|s| s.sectional));
        einstein = einstein.max(r.einstein_residual);
        lambda_ok &= r.einstein_lambda > 0.0;
        alphas.push(r.alpha_constant_type.unwrap_or(f64::NAN));
        alpha_within = alpha_within.max(r.alpha_spread.unwrap_or(f64::INFINITY));
    }
    let mean = ks.iter().sum::<f64>() / ks.len() as f64;
    let spread = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max) - ks.iter().copied().fold(f64::INFINITY, f64::min);
    let amean = alphas.iter().sum::<f64>() / alphas.len() as f64;
    let across = (alphas.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - alphas.iter().copied().fold(f64::INFINITY, f64::min))
        / amean;
    let passed = spread / mean < 1e-3
        && (mean - expected).abs() < 1e-3
        && (expected - 1.0 / 12.0).abs() < 1e-12
        && einstein < 1e-3
        && lambda_ok
        && amean > 0.0
        && across < 1e-3
        && alpha_within < 1e-3;
    outcome(
        passed,
        format!(
            "mean K {mean:.8} vs oracle {expected:.8}, spread/mean {:.3e}, Einstein residual {einstein:.3e}, \
             alpha {amean:.6} with t-spread {across:.3e}",
            spread / mean
        ),
    )
}

fn c10_classification() -> Outcome {
    let golden = |name: &str| {
        std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
    };
    let su3 = classify("su3").unwrap().to_json_string() == golden("classify_su3.json");
    let su22 = classify("su2xsu2").unwrap().to_json_string() == golden("classify_su2xsu2.json");
    let survivors: Vec<String> = enumerate_pairs().iter().filter(|p| p.is_survivor()).map(|p| p.label()).collect();
    let pairs_ok = survivors == ["(su2+su2, R)", "(su3, su2)"];
    outcome(
        su3 && su22 && pairs_ok,
        format!("golden su3 {su3}, golden su2xsu2 {su22}, survivors {survivors:?}"),
    )
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn main() {
    let s = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("1", "algebra exactness", s(1), c1_algebra_exactness),
        ("2", "Koszul oracle validity", s(1), c2_koszul),
        ("3", "closed-form nabla J fidelity", s(1), c3_lemmas),
        ("4", "NK solution residuals", s(1), c4_nk_solution),
        ("5", "RK4 cross-check", s(5), c5_integrator),
        ("6", "Gray identity", s(5), c6_gray),
        ("7", "su2+su2 d omega, all frame triples", s(5), c7_obstruction_all_triples),
        ("7a", "su2+su2 d omega, invariant components", s(5), c7a_obstruction_invariant_components),
        ("8", "SU(2) curvature benchmark", s(10), c8_benchmark),
        ("9", "constant curvature of the canonical solution", s(60), c9_constant_curvature),
        ("10", "classification golden files", s(1), c10_classification),
    ];
    let mut failed = Vec::new();
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(o) => (o.passed && elapsed < budget, o.detail),
            Err(_) => (false, "panicked".to_string()),
        };
        let tag = if passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>3} {tag} {name}: {detail} [{elapsed:.2?} of {budget:?}]");
        if !passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
