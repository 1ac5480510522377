use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::matrix::Mat;
use crate::scalar::Real;

use super::chart::Chart;
use super::riemann::riemann_at;
use super::CurvatureError;

/// One sampled tangent 2-plane.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaneSample<T> {
    pub index: usize,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub sectional: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureReport<T> {
    pub t: T,
    pub sectional_samples: Vec<PlaneSample<T>>,
    pub sectional_mean: T,
    /// `max K - min K` over the samples.
    pub sectional_spread: T,
    pub ricci_matrix: Vec<Vec<T>>,
    /// `trace(G⁻¹ Ric) / n`.
    pub einstein_lambda: T,
    /// `max |Ric - λ G| / max |G|`.
    pub einstein_residual: T,
    pub symmetry_residual: T,
    pub bianchi_residual: T,
    /// Mean constant-type ratio, when the chart carries `J`.
    pub alpha_constant_type: Option<T>,
    /// `(max - min) / mean` of the constant-type ratios.
    pub alpha_spread: Option<T>,
}

/// Gram–Schmidt of two seeded normal vectors against `g`; `None` when the
/// pair is too close to dependent.
fn orthonormal_pair<T: Real>(g: &Mat<T>, a: Vec<T>, b: Vec<T>) -> Option<(Vec<T>, Vec<T>)> {
    let det = g.bilinear(&a, &a) * g.bilinear(&b, &b) - g.bilinear(&a, &b).powi(2);
    if !(det >= T::lit(1e-10)) {
        return None;
    }
    let na = g.bilinear(&a, &a).sqrt();
    let x: Vec<T> = a.iter().map(|v| *v / na).collect();
    let c = g.bilinear(&x, &b);
    let r: Vec<T> = b.iter().zip(&x).map(|(bv, xv)| *bv - c * *xv).collect();
    let nr = g.bilinear(&r, &r).sqrt();
    Some((x, r.iter().map(|v| *v / nr).collect()))
}

/// Samples `n_planes` random planes at the chart's base point for `t` and
/// fits the Einstein and constant-type constants.
pub fn sectional_spectrum<T: Real, C: Chart<T> + ?Sized>(
    chart: &C,
    t: T,
    n_planes: usize,
    seed: u64,
    fd_step: T,
) -> Result<CurvatureReport<T>, CurvatureError>
where
    StandardNormal: Distribution<T>,
{
    let y0 = chart.base_point(t);
    let rm = riemann_at(chart, &y0, fd_step)?;
    let g = rm.metric.clone();
    let n = chart.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<T> {
        (0..n).map(|_| StandardNormal.sample(rng)).collect()
    };

    let mut samples = Vec::with_capacity(n_planes);
    let mut attempts = 0;
    while samples.len() < n_planes {
        attempts += 1;
        if attempts > 100 * n_planes.max(1) {
            return Err(CurvatureError::SingularMetric);
        }
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let Some((x, y)) = orthonormal_pair(&g, a, b) else {
            continue;
        };
        let k = rm.sectional(&x, &y);
        samples.push(PlaneSample {
            index: samples.len(),
            x,
            y,
            sectional: k,
        });
    }
    let (lo, hi, sum) = samples.iter().fold(
        (T::infinity(), T::neg_infinity(), T::zero()),
        |(lo, hi, s), p| (lo.min(p.sectional), hi.max(p.sectional), s + p.sectional),
    );
    let count = T::lit(samples.len().max(1) as f64);

    let ric = rm.ricci()?;
    let ginv = g.inverse().ok_or(CurvatureError::SingularMetric)?;
    let lambda = (&ginv * &ric).trace() / T::lit(n as f64);
    let einstein_residual = T::lit((&ric - &g.scale(&lambda)).max_abs() / g.max_abs());

    let pairs: Vec<(Vec<T>, Vec<T>)> = samples.iter().map(|p| (p.x.clone(), p.y.clone())).collect();
    let (alpha, alpha_spread) = match chart.constant_type_ratios(t, &pairs) {
        Some(ratios) => {
            let vals: Vec<T> = ratios.into_iter().flatten().collect();
            if vals.is_empty() {
                (None, None)
            } else {
                let mean = vals.iter().fold(T::zero(), |s, v| s + *v) / T::lit(vals.len() as f64);
                let (a, b) = vals
                    .iter()
                    .fold((T::infinity(), T::neg_infinity()), |(a, b), v| (a.min(*v), b.max(*v)));
                (Some(mean), Some((b - a) / mean.abs()))
            }
        }
        None => (None, None),
    };

    Ok(CurvatureReport {
        t,
        sectional_mean: sum / count,
        sectional_spread: hi - lo,
        sectional_samples: samples,
        ricci_matrix: (0..n).map(|i| (0..n).map(|j| ric[(i, j)]).collect()).collect(),
        einstein_lambda: lambda,
        einstein_residual,
        symmetry_residual: rm.symmetry_residual(),
        bianchi_residual: rm.bianchi_residual(),
        alpha_constant_type: alpha,
        alpha_spread,
    })
}

/// CSV with header `t,plane,K`.
pub fn samples_to_csv(reports: &[CurvatureReport<f64>]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "plane", "K"])?;
    for r in reports {
        for s in &r.sectional_samples {
            w.write_record([
                format!("{:.16e}", r.t),
                s.index.to_string(),
                format!("{:.16e}", s.sectional),
            ])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
