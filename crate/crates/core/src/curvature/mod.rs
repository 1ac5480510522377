//! Curvature by finite differences in explicit charts.

mod chart;
mod riemann;
mod spectrum;

pub use chart::{dexp_operator, Chart, GroupChart, OrbitChart, MAX_CHART_RADIUS};
pub use riemann::{christoffel, riemann_at, Christoffel, Riemann};
pub use spectrum::{samples_to_csv, sectional_spectrum, CurvatureReport, PlaneSample};

use thiserror::Error;

use crate::geometry::GeometryError;
use crate::lie::{build_algebra, AlgebraName};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("t = {t} lies outside the regular domain")]
    OutOfDomain { t: f64 },
    #[error("chart coordinates have norm {radius}, above the limit {MAX_CHART_RADIUS}")]
    OutOfChart { radius: f64 },
    #[error("metric is singular")]
    SingularMetric,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// SU(2) with the bi-invariant metric `B`.
pub fn su2_benchmark_chart() -> GroupChart<f64> {
    let alg = build_algebra::<num_rational::Rational64>(AlgebraName::Su2)
        .expect("su2 is built in")
        .map_scalar(crate::scalar::to_real::<_, f64>);
    let form = alg.killing_opposite().matrix;
    GroupChart::new(alg, form)
}
