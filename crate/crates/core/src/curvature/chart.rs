//! Coordinate charts in which invariant metrics become explicit matrix
//! functions, so that curvature can be computed by differentiation.

use crate::geometry::{FramePoint, NablaJ, ProfileSet};
use crate::lie::{LieAlgebraModel, ReductiveSplit};
use crate::matrix::Mat;
use crate::scalar::Real;

use super::CurvatureError;

/// Largest coordinate norm accepted by the exponential charts.
pub const MAX_CHART_RADIUS: f64 = 0.5;

/// A metric given in coordinates.
pub trait Chart<T: Real> {
    fn dim(&self) -> usize;

    fn metric(&self, y: &[T]) -> Result<Mat<T>, CurvatureError>;

    /// Coordinates of the point where curvature is sampled for parameter `t`.
    fn base_point(&self, t: T) -> Vec<T>;

    /// `‖(∇_x J)y‖² / (‖x‖²‖y‖² - g(x,y)² - g(Jx,y)²)` at `base_point(t)`
    /// for each pair, when the chart carries an almost complex structure.
    fn constant_type_ratios(&self, _t: T, _pairs: &[(Vec<T>, Vec<T>)]) -> Option<Vec<Option<T>>> {
        None
    }
}

/// `D(ad_x) = Σ_n (-ad_x)^n / (n+1)!`, truncated once a term drops below
/// `1e-16` in max norm.
pub fn dexp_operator<T: Real>(ad_x: &Mat<T>) -> Mat<T> {
    let n = ad_x.rows();
    let minus = -ad_x;
    let mut sum = Mat::identity(n);
    let mut term = Mat::identity(n);
    let tol = 1e-16;
    for k in 1..200 {
        term = (&term * &minus).scale(&T::lit(1.0 / (k as f64 + 1.0)));
        sum = &sum + &term;
        if term.max_abs() < tol {
            break;
        }
    }
    sum
}

/// `G_ij = Q(pr D(ad_x) e_i, pr D(ad_x) e_j)` over the basis indices `idx`,
/// where `x = Σ_α coords[α] e_{idx[α]}` and `pr` keeps the `idx` components.
fn pulled_back_gram<T: Real>(
    alg: &LieAlgebraModel<T>,
    q: &Mat<T>,
    idx: &[usize],
    coords: &[T],
) -> Mat<T> {
    let mut x = vec![T::zero(); alg.dim()];
    for (&i, &c) in idx.iter().zip(coords) {
        x[i] = c;
    }
    let d = dexp_operator(&alg.ad(&x));
    let v = d.select(idx, idx);
    let qm = q.select(idx, idx);
    &(&v.transpose() * &qm) * &v
}

fn check_radius<T: Real>(x: &[T]) -> Result<(), CurvatureError> {
    let r = x.iter().fold(T::zero(), |s, c| s + *c * *c).sqrt().to_f64_lossy();
    if !(r <= MAX_CHART_RADIUS) {
        return Err(CurvatureError::OutOfChart { radius: r });
    }
    Ok(())
}

/// Coordinates `(t, x) ↦ exp(Σ x_α e_α) · γ(t)` on a cohomogeneity-one
/// metric `dt² + g_t`, with `e_α` running over the `m` basis.
#[derive(Clone, Debug)]
pub struct OrbitChart<'a, T> {
    pub split: &'a ReductiveSplit<T>,
    pub profiles: ProfileSet<T>,
}

impl<'a, T: Real> OrbitChart<'a, T> {
    pub fn new(split: &'a ReductiveSplit<T>, profiles: ProfileSet<T>) -> Self {
        Self { split, profiles }
    }

    /// The invariant product `Q_t` on `g` (zero on `k`).
    fn q(&self, t: T) -> Result<Mat<T>, CurvatureError> {
        let vals = self.profiles.eval_regular(t)?;
        let n = self.split.parent.dim();
        let mut scale = vec![T::zero(); n];
        for (b, block) in self.split.m_blocks().iter().enumerate() {
            for &i in block {
                scale[i] = vals.scales[b].value;
            }
        }
        let b = &self.split.form.matrix;
        Ok(Mat::from_fn(n, n, |i, j| scale[i] * scale[j] * b[(i, j)]))
    }
}

impl<T: Real> Chart<T> for OrbitChart<'_, T> {
    fn dim(&self) -> usize {
        self.split.m_indices().len() + 1
    }

    fn metric(&self, y: &[T]) -> Result<Mat<T>, CurvatureError> {
        let t = y[0];
        if !self.profiles.contains(t) {
            return Err(CurvatureError::OutOfDomain { t: t.to_f64_lossy() });
        }
        check_radius(&y[1..])?;
        let q = self.q(t)?;
        let orbit = pulled_back_gram(&self.split.parent, &q, &self.split.m_indices(), &y[1..]);
        let n = self.dim();
        Ok(Mat::from_fn(n, n, |i, j| match (i, j) {
            (0, 0) => T::one(),
            (0, _) | (_, 0) => T::zero(),
            _ => orbit[(i - 1, j - 1)],
        }))
    }

    fn base_point(&self, t: T) -> Vec<T> {
        let mut y = vec![T::zero(); self.dim()];
        y[0] = t;
        y
    }

    fn constant_type_ratios(&self, t: T, pairs: &[(Vec<T>, Vec<T>)]) -> Option<Vec<Option<T>>> {
        let fp = FramePoint::new(self.split, &self.profiles, t).ok()?;
        let nj = NablaJ::new(&fp).ok()?;
        Some(pairs.iter().map(|(x, y)| nj.constant_type_ratio(x, y)).collect())
    }
}

/// Exponential coordinates on a compact group with the bi-invariant metric
/// given by an ad-invariant form.
#[derive(Clone, Debug)]
pub struct GroupChart<T> {
    pub algebra: LieAlgebraModel<T>,
    pub form: Mat<T>,
}

impl<T: Real> GroupChart<T> {
    pub fn new(algebra: LieAlgebraModel<T>, form: Mat<T>) -> Self {
        Self { algebra, form }
    }
}

impl<T: Real> Chart<T> for GroupChart<T> {
    fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn metric(&self, y: &[T]) -> Result<Mat<T>, CurvatureError> {
        check_radius(y)?;
        let idx: Vec<usize> = (0..self.dim()).collect();
        Ok(pulled_back_gram(&self.algebra, &self.form, &idx, y))
    }

    fn base_point(&self, _t: T) -> Vec<T> {
        vec![T::zero(); self.dim()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{FramePoint, ProfileSet};
    use crate::lie::su3_split_exact;
    use crate::nk::{closed_form, SolutionParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (ReductiveSplit<f64>, ProfileSet<f64>) {
        (
            su3_split_exact().to_real(),
            closed_form(SolutionParams::canonical(1.0).unwrap()).unwrap(),
        )
    }

    #[test]
    fn origin_metric_is_frame_gram() {
        let (split, p) = setup();
        let chart = OrbitChart::new(&split, p.clone());
        for t in [-2.0, 0.0, 1.3] {
            let g = chart.metric(&chart.base_point(t)).unwrap();
            let fp = FramePoint::new(&split, &p, t).unwrap();
            assert!((&g - fp.gram()).max_abs() < 1e-14);
            let f = p.eval(t).scales[1].value;
            let h = p.eval(t).scales[0].value;
            assert!((g[(1, 1)] - 4.0 * h * h).abs() < 1e-14);
            assert!((g[(2, 2)] - 12.0 * f * f).abs() < 1e-13);
        }
    }

    #[test]
    fn metric_symmetric_positive() {
        let (split, p) = setup();
        let chart = OrbitChart::new(&split, p);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let mut y = vec![rng.random_range(-4.0..4.0)];
            y.extend((0..5).map(|_| rng.random_range(-0.2..0.2)));
            let g = chart.metric(&y).unwrap();
            assert!((&g - &g.transpose()).max_abs() < 1e-14);
            assert!(g.is_positive_definite());
        }
    }

    #[test]
    fn orbit_derivative_matches_killing_identity() {
        // Along x = s e_α the coordinate fields are D(ad_x) e_i while the
        // Killing fields are exp(-ad_x) e_i, so their first-order terms
        // differ by a factor 1/2.
        let (split, p) = setup();
        let chart = OrbitChart::new(&split, p.clone());
        let t = 0.6;
        let fp = FramePoint::new(&split, &p, t).unwrap();
        let h = 1e-5;
        for alpha in 1..6 {
            let mut yp = chart.base_point(t);
            let mut ym = yp.clone();
            yp[alpha] = h;
            ym[alpha] = -h;
            let d = (&chart.metric(&yp).unwrap() - &chart.metric(&ym).unwrap()).scale(&(0.5 / h));
            let killing = fp.gram_derivative(alpha).scale(&0.5);
            assert!((&d - &killing).max_abs() < 1e-6);
            assert!(killing.max_abs() < 1e-12 || (&d + &killing).max_abs() > 1e-3);
        }
    }

    #[test]
    fn rejects_points_outside_chart() {
        let (split, p) = setup();
        let chart = OrbitChart::new(&split, p);
        assert!(matches!(
            chart.metric(&[0.0, 0.6, 0.0, 0.0, 0.0, 0.0]),
            Err(CurvatureError::OutOfChart { .. })
        ));
        assert!(matches!(
            chart.metric(&[100.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(CurvatureError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn dexp_of_zero_is_identity() {
        let z = Mat::<f64>::zeros(3, 3);
        assert_eq!(dexp_operator(&z), Mat::identity(3));
    }
}
