use crate::matrix::Mat;
use crate::scalar::Real;

use super::chart::Chart;
use super::CurvatureError;

/// Once-Richardson-extrapolated central difference of `f` along every
/// coordinate: `(4 D(h) - D(2h)) / 3`. Each step is `step · max(1, |y_m|)`.
fn gradient<T: Real, V>(
    y: &[T],
    step: T,
    f: impl Fn(&[T]) -> Result<V, CurvatureError>,
    combine: impl Fn(&[V; 4], T) -> V,
) -> Result<Vec<V>, CurvatureError> {
    let mut out = Vec::with_capacity(y.len());
    for m in 0..y.len() {
        let h = step * y[m].abs().max(T::one());
        let at = |c: T| {
            let mut z = y.to_vec();
            z[m] = z[m] + c * h;
            f(&z)
        };
        let vals = [at(T::lit(1.0))?, at(T::lit(-1.0))?, at(T::lit(2.0))?, at(T::lit(-2.0))?];
        out.push(combine(&vals, h));
    }
    Ok(out)
}

fn richardson<T: Real>(v: &[T; 4], h: T) -> T {
    let d1 = (v[0] - v[1]) / (T::lit(2.0) * h);
    let d2 = (v[2] - v[3]) / (T::lit(4.0) * h);
    (T::lit(4.0) * d1 - d2) / T::lit(3.0)
}

fn mat_derivative<T: Real>(v: &[Mat<T>; 4], h: T) -> Mat<T> {
    Mat::from_fn(v[0].rows(), v[0].cols(), |i, j| {
        richardson(&[v[0][(i, j)], v[1][(i, j)], v[2][(i, j)], v[3][(i, j)]], h)
    })
}

/// Christoffel symbols `Γ^r_{mn}` stored at `[(r * n + m) * n + n']`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<T> {
    pub dim: usize,
    pub data: Vec<T>,
}

impl<T: Real> Christoffel<T> {
    pub fn get(&self, r: usize, m: usize, n: usize) -> T {
        self.data[(r * self.dim + m) * self.dim + n]
    }
}

pub fn christoffel<T: Real, C: Chart<T> + ?Sized>(
    chart: &C,
    y: &[T],
    step: T,
) -> Result<Christoffel<T>, CurvatureError> {
    let n = chart.dim();
    let g = chart.metric(y)?;
    let ginv = g.inverse().ok_or(CurvatureError::SingularMetric)?;
    let dg = gradient(y, step, |z| chart.metric(z), mat_derivative)?;
    let half = T::lit(0.5);
    let mut lowered = vec![T::zero(); n * n * n];
    for m in 0..n {
        for nn in 0..n {
            for l in 0..n {
                lowered[(m * n + nn) * n + l] =
                    half * (dg[m][(nn, l)] + dg[nn][(m, l)] - dg[l][(m, nn)]);
            }
        }
    }
    let mut data = vec![T::zero(); n * n * n];
    for r in 0..n {
        for m in 0..n {
            for nn in 0..n {
                data[(r * n + m) * n + nn] = (0..n)
                    .fold(T::zero(), |s, l| s + ginv[(r, l)] * lowered[(m * n + nn) * n + l]);
            }
        }
    }
    Ok(Christoffel { dim: n, data })
}

/// Fully covariant curvature `R_abcd = g(R(∂_a, ∂_b) ∂_c, ∂_d)` with
/// `R(X, Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_[X,Y]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Riemann<T> {
    pub dim: usize,
    pub metric: Mat<T>,
    data: Vec<T>,
}

impl<T: Real> Riemann<T> {
    fn idx(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.dim + b) * self.dim + c) * self.dim + d
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> T {
        self.data[self.idx(a, b, c, d)]
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// `R(X, Y, Z, W)`.
    pub fn eval(&self, x: &[T], y: &[T], z: &[T], w: &[T]) -> T {
        let n = self.dim;
        let mut s = T::zero();
        for a in 0..n {
            for b in 0..n {
                let ab = x[a] * y[b];
                if ab == T::zero() {
                    continue;
                }
                for c in 0..n {
                    let abc = ab * z[c];
                    for d in 0..n {
                        s = s + abc * w[d] * self.get(a, b, c, d);
                    }
                }
            }
        }
        s
    }

    /// `K(X, Y) = R(X, Y, Y, X) / (|X|²|Y|² - g(X,Y)²)`.
    pub fn sectional(&self, x: &[T], y: &[T]) -> T {
        let g = &self.metric;
        let den = g.bilinear(x, x) * g.bilinear(y, y) - g.bilinear(x, y).powi(2);
        self.eval(x, y, y, x) / den
    }

    /// `Ric_bc = Σ g^{ad} R_abcd`.
    pub fn ricci(&self) -> Result<Mat<T>, CurvatureError> {
        let n = self.dim;
        let ginv = self.metric.inverse().ok_or(CurvatureError::SingularMetric)?;
        Ok(Mat::from_fn(n, n, |b, c| {
            let mut s = T::zero();
            for a in 0..n {
                for d in 0..n {
                    s = s + ginv[(a, d)] * self.get(a, b, c, d);
                }
            }
            s
        }))
    }

    /// Largest violation of `R_abcd = -R_bacd = -R_abdc = R_cdab`, relative
    /// to `max |R|`.
    pub fn symmetry_residual(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let r = self.get(a, b, c, d);
                        worst = worst
                            .max((r + self.get(b, a, c, d)).abs())
                            .max((r + self.get(a, b, d, c)).abs())
                            .max((r - self.get(c, d, a, b)).abs());
                    }
                }
            }
        }
        worst / self.max_abs().max(T::min_positive_value())
    }

    /// Largest `|R_abcd + R_bcad + R_cabd|`, relative to `max |R|`.
    pub fn bianchi_residual(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s = self.get(a, b, c, d) + self.get(b, c, a, d) + self.get(c, a, b, d);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst / self.max_abs().max(T::min_positive_value())
    }
}

/// Curvature at `y`: Christoffels by extrapolated central differences of the
/// metric, then the coordinate formula with a second differentiation.
pub fn riemann_at<T: Real, C: Chart<T> + ?Sized>(
    chart: &C,
    y: &[T],
    step: T,
) -> Result<Riemann<T>, CurvatureError> {
    let n = chart.dim();
    let gam = christoffel(chart, y, step)?;
    let dgam = gradient(
        y,
        step,
        |z| christoffel(chart, z, step),
        |v: &[Christoffel<T>; 4], h| Christoffel {
            dim: n,
            data: (0..v[0].data.len())
                .map(|i| richardson(&[v[0].data[i], v[1].data[i], v[2].data[i], v[3].data[i]], h))
                .collect(),
        },
    )?;
    let metric = chart.metric(y)?;
    // R^r_{s m n} = ∂_m Γ^r_{ns} - ∂_n Γ^r_{ms} + Γ^r_{ml} Γ^l_{ns} - Γ^r_{nl} Γ^l_{ms}
    let mut up = vec![T::zero(); n * n * n * n];
    for r in 0..n {
        for s in 0..n {
            for m in 0..n {
                for nn in 0..n {
                    let mut v = dgam[m].get(r, nn, s) - dgam[nn].get(r, m, s);
                    for l in 0..n {
                        v = v + gam.get(r, m, l) * gam.get(l, nn, s) - gam.get(r, nn, l) * gam.get(l, m, s);
                    }
                    up[((r * n + s) * n + m) * n + nn] = v;
                }
            }
        }
    }
    let mut data = vec![T::zero(); n * n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    // g(R(∂a, ∂b) ∂c, ∂d) = R^r_{c a b} g_{rd}
                    data[((a * n + b) * n + c) * n + d] = (0..n)
                        .fold(T::zero(), |acc, r| acc + up[((r * n + c) * n + a) * n + b] * metric[(r, d)]);
                }
            }
        }
    }
    Ok(Riemann { dim: n, metric, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::chart::GroupChart;
    use crate::lie::{build_algebra, AlgebraName};

    /// Round 2-sphere of radius `r` in polar coordinates around the equator.
    struct Sphere2(f64);

    impl Chart<f64> for Sphere2 {
        fn dim(&self) -> usize {
            2
        }
        fn metric(&self, y: &[f64]) -> Result<Mat<f64>, CurvatureError> {
            let r2 = self.0 * self.0;
            Ok(Mat::from_rows(vec![
                vec![r2, 0.0],
                vec![0.0, r2 * y[0].sin().powi(2)],
            ]))
        }
        fn base_point(&self, t: f64) -> Vec<f64> {
            vec![t, 0.0]
        }
    }

    #[test]
    fn round_sphere_curvature() {
        for r in [1.0, 2.0] {
            let s = Sphere2(r);
            let rm = riemann_at(&s, &[1.1, 0.3], 1e-4).unwrap();
            let k = rm.sectional(&[1.0, 0.0], &[0.0, 1.0]);
            assert!((k - 1.0 / (r * r)).abs() < 1e-6, "{k}");
        }
    }

    #[test]
    fn su2_group_curvature_matches_bracket_formula() {
        let alg = build_algebra::<num_rational::Rational64>(AlgebraName::Su2)
            .unwrap()
            .map_scalar(crate::scalar::to_real::<_, f64>);
        let b = alg.killing_opposite().matrix;
        let chart = GroupChart::new(alg.clone(), b.clone());
        let rm = riemann_at(&chart, &[0.0; 3], 1e-5).unwrap();
        // K(X, Y) = ¼ |[X, Y]|² / (|X|²|Y|² - B(X,Y)²)
        let pairs = [([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), ([0.3, -0.2, 0.5], [0.1, 0.9, -0.4])];
        for (x, y) in pairs {
            let br = alg.bracket(&x, &y);
            let den = b.bilinear(&x, &x) * b.bilinear(&y, &y) - b.bilinear(&x, &y).powi(2);
            let oracle = 0.25 * b.bilinear(&br, &br) / den;
            assert!((rm.sectional(&x, &y) - oracle).abs() < 1e-6);
        }
        assert!(rm.symmetry_residual() < 1e-4);
        assert!(rm.bianchi_residual() < 1e-4);
    }
}
