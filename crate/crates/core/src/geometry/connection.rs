//! Levi-Civita connection in the adapted frame, solved from the Koszul
//! identity.

use crate::matrix::Mat;
use crate::scalar::Real;

use super::frame::FramePoint;
use super::GeometryError;

/// `∇_{E_i} E_j = Σ_m Γ[i][j][m] E_m` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionTable<T> {
    dim: usize,
    gamma: Vec<T>,
}

impl<T: Real> ConnectionTable<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, m: usize) -> T {
        self.gamma[(i * self.dim + j) * self.dim + m]
    }

    /// `∇_{E_i} E_j` in frame coordinates.
    pub fn nabla_basis(&self, i: usize, j: usize) -> Vec<T> {
        (0..self.dim).map(|m| self.get(i, j, m)).collect()
    }

    /// The endomorphism `Y ↦ ∇_{E_i} Y` on frame-constant combinations.
    pub fn operator(&self, i: usize) -> Mat<T> {
        Mat::from_fn(self.dim, self.dim, |m, k| self.get(i, k, m))
    }

    /// `∇_X Y` for frame-constant combinations `X, Y`.
    pub fn covariant(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                let c = xi * yj;
                if c == T::zero() {
                    continue;
                }
                for (m, o) in out.iter_mut().enumerate() {
                    *o = *o + c * self.get(i, j, m);
                }
            }
        }
        out
    }

    /// `max |Γ_ij - Γ_ji - [E_i, E_j]|`.
    pub fn torsion_residual(&self, point: &FramePoint<'_, T>) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let br = point.bracket(i, j);
                for (m, b) in br.iter().enumerate() {
                    let r = self.get(i, j, m) - self.get(j, i, m) - *b;
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    /// `max |E_i g(E_j, E_k) - g(∇_i E_j, E_k) - g(E_j, ∇_i E_k)|`.
    pub fn metric_residual(&self, point: &FramePoint<'_, T>) -> T {
        let g = point.gram();
        let mut worst = T::zero();
        for i in 0..self.dim {
            let dg = point.gram_derivative(i);
            for j in 0..self.dim {
                let nj = self.nabla_basis(i, j);
                for k in 0..self.dim {
                    let nk = self.nabla_basis(i, k);
                    let lhs = dg[(j, k)];
                    let rhs = g.bilinear(&nj, &point.basis(k)) + g.bilinear(&point.basis(j), &nk);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }
}

/// Solves the torsion-free, metric-compatible system at `point`.
///
/// The lowered symbols `g(∇_i E_j, E_k)` are fixed by the Koszul identity
/// in terms of derivatives of the Gram matrix and frame brackets; raising
/// the last index with the inverse Gram matrix gives the table.
pub fn koszul_solve<T: Real>(point: &FramePoint<'_, T>) -> Result<ConnectionTable<T>, GeometryError> {
    solve_with_bracket_sign(point, T::one())
}

pub(crate) fn solve_with_bracket_sign<T: Real>(
    point: &FramePoint<'_, T>,
    sign: T,
) -> Result<ConnectionTable<T>, GeometryError> {
    let n = point.dim();
    let g = point.gram();
    let half = T::lit(0.5);
    let derivs: Vec<Mat<T>> = (0..n).map(|i| point.gram_derivative(i)).collect();
    let gb = |i: usize, j: usize, k: usize| -> T {
        // g([E_i, E_j], E_k)
        let l = point.bracket_matrix(i);
        sign * (0..n).fold(T::zero(), |acc, m| acc + l[(m, j)] * g[(m, k)])
    };
    // rhs column (i, j) holds the lowered symbols over k
    let mut lowered = Mat::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = derivs[i][(j, k)] + derivs[j][(i, k)] - derivs[k][(i, j)] + gb(i, j, k)
                    - gb(i, k, j)
                    - gb(j, k, i);
                lowered[(k, i * n + j)] = half * v;
            }
        }
    }
    let raised = g.solve(&lowered).ok_or(GeometryError::SingularGram {
        t: point.t.to_f64_lossy(),
    })?;
    let mut gamma = vec![T::zero(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                gamma[(i * n + j) * n + m] = raised[(m, i * n + j)];
            }
        }
    }
    Ok(ConnectionTable { dim: n, gamma })
}
