//! The adapted frame `{ξ, Â, v̂ ...}` at a point `γ(t)` of the normal geodesic.
//!
//! Frame index 0 is `ξ = ∂t`; indices `1..` follow the split's `m` indices
//! (`a` first, then the `n` blocks). Orbit fields are the Killing fields
//! induced by the left action, so `[X̂, Ŷ] = -(widehat of [X, Y])` and the
//! `k` component of a bracket vanishes at the base point.

use crate::jet::Jet;
use crate::lie::ReductiveSplit;
use crate::matrix::Mat;
use crate::scalar::Real;

use super::profile::{ProfileKind, ProfileSet, ProfileValues};
use super::GeometryError;

#[derive(Clone, Debug)]
pub struct FramePoint<'a, T> {
    pub split: &'a ReductiveSplit<T>,
    pub t: T,
    pub values: ProfileValues<T>,
    m_indices: Vec<usize>,
    block_of: Vec<usize>,
    gram: Mat<T>,
    gram_dot: Mat<T>,
    brackets: Vec<Mat<T>>,
    j: Mat<T>,
    j_dot: Mat<T>,
    u: Jet<T>,
}

impl<'a, T: Real> FramePoint<'a, T> {
    pub fn new(
        split: &'a ReductiveSplit<T>,
        profiles: &ProfileSet<T>,
        t: T,
    ) -> Result<Self, GeometryError> {
        let blocks = split.m_blocks();
        if profiles.scales.len() != blocks.len() {
            return Err(GeometryError::Mismatch(format!(
                "{} scale functions for {} blocks",
                profiles.scales.len(),
                blocks.len()
            )));
        }
        if profiles.coefficients.len() != split.complex_structures.len() {
            return Err(GeometryError::Mismatch(format!(
                "{} coefficients for {} complex structures",
                profiles.coefficients.len(),
                split.complex_structures.len()
            )));
        }
        let expected_kind = match split.kind {
            crate::lie::SplitKind::Su3 => ProfileKind::Su3,
            crate::lie::SplitKind::Su2Su2 => ProfileKind::Su2Su2,
        };
        if profiles.kind != expected_kind {
            return Err(GeometryError::Mismatch("profile kind does not match split".into()));
        }
        if split.a_indices.len() != 1 || split.a_element != split.parent.basis_vector(split.a_indices[0]) {
            return Err(GeometryError::Mismatch(
                "the a block must be spanned by the distinguished element".into(),
            ));
        }
        let values = profiles.eval_regular(t)?;

        let m_indices = split.m_indices();
        let block_of: Vec<usize> = m_indices
            .iter()
            .map(|i| blocks.iter().position(|b| b.contains(i)).unwrap_or(0))
            .collect();
        let dim = m_indices.len() + 1;
        let mut gram = Mat::zeros(dim, dim);
        let mut gram_dot = Mat::zeros(dim, dim);
        gram[(0, 0)] = T::one();
        for (p, &i) in m_indices.iter().enumerate() {
            for (q, &j) in m_indices.iter().enumerate() {
                let b = split.form.matrix[(i, j)];
                if b == T::zero() {
                    continue;
                }
                let (sp, sq) = (values.scales[block_of[p]], values.scales[block_of[q]]);
                gram[(p + 1, q + 1)] = sp.value * sq.value * b;
                gram_dot[(p + 1, q + 1)] = (sp.d1 * sq.value + sp.value * sq.d1) * b;
            }
        }

        let mut brackets = vec![Mat::zeros(dim, dim)];
        for &x in &m_indices {
            brackets.push(Mat::from_fn(dim, dim, |r, s| {
                if r == 0 || s == 0 {
                    T::zero()
                } else {
                    -*split.parent.c(x, m_indices[s - 1], m_indices[r - 1])
                }
            }));
        }

        let norm_a = split.a_norm_sq().sqrt();
        let u = values.a_scale().scale(norm_a).recip();
        let nd = split.n_dim();
        let mut jt = Mat::zeros(nd, nd);
        let mut jt_dot = Mat::zeros(nd, nd);
        for (c, js) in values.coefficients.iter().zip(&split.complex_structures) {
            jt = &jt + &js.scale(&c.value);
            jt_dot = &jt_dot + &js.scale(&c.d1);
        }
        let mut j = Mat::zeros(dim, dim);
        let mut j_dot = Mat::zeros(dim, dim);
        j[(1, 0)] = u.value;
        j[(0, 1)] = -u.value.recip();
        j_dot[(1, 0)] = u.d1;
        j_dot[(0, 1)] = u.d1 / (u.value * u.value);
        for r in 0..nd {
            for s in 0..nd {
                j[(r + 2, s + 2)] = jt[(r, s)];
                j_dot[(r + 2, s + 2)] = jt_dot[(r, s)];
            }
        }

        Ok(Self {
            split,
            t,
            values,
            m_indices,
            block_of,
            gram,
            gram_dot,
            brackets,
            j,
            j_dot,
            u,
        })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Mat<T> {
        &self.gram
    }

    /// `d/dt` of the Gram matrix along `ξ`.
    pub fn gram_dot(&self) -> &Mat<T> {
        &self.gram_dot
    }

    /// Frame-coordinate matrix of `Y ↦ [E_i, Y]`; zero for `i = 0`.
    pub fn bracket_matrix(&self, i: usize) -> &Mat<T> {
        &self.brackets[i]
    }

    /// `[E_i, E_j]` in frame coordinates.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<T> {
        self.brackets[i].column(j)
    }

    /// Derivative of the Gram matrix along `E_i`: analytic in `t` for `ξ`,
    /// and `L_iᵀ G + G L_i` for Killing directions.
    pub fn gram_derivative(&self, i: usize) -> Mat<T> {
        if i == 0 {
            self.gram_dot.clone()
        } else {
            let l = &self.brackets[i];
            &(&l.transpose() * &self.gram) + &(&self.gram * l)
        }
    }

    /// The almost complex structure in frame coordinates.
    pub fn j(&self) -> &Mat<T> {
        &self.j
    }

    /// Derivative of the frame components of `J` along `E_i`; for Killing
    /// directions `J` is invariant, giving `J L_i - L_i J`.
    pub fn j_derivative(&self, i: usize) -> Mat<T> {
        if i == 0 {
            self.j_dot.clone()
        } else {
            let l = &self.brackets[i];
            &(&self.j * l) - &(l * &self.j)
        }
    }

    /// `u` with `Jξ = u Â`, and its derivatives.
    pub fn u(&self) -> Jet<T> {
        self.u
    }

    pub fn inner(&self, x: &[T], y: &[T]) -> T {
        self.gram.bilinear(x, y)
    }

    pub fn norm(&self, x: &[T]) -> T {
        self.inner(x, x).max(T::zero()).sqrt()
    }

    pub fn apply_j(&self, x: &[T]) -> Vec<T> {
        self.j.mul_vec(x)
    }

    pub fn xi(&self) -> Vec<T> {
        self.basis(0)
    }

    pub fn a_hat(&self) -> Vec<T> {
        self.basis(1)
    }

    pub fn basis(&self, i: usize) -> Vec<T> {
        let mut e = vec![T::zero(); self.dim()];
        e[i] = T::one();
        e
    }

    /// `v̂` for `v` given in `n` coordinates.
    pub fn n_vector(&self, v: &[T]) -> Vec<T> {
        let mut e = vec![T::zero(); self.dim()];
        e[2..2 + v.len()].copy_from_slice(v);
        e
    }

    /// The `n` coordinates of a frame vector.
    pub fn n_part(&self, x: &[T]) -> Vec<T> {
        x[2..].to_vec()
    }

    /// Index of the `m` block containing frame index `p ≥ 1`.
    pub fn block(&self, p: usize) -> usize {
        self.block_of[p - 1]
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m_indices
    }

    /// `J_t = Σ a_i J_i` on `n`.
    pub fn jt(&self) -> Mat<T> {
        let nd = self.dim() - 2;
        Mat::from_fn(nd, nd, |r, s| self.j[(r + 2, s + 2)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::profile::Profile;
    use crate::lie::su3_split_exact;

    fn su3_profiles() -> ProfileSet<f64> {
        ProfileSet::su3(
            Profile::sinusoid(1.2, 0.1, 1.0, 0.0),
            Profile::sinusoid(0.8, 0.2, 2.0, 0.5),
            [
                Profile::constant(0.0),
                Profile::constant(0.6),
                Profile::constant(0.8),
            ],
            1.0,
            (-1.0, 1.0),
        )
    }

    #[test]
    fn gram_is_block_diagonal_with_profile_scales() {
        let split = su3_split_exact().to_real::<f64>();
        let p = su3_profiles();
        let fp = FramePoint::new(&split, &p, 0.3).unwrap();
        let v = p.eval(0.3);
        let (h, f) = (v.scales[0].value, v.scales[1].value);
        let g = fp.gram();
        assert_eq!(g[(0, 0)], 1.0);
        assert!((g[(1, 1)] - 4.0 * h * h).abs() < 1e-14);
        for i in 2..6 {
            assert!((g[(i, i)] - 12.0 * f * f).abs() < 1e-13);
            assert_eq!(g[(0, i)], 0.0);
            assert_eq!(g[(1, i)], 0.0);
        }
    }

    #[test]
    fn j_is_orthogonal_complex_structure() {
        let split = su3_split_exact().to_real::<f64>();
        let fp = FramePoint::new(&split, &su3_profiles(), -0.2).unwrap();
        let j = fp.j();
        let jj = j * j;
        let compat = &(&j.transpose() * fp.gram()) * j;
        assert!((&jj + &Mat::identity(6)).max_abs() < 1e-14);
        assert!((&compat - fp.gram()).max_abs() < 1e-12);
        assert!((fp.norm(&fp.apply_j(&fp.xi())) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mismatched_profiles_rejected() {
        let split = crate::lie::su2su2_split_exact().to_real::<f64>();
        assert!(matches!(
            FramePoint::new(&split, &su3_profiles(), 0.0),
            Err(GeometryError::Mismatch(_))
        ));
    }
}
