//! Covariant derivative of the almost complex structure, the 3-form
//! `3 g((∇_X J)Y, Z)`, and the closed-form component formulas for the su(3)
//! model.

use crate::matrix::Mat;
use crate::scalar::Real;

use super::connection::{koszul_solve, ConnectionTable};
use super::frame::FramePoint;
use super::GeometryError;

/// `∇J` at one point: `operators[i]` is the frame matrix of `∇_{E_i} J`.
#[derive(Clone, Debug)]
pub struct NablaJ<'p, 'a, T> {
    pub point: &'p FramePoint<'a, T>,
    pub connection: ConnectionTable<T>,
    operators: Vec<Mat<T>>,
}

impl<'p, 'a, T: Real> NablaJ<'p, 'a, T> {
    pub fn new(point: &'p FramePoint<'a, T>) -> Result<Self, GeometryError> {
        let connection = koszul_solve(point)?;
        Ok(Self::with_connection(point, connection))
    }

    pub fn with_connection(point: &'p FramePoint<'a, T>, connection: ConnectionTable<T>) -> Self {
        let j = point.j();
        let operators = (0..point.dim())
            .map(|i| {
                let gi = connection.operator(i);
                &(&point.j_derivative(i) + &(&gi * j)) - &(j * &gi)
            })
            .collect();
        Self {
            point,
            connection,
            operators,
        }
    }

    /// Frame matrix of `∇_{E_i} J`.
    pub fn operator(&self, i: usize) -> &Mat<T> {
        &self.operators[i]
    }

    /// Frame matrix of `∇_X J`.
    pub fn along(&self, x: &[T]) -> Mat<T> {
        let n = self.point.dim();
        x.iter()
            .zip(&self.operators)
            .fold(Mat::zeros(n, n), |acc, (c, op)| &acc + &op.scale(c))
    }

    /// `(∇_X J) Y`.
    pub fn apply(&self, x: &[T], y: &[T]) -> Vec<T> {
        self.along(x).mul_vec(y)
    }

    /// `3 g((∇_X J)Y, Z)`.
    pub fn d_omega(&self, x: &[T], y: &[T], z: &[T]) -> T {
        T::lit(3.0) * self.point.inner(&self.apply(x, y), z)
    }

    /// `‖(∇_X J) X‖`.
    pub fn gray_defect(&self, x: &[T]) -> T {
        self.point.norm(&self.apply(x, x))
    }

    /// `max_i ‖(∇_{E_i} J) J + J (∇_{E_i} J)‖`.
    pub fn anticommutation_residual(&self) -> T {
        let j = self.point.j();
        self.operators.iter().fold(T::zero(), |acc, op| {
            acc.max(T::lit((&(op * j) + &(j * op)).max_abs()))
        })
    }

    /// `‖(∇_x J)y‖² / (‖x‖²‖y‖² - g(x,y)² - g(Jx,y)²)`, or `None` when `y`
    /// lies too close to `span(x, Jx)`.
    pub fn constant_type_ratio(&self, x: &[T], y: &[T]) -> Option<T> {
        let p = self.point;
        let den = p.inner(x, x) * p.inner(y, y)
            - p.inner(x, y).powi(2)
            - p.inner(&p.apply_j(x), y).powi(2);
        let scale = p.inner(x, x) * p.inner(y, y);
        if den <= T::lit(1e-8) * scale {
            return None;
        }
        Some(p.inner(&self.apply(x, y), &self.apply(x, y)) / den)
    }

    /// Full table `3 g((∇_{E_i} J) E_j, E_k)`.
    pub fn d_omega_table(&self) -> Vec<Vec<Vec<T>>> {
        let n = self.point.dim();
        let g = self.point.gram();
        (0..n)
            .map(|i| {
                let m = &self.operators[i];
                (0..n)
                    .map(|j| {
                        let col = m.column(j);
                        (0..n)
                            .map(|k| T::lit(3.0) * g.bilinear(&col, &self.point.basis(k)))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Largest `|dω|` entries of a frame table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DOmegaMax<T> {
    /// Over `dω(X, v, w)` with `X ∈ {ξ, Â}` and `v, w` in one `n` block.
    pub block: T,
    /// Over all frame triples.
    pub all: T,
}

impl<T: Real> NablaJ<'_, '_, T> {
    pub fn d_omega_max(&self) -> DOmegaMax<T> {
        let table = self.d_omega_table();
        let mut offset = 2;
        let mut block = T::zero();
        for b in &self.point.split.n_blocks {
            let range = offset..offset + b.len();
            offset += b.len();
            for first in [0, 1] {
                for j in range.clone() {
                    for k in range.clone() {
                        block = block.max(table[first][j][k].abs());
                    }
                }
            }
        }
        let all = table.iter().flatten().flatten().fold(T::zero(), |m, x| m.max(x.abs()));
        DOmegaMax { block, all }
    }
}

/// `(∇_X J) Y` at `point`.
pub fn nabla_j<T: Real>(point: &FramePoint<'_, T>, x: &[T], y: &[T]) -> Result<Vec<T>, GeometryError> {
    Ok(NablaJ::new(point)?.apply(x, y))
}

/// `3 g((∇_X J) Y, Z)` at `point`.
pub fn d_omega<T: Real>(point: &FramePoint<'_, T>, x: &[T], y: &[T], z: &[T]) -> Result<T, GeometryError> {
    Ok(NablaJ::new(point)?.d_omega(x, y, z))
}

/// `‖(∇_X J) X‖` at `point`.
pub fn gray_defect<T: Real>(point: &FramePoint<'_, T>, x: &[T]) -> Result<T, GeometryError> {
    Ok(NablaJ::new(point)?.gray_defect(x))
}

/// The closed-form components of `∇J` available for the su(3) model, each
/// taking `v ∈ n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LemmaCase {
    /// `(∇_v̂ J) v̂`
    VV,
    /// `(∇_ξ J) v̂`
    XiV,
    /// `(∇_v̂ J) ξ`
    VXi,
    /// `(∇_Â J) v̂`
    AV,
    /// `(∇_v̂ J) Â`
    VA,
}

impl LemmaCase {
    pub const ALL: [LemmaCase; 5] = [Self::VV, Self::XiV, Self::VXi, Self::AV, Self::VA];

    pub fn label(self) -> &'static str {
        match self {
            Self::VV => "nabla_v J v",
            Self::XiV => "nabla_xi J v",
            Self::VXi => "nabla_v J xi",
            Self::AV => "nabla_A J v",
            Self::VA => "nabla_v J A",
        }
    }

    /// The frame arguments `(X, Y)` of this case.
    pub fn arguments<T: Real>(self, point: &FramePoint<'_, T>, v: &[T]) -> (Vec<T>, Vec<T>) {
        let vh = point.n_vector(v);
        match self {
            Self::VV => (vh.clone(), vh),
            Self::XiV => (point.xi(), vh),
            Self::VXi => (vh, point.xi()),
            Self::AV => (point.a_hat(), vh),
            Self::VA => (vh, point.a_hat()),
        }
    }
}

/// Evaluates the closed-form expression for `case` from the profiles alone.
pub fn nabla_j_closed_form<T: Real>(
    point: &FramePoint<'_, T>,
    case: LemmaCase,
    v: &[T],
) -> Result<Vec<T>, GeometryError> {
    if point.split.kind != crate::lie::SplitKind::Su3 {
        return Err(GeometryError::Unsupported(
            "closed-form components exist only for the su3 model".into(),
        ));
    }
    let vals = &point.values;
    let (h, f) = (vals.scales[0], vals.scales[1]);
    let a: Vec<T> = vals.coefficients.iter().map(|c| c.value).collect();
    let a_dot: Vec<T> = vals.coefficients.iter().map(|c| c.d1).collect();
    let u = point.u().value;
    let js = &point.split.complex_structures;
    let jt = point.jt();
    let j1 = &js[0];
    let two = T::lit(2.0);
    let ratio = h.value * h.value / (two * f.value * f.value);
    let log_f = f.d1 / f.value;

    let out = match case {
        LemmaCase::VV => {
            let vh = point.n_vector(v);
            let norm2 = point.inner(&vh, &vh);
            let coef = (u * ratio * a[0] + log_f) * norm2;
            // Jξ = u Â
            let mut out = vec![T::zero(); point.dim()];
            out[1] = coef * u;
            out
        }
        LemmaCase::XiV => {
            let w = js.iter().zip(&a_dot).fold(vec![T::zero(); v.len()], |acc, (j, d)| {
                crate::matrix::axpy(d, &j.mul_vec(v), &acc)
            });
            point.n_vector(&w)
        }
        LemmaCase::VXi => {
            let c1 = -h.value / (T::lit(4.0) * f.value * f.value);
            let tv: Vec<T> = jt.mul_vec(v).iter().map(|x| -log_f * *x).collect();
            let w = crate::matrix::axpy(&c1, &j1.mul_vec(v), &tv);
            point.n_vector(&w)
        }
        LemmaCase::AV => {
            let comm = &(&jt * j1) - &(j1 * &jt);
            let w: Vec<T> = comm.mul_vec(v).iter().map(|x| (ratio - T::one()) * *x).collect();
            point.n_vector(&w)
        }
        LemmaCase::VA => {
            let tj = (&jt * j1).mul_vec(v);
            let c2 = -log_f / u;
            let w: Vec<T> = tj.iter().zip(v).map(|(x, y)| ratio * *x + c2 * *y).collect();
            point.n_vector(&w)
        }
    };
    Ok(out)
}

/// Largest deviation, relative to the closed-form magnitude (or absolute
/// when that magnitude is below one), between the Koszul evaluation and the
/// closed form for `case`.
pub fn lemma_deviation<T: Real>(
    nabla: &NablaJ<'_, '_, T>,
    case: LemmaCase,
    v: &[T],
) -> Result<T, GeometryError> {
    let (x, y) = case.arguments(nabla.point, v);
    let oracle = nabla.apply(&x, &y);
    let closed = nabla_j_closed_form(nabla.point, case, v)?;
    let diff: Vec<T> = oracle.iter().zip(&closed).map(|(a, b)| *a - *b).collect();
    let scale = nabla.point.norm(&closed).max(T::one());
    Ok(nabla.point.norm(&diff) / scale)
}
