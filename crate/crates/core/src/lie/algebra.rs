//! Lie algebras given by structure constants, and their Killing-opposite form.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde_json::{json, Value};

use crate::matrix::Mat;
use crate::scalar::Field;

use super::LieError;

/// A finite-dimensional Lie algebra in a fixed basis, with
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraModel<S> {
    name: String,
    basis: Vec<String>,
    structure: Vec<S>,
}

/// Symmetric bilinear form on an algebra, as a Gram matrix over the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm<S> {
    pub matrix: Mat<S>,
}

/// The algebras this crate can build by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraName {
    Su2,
    Su3,
    Su2PlusSu2,
}

impl FromStr for AlgebraName {
    type Err = LieError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "su2" => Ok(Self::Su2),
            "su3" => Ok(Self::Su3),
            "su2+su2" | "su2xsu2" => Ok(Self::Su2PlusSu2),
            _ => Err(LieError::UnknownAlgebra(s.to_string())),
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Su2 => "su2",
            Self::Su3 => "su3",
            Self::Su2PlusSu2 => "su2+su2",
        })
    }
}

impl<S: Field> LieAlgebraModel<S> {
    /// Builds a model, rejecting structure constants that are not
    /// antisymmetric or violate the Jacobi identity.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<String>,
        structure: Vec<S>,
    ) -> Result<Self, LieError> {
        let n = basis.len();
        if structure.len() != n * n * n {
            return Err(LieError::Shape {
                expected: n * n * n,
                found: structure.len(),
            });
        }
        let model = Self {
            name: name.into(),
            basis,
            structure,
        };
        if !model.is_antisymmetric() {
            return Err(LieError::NotAntisymmetric);
        }
        let residual = model.jacobi_residual();
        if !residual.negligible(1.0) {
            return Err(LieError::Jacobi(residual.approx_f64()));
        }
        Ok(model)
    }

    /// Builds a model without validation. Callers must guarantee the
    /// invariants; used for re-expressing an already valid algebra.
    fn from_parts(name: String, basis: Vec<String>, structure: Vec<S>) -> Self {
        Self {
            name,
            basis,
            structure,
        }
    }

    /// The abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        let basis = (1..=n).map(|i| format!("r{i}")).collect();
        Self::from_parts(format!("{n}R"), basis, vec![S::zero(); n * n * n])
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        let n = self.dim();
        &self.structure[(i * n + j) * n + k]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<S> {
        (0..self.dim())
            .map(|k| if k == i { S::one() } else { S::zero() })
            .collect()
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.dim();
        let mut out = vec![S::zero(); n];
        for i in 0..n {
            if x[i] == S::zero() {
                continue;
            }
            for j in 0..n {
                if y[j] == S::zero() {
                    continue;
                }
                let xy = x[i].clone() * y[j].clone();
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if *c != S::zero() {
                        *slot = slot.clone() + xy.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad(x)`: column `j` holds the coordinates of `[x, e_j]`.
    pub fn ad(&self, x: &[S]) -> Mat<S> {
        let n = self.dim();
        let cols: Vec<Vec<S>> = (0..n)
            .map(|j| self.bracket(x, &self.basis_vector(j)))
            .collect();
        Mat::from_columns(&cols)
    }

    pub fn ad_basis(&self, i: usize) -> Mat<S> {
        self.ad(&self.basis_vector(i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| self.c(i, j, k).clone() + self.c(j, i, k).clone() == S::zero())
            })
        })
    }

    /// Largest coefficient of `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` over all
    /// basis triples. Exactly zero for a valid model over an exact field.
    pub fn jacobi_residual(&self) -> S {
        let n = self.dim();
        let mut worst = S::zero();
        for i in 0..n {
            let x = self.basis_vector(i);
            for j in 0..n {
                let y = self.basis_vector(j);
                for k in 0..n {
                    let z = self.basis_vector(k);
                    let a = self.bracket(&x, &self.bracket(&y, &z));
                    let b = self.bracket(&y, &self.bracket(&z, &x));
                    let c = self.bracket(&z, &self.bracket(&x, &y));
                    for m in 0..n {
                        let s = a[m].clone() + b[m].clone() + c[m].clone();
                        if s.magnitude() > worst.magnitude() {
                            worst = s;
                        }
                    }
                }
            }
        }
        if worst.approx_f64() < 0.0 {
            -worst
        } else {
            worst
        }
    }

    /// `B(x, y) = -trace(ad x ∘ ad y)`.
    pub fn killing_opposite(&self) -> BilinearForm<S> {
        let n = self.dim();
        let ads: Vec<Mat<S>> = (0..n).map(|i| self.ad_basis(i)).collect();
        let matrix = Mat::from_fn(n, n, |i, j| -(&ads[i] * &ads[j]).trace());
        BilinearForm { matrix }
    }

    /// Re-expresses the algebra in a new basis given by the columns of
    /// `change` (coordinates in the old basis).
    pub fn change_basis(
        &self,
        name: impl Into<String>,
        change: &Mat<S>,
        labels: Vec<String>,
    ) -> Result<Self, LieError> {
        let n = self.dim();
        if change.rows() != n || change.cols() != n || labels.len() != n {
            return Err(LieError::Shape {
                expected: n,
                found: change.cols(),
            });
        }
        let inverse = change.inverse().ok_or(LieError::SingularBasisChange)?;
        let new_basis: Vec<Vec<S>> = (0..n).map(|j| change.column(j)).collect();
        let mut structure = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let old = self.bracket(&new_basis[i], &new_basis[j]);
                structure.extend(inverse.mul_vec(&old));
            }
        }
        Ok(Self::from_parts(name.into(), labels, structure))
    }

    /// Direct sum `self ⊕ other`, with `other`'s basis appended.
    pub fn direct_sum(&self, other: &Self, name: impl Into<String>) -> Self {
        let (n1, n2) = (self.dim(), other.dim());
        let n = n1 + n2;
        let mut structure = vec![S::zero(); n * n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                for k in 0..n1 {
                    structure[(i * n + j) * n + k] = self.c(i, j, k).clone();
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                for k in 0..n2 {
                    structure[((i + n1) * n + j + n1) * n + k + n1] = other.c(i, j, k).clone();
                }
            }
        }
        let mut basis = self.basis.clone();
        for label in &other.basis {
            let mut l = label.clone();
            while basis.contains(&l) {
                l.push('\'');
            }
            basis.push(l);
        }
        Self::from_parts(name.into(), basis, structure)
    }

    /// Whether the span of `generators` is an ideal, i.e. `[g, k] ⊆ k`.
    pub fn is_ideal(&self, generators: &[Vec<S>]) -> bool {
        let span = Mat::from_columns(generators);
        let rank = span.rank();
        (0..self.dim()).all(|i| {
            let e = self.basis_vector(i);
            generators.iter().all(|y| {
                let mut cols = generators.to_vec();
                cols.push(self.bracket(&e, y));
                Mat::from_columns(&cols).rank() == rank
            })
        })
    }

    pub fn map_scalar<U: Field>(&self, f: impl Fn(&S) -> U) -> LieAlgebraModel<U> {
        LieAlgebraModel {
            name: self.name.clone(),
            basis: self.basis.clone(),
            structure: self.structure.iter().map(f).collect(),
        }
    }

    /// JSON document `{name, dim, basis, c, B}`; scalars are rendered with
    /// their `Display` form, so rationals appear as exact fraction strings.
    pub fn to_json(&self) -> Value {
        let n = self.dim();
        let c: Vec<Vec<Vec<String>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| self.c(i, j, k).to_string()).collect())
                    .collect()
            })
            .collect();
        let b = self.killing_opposite();
        let bm: Vec<Vec<String>> = (0..n)
            .map(|i| (0..n).map(|j| b.matrix[(i, j)].to_string()).collect())
            .collect();
        json!({
            "name": self.name,
            "dim": n,
            "basis": self.basis,
            "c": c,
            "B": bm,
        })
    }
}

impl<S: Field> BilinearForm<S> {
    pub fn eval(&self, x: &[S], y: &[S]) -> S {
        self.matrix.bilinear(x, y)
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.matrix[(i, j)]
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.matrix.is_positive_definite()
    }

    /// Largest `|B([x,y],z) + B(y,[x,z])|` over basis triples.
    pub fn ad_invariance_residual(&self, alg: &LieAlgebraModel<S>) -> f64 {
        let n = alg.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            let x = alg.basis_vector(i);
            for j in 0..n {
                let y = alg.basis_vector(j);
                let xy = alg.bracket(&x, &y);
                for k in 0..n {
                    let z = alg.basis_vector(k);
                    let xz = alg.bracket(&x, &z);
                    let r = self.eval(&xy, &z) + self.eval(&y, &xz);
                    worst = worst.max(r.magnitude());
                }
            }
        }
        worst
    }
}

/// Builds one of the named compact algebras with exact structure constants.
///
/// * `su2`: basis `X1, X2, X3` with `[X1, X2] = X3` cyclically.
/// * `su2+su2`: `X1..X3, Y1..Y3`, block-diagonal brackets.
/// * `su3`: anti-Hermitian traceless 3x3 matrices in the adapted order
///   `k1..k3` (upper-left su(2)), `A = (i/3) diag(1,1,-2)`, then `n1..n4`
///   (real and imaginary parts of the (1,3) and (2,3) entries).
pub fn build_algebra<S: Field>(name: AlgebraName) -> Result<LieAlgebraModel<S>, LieError> {
    match name {
        AlgebraName::Su2 => Ok(su2()),
        AlgebraName::Su2PlusSu2 => {
            let a = su2::<S>();
            let b = su2::<S>();
            let mut sum = a.direct_sum(&b, "su2+su2");
            sum.basis = ["X1", "X2", "X3", "Y1", "Y2", "Y3"]
                .iter()
                .map(|s| s.to_string())
                .collect();
            Ok(sum)
        }
        AlgebraName::Su3 => su3(),
    }
}

/// Exact model over `Rational64`, parsed from a name string.
pub fn build_algebra_named(name: &str) -> Result<LieAlgebraModel<Rational64>, LieError> {
    build_algebra(name.parse()?)
}

fn su2<S: Field>() -> LieAlgebraModel<S> {
    let n = 3;
    let mut structure = vec![S::zero(); 27];
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        structure[(i * n + j) * n + k] = S::one();
        structure[(j * n + i) * n + k] = -S::one();
    }
    LieAlgebraModel::from_parts(
        "su2".into(),
        vec!["X1".into(), "X2".into(), "X3".into()],
        structure,
    )
}

/// Gaussian-rational entry, only used to derive su(3) structure constants.
#[derive(Clone, Debug, PartialEq)]
struct Complex<S> {
    re: S,
    im: S,
}

type Cmat<S> = [[Complex<S>; 3]; 3];

fn cmat_zero<S: Field>() -> Cmat<S> {
    std::array::from_fn(|_| {
        std::array::from_fn(|_| Complex {
            re: S::zero(),
            im: S::zero(),
        })
    })
}

fn cmat_mul<S: Field>(a: &Cmat<S>, b: &Cmat<S>) -> Cmat<S> {
    let mut out = cmat_zero::<S>();
    for i in 0..3 {
        for j in 0..3 {
            let (mut re, mut im) = (S::zero(), S::zero());
            for k in 0..3 {
                let (x, y) = (&a[i][k], &b[k][j]);
                re = re + x.re.clone() * y.re.clone() - x.im.clone() * y.im.clone();
                im = im + x.re.clone() * y.im.clone() + x.im.clone() * y.re.clone();
            }
            out[i][j] = Complex { re, im };
        }
    }
    out
}

fn cmat_sub<S: Field>(a: &Cmat<S>, b: &Cmat<S>) -> Cmat<S> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| Complex {
            re: a[i][j].re.clone() - b[i][j].re.clone(),
            im: a[i][j].im.clone() - b[i][j].im.clone(),
        })
    })
}

fn cmat_trace_re<S: Field>(a: &Cmat<S>) -> S {
    (0..3).fold(S::zero(), |acc, i| acc + a[i][i].re.clone())
}

fn su3_basis<S: Field>() -> Vec<Cmat<S>> {
    let q = |n: i64, d: i64| S::from_ratio(n, d);
    let set = |entries: &[(usize, usize, S, S)]| {
        let mut m = cmat_zero::<S>();
        for (i, j, re, im) in entries {
            m[*i][*j] = Complex {
                re: re.clone(),
                im: im.clone(),
            };
        }
        m
    };
    let z = S::zero;
    vec![
        // -i σ1 / 2
        set(&[(0, 1, z(), q(-1, 2)), (1, 0, z(), q(-1, 2))]),
        // -i σ2 / 2
        set(&[(0, 1, q(-1, 2), z()), (1, 0, q(1, 2), z())]),
        // -i σ3 / 2
        set(&[(0, 0, z(), q(-1, 2)), (1, 1, z(), q(1, 2))]),
        // A = (i/3) diag(1, 1, -2)
        set(&[
            (0, 0, z(), q(1, 3)),
            (1, 1, z(), q(1, 3)),
            (2, 2, z(), q(-2, 3)),
        ]),
        set(&[(0, 2, q(1, 1), z()), (2, 0, q(-1, 1), z())]),
        set(&[(0, 2, z(), q(1, 1)), (2, 0, z(), q(1, 1))]),
        set(&[(1, 2, q(1, 1), z()), (2, 1, q(-1, 1), z())]),
        set(&[(1, 2, z(), q(1, 1)), (2, 1, z(), q(1, 1))]),
    ]
}

fn su3<S: Field>() -> Result<LieAlgebraModel<S>, LieError> {
    let basis = su3_basis::<S>();
    let n = basis.len();
    // The basis is orthogonal for the trace form, so coordinates are ratios
    // of traces.
    let norms: Vec<S> = basis
        .iter()
        .map(|e| cmat_trace_re(&cmat_mul(e, e)))
        .collect();
    let mut structure = Vec::with_capacity(n * n * n);
    for a in &basis {
        for b in &basis {
            let z = cmat_sub(&cmat_mul(a, b), &cmat_mul(b, a));
            let coords: Vec<S> = basis
                .iter()
                .zip(&norms)
                .map(|(e, nrm)| cmat_trace_re(&cmat_mul(&z, e)) / nrm.clone())
                .collect();
            // reconstruct and compare, so a basis that fails to span is caught
            let mut back = cmat_zero::<S>();
            for (e, c) in basis.iter().zip(&coords) {
                for i in 0..3 {
                    for j in 0..3 {
                        back[i][j].re = back[i][j].re.clone() + c.clone() * e[i][j].re.clone();
                        back[i][j].im = back[i][j].im.clone() + c.clone() * e[i][j].im.clone();
                    }
                }
            }
            let diff = cmat_sub(&back, &z);
            let exact = diff
                .iter()
                .flatten()
                .all(|c| c.re.negligible(1.0) && c.im.negligible(1.0));
            if !exact {
                return Err(LieError::NotInSpan);
            }
            structure.extend(coords);
        }
    }
    let labels = ["k1", "k2", "k3", "A", "n1", "n2", "n3", "n4"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    LieAlgebraModel::new("su3", labels, structure)
}
