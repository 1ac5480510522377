//! B-orthogonal reductive decompositions `g = k ⊕ a ⊕ n` together with the
//! invariant complex structures on `n`.

use num_rational::Rational64;

use crate::matrix::Mat;
use crate::scalar::Field;

use super::algebra::{build_algebra, AlgebraName, BilinearForm, LieAlgebraModel};
use super::LieError;

/// Which of the two cohomogeneity-one models a split belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    /// `su3 = su2 ⊕ a ⊕ n`, with `n ≅ C²` carrying a 2-sphere of invariant
    /// complex structures `Σ a_i J_i`.
    Su3,
    /// `su2 ⊕ su2 = k ⊕ a ⊕ n1 ⊕ n2` with `k, a` spanning a Cartan subalgebra.
    Su2Su2,
}

/// A reductive split of a compact Lie algebra.
///
/// The parent algebra is expressed in an adapted basis ordered as `k`, then
/// `a`, then the `n` blocks, so every index set is a contiguous range.
/// `complex_structures` act on the concatenated `n` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductiveSplit<S> {
    pub kind: SplitKind,
    pub parent: LieAlgebraModel<S>,
    pub form: BilinearForm<S>,
    pub k_indices: Vec<usize>,
    pub a_indices: Vec<usize>,
    pub n_blocks: Vec<Vec<usize>>,
    /// The distinguished element `A ∈ a` in parent coordinates.
    pub a_element: Vec<S>,
    pub complex_structures: Vec<Mat<S>>,
}

impl<S: Field> ReductiveSplit<S> {
    pub fn n_indices(&self) -> Vec<usize> {
        self.n_blocks.iter().flatten().copied().collect()
    }

    /// Orbit directions `m = a ⊕ n`, in frame order.
    pub fn m_indices(&self) -> Vec<usize> {
        let mut m = self.a_indices.clone();
        m.extend(self.n_indices());
        m
    }

    /// `[a, n1, n2, ...]`, the blocks on which the invariant metric is a
    /// multiple of `B`.
    pub fn m_blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![self.a_indices.clone()];
        blocks.extend(self.n_blocks.iter().cloned());
        blocks
    }

    pub fn n_dim(&self) -> usize {
        self.n_blocks.iter().map(Vec::len).sum()
    }

    /// `B(A, A)`.
    pub fn a_norm_sq(&self) -> S {
        self.form.eval(&self.a_element, &self.a_element)
    }

    /// `ad(x)` restricted to `n` (rows and columns in `n` coordinates).
    pub fn ad_on_n(&self, x: &[S]) -> Mat<S> {
        let n = self.n_indices();
        self.parent.ad(x).select(&n, &n)
    }

    /// `Σ a_i J_i` on `n`.
    pub fn complex_structure(&self, coefficients: &[S]) -> Mat<S> {
        let d = self.n_dim();
        self.complex_structures
            .iter()
            .zip(coefficients)
            .fold(Mat::zeros(d, d), |acc, (j, a)| &acc + &j.scale(a))
    }

    /// Embeds an `n`-coordinate vector into parent coordinates.
    pub fn embed_n(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.parent.dim()];
        for (idx, x) in self.n_indices().into_iter().zip(v) {
            out[idx] = x.clone();
        }
        out
    }

    /// Checks every structural invariant of the split, returning the first
    /// violation found.
    pub fn validate(&self) -> Result<(), LieError> {
        let dim = self.parent.dim();
        let mut seen = vec![false; dim];
        for &i in self.k_indices.iter().chain(&self.m_indices()) {
            if i >= dim || seen[i] {
                return Err(LieError::Split("index sets overlap or exceed the basis".into()));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(LieError::Split("index sets do not cover the basis".into()));
        }

        let mut blocks = vec![self.k_indices.clone()];
        blocks.extend(self.m_blocks());
        for (bi, b1) in blocks.iter().enumerate() {
            for b2 in blocks.iter().skip(bi + 1) {
                for &i in b1 {
                    for &j in b2 {
                        if *self.form.entry(i, j) != S::zero() {
                            return Err(LieError::Split(format!(
                                "blocks are not B-orthogonal at ({i}, {j})"
                            )));
                        }
                    }
                }
            }
        }

        let n_idx = self.n_indices();
        for &a in &self.a_indices {
            let e = self.parent.basis_vector(a);
            for &k in &self.k_indices {
                let br = self.parent.bracket(&e, &self.parent.basis_vector(k));
                if br.iter().any(|c| *c != S::zero()) {
                    return Err(LieError::Split("[a, k] != 0".into()));
                }
            }
        }
        for &x in self.a_indices.iter().chain(&self.k_indices) {
            let ad = self.parent.ad_basis(x);
            for &j in &n_idx {
                for i in 0..dim {
                    if !n_idx.contains(&i) && ad[(i, j)] != S::zero() {
                        return Err(LieError::Split("ad(k + a) does not preserve n".into()));
                    }
                }
            }
        }

        let d = self.n_dim();
        let minus_id = -&Mat::identity(d);
        for (i, j) in self.complex_structures.iter().enumerate() {
            if (j * j) != minus_id {
                return Err(LieError::Split(format!("J{} does not square to -Id", i + 1)));
            }
            for &k in &self.k_indices {
                let ad = self.ad_on_n(&self.parent.basis_vector(k));
                if &ad * j != j * &ad {
                    return Err(LieError::Split(format!(
                        "J{} does not commute with ad(k)",
                        i + 1
                    )));
                }
            }
        }

        if self.kind == SplitKind::Su3 {
            let js = &self.complex_structures;
            if js.len() != 3 {
                return Err(LieError::Split("expected three complex structures".into()));
            }
            for a in 0..3 {
                for b in (a + 1)..3 {
                    if &js[a] * &js[b] != -&(&js[b] * &js[a]) {
                        return Err(LieError::Split(format!(
                            "J{} and J{} do not anticommute",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
            if &(&js[0] * &js[1]) * &js[2] != minus_id {
                return Err(LieError::Split("J1 J2 J3 != -Id".into()));
            }
            if self.ad_on_n(&self.a_element) != js[0] {
                return Err(LieError::Split("ad(A)|n != J1".into()));
            }
        }
        Ok(())
    }

    pub fn map_scalar<U: Field>(&self, f: impl Fn(&S) -> U + Copy) -> ReductiveSplit<U> {
        ReductiveSplit {
            kind: self.kind,
            parent: self.parent.map_scalar(f),
            form: BilinearForm {
                matrix: self.form.matrix.map(f),
            },
            k_indices: self.k_indices.clone(),
            a_indices: self.a_indices.clone(),
            n_blocks: self.n_blocks.clone(),
            a_element: self.a_element.iter().map(f).collect(),
            complex_structures: self.complex_structures.iter().map(|m| m.map(f)).collect(),
        }
    }

    /// Converts to a floating-point split for the geometric layers.
    pub fn to_real<T: crate::scalar::Real>(&self) -> ReductiveSplit<T> {
        self.map_scalar(|x| crate::scalar::to_real::<S, T>(x))
    }
}

fn rotation<S: Field>() -> Mat<S> {
    // column j holds the image of the j-th basis vector: e1 -> e2, e2 -> -e1
    Mat::from_rows(vec![vec![S::zero(), -S::one()], vec![S::one(), S::zero()]])
}

/// The `su3 = su2 ⊕ a ⊕ n` split.
///
/// `A = (i/3) diag(1,1,-2)`, so `J1 = ad(A)|n` is multiplication by `i` on
/// `n ≅ C²`. `J2` is the conjugate-linear map `(z1, z2) ↦ (-z̄2, z̄1)`, which
/// commutes with the left action of su(2) and anticommutes with `J1`;
/// `J3 = J1 J2`.
pub fn build_split_su3<S: Field>() -> Result<ReductiveSplit<S>, LieError> {
    let parent: LieAlgebraModel<S> = build_algebra(AlgebraName::Su3)?;
    let form = parent.killing_opposite();
    let a_element = parent.basis_vector(3);
    let n_idx = vec![4, 5, 6, 7];
    let j1 = parent.ad(&a_element).select(&n_idx, &n_idx);
    let (o, z) = (S::one, S::zero);
    // n basis: Re z1, Im z1, Re z2, Im z2
    let j2 = Mat::from_rows(vec![
        vec![z(), z(), -o(), z()],
        vec![z(), z(), z(), o()],
        vec![o(), z(), z(), z()],
        vec![z(), -o(), z(), z()],
    ]);
    let j3 = &j1 * &j2;
    let split = ReductiveSplit {
        kind: SplitKind::Su3,
        parent,
        form,
        k_indices: vec![0, 1, 2],
        a_indices: vec![3],
        n_blocks: vec![n_idx],
        a_element,
        complex_structures: vec![j1, j2, j3],
    };
    split.validate()?;
    Ok(split)
}

/// The `su2 ⊕ su2` split with `k` the diagonal line `span(X3 + Y3)` of the
/// Cartan subalgebra and `a = span(X3 - Y3)`.
pub fn build_split_su2su2<S: Field>() -> Result<ReductiveSplit<S>, LieError> {
    build_split_su2su2_embedded(1, 1)
}

/// The `su2 ⊕ su2` split with `k = span(p X3 + q Y3)` and its B-orthogonal
/// complement `a = span(q X3 - p Y3)` in the Cartan subalgebra.
///
/// Adapted basis: `K, a, X1, X2, Y1, Y2`. The invariant complex structures
/// on `n = n1 ⊕ n2` are `R ⊕ R` and `R ⊕ -R`, `R` the quarter turn
/// `ad(X3)|n1`; their negatives give the remaining orientations.
pub fn build_split_su2su2_embedded<S: Field>(p: i64, q: i64) -> Result<ReductiveSplit<S>, LieError> {
    if p == 0 || q == 0 {
        return Err(LieError::Split(
            "k must project nontrivially onto both factors".into(),
        ));
    }
    let base: LieAlgebraModel<S> = build_algebra(AlgebraName::Su2PlusSu2)?;
    let (p_s, q_s) = (S::from_ratio(p, 1), S::from_ratio(q, 1));
    let mut cols = vec![vec![S::zero(); 6]; 6];
    cols[0][2] = p_s.clone();
    cols[0][5] = q_s.clone();
    cols[1][2] = q_s;
    cols[1][5] = -p_s;
    cols[2][0] = S::one();
    cols[3][1] = S::one();
    cols[4][3] = S::one();
    cols[5][4] = S::one();
    let labels = ["K", "a", "X1", "X2", "Y1", "Y2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let parent = base.change_basis("su2+su2", &Mat::from_columns(&cols), labels)?;
    let form = parent.killing_opposite();
    let r = rotation::<S>();
    let j_plus = r.direct_sum(&r);
    let j_minus = r.direct_sum(&(-&r));
    let split = ReductiveSplit {
        kind: SplitKind::Su2Su2,
        a_element: parent.basis_vector(1),
        parent,
        form,
        k_indices: vec![0],
        a_indices: vec![1],
        n_blocks: vec![vec![2, 3], vec![4, 5]],
        complex_structures: vec![j_plus, j_minus],
    };
    split.validate()?;
    Ok(split)
}

/// Exact su(3) split.
pub fn su3_split_exact() -> ReductiveSplit<Rational64> {
    build_split_su3().expect("su3 split is valid by construction")
}

/// Exact diagonal su(2) ⊕ su(2) split.
pub fn su2su2_split_exact() -> ReductiveSplit<Rational64> {
    build_split_su2su2().expect("su2+su2 split is valid by construction")
}

/// If `m` is `s` times the quarter turn on a 2-dimensional block, returns `s`.
pub fn rotation_speed<S: Field>(m: &Mat<S>) -> Option<S> {
    if m.rows() != 2 || m.cols() != 2 {
        return None;
    }
    let s = m[(1, 0)].clone();
    let is_rotation = m[(0, 0)] == S::zero()
        && m[(1, 1)] == S::zero()
        && m[(0, 1)] == -s.clone()
        && s != S::zero();
    is_rotation.then_some(s)
}
