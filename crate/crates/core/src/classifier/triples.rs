use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use crate::lie::LieAlgebraModel;
use crate::matrix::Mat;
use crate::Q;

use super::borel::find_sphere_pair;
use super::pairs::{AlgebraSpec, ReasonCode};
use super::ClassifierError;

/// The two groups with surviving pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassifiedGroup {
    #[serde(rename = "SU3")]
    Su3,
    #[serde(rename = "SU2xSU2")]
    Su2xSu2,
}

impl ClassifiedGroup {
    pub fn label(self) -> &'static str {
        match self {
            Self::Su3 => "SU3",
            Self::Su2xSu2 => "SU2xSU2",
        }
    }

    pub fn algebra_spec(self) -> AlgebraSpec {
        match self {
            Self::Su3 => AlgebraSpec::Su3,
            Self::Su2xSu2 => AlgebraSpec::Sum(vec![AlgebraSpec::Su2, AlgebraSpec::Su2]),
        }
    }

    pub fn algebra(self) -> &'static LieAlgebraModel<Q> {
        static SU3: OnceLock<LieAlgebraModel<Q>> = OnceLock::new();
        static SU2XSU2: OnceLock<LieAlgebraModel<Q>> = OnceLock::new();
        let cell = match self {
            Self::Su3 => &SU3,
            Self::Su2xSu2 => &SU2XSU2,
        };
        cell.get_or_init(|| self.algebra_spec().build())
    }
}

impl FromStr for ClassifiedGroup {
    type Err = ClassifierError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "su3" => Ok(Self::Su3),
            "su2xsu2" | "su2+su2" => Ok(Self::Su2xSu2),
            _ => Err(ClassifierError::UnsupportedGroup(s.to_string())),
        }
    }
}

/// A closed subgroup from the catalog, given by generators of its Lie
/// algebra in the basis of the ambient group's algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupDescriptor {
    pub label: &'static str,
    pub group: ClassifiedGroup,
    pub dim: usize,
    pub algebra: AlgebraSpec,
    pub generators: Vec<Vec<Q>>,
    /// Conjugacy class in the ambient group; equal classes are conjugate.
    pub class: &'static str,
    pub embedding_note: &'static str,
}

impl GroupDescriptor {
    fn span(&self) -> Mat<Q> {
        Mat::from_columns(&self.generators)
    }

    /// Generators are independent, closed under the bracket, and span an
    /// algebra with the declared dimension and derived dimension.
    pub fn is_consistent(&self) -> bool {
        let g = self.group.algebra();
        let rank = self.span().rank();
        if rank != self.dim || self.algebra.dim() != self.dim {
            return false;
        }
        let mut brackets = Vec::new();
        for x in &self.generators {
            for y in &self.generators {
                brackets.push(g.bracket(x, y));
            }
        }
        let closed = brackets.iter().all(|b| {
            let mut cols = self.generators.clone();
            cols.push(b.clone());
            Mat::from_columns(&cols).rank() == rank
        });
        let derived = if brackets.is_empty() { 0 } else { Mat::from_columns(&brackets).rank() };
        closed && derived == self.algebra.derived_dim()
    }

    /// Whether the Lie algebra of `self` lies in that of `other`.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        if self.group != other.group {
            return false;
        }
        let rank = other.span().rank();
        let mut cols = other.generators.clone();
        cols.extend(self.generators.iter().cloned());
        Mat::from_columns(&cols).rank() == rank
    }
}

fn vec_with(n: usize, terms: &[(usize, i64)]) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for &(i, c) in terms {
        v[i] = Q::from_integer(c);
    }
    v
}

fn e(n: usize, i: usize) -> Vec<Q> {
    vec_with(n, &[(i, 1)])
}

/// Every subgroup descriptor known to the classifier. In `SU2xSU2` the
/// basis is `X1, X2, X3, Y1, Y2, Y3`; in `SU3` the first three basis
/// vectors span the upper-left `su2`.
pub fn catalog() -> Vec<GroupDescriptor> {
    use AlgebraSpec::{Abelian, Su2, Sum};
    use ClassifiedGroup::{Su2xSu2, Su3};
    let diag = |i: usize| vec_with(6, &[(i, 1), (i + 3, 1)]);
    vec![
        GroupDescriptor {
            label: "SU3",
            group: Su3,
            dim: 8,
            algebra: AlgebraSpec::Su3,
            generators: (0..8).map(|i| e(8, i)).collect(),
            class: "SU3",
            embedding_note: "the whole group",
        },
        GroupDescriptor {
            label: "SU2",
            group: Su3,
            dim: 3,
            algebra: Su2,
            generators: (0..3).map(|i| e(8, i)).collect(),
            class: "SU2",
            embedding_note: "upper-left block, stabilizer of e3",
        },
        GroupDescriptor {
            label: "T1_diag",
            group: Su2xSu2,
            dim: 1,
            algebra: Abelian(1),
            generators: vec![diag(2)],
            class: "T1_diag",
            embedding_note: "X3 + Y3, diagonal in the maximal torus",
        },
        GroupDescriptor {
            label: "T1xSU2",
            group: Su2xSu2,
            dim: 4,
            algebra: Sum(vec![Abelian(1), Su2]),
            generators: vec![e(6, 2), e(6, 3), e(6, 4), e(6, 5)],
            class: "T1xSU2",
            embedding_note: "torus of the first factor times the second factor",
        },
        GroupDescriptor {
            label: "T1xSp1",
            group: Su2xSu2,
            dim: 4,
            algebra: Sum(vec![Abelian(1), Su2]),
            generators: vec![e(6, 2), e(6, 3), e(6, 4), e(6, 5)],
            class: "T1xSU2",
            embedding_note: "T1xSU2 written with Sp1 = SU2",
        },
        GroupDescriptor {
            label: "SU2xT1",
            group: Su2xSu2,
            dim: 4,
            algebra: Sum(vec![Su2, Abelian(1)]),
            generators: vec![e(6, 0), e(6, 1), e(6, 2), e(6, 5)],
            class: "SU2xT1",
            embedding_note: "first factor times the torus of the second factor",
        },
        GroupDescriptor {
            label: "Sp1xT1",
            group: Su2xSu2,
            dim: 4,
            algebra: Sum(vec![Su2, Abelian(1)]),
            generators: vec![e(6, 0), e(6, 1), e(6, 2), e(6, 5)],
            class: "SU2xT1",
            embedding_note: "SU2xT1 written with Sp1 = SU2",
        },
        GroupDescriptor {
            label: "SU2_diag",
            group: Su2xSu2,
            dim: 3,
            algebra: Su2,
            generators: (0..3).map(diag).collect(),
            class: "SU2_diag",
            embedding_note: "{(g, g)}",
        },
        GroupDescriptor {
            label: "SU2_diag_twisted",
            group: Su2xSu2,
            dim: 3,
            algebra: Su2,
            generators: vec![
                vec_with(6, &[(0, 1), (4, 1)]),
                vec_with(6, &[(1, 1), (3, -1)]),
                diag(2),
            ],
            class: "SU2_diag",
            embedding_note: "{(g, c g c^-1)} with c = exp(pi/2 Y3), which normalizes T1_diag",
        },
        GroupDescriptor {
            label: "T2",
            group: Su2xSu2,
            dim: 2,
            algebra: Abelian(2),
            generators: vec![e(6, 2), e(6, 5)],
            class: "T2",
            embedding_note: "maximal torus",
        },
    ]
}

fn catalog_ref() -> &'static [GroupDescriptor] {
    static CATALOG: OnceLock<Vec<GroupDescriptor>> = OnceLock::new();
    CATALOG.get_or_init(catalog)
}

pub fn descriptor(label: &str) -> Result<GroupDescriptor, ClassifierError> {
    catalog_ref()
        .iter()
        .find(|d| d.label == label)
        .cloned()
        .ok_or_else(|| ClassifierError::UnknownDescriptor(label.to_string()))
}

/// Effective sphere pair realising `H / K` for the catalog pairs that occur
/// in triples, as `(H, K)` labels in Borel's table.
fn sphere_realisation(h: &str, k: &str) -> Option<(&'static str, &'static str)> {
    match (h, k) {
        ("SU3", "SU2") => Some(("SU3", "SU2")),
        ("T1xSU2" | "T1xSp1" | "SU2xT1" | "Sp1xT1", "T1_diag") => Some(("U2", "U1")),
        ("SU2_diag" | "SU2_diag_twisted", "T1_diag") => Some(("SO3", "SO2")),
        ("T2", "T1_diag") => Some(("SO2", "SO1")),
        _ => None,
    }
}

/// Sphere dimension of `H / K` if the pair is in Borel's table with the
/// matching dimension count.
pub fn sphere_check(h: &GroupDescriptor, k: &GroupDescriptor) -> Option<usize> {
    if !k.is_contained_in(h) {
        return None;
    }
    let (bh, bk) = sphere_realisation(h.label, k.label)?;
    let pair = find_sphere_pair(bh, bk)?;
    (h.dim - k.dim == pair.sphere_dim).then_some(pair.sphere_dim)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TripleDescriptor {
    pub h1: GroupDescriptor,
    pub k: GroupDescriptor,
    pub h2: GroupDescriptor,
    pub admissible: bool,
    pub model: &'static str,
}

impl TripleDescriptor {
    pub fn new(h1: &str, k: &str, h2: &str, model: &'static str) -> Result<Self, ClassifierError> {
        let (h1, k, h2) = (descriptor(h1)?, descriptor(k)?, descriptor(h2)?);
        if h1.group != k.group || h2.group != k.group {
            return Err(ClassifierError::Inconsistent(format!(
                "({}, {}, {}) mixes groups",
                h1.label, k.label, h2.label
            )));
        }
        let admissible = [&h1, &k, &h2].iter().all(|d| d.is_consistent())
            && sphere_check(&h1, &k).is_some()
            && sphere_check(&h2, &k).is_some();
        Ok(Self { h1, k, h2, admissible, model })
    }

    pub fn group(&self) -> ClassifiedGroup {
        self.k.group
    }

    pub fn labels(&self) -> (&'static str, &'static str, &'static str) {
        (self.h1.label, self.k.label, self.h2.label)
    }

    pub fn sphere_dims(&self) -> [Option<usize>; 2] {
        [sphere_check(&self.h1, &self.k), sphere_check(&self.h2, &self.k)]
    }

    pub fn switched(&self) -> Self {
        Self { h1: self.h2.clone(), h2: self.h1.clone(), ..self.clone() }
    }

    /// Invariant of operations (i)-(iii): the group, the class of `K` and
    /// the unordered pair of classes of `H1`, `H2`.
    fn key(&self) -> (ClassifiedGroup, &'static str, [&'static str; 2]) {
        let mut hs = [self.h1.class, self.h2.class];
        hs.sort_unstable();
        (self.group(), self.k.class, hs)
    }
}

/// Triples related by switching `H1` and `H2`, simultaneous conjugation, or
/// conjugating one `H` by the normalizer of `K`, according to the catalog's
/// conjugacy classes.
pub fn triples_equivalent(a: &TripleDescriptor, b: &TripleDescriptor) -> Result<bool, ClassifierError> {
    for d in [&a.h1, &a.k, &a.h2, &b.h1, &b.k, &b.h2] {
        if !catalog_ref().contains(d) {
            return Err(ClassifierError::UnknownDescriptor(d.label.to_string()));
        }
    }
    Ok(a.key() == b.key())
}

/// The admissible triples for cohomogeneity-one strict nearly Kähler actions
/// of `group`, up to equivalence.
pub fn admissible_triples(group: &str) -> Result<Vec<TripleDescriptor>, ClassifierError> {
    match group.parse::<ClassifiedGroup>()? {
        ClassifiedGroup::Su3 => Ok(vec![TripleDescriptor::new("SU3", "SU2", "SU3", "S6")?]),
        ClassifiedGroup::Su2xSu2 => Ok(vec![
            TripleDescriptor::new("T1xSU2", "T1_diag", "SU2xT1", "CP3")?,
            TripleDescriptor::new("SU2_diag", "T1_diag", "SU2xT1", "S6")?,
            TripleDescriptor::new("SU2_diag", "T1_diag", "SU2_diag", "S3xS3")?,
        ]),
    }
}

/// Singular isotropy algebras containing `k` that are allowed by the sphere
/// table but ruled out for strict nearly Kähler actions.
pub fn excluded_isotropy(group: ClassifiedGroup) -> Vec<(&'static str, ReasonCode, &'static str)> {
    match group {
        ClassifiedGroup::Su3 => vec![(
            "su2+R",
            ReasonCode::AlmostComplexOrbit,
            "the normal space is the fixed set of K, so the singular orbit would be a four-dimensional almost complex submanifold",
        )],
        ClassifiedGroup::Su2xSu2 => vec![(
            "2R",
            ReasonCode::AlmostComplexOrbit,
            "the normal space is the fixed set of K, so the singular orbit would be a four-dimensional almost complex submanifold",
        )],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_consistent() {
        for d in catalog() {
            assert!(d.is_consistent(), "{}", d.label);
        }
    }

    #[test]
    fn containments() {
        let k = descriptor("T1_diag").unwrap();
        for h in ["T1xSU2", "SU2xT1", "SU2_diag", "SU2_diag_twisted", "T2"] {
            assert!(k.is_contained_in(&descriptor(h).unwrap()), "{h}");
        }
        assert!(!descriptor("SU2_diag").unwrap().is_contained_in(&descriptor("T1xSU2").unwrap()));
        assert!(!k.is_contained_in(&descriptor("SU2").unwrap()));
    }

    #[test]
    fn admissible_lists() {
        let su3 = admissible_triples("SU3").unwrap();
        assert_eq!(su3.len(), 1);
        assert_eq!(su3[0].labels(), ("SU3", "SU2", "SU3"));
        assert_eq!(su3[0].model, "S6");
        let models: Vec<_> = admissible_triples("su2xsu2").unwrap().iter().map(|t| t.model).collect();
        assert_eq!(models, ["CP3", "S6", "S3xS3"]);
        for t in su3.iter().chain(&admissible_triples("SU2xSU2").unwrap()) {
            assert!(t.admissible);
            for (h, s) in [&t.h1, &t.h2].into_iter().zip(t.sphere_dims()) {
                assert_eq!(h.dim - t.k.dim, s.unwrap());
            }
        }
        assert!(matches!(admissible_triples("e8"), Err(ClassifierError::UnsupportedGroup(_))));
    }

    #[test]
    fn sphere_dims() {
        let t = TripleDescriptor::new("T1xSU2", "T1_diag", "SU2xT1", "CP3").unwrap();
        assert_eq!(t.sphere_dims(), [Some(3), Some(3)]);
        let t = TripleDescriptor::new("SU3", "SU2", "SU3", "S6").unwrap();
        assert_eq!(t.sphere_dims(), [Some(5), Some(5)]);
    }

    #[test]
    fn equivalence_examples() {
        let a = TripleDescriptor::new("T1xSU2", "T1_diag", "SU2xT1", "CP3").unwrap();
        assert!(triples_equivalent(&a, &a.switched()).unwrap());
        let b = TripleDescriptor::new("SU2_diag", "T1_diag", "SU2_diag", "S3xS3").unwrap();
        assert!(!triples_equivalent(&a, &b).unwrap());
        let c = TripleDescriptor::new("SU2_diag", "T1_diag", "SU2_diag_twisted", "S3xS3").unwrap();
        assert!(triples_equivalent(&b, &c).unwrap());
        let s = TripleDescriptor::new("SU3", "SU2", "SU3", "S6").unwrap();
        assert!(triples_equivalent(&s, &s).unwrap());
        assert!(!triples_equivalent(&s, &a).unwrap());
    }

    #[test]
    fn equivalence_preserves_isotropy_dimensions() {
        let dims = |t: &TripleDescriptor| {
            let mut d = [t.h1.dim, t.h2.dim];
            d.sort_unstable();
            (t.k.dim, d)
        };
        let all = all_triples();
        for a in &all {
            for b in &all {
                if triples_equivalent(a, b).unwrap() {
                    assert_eq!(dims(a), dims(b));
                }
            }
        }
    }

    #[test]
    fn unknown_descriptor() {
        assert!(matches!(
            TripleDescriptor::new("SO4", "T1_diag", "SU2xT1", "S6"),
            Err(ClassifierError::UnknownDescriptor(_))
        ));
        assert!(TripleDescriptor::new("SU3", "T1_diag", "SU3", "S6").is_err());
    }

    /// Every triple over the catalog whose spheres check out.
    fn all_triples() -> Vec<TripleDescriptor> {
        let cat = catalog();
        let mut out = Vec::new();
        for k in &cat {
            for h1 in &cat {
                for h2 in &cat {
                    if h1.group != k.group || h2.group != k.group {
                        continue;
                    }
                    let t = TripleDescriptor::new(h1.label, k.label, h2.label, "").unwrap();
                    if t.admissible {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn equivalence_relation_on_catalog() {
        let all = all_triples();
        assert!(all.len() > 20);
        let n = all.len();
        let m: Vec<Vec<bool>> = all
            .iter()
            .map(|a| all.iter().map(|b| triples_equivalent(a, b).unwrap()).collect())
            .collect();
        for (i, a) in all.iter().enumerate() {
            assert!(m[i][i]);
            assert!(triples_equivalent(a, &a.switched()).unwrap());
            for j in 0..n {
                assert_eq!(m[i][j], m[j][i]);
                if m[i][j] {
                    assert!((0..n).all(|l| !m[j][l] || m[i][l]));
                }
            }
        }
    }
}
