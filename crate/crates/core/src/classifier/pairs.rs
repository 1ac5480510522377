use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::lie::{build_algebra, AlgebraName, LieAlgebraModel};
use crate::Q;

/// Compact Lie algebra built from su(2), su(3) and abelian summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSpec {
    Su2,
    Su3,
    Abelian(usize),
    Sum(Vec<AlgebraSpec>),
}

impl AlgebraSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::Su2 => 3,
            Self::Su3 => 8,
            Self::Abelian(n) => *n,
            Self::Sum(parts) => parts.iter().map(Self::dim).sum(),
        }
    }

    /// Dimension of the derived algebra `[g, g]`.
    pub fn derived_dim(&self) -> usize {
        match self {
            Self::Abelian(_) => 0,
            Self::Sum(parts) => parts.iter().map(Self::derived_dim).sum(),
            s => s.dim(),
        }
    }

    pub fn build(&self) -> LieAlgebraModel<Q> {
        match self {
            Self::Su2 => build_algebra(AlgebraName::Su2).expect("su2 is built in"),
            Self::Su3 => build_algebra(AlgebraName::Su3).expect("su3 is built in"),
            Self::Abelian(n) => LieAlgebraModel::abelian(*n),
            Self::Sum(parts) => {
                let mut it = parts.iter().map(Self::build);
                let first = it.next().unwrap_or_else(|| LieAlgebraModel::abelian(0));
                it.fold(first, |acc, p| acc.direct_sum(&p, "")).renamed(self.to_string())
            }
        }
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Su2 => f.write_str("su2"),
            Self::Su3 => f.write_str("su3"),
            Self::Abelian(0) => f.write_str("0"),
            Self::Abelian(1) => f.write_str("R"),
            Self::Abelian(n) => write!(f, "{n}R"),
            Self::Sum(parts) => {
                let labels: Vec<String> = parts.iter().map(ToString::to_string).collect();
                f.write_str(&labels.join("+"))
            }
        }
    }
}

/// Closed set of reasons a candidate pair is ruled out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonCode {
    /// Computed: `k` is a nonzero ideal, so the action is not almost effective.
    KIsIdeal,
    /// The `K`-fixed subspace of the orbit tangent space would be `J`-invariant.
    #[serde(rename = "J_invariant_fixed_set")]
    JInvariantFixedSet,
    /// Both singular orbits would be tori, forcing an infinite fundamental group.
    #[serde(rename = "infinite_pi1")]
    InfinitePi1,
    /// Slice representations force torus singular orbits.
    TorusSingularOrbits,
    /// A singular orbit would be a four-dimensional almost complex submanifold.
    AlmostComplexOrbit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExclusionRule {
    pub pair: String,
    pub reason: ReasonCode,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PairStatus {
    Survivor,
    Excluded(ExclusionRule),
}

/// A candidate `(g, k)` with `k` given by generators in the basis of `g`.
#[derive(Clone, Debug)]
pub struct PairCandidate {
    pub g: AlgebraSpec,
    pub k: AlgebraSpec,
    pub k_generators: Vec<Vec<Q>>,
    pub status: PairStatus,
}

impl PairCandidate {
    pub fn label(&self) -> String {
        format!("({}, {})", self.g, self.k)
    }

    pub fn is_survivor(&self) -> bool {
        self.status == PairStatus::Survivor
    }

    /// `dim g - dim k`, measured on the built algebra and the rank of the
    /// generators.
    pub fn orbit_dim(&self) -> usize {
        let g = self.g.build();
        g.dim() - crate::matrix::Mat::from_columns(&self.k_generators).rank()
    }
}

/// Principal orbit dimension of every candidate.
pub const PRINCIPAL_ORBIT_DIM: usize = 5;

fn unit(n: usize, terms: &[usize]) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for &i in terms {
        v[i] = Q::one();
    }
    v
}

struct Candidate {
    g: AlgebraSpec,
    k: AlgebraSpec,
    generators: fn() -> Vec<Vec<Q>>,
    argued: Option<(ReasonCode, &'static str)>,
}

fn candidates() -> Vec<Candidate> {
    use AlgebraSpec::*;
    vec![
        Candidate {
            g: Sum(vec![Su2, Abelian(2)]),
            k: Abelian(0),
            generators: Vec::new,
            argued: Some((
                ReasonCode::TorusSingularOrbits,
                "ruled out by the same slice-representation argument as (su2+3R, R): both singular orbits are tori",
            )),
        },
        Candidate {
            g: Abelian(5),
            k: Abelian(0),
            generators: Vec::new,
            argued: Some((
                ReasonCode::InfinitePi1,
                "g abelian: both singular orbits are T^4 and Seifert-van Kampen makes pi_1(M) infinite",
            )),
        },
        Candidate {
            g: Sum(vec![Su2, Su2]),
            k: Abelian(1),
            generators: || vec![unit(6, &[2, 5])],
            argued: None,
        },
        Candidate {
            g: Sum(vec![Su2, Abelian(3)]),
            k: Abelian(1),
            generators: || vec![unit(6, &[2, 3])],
            argued: Some((
                ReasonCode::TorusSingularOrbits,
                "k projects nontrivially to su2; the slice representation forces (h, k) = (so3, R) or (u2, R) and both singular orbits are tori",
            )),
        },
        Candidate {
            g: Abelian(6),
            k: Abelian(1),
            generators: || vec![unit(6, &[0])],
            argued: None,
        },
        Candidate {
            g: Sum(vec![Su2, Su2, Abelian(2)]),
            k: Su2,
            generators: || vec![unit(8, &[0, 3]), unit(8, &[1, 4]), unit(8, &[2, 5])],
            argued: Some((
                ReasonCode::JInvariantFixedSet,
                "the fixed point set of K on the orbit tangent space is three dimensional and J-invariant",
            )),
        },
        Candidate {
            g: Sum(vec![Su2, Abelian(5)]),
            k: Su2,
            generators: || vec![unit(8, &[0]), unit(8, &[1]), unit(8, &[2])],
            argued: None,
        },
        Candidate {
            g: Su3,
            k: Su2,
            generators: || vec![unit(8, &[0]), unit(8, &[1]), unit(8, &[2])],
            argued: None,
        },
    ]
}

/// Whether the span of `generators` is a nonzero ideal of `g`.
pub fn k_is_ideal(g: &LieAlgebraModel<Q>, generators: &[Vec<Q>]) -> bool {
    !generators.is_empty() && g.is_ideal(generators)
}

/// All compact `(g, k)` with `k ∈ {0, R, su2}` and five-dimensional
/// principal orbits, each with its verdict. The ideal test is computed from
/// the structure constants; the remaining verdicts are recorded arguments.
pub fn enumerate_pairs() -> Vec<PairCandidate> {
    candidates()
        .into_iter()
        .map(|c| {
            let gens = (c.generators)();
            let label = format!("({}, {})", c.g, c.k);
            let status = if k_is_ideal(&c.g.build(), &gens) {
                PairStatus::Excluded(ExclusionRule {
                    pair: label,
                    reason: ReasonCode::KIsIdeal,
                    citation: "k is an ideal of g, so the principal isotropy acts trivially and the action is not almost effective".into(),
                })
            } else if let Some((reason, citation)) = c.argued {
                PairStatus::Excluded(ExclusionRule { pair: label, reason, citation: citation.into() })
            } else {
                PairStatus::Survivor
            };
            PairCandidate { g: c.g, k: c.k, k_generators: gens, status }
        })
        .collect()
}
