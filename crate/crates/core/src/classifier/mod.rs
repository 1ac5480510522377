//! Classification data for cohomogeneity-one strict nearly Kähler
//! six-manifolds: Borel's sphere table, the candidate `(g, k)` pairs with
//! their exclusion verdicts, and the admissible triples with their
//! equivalence relation.

mod borel;
mod pairs;
mod triples;

pub use borel::{borel_table, find_sphere_pair, SpherePair, MAX_SPHERE_DIM};
pub use pairs::{
    enumerate_pairs, k_is_ideal, AlgebraSpec, ExclusionRule, PairCandidate, PairStatus, ReasonCode,
    PRINCIPAL_ORBIT_DIM,
};
pub use triples::{
    admissible_triples, catalog, descriptor, excluded_isotropy, sphere_check, triples_equivalent,
    ClassifiedGroup, GroupDescriptor, TripleDescriptor,
};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("unsupported group `{0}` (expected su3 or su2xsu2)")]
    UnsupportedGroup(String),
    #[error("`{0}` is not in the subgroup catalog")]
    UnknownDescriptor(String),
    #[error("inconsistent triple: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleRecord {
    #[serde(rename = "H1")]
    pub h1: String,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "H2")]
    pub h2: String,
    pub model: String,
    pub sphere_dims: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyExclusion {
    pub h: String,
    pub reason: ReasonCode,
    pub citation: String,
}

/// Serialized classification for one group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub schema: u32,
    pub group: String,
    pub triples: Vec<TripleRecord>,
    pub surviving_pairs: Vec<String>,
    pub excluded_pairs: Vec<ExclusionRule>,
    pub excluded_isotropy: Vec<IsotropyExclusion>,
    pub notes: Vec<String>,
}

fn notes(group: ClassifiedGroup) -> Vec<String> {
    match group {
        ClassifiedGroup::Su3 => vec![
            "both singular orbits are fixed points; the model is S6 = G2/SU3 restricted to SU3".into(),
        ],
        ClassifiedGroup::Su2xSu2 => vec![
            "(T1xSU2, T1_diag, SU2xT1) is the diagonal Sp1xSp1 action on CP3 = Sp2/(Sp1xU1); some statements of the result print CP2 for this case".into(),
            "SO4 = SU2xSU2/Z2 acts on S6 with triple (SO3, T1, U2), the quotient image of (SU2_diag, T1_diag, SU2xT1)".into(),
        ],
    }
}

/// The classification for `group` (`su3` or `su2xsu2`).
pub fn classify(group: &str) -> Result<Classification, ClassifierError> {
    let g: ClassifiedGroup = group.parse()?;
    let mut triples = Vec::new();
    for t in admissible_triples(group)? {
        let [s1, s2] = t.sphere_dims();
        let (Some(s1), Some(s2), true) = (s1, s2, t.admissible) else {
            return Err(ClassifierError::Inconsistent(format!("{:?} fails its sphere check", t.labels())));
        };
        let (h1, k, h2) = t.labels();
        triples.push(TripleRecord {
            h1: h1.into(),
            k: k.into(),
            h2: h2.into(),
            model: t.model.into(),
            sphere_dims: [s1, s2],
        });
    }
    let pairs = enumerate_pairs();
    Ok(Classification {
        schema: 1,
        group: g.label().into(),
        triples,
        surviving_pairs: pairs.iter().filter(|p| p.is_survivor()).map(PairCandidate::label).collect(),
        excluded_pairs: pairs
            .into_iter()
            .filter_map(|p| match p.status {
                PairStatus::Excluded(r) => Some(r),
                PairStatus::Survivor => None,
            })
            .collect(),
        excluded_isotropy: excluded_isotropy(g)
            .into_iter()
            .map(|(h, reason, citation)| IsotropyExclusion { h: h.into(), reason, citation: citation.into() })
            .collect(),
        notes: notes(g),
    })
}

impl Classification {
    /// Pretty JSON with a trailing newline; the byte layout is stable.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("classification serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_shapes() {
        let c = classify("su3").unwrap();
        assert_eq!(c.triples.len(), 1);
        assert_eq!(c.excluded_pairs.len(), 6);
        assert_eq!(c.surviving_pairs, ["(su2+su2, R)", "(su3, su2)"]);
        assert_eq!(classify("SU2xSU2").unwrap().triples.len(), 3);
        assert!(classify("e8").is_err());
    }

    #[test]
    fn json_is_stable() {
        let a = classify("su2xsu2").unwrap().to_json_string();
        let b = classify("su2xsu2").unwrap().to_json_string();
        assert_eq!(a, b);
        assert!(a.starts_with("{\n  \"schema\": 1,"));
        assert!(a.contains("\"reason\": \"J_invariant_fixed_set\""));
    }
}
