use serde::Serialize;

/// A compact group `H` acting transitively on a sphere with isotropy `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpherePair {
    pub family: &'static str,
    pub h_label: String,
    pub k_label: String,
    pub h_dim: usize,
    pub k_dim: usize,
    pub sphere_dim: usize,
}

impl SpherePair {
    pub fn is_consistent(&self) -> bool {
        self.h_dim >= self.k_dim && self.h_dim - self.k_dim == self.sphere_dim
    }
}

/// Largest sphere dimension instantiated by [`borel_table`].
pub const MAX_SPHERE_DIM: usize = 15;

fn so(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn sp(n: usize) -> usize {
    n * (2 * n + 1)
}

fn sp_label(n: usize) -> String {
    if n == 0 {
        "1".to_string()
    } else {
        format!("Sp{n}")
    }
}

/// Prefixes `base` with `Sp{n}` unless `n = 0`, where the factor is trivial.
fn sp_times(n: usize, base: &str) -> String {
    if n == 0 {
        base.to_string()
    } else {
        format!("Sp{n}{base}")
    }
}

/// Borel's list of compact connected groups transitive on spheres, every
/// family instantiated up to sphere dimension [`MAX_SPHERE_DIM`].
pub fn borel_table() -> Vec<SpherePair> {
    let mut out = Vec::new();
    let mut push = |family, h_label: String, k_label: String, h_dim, k_dim, sphere_dim| {
        if sphere_dim <= MAX_SPHERE_DIM {
            out.push(SpherePair { family, h_label, k_label, h_dim, k_dim, sphere_dim });
        }
    };
    for n in 2..=MAX_SPHERE_DIM + 1 {
        push("SO", format!("SO{n}"), format!("SO{}", n - 1), so(n), so(n - 1), n - 1);
    }
    for n in 1..=8 {
        push("U", format!("U{n}"), format!("U{}", n - 1), n * n, (n - 1) * (n - 1), 2 * n - 1);
    }
    for n in 2..=8 {
        push("SU", format!("SU{n}"), format!("SU{}", n - 1), n * n - 1, (n - 1) * (n - 1) - 1, 2 * n - 1);
    }
    for n in 1..=4 {
        push(
            "SpSp1",
            format!("Sp{n}Sp1"),
            sp_times(n - 1, "Sp1"),
            sp(n) + 3,
            sp(n - 1) + 3,
            4 * n - 1,
        );
        push(
            "SpU1",
            format!("Sp{n}U1"),
            sp_times(n - 1, "U1"),
            sp(n) + 1,
            sp(n - 1) + 1,
            4 * n - 1,
        );
        push("Sp", format!("Sp{n}"), sp_label(n - 1), sp(n), sp(n - 1), 4 * n - 1);
    }
    push("G2", "G2".into(), "SU3".into(), 14, 8, 6);
    push("Spin7", "Spin7".into(), "G2".into(), 21, 14, 7);
    push("Spin9", "Spin9".into(), "Spin7".into(), 36, 21, 15);
    out
}

/// The table entry for `(h, k)`, if any.
pub fn find_sphere_pair(h: &str, k: &str) -> Option<SpherePair> {
    borel_table().into_iter().find(|p| p.h_label == h && p.k_label == k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_families_all_consistent() {
        let t = borel_table();
        let fams: std::collections::BTreeSet<_> = t.iter().map(|p| p.family).collect();
        assert_eq!(fams.len(), 9);
        assert!(t.iter().all(SpherePair::is_consistent));
        assert!(t.iter().all(|p| p.sphere_dim <= MAX_SPHERE_DIM));
    }

    #[test]
    fn sample_rows() {
        assert_eq!(find_sphere_pair("G2", "SU3").unwrap().sphere_dim, 6);
        assert_eq!(find_sphere_pair("SU3", "SU2").unwrap().sphere_dim, 5);
        assert_eq!(find_sphere_pair("SO2", "SO1").unwrap().sphere_dim, 1);
        assert_eq!(find_sphere_pair("Spin9", "Spin7").unwrap().sphere_dim, 15);
        assert_eq!(find_sphere_pair("Sp4", "Sp3").unwrap().sphere_dim, 15);
        assert!(find_sphere_pair("SO17", "SO16").is_none());
        assert!(find_sphere_pair("U9", "U8").is_none());
    }
}
