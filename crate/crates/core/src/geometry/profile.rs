use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::jet::Jet;
use crate::scalar::Real;

use super::GeometryError;

/// A smooth function of the geodesic parameter, evaluated as a second-order
/// jet so that derivatives are exact.
#[derive(Clone)]
pub struct Profile<T> {
    f: Arc<dyn Fn(Jet<T>) -> Jet<T> + Send + Sync>,
}

impl<T: Real> Profile<T> {
    pub fn new(f: impl Fn(Jet<T>) -> Jet<T> + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn constant(c: T) -> Self {
        Self::new(move |_| Jet::constant(c))
    }

    /// `c0 + c1 sin(w t + phase)`.
    pub fn sinusoid(c0: T, c1: T, w: T, phase: T) -> Self {
        Self::new(move |t| (t * w + phase).sin() * c1 + c0)
    }

    pub fn eval(&self, t: T) -> Jet<T> {
        (self.f)(Jet::variable(t))
    }

    /// Composition with a jet argument, used for reparametrizations.
    pub fn eval_jet(&self, t: Jet<T>) -> Jet<T> {
        (self.f)(t)
    }

    /// `t ↦ self(t / s) · c`.
    fn rescaled(&self, s: T, c: T) -> Self {
        let inner = self.clone();
        Self::new(move |t| inner.eval_jet(t.scale(s.recip())).scale(c))
    }

    /// `t ↦ self(t + shift)`.
    pub fn shifted(&self, shift: T) -> Self {
        let inner = self.clone();
        Self::new(move |t| inner.eval_jet(t + shift))
    }
}

/// Unit coefficient vector `(cos θ, sin θ cos φ, sin θ sin φ)` built from two
/// angle profiles.
pub fn sphere_coefficients<T: Real>(theta: Profile<T>, phi: Profile<T>) -> [Profile<T>; 3] {
    let (t1, t2, p2, t3, p3) = (theta.clone(), theta.clone(), phi.clone(), theta, phi);
    [
        Profile::new(move |t| t1.eval_jet(t).cos()),
        Profile::new(move |t| t2.eval_jet(t).sin() * p2.eval_jet(t).cos()),
        Profile::new(move |t| t3.eval_jet(t).sin() * p3.eval_jet(t).sin()),
    ]
}

impl<T> fmt::Debug for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Profile(..)")
    }
}

/// Which orbit model a profile set describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    /// Scales `(h, f)` on `(a, n)`; `J_t = Σ a_i J_i` with a unit coefficient
    /// vector.
    Su3,
    /// Scales `(f, h1, h2)` on `(a, n1, n2)`; constant invariant `J` on `n`.
    Su2Su2,
}

/// Metric and almost complex structure data along the normal geodesic.
///
/// `scales[b]` multiplies `B` on the b-th block of `m` (so the metric there is
/// `scales[b]² B`), in the block order of the split. `coefficients` weight
/// the split's complex structures on `n`.
#[derive(Clone, Debug)]
pub struct ProfileSet<T> {
    pub kind: ProfileKind,
    pub scales: Vec<Profile<T>>,
    pub coefficients: Vec<Profile<T>>,
    /// Homothety parameter; only meaningful for closed-form solutions.
    pub k: T,
    /// Open interval of regular orbits.
    pub domain: (T, T),
}

/// Values of all profiles at one parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileValues<T> {
    pub t: T,
    pub scales: Vec<Jet<T>>,
    pub coefficients: Vec<Jet<T>>,
}

impl<T: Real> ProfileValues<T> {
    /// Scale on the `a` block.
    pub fn a_scale(&self) -> Jet<T> {
        self.scales[0]
    }
}

impl<T: Real> ProfileSet<T> {
    /// `g = dt² + h² B|a + f² B|n`, `J_t = Σ a_i J_i`.
    pub fn su3(
        f: Profile<T>,
        h: Profile<T>,
        a: [Profile<T>; 3],
        k: T,
        domain: (T, T),
    ) -> Self {
        Self {
            kind: ProfileKind::Su3,
            scales: vec![h, f],
            coefficients: a.to_vec(),
            k,
            domain,
        }
    }

    /// `g = dt² + f² B|a + h1² B|n1 + h2² B|n2`; `coefficients` select one
    /// of the invariant complex structures of the split.
    pub fn su2su2(
        f: Profile<T>,
        h1: Profile<T>,
        h2: Profile<T>,
        coefficients: [T; 2],
        domain: (T, T),
    ) -> Self {
        Self {
            kind: ProfileKind::Su2Su2,
            scales: vec![f, h1, h2],
            coefficients: coefficients.iter().map(|&c| Profile::constant(c)).collect(),
            k: T::one(),
            domain,
        }
    }

    pub fn contains(&self, t: T) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    pub fn eval(&self, t: T) -> ProfileValues<T> {
        ProfileValues {
            t,
            scales: self.scales.iter().map(|p| p.eval(t)).collect(),
            coefficients: self.coefficients.iter().map(|p| p.eval(t)).collect(),
        }
    }

    /// Evaluates and checks positivity of every scale.
    pub fn eval_regular(&self, t: T) -> Result<ProfileValues<T>, GeometryError> {
        let v = self.eval(t);
        if let Some(bad) = v.scales.iter().find(|s| !(s.value > T::zero())) {
            return Err(GeometryError::Degenerate {
                t: t.to_f64_lossy(),
                scale: bad.value.to_f64_lossy(),
            });
        }
        Ok(v)
    }

    /// `|Σ a_i²  - 1|` at `t`.
    pub fn unit_defect(&self, t: T) -> T {
        let v = self.eval(t);
        let n2 = v
            .coefficients
            .iter()
            .fold(T::zero(), |acc, a| acc + a.value * a.value);
        (n2 - T::one()).abs()
    }

    /// The data of the metric `s² g`: arc length becomes `s t`, every scale
    /// is multiplied by `s` and `k` is divided by `s`.
    pub fn homothety(&self, s: T) -> Self {
        Self {
            kind: self.kind,
            scales: self.scales.iter().map(|p| p.rescaled(s, s)).collect(),
            coefficients: self
                .coefficients
                .iter()
                .map(|p| p.rescaled(s, T::one()))
                .collect(),
            k: self.k / s,
            domain: (self.domain.0 * s, self.domain.1 * s),
        }
    }

    /// The data translated so that the new parameter `0` is the old `shift`.
    pub fn shifted(&self, shift: T) -> Self {
        Self {
            kind: self.kind,
            scales: self.scales.iter().map(|p| p.shifted(shift)).collect(),
            coefficients: self.coefficients.iter().map(|p| p.shifted(shift)).collect(),
            k: self.k,
            domain: (self.domain.0 - shift, self.domain.1 - shift),
        }
    }
}

/// Parameter interval used by the random profile sets.
pub const RANDOM_DOMAIN: (f64, f64) = (-2.0, 2.0);

fn random_positive(rng: &mut impl Rng) -> Profile<f64> {
    Profile::sinusoid(
        rng.random_range(0.8..1.6),
        rng.random_range(0.0..0.4),
        rng.random_range(0.3..2.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

fn random_angle(rng: &mut impl Rng) -> Profile<f64> {
    Profile::sinusoid(
        rng.random_range(-1.5..1.5),
        rng.random_range(0.0..1.0),
        rng.random_range(0.3..2.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

impl ProfileSet<f64> {
    /// Positive scales and a moving unit coefficient vector; generally not
    /// a nearly Kähler solution.
    pub fn random_su3(rng: &mut impl Rng) -> Self {
        let f = random_positive(rng);
        let h = random_positive(rng);
        let a = sphere_coefficients(random_angle(rng), random_angle(rng));
        Self::su3(f, h, a, 1.0, RANDOM_DOMAIN)
    }

    /// Positive scales with one of the four unit invariant structures.
    pub fn random_su2su2(rng: &mut impl Rng) -> Self {
        let coefficients = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]][rng.random_range(0..4)];
        let (f, h1, h2) = (random_positive(rng), random_positive(rng), random_positive(rng));
        Self::su2su2(f, h1, h2, coefficients, RANDOM_DOMAIN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homothety_rescales_values_and_derivatives() {
        let p: ProfileSet<f64> = ProfileSet::su2su2(
            Profile::sinusoid(1.0, 0.3, 2.0, 0.1),
            Profile::constant(1.0),
            Profile::constant(2.0),
            [1.0, 0.0],
            (-1.0, 1.0),
        );
        let q = p.homothety(2.0);
        let (a, b) = (p.eval(0.3).scales[0], q.eval(0.6).scales[0]);
        assert!((b.value - 2.0 * a.value).abs() < 1e-15);
        assert!((b.d1 - a.d1).abs() < 1e-15);
        assert!((b.d2 - 0.5 * a.d2).abs() < 1e-15);
        assert_eq!(q.domain, (-2.0, 2.0));
    }

    #[test]
    fn degenerate_scale_is_reported() {
        let p = ProfileSet::su2su2(
            Profile::new(|t: Jet<f64>| t),
            Profile::constant(1.0),
            Profile::constant(1.0),
            [1.0, 0.0],
            (-1.0, 1.0),
        );
        assert!(p.eval_regular(0.5).is_ok());
        assert!(matches!(p.eval_regular(0.0), Err(GeometryError::Degenerate { .. })));
    }
}
