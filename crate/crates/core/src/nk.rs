//! The nearly Kähler conditions for the su(3) model, the closed-form
//! solution family, and an independent integrator for the reduced ODE.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Profile, ProfileKind, ProfileSet};
use crate::jet::Jet;
use crate::scalar::Real;

/// Scales at or below this value are treated as a collapsed orbit.
pub const DOMAIN_EPS: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NkError {
    #[error("scale functions must be positive (t = {t}, f = {f}, h = {h})")]
    NonPositive { t: f64, f: f64, h: f64 },
    #[error("(A² + B²) k² = 1 violated by {0}")]
    Constraint(f64),
    #[error("k must be nonzero")]
    ZeroK,
    #[error("initial data off the first integral 12 f'² + k² f² = 1 by {0}")]
    InitialData(f64),
    #[error("invalid integration request: {0}")]
    Request(String),
    #[error("profiles are not of su3 type")]
    Kind,
}

/// Residuals of the nearly Kähler system at one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NKResidual<T> {
    /// `(h / 4f²) a1 + f'/f`
    pub r_b2_0: T,
    /// `a_i' - (f'/f) a_i - (h / 4f²) δ_i1`
    pub r_b2: [T; 3],
    /// `a_j (3h² / 2f² - 2)` for `j = 2, 3`
    pub r_b3: [T; 2],
    /// `a1² + a2² + a3² - 1`
    pub r_norm: T,
}

impl<T: Real> NKResidual<T> {
    pub fn max_abs(&self) -> T {
        let mut m = self.r_b2_0.abs().max(self.r_norm.abs());
        for r in self.r_b2.iter().chain(&self.r_b3) {
            m = m.max(r.abs());
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.r_b2_0.is_finite()
            && self.r_norm.is_finite()
            && self.r_b2.iter().chain(&self.r_b3).all(|r| r.is_finite())
    }
}

struct Su3Values<T> {
    f: Jet<T>,
    h: Jet<T>,
    a: [Jet<T>; 3],
}

fn su3_values<T: Real>(profiles: &ProfileSet<T>, t: T) -> Result<Su3Values<T>, NkError> {
    if profiles.kind != ProfileKind::Su3 {
        return Err(NkError::Kind);
    }
    let v = profiles.eval(t);
    let (h, f) = (v.scales[0], v.scales[1]);
    if !(f.value > T::zero() && h.value > T::zero()) {
        return Err(NkError::NonPositive {
            t: t.to_f64_lossy(),
            f: f.value.to_f64_lossy(),
            h: h.value.to_f64_lossy(),
        });
    }
    Ok(Su3Values {
        f,
        h,
        a: [v.coefficients[0], v.coefficients[1], v.coefficients[2]],
    })
}

pub fn nk_residual<T: Real>(profiles: &ProfileSet<T>, t: T) -> Result<NKResidual<T>, NkError> {
    let Su3Values { f, h, a } = su3_values(profiles, t)?;
    let c = h.value / (T::lit(4.0) * f.value * f.value);
    let lf = f.d1 / f.value;
    let b3 = T::lit(1.5) * h.value * h.value / (f.value * f.value) - T::lit(2.0);
    let r_b2 = [
        a[0].d1 - lf * a[0].value - c,
        a[1].d1 - lf * a[1].value,
        a[2].d1 - lf * a[2].value,
    ];
    Ok(NKResidual {
        r_b2_0: c * a[0].value + lf,
        r_b2,
        r_b3: [a[1].value * b3, a[2].value * b3],
        r_norm: a.iter().fold(T::zero(), |s, x| s + x.value * x.value) - T::one(),
    })
}

/// Residuals of the reduced relations
/// `a1 + √12 f'`, `a2 - k f`, `a3`, `h - (2/√3) f`,
/// `f'² - f f'' - 1/12` and `12 f'² + k² f² - 1`, with `k` taken from the
/// profile set.
pub fn reduced_system_check<T: Real>(profiles: &ProfileSet<T>, t: T) -> Result<[T; 6], NkError> {
    let Su3Values { f, h, a } = su3_values(profiles, t)?;
    let k = profiles.k;
    let s12 = T::lit(12.0).sqrt();
    let twelve = T::lit(12.0);
    Ok([
        a[0].value + s12 * f.d1,
        a[1].value - k * f.value,
        a[2].value,
        h.value - T::lit(2.0) / T::lit(3.0).sqrt() * f.value,
        f.d1 * f.d1 - f.value * f.d2 - twelve.recip(),
        twelve * f.d1 * f.d1 + k * k * f.value * f.value - T::one(),
    ])
}

/// `f(t) = A cos(k t / √12) + B sin(k t / √12)` with `(A² + B²) k² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolutionParams<T> {
    pub a: T,
    pub b: T,
    pub k: T,
}

impl<T: Real> SolutionParams<T> {
    /// The canonical representative `A = 1/|k|, B = 0`.
    pub fn canonical(k: T) -> Result<Self, NkError> {
        if k == T::zero() || !k.is_finite() {
            return Err(NkError::ZeroK);
        }
        Ok(Self {
            a: k.abs().recip(),
            b: T::zero(),
            k,
        })
    }

    /// Phase form: `A = cos φ / |k|`, `B = sin φ / |k|`.
    pub fn from_phase(k: T, phi: T) -> Result<Self, NkError> {
        if k == T::zero() || !k.is_finite() {
            return Err(NkError::ZeroK);
        }
        let r = k.abs().recip();
        Ok(Self {
            a: r * phi.cos(),
            b: r * phi.sin(),
            k,
        })
    }

    pub fn constraint_defect(&self) -> T {
        ((self.a * self.a + self.b * self.b) * self.k * self.k - T::one()).abs()
    }

    pub fn validate(&self) -> Result<(), NkError> {
        if self.k == T::zero() {
            return Err(NkError::ZeroK);
        }
        let d = self.constraint_defect();
        if !(d <= T::lit(1e-12)) {
            return Err(NkError::Constraint(d.to_f64_lossy()));
        }
        Ok(())
    }

    /// `k / √12`.
    pub fn omega(&self) -> T {
        self.k / T::lit(12.0).sqrt()
    }

    /// Parameter at which `f` attains its maximum `1/|k|`.
    pub fn peak(&self) -> T {
        self.b.atan2(self.a) / self.omega()
    }

    /// Half-width `√3 π / |k|` of the interval around the peak where `f > 0`.
    pub fn half_width(&self) -> T {
        T::lit(3.0).sqrt() * T::PI() / self.k.abs()
    }

    pub fn f(&self, t: Jet<T>) -> Jet<T> {
        let x = t.scale(self.omega());
        x.cos().scale(self.a) + x.sin().scale(self.b)
    }

    pub fn f_prime(&self, t: Jet<T>) -> Jet<T> {
        let w = self.omega();
        let x = t.scale(w);
        (x.cos().scale(self.b) - x.sin().scale(self.a)).scale(w)
    }
}

/// Profiles of the closed-form solution: `h = (2/√3) f`, `a1 = -√12 f'`,
/// `a2 = k f`, `a3 = 0`; `u = 1/(2h)` follows from the frame.
pub fn closed_form<T: Real>(params: SolutionParams<T>) -> Result<ProfileSet<T>, NkError> {
    params.validate()?;
    let p = params;
    let f = Profile::new(move |t| p.f(t));
    let c = T::lit(2.0) / T::lit(3.0).sqrt();
    let h = Profile::new(move |t| p.f(t).scale(c));
    let s12 = -T::lit(12.0).sqrt();
    let a1 = Profile::new(move |t| p.f_prime(t).scale(s12));
    let a2 = Profile::new(move |t| p.f(t).scale(p.k));
    let a3 = Profile::constant(T::zero());
    let (mid, hw) = (p.peak(), p.half_width());
    Ok(ProfileSet::su3(f, h, [a1, a2, a3], p.k, (mid - hw, mid + hw)))
}

/// Canonical parameters together with the parameter shift relating them:
/// `f_input(t) = f_canonical(t + shift)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Reparametrization<T> {
    pub params: SolutionParams<T>,
    pub shift: T,
}

/// Moves a solution into the canonical gauge `A = 1/|k|, B = 0` by a
/// translation of the geodesic parameter; `k` is unchanged.
pub fn reparametrize<T: Real>(params: SolutionParams<T>) -> Result<Reparametrization<T>, NkError> {
    params.validate()?;
    let phase = params.b.atan2(params.a);
    Ok(Reparametrization {
        params: SolutionParams::canonical(params.k)?,
        shift: -phase / params.omega(),
    })
}

/// One row of a sampled solution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleRow<T> {
    pub t: T,
    pub f: T,
    pub fp: T,
    pub h: T,
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub u: T,
}

impl<T: Real> SampleRow<T> {
    pub fn from_profiles(profiles: &ProfileSet<T>, t: T) -> Self {
        let v = profiles.eval(t);
        let (h, f) = (v.scales[0], v.scales[1]);
        Self {
            t,
            f: f.value,
            fp: f.d1,
            h: h.value,
            a1: v.coefficients[0].value,
            a2: v.coefficients[1].value,
            a3: v.coefficients[2].value,
            u: (T::lit(2.0) * h.value).recip(),
        }
    }
}

/// `n` equispaced parameters covering `fraction` of the domain, centred.
pub fn grid<T: Real>(domain: (T, T), fraction: T, n: usize) -> Vec<T> {
    let mid = (domain.0 + domain.1) / T::lit(2.0);
    let half = (domain.1 - domain.0) / T::lit(2.0) * fraction;
    if n == 1 {
        return vec![mid];
    }
    (0..n)
        .map(|i| mid - half + T::lit(2.0) * half * T::lit(i as f64) / T::lit((n - 1) as f64))
        .collect()
}

pub fn sample<T: Real>(profiles: &ProfileSet<T>, ts: &[T]) -> Vec<SampleRow<T>> {
    ts.iter().map(|&t| SampleRow::from_profiles(profiles, t)).collect()
}

/// CSV with header `t,f,fp,h,a1,a2,a3,u`.
pub fn rows_to_csv(rows: &[SampleRow<f64>]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "f", "fp", "h", "a1", "a2", "a3", "u"])?;
    for r in rows {
        w.write_record(
            [r.t, r.f, r.fp, r.h, r.a1, r.a2, r.a3, r.u]
                .iter()
                .map(|x| format!("{x:.16e}")),
        )?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Result of integrating `f'' = (f'² - 1/12) / f` with fixed-step RK4.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory<T> {
    pub k: T,
    /// `(t, f, f')` samples, one per step including the initial point.
    pub samples: Vec<(T, T, T)>,
    /// `max |I(t) - I(t0)|` for `I = 12 f'² + k² f²`.
    pub first_integral_drift: T,
    /// Parameter at which `f` fell to `DOMAIN_EPS`, if it did.
    pub truncated_at: Option<T>,
}

impl<T: Real> Trajectory<T> {
    /// Rows with `h, a, u` reconstructed from the reduced relations.
    pub fn rows(&self) -> Vec<SampleRow<T>> {
        let c = T::lit(2.0) / T::lit(3.0).sqrt();
        let s12 = T::lit(12.0).sqrt();
        self.samples
            .iter()
            .map(|&(t, f, fp)| SampleRow {
                t,
                f,
                fp,
                h: c * f,
                a1: -s12 * fp,
                a2: self.k * f,
                a3: T::zero(),
                u: (T::lit(2.0) * c * f).recip(),
            })
            .collect()
    }
}

pub fn integrate_ode<T: Real>(
    f0: T,
    fp0: T,
    k: T,
    t_span: (T, T),
    step: T,
) -> Result<Trajectory<T>, NkError> {
    if !(f0 > T::zero()) {
        return Err(NkError::Request("f0 must be positive".into()));
    }
    if !(step > T::zero()) || !(t_span.1 > t_span.0) {
        return Err(NkError::Request("need step > 0 and t1 > t0".into()));
    }
    let twelve = T::lit(12.0);
    let integral = |f: T, fp: T| twelve * fp * fp + k * k * f * f;
    let i0 = integral(f0, fp0);
    let tol = T::lit(1e-10).max(T::epsilon() * T::lit(64.0));
    if (i0 - T::one()).abs() > tol {
        return Err(NkError::InitialData((i0 - T::one()).to_f64_lossy()));
    }
    let inv12 = twelve.recip();
    let rhs = |f: T, fp: T| (fp, (fp * fp - inv12) / f);
    let n = ((t_span.1 - t_span.0) / step).round().to_usize().unwrap_or(0).max(1);
    let h = (t_span.1 - t_span.0) / T::lit(n as f64);
    let half = T::lit(0.5);
    let eps = T::lit(DOMAIN_EPS);

    let (mut f, mut fp) = (f0, fp0);
    let mut samples = Vec::with_capacity(n + 1);
    samples.push((t_span.0, f, fp));
    let mut drift = T::zero();
    let mut truncated_at = None;
    for i in 1..=n {
        let (k1f, k1p) = rhs(f, fp);
        let (k2f, k2p) = rhs(f + half * h * k1f, fp + half * h * k1p);
        let (k3f, k3p) = rhs(f + half * h * k2f, fp + half * h * k2p);
        let (k4f, k4p) = rhs(f + h * k3f, fp + h * k3p);
        let sixth = h / T::lit(6.0);
        let nf = f + sixth * (k1f + T::lit(2.0) * k2f + T::lit(2.0) * k3f + k4f);
        let np = fp + sixth * (k1p + T::lit(2.0) * k2p + T::lit(2.0) * k3p + k4p);
        let t = t_span.0 + h * T::lit(i as f64);
        if !(nf > eps) || !nf.is_finite() {
            truncated_at = Some(t);
            break;
        }
        f = nf;
        fp = np;
        drift = drift.max((integral(f, fp) - i0).abs());
        samples.push((t, f, fp));
    }
    Ok(Trajectory {
        k,
        samples,
        first_integral_drift: drift,
        truncated_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Profile;

    fn constant_profiles(a: [f64; 3]) -> ProfileSet<f64> {
        ProfileSet::su3(
            Profile::constant(1.0),
            Profile::constant(1.0),
            a.map(Profile::constant),
            1.0,
            (-1.0, 1.0),
        )
    }

    #[test]
    fn constant_profiles_residual_by_hand() {
        // f = h = 1, f' = 0, a = (0, 0, 1): h/4f² = 1/4, 3h²/2f² - 2 = -1/2
        let r = nk_residual(&constant_profiles([0.0, 0.0, 1.0]), 0.0).unwrap();
        assert_eq!(r.r_b2_0, 0.0);
        assert_eq!(r.r_b2, [-0.25, 0.0, 0.0]);
        assert_eq!(r.r_b3, [0.0, -0.5]);
        assert_eq!(r.r_norm, 0.0);
    }

    #[test]
    fn zero_coefficients_violate_unit_sphere_by_one() {
        let r = nk_residual(&constant_profiles([0.0; 3]), 0.3).unwrap();
        assert_eq!(r.r_norm, -1.0);
    }

    #[test]
    fn stationary_f_with_a1_reports_a1() {
        let r = reduced_system_check(&constant_profiles([0.7, 0.0, 0.0]), 0.0).unwrap();
        assert_eq!(r[0], 0.7);
    }

    #[test]
    fn canonical_unit_k() {
        let p = closed_form(SolutionParams::canonical(1.0).unwrap()).unwrap();
        let v = p.eval(0.0);
        assert_eq!(v.scales[1].value, 1.0);
        assert_eq!(
            [v.coefficients[0].value, v.coefficients[1].value, v.coefficients[2].value],
            [0.0, 1.0, 0.0]
        );
        let hw = 3f64.sqrt() * std::f64::consts::PI;
        assert!((p.domain.0 + hw).abs() < 1e-14 && (p.domain.1 - hw).abs() < 1e-14);
    }

    #[test]
    fn k_two_starts_at_one_half() {
        let p = closed_form(SolutionParams::canonical(2.0).unwrap()).unwrap();
        assert_eq!(p.eval(0.0).scales[1].value, 0.5);
    }

    #[test]
    fn constraint_enforced() {
        let bad = SolutionParams { a: 1.0, b: 1.0, k: 1.0 };
        assert!(matches!(closed_form(bad), Err(NkError::Constraint(_))));
        assert!(SolutionParams::canonical(0.0).is_err());
    }

    #[test]
    fn reparametrize_quarter_phase() {
        let p = SolutionParams { a: 0.0, b: 1.0, k: 1.0 };
        let r = reparametrize(p).unwrap();
        let expected = -std::f64::consts::FRAC_PI_2 * 12f64.sqrt();
        assert!((r.shift - expected).abs() < 1e-14);
        assert_eq!(r.params.k, 1.0);
        let canon = SolutionParams::canonical(1.0).unwrap();
        assert_eq!(reparametrize(canon).unwrap().shift, 0.0);
    }

    #[test]
    fn integrator_rejects_inconsistent_start() {
        assert!(matches!(
            integrate_ode(1.0, 0.1, 1.0, (0.0, 1.0), 1e-3),
            Err(NkError::InitialData(_))
        ));
        assert!(integrate_ode(-1.0, 0.0, 1.0, (0.0, 1.0), 1e-3).is_err());
    }

    #[test]
    fn integrator_flags_collapse() {
        let tr = integrate_ode(1.0, 0.0, 1.0, (0.0, 6.0), 1e-3).unwrap();
        let end = tr.truncated_at.expect("f reaches zero before 6");
        let zero = 3f64.sqrt() * std::f64::consts::PI;
        assert!((end - zero).abs() < 1e-2, "{end}");
        // decreasing on the way down
        assert!(tr.samples.windows(2).skip(1).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let p = closed_form(SolutionParams::canonical(1.0).unwrap()).unwrap();
        let rows = sample(&p, &grid(p.domain, 0.8, 3));
        let csv = rows_to_csv(&rows).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,f,fp,h,a1,a2,a3,u");
        assert_eq!(lines.len(), 4);
    }
}
