//! The quaternionic Heisenberg group `ℍ × Im(ℍ)`.
//!
//! Group law `(ζ₁, v₁)(ζ₂, v₂) = (ζ₁ + ζ₂, v₁ + v₂ + 2 Im(ζ̄₂ ζ₁))`, the
//! Korányi gauge `K(ζ, v) = |−|ζ|² + v|^{1/2}`, and the left-invariant Cygan
//! metric `ρ₀(p, q) = K(q⁻¹ p)`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::tol;

/// A finite boundary point `(ζ, v)`; `v` is always purely imaginary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct HeisPoint {
    zeta: Quaternion,
    v: Quaternion,
}

#[derive(Deserialize)]
struct RawPoint {
    zeta: Quaternion,
    v: Quaternion,
}

impl TryFrom<RawPoint> for HeisPoint {
    type Error = Error;
    fn try_from(r: RawPoint) -> Result<Self> {
        HeisPoint::new(r.zeta, r.v)
    }
}

impl HeisPoint {
    pub const ORIGIN: Self = Self {
        zeta: Quaternion::ZERO,
        v: Quaternion::ZERO,
    };

    /// Rejects `v` whose real part exceeds the imaginary tolerance; a
    /// tolerated real part is zeroed.
    pub fn new(zeta: Quaternion, v: Quaternion) -> Result<Self> {
        if v.w.abs() > tol::IMAGINARY * v.norm().max(1.0) {
            return Err(Error::NotPurelyImaginary(v.w));
        }
        if !zeta.is_finite() || !v.is_finite() {
            return Err(Error::InvalidArgument("non-finite coordinate".into()));
        }
        Ok(Self::from_parts(zeta, v.im()))
    }

    /// Builds from `ζ` and the imaginary part of `v`, so the invariant holds
    /// by construction.
    pub fn from_parts(zeta: Quaternion, v: Quaternion) -> Self {
        let p = Self { zeta, v: v.im() };
        debug_assert!(p.gauge_formulas_agree(), "gauge formulas disagree for {p:?}");
        p
    }

    /// `(ζ, vx i + vy j + vz k)`.
    pub fn from_components(zeta: [f64; 4], v: [f64; 3]) -> Self {
        Self::from_parts(
            Quaternion::from_array(zeta),
            Quaternion::imaginary(v[0], v[1], v[2]),
        )
    }

    /// Horizontal point `(ζ, 0)`.
    pub fn horizontal(zeta: Quaternion) -> Self {
        Self::from_parts(zeta, Quaternion::ZERO)
    }

    /// Vertical point `(0, v)`.
    pub fn vertical(v: Quaternion) -> Self {
        Self::from_parts(Quaternion::ZERO, v)
    }

    pub fn zeta(&self) -> Quaternion {
        self.zeta
    }

    pub fn v(&self) -> Quaternion {
        self.v
    }

    /// Seven reals `ζw, ζx, ζy, ζz, vx, vy, vz`.
    pub fn to_components(&self) -> [f64; 7] {
        let z = self.zeta;
        [z.w, z.x, z.y, z.z, self.v.x, self.v.y, self.v.z]
    }

    pub fn is_origin(&self) -> bool {
        self.zeta.is_zero() && self.v.is_zero()
    }

    pub fn compose(&self, q: &HeisPoint) -> HeisPoint {
        let twist = (q.zeta.conj() * self.zeta).im() * 2.0;
        HeisPoint::from_parts(self.zeta + q.zeta, self.v + q.v + twist)
    }

    pub fn inverse(&self) -> HeisPoint {
        HeisPoint::from_parts(-self.zeta, -self.v)
    }

    /// `κ(ζ, v) = −|ζ|² + v`.
    pub fn kappa(&self) -> Quaternion {
        Quaternion::real(-self.zeta.norm_sqr()) + self.v
    }

    /// Korányi gauge, computed as `(|ζ|⁴ + |v|²)^{1/4}`.
    pub fn gauge(&self) -> f64 {
        let z2 = self.zeta.norm_sqr();
        (z2 * z2 + self.v.norm_sqr()).sqrt().sqrt()
    }

    /// Korányi gauge through `|κ|^{1/2}`; agrees with [`gauge`](Self::gauge).
    pub fn gauge_via_kappa(&self) -> f64 {
        self.kappa().norm().sqrt()
    }

    fn gauge_formulas_agree(&self) -> bool {
        let a = self.gauge();
        let b = self.gauge_via_kappa();
        !a.is_finite() || (a - b).abs() <= 1e-12 * a.max(1.0)
    }

    /// Rotation `(ζ, v) ↦ (μζ, v)`.
    pub fn rotated(&self, mu: UnitQuaternion) -> HeisPoint {
        HeisPoint::from_parts(mu.get() * self.zeta, self.v)
    }

    /// Dilation `(ζ, v) ↦ (δζ, δ²v)`.
    pub fn dilated(&self, delta: f64) -> HeisPoint {
        HeisPoint::from_parts(self.zeta * delta, self.v * (delta * delta))
    }

    pub fn approx_eq(&self, other: &HeisPoint, eps: f64) -> bool {
        self.zeta.approx_eq(other.zeta, eps) && self.v.approx_eq(other.v, eps)
    }

    /// Gaussian `ζ` and `v` components with standard deviation `scale`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> HeisPoint {
        let z = Quaternion::random_gaussian(rng) * scale;
        let v = Quaternion::random_gaussian(rng).im() * scale;
        HeisPoint::from_parts(z, v)
    }
}

/// `ρ₀(p, q) = K(q⁻¹ p)`, evaluated as `||ζ_p − ζ_q|² + v_p − v_q + 2 Im(ζ̄_q ζ_p)|^{1/2}`.
pub fn cygan_distance(p: &HeisPoint, q: &HeisPoint) -> f64 {
    let dz = p.zeta - q.zeta;
    // Im(ζ̄_q ζ_p) = Im(ζ̄_q (ζ_p − ζ_q)), which vanishes exactly when p = q
    let w = Quaternion::real(dz.norm_sqr()) + p.v - q.v + (q.zeta.conj() * dz).im() * 2.0;
    w.norm().sqrt()
}

/// Korányi spherical coordinates `(ζ, v) = (r √cos ψ · U, r² sin ψ · u₂)`.
///
/// `ψ` is stored in `[0, π/2]`; the sign of `v` lives entirely in `u₂`.
/// Degenerate points use `U = 1` when `ζ = 0`, `u₂ = i` when `v = 0`, and the
/// origin has `r = 0`, `ψ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KoranyiCoords {
    pub r: f64,
    pub psi: f64,
    pub u: UnitQuaternion,
    pub u2: UnitQuaternion,
}

impl KoranyiCoords {
    pub fn new(r: f64, psi: f64, u: UnitQuaternion, u2: UnitQuaternion) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(Error::DomainError {
                name: "r",
                value: r,
                domain: "[0, inf)",
            });
        }
        if !(0.0..=FRAC_PI_2).contains(&psi) {
            return Err(Error::DomainError {
                name: "psi",
                value: psi,
                domain: "[0, pi/2]",
            });
        }
        if u2.w.abs() > tol::UNIT {
            return Err(Error::NotPurelyImaginary(u2.w));
        }
        Ok(Self { r, psi, u, u2 })
    }

    /// Angle `φ ∈ [0, π]` and axis `u₁` of `U = cos φ + u₁ sin φ`.
    pub fn phi_u1(&self) -> (f64, UnitQuaternion) {
        let p = self.u.polar();
        (p.theta, p.mu)
    }
}

pub fn to_koranyi(p: &HeisPoint) -> KoranyiCoords {
    let r = p.gauge();
    if r == 0.0 {
        return KoranyiCoords {
            r: 0.0,
            psi: 0.0,
            u: UnitQuaternion::ONE,
            u2: UnitQuaternion::I,
        };
    }
    let cos_psi = (p.zeta.norm_sqr() / (r * r)).clamp(0.0, 1.0);
    let u = UnitQuaternion::normalize(p.zeta).unwrap_or(UnitQuaternion::ONE);
    let u2 = UnitQuaternion::normalize(p.v).unwrap_or(UnitQuaternion::I);
    KoranyiCoords {
        r,
        psi: cos_psi.acos(),
        u,
        u2,
    }
}

pub fn from_koranyi(c: &KoranyiCoords) -> HeisPoint {
    let (s, co) = c.psi.sin_cos();
    HeisPoint::from_parts(c.u.get() * (c.r * co.max(0.0).sqrt()), c.u2.get() * (c.r * c.r * s))
}

/// `S_r(p₀) = { p : ρ₀(p, p₀) = r }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyganSphere {
    pub center: HeisPoint,
    pub radius: f64,
}

impl CyganSphere {
    pub fn new(center: HeisPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositive(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn on_sphere(&self, p: &HeisPoint) -> bool {
        (cygan_distance(p, &self.center) - self.radius).abs() <= tol::COMPOSED * self.radius.max(1.0)
    }

    /// Open ball membership.
    pub fn in_ball(&self, p: &HeisPoint) -> bool {
        cygan_distance(p, &self.center) < self.radius
    }

    /// One point from uniformly drawn `ψ ∈ [0, π/2]`, `φ ∈ [0, 2π]` and
    /// axes `u₁, u₂ ∈ S²`, pushed through `from_koranyi` and left-translated
    /// by the center.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> HeisPoint {
        let psi = rng.random_range(0.0..=FRAC_PI_2);
        let phi = rng.random_range(0.0..2.0 * PI);
        let u1 = UnitQuaternion::random_imaginary(rng);
        let u2 = UnitQuaternion::random_imaginary(rng);
        let c = KoranyiCoords {
            r: self.radius,
            psi,
            u: UnitQuaternion::from_angle(phi, u1),
            u2,
        };
        self.center.compose(&from_koranyi(&c))
    }

    pub fn sample(&self, n: usize, seed: u64) -> Vec<HeisPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample_point(&mut rng)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn pt(z: Quaternion, v: Quaternion) -> HeisPoint {
        HeisPoint::new(z, v).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let p = pt(Quaternion::new(1.0, 2.0, -1.0, 0.5), Quaternion::imaginary(0.0, 3.0, 1.0));
        assert_eq!(p.compose(&HeisPoint::ORIGIN), p);
        // 2 Im(j̄ i) = 2 Im(−j i) = 2k
        let q = pt(I, Quaternion::ZERO).compose(&pt(J, Quaternion::ZERO));
        assert_eq!(q, pt(I + J, K * 2.0));
        assert!(p.compose(&p.inverse()).is_origin());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(HeisPoint::ORIGIN.inverse(), HeisPoint::ORIGIN);
        let p = pt(I, K * 2.0);
        assert_eq!(p.inverse(), pt(-I, K * -2.0));
        assert!(p.compose(&p.inverse()).is_origin());
        assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn rejects_real_v() {
        assert!(matches!(
            HeisPoint::new(Quaternion::ZERO, Quaternion::new(0.5, 1.0, 0.0, 0.0)),
            Err(Error::NotPurelyImaginary(_))
        ));
        // tiny real parts are zeroed
        let p = HeisPoint::new(Quaternion::ZERO, Quaternion::new(1e-15, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(p.v().w, 0.0);
    }

    #[test]
    fn kappa_and_gauge_examples() {
        assert_eq!(pt(Quaternion::ZERO, I).kappa(), I);
        assert_eq!(pt(Quaternion::ONE, Quaternion::ZERO).kappa(), Quaternion::real(-1.0));
        assert_eq!(
            pt(Quaternion::new(1.0, 1.0, 0.0, 0.0), J * 2.0).kappa(),
            Quaternion::new(-2.0, 0.0, 2.0, 0.0)
        );
        assert_eq!(pt(Quaternion::ZERO, I * 4.0).gauge(), 2.0);
        assert_eq!(pt(Quaternion::ONE, Quaternion::ZERO).gauge(), 1.0);
        assert_abs_diff_eq!(pt(Quaternion::ONE, I).gauge(), 2f64.powf(0.25), epsilon = 1e-15);
    }

    #[test]
    fn distance_examples() {
        let p = pt(Quaternion::new(0.5, 1.0, -2.0, 0.1), Quaternion::imaginary(1.0, -1.0, 3.0));
        assert_abs_diff_eq!(cygan_distance(&HeisPoint::ORIGIN, &p), p.gauge(), epsilon = 1e-14);
        assert_eq!(cygan_distance(&p, &p), 0.0);
        let a = pt(Quaternion::ONE, Quaternion::ZERO);
        let b = pt(-Quaternion::ONE, Quaternion::ZERO);
        assert_eq!(cygan_distance(&a, &b), 2.0);
    }

    #[test]
    fn koranyi_examples() {
        let c = to_koranyi(&pt(Quaternion::ZERO, I));
        assert_eq!(c.r, 1.0);
        assert_abs_diff_eq!(c.psi, FRAC_PI_2, epsilon = 1e-15);
        assert_eq!(c.u2, UnitQuaternion::I);
        assert_eq!(c.u, UnitQuaternion::ONE);

        let c = to_koranyi(&pt(Quaternion::ONE, Quaternion::ZERO));
        assert_eq!((c.r, c.psi), (1.0, 0.0));
        assert_eq!(c.u, UnitQuaternion::ONE);
        assert_eq!(c.u2, UnitQuaternion::I);

        let c = to_koranyi(&pt(Quaternion::ONE, I));
        assert_abs_diff_eq!(c.r, 2f64.powf(0.25), epsilon = 1e-15);
        assert_abs_diff_eq!(c.psi, PI / 4.0, epsilon = 1e-15);
        assert_eq!(c.u, UnitQuaternion::ONE);
        assert_eq!(c.u2, UnitQuaternion::I);

        let o = to_koranyi(&HeisPoint::ORIGIN);
        assert_eq!((o.r, o.psi), (0.0, 0.0));
        assert!(from_koranyi(&o).is_origin());
    }

    #[test]
    fn phi_u1_recovers_angle() {
        let u = UnitQuaternion::from_angle(1.2, UnitQuaternion::J);
        let c = KoranyiCoords::new(1.0, 0.3, u, UnitQuaternion::K).unwrap();
        let (phi, u1) = c.phi_u1();
        assert_abs_diff_eq!(phi, 1.2, epsilon = 1e-14);
        assert!(u1.approx_eq(J, 1e-14));
    }

    #[test]
    fn koranyi_constructor_checks_ranges() {
        assert!(KoranyiCoords::new(-1.0, 0.0, UnitQuaternion::ONE, UnitQuaternion::I).is_err());
        assert!(KoranyiCoords::new(1.0, 2.0, UnitQuaternion::ONE, UnitQuaternion::I).is_err());
        assert!(KoranyiCoords::new(1.0, 0.5, UnitQuaternion::ONE, UnitQuaternion::ONE).is_err());
    }

    #[test]
    fn sphere_membership() {
        let s = CyganSphere::new(HeisPoint::ORIGIN, 1.0).unwrap();
        assert!(s.on_sphere(&pt(Quaternion::ONE, Quaternion::ZERO)));
        assert!(!s.in_ball(&pt(Quaternion::ZERO, I * 4.0)));
        let c = pt(Quaternion::new(0.3, 0.0, 1.0, 0.0), K);
        assert!(CyganSphere::new(c, 0.7).unwrap().in_ball(&c));
        assert!(matches!(CyganSphere::new(c, 0.0), Err(Error::NonPositive(_))));
    }

    #[test]
    fn sampled_points_lie_on_sphere() {
        let unit = CyganSphere::new(HeisPoint::ORIGIN, 1.0).unwrap();
        let p = unit.sample(1, 42)[0];
        assert!((p.gauge() - 1.0).abs() < 1e-9);

        let c = pt(Quaternion::new(1.0, -2.0, 0.5, 0.0), Quaternion::imaginary(0.3, 0.0, -4.0));
        let s = CyganSphere::new(c, 2.5).unwrap();
        let pts = s.sample(100, 3);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|p| s.on_sphere(p)));
        assert!(pts.iter().all(|p| (cygan_distance(p, &c) - 2.5).abs() < 1e-9));

        let two = CyganSphere::new(HeisPoint::ORIGIN, 2.0).unwrap();
        for (a, b) in unit.sample(50, 9).iter().zip(two.sample(50, 9).iter()) {
            assert!((b.gauge() / a.gauge() - 2.0).abs() < 1e-9);
        }
    }

    fn point() -> impl Strategy<Value = HeisPoint> {
        (prop::array::uniform4(-3.0f64..3.0), prop::array::uniform3(-3.0f64..3.0))
            .prop_map(|(z, v)| HeisPoint::from_components(z, v))
    }

    fn unit() -> impl Strategy<Value = UnitQuaternion> {
        prop::array::uniform4(-1.0f64..1.0)
            .prop_filter("nonzero", |c| c.iter().map(|x| x * x).sum::<f64>() > 1e-3)
            .prop_map(|c| UnitQuaternion::normalize(Quaternion::from_array(c)).unwrap())
    }

    proptest! {
        #[test]
        fn left_invariance(p0 in point(), p in point(), q in point()) {
            let d = cygan_distance(&p, &q);
            let d0 = cygan_distance(&p0.compose(&p), &p0.compose(&q));
            prop_assert!((d - d0).abs() <= 1e-9 * d.max(1.0));
        }

        #[test]
        fn distance_is_gauge_of_quotient(p in point(), q in point()) {
            let d = cygan_distance(&p, &q);
            let k = q.inverse().compose(&p).gauge();
            prop_assert!((d - k).abs() <= 1e-12 * d.max(1.0));
        }

        #[test]
        fn distance_is_symmetric(p in point(), q in point()) {
            let a = cygan_distance(&p, &q);
            let b = cygan_distance(&q, &p);
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }

        #[test]
        fn gauge_symmetry(p in point()) {
            prop_assert!((p.inverse().gauge() - p.gauge()).abs() <= 1e-12 * p.gauge().max(1.0));
            prop_assert!((p.gauge() - p.gauge_via_kappa()).abs() <= 1e-12 * p.gauge().max(1.0));
        }

        #[test]
        fn rotation_and_dilation(p in point(), q in point(), mu in unit(), delta in 0.1f64..10.0) {
            let d = cygan_distance(&p, &q);
            let dr = cygan_distance(&p.rotated(mu), &q.rotated(mu));
            prop_assert!((d - dr).abs() <= 1e-9 * d.max(1.0));
            let dd = cygan_distance(&p.dilated(delta), &q.dilated(delta));
            prop_assert!((dd - delta * d).abs() <= 1e-9 * (delta * d).max(1.0));
        }

        #[test]
        fn koranyi_round_trip(p in point()) {
            prop_assume!(p.zeta().norm() > 1e-6 && p.v().norm() > 1e-6);
            let c = to_koranyi(&p);
            prop_assert!((0.0..=FRAC_PI_2).contains(&c.psi));
            prop_assert!(from_koranyi(&c).approx_eq(&p, 1e-10));
        }
    }
}
