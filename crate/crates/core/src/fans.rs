//! Infinite fans, their vertical projections, and the strip test for a
//! non-vertical translation `A`.
//!
//! The strip direction is `u₀ = ζ₂/|ζ₂|`, the direction in which `A` moves
//! vertical projections; levels are measured by `Re(q ū₀)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{CyganSphere, HeisPoint};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::spgroup::GroupMatrix;
use crate::tol;

/// `F = {(q, w) : Re(q ū₀) = level}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fan {
    pub u0: UnitQuaternion,
    pub level: f64,
}

impl Fan {
    pub fn new(u0: UnitQuaternion, level: f64) -> Self {
        Self { u0, level }
    }

    /// Signed offset `Re(ζ ū₀) − level` of a point from the fan.
    pub fn offset(&self, p: &HeisPoint) -> f64 {
        height(self.u0, vertical_projection(p)) - self.level
    }
}

/// Closed strip `low ≤ Re(q ū₀) ≤ high` in `ℍ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub u0: UnitQuaternion,
    pub low: f64,
    pub high: f64,
}

impl Strip {
    pub fn new(u0: UnitQuaternion, low: f64, high: f64) -> Result<Self> {
        if !(low <= high) {
            return Err(Error::InvalidArgument(format!("strip bounds {low} > {high}")));
        }
        Ok(Self { u0, low, high })
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

fn height(u0: UnitQuaternion, q: Quaternion) -> f64 {
    (q * u0.conj().get()).re()
}

/// `Π(ζ, v) = ζ`.
pub fn vertical_projection(p: &HeisPoint) -> Quaternion {
    p.zeta()
}

pub fn fan_contains(f: &Fan, p: &HeisPoint) -> bool {
    f.offset(p).abs() <= tol::COMPOSED * f.level.abs().max(1.0)
}

/// Image of `f` under the translation by `p₂`: the level grows by `|ζ₂|`.
pub fn translate_fan(p2: &HeisPoint, f: &Fan) -> Result<Fan> {
    let dir = direction(p2)?;
    if (dir.get() - f.u0.get()).norm() > tol::COMPOSED {
        return Err(Error::MisalignedFan);
    }
    Ok(Fan::new(f.u0, f.level + p2.zeta().norm()))
}

/// `ζ₂/|ζ₂|`, the direction in which the translation by `p₂` moves `Π`.
pub fn direction(p2: &HeisPoint) -> Result<UnitQuaternion> {
    let n = p2.zeta().norm();
    if n <= tol::ZERO {
        return Err(Error::ZetaTwoZero);
    }
    UnitQuaternion::normalize(p2.zeta())
}

pub fn strip_contains(s: &Strip, q: Quaternion) -> bool {
    let x = height(s.u0, q);
    s.low <= x && x <= s.high
}

/// Disk in `ℍ` containing `Π` of a Cygan sphere: centre `ζ` of the sphere
/// centre, radius equal to the Cygan radius (`|ζ|⁴ ≤ K⁴` on the sphere).
pub fn projected_sphere(s: &CyganSphere) -> (Quaternion, f64) {
    (s.center.zeta(), s.radius)
}

/// Algebraic and geometric forms of the strip condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripCheck {
    /// `|ζ₂| K(p₁)`.
    pub lhs: f64,
    /// `2|ζ₁|² |Re(ζ₁ ζ̄₂)| / (|ζ₂| K³(p₁)) + 2`.
    pub rhs: f64,
    pub holds: bool,
    /// The same right-hand side with the signed `Re(ζ₁ ζ̄₂)`.
    pub rhs_as_printed: f64,
    pub holds_as_printed: bool,
    /// Width in direction `ζ₂/|ζ₂|` of the smallest strip holding the
    /// projected isometric spheres of `B` and `B⁻¹`; compare with `|ζ₂|`.
    pub projected_width: f64,
    /// Where that smallest strip starts; `[low, low + |ζ₂|]` is a
    /// fundamental strip for `⟨A⟩` when `holds`.
    pub strip_low: f64,
}

/// Tests whether the projected isometric spheres of `B^{±1}` fit in a
/// fundamental strip of `⟨A⟩`. Multiplying the width by `K(p₁)` gives the
/// inequality, which is why the first term needs `|Re(ζ₁ ζ̄₂)|`.
pub fn strip_containment_check(p1: &HeisPoint, p2: &HeisPoint) -> Result<StripCheck> {
    if p1.is_origin() {
        return Err(Error::OriginInput);
    }
    let u0 = direction(p2)?;
    let (z1, z2) = (p1.zeta(), p2.zeta());
    let k1 = p1.gauge();
    let n2 = z2.norm();
    let re = (z1 * z2.conj()).re();
    let lhs = n2 * k1;
    let coef = 2.0 * z1.norm_sqr() / (n2 * k1.powi(3));
    let rhs = coef * re.abs() + 2.0;
    let rhs_as_printed = coef * re + 2.0;

    let b = GroupMatrix::generator_b(p1);
    let spheres = [b.isometric_sphere()?, b.sp_inverse()?.isometric_sphere()?];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &spheres {
        let (c, r) = projected_sphere(s);
        let x = height(u0, c);
        lo = lo.min(x - r);
        hi = hi.max(x + r);
    }
    Ok(StripCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - tol::MARGIN,
        rhs_as_printed,
        holds_as_printed: lhs >= rhs_as_printed - tol::MARGIN,
        projected_width: hi - lo,
        strip_low: lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spgroup::BoundaryPoint;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;

    fn pt(z: Quaternion, v: Quaternion) -> HeisPoint {
        HeisPoint::new(z, v).unwrap()
    }

    fn real(s: f64) -> HeisPoint {
        HeisPoint::horizontal(Quaternion::real(s))
    }

    #[test]
    fn projection_examples() {
        let p = pt(Quaternion::ONE + I, J * 2.0);
        assert_eq!(vertical_projection(&p), Quaternion::ONE + I);
        assert_eq!(vertical_projection(&HeisPoint::vertical(I * 3.0)), Quaternion::ZERO);
        let p0 = pt(Quaternion::new(0.5, 1.0, 0.0, -2.0), I);
        let shifted = p0.compose(&p);
        assert_abs_diff_eq!((vertical_projection(&shifted) - vertical_projection(&p) - p0.zeta()).norm(), 0.0);
    }

    #[test]
    fn fan_contains_examples() {
        assert!(fan_contains(&Fan::new(UnitQuaternion::ONE, 1.0), &pt(Quaternion::ONE, I)));
        assert!(fan_contains(&Fan::new(UnitQuaternion::I, 0.0), &pt(J, Quaternion::ZERO)));
        assert!(!fan_contains(&Fan::new(UnitQuaternion::ONE, 5.0), &real(1.0)));
    }

    #[test]
    fn translate_fan_examples() {
        let f = translate_fan(&real(1.0), &Fan::new(UnitQuaternion::ONE, 1.0)).unwrap();
        assert_eq!(f, Fan::new(UnitQuaternion::ONE, 2.0));
        let p2 = HeisPoint::horizontal(I * 2.0);
        let f = translate_fan(&p2, &Fan::new(UnitQuaternion::I, 0.0)).unwrap();
        assert_eq!(f, Fan::new(UnitQuaternion::I, 2.0));
        let minus_i = UnitQuaternion::new(-I).unwrap();
        assert_eq!(translate_fan(&p2, &Fan::new(minus_i, 0.0)), Err(Error::MisalignedFan));
        assert_eq!(
            translate_fan(&HeisPoint::vertical(I), &Fan::new(UnitQuaternion::ONE, 0.0)),
            Err(Error::ZetaTwoZero)
        );
    }

    fn fan_point<R: Rng>(rng: &mut R, f: &Fan) -> HeisPoint {
        // q = (level + w) u₀ with w purely imaginary has Re(q ū₀) = level
        let w = Quaternion::random_gaussian(rng).im();
        let q = (Quaternion::real(f.level) + w) * f.u0.get();
        HeisPoint::from_parts(q, Quaternion::random_gaussian(rng).im())
    }

    #[test]
    fn fan_projects_onto_hyperplane() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for _ in 0..1000 {
            let f = Fan::new(UnitQuaternion::random(&mut rng), rng.random_range(-3.0..3.0));
            let p = fan_point(&mut rng, &f);
            assert!(f.offset(&p).abs() <= 1e-12 * f.level.abs().max(1.0));
            // any lift of a hyperplane point is in the fan
            let lifted = HeisPoint::from_parts(p.zeta(), Quaternion::random_gaussian(&mut rng).im() * 10.0);
            assert!(fan_contains(&f, &lifted));
        }
    }

    #[test]
    fn translation_moves_fans() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let p2 = HeisPoint::random(&mut rng, 1.5);
            let f = Fan::new(direction(&p2).unwrap(), rng.random_range(-2.0..2.0));
            let g = translate_fan(&p2, &f).unwrap();
            let p = fan_point(&mut rng, &f);
            let image = GroupMatrix::generator_a(&p2).act(&BoundaryPoint::Finite(p)).finite().unwrap();
            assert!(g.offset(&image).abs() <= 1e-9, "offset {}", g.offset(&image));
        }
    }

    #[test]
    fn strip_examples() {
        let s = Strip::new(UnitQuaternion::ONE, 0.0, 2.0).unwrap();
        assert!(strip_contains(&s, Quaternion::ONE));
        assert!(!strip_contains(&s, Quaternion::real(3.0)));
        assert!(strip_contains(&s, Quaternion::real(2.0)));
        assert!(strip_contains(&s, Quaternion::real(2.0) + J * 7.0));
        assert!(Strip::new(UnitQuaternion::ONE, 1.0, 0.0).is_err());
    }

    #[test]
    fn projected_sphere_bounds_samples() {
        let s = CyganSphere::new(HeisPoint::ORIGIN, 1.0).unwrap();
        assert_eq!(projected_sphere(&s), (Quaternion::ZERO, 1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..5 {
            let s = CyganSphere::new(HeisPoint::random(&mut rng, 2.0), rng.random_range(0.1..3.0)).unwrap();
            let (c, r) = projected_sphere(&s);
            assert_eq!(c, s.center.zeta());
            for p in s.sample(2000, rng.random()) {
                assert!((p.zeta() - c).norm() <= r + 1e-9);
            }
        }
        let tiny = CyganSphere::new(HeisPoint::ORIGIN, 1e-9).unwrap();
        assert!(projected_sphere(&tiny).1 <= 1e-9);
    }

    #[test]
    fn strip_check_real_family() {
        for s in [0.5, 1.0, 3.9, 4.0, 4.1, 10.0] {
            let c = strip_containment_check(&real(1.0), &real(s)).unwrap();
            assert_eq!(c.holds, s >= 4.0, "s = {s}: {c:?}");
            assert_abs_diff_eq!(c.rhs, 4.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn strip_check_orthogonal_family() {
        for s in [1.0, 1.99, 2.0, 2.5] {
            let c = strip_containment_check(&HeisPoint::horizontal(I), &HeisPoint::horizontal(J * s)).unwrap();
            assert_eq!(c.holds, s >= 2.0, "s = {s}");
            assert_eq!(c.rhs, c.rhs_as_printed);
        }
    }

    #[test]
    fn strip_check_vertical_p1() {
        for (v, z) in [(4.0, 1.0), (4.0, 0.99), (1.0, 2.0), (9.0, 0.5)] {
            let c = strip_containment_check(&HeisPoint::vertical(I * v), &HeisPoint::horizontal(Quaternion::new(0.0, 0.0, z, 0.0))).unwrap();
            assert_eq!(c.holds, z * f64::sqrt(v) >= 2.0 - 1e-12, "v {v}, z {z}");
        }
    }

    #[test]
    fn strip_check_errors() {
        assert_eq!(strip_containment_check(&real(1.0), &HeisPoint::vertical(I)), Err(Error::ZetaTwoZero));
        assert_eq!(strip_containment_check(&HeisPoint::ORIGIN, &real(1.0)), Err(Error::OriginInput));
    }

    #[test]
    fn signed_rhs_accepts_relation_pair() {
        // with the signed term, p₁ = 1, p₂ = −1 passes, yet (A⁻¹BA⁻¹)² = ±I
        let (p1, p2) = (real(1.0), real(-1.0));
        let c = strip_containment_check(&p1, &p2).unwrap();
        assert!(c.holds_as_printed && !c.holds);
        assert!(c.projected_width > p2.zeta().norm());
        let a_inv = GroupMatrix::generator_a(&p2).sp_inverse().unwrap();
        let b = GroupMatrix::generator_b(&p1);
        let w = a_inv * b * a_inv;
        assert!((w * w).distance_to_pm_identity() < 1e-12);
    }

    #[test]
    fn width_times_k1_matches_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..2000 {
            let p1 = HeisPoint::random(&mut rng, 1.5);
            let p2 = HeisPoint::random(&mut rng, 1.5);
            let c = strip_containment_check(&p1, &p2).unwrap();
            let k1 = p1.gauge();
            let lhs_w = p2.zeta().norm() * k1;
            let rhs_w = c.projected_width * k1;
            assert_abs_diff_eq!(lhs_w, c.lhs, epsilon = 1e-12);
            assert!((rhs_w - c.rhs).abs() <= 1e-9 * c.rhs, "{rhs_w} vs {}", c.rhs);
        }
    }

    #[test]
    fn holding_pairs_project_into_strip() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let mut tested = 0;
        while tested < 20 {
            let p1 = HeisPoint::random(&mut rng, 1.0);
            let p2 = HeisPoint::random(&mut rng, 4.0);
            let c = strip_containment_check(&p1, &p2).unwrap();
            if !c.holds {
                continue;
            }
            tested += 1;
            let u0 = direction(&p2).unwrap();
            let strip = Strip::new(u0, c.strip_low - 1e-9, c.strip_low + p2.zeta().norm() + 1e-9).unwrap();
            let b = GroupMatrix::generator_b(&p1);
            for s in [b.isometric_sphere().unwrap(), b.sp_inverse().unwrap().isometric_sphere().unwrap()] {
                for p in s.sample(500, tested) {
                    assert!(strip_contains(&strip, vertical_projection(&p)));
                }
            }
        }
    }
}
