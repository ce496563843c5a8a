//! Hamilton quaternions with `i² = j² = k² = ijk = −1`.
//!
//! Everything downstream (Heisenberg coordinates, Sp(2,1) matrices) is built
//! on this type, so multiplication order is always the written order: `a * b`
//! is `ab`, never `ba`.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Polar form `r (cos θ + μ sin θ)` with `θ ∈ [0, π]` and `μ` a purely
/// imaginary unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polar {
    pub r: f64,
    pub theta: f64,
    pub mu: UnitQuaternion,
}

/// Conjugate, modulus, real part and imaginary part of one quaternion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parts {
    pub conjugate: Quaternion,
    pub modulus: f64,
    pub re: f64,
    pub im: Quaternion,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub const fn imaginary(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Self {
        Self::imaginary(self.x, self.y, self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        // hypot-style scaling is unnecessary at the magnitudes used here
        self.norm_sqr().sqrt()
    }

    pub fn parts(self) -> Parts {
        Parts {
            conjugate: self.conj(),
            modulus: self.norm(),
            re: self.re(),
            im: self.im(),
        }
    }

    /// Euclidean inner product on ℝ⁴, equal to `Re(a b̄)`.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// `ā / |a|²`.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() / n2)
    }

    pub fn polar(self) -> Polar {
        let r = self.norm();
        let im = self.im();
        let s = im.norm();
        if s == 0.0 {
            // real input: μ = i by convention, θ ∈ {0, π}
            let theta = if self.w < 0.0 { PI } else { 0.0 };
            return Polar {
                r,
                theta,
                mu: UnitQuaternion(Self::I),
            };
        }
        Polar {
            r,
            theta: s.atan2(self.w),
            mu: UnitQuaternion(im / s),
        }
    }

    /// `a` and `b` are conjugate in ℍ* iff they share real part and modulus.
    pub fn similar(self, other: Self) -> bool {
        let scale = self.norm().max(other.norm()).max(1.0);
        (self.re() - other.re()).abs() <= tol::ALGEBRAIC * scale
            && (self.norm() - other.norm()).abs() <= tol::ALGEBRAIC * scale
    }

    /// Componentwise closeness in the max norm.
    pub fn approx_eq(self, other: Self, eps: f64) -> bool {
        (self - other).max_abs() <= eps
    }

    pub fn max_abs(self) -> f64 {
        self.w.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    /// Standard-normal components; the direction is uniform on S³.
    pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

/// A quaternion of modulus one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: Self = Self(Quaternion::ONE);
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if (n - 1.0).abs() > tol::UNIT {
            return Err(Error::NonUnit(n));
        }
        Ok(Self(q))
    }

    pub fn normalize(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self(q / n))
    }

    /// `cos θ + μ sin θ`; `mu` should be a purely imaginary unit.
    pub fn from_angle(theta: f64, mu: UnitQuaternion) -> Self {
        Self(Quaternion::real(theta.cos()) + mu.0 * theta.sin())
    }

    pub fn get(self) -> Quaternion {
        self.0
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    /// Uniform on S³.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q = Quaternion::random_gaussian(rng);
            let n = q.norm();
            if n > 1e-6 {
                return Self(q / n);
            }
        }
    }

    /// Uniform on the unit sphere S² of purely imaginary quaternions.
    pub fn random_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q = Quaternion::imaginary(
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
                rng.sample(StandardNormal),
            );
            let n = q.norm();
            if n > 1e-6 {
                return Self(q / n);
            }
        }
    }
}

impl std::ops::Deref for UnitQuaternion {
    type Target = Quaternion;
    fn deref(&self) -> &Quaternion {
        &self.0
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Quaternion {
        u.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    #[test]
    fn unit_relations() {
        assert_eq!(I * J, K);
        assert_eq!(J * I, -K);
        assert_eq!(I * I, -Quaternion::ONE);
        assert_eq!(J * J, -Quaternion::ONE);
        assert_eq!(K * K, -Quaternion::ONE);
        assert_eq!(I * J * K, -Quaternion::ONE);
        let a = Quaternion::new(0.3, -1.0, 2.5, 4.0);
        assert_eq!(a * Quaternion::ONE, a);
        assert_eq!(Quaternion::ONE * a, a);
    }

    #[test]
    fn conjugate_and_modulus() {
        assert_eq!(I.conj(), -I);
        let p = Quaternion::new(1.0, 1.0, 1.0, 1.0).parts();
        assert_eq!(p.modulus, 2.0);
        assert_eq!(p.re, 1.0);
        assert_eq!(p.im, Quaternion::imaginary(1.0, 1.0, 1.0));
        assert_eq!(Quaternion::ZERO.norm(), 0.0);
    }

    #[test]
    fn inverses() {
        assert_eq!(Quaternion::real(2.0).inverse().unwrap(), Quaternion::real(0.5));
        assert_eq!(I.inverse().unwrap(), -I);
        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn polar_examples() {
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0).polar();
        assert_abs_diff_eq!(p.r, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.theta, PI / 4.0, epsilon = 1e-15);
        assert!(p.mu.approx_eq(I, 1e-15));

        let p = Quaternion::real(2.0).polar();
        assert_eq!((p.r, p.theta, p.mu.get()), (2.0, 0.0, I));
        let p = Quaternion::real(-3.0).polar();
        assert_eq!((p.r, p.theta, p.mu.get()), (3.0, PI, I));

        let p = K.polar();
        assert_eq!(p.r, 1.0);
        assert_abs_diff_eq!(p.theta, PI / 2.0, epsilon = 1e-15);
        assert_eq!(p.mu.get(), K);
        assert_eq!(p.mu.get() * p.mu.get(), -Quaternion::ONE);
    }

    #[test]
    fn similarity_examples() {
        assert!(I.similar(J));
        let a = Quaternion::new(0.2, -0.4, 1.0, 3.0);
        assert!(a.similar(a));
        assert!(!Quaternion::new(1.0, 1.0, 0.0, 0.0).similar(Quaternion::new(1.0, -2.0, 0.0, 0.0)));
    }

    #[test]
    fn similar_pairs_are_conjugate() {
        // random search over unit μ for μ b μ⁻¹ ≈ a, refined by a crude
        // shrinking random walk; this stays independent of any closed form
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a = Quaternion::random_gaussian(&mut rng);
            let mu0 = UnitQuaternion::random(&mut rng);
            let b = mu0.conj().get() * a * mu0.get();
            assert!(a.similar(b));
            let err = |m: Quaternion| (m * b * m.inverse().unwrap() - a).norm();
            let mut best = UnitQuaternion::random(&mut rng).get();
            for _ in 0..2000 {
                let c = UnitQuaternion::random(&mut rng).get();
                if err(c) < err(best) {
                    best = c;
                }
            }
            let mut step = 0.1;
            while step > 1e-9 {
                let mut improved = false;
                for _ in 0..200 {
                    let c = best + Quaternion::random_gaussian(&mut rng) * step;
                    let c = c / c.norm();
                    if err(c) < err(best) {
                        best = c;
                        improved = true;
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
            assert!(err(best) < 1e-6, "residual {}", err(best));
        }
    }

    #[test]
    fn unit_constructor_rejects() {
        assert!(matches!(UnitQuaternion::new(Quaternion::real(2.0)), Err(Error::NonUnit(_))));
        assert!(UnitQuaternion::new(Quaternion::new(0.6, 0.8, 0.0, 0.0)).is_ok());
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
    }

    proptest! {
        #[test]
        fn modulus_is_multiplicative(a in quat(), b in quat()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn conjugation_reverses_products(a in quat(), b in quat()) {
            let d = ((a * b).conj() - b.conj() * a.conj()).max_abs();
            prop_assert!(d <= 1e-12 * (a.norm() * b.norm()).max(1.0));
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn polar_round_trip(a in quat()) {
            prop_assume!(a.norm() > 1e-6);
            let p = a.polar();
            prop_assert!((0.0..=PI).contains(&p.theta));
            let back = (Quaternion::real(p.theta.cos()) + p.mu.get() * p.theta.sin()) * p.r;
            prop_assert!(back.approx_eq(a, 1e-12 * a.norm().max(1.0)));
            prop_assert!((p.mu.get() * p.mu.get() + Quaternion::ONE).max_abs() < 1e-12);
        }

        #[test]
        fn inverse_is_two_sided(a in quat()) {
            prop_assume!(a.norm() > 1e-3);
            let inv = a.inverse().unwrap();
            prop_assert!((a * inv).approx_eq(Quaternion::ONE, 1e-12));
            prop_assert!((inv * a).approx_eq(Quaternion::ONE, 1e-12));
        }
    }
}
