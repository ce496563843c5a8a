//! Sp(2,1) acting on the boundary of the quaternionic hyperbolic plane.
//!
//! `ℍ^{2,1}` is a right vector space with Hermitian form
//! `⟨z, w⟩ = w̄₃ z₁ + w̄₂ z₂ + w̄₁ z₃`. Finite boundary points lift to
//! `(−|ζ|² + v, √2 ζ, 1)ᵀ` and `∞` lifts to `(1, 0, 0)ᵀ`; images are read
//! back after right-multiplying by the inverse of the third coordinate.

use std::f64::consts::SQRT_2;
use std::ops::Mul;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{CyganSphere, HeisPoint};
use crate::quaternion::{Quaternion, UnitQuaternion};
use crate::tol;

/// Column vector in `ℍ³`.
pub type HVec = [Quaternion; 3];

/// A point of `∂H²_ℍ`: a Heisenberg point or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(HeisPoint),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<HeisPoint> {
        match self {
            BoundaryPoint::Finite(p) => Some(p),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }
}

impl From<HeisPoint> for BoundaryPoint {
    fn from(p: HeisPoint) -> Self {
        BoundaryPoint::Finite(p)
    }
}

pub fn hermitian_form(z: &HVec, w: &HVec) -> Quaternion {
    w[2].conj() * z[0] + w[1].conj() * z[1] + w[0].conj() * z[2]
}

pub fn lift(p: &BoundaryPoint) -> HVec {
    match p {
        BoundaryPoint::Infinity => [Quaternion::ONE, Quaternion::ZERO, Quaternion::ZERO],
        BoundaryPoint::Finite(p) => [p.kappa(), p.zeta() * SQRT_2, Quaternion::ONE],
    }
}

/// Reads a null vector back as a boundary point.
pub fn project(z: &HVec) -> BoundaryPoint {
    let scale = z.iter().map(|q| q.norm()).fold(0.0, f64::max);
    if z[2].norm() <= tol::ZERO * scale {
        return BoundaryPoint::Infinity;
    }
    let inv = z[2].inverse().expect("third coordinate is nonzero");
    let zeta = z[1] * inv / SQRT_2;
    let v = (z[0] * inv).im();
    BoundaryPoint::Finite(HeisPoint::from_parts(zeta, v))
}

/// 3×3 quaternionic matrix, row-major `[[a, b, c], [d, e, f], [g, h, j]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupMatrix {
    m: [[Quaternion; 3]; 3],
}

impl GroupMatrix {
    /// Unchecked: use [`GroupMatrix::checked`] for matrices from outside.
    pub const fn from_rows(m: [[Quaternion; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn checked(m: [[Quaternion; 3]; 3]) -> Result<Self> {
        let p = Self { m };
        let d = p.form_defect();
        if !(d <= tol::SYMPLECTIC_REJECT) {
            return Err(Error::NotSymplectic(d));
        }
        Ok(p)
    }

    pub fn identity() -> Self {
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        Self::from_rows([[o, z, z], [z, o, z], [z, z, o]])
    }

    /// Matrix of the Hermitian form; it coincides with the inversion `ι`.
    pub fn form() -> Self {
        Self::inversion()
    }

    /// `ι`, exchanging `o` and `∞`.
    pub fn inversion() -> Self {
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        Self::from_rows([[z, z, o], [z, o, z], [o, z, z]])
    }

    /// Heisenberg left translation `T_{p₀}`; it fixes `∞`.
    pub fn translation(p0: &HeisPoint) -> Self {
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        let zeta = p0.zeta();
        Self::from_rows([
            [o, zeta.conj() * -SQRT_2, p0.kappa()],
            [z, o, zeta * SQRT_2],
            [z, z, o],
        ])
    }

    pub fn rotation(mu: Quaternion) -> Result<Self> {
        let mu = UnitQuaternion::new(mu)?;
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        Ok(Self::from_rows([[o, z, z], [z, mu.get(), z], [z, z, o]]))
    }

    pub fn dilation(delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::NonPositive(delta));
        }
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        Ok(Self::from_rows([
            [Quaternion::real(delta), z, z],
            [z, o, z],
            [z, z, Quaternion::real(1.0 / delta)],
        ]))
    }

    /// Generator `A`: translation by `p₂`, fixing `∞`.
    pub fn generator_a(p2: &HeisPoint) -> Self {
        Self::translation(p2)
    }

    /// Generator `B`: the lower-triangular `ι T_{p₁} ι`, fixing `o`.
    pub fn generator_b(p1: &HeisPoint) -> Self {
        let (o, z) = (Quaternion::ONE, Quaternion::ZERO);
        let zeta = p1.zeta();
        Self::from_rows([
            [o, z, z],
            [zeta * SQRT_2, o, z],
            [p1.kappa(), zeta.conj() * -SQRT_2, o],
        ])
    }

    pub fn rows(&self) -> &[[Quaternion; 3]; 3] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Quaternion {
        self.m[row][col]
    }

    /// Lower-left entry `g`; it vanishes exactly when `∞` is fixed.
    pub fn g(&self) -> Quaternion {
        self.m[2][0]
    }

    /// Conjugate transpose `P*`.
    pub fn adjoint(&self) -> Self {
        let mut out = self.m;
        for (r, row) in out.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = self.m[c][r].conj();
            }
        }
        Self::from_rows(out)
    }

    pub fn apply(&self, z: &HVec) -> HVec {
        let mut out = [Quaternion::ZERO; 3];
        for (r, o) in out.iter_mut().enumerate() {
            for (c, zc) in z.iter().enumerate() {
                *o += self.m[r][c] * *zc;
            }
        }
        out
    }

    pub fn max_entry(&self) -> f64 {
        self.m.iter().flatten().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance `max |P_{rc} − Q_{rc}|`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.m
            .iter()
            .flatten()
            .zip(other.m.iter().flatten())
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    /// `min(‖P − I‖, ‖P + I‖)` in the max-entry norm; zero for ±I.
    pub fn distance_to_pm_identity(&self) -> f64 {
        let id = Self::identity();
        let neg = Self::from_rows(id.m.map(|r| r.map(|q| -q)));
        self.distance(&id).min(self.distance(&neg))
    }

    /// `max |P* H P − H|` scaled by `max(1, max|P_{rc}|²)`, so that long
    /// products are judged relative to their entry size.
    pub fn form_defect(&self) -> f64 {
        let h = Self::form();
        let d = (self.adjoint() * h * *self).distance(&h);
        let s = self.max_entry();
        d / (s * s).max(1.0)
    }

    /// Closed-form inverse `H P* H`:
    /// `[[j̄, f̄, c̄], [h̄, ē, b̄], [ḡ, d̄, ā]]`.
    pub fn sp_inverse(&self) -> Result<Self> {
        let d = self.form_defect();
        if !(d <= tol::SYMPLECTIC_REJECT) {
            return Err(Error::NotSymplectic(d));
        }
        let mut out = self.m;
        for (r, row) in out.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                *e = self.m[2 - c][2 - r].conj();
            }
        }
        Ok(Self::from_rows(out))
    }

    pub fn act(&self, p: &BoundaryPoint) -> BoundaryPoint {
        project(&self.apply(&lift(p)))
    }

    /// Cygan sphere centred at `P⁻¹(∞)` with radius `1/√|g|`.
    pub fn isometric_sphere(&self) -> Result<CyganSphere> {
        let g = self.g();
        if g.norm() <= tol::ZERO * self.max_entry().max(1.0) {
            return Err(Error::FixesInfinity);
        }
        let center = self
            .sp_inverse()?
            .act(&BoundaryPoint::Infinity)
            .finite()
            .ok_or(Error::FixesInfinity)?;
        CyganSphere::new(center, 1.0 / g.norm().sqrt())
    }

    /// A random similarity or the inversion, with moderate entries.
    pub fn random_generator<R: Rng + ?Sized>(rng: &mut R) -> Self {
        match rng.random_range(0..4u8) {
            0 => Self::translation(&HeisPoint::random(rng, 0.7)),
            1 => Self::rotation(UnitQuaternion::random(rng).get()).expect("unit"),
            2 => {
                let s: f64 = rng.sample(StandardNormal);
                Self::dilation((0.3 * s).exp()).expect("positive")
            }
            _ => Self::inversion(),
        }
    }
}

impl Mul for GroupMatrix {
    type Output = GroupMatrix;
    fn mul(self, o: GroupMatrix) -> GroupMatrix {
        let mut out = [[Quaternion::ZERO; 3]; 3];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                for k in 0..3 {
                    *e += self.m[r][k] * o.m[k][c];
                }
            }
        }
        GroupMatrix::from_rows(out)
    }
}

/// `ι(p)` in Heisenberg coordinates, derived from the matrix `ι`:
/// `(ζ κ⁻¹, Im(κ⁻¹))` with `κ = −|ζ|² + v`.
pub fn inversion_coords(p: &HeisPoint) -> Result<HeisPoint> {
    if p.is_origin() {
        return Err(Error::OriginInput);
    }
    GroupMatrix::inversion()
        .act(&BoundaryPoint::Finite(*p))
        .finite()
        .ok_or(Error::OriginInput)
}
