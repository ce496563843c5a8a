//! Cygan distance estimates, the trigonometric extrema behind the sphere
//! containment radius, and the grid/Monte Carlo oracles that check them.
//!
//! Every closed form here has a matching [`Objective`] that
//! [`brute_force_max`] evaluates pointwise; the oracle never calls the closed
//! form it is compared against.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{cygan_distance, from_koranyi, to_koranyi, CyganSphere, HeisPoint, KoranyiCoords};
use crate::quaternion::{Quaternion, UnitQuaternion};

const SLACK: f64 = 1e-12;
const GOLDEN_ITERS: usize = 50;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, domain: &'static str) -> Result<f64> {
    if value.is_finite() && value >= lo - SLACK && value <= hi + SLACK {
        Ok(value.clamp(lo, hi))
    } else {
        Err(Error::DomainError { name, value, domain })
    }
}

/// `(1 − x)^{1/3} + (1 + x)^{1/3}` for `x ∈ [−1, 1]`; it decreases from 2 at
/// `x = 0` to `2^{1/3}` at `x = ±1`.
pub fn shape_factor(x: f64) -> f64 {
    (1.0 - x).cbrt() + (1.0 + x).cbrt()
}

/// `shape_factor(sin a)`, with `1 ∓ sin a` formed as `2 sin²` and `2 cos²`
/// of `π/4 − a/2` so the cube roots stay accurate near `|sin a| = 1`.
pub fn shape_factor_of_angle(a: f64) -> f64 {
    let (s, c) = (FRAC_PI_4 - a.abs() / 2.0).sin_cos();
    (2.0 * s * s).cbrt() + (2.0 * c * c).cbrt()
}

/// `shape_factor(|v|/K²)` for `|ζ|² = zeta_sq`, `|v| = v_abs`, using
/// `1 − |v|/K² = |ζ|⁴ / (K² (K² + |v|))`.
pub fn shape_factor_of_parts(zeta_sq: f64, v_abs: f64) -> f64 {
    let k2 = zeta_sq.hypot(v_abs);
    if k2 == 0.0 {
        return f64::NAN;
    }
    let minus = zeta_sq * zeta_sq / (k2 * (k2 + v_abs));
    minus.cbrt() + (1.0 + v_abs / k2).cbrt()
}

/// Upper bound on `ρ₀²(p₁, p₂)` from the triangle inequality:
/// `√((|ζ₁|² + |ζ₂|²)² + |v₁ − v₂|²) + 2|ζ₁||ζ₂|`.
pub fn gen_estimate_bound(p1: &HeisPoint, p2: &HeisPoint) -> f64 {
    let a = p1.zeta().norm_sqr() + p2.zeta().norm_sqr();
    let dv = (p1.v() - p2.v()).norm();
    a.hypot(dv) + 2.0 * p1.zeta().norm() * p2.zeta().norm()
}

/// Norm of `|ζ₁|² + |ζ₂|² + v₁ − v₂ − 2λ ζ̄₁ ζ₂`. Since
/// `ρ₀²(p₁, p₂) = ||ζ₁|² + |ζ₂|² + v₁ − v₂ − 2 ζ̄₁ ζ₂|`, the triangle-inequality
/// bound is attained iff this vanishes for some `λ ≤ 0`.
pub fn equality_residual(p1: &HeisPoint, p2: &HeisPoint, lambda: f64) -> f64 {
    let lhs = Quaternion::real(p1.zeta().norm_sqr() + p2.zeta().norm_sqr()) + p1.v() - p2.v();
    (lhs - p1.zeta().conj() * p2.zeta() * (2.0 * lambda)).norm()
}

/// `f_α(θ) = cos(θ + α) + √(cos 2θ · cos 2α)` on `[−π/4, π/4]²`.
pub fn f_alpha(alpha: f64, theta: f64) -> Result<f64> {
    let alpha = check_range("alpha", alpha, -FRAC_PI_4, FRAC_PI_4, "[-pi/4, pi/4]")?;
    let theta = check_range("theta", theta, -FRAC_PI_4, FRAC_PI_4, "[-pi/4, pi/4]")?;
    let prod = ((2.0 * theta).cos() * (2.0 * alpha).cos()).max(0.0);
    Ok((theta + alpha).cos() + prod.sqrt())
}

pub fn f_alpha_max(alpha: f64) -> Result<f64> {
    let alpha = check_range("alpha", alpha, -FRAC_PI_4, FRAC_PI_4, "[-pi/4, pi/4]")?;
    Ok(shape_factor_of_angle(2.0 * alpha).powf(1.5) / SQRT_2)
}

/// Critical point `θ₀` with `cos θ₀ = (λ + μ)/√(2(λ² + μ²))`,
/// `sin θ₀ = (λ − μ)/√(2(λ² + μ²))`, `λ = (cos α − sin α)^{1/3}`,
/// `μ = (cos α + sin α)^{1/3}`.
pub fn f_alpha_argmax(alpha: f64) -> Result<f64> {
    let alpha = check_range("alpha", alpha, -FRAC_PI_4, FRAC_PI_4, "[-pi/4, pi/4]")?;
    // cos α ∓ sin α = √2 sin(π/4 ∓ α)
    let lam = (SQRT_2 * (FRAC_PI_4 - alpha).sin()).cbrt();
    let mu = (SQRT_2 * (FRAC_PI_4 + alpha).sin()).cbrt();
    let d = (2.0 * (lam * lam + mu * mu)).sqrt();
    Ok(((lam - mu) / d).atan2((lam + mu) / d))
}

/// `h(ψ) = √2 ((1 − sin ψ)^{1/3} + (1 + sin ψ)^{1/3})^{3/2}` on `[−π/2, π/2]`;
/// ranges over `[2, 4]`.
pub fn h(psi1: f64) -> Result<f64> {
    let psi1 = check_range("psi1", psi1, -FRAC_PI_2, FRAC_PI_2, "[-pi/2, pi/2]")?;
    Ok(SQRT_2 * shape_factor_of_angle(psi1).powf(1.5))
}

/// Angles `(ψ₁, ψ₂) ∈ [−π/2, π/2]²`, `φ ∈ [0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereAngles {
    psi1: f64,
    psi2: f64,
    phi: f64,
}

impl SphereAngles {
    pub fn new(psi1: f64, psi2: f64, phi: f64) -> Result<Self> {
        Ok(Self {
            psi1: check_range("psi1", psi1, -FRAC_PI_2, FRAC_PI_2, "[-pi/2, pi/2]")?,
            psi2: check_range("psi2", psi2, -FRAC_PI_2, FRAC_PI_2, "[-pi/2, pi/2]")?,
            phi: check_range("phi", phi, 0.0, PI, "[0, pi]")?,
        })
    }

    pub fn psi1(&self) -> f64 {
        self.psi1
    }

    pub fn psi2(&self) -> f64 {
        self.psi2
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// `η_{ψ₁}(ψ₂, φ) = √(2(1 + cos ψ₁ cos ψ₂ + cos φ sin ψ₁ sin ψ₂)) + 2√(cos ψ₁ cos ψ₂)`,
/// the squared sphere-distance estimate divided by `r²`.
pub fn eta(a: &SphereAngles) -> f64 {
    let (s1, c1) = a.psi1.sin_cos();
    let (s2, c2) = a.psi2.sin_cos();
    let inner = 2.0 * (1.0 + c1 * c2 + a.phi.cos() * s1 * s2);
    inner.max(0.0).sqrt() + 2.0 * (c1 * c2).max(0.0).sqrt()
}

/// Maximum of `η_{ψ₁}` over `ψ₂, φ`; equal to `h(ψ₁)`.
pub fn eta_max(psi1: f64) -> Result<f64> {
    h(psi1)
}

/// Radius `d_r = 2^{1/4} r g(sin ψ₁)^{3/4}` of the Cygan sphere about a
/// point of `S_r(o)` that contains all of `S_r(o)`.
pub fn containment_radius(r: f64, psi1: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::DomainError {
            name: "r",
            value: r,
            domain: "(0, inf)",
        });
    }
    let psi1 = check_range("psi1", psi1, -FRAC_PI_2, FRAC_PI_2, "[-pi/2, pi/2]")?;
    Ok(2f64.powf(0.25) * r * shape_factor_of_angle(psi1).powf(0.75))
}

/// `g(|v|/K²)`, the shape factor at the sine of the Korányi angle of `p`.
pub fn point_shape(p: &HeisPoint) -> Result<f64> {
    if p.is_origin() {
        return Err(Error::OriginInput);
    }
    Ok(shape_factor_of_parts(p.zeta().norm_sqr(), p.v().norm()))
}

/// Radius `R_o = (2^{1/4}/K(p₁)) g(|v₁|/K²)^{3/4}` of the Cygan ball about
/// `o` containing both isometric spheres of `B` and `B⁻¹`.
pub fn enclosing_radius(p1: &HeisPoint) -> Result<f64> {
    Ok(2f64.powf(0.25) / p1.gauge() * point_shape(p1)?.powf(0.75))
}

/// A function whose extremum has a closed form in this module.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "function", rename_all = "snake_case")]
pub enum Objective {
    /// `max_θ f_α(θ)`.
    FAlpha { alpha: f64 },
    /// `max_ψ h(ψ) = 4`.
    HMax,
    /// `min_ψ h(ψ) = 2`.
    HMin,
    /// `max_{ψ₂, φ} η_{ψ₁}`.
    Eta { psi1: f64 },
    /// `max ρ₀(p₁, p₂)` over `p₂ ∈ S_r(o)` for a base point `p₁ ∈ S_r(o)` with
    /// Korányi angle `ψ₁`.
    SphereDiameter { radius: f64, psi1: f64, samples: usize, seed: u64 },
}

impl Objective {
    /// Parses `f_alpha`, `h_max`, `h_min`, `eta`, `sphere_diameter` with their
    /// numeric parameters in declaration order.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let need = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("`{name}` takes {n} parameters, got {}", params.len())))
            }
        };
        match name {
            "f_alpha" => need(1).map(|_| Objective::FAlpha { alpha: params[0] }),
            "h_max" => need(0).map(|_| Objective::HMax),
            "h_min" => need(0).map(|_| Objective::HMin),
            "eta" => need(1).map(|_| Objective::Eta { psi1: params[0] }),
            "sphere_diameter" => need(4).map(|_| Objective::SphereDiameter {
                radius: params[0],
                psi1: params[1],
                samples: params[2] as usize,
                seed: params[3] as u64,
            }),
            other => Err(Error::UnknownFunction(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Objective::FAlpha { .. } => "f_alpha",
            Objective::HMax => "h_max",
            Objective::HMin => "h_min",
            Objective::Eta { .. } => "eta",
            Objective::SphereDiameter { .. } => "sphere_diameter",
        }
    }

    /// The closed-form value the oracle is compared against.
    pub fn closed_form(&self) -> Result<f64> {
        match *self {
            Objective::FAlpha { alpha } => f_alpha_max(alpha),
            Objective::HMax => h(0.0),
            Objective::HMin => h(FRAC_PI_2),
            Objective::Eta { psi1 } => eta_max(psi1),
            Objective::SphereDiameter { radius, psi1, .. } => containment_radius(radius, psi1),
        }
    }
}

/// Closed form next to its brute-force value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub objective: Objective,
    pub closed_form: f64,
    pub brute_force: f64,
    /// Best grid or sample value before local refinement.
    pub unrefined: f64,
    pub argmax: Vec<f64>,
    pub abs_gap: f64,
}

/// Dense grid (or Monte Carlo sample) plus one local refinement pass.
///
/// `resolution` is the number of grid points per axis and must be at least
/// 100. `HMin` is a minimisation; everything else maximises.
pub fn brute_force_max(objective: &Objective, resolution: usize) -> Result<BoundReport> {
    if resolution < 100 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution {resolution} is below the minimum of 100"
        )));
    }
    let closed_form = objective.closed_form()?;
    let (unrefined, brute_force, argmax) = match *objective {
        Objective::FAlpha { alpha } => {
            let f = |t: f64| f_alpha(alpha, t).expect("theta in range");
            max_1d(f, -FRAC_PI_4, FRAC_PI_4, resolution)
        }
        Objective::HMax => max_1d(|p| h(p).expect("psi in range"), -FRAC_PI_2, FRAC_PI_2, resolution),
        Objective::HMin => {
            let (u, b, a) = max_1d(|p| -h(p).expect("psi in range"), -FRAC_PI_2, FRAC_PI_2, resolution);
            (-u, -b, a)
        }
        Objective::Eta { psi1 } => {
            check_range("psi1", psi1, -FRAC_PI_2, FRAC_PI_2, "[-pi/2, pi/2]")?;
            let f = |p2: f64, phi: f64| eta(&SphereAngles::new(psi1, p2, phi).expect("in range"));
            max_2d(f, (-FRAC_PI_2, FRAC_PI_2), (0.0, PI), resolution)
        }
        Objective::SphereDiameter { radius, psi1, samples, seed } => {
            sphere_diameter(radius, psi1, samples.max(resolution * resolution), seed)?
        }
    };
    Ok(BoundReport {
        objective: *objective,
        closed_form,
        brute_force,
        unrefined,
        argmax,
        abs_gap: (closed_form - brute_force).abs(),
    })
}

/// Index-stable argmax so parallel reductions are reproducible.
fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    // the interval may have collapsed onto an endpoint of the domain
    [(x1, f1), (x2, f2), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |b, c| if c.1 > b.1 { c } else { b })
}

fn max_1d(f: impl Fn(f64) -> f64 + Sync, lo: f64, hi: f64, n: usize) -> (f64, f64, Vec<f64>) {
    let step = (hi - lo) / (n - 1) as f64;
    let x = |i: usize| if i == n - 1 { hi } else { lo + step * i as f64 };
    let (best, idx) = (0..n)
        .into_par_iter()
        .map(|i| (f(x(i)), i))
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
    let a = x(idx.saturating_sub(1));
    let b = x((idx + 1).min(n - 1));
    let (xr, fr) = golden_max(&f, a, b);
    if fr >= best {
        (best, fr, vec![xr])
    } else {
        (best, best, vec![x(idx)])
    }
}

fn max_2d(
    f: impl Fn(f64, f64) -> f64 + Sync,
    (xlo, xhi): (f64, f64),
    (ylo, yhi): (f64, f64),
    n: usize,
) -> (f64, f64, Vec<f64>) {
    let sx = (xhi - xlo) / (n - 1) as f64;
    let sy = (yhi - ylo) / (n - 1) as f64;
    let x = |i: usize| if i == n - 1 { xhi } else { xlo + sx * i as f64 };
    let y = |j: usize| if j == n - 1 { yhi } else { ylo + sy * j as f64 };
    let (best, idx) = (0..n * n)
        .into_par_iter()
        .map(|k| (f(x(k / n), y(k % n)), k))
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
    let (i, j) = (idx / n, idx % n);
    let (bx, by) = (
        (x(i.saturating_sub(1)), x((i + 1).min(n - 1))),
        (y(j.saturating_sub(1)), y((j + 1).min(n - 1))),
    );
    let (mut px, mut py, mut fv) = (x(i), y(j), best);
    // alternating golden-section sweeps inside the neighbouring cells
    for _ in 0..6 {
        let (nx, fx) = golden_max(|t| f(t, py), bx.0, bx.1);
        if fx >= fv {
            px = nx;
            fv = fx;
        }
        let (ny, fy) = golden_max(|t| f(px, t), by.0, by.1);
        if fy >= fv {
            py = ny;
            fv = fy;
        }
    }
    (best, fv, vec![px, py])
}

/// Monte Carlo maximum of `ρ₀(p₁, ·)` over `S_r(o)` followed by a compass
/// search on the Korányi parameters of the best sample.
fn sphere_diameter(radius: f64, psi1: f64, samples: usize, seed: u64) -> Result<(f64, f64, Vec<f64>)> {
    let psi1 = check_range("psi1", psi1, -FRAC_PI_2, FRAC_PI_2, "[-pi/2, pi/2]")?;
    let sphere = CyganSphere::new(HeisPoint::ORIGIN, radius)?;
    let u2 = if psi1 < 0.0 { -Quaternion::I } else { Quaternion::I };
    let base = from_koranyi(&KoranyiCoords {
        r: radius,
        psi: psi1.abs(),
        u: UnitQuaternion::ONE,
        u2: UnitQuaternion::new(u2).expect("unit"),
    });
    let pts = sphere.sample(samples, seed);
    let (mc, idx) = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| (cygan_distance(&base, p), i))
        .reduce(|| (f64::NEG_INFINITY, usize::MAX), better);
    let (refined, best) = refine_on_sphere(&base, radius, pts[idx]);
    let argmax = best.to_components().to_vec();
    Ok((mc, refined.max(mc), argmax))
}

/// Compass search over `(ψ, U, u₂)`; every candidate is renormalised back
/// onto `S_r(o)` so only genuine sphere points are ever evaluated.
pub fn refine_on_sphere(base: &HeisPoint, radius: f64, start: HeisPoint) -> (f64, HeisPoint) {
    let c = to_koranyi(&start);
    let mut params = [0.0; 8];
    params[0] = c.psi;
    params[1..5].copy_from_slice(&c.u.get().to_array());
    params[5..8].copy_from_slice(&[c.u2.x, c.u2.y, c.u2.z]);
    let point = |q: &[f64; 8]| -> Option<HeisPoint> {
        let u = UnitQuaternion::normalize(Quaternion::new(q[1], q[2], q[3], q[4])).ok()?;
        let u2 = UnitQuaternion::normalize(Quaternion::imaginary(q[5], q[6], q[7])).ok()?;
        Some(from_koranyi(&KoranyiCoords {
            r: radius,
            psi: q[0].clamp(0.0, FRAC_PI_2),
            u,
            u2,
        }))
    };
    let value = |q: &[f64; 8]| point(q).map_or(f64::NEG_INFINITY, |p| cygan_distance(base, &p));
    let mut best = value(&params);
    let mut step = 0.05;
    let mut evals = 0usize;
    while step > 1e-10 && evals < 200_000 {
        let mut improved = false;
        for k in 0..8 {
            for sign in [1.0, -1.0] {
                let mut trial = params;
                trial[k] += sign * step;
                let v = value(&trial);
                evals += 1;
                if v > best {
                    best = v;
                    params = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, point(&params).unwrap_or(start))
}
