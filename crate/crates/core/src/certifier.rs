//! Sufficient conditions for `⟨A, B⟩` to be free and discrete, plus two
//! numerical cross-checks: the sphere configuration behind the ping-pong
//! argument and a search for short relations.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{enclosing_radius, point_shape, shape_factor_of_parts};
use crate::error::{Error, Result};
use crate::fans::strip_containment_check;
use crate::heisenberg::HeisPoint;
use crate::quaternion::Quaternion;
use crate::spgroup::{inversion_coords, GroupMatrix};
use crate::tol;

/// Longest word `word_nontriviality` will multiply out.
pub const MAX_WORD_LEN: usize = 30;

/// Distance to `±I` below which a word counts as a relation.
pub const RELATION_TOL: f64 = 1e-4;

/// One inequality `lhs ≥ rhs`. When not applicable both sides are NaN
/// (null when serialized) and `holds` is false.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    #[serde(with = "nan_as_none")]
    pub lhs: f64,
    #[serde(with = "nan_as_none")]
    pub rhs: f64,
    pub holds: bool,
    pub applicable: bool,
}

impl Condition {
    fn new(lhs: f64, rhs: f64, margin: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs >= rhs - margin,
            applicable: true,
        }
    }

    fn not_applicable() -> Self {
        Self {
            lhs: f64::NAN,
            rhs: f64::NAN,
            holds: false,
            applicable: false,
        }
    }

    /// `holds` restricted to applicable conditions.
    pub fn certifies(&self) -> bool {
        self.applicable && self.holds
    }

    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }
}

mod nan_as_none {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        (!x.is_nan()).then_some(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub lhs: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub p1: HeisPoint,
    pub p2: HeisPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub inputs: Inputs,
    /// `K(p₁)K(p₂) ≥ √2 g(|v₂|/K₂²)^{3/4} g(|v₁|/K₁²)^{3/4}`.
    pub cond1: Condition,
    /// Strip condition for `⟨A⟩`, with `|Re(ζ₁ ζ̄₂)|`.
    pub cond2: Condition,
    /// `cond2` with the signed `Re(ζ₁ ζ̄₂)`; reported only.
    pub cond2_as_printed: Condition,
    /// Strip condition for `⟨B⟩`: `cond2` with `p₁` and `p₂` exchanged.
    pub cond3_swapped: Condition,
    /// `|ζ₁| K(p₂)` against the signed right-hand side of `cond2`; reported only.
    pub cond3_as_printed: Condition,
    /// `K(p₁)K(p₂) ≥ 2`; reported only.
    pub thm_1_1: Threshold,
    pub overall_free_discrete: bool,
}

fn check_inputs(p1: &HeisPoint, p2: &HeisPoint) -> Result<()> {
    if p1.is_origin() {
        return Err(Error::DegenerateInput("p1 is the origin".into()));
    }
    if p2.is_origin() {
        return Err(Error::DegenerateInput("p2 is the origin".into()));
    }
    if p1.approx_eq(p2, tol::ZERO) {
        return Err(Error::DegenerateInput("p1 and p2 coincide".into()));
    }
    Ok(())
}

/// `√2 g₂^{3/4} g₁^{3/4}` from the two shape factors; ranges over `[2, 4]`.
fn cond1_rhs(g1: f64, g2: f64) -> f64 {
    SQRT_2 * g2.powf(0.75) * g1.powf(0.75)
}

pub fn condition1(p1: &HeisPoint, p2: &HeisPoint) -> Result<Condition> {
    condition1_with_margin(p1, p2, tol::MARGIN)
}

fn condition1_with_margin(p1: &HeisPoint, p2: &HeisPoint, margin: f64) -> Result<Condition> {
    check_inputs(p1, p2)?;
    let lhs = p1.gauge() * p2.gauge();
    let rhs = cond1_rhs(point_shape(p1)?, point_shape(p2)?);
    Ok(Condition::new(lhs, rhs, margin))
}

pub fn condition2(p1: &HeisPoint, p2: &HeisPoint) -> Result<Condition> {
    Ok(strip_conditions(p1, p2, tol::MARGIN)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cond3Variant {
    Swapped,
    AsPrinted,
}

pub fn condition3(p1: &HeisPoint, p2: &HeisPoint, variant: Cond3Variant) -> Result<Condition> {
    check_inputs(p1, p2)?;
    Ok(match variant {
        Cond3Variant::Swapped => strip_conditions(p2, p1, tol::MARGIN)?.0,
        Cond3Variant::AsPrinted => cond3_as_printed(p1, p2, tol::MARGIN),
    })
}

/// Absolute and signed strip conditions for translation `p₂` against `B_{p₁}`.
fn strip_conditions(p1: &HeisPoint, p2: &HeisPoint, margin: f64) -> Result<(Condition, Condition)> {
    check_inputs(p1, p2)?;
    match strip_containment_check(p1, p2) {
        Ok(c) => Ok((
            Condition::new(c.lhs, c.rhs, margin),
            Condition::new(c.lhs, c.rhs_as_printed, margin),
        )),
        Err(Error::ZetaTwoZero) => Ok((Condition::not_applicable(), Condition::not_applicable())),
        Err(e) => Err(e),
    }
}

fn cond3_as_printed(p1: &HeisPoint, p2: &HeisPoint, margin: f64) -> Condition {
    let (z1, z2) = (p1.zeta(), p2.zeta());
    let n2 = z2.norm();
    if n2 <= tol::ZERO {
        return Condition::not_applicable();
    }
    let k1 = p1.gauge();
    let rhs = 2.0 * z1.norm_sqr() * (z1 * z2.conj()).re() / (n2 * k1.powi(3)) + 2.0;
    Condition::new(z1.norm() * p2.gauge(), rhs, margin)
}

pub fn theorem_1_1(p1: &HeisPoint, p2: &HeisPoint) -> Result<Threshold> {
    check_inputs(p1, p2)?;
    let lhs = p1.gauge() * p2.gauge();
    Ok(Threshold {
        lhs,
        holds: lhs >= 2.0 - tol::MARGIN,
    })
}

pub fn certify(p1: &HeisPoint, p2: &HeisPoint) -> Result<Certificate> {
    certify_with_margin(p1, p2, tol::MARGIN)
}

/// `certify` with a caller-chosen absolute margin on every `lhs ≥ rhs`.
pub fn certify_with_margin(p1: &HeisPoint, p2: &HeisPoint, margin: f64) -> Result<Certificate> {
    check_inputs(p1, p2)?;
    let cond1 = condition1_with_margin(p1, p2, margin)?;
    let (cond2, cond2_as_printed) = strip_conditions(p1, p2, margin)?;
    let (cond3_swapped, _) = strip_conditions(p2, p1, margin)?;
    let cond3_as_printed = cond3_as_printed(p1, p2, margin);
    let lhs = p1.gauge() * p2.gauge();
    Ok(Certificate {
        inputs: Inputs { p1: *p1, p2: *p2 },
        cond1,
        cond2,
        cond2_as_printed,
        cond3_swapped,
        cond3_as_printed,
        thm_1_1: Threshold {
            lhs,
            holds: lhs >= 2.0 - margin,
        },
        overall_free_discrete: cond1.holds || cond2.certifies() || cond3_swapped.certifies(),
    })
}

/// `ζ_j = s_j e^{iθ_j}`, `v_j = t_j i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexParams {
    pub s1: f64,
    pub theta1: f64,
    pub t1: f64,
    pub s2: f64,
    pub theta2: f64,
    pub t2: f64,
}

impl ComplexParams {
    pub fn points(&self) -> Result<(HeisPoint, HeisPoint)> {
        if !(self.s1 >= 0.0 && self.s2 >= 0.0) {
            return Err(Error::InvalidArgument("s1 and s2 must be non-negative".into()));
        }
        let pt = |s: f64, th: f64, t: f64| {
            HeisPoint::from_parts(
                Quaternion::new(s * th.cos(), s * th.sin(), 0.0, 0.0),
                Quaternion::imaginary(t, 0.0, 0.0),
            )
        };
        Ok((pt(self.s1, self.theta1, self.t1), pt(self.s2, self.theta2, self.t2)))
    }
}

/// The complex-parameter inequalities evaluated directly, next to the
/// quaternionic certificate of the same pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub params: ComplexParams,
    pub certificate: Certificate,
    /// `r₁ r₂ ≥ √2 g(t₂/r₂²)^{3/4} g(t₁/r₁²)^{3/4}`.
    pub a: Condition,
    /// Left-hand side `r₁² r₂²` as printed; it has the wrong homogeneity.
    pub a_lhs_as_printed: f64,
    /// `s₁ r₂ ≥ 2 (s₂/r₂)³ cos(θ₁ − θ₂) + 2`, applicable when `s₁ ≠ 0`.
    pub b: Condition,
    /// `s₂ r₁ ≥ 2 (s₁/r₁)³ cos(θ₁ − θ₂) + 2`, applicable when `s₂ ≠ 0`,
    /// inner branch chosen on `s₂` as printed.
    pub c: Condition,
    /// `c` with the inner branch chosen on `s₁`.
    pub c_split_on_s1: Condition,
    pub warnings: Vec<String>,
}

pub fn corollary_complex(c: &ComplexParams) -> Result<CorollaryReport> {
    let (p1, p2) = c.points()?;
    let certificate = certify(&p1, &p2)?;
    let r1 = (c.s1.powi(4) + c.t1 * c.t1).powf(0.25);
    let r2 = (c.s2.powi(4) + c.t2 * c.t2).powf(0.25);
    let cos = (c.theta1 - c.theta2).cos();
    let m = tol::MARGIN;

    let g1 = shape_factor_of_parts(c.s1 * c.s1, c.t1.abs());
    let g2 = shape_factor_of_parts(c.s2 * c.s2, c.t2.abs());
    let a = Condition::new(r1 * r2, cond1_rhs(g1, g2), m);
    let b = if c.s1 > tol::ZERO {
        let rhs = if c.s2 > tol::ZERO { 2.0 * (c.s2 / r2).powi(3) * cos + 2.0 } else { 2.0 };
        Condition::new(c.s1 * r2, rhs, m)
    } else {
        Condition::not_applicable()
    };
    let c_branch = |nonzero: bool| {
        if c.s2 <= tol::ZERO {
            return Condition::not_applicable();
        }
        let rhs = if nonzero { 2.0 * (c.s1 / r1).powi(3) * cos + 2.0 } else { 2.0 };
        Condition::new(c.s2 * r1, rhs, m)
    };
    let cc = c_branch(c.s2 > tol::ZERO);
    let c_split_on_s1 = c_branch(c.s1 > tol::ZERO);

    let mut warnings = vec!["(c): the inner split tests s2 = 0 inside the s2 != 0 case, so its second branch is unreachable".to_string()];
    if b.certifies() && !certificate.cond3_swapped.holds {
        warnings.push("(b) holds only with the signed cosine term".into());
    }
    if cc.certifies() && !certificate.cond2.holds {
        warnings.push("(c) holds only with the signed cosine term".into());
    }
    Ok(CorollaryReport {
        params: *c,
        certificate,
        a,
        a_lhs_as_printed: (r1 * r2).powi(2),
        b,
        c: cc,
        c_split_on_s1,
        warnings,
    })
}

/// Sampled view of the ping-pong configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KleinReport {
    pub ok: bool,
    /// `1/R_∞(p₂) − R_o(p₁)`.
    pub min_gap: f64,
    pub r_o: f64,
    pub r_inf: f64,
    /// Largest gauge seen on the isometric spheres of `B^{±1}`.
    pub max_b_gauge: f64,
    /// Smallest gauge seen on the ι-images of the isometric spheres of `(ιAι)^{±1}`.
    pub min_a_image_gauge: f64,
}

/// Samples `n` points on each of the four isometric spheres and checks that
/// the `B` side stays inside `K ≤ R_o(p₁)` while the `A` side, carried back
/// by `ι`, stays in `K ≥ 1/R_∞(p₂)`.
pub fn klein_verify(p1: &HeisPoint, p2: &HeisPoint, n: usize, seed: u64) -> Result<KleinReport> {
    let cert = certify(p1, p2)?;
    if !cert.cond1.holds {
        return Err(Error::PreconditionFailed(
            "klein_verify needs the gauge-product condition to hold".into(),
        ));
    }
    let r_o = enclosing_radius(p1)?;
    let r_inf = enclosing_radius(p2)?;
    let b = GroupMatrix::generator_b(p1);
    let iota = GroupMatrix::inversion();
    let a_conj = iota * GroupMatrix::generator_a(p2) * iota;
    let spheres = [
        b.isometric_sphere()?,
        b.sp_inverse()?.isometric_sphere()?,
        a_conj.isometric_sphere()?,
        a_conj.sp_inverse()?.isometric_sphere()?,
    ];
    let gauges: Vec<Vec<f64>> = spheres
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let pts = s.sample(n, seed.wrapping_add(k as u64));
            if k < 2 {
                pts.iter().map(HeisPoint::gauge).collect()
            } else {
                pts.iter()
                    .filter_map(|p| inversion_coords(p).ok())
                    .map(|q| q.gauge())
                    .collect()
            }
        })
        .collect();
    let max_b_gauge = gauges[..2].iter().flatten().copied().fold(0.0, f64::max);
    let min_a_image_gauge = gauges[2..].iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let min_gap = 1.0 / r_inf - r_o;
    let slack = tol::COMPOSED;
    let ok = max_b_gauge <= r_o * (1.0 + slack)
        && min_a_image_gauge >= (1.0 / r_inf) * (1.0 - slack)
        && min_gap >= -slack;
    Ok(KleinReport {
        ok,
        min_gap,
        r_o,
        r_inf,
        max_b_gauge,
        min_a_image_gauge,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordReport {
    pub all_nontrivial: bool,
    /// Smallest `min(‖W − I‖, ‖W + I‖)` over the sampled words.
    pub worst_distance: f64,
    /// The closest word, `a`/`b` for the generators and `A`/`B` for inverses.
    pub worst_word: String,
    pub n_words: usize,
    pub max_len: usize,
}

const LETTERS: [char; 4] = ['a', 'A', 'b', 'B'];

pub fn format_word(word: &[u8]) -> String {
    word.iter().map(|&l| LETTERS[l as usize]).collect()
}

/// `n_words` reduced words in `A^{±1}, B^{±1}` with lengths uniform in
/// `1..=max_len`; letter `l` and `l ^ 1` are mutually inverse.
pub fn random_words(max_len: usize, n_words: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_words)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            let mut w = Vec::with_capacity(len);
            w.push(rng.random_range(0..4u8));
            while w.len() < len {
                let forbidden = w[w.len() - 1] ^ 1;
                let mut next = rng.random_range(0..3u8);
                if next >= forbidden {
                    next += 1;
                }
                w.push(next);
            }
            w
        })
        .collect()
}

pub fn word_matrix(word: &[u8], gens: &[GroupMatrix; 4]) -> GroupMatrix {
    word.iter().fold(GroupMatrix::identity(), |acc, &l| acc * gens[l as usize])
}

/// `[A, A⁻¹, B, B⁻¹]`.
pub fn generators(p1: &HeisPoint, p2: &HeisPoint) -> Result<[GroupMatrix; 4]> {
    let a = GroupMatrix::generator_a(p2);
    let b = GroupMatrix::generator_b(p1);
    Ok([a, a.sp_inverse()?, b, b.sp_inverse()?])
}

/// Searches random reduced words for one within `RELATION_TOL` of `±I`.
pub fn word_nontriviality(
    p1: &HeisPoint,
    p2: &HeisPoint,
    max_len: usize,
    n_words: usize,
    seed: u64,
) -> Result<WordReport> {
    if max_len > MAX_WORD_LEN {
        return Err(Error::BudgetExceeded {
            requested: max_len,
            limit: MAX_WORD_LEN,
        });
    }
    if max_len == 0 || n_words == 0 {
        return Err(Error::InvalidArgument("max_len and n_words must be positive".into()));
    }
    check_inputs(p1, p2)?;
    let gens = generators(p1, p2)?;
    let words = random_words(max_len, n_words, seed);
    let (worst_distance, idx) = words
        .par_iter()
        .enumerate()
        .map(|(i, w)| (word_matrix(w, &gens).distance_to_pm_identity(), i))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    Ok(WordReport {
        all_nontrivial: worst_distance > RELATION_TOL,
        worst_distance,
        worst_word: format_word(&words[idx]),
        n_words,
        max_len,
    })
}
