use std::str::FromStr;

use clap::ValueEnum;
use qheis_core::certifier::{certify_with_margin, klein_verify, word_nontriviality, Certificate, Condition};
use qheis_core::{HeisPoint, Quaternion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::table::{Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// p1 = (0, t1 i), p2 = (0, t2 j); axes t1, t2.
    VerticalVertical,
    /// p1 = (a, 0), p2 = (b, 0) with real a, b; axes a, b.
    HorizontalHorizontal,
    /// p1 = (s1, t1 i), p2 = (s2 e^{i theta}, t2 i); axes s2, theta.
    ComplexSlice,
    /// Gaussian p1, p2 with standard deviation --scale; --samples rows.
    FullRandom,
}

/// `min,max,steps` with `min < max` and `steps ≥ 2`; endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

impl FromStr for Range {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [min, max, steps] = parts[..] else {
            return Err(format!("expected min,max,steps, got `{s}`"));
        };
        let min: f64 = min.parse().map_err(|e| format!("min: {e}"))?;
        let max: f64 = max.parse().map_err(|e| format!("max: {e}"))?;
        let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(format!("need finite min < max, got {min}, {max}"));
        }
        if steps < 2 {
            return Err(format!("need at least 2 steps, got {steps}"));
        }
        Ok(Range { min, max, steps })
    }
}

pub struct ScanSpec {
    pub family: Family,
    pub x: Range,
    pub y: Range,
    pub s1: f64,
    pub t1: f64,
    pub t2: f64,
    pub samples: usize,
    pub scale: f64,
    pub seed: u64,
    pub margin: f64,
    pub klein: Option<usize>,
    pub words: Option<(usize, usize)>,
}

impl ScanSpec {
    fn axis_names(&self) -> [&'static str; 2] {
        match self.family {
            Family::VerticalVertical => ["t1", "t2"],
            Family::HorizontalHorizontal => ["a", "b"],
            Family::ComplexSlice => ["s2", "theta"],
            Family::FullRandom => ["index", "unused"],
        }
    }

    /// Parameter tuples and their points, in row-major grid order.
    fn inputs(&self) -> Vec<([f64; 2], HeisPoint, HeisPoint)> {
        let im = |a: f64, b: f64, c: f64| Quaternion::imaginary(a, b, c);
        match self.family {
            Family::FullRandom => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.samples)
                    .map(|k| {
                        let p1 = HeisPoint::random(&mut rng, self.scale);
                        let p2 = HeisPoint::random(&mut rng, self.scale);
                        ([k as f64, f64::NAN], p1, p2)
                    })
                    .collect()
            }
            family => {
                let mut out = Vec::with_capacity(self.x.steps * self.y.steps);
                for i in 0..self.x.steps {
                    for j in 0..self.y.steps {
                        let (x, y) = (self.x.value(i), self.y.value(j));
                        let (p1, p2) = match family {
                            Family::VerticalVertical => {
                                (HeisPoint::vertical(im(x, 0.0, 0.0)), HeisPoint::vertical(im(0.0, y, 0.0)))
                            }
                            Family::HorizontalHorizontal => (
                                HeisPoint::horizontal(Quaternion::real(x)),
                                HeisPoint::horizontal(Quaternion::real(y)),
                            ),
                            Family::ComplexSlice => (
                                HeisPoint::from_parts(Quaternion::real(self.s1), im(self.t1, 0.0, 0.0)),
                                HeisPoint::from_parts(
                                    Quaternion::new(x * y.cos(), x * y.sin(), 0.0, 0.0),
                                    im(self.t2, 0.0, 0.0),
                                ),
                            ),
                            Family::FullRandom => unreachable!(),
                        };
                        out.push(([x, y], p1, p2));
                    }
                }
                out
            }
        }
    }
}

pub const POINT_COLUMNS: [&str; 14] = [
    "p1_zw", "p1_zx", "p1_zy", "p1_zz", "p1_vx", "p1_vy", "p1_vz", "p2_zw", "p2_zx", "p2_zy", "p2_zz", "p2_vx",
    "p2_vy", "p2_vz",
];

pub const CERT_COLUMNS: [&str; 22] = [
    "cond1_lhs",
    "cond1_rhs",
    "cond1",
    "cond2_applicable",
    "cond2_lhs",
    "cond2_rhs",
    "cond2",
    "cond2_printed_rhs",
    "cond2_printed",
    "cond3_applicable",
    "cond3_lhs",
    "cond3_rhs",
    "cond3",
    "cond3_printed_applicable",
    "cond3_printed_lhs",
    "cond3_printed_rhs",
    "cond3_printed",
    "thm_1_1_lhs",
    "thm_1_1",
    "free_discrete",
    "valid",
    "error",
];

pub fn point_cells(p1: &HeisPoint, p2: &HeisPoint) -> Vec<Cell> {
    p1.to_components().into_iter().chain(p2.to_components()).map(Cell::num).collect()
}

fn cond_cells(c: &Condition) -> [Cell; 4] {
    [Cell::Bool(c.applicable), Cell::num(c.lhs), Cell::num(c.rhs), Cell::Bool(c.certifies())]
}

pub fn certificate_cells(cert: Option<&Certificate>, error: &str) -> Vec<Cell> {
    let Some(c) = cert else {
        let mut row = vec![Cell::Empty; CERT_COLUMNS.len() - 2];
        row.push(Cell::Bool(false));
        row.push(Cell::Text(error.to_string()));
        return row;
    };
    let [a2, l2, r2, h2] = cond_cells(&c.cond2);
    let [a3, l3, r3, h3] = cond_cells(&c.cond3_swapped);
    let [ap, lp, rp, hp] = cond_cells(&c.cond3_as_printed);
    vec![
        Cell::num(c.cond1.lhs),
        Cell::num(c.cond1.rhs),
        Cell::Bool(c.cond1.holds),
        a2,
        l2,
        r2,
        h2,
        Cell::num(c.cond2_as_printed.rhs),
        Cell::Bool(c.cond2_as_printed.certifies()),
        a3,
        l3,
        r3,
        h3,
        ap,
        lp,
        rp,
        hp,
        Cell::num(c.thm_1_1.lhs),
        Cell::Bool(c.thm_1_1.holds),
        Cell::Bool(c.overall_free_discrete),
        Cell::Bool(true),
        Cell::Empty,
    ]
}

pub fn run(spec: &ScanSpec) -> Table {
    let [xa, ya] = spec.axis_names();
    let mut header: Vec<String> = vec![xa.into()];
    if spec.family != Family::FullRandom {
        header.push(ya.into());
    }
    header.extend(POINT_COLUMNS.iter().chain(&CERT_COLUMNS).map(|s| s.to_string()));
    if spec.klein.is_some() {
        header.extend(["klein_ok", "klein_min_gap"].map(String::from));
    }
    if spec.words.is_some() {
        header.extend(["words_nontrivial", "words_worst_distance"].map(String::from));
    }
    let inputs = spec.inputs();
    let rows = inputs
        .par_iter()
        .enumerate()
        .map(|(k, (params, p1, p2))| {
            let mut row = vec![Cell::num(params[0])];
            if spec.family != Family::FullRandom {
                row.push(Cell::num(params[1]));
            }
            row.extend(point_cells(p1, p2));
            let cert = certify_with_margin(p1, p2, spec.margin);
            let err = cert.as_ref().err().map(ToString::to_string).unwrap_or_default();
            row.extend(certificate_cells(cert.as_ref().ok(), &err));
            let seed = spec.seed.wrapping_add(k as u64);
            if let Some(n) = spec.klein {
                match cert.as_ref().ok().filter(|c| c.cond1.holds).and_then(|_| klein_verify(p1, p2, n, seed).ok()) {
                    Some(r) => row.extend([Cell::Bool(r.ok), Cell::num(r.min_gap)]),
                    None => row.extend([Cell::Empty, Cell::Empty]),
                }
            }
            if let Some((len, n)) = spec.words {
                match word_nontriviality(p1, p2, len, n, seed) {
                    Ok(r) => row.extend([Cell::Bool(r.all_nontrivial), Cell::num(r.worst_distance)]),
                    Err(_) => row.extend([Cell::Empty, Cell::Empty]),
                }
            }
            row
        })
        .collect();
    Table { header, rows }
}
