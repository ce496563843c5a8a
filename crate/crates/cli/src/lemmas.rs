use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use qheis_core::bounds::{brute_force_max, BoundReport, Objective};
use qheis_core::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::table::{Cell, Table};

#[derive(Debug, Serialize)]
pub struct Entry {
    pub name: &'static str,
    pub report: BoundReport,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct LemmaRun {
    pub resolution: usize,
    pub seed: u64,
    pub entries: Vec<Entry>,
    pub all_pass: bool,
}

/// Absolute gap allowed per objective. The 1-D objectives are refined by
/// golden section to near machine precision; `eta` carries a 2-D grid
/// error; the sphere diameter is a sampled maximum polished by compass search.
fn tolerance(o: &Objective) -> f64 {
    match o {
        Objective::HMax | Objective::HMin => 1e-9,
        Objective::FAlpha { .. } => 1e-6,
        Objective::Eta { .. } | Objective::SphereDiameter { .. } => 1e-4,
    }
}

fn label(o: &Objective) -> &'static str {
    match o {
        Objective::HMax => "shape bound maximum h(0) = 4",
        Objective::HMin => "shape bound minimum h(pi/2) = 2",
        Objective::FAlpha { .. } => "max of f_alpha",
        Objective::Eta { .. } => "max of eta equals h(psi1)",
        Objective::SphereDiameter { .. } => "sphere containment radius",
    }
}

pub fn run(resolution: usize, samples: usize, seed: u64) -> Result<LemmaRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut objectives = vec![Objective::HMax, Objective::HMin];
    objectives.extend((0..5).map(|_| Objective::FAlpha { alpha: rng.random_range(-FRAC_PI_4..=FRAC_PI_4) }));
    objectives.extend((0..3).map(|_| Objective::Eta { psi1: rng.random_range(-FRAC_PI_2..=FRAC_PI_2) }));
    objectives.extend([0.0, 0.6, 1.2].into_iter().enumerate().map(|(k, psi1)| Objective::SphereDiameter {
        radius: 1.0,
        psi1,
        samples,
        seed: seed.wrapping_add(k as u64),
    }));
    let entries = objectives
        .iter()
        .map(|o| {
            let report = brute_force_max(o, resolution)?;
            let tolerance = tolerance(o);
            Ok(Entry {
                name: label(o),
                pass: report.abs_gap < tolerance,
                report,
                tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LemmaRun {
        resolution,
        seed,
        all_pass: entries.iter().all(|e| e.pass),
        entries,
    })
}

fn parameter(o: &Objective) -> f64 {
    match *o {
        Objective::FAlpha { alpha } => alpha,
        Objective::Eta { psi1 } | Objective::SphereDiameter { psi1, .. } => psi1,
        Objective::HMax | Objective::HMin => f64::NAN,
    }
}

pub fn table(run: &LemmaRun) -> Table {
    let mut t = Table::new(
        ["function", "parameter", "closed_form", "brute_force", "unrefined", "abs_gap", "tolerance", "pass"]
            .map(String::from)
            .to_vec(),
    );
    for e in &run.entries {
        let r = &e.report;
        t.rows.push(vec![
            Cell::Text(r.objective.name().into()),
            Cell::num(parameter(&r.objective)),
            Cell::num(r.closed_form),
            Cell::num(r.brute_force),
            Cell::num(r.unrefined),
            Cell::num(r.abs_gap),
            Cell::num(e.tolerance),
            Cell::Bool(e.pass),
        ]);
    }
    t
}
