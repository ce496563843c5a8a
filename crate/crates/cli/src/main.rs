//! `qheis`: certify pairs of Heisenberg translations, check the distance
//! lemmas against brute force, scan parameter families, and search for
//! short relations.
//!
//! Exit codes: 0 success or the tested property holds, 1 it does not hold,
//! 2 usage or input error.

mod lemmas;
mod scan;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use qheis_core::certifier::{certify_with_margin, word_nontriviality};
use qheis_core::{tol, HeisPoint, Quaternion};
use serde::Serialize;

use scan::{Family, Range, ScanSpec};
use table::{Cell, Table};

#[derive(Parser)]
#[command(name = "qheis", version, about = "Free and discrete pairs of quaternionic Heisenberg translations")]
struct Cli {
    /// Absolute margin on every `lhs >= rhs` test.
    #[arg(long, global = true, default_value_t = tol::MARGIN)]
    tol: f64,

    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Emit JSON (default for certify, lemmas, words).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV (default for scan).
    #[arg(long, global = true)]
    csv: bool,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// p1 = (zeta, v) as `zw,zx,zy,zz,vx,vy,vz`; an eighth value is read as
    /// `zw,zx,zy,zz,vw,vx,vy,vz` and `vw` must be zero.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    p1: HeisPoint,

    /// p2, same encoding as p1.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    p2: HeisPoint,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every condition for the pair; exit 0 iff one of the
    /// sufficient conditions certifies it free and discrete.
    Certify(Pair),

    /// Compare each closed-form extremum with a grid or Monte Carlo oracle;
    /// exit 0 iff every gap is within its tolerance.
    Lemmas {
        /// Grid points per axis (at least 100).
        #[arg(long, default_value_t = 500)]
        resolution: usize,
        /// Monte Carlo samples for the sphere containment radius.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },

    /// Certify every point of a parameter grid and write one row per point.
    ///
    /// Columns: the two axis values (one `index` column for full-random),
    /// the 14 components of p1 and p2, then cond1_{lhs,rhs}, cond1,
    /// cond2_{applicable,lhs,rhs}, cond2, cond2_printed_rhs, cond2_printed,
    /// cond3_{applicable,lhs,rhs}, cond3 (role-swapped),
    /// cond3_printed_{applicable,lhs,rhs}, cond3_printed, thm_1_1_lhs,
    /// thm_1_1, free_discrete, valid, error; optionally klein_ok,
    /// klein_min_gap and words_nontrivial, words_worst_distance. Booleans are
    /// 0/1, missing values are empty; rows with valid = 0 are degenerate
    /// pairs and carry the reason in `error`.
    Scan {
        #[arg(long, value_enum)]
        family: Family,
        /// First axis as `min,max,steps`.
        #[arg(long, default_value = "0.5,5,100", allow_hyphen_values = true)]
        x: Range,
        /// Second axis as `min,max,steps`.
        #[arg(long, default_value = "0.5,5,100", allow_hyphen_values = true)]
        y: Range,
        /// |zeta_1| for complex-slice.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        s1: f64,
        /// v_1 = t1 i for complex-slice.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t1: f64,
        /// v_2 = t2 i for complex-slice.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t2: f64,
        /// Rows for full-random.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Standard deviation of the full-random components.
        #[arg(long, default_value_t = 2.0)]
        scale: f64,
        /// Add klein_verify columns with this many samples per sphere.
        #[arg(long)]
        klein: Option<usize>,
        /// Add word-search columns, as `max_len,n_words`.
        #[arg(long, value_parser = parse_words)]
        words: Option<(usize, usize)>,
    },

    /// Multiply random reduced words in A, B and their inverses; exit 0 iff
    /// none is within 1e-4 of the identity up to sign.
    Words {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 1000)]
        n_words: usize,
    },
}

fn parse_point(s: &str) -> Result<HeisPoint, String> {
    let c = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<Result<Vec<f64>, String>>()?;
    if c.iter().any(|x| !x.is_finite()) {
        return Err("components must be finite".into());
    }
    let v = match c.len() {
        7 => Quaternion::imaginary(c[4], c[5], c[6]),
        8 if c[4] == 0.0 => Quaternion::imaginary(c[5], c[6], c[7]),
        8 => return Err(format!("v must be purely imaginary, got real part {}", c[4])),
        n => return Err(format!("expected 7 components (or 8 with a zero real part of v), got {n}")),
    };
    HeisPoint::new(Quaternion::new(c[0], c[1], c[2], c[3]), v).map_err(|e| e.to_string())
}

fn parse_words(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected max_len,n_words")?;
    Ok((
        a.trim().parse().map_err(|e| format!("max_len: {e}"))?,
        b.trim().parse().map_err(|e| format!("n_words: {e}"))?,
    ))
}

enum Format {
    Json,
    Csv,
}

struct Output {
    format: Format,
    path: Option<PathBuf>,
}

impl Output {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        })
    }

    fn emit<T: Serialize>(&self, value: &T, table: impl FnOnce() -> Table) -> Result<()> {
        let mut w = self.writer()?;
        match self.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, value)?;
                writeln!(w)?;
            }
            Format::Csv => table().write_csv(&mut w)?,
        }
        w.flush()?;
        Ok(())
    }
}

/// Outcome of a command that ran: whether the tested property holds.
fn run(cli: Cli) -> Result<bool> {
    let format = |default_csv: bool| {
        if cli.csv || (default_csv && !cli.json) {
            Format::Csv
        } else {
            Format::Json
        }
    };
    match &cli.command {
        Command::Certify(pair) => {
            let out = Output { format: format(false), path: cli.out.clone() };
            let cert = certify_with_margin(&pair.p1, &pair.p2, cli.tol)?;
            out.emit(&cert, || {
                let mut header: Vec<String> = scan::POINT_COLUMNS.iter().map(|s| s.to_string()).collect();
                header.extend(scan::CERT_COLUMNS.iter().map(|s| s.to_string()));
                let mut row = scan::point_cells(&pair.p1, &pair.p2);
                row.extend(scan::certificate_cells(Some(&cert), ""));
                Table { header, rows: vec![row] }
            })?;
            Ok(cert.overall_free_discrete)
        }
        Command::Lemmas { resolution, samples } => {
            let out = Output { format: format(false), path: cli.out.clone() };
            let report = lemmas::run(*resolution, *samples, cli.seed)?;
            out.emit(&report, || lemmas::table(&report))?;
            Ok(report.all_pass)
        }
        Command::Scan { family, x, y, s1, t1, t2, samples, scale, klein, words } => {
            let out = Output { format: format(true), path: cli.out.clone() };
            let spec = ScanSpec {
                family: *family,
                x: *x,
                y: *y,
                s1: *s1,
                t1: *t1,
                t2: *t2,
                samples: *samples,
                scale: *scale,
                seed: cli.seed,
                margin: cli.tol,
                klein: *klein,
                words: *words,
            };
            let t = scan::run(&spec);
            let mut w = out.writer()?;
            match out.format {
                Format::Csv => t.write_csv(&mut w)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &t.to_json())?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
            Ok(true)
        }
        Command::Words { pair, max_len, n_words } => {
            let out = Output { format: format(false), path: cli.out.clone() };
            let r = word_nontriviality(&pair.p1, &pair.p2, *max_len, *n_words, cli.seed)?;
            out.emit(&r, || {
                let mut t = Table::new(
                    ["all_nontrivial", "worst_distance", "worst_word", "n_words", "max_len"].map(String::from).to_vec(),
                );
                t.rows.push(vec![
                    Cell::Bool(r.all_nontrivial),
                    Cell::num(r.worst_distance),
                    Cell::Text(r.worst_word.clone()),
                    Cell::Int(r.n_words as u64),
                    Cell::Int(r.max_len as u64),
                ]);
                t
            })?;
            Ok(r.all_nontrivial)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
