//! Prime sweeps: preimage censuses, solver work counters and intersection exponents.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{evaluate, parse, Bindings, ExprError};
use crate::field::{make_field_with, solve_dlp_bsgs, Family, FieldParams, ProblemInstance, DEFAULT_WORK_BOUND};

/// Largest prime for which the census is advertised as exact.
pub const EXACT_CENSUS_MAX: u64 = 1 << 14;

pub const CSV_HEADER: [&str; 10] = [
    "prime",
    "family",
    "g",
    "n",
    "avg_preimage",
    "max_preimage",
    "solvable_fraction",
    "exhaustive_ops",
    "bsgs_ops",
    "intersection_exponent",
];

/// `log2 f(p) - log2 p` for the real lift of the family, evaluated in the log domain.
/// Roughly the log of the number of level lines `y0 + m p` the curve crosses on `(0, p)`.
pub fn intersection_exponent(family: Family, field: &FieldParams, n: u32) -> Result<f64> {
    lift_exponent(family, field.p, field.g, field.g1.unwrap_or(3), n)
}

/// `intersection_exponent` for arbitrary real bases; `g` need not generate anything mod `p`.
pub fn lift_exponent(family: Family, p: u64, g: u64, g1: u64, n: u32) -> Result<f64> {
    if matches!(family, Family::Recip | Family::Spp) {
        return Err(Error::InvalidArgument(format!("{family} has no increasing real lift")));
    }
    let e = parse(family.formula())?;
    let b = Bindings::new(p as f64, g as f64, n, g1.max(2) as f64)?;
    let lf = evaluate(&e, &b, true)?;
    if !lf.is_finite() {
        return Err(Error::Expr(ExprError::Overflow(format!("log2 of {} at x={p}", family.formula()))));
    }
    Ok(lf - (p as f64).log2())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    /// Number of preimages -> number of targets `y` in `[1, p-1]` with that many.
    pub histogram: BTreeMap<u64, u64>,
    /// Domain points mapping to `0`, which lies outside the target range.
    pub zero_hits: u64,
    pub mean: f64,
    pub max: u64,
    pub solvable_fraction: f64,
    /// Domain points evaluated.
    pub ops: u64,
}

impl Census {
    /// Total preimages, including those landing on `0`.
    pub fn total(&self) -> u64 {
        self.histogram.iter().map(|(k, v)| k * v).sum::<u64>() + self.zero_hits
    }
}

pub fn preimage_census(family: Family, field: &FieldParams, n: u32) -> Result<Census> {
    preimage_census_bounded(family, field, n, DEFAULT_WORK_BOUND)
}

/// Counts `|{x in [1, p-1] : f(x) = y}|` for every `y` with a single pass over the domain.
pub fn preimage_census_bounded(family: Family, field: &FieldParams, n: u32, bound: u64) -> Result<Census> {
    if family == Family::Spp {
        return Err(Error::InvalidArgument("SPP has no fixed census; use the SPP solver".into()));
    }
    let p = field.p;
    if p - 1 > bound {
        return Err(Error::WorkBound { needed: (p - 1) as u128, bound });
    }
    let inst = ProblemInstance::new(family, field.clone(), family.uses_n().then_some(n), 1)?;
    let mut counts = vec![0u64; p as usize];
    for x in 1..p {
        counts[inst.value_at(x) as usize] += 1;
    }
    let mut histogram = BTreeMap::new();
    for &c in &counts[1..] {
        *histogram.entry(c).or_insert(0) += 1;
    }
    let hits: u64 = counts[1..].iter().sum();
    let solvable = counts[1..].iter().filter(|&&c| c > 0).count();
    Ok(Census {
        histogram,
        zero_hits: counts[0],
        mean: hits as f64 / (p - 1) as f64,
        max: counts[1..].iter().copied().max().unwrap_or(0),
        solvable_fraction: solvable as f64 / (p - 1) as f64,
        ops: p - 1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    pub primes: Vec<u64>,
    /// Generator to use at every prime; `None` picks the smallest one per prime.
    pub g: Option<u64>,
    pub g1: Option<u64>,
    pub n: u32,
    /// Random DLP targets per row for the BSGS counter.
    pub trials: u32,
    pub seed: u64,
    pub work_bound: u64,
    pub out: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            families: vec![Family::Dlp, Family::Tlp],
            primes: vec![7, 11, 13],
            g: None,
            g1: None,
            n: 5,
            trials: 16,
            seed: 0,
            work_bound: DEFAULT_WORK_BOUND,
            out: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.n < 5 {
            return Err(Error::InvalidArgument(format!("n must be at least 5, got {}", self.n)));
        }
        if self.families.is_empty() || self.primes.is_empty() {
            return Err(Error::InvalidArgument("sweep needs at least one family and one prime".into()));
        }
        if let Some(f) = self.families.iter().find(|&&f| f == Family::Spp) {
            return Err(Error::InvalidArgument(format!("{f} cannot be swept")));
        }
        for &p in &self.primes {
            make_field_with(p, self.g, self.g1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    WorkBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub prime: u64,
    pub family: Family,
    pub g: u64,
    pub n: u32,
    pub avg_preimage_count: Option<f64>,
    pub max_preimage_count: Option<u64>,
    pub solvable_fraction: Option<f64>,
    pub exhaustive_ops: Option<u64>,
    /// Largest BSGS count over the row's random targets (DLP rows only).
    pub bsgs_ops: Option<u64>,
    pub intersection_exponent: Option<f64>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub rows: Vec<ExperimentRow>,
}

fn row_seed(seed: u64, family: Family, p: u64) -> u64 {
    seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((family as u64) << 56)
}

fn run_row(cfg: &SweepConfig, family: Family, p: u64) -> Result<ExperimentRow> {
    let field = make_field_with(p, cfg.g, cfg.g1)?;
    let census = match preimage_census_bounded(family, &field, cfg.n, cfg.work_bound) {
        Ok(c) => Some(c),
        Err(Error::WorkBound { .. }) => None,
        Err(e) => return Err(e),
    };
    let bsgs_ops = if family == Family::Dlp {
        let mut rng = ChaCha8Rng::seed_from_u64(row_seed(cfg.seed, family, p));
        let mut worst = 0;
        for _ in 0..cfg.trials {
            worst = worst.max(solve_dlp_bsgs(&field, rng.gen_range(1..p))?.ops);
        }
        Some(worst)
    } else {
        None
    };
    Ok(ExperimentRow {
        prime: p,
        family,
        g: field.g,
        n: cfg.n,
        avg_preimage_count: census.as_ref().map(|c| c.mean),
        max_preimage_count: census.as_ref().map(|c| c.max),
        solvable_fraction: census.as_ref().map(|c| c.solvable_fraction),
        exhaustive_ops: census.as_ref().map(|c| c.ops),
        bsgs_ops,
        intersection_exponent: intersection_exponent(family, &field, cfg.n).ok(),
        status: if census.is_some() { RowStatus::Ok } else { RowStatus::WorkBound },
    })
}

/// One row per `(family, prime)`, computed in parallel and sorted; writes CSV when `out` is set.
pub fn hardness_sweep(cfg: &SweepConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let jobs: Vec<(Family, u64)> =
        cfg.families.iter().flat_map(|&f| cfg.primes.iter().map(move |&p| (f, p))).collect();
    let mut rows = jobs.par_iter().map(|&(f, p)| run_row(cfg, f, p)).collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| (a.family.name(), a.prime).cmp(&(b.family.name(), b.prime)));
    rows.dedup_by(|a, b| a.family == b.family && a.prime == b.prime);
    let report = ExperimentReport { seed: cfg.seed, rows };
    if let Some(path) = &cfg.out {
        write_csv(&report, path)?;
    }
    Ok(report)
}

/// `%g`-style formatting with six significant digits.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    let s = if (-5..6).contains(&exp) {
        format!("{:.*}", (5 - exp).max(0) as usize, v)
    } else {
        format!("{v:.5e}")
    };
    trim_zeros(&s)
}

fn trim_zeros(s: &str) -> String {
    let (mantissa, exp) = match s.find('e') {
        Some(i) => s.split_at(i),
        None => (s, ""),
    };
    let m = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
    format!("{m}{exp}")
}

pub fn csv_records(report: &ExperimentReport) -> Vec<[String; 10]> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    report
        .rows
        .iter()
        .map(|r| {
            [
                r.prime.to_string(),
                r.family.to_string(),
                r.g.to_string(),
                r.n.to_string(),
                opt(r.avg_preimage_count.map(sig6)),
                opt(r.max_preimage_count.map(|v| v.to_string())),
                opt(r.solvable_fraction.map(sig6)),
                opt(r.exhaustive_ops.map(|v| v.to_string())),
                opt(r.bsgs_ops.map(|v| v.to_string())),
                opt(r.intersection_exponent.map(sig6)),
            ]
        })
        .collect()
}

pub fn write_csv_to<W: Write>(report: &ExperimentReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for rec in csv_records(report) {
        out.write_record(&rec)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    write_csv_to(report, std::fs::File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn exponent_examples() {
        let f11 = make_field(11, Some(2)).unwrap();
        let lg = 11f64.log2();
        assert!((intersection_exponent(Family::Dlp, &f11, 5).unwrap() - (11.0 - lg)).abs() < 1e-9);
        assert!((intersection_exponent(Family::Dlp, &f11, 5).unwrap() - 7.541).abs() < 1e-3);
        assert!((intersection_exponent(Family::Tlp, &f11, 5).unwrap() - 10.0 * lg).abs() < 1e-9);
        assert!((intersection_exponent(Family::Tlp, &f11, 5).unwrap() - 34.59).abs() < 1e-2);
        assert!(intersection_exponent(Family::Id, &f11, 5).unwrap().abs() < 1e-12);
        assert!(intersection_exponent(Family::Recip, &f11, 5).is_err());
        // 2 does not generate mod 1009; the real lift does not care
        let lg = 1009f64.log2();
        assert!((lift_exponent(Family::Dlp, 1009, 2, 3, 5).unwrap() - (1009.0 - lg)).abs() < 1e-9);
        assert!((lift_exponent(Family::Rfp, 1009, 2, 3, 5).unwrap() - 4.0 * lg).abs() < 1e-9);
    }

    #[test]
    fn census_examples() {
        let f7 = make_field(7, Some(3)).unwrap();
        let tlp = preimage_census(Family::Tlp, &f7, 5).unwrap();
        assert_eq!(tlp.total(), 6);
        assert_eq!(tlp.max, 2);
        let dlp = preimage_census(Family::Dlp, &make_field(13, None).unwrap(), 5).unwrap();
        assert_eq!(dlp.histogram, BTreeMap::from([(1, 12)]));
        assert_eq!(preimage_census(Family::Poly, &f7, 5).unwrap().total(), 6);
    }

    #[test]
    fn formatting() {
        assert_eq!(sig6(7.5406), "7.5406");
        assert_eq!(sig6(34.594316186), "34.5943");
        assert_eq!(sig6(1.0), "1");
        assert_eq!(sig6(0.5), "0.5");
        assert_eq!(sig6(123456789.0), "1.23457e8");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn sweep_rows() {
        let rep = hardness_sweep(&SweepConfig::default()).unwrap();
        assert_eq!(rep.rows.len(), 6);
        for r in rep.rows.iter().filter(|r| r.family == Family::Dlp) {
            assert_eq!(r.avg_preimage_count, Some(1.0));
            assert!(r.bsgs_ops.is_some());
        }
        assert_eq!(rep.rows[0].family, Family::Dlp);
        assert_eq!(rep.rows.iter().map(|r| r.prime).collect::<Vec<_>>(), [7, 11, 13, 7, 11, 13]);
    }

    #[test]
    fn work_bound_marks_row() {
        let cfg = SweepConfig { work_bound: 8, ..SweepConfig::default() };
        let rep = hardness_sweep(&cfg).unwrap();
        let marked: Vec<_> = rep.rows.iter().filter(|r| r.status == RowStatus::WorkBound).map(|r| r.prime).collect();
        assert_eq!(marked, [11, 13, 11, 13]);
        assert!(rep.rows.iter().all(|r| r.status == RowStatus::Ok || r.avg_preimage_count.is_none()));
    }
}
