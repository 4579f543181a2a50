//! Empirical time complexity of the measures.
//!
//! Closed-form measures are timed on a full `n x d` point set (expected
//! `O(n² d)`). The S-ersatz is timed as a per-input scan over `d` columns of
//! `(x_k, y)` scatters (expected `O(n d)`); the columns are gathered before
//! timing starts. Timing runs single-threaded on a
//! monotonic clock; each repetition times a batch of calls sized during
//! warm-up so that one batch spans at least `min_batch`.

use std::hint::black_box;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::discrepancy::{compute, s_ersatz, MeasureKind};
use crate::sampling::{generate, SamplerKind};
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingConfig {
    /// Sample sizes swept at `fixed_d`.
    pub n_grid: Vec<usize>,
    /// Dimensions swept at `fixed_n`.
    pub d_grid: Vec<usize>,
    pub fixed_d: usize,
    pub fixed_n: usize,
    /// Timed repetitions per cell; the median is reported.
    pub reps: usize,
    pub warmup: usize,
    pub min_batch: Duration,
    pub seed: u64,
}

impl Default for TimingConfig {
    fn default() -> Self {
        TimingConfig {
            n_grid: vec![250, 500, 1000, 2000],
            d_grid: vec![10, 20, 40, 80],
            fixed_d: 5,
            fixed_n: 500,
            reps: 20,
            warmup: 3,
            min_batch: Duration::from_millis(5),
            seed: 1,
        }
    }
}

impl TimingConfig {
    /// Smaller grid and fewer repetitions, for smoke runs.
    pub fn quick() -> Self {
        TimingConfig {
            n_grid: vec![125, 250, 500],
            d_grid: vec![8, 16, 32],
            fixed_n: 250,
            reps: 5,
            warmup: 1,
            min_batch: Duration::from_millis(2),
            ..TimingConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub measure: MeasureKind,
    /// `"n"` or `"d"`: which grid this row belongs to.
    pub facet: String,
    pub n: usize,
    pub d: usize,
    /// Median seconds per call.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub measure: MeasureKind,
    pub facet: String,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
    pub slopes: Vec<SlopeFit>,
}

impl TimingReport {
    pub fn slope(&self, measure: MeasureKind, facet: &str) -> Option<f64> {
        self.slopes
            .iter()
            .find(|s| s.measure == measure && s.facet == facet)
            .map(|s| s.slope)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(["measure", "facet", "n", "d", "seconds"])?;
        for r in &self.rows {
            wtr.write_record([
                r.measure.to_string(),
                r.facet.clone(),
                r.n.to_string(),
                r.d.to_string(),
                r.seconds.to_string(),
            ])?;
        }
        for s in &self.slopes {
            wtr.write_record([
                s.measure.to_string(),
                format!("slope_{}", s.facet),
                String::new(),
                String::new(),
                s.slope.to_string(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Least-squares slope of `ln(y)` against `ln(x)`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn run_once(kind: MeasureKind, points: &Matrix, columns: &[Vec<f64>], y: &[f64]) -> f64 {
    match kind {
        MeasureKind::SErsatz => columns.iter().map(|x| s_ersatz(x, y).expect("unit data")).sum(),
        _ => compute(kind, points).expect("unit data").value,
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

struct Cell {
    kind: MeasureKind,
    facet: &'static str,
    n: usize,
    d: usize,
    points: Matrix,
    columns: Vec<Vec<f64>>,
    y: Vec<f64>,
    batch: usize,
    per_call: Vec<f64>,
}

impl Cell {
    fn new(cfg: &TimingConfig, kind: MeasureKind, facet: &'static str, n: usize, d: usize) -> Result<Cell> {
        let points = generate(SamplerKind::random(cfg.seed), n, d)?.into_inner();
        let y = generate(SamplerKind::random(cfg.seed.wrapping_add(1)), n, 1)?.into_inner().into_vec();
        // the S-ersatz scans columns; gather them once, outside the timed region
        let columns = match kind {
            MeasureKind::SErsatz => (0..d).map(|k| points.column(k)).collect(),
            _ => Vec::new(),
        };
        Ok(Cell { kind, facet, n, d, points, columns, y, batch: 1, per_call: Vec::new() })
    }

    fn run_batch(&self) -> Duration {
        let start = Instant::now();
        for _ in 0..self.batch {
            black_box(run_once(
                self.kind,
                black_box(&self.points),
                black_box(&self.columns),
                black_box(&self.y),
            ));
        }
        start.elapsed()
    }

    /// Doubles the batch until one batch spans `min_batch`.
    fn calibrate(&mut self, cfg: &TimingConfig) {
        for _ in 0..cfg.warmup.max(1) {
            while self.run_batch() < cfg.min_batch && self.batch < 1 << 20 {
                self.batch *= 2;
            }
        }
    }
}

/// Times every measure over both grids and fits log-log slopes per facet.
///
/// Repetitions are interleaved round-robin across all cells, so a slow
/// stretch on a shared machine is spread over the grid instead of inflating
/// one cell.
pub fn timing_study(cfg: &TimingConfig) -> Result<TimingReport> {
    if cfg.reps < 5 {
        return Err(Error::Domain(format!("timing needs reps >= 5, got {}", cfg.reps)));
    }
    if cfg.n_grid.len() < 2 || cfg.d_grid.len() < 2 {
        return Err(Error::Domain("each timing grid needs at least two points".into()));
    }
    let mut cells = Vec::new();
    for kind in MeasureKind::ALL {
        for &n in &cfg.n_grid {
            cells.push(Cell::new(cfg, kind, "n", n, cfg.fixed_d)?);
        }
        for &d in &cfg.d_grid {
            cells.push(Cell::new(cfg, kind, "d", cfg.fixed_n, d)?);
        }
    }
    for cell in &mut cells {
        cell.calibrate(cfg);
    }
    for _ in 0..cfg.reps {
        for cell in &mut cells {
            let t = cell.run_batch().as_secs_f64() / cell.batch as f64;
            cell.per_call.push(t);
        }
    }

    let rows: Vec<TimingRow> = cells
        .into_iter()
        .map(|c| TimingRow {
            measure: c.kind,
            facet: c.facet.into(),
            n: c.n,
            d: c.d,
            seconds: median(c.per_call),
        })
        .collect();
    let mut slopes = Vec::new();
    for kind in MeasureKind::ALL {
        for facet in ["n", "d"] {
            let (x, y): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.measure == kind && r.facet == facet)
                .map(|r| (if facet == "n" { r.n } else { r.d } as f64, r.seconds))
                .unzip();
            slopes.push(SlopeFit { measure: kind, facet: facet.into(), slope: fit_slope(&x, &y) });
        }
    }
    Ok(TimingReport { rows, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let x = [10.0, 20.0, 40.0, 80.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.7)).collect();
        assert!((fit_slope(&x, &y) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn rejects_too_few_reps() {
        let cfg = TimingConfig { reps: 4, ..TimingConfig::quick() };
        assert!(timing_study(&cfg).is_err());
    }
}
