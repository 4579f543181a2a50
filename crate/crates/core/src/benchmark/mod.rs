//! Randomized benchmark of discrepancy-based importance against Jansen
//! total-order indices.
//!
//! Each simulation draws a sampling method, base sample size, dimension,
//! test-model seed and input distribution, runs the full pipeline and records
//! one agreement `r` per measure. Everything is a pure function of
//! `(master_seed, sim_id)`.

mod mood;
mod report;
mod timing;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use mood::{holm_adjust, mood_all_pairs, mood_pairwise, mood_test, MoodTestResult};
pub use report::{read_results_csv, write_mood_csv, write_results_csv, write_summary_csv};
pub use timing::{fit_slope, timing_study, SlopeFit, TimingConfig, TimingReport, TimingRow};

use crate::discrepancy::MeasureKind;
use crate::distributions::{transform, InputDistribution};
use crate::metafunction::{build_metafunction, MetaFunction};
use crate::sampling::rng::derive_seed;
use crate::sampling::{build_design_pair, Sobol, SamplerKind};
use crate::sensitivity::{agreement, discrepancy_importance, jansen_total_order};
use crate::{Error, Result};

/// Simulations run by default; the full study uses 512.
pub const DESK_SCALE_SIMS: usize = 128;

pub const TAU_RANGE: (u32, u32) = (1, 2);
pub const N_S_RANGE: (u32, u32) = (10, 100);
pub const D_RANGE: (u32, u32) = (3, 50);
pub const EPSILON_RANGE: (u32, u32) = (1, 200);
pub const PHI_RANGE: (u32, u32) = (1, 8);

// stream ids under the master seed
const FACTOR_STREAM: u64 = 0xfac7;
const DESIGN_STREAM: u64 = 1;
const DISTRIBUTION_STREAM: u64 = 2;

/// One row of the factor matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSample {
    /// 1 = random numbers, 2 = scrambled Sobol'.
    pub tau: u32,
    pub n_s: u32,
    pub d: u32,
    pub epsilon: u32,
    pub phi: u32,
    pub sim_id: u64,
    pub master_seed: u64,
}

impl FactorSample {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("tau", self.tau, TAU_RANGE),
            ("n_s", self.n_s, N_S_RANGE),
            ("d", self.d, D_RANGE),
            ("epsilon", self.epsilon, EPSILON_RANGE),
            ("phi", self.phi, PHI_RANGE),
        ];
        for (name, v, (lo, hi)) in checks {
            if !(lo..=hi).contains(&v) {
                return Err(Error::Domain(format!("{name}={v} outside [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    pub fn sampler(&self) -> SamplerKind {
        let seed = derive_seed(self.master_seed, &[self.sim_id, DESIGN_STREAM]);
        if self.tau == 1 {
            SamplerKind::random(seed)
        } else {
            SamplerKind::sobol(seed, true)
        }
    }

    pub fn distribution_seed(&self) -> u64 {
        derive_seed(self.master_seed, &[self.sim_id, DISTRIBUTION_STREAM])
    }

    pub fn metafunction(&self) -> Result<MetaFunction> {
        build_metafunction(self.d as usize, self.epsilon as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub factors: FactorSample,
    /// `None` when `r` is undefined (constant output or constant scores).
    pub r_by_measure: BTreeMap<MeasureKind, Option<f64>>,
    /// Seconds per pipeline stage. Not part of the deterministic output.
    #[serde(default)]
    pub wall_times: BTreeMap<String, f64>,
}

impl SimulationRecord {
    pub fn r(&self, kind: MeasureKind) -> Option<f64> {
        self.r_by_measure.get(&kind).copied().flatten()
    }
}

fn scale_discrete(u: f64, (lo, hi): (u32, u32)) -> u32 {
    let span = (hi - lo + 1) as f64;
    lo + ((u * span).floor() as u32).min(hi - lo)
}

/// Maps scrambled Sobol' points through the discrete-uniform factor ranges.
/// Row `i` does not depend on `n_sims`, so any simulation can be replayed from
/// `(master_seed, sim_id)` alone.
pub fn sample_factors(n_sims: usize, master_seed: u64) -> Result<Vec<FactorSample>> {
    if n_sims == 0 {
        return Err(Error::Domain("need at least one simulation".into()));
    }
    let pts = Sobol::new(5)?.points(n_sims, Some(derive_seed(master_seed, &[FACTOR_STREAM])))?;
    Ok(pts
        .chunks_exact(5)
        .enumerate()
        .map(|(i, u)| FactorSample {
            tau: scale_discrete(u[0], TAU_RANGE),
            n_s: scale_discrete(u[1], N_S_RANGE),
            d: scale_discrete(u[2], D_RANGE),
            epsilon: scale_discrete(u[3], EPSILON_RANGE),
            phi: scale_discrete(u[4], PHI_RANGE),
            sim_id: i as u64,
            master_seed,
        })
        .collect())
}

/// Factors for a single simulation id, identical to row `sim_id` of
/// [`sample_factors`].
pub fn factors_for(sim_id: u64, master_seed: u64) -> Result<FactorSample> {
    let mut all = sample_factors(sim_id as usize + 1, master_seed)?;
    Ok(all.pop().expect("non-empty"))
}

/// Runs the full pipeline for one factor row. Failures inside the pipeline
/// are recorded as undefined `r` values rather than propagated.
pub fn run_simulation(f: &FactorSample) -> SimulationRecord {
    let mut wall_times = BTreeMap::new();
    let outcome = catch_unwind(AssertUnwindSafe(|| simulate(f, &mut wall_times)));
    let r_by_measure = match outcome {
        Ok(Ok(map)) => map,
        _ => MeasureKind::ALL.iter().map(|&k| (k, None)).collect(),
    };
    SimulationRecord {
        factors: *f,
        r_by_measure,
        wall_times,
    }
}

fn simulate(f: &FactorSample, times: &mut BTreeMap<String, f64>) -> Result<BTreeMap<MeasureKind, Option<f64>>> {
    f.validate()?;
    let (n_s, d) = (f.n_s as usize, f.d as usize);

    let clock = Instant::now();
    let pair = build_design_pair(f.sampler(), n_s, d)?;
    let dist = InputDistribution::from_phi(f.phi)?;
    let x_jansen = transform(&pair.jansen, dist, f.distribution_seed())?;
    let x_disc = transform(&pair.discrepancy, dist, f.distribution_seed())?;
    times.insert("design".into(), clock.elapsed().as_secs_f64());

    let clock = Instant::now();
    let model = f.metafunction()?;
    let y_jansen = model.evaluate_matrix(&x_jansen)?;
    let y_disc = model.evaluate_matrix(&x_disc)?;
    times.insert("model".into(), clock.elapsed().as_secs_f64());

    let clock = Instant::now();
    let total = jansen_total_order(&y_jansen, n_s, d);
    times.insert("jansen".into(), clock.elapsed().as_secs_f64());

    let mut out = BTreeMap::new();
    for kind in MeasureKind::ALL {
        let clock = Instant::now();
        let r = total.as_ref().ok().and_then(|t| {
            discrepancy_importance(kind, &pair.discrepancy, &y_disc)
                .and_then(|imp| agreement(t, &imp))
                .ok()
                .map(|a| a.r)
        });
        times.insert(kind.to_string(), clock.elapsed().as_secs_f64());
        out.insert(kind, r);
    }
    Ok(out)
}

/// Runs simulations `0..n_sims` on `jobs` worker threads (`1` runs serially
/// on the calling thread). Output order and values do not depend on `jobs`.
pub fn run_benchmark(n_sims: usize, master_seed: u64, jobs: usize) -> Result<Vec<SimulationRecord>> {
    let factors = sample_factors(n_sims, master_seed)?;
    run_factors(&factors, jobs)
}

pub fn run_factors(factors: &[FactorSample], jobs: usize) -> Result<Vec<SimulationRecord>> {
    if jobs <= 1 {
        return Ok(factors.iter().map(run_simulation).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| factors.par_iter().map(run_simulation).collect()))
}

/// Per-measure distribution summary of `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub kind: MeasureKind,
    pub n_defined: usize,
    pub n_undefined: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub mean: f64,
    /// Moment skewness `m3 / m2^1.5`; negative means left-skewed.
    pub skewness: f64,
    /// Share of defined values below zero.
    pub frac_negative: f64,
    /// Share of all records with undefined `r`.
    pub frac_undefined: f64,
}

/// Linear-interpolation quantile of sorted data; the median is the midpoint
/// of the two central values for even lengths.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(kind: MeasureKind, values: &[Option<f64>]) -> MeasureSummary {
    let mut defined: Vec<f64> = values.iter().flatten().copied().collect();
    defined.sort_by(f64::total_cmp);
    let n = defined.len();
    let mean = defined.iter().sum::<f64>() / n as f64;
    let m2 = defined.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    let m3 = defined.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n as f64;
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    MeasureSummary {
        kind,
        n_defined: n,
        n_undefined: values.len() - n,
        median: quantile_sorted(&defined, 0.5),
        q1: quantile_sorted(&defined, 0.25),
        q3: quantile_sorted(&defined, 0.75),
        mean,
        skewness,
        frac_negative: defined.iter().filter(|&&v| v < 0.0).count() as f64 / n as f64,
        frac_undefined: (values.len() - n) as f64 / values.len().max(1) as f64,
    }
}

/// Summaries for every measure, in [`MeasureKind::ALL`] order.
pub fn aggregate(records: &[SimulationRecord]) -> Result<Vec<MeasureSummary>> {
    if records.is_empty() {
        return Err(Error::Domain("nothing to aggregate".into()));
    }
    Ok(MeasureKind::ALL
        .iter()
        .map(|&kind| {
            let values: Vec<Option<f64>> = records.iter().map(|r| r.r(kind)).collect();
            summarize(kind, &values)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(r: Option<f64>) -> SimulationRecord {
        SimulationRecord {
            factors: FactorSample {
                tau: 1,
                n_s: 10,
                d: 3,
                epsilon: 1,
                phi: 1,
                sim_id: 0,
                master_seed: 0,
            },
            r_by_measure: MeasureKind::ALL.iter().map(|&k| (k, r)).collect(),
            wall_times: BTreeMap::new(),
        }
    }

    #[test]
    fn factor_ranges_and_ids() {
        let f = sample_factors(512, 3).unwrap();
        assert_eq!(f.len(), 512);
        let ids: std::collections::HashSet<u64> = f.iter().map(|x| x.sim_id).collect();
        assert_eq!(ids.len(), 512);
        for x in &f {
            x.validate().unwrap();
        }
        // all levels get visited
        assert!(f.iter().any(|x| x.tau == 1) && f.iter().any(|x| x.tau == 2));
        assert!(f.iter().any(|x| x.phi == 8) && f.iter().any(|x| x.phi == 1));
        assert_eq!(f, sample_factors(512, 3).unwrap());
        assert_ne!(f, sample_factors(512, 4).unwrap());
        assert_eq!(factors_for(37, 3).unwrap(), f[37]);
    }

    #[test]
    fn discrete_scaling_is_inclusive() {
        assert_eq!(scale_discrete(0.0, (3, 50)), 3);
        assert_eq!(scale_discrete(0.999_999, (3, 50)), 50);
        assert_eq!(scale_discrete(0.5, (1, 2)), 2);
    }

    #[test]
    fn small_simulation_runs_and_replays() {
        let f = FactorSample { tau: 2, n_s: 10, d: 3, epsilon: 5, phi: 3, sim_id: 9, master_seed: 1 };
        let a = run_simulation(&f);
        assert_eq!(a.r_by_measure.len(), 7);
        for r in a.r_by_measure.values().flatten() {
            assert!((-1.0..=1.0).contains(r));
        }
        let b = run_simulation(&f);
        assert_eq!(a.r_by_measure, b.r_by_measure);
    }

    #[test]
    fn invalid_factors_become_undefined() {
        let f = FactorSample { tau: 3, n_s: 10, d: 3, epsilon: 5, phi: 3, sim_id: 0, master_seed: 1 };
        let rec = run_simulation(&f);
        assert!(rec.r_by_measure.values().all(|r| r.is_none()));
    }

    #[test]
    fn aggregate_simple_cases() {
        let all_one: Vec<_> = (0..5).map(|_| record(Some(1.0))).collect();
        let s = aggregate(&all_one).unwrap();
        assert_eq!(s[0].median, 1.0);
        assert_eq!(s[0].frac_negative, 0.0);

        let mixed = vec![record(Some(-1.0)), record(Some(0.0)), record(Some(1.0)), record(None)];
        let s = aggregate(&mixed).unwrap();
        assert_eq!(s[3].median, 0.0);
        assert!((s[3].frac_negative - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s[3].n_undefined, 1);
        assert!((s[3].frac_undefined - 0.25).abs() < 1e-15);
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&v, 0.5), 2.5);
        assert_eq!(quantile_sorted(&v, 0.25), 1.75);
        assert_eq!(quantile_sorted(&[5.0], 0.75), 5.0);
    }

    #[test]
    fn skewness_sign() {
        let left: Vec<Option<f64>> = [0.9, 0.95, 0.85, 0.9, -0.5].iter().map(|&v| Some(v)).collect();
        assert!(summarize(MeasureKind::L2, &left).skewness < 0.0);
    }
}
