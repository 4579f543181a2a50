//! Mood's median test between measures, with Holm correction.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::{quantile_sorted, SimulationRecord};
use crate::discrepancy::MeasureKind;
use crate::special::ln_gamma;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoodTestResult {
    pub pair: (MeasureKind, MeasureKind),
    pub p_value: f64,
}

/// Two-sample Mood median test.
///
/// Values strictly above the pooled median count as "above". The 2x2 table
/// is scored by a Yates-corrected chi-square when every expected count is at
/// least 5, and by Fisher's exact test otherwise. A table with an empty row
/// (e.g. all pooled values equal) returns `p = 1`.
pub fn mood_test(a: &[f64], b: &[f64]) -> f64 {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let median = quantile_sorted(&pooled, 0.5);
    let above_a = a.iter().filter(|&&v| v > median).count();
    let above_b = b.iter().filter(|&&v| v > median).count();
    two_by_two_p(above_a, a.len() - above_a, above_b, b.len() - above_b)
}

/// Table `[[a, b], [c, d]]`: rows are samples, columns above / not above.
fn two_by_two_p(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let (r1, r2) = (a + b, c + d);
    let (c1, c2) = (a + c, b + d);
    let n = r1 + r2;
    if r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0 {
        return 1.0;
    }
    let nf = n as f64;
    let min_expected = [r1 * c1, r1 * c2, r2 * c1, r2 * c2]
        .iter()
        .map(|&p| p as f64 / nf)
        .fold(f64::INFINITY, f64::min);
    if min_expected >= 5.0 {
        let diff = ((a * d) as f64 - (b * c) as f64).abs();
        let corrected = (diff - nf / 2.0).max(0.0);
        let chi2 = nf * corrected * corrected / (r1 as f64 * r2 as f64 * c1 as f64 * c2 as f64);
        erfc((chi2 / 2.0).sqrt()).clamp(0.0, 1.0)
    } else {
        fisher_exact(a, r1, c1, n)
    }
}

fn ln_choose(n: usize, k: usize) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Two-sided Fisher exact p: total probability of tables with the same
/// margins that are no more likely than the observed one.
fn fisher_exact(a: usize, r1: usize, c1: usize, n: usize) -> f64 {
    let lo = (r1 + c1).saturating_sub(n);
    let hi = r1.min(c1);
    let ln_denominator = ln_choose(n, c1);
    let prob = |x: usize| (ln_choose(r1, x) + ln_choose(n - r1, c1 - x) - ln_denominator).exp();
    let observed = prob(a);
    let p: f64 = (lo..=hi)
        .map(prob)
        .filter(|&p| p <= observed * (1.0 + 1e-7))
        .sum();
    p.min(1.0)
}

/// Holm step-down adjustment; returned p-values keep the input order.
pub fn holm_adjust(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p[i].total_cmp(&p[j]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p[idx]).min(1.0));
        adjusted[idx] = running;
    }
    adjusted
}

fn defined(records: &[SimulationRecord], kind: MeasureKind) -> Result<Vec<f64>> {
    let v: Vec<f64> = records.iter().filter_map(|r| r.r(kind)).collect();
    if v.len() < 2 {
        return Err(Error::Domain(format!(
            "Mood test needs at least 2 defined r values for {kind}, got {}",
            v.len()
        )));
    }
    Ok(v)
}

/// Unadjusted Mood test between two measures' `r` samples.
pub fn mood_pairwise(records: &[SimulationRecord], a: MeasureKind, b: MeasureKind) -> Result<MoodTestResult> {
    let (ra, rb) = (defined(records, a)?, defined(records, b)?);
    Ok(MoodTestResult {
        pair: (a, b),
        p_value: mood_test(&ra, &rb),
    })
}

/// All 21 measure pairs, Holm-adjusted across the family.
pub fn mood_all_pairs(records: &[SimulationRecord]) -> Result<Vec<MoodTestResult>> {
    let kinds = MeasureKind::ALL;
    let mut raw = Vec::new();
    for i in 0..kinds.len() {
        for j in i + 1..kinds.len() {
            raw.push(mood_pairwise(records, kinds[i], kinds[j])?);
        }
    }
    let adjusted = holm_adjust(&raw.iter().map(|r| r.p_value).collect::<Vec<_>>());
    Ok(raw
        .into_iter()
        .zip(adjusted)
        .map(|(r, p_value)| MoodTestResult { p_value, ..r })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identical_samples_give_one() {
        let a = [0.1, 0.5, 0.9, 0.3, 0.7, 0.2, 0.8, 0.4, 0.6, 0.65, 0.55, 0.45];
        assert_eq!(mood_test(&a, &a), 1.0);
        assert_eq!(mood_test(&[0.5; 20], &[0.5; 20]), 1.0);
    }

    #[test]
    fn disjoint_supports_are_significant() {
        let a: Vec<f64> = (0..50).map(|i| i as f64 / 100.0).collect();
        let b: Vec<f64> = (0..50).map(|i| 1.0 + i as f64 / 100.0).collect();
        // chi2 = 100 (2500 - 50)^2 / 50^4 = 96.04
        let expected = erfc((96.04f64 / 2.0).sqrt());
        let p = mood_test(&a, &b);
        assert!((p - expected).abs() < 1e-25);
        assert!(p < 1e-3);
    }

    #[test]
    fn small_tables_use_fisher() {
        // [[3, 0], [0, 3]]: two-sided p = 2 / C(6,3) = 0.1
        assert!((two_by_two_p(3, 0, 0, 3) - 0.1).abs() < 1e-12);
        // [[1, 2], [2, 1]]: every table is at least as extreme -> 1
        assert!((two_by_two_p(1, 2, 2, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_splits_rarely_reject() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut accepted = 0;
        for _ in 0..100 {
            let sample: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
            if mood_test(&sample[..50], &sample[50..]) > 0.05 {
                accepted += 1;
            }
        }
        assert!(accepted >= 90, "{accepted}");
    }

    #[test]
    fn holm_matches_hand_computation() {
        let adj = holm_adjust(&[0.01, 0.04, 0.03, 0.5]);
        // sorted 0.01*4, 0.03*3, 0.04*2, 0.5*1 with running max
        let expected = [0.04, 0.09, 0.09, 0.5];
        for (a, e) in adj.iter().zip(expected) {
            assert!((a - e).abs() < 1e-15);
        }
    }
}
