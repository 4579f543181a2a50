//! Sensitivity indices: Jansen total-order estimates, discrepancy-based
//! importance on `(x_k, y)` projections, savage scores and their agreement.

use serde::{Deserialize, Serialize};

use crate::discrepancy::{compute, MeasureKind};
use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalOrderIndices {
    pub t: Vec<f64>,
    /// Population variance of the `A` block outputs.
    pub variance: f64,
    pub n_base: usize,
}

/// Jansen total-order estimator on outputs laid out as `A, A_B1, .., A_Bd`.
///
/// `T_k = (1 / 2N) Σ_v (f(A)_v - f(A_Bk)_v)² / V(y_A)`. Estimates may exceed 1
/// for strongly interacting models. A constant `A` block yields
/// [`Error::Undefined`].
pub fn jansen_total_order(y: &[f64], n_base: usize, d: usize) -> Result<TotalOrderIndices> {
    let expected = n_base * (d + 1);
    if y.len() != expected {
        return Err(Error::Shape {
            expected,
            actual: y.len(),
        });
    }
    if n_base == 0 || d == 0 {
        return Err(Error::Domain("Jansen layout needs n_base >= 1 and d >= 1".into()));
    }
    let ya = &y[..n_base];
    let mean = ya.iter().sum::<f64>() / n_base as f64;
    let variance = ya.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n_base as f64;
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::Undefined("constant output: total-order indices undefined".into()));
    }
    let t = (1..=d)
        .map(|k| {
            let yk = &y[k * n_base..(k + 1) * n_base];
            let sq: f64 = ya.iter().zip(yk).map(|(a, b)| (a - b).powi(2)).sum();
            sq / (2.0 * n_base as f64) / variance
        })
        .collect();
    Ok(TotalOrderIndices { t, variance, n_base })
}

/// Per-input importance, oriented so that larger means more influential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceVector {
    pub kind: MeasureKind,
    pub scores: Vec<f64>,
}

/// Scores each input by the discrepancy of its `(x_k, ŷ)` scatter.
///
/// `m_unit` holds the unit-cube coordinates (not the quantile-transformed
/// inputs) and `ŷ` is the min-max normalized output. S-ersatz values are
/// negated so every measure ranks influential inputs high.
pub fn discrepancy_importance(kind: MeasureKind, m_unit: &Matrix, y: &[f64]) -> Result<ImportanceVector> {
    if m_unit.rows() != y.len() {
        return Err(Error::Shape {
            expected: m_unit.rows(),
            actual: y.len(),
        });
    }
    if y.len() < 2 {
        return Err(Error::Domain("importance needs at least 2 runs".into()));
    }
    let y_norm = min_max_normalize(y)?;
    let scores = (0..m_unit.cols())
        .map(|k| {
            let projection = Matrix::from_columns(&[m_unit.column(k), y_norm.clone()])?;
            let value = compute(kind, &projection)?.value;
            Ok(if kind.larger_is_more_uniform() { -value } else { value })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ImportanceVector { kind, scores })
}

fn min_max_normalize(y: &[f64]) -> Result<Vec<f64>> {
    if let Some(bad) = y.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("output {} is not finite", bad + 1)));
    }
    let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range.is_nan() || range <= 0.0 {
        return Err(Error::Undefined("constant output: importance undefined".into()));
    }
    Ok(y.iter().map(|v| ((v - lo) / range).clamp(0.0, 1.0)).collect())
}

/// Savage scores: rank `i` (1 = first) scores `Σ_{j=i}^{d} 1/j`; tied values
/// share the mean of their positions' scores, so the scores always sum to `d`.
pub fn savage_scores(values: &[f64], larger_is_first: bool) -> Vec<f64> {
    let d = values.len();
    let mut tail = vec![0.0; d + 1];
    for i in (0..d).rev() {
        tail[i] = tail[i + 1] + 1.0 / (i + 1) as f64;
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        let ord = values[a].total_cmp(&values[b]);
        if larger_is_first {
            ord.reverse()
        } else {
            ord
        }
    });
    let mut scores = vec![0.0; d];
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let mean = tail[start..end].iter().sum::<f64>() / (end - start) as f64;
        for &idx in &order[start..end] {
            scores[idx] = mean;
        }
        start = end;
    }
    scores
}

/// Product-moment correlation; undefined when either vector is constant.
pub fn pearson_r(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: a.len(),
            actual: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::Domain("correlation needs at least 2 pairs".into()));
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if !(saa > 0.0 && sbb > 0.0) {
        return Err(Error::Undefined("zero variance: correlation undefined".into()));
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementResult {
    pub kind: MeasureKind,
    pub r: f64,
}

/// Correlation between the savage scores of the total-order indices and of
/// the importance scores.
pub fn agreement(t: &TotalOrderIndices, imp: &ImportanceVector) -> Result<AgreementResult> {
    if t.t.len() != imp.scores.len() {
        return Err(Error::Shape {
            expected: t.t.len(),
            actual: imp.scores.len(),
        });
    }
    let r = pearson_r(&savage_scores(&t.t, true), &savage_scores(&imp.scores, true))?;
    Ok(AgreementResult { kind: imp.kind, r })
}
