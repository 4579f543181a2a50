//! L2-type discrepancies and the grid-occupancy S-ersatz.
//!
//! The closed-form measures are reported in squared form and cost
//! `Θ(n² d)` kernel evaluations; lower means more uniform. The S-ersatz is
//! defined on two columns only, costs `Θ(n)`, and larger means more uniform.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Matrix, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    StarL2,
    L2,
    Modified,
    Centered,
    Symmetric,
    #[serde(rename = "wraparound")]
    WrapAround,
    #[serde(rename = "ersatz")]
    SErsatz,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 7] = [
        MeasureKind::StarL2,
        MeasureKind::L2,
        MeasureKind::Modified,
        MeasureKind::Centered,
        MeasureKind::Symmetric,
        MeasureKind::WrapAround,
        MeasureKind::SErsatz,
    ];

    pub const CLOSED_FORM: [MeasureKind; 6] = [
        MeasureKind::StarL2,
        MeasureKind::L2,
        MeasureKind::Modified,
        MeasureKind::Centered,
        MeasureKind::Symmetric,
        MeasureKind::WrapAround,
    ];

    /// True only for the S-ersatz.
    pub fn larger_is_more_uniform(self) -> bool {
        matches!(self, MeasureKind::SErsatz)
    }

    /// Short name used on the command line and in CSV files.
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::StarL2 => "star_l2",
            MeasureKind::L2 => "l2",
            MeasureKind::Modified => "modified",
            MeasureKind::Centered => "centered",
            MeasureKind::Symmetric => "symmetric",
            MeasureKind::WrapAround => "wraparound",
            MeasureKind::SErsatz => "ersatz",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureKind::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown measure '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyValue {
    pub kind: MeasureKind,
    pub value: f64,
    pub n: usize,
    pub d: usize,
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

fn validate(m: &Matrix) -> Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Domain("discrepancy of an empty point set".into()));
    }
    m.check_closed_unit()
}

/// `Σ_i Π_k f(x_ik)`
fn row_sum(m: &Matrix, f: impl Fn(f64) -> f64) -> f64 {
    let mut acc = CompensatedSum::default();
    for row in m.iter_rows() {
        acc.add(row.iter().map(|&x| f(x)).product());
    }
    acc.total()
}

/// `Π_k kernel(a_k, b_k)` with four interleaved partial products, so that
/// long rows are not serialized on multiply latency.
#[inline]
fn kernel_product(a: &[f64], b: &[f64], kernel: &impl Fn(f64, f64) -> f64) -> f64 {
    let mut p = [1.0f64; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for l in 0..4 {
            p[l] *= kernel(x[l], y[l]);
        }
    }
    let tail: f64 = ra.iter().zip(rb).map(|(&x, &y)| kernel(x, y)).product();
    (p[0] * p[1]) * (p[2] * p[3]) * tail
}

/// `Σ_i Σ_j Π_k kernel(x_ik, x_jk)` for a symmetric kernel.
///
/// Rows are processed in tiles so that each streamed row `j` is reused by
/// every row of the tile; per-row sums still run over `j` in increasing order.
fn pair_sum(m: &Matrix, kernel: impl Fn(f64, f64) -> f64) -> f64 {
    const TILE: usize = 32;
    let n = m.rows();
    let mut acc = CompensatedSum::default();
    let mut off = [0.0f64; TILE];
    for start in (0..n).step_by(TILE) {
        let end = (start + TILE).min(n);
        off.fill(0.0);
        for j in start + 1..n {
            let xj = m.row(j);
            for i in start..end.min(j) {
                off[i - start] += kernel_product(m.row(i), xj, &kernel);
            }
        }
        for i in start..end {
            let diag: f64 = m.row(i).iter().map(|&a| kernel(a, a)).product();
            acc.add(diag + 2.0 * off[i - start]);
        }
    }
    acc.total()
}

/// Star L2 discrepancy (squared), anchored at the origin.
pub fn star_l2(m: &Matrix) -> Result<f64> {
    validate(m)?;
    let (n, d) = (m.rows() as f64, m.cols() as i32);
    let single = row_sum(m, |x| 1.0 - x * x);
    let pairs = pair_sum(m, |a, b| 1.0 - a.max(b));
    Ok(3f64.powi(-d) - 2f64.powi(1 - d) / n * single + pairs / (n * n))
}

/// Modified L2 discrepancy (squared): star L2 summed over all projections.
pub fn modified_l2(m: &Matrix) -> Result<f64> {
    validate(m)?;
    let (n, d) = (m.rows() as f64, m.cols() as i32);
    let single = row_sum(m, |x| 3.0 - x * x);
    let pairs = pair_sum(m, |a, b| 2.0 - a.max(b));
    Ok((4.0f64 / 3.0).powi(d) - 2f64.powi(1 - d) / n * single + pairs / (n * n))
}

/// Centered L2 discrepancy (squared), boxes anchored at the nearest corner.
pub fn centered_l2(m: &Matrix) -> Result<f64> {
    validate(m)?;
    let (n, d) = (m.rows() as f64, m.cols() as i32);
    let single = row_sum(m, |x| {
        let c = (x - 0.5).abs();
        1.0 + 0.5 * c - 0.5 * c * c
    });
    let pairs = pair_sum(m, |a, b| {
        1.0 + 0.5 * (a - 0.5).abs() + 0.5 * (b - 0.5).abs() - 0.5 * (a - b).abs()
    });
    Ok((13.0f64 / 12.0).powi(d) - 2.0 / n * single + pairs / (n * n))
}

/// Symmetric L2 discrepancy (squared).
pub fn symmetric_l2(m: &Matrix) -> Result<f64> {
    validate(m)?;
    let (n, d) = (m.rows() as f64, m.cols() as i32);
    let single = row_sum(m, |x| 1.0 + 2.0 * x - 2.0 * x * x);
    let pairs = pair_sum(m, |a, b| 1.0 - (a - b).abs());
    Ok((4.0f64 / 3.0).powi(d) - 2.0 / n * single + 2f64.powi(d) / (n * n) * pairs)
}

/// Wrap-around L2 discrepancy (squared). The kernel is unchanged by
/// `|Δ| -> 1 - |Δ|`, so the value is invariant under translation mod 1.
pub fn wraparound_l2(m: &Matrix) -> Result<f64> {
    validate(m)?;
    let (n, d) = (m.rows() as f64, m.cols() as i32);
    let pairs = pair_sum(m, |a, b| {
        let t = (a - b).abs();
        1.5 - t + t * t
    });
    Ok(-(4.0f64 / 3.0).powi(d) + pairs / (n * n))
}

/// Unanchored ("extreme") L2 discrepancy (squared): every axis-aligned box.
pub fn unanchored_l2(m: &Matrix) -> Result<f64> {
    validate(m)?;
    let (n, d) = (m.rows() as f64, m.cols() as i32);
    let single = row_sum(m, |x| x * (1.0 - x));
    let pairs = pair_sum(m, |a, b| a.min(b) - a * b);
    Ok(12f64.powi(-d) - 2f64.powi(1 - d) / n * single + pairs / (n * n))
}

/// Grid-occupancy S-ersatz of the `(x, y)` scatter.
///
/// The plane is split into `s x s` cells with `s = ceil(sqrt(n))`; a
/// coordinate maps to cell `ceil(v * s)`, with 0 rounded up to 1. Returns the
/// number of occupied cells divided by `n`, which lies in `[1/n, 1]`.
pub fn s_ersatz(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len();
    if n != y.len() {
        return Err(Error::Shape {
            expected: n,
            actual: y.len(),
        });
    }
    if n == 0 {
        return Err(Error::Domain("S-ersatz of an empty point set".into()));
    }
    let s = (n as f64).sqrt().ceil() as usize;
    let cell = |v: f64| ((v * s as f64).ceil() as usize).clamp(1, s) - 1;
    let mut occupied = vec![false; s * s];
    let mut count = 0usize;
    for (i, (&a, &b)) in x.iter().zip(y).enumerate() {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::Domain(format!(
                "row {}: ({a}, {b}) outside the unit square",
                i + 1
            )));
        }
        let idx = cell(a) * s + cell(b);
        // branch-free: whether a cell is already taken is unpredictable
        count += usize::from(!occupied[idx]);
        occupied[idx] = true;
    }
    Ok(count as f64 / n as f64)
}

/// Dispatches to the measure named by `kind`.
pub fn compute(kind: MeasureKind, m: &Matrix) -> Result<DiscrepancyValue> {
    let value = match kind {
        MeasureKind::StarL2 => star_l2(m)?,
        MeasureKind::L2 => unanchored_l2(m)?,
        MeasureKind::Modified => modified_l2(m)?,
        MeasureKind::Centered => centered_l2(m)?,
        MeasureKind::Symmetric => symmetric_l2(m)?,
        MeasureKind::WrapAround => wraparound_l2(m)?,
        MeasureKind::SErsatz => {
            if m.cols() != 2 {
                return Err(Error::Usage(format!(
                    "the S-ersatz needs exactly 2 columns, got {}",
                    m.cols()
                )));
            }
            s_ersatz(&m.column(0), &m.column(1))?
        }
    };
    Ok(DiscrepancyValue {
        kind,
        value,
        n: m.rows(),
        d: m.cols(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn close(a: f64, b: f64) {
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
    }

    #[test]
    fn hand_values_single_point() {
        close(star_l2(&pts(&[&[0.0]])).unwrap(), 1.0 / 3.0);
        close(star_l2(&pts(&[&[1.0]])).unwrap(), 1.0 / 3.0);
        close(modified_l2(&pts(&[&[0.0]])).unwrap(), 1.0 / 3.0);
        close(modified_l2(&pts(&[&[1.0]])).unwrap(), 1.0 / 3.0);
        close(centered_l2(&pts(&[&[0.5]])).unwrap(), 1.0 / 12.0);
        close(centered_l2(&pts(&[&[0.0]])).unwrap(), 1.0 / 3.0);
        close(symmetric_l2(&pts(&[&[0.5]])).unwrap(), 1.0 / 3.0);
        close(symmetric_l2(&pts(&[&[0.0]])).unwrap(), 4.0 / 3.0);
        close(unanchored_l2(&pts(&[&[0.5]])).unwrap(), 1.0 / 12.0);
        close(unanchored_l2(&pts(&[&[0.0]])).unwrap(), 1.0 / 12.0);
        for x in [0.0, 0.3, 0.5, 1.0] {
            close(wraparound_l2(&pts(&[&[x]])).unwrap(), 1.0 / 6.0);
        }
        close(wraparound_l2(&pts(&[&[0.5, 0.5]])).unwrap(), 17.0 / 36.0);
    }

    #[test]
    fn hand_values_two_points() {
        close(modified_l2(&pts(&[&[0.0], &[1.0]])).unwrap(), 1.0 / 12.0);
        // -4/3 + (1/4)(3/2 + 3/2 + 2 * 5/4)
        close(wraparound_l2(&pts(&[&[0.25], &[0.75]])).unwrap(), 1.0 / 24.0);
    }

    #[test]
    fn empty_and_out_of_range_rejected() {
        let empty = Matrix::zeros(0, 2);
        for kind in MeasureKind::ALL {
            assert!(compute(kind, &empty).is_err());
        }
        assert!(star_l2(&pts(&[&[1.2]])).is_err());
        assert!(s_ersatz(&[0.5], &[-0.1]).is_err());
        assert!(s_ersatz(&[0.5, 0.2], &[0.1]).is_err());
    }

    #[test]
    fn ersatz_bounds_and_fixture() {
        let same = vec![0.3; 9];
        close(s_ersatz(&same, &same).unwrap(), 1.0 / 9.0);
        // one point per cell of the 3x3 grid
        let (x, y): (Vec<f64>, Vec<f64>) = (0..9).map(|c| ((c / 3) as f64 / 3.0 + 0.1, (c % 3) as f64 / 3.0 + 0.1)).unzip();
        close(s_ersatz(&x, &y).unwrap(), 1.0);
        // zero coordinates round up into the first cell; 1.0 lands in the last
        close(s_ersatz(&[0.0, 0.1, 1.0, 0.9], &[0.0, 0.2, 1.0, 0.9]).unwrap(), 0.5);
    }

    #[test]
    fn ersatz_hand_counted_sixteen_points() {
        // 4x4 grid; cells (col,row) listed by hand, 11 distinct of 16 points
        let cells = [
            (1, 1), (1, 1), (2, 3), (4, 4), (3, 2), (3, 2), (1, 4), (2, 2),
            (4, 1), (4, 1), (3, 3), (2, 3), (1, 2), (4, 3), (3, 4), (4, 4),
        ];
        let (x, y): (Vec<f64>, Vec<f64>) = cells
            .iter()
            .map(|&(c, r)| ((c as f64 - 0.5) / 4.0, (r as f64 - 0.5) / 4.0))
            .unzip();
        close(s_ersatz(&x, &y).unwrap(), 11.0 / 16.0);
    }

    #[test]
    fn compute_dispatch() {
        let one = pts(&[&[0.4]]);
        let v = compute(MeasureKind::WrapAround, &one).unwrap();
        close(v.value, 1.0 / 6.0);
        assert_eq!((v.n, v.d), (1, 1));
        let twins = pts(&[&[0.2, 0.7], &[0.2, 0.7], &[0.2, 0.7]]);
        close(compute(MeasureKind::SErsatz, &twins).unwrap().value, 1.0 / 3.0);
        assert!(matches!(compute(MeasureKind::SErsatz, &one), Err(Error::Usage(_))));
    }

    #[test]
    fn reflection_invariance() {
        let m = pts(&[&[0.1, 0.8], &[0.35, 0.2], &[0.9, 0.55], &[0.6, 0.05]]);
        let mut r = m.clone();
        for i in 0..r.rows() {
            for k in 0..r.cols() {
                r.set(i, k, 1.0 - m.get(i, k));
            }
        }
        for f in [centered_l2, symmetric_l2, wraparound_l2, unanchored_l2] {
            assert!((f(&m).unwrap() - f(&r).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn wraparound_translation_invariance() {
        let m = pts(&[&[0.1, 0.8], &[0.35, 0.2], &[0.9, 0.55], &[0.6, 0.05]]);
        let base = wraparound_l2(&m).unwrap();
        for c in [0.05, 0.3, 0.77] {
            let mut t = m.clone();
            for i in 0..t.rows() {
                for k in 0..t.cols() {
                    t.set(i, k, (m.get(i, k) + c) % 1.0);
                }
            }
            assert!((wraparound_l2(&t).unwrap() - base).abs() < 1e-9);
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in MeasureKind::ALL {
            assert_eq!(kind.as_str().parse::<MeasureKind>().unwrap(), kind);
            assert_eq!(kind.larger_is_more_uniform(), kind == MeasureKind::SErsatz);
            assert_eq!(serde_json::to_string(&kind).unwrap(), format!("\"{kind}\""));
        }
        assert!("nope".parse::<MeasureKind>().is_err());
    }
}
