//! Input distributions applied column-wise through their inverse CDFs.

use serde::{Deserialize, Serialize};

use crate::sampling::rng::derive_seed;
use crate::special::{beta_quantile, logistic, normal_quantile};
use crate::{Error, Matrix, Result};

/// Boundary guard: `u` in `[0, 1]` is clamped to `[EPS, 1 - EPS]` before inversion.
const EPS: f64 = f64::EPSILON;

/// The eight input settings, numbered 1..=8 in benchmark order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InputDistribution {
    Uniform01,
    Normal { mu: f64, sigma: f64 },
    Beta { a: f64, b: f64 },
    Logitnormal { mu: f64, sigma: f64 },
    /// Each column independently takes one of settings 1..=7, chosen by seed.
    MixedRandom,
}

impl InputDistribution {
    pub fn from_phi(phi: u32) -> Result<Self> {
        use InputDistribution::*;
        Ok(match phi {
            1 => Uniform01,
            2 => Normal { mu: 0.5, sigma: 0.15 },
            3 => Beta { a: 8.0, b: 2.0 },
            4 => Beta { a: 2.0, b: 8.0 },
            5 => Beta { a: 2.0, b: 0.8 },
            6 => Beta { a: 0.8, b: 2.0 },
            7 => Logitnormal { mu: 0.0, sigma: 3.16 },
            8 => MixedRandom,
            _ => return Err(Error::Domain(format!("distribution setting {phi} not in 1..=8"))),
        })
    }

    /// Concrete distribution used for `column`; identity unless `MixedRandom`.
    pub fn resolve(self, seed: u64, column: usize) -> InputDistribution {
        match self {
            InputDistribution::MixedRandom => {
                let pick = derive_seed(seed, &[0x6d69_7865, column as u64]) % 7;
                InputDistribution::from_phi(pick as u32 + 1).expect("1..=7 is valid")
            }
            other => other,
        }
    }

    pub fn name(&self) -> String {
        match self {
            InputDistribution::Uniform01 => "U(0,1)".into(),
            InputDistribution::Normal { mu, sigma } => format!("N({mu},{sigma})"),
            InputDistribution::Beta { a, b } => format!("Beta({a},{b})"),
            InputDistribution::Logitnormal { mu, sigma } => format!("Logitnorm({mu},{sigma})"),
            InputDistribution::MixedRandom => "mixed".into(),
        }
    }
}

/// Inverse CDF. Normal output is clamped to `[0, 1]`.
pub fn quantile(dist: InputDistribution, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("quantile level {u} outside (0, 1)")));
    }
    let u = u.clamp(EPS, 1.0 - EPS);
    let x = match dist {
        InputDistribution::Uniform01 => u,
        InputDistribution::Normal { mu, sigma } => (mu + sigma * normal_quantile(u)).clamp(0.0, 1.0),
        InputDistribution::Beta { a, b } => {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::Domain(format!("Beta shapes must be positive, got ({a}, {b})")));
            }
            beta_quantile(a, b, u)
        }
        InputDistribution::Logitnormal { mu, sigma } => logistic(mu + sigma * normal_quantile(u)),
        InputDistribution::MixedRandom => {
            return Err(Error::Usage(
                "resolve MixedRandom to a column distribution before calling quantile".into(),
            ))
        }
    };
    Ok(x)
}

/// Applies `dist` column-wise; `MixedRandom` resolves per column from `seed`.
pub fn transform(matrix: &Matrix, dist: InputDistribution, seed: u64) -> Result<Matrix> {
    let resolved: Vec<InputDistribution> =
        (0..matrix.cols()).map(|k| dist.resolve(seed, k)).collect();
    let mut out = matrix.clone();
    for i in 0..matrix.rows() {
        for (k, &col_dist) in resolved.iter().enumerate() {
            out.set(i, k, quantile(col_dist, matrix.get(i, k))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{generate, SamplerKind};

    fn all_settings() -> Vec<InputDistribution> {
        (1..=7).map(|p| InputDistribution::from_phi(p).unwrap()).collect()
    }

    #[test]
    fn uniform_is_identity() {
        assert_eq!(quantile(InputDistribution::Uniform01, 0.3).unwrap(), 0.3);
    }

    /// Bisection on the CDF of a Beta, built from the independent statrs CDF.
    fn bisect_beta_median(a: f64, b: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if statrs::function::beta::beta_reg(a, b, mid) < 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn beta_median_matches_bisection_oracle() {
        let oracle = bisect_beta_median(2.0, 8.0);
        assert!((oracle - 0.1796).abs() < 1e-4);
        let ours = quantile(InputDistribution::Beta { a: 2.0, b: 8.0 }, 0.5).unwrap();
        assert!((ours - oracle).abs() < 1e-9, "{ours} vs {oracle}");
    }

    #[test]
    fn beta_quantiles_invert_cdf_for_all_shapes() {
        for &(a, b) in &[(8.0, 2.0), (2.0, 8.0), (2.0, 0.8), (0.8, 2.0)] {
            for i in 1..200 {
                let u = i as f64 / 200.0;
                let x = quantile(InputDistribution::Beta { a, b }, u).unwrap();
                let back = statrs::function::beta::beta_reg(a, b, x);
                assert!((back - u).abs() < 1e-8, "a={a} b={b} u={u} x={x} back={back}");
            }
        }
    }

    #[test]
    fn symmetric_medians() {
        let logit = InputDistribution::from_phi(7).unwrap();
        assert!((quantile(logit, 0.5).unwrap() - 0.5).abs() < 1e-15);
        let normal = InputDistribution::from_phi(2).unwrap();
        assert_eq!(quantile(normal, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn boundaries_are_guarded_and_finite() {
        for d in all_settings() {
            for u in [0.0, 1.0, 1e-300, 1.0 - 1e-17] {
                let x = quantile(d, u).unwrap();
                assert!(x.is_finite() && (0.0..=1.0).contains(&x), "{d:?} u={u} x={x}");
            }
        }
        assert!(quantile(InputDistribution::Uniform01, -0.1).is_err());
        assert!(quantile(InputDistribution::Uniform01, f64::NAN).is_err());
        assert!(quantile(InputDistribution::Beta { a: 0.0, b: 1.0 }, 0.5).is_err());
    }

    #[test]
    fn quantiles_are_monotone() {
        for d in all_settings() {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=1000 {
                let x = quantile(d, i as f64 / 1000.0).unwrap();
                assert!(x >= prev, "{d:?} at {i}");
                prev = x;
            }
        }
    }

    #[test]
    fn beta_8_2_sample_mean() {
        let m = generate(SamplerKind::sobol(0, false), 10_000, 1).unwrap();
        let t = transform(&m, InputDistribution::Beta { a: 8.0, b: 2.0 }, 0).unwrap();
        let mean = t.as_slice().iter().sum::<f64>() / 10_000.0;
        assert!((mean - 0.8).abs() < 0.01, "{mean}");
    }

    #[test]
    fn mixed_resolution_is_deterministic_and_varied() {
        let d = InputDistribution::MixedRandom;
        for k in 0..20 {
            assert_eq!(d.resolve(4, k), d.resolve(4, k));
            assert_ne!(d.resolve(4, k), InputDistribution::MixedRandom);
        }
        let distinct: std::collections::HashSet<String> =
            (0..50).map(|k| d.resolve(4, k).name()).collect();
        assert!(distinct.len() >= 5);
    }

    #[test]
    fn transform_uniform_is_identity() {
        let m = generate(SamplerKind::random(2), 16, 3).unwrap();
        let t = transform(&m, InputDistribution::Uniform01, 0).unwrap();
        assert_eq!(&t, &*m);
    }
}
