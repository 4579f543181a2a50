//! Seeded random test models in the style of Becker's metafunction.
//!
//! A model assigns one of 13 univariate basis functions to every input and
//! combines them through sparse first-order, pairwise and three-way terms:
//!
//! ```text
//! y = sum_i a_i g_i(x_i) + sum_(i<j) b_ij g_i(x_i) g_j(x_j) + sum_(i<j<k) c_ijk g_i g_j g_k
//! ```
//!
//! Input indices are zero-based.

use std::f64::consts::{E, PI};

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sampling::rng::stream;
use crate::special::normal_quantile;
use crate::{Error, Matrix, Result};

pub const BASIS_COUNT: u8 = 13;

/// One of the 13 univariate shapes on `[0, 1]`, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct BasisFunctionId(u8);

impl BasisFunctionId {
    pub fn new(id: u8) -> Result<Self> {
        if (1..=BASIS_COUNT).contains(&id) {
            Ok(BasisFunctionId(id))
        } else {
            Err(Error::Domain(format!("basis function id {id} not in 1..={BASIS_COUNT}")))
        }
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        BASIS_NAMES[self.0 as usize - 1]
    }

    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self.0 {
            1 => x,
            2 => x * x,
            3 => x * x * x,
            4 => (x * x) * (x * x),
            5 => (x.exp() - 1.0) / (E - 1.0),
            6 => (1.0 / (x + 0.1) - 1.0 / 1.1) / (10.0 - 1.0 / 1.1),
            7 => (2.0 * PI * x).sin(),
            8 => {
                let t = 2.0 * PI * x;
                if t.abs() < 1e-8 {
                    1.0
                } else {
                    t.sin() / t
                }
            }
            9 => (2.0 * PI * x).cos(),
            10 => {
                if x > 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            11 => 4.0 * (x - 0.5) * (x - 0.5),
            12 => (1.0 + 9.0 * x).ln() / 10f64.ln(),
            _ => 0.0,
        }
    }
}

impl TryFrom<u8> for BasisFunctionId {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        BasisFunctionId::new(id)
    }
}

impl From<BasisFunctionId> for u8 {
    fn from(id: BasisFunctionId) -> u8 {
        id.0
    }
}

const BASIS_NAMES: [&str; 13] = [
    "linear",
    "quadratic",
    "cubic",
    "quartic",
    "exponential",
    "inverse",
    "periodic",
    "sinc",
    "trigonometric",
    "step",
    "non-monotonic",
    "logarithmic",
    "no-effect",
];

/// Knobs for [`build_metafunction_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetaConfig {
    /// Pairwise terms drawn: `round(pair_fraction * d)`.
    pub pair_fraction: f64,
    /// Three-way terms drawn: `round(triple_fraction * d)`.
    pub triple_fraction: f64,
    /// Probability a coefficient survives the sparsity mask.
    pub active_probability: f64,
}

impl Default for MetaConfig {
    fn default() -> Self {
        MetaConfig {
            pair_fraction: 0.5,
            triple_fraction: 0.2,
            active_probability: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub gamma: f64,
}

/// A frozen test model. Evaluation never mutates it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaFunction {
    dim: usize,
    assignment: Vec<BasisFunctionId>,
    alpha: Vec<f64>,
    pairs: Vec<PairTerm>,
    triples: Vec<TripleTerm>,
    epsilon_seed: u64,
}

impl MetaFunction {
    /// Assembles a model from explicit parts, validating index tuples.
    pub fn from_parts(
        assignment: Vec<BasisFunctionId>,
        alpha: Vec<f64>,
        pairs: Vec<PairTerm>,
        triples: Vec<TripleTerm>,
        epsilon_seed: u64,
    ) -> Result<Self> {
        let dim = assignment.len();
        if dim == 0 {
            return Err(Error::Domain("metafunction needs at least one input".into()));
        }
        if alpha.len() != dim {
            return Err(Error::Shape {
                expected: dim,
                actual: alpha.len(),
            });
        }
        for p in &pairs {
            if !(p.i < p.j && p.j < dim) {
                return Err(Error::Domain(format!("pair ({}, {}) invalid for d={dim}", p.i, p.j)));
            }
        }
        for t in &triples {
            if !(t.i < t.j && t.j < t.k && t.k < dim) {
                return Err(Error::Domain(format!(
                    "triple ({}, {}, {}) invalid for d={dim}",
                    t.i, t.j, t.k
                )));
            }
        }
        Ok(MetaFunction {
            dim,
            assignment,
            alpha,
            pairs,
            triples,
            epsilon_seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn assignment(&self) -> &[BasisFunctionId] {
        &self.assignment
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn pairs(&self) -> &[PairTerm] {
        &self.pairs
    }

    pub fn triples(&self) -> &[TripleTerm] {
        &self.triples
    }

    pub fn epsilon_seed(&self) -> u64 {
        self.epsilon_seed
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metafunction serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MetaFunction =
            serde_json::from_str(text).map_err(|e| Error::Domain(format!("metafunction JSON: {e}")))?;
        MetaFunction::from_parts(raw.assignment, raw.alpha, raw.pairs, raw.triples, raw.epsilon_seed)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                actual: x.len(),
            });
        }
        let mut g = vec![0.0; self.dim];
        Ok(self.eval_into(x, &mut g))
    }

    /// Row-wise evaluation, order preserving.
    pub fn evaluate_matrix(&self, m: &Matrix) -> Result<Vec<f64>> {
        if m.rows() > 0 && m.cols() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                actual: m.cols(),
            });
        }
        let mut g = vec![0.0; self.dim];
        Ok(m.iter_rows().map(|row| self.eval_into(row, &mut g)).collect())
    }

    fn eval_into(&self, x: &[f64], g: &mut [f64]) -> f64 {
        for ((gi, &xi), basis) in g.iter_mut().zip(x).zip(&self.assignment) {
            *gi = basis.eval(xi);
        }
        let mut y: f64 = self.alpha.iter().zip(g.iter()).map(|(a, gi)| a * gi).sum();
        for p in &self.pairs {
            y += p.beta * g[p.i] * g[p.j];
        }
        for t in &self.triples {
            y += t.gamma * g[t.i] * g[t.j] * g[t.k];
        }
        y
    }
}

pub fn build_metafunction(d: usize, epsilon_seed: u64) -> Result<MetaFunction> {
    build_metafunction_with(d, epsilon_seed, MetaConfig::default())
}

/// Draws a model deterministically from `(d, epsilon_seed, config)`.
///
/// Basis ids are uniform over the 13 shapes. Interaction tuples are sampled
/// without replacement, capped by the number of distinct tuples. Every
/// coefficient is a standard normal times a Bernoulli(`active_probability`)
/// mask.
pub fn build_metafunction_with(d: usize, epsilon_seed: u64, config: MetaConfig) -> Result<MetaFunction> {
    if d == 0 {
        return Err(Error::Domain("metafunction needs d >= 1".into()));
    }
    let mut rng = stream(epsilon_seed, &[0x6d65_7461]);
    let assignment: Vec<BasisFunctionId> = (0..d)
        .map(|_| BasisFunctionId(rng.random_range(1..=BASIS_COUNT)))
        .collect();

    let coefficient = |rng: &mut rand_chacha::ChaCha8Rng| {
        let z = normal_quantile(rng.random::<f64>().max(f64::MIN_POSITIVE));
        if rng.random::<f64>() < config.active_probability {
            z
        } else {
            0.0
        }
    };
    let alpha: Vec<f64> = (0..d).map(|_| coefficient(&mut rng)).collect();

    let all_pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    let n_pairs = ((config.pair_fraction * d as f64).round() as usize).min(all_pairs.len());
    let mut pair_idx = index::sample(&mut rng, all_pairs.len(), n_pairs).into_vec();
    pair_idx.sort_unstable();
    let pairs: Vec<PairTerm> = pair_idx
        .into_iter()
        .map(|p| {
            let (i, j) = all_pairs[p];
            PairTerm {
                i,
                j,
                beta: coefficient(&mut rng),
            }
        })
        .collect();

    let all_triples: Vec<(usize, usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).flat_map(move |j| (j + 1..d).map(move |k| (i, j, k))))
        .collect();
    let n_triples = ((config.triple_fraction * d as f64).round() as usize).min(all_triples.len());
    let mut triple_idx = index::sample(&mut rng, all_triples.len(), n_triples).into_vec();
    triple_idx.sort_unstable();
    let triples: Vec<TripleTerm> = triple_idx
        .into_iter()
        .map(|t| {
            let (i, j, k) = all_triples[t];
            TripleTerm {
                i,
                j,
                k,
                gamma: coefficient(&mut rng),
            }
        })
        .collect();

    Ok(MetaFunction {
        dim: d,
        assignment,
        alpha,
        pairs,
        triples,
        epsilon_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{generate, SamplerKind};

    fn id(n: u8) -> BasisFunctionId {
        BasisFunctionId::new(n).unwrap()
    }

    #[test]
    fn term_counts() {
        let f = build_metafunction(1, 3).unwrap();
        assert!(f.pairs().is_empty() && f.triples().is_empty());
        let f = build_metafunction(10, 3).unwrap();
        assert_eq!((f.pairs().len(), f.triples().len()), (5, 2));
        let f = build_metafunction(3, 3).unwrap();
        assert_eq!((f.pairs().len(), f.triples().len()), (2, 1));
    }

    #[test]
    fn deterministic_and_json_round_trip() {
        let a = build_metafunction(10, 42).unwrap();
        assert_eq!(a, build_metafunction(10, 42).unwrap());
        let back = MetaFunction::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn tuples_are_increasing_and_unique() {
        for seed in 0..50 {
            let f = build_metafunction(20, seed).unwrap();
            let mut seen = std::collections::HashSet::new();
            for p in f.pairs() {
                assert!(p.i < p.j && p.j < 20);
                assert!(seen.insert((p.i, p.j)));
            }
            for t in f.triples() {
                assert!(t.i < t.j && t.j < t.k && t.k < 20);
            }
        }
    }

    #[test]
    fn seeds_separate_assignments() {
        let distinct: std::collections::HashSet<Vec<u8>> = (1..=100)
            .map(|s| {
                build_metafunction(10, s)
                    .unwrap()
                    .assignment()
                    .iter()
                    .map(|b| b.id())
                    .collect()
            })
            .collect();
        assert!(distinct.len() >= 99);
    }

    #[test]
    fn zero_and_identity_functions() {
        let zero = MetaFunction::from_parts(vec![id(3), id(7)], vec![0.0, 0.0], vec![], vec![], 0).unwrap();
        assert_eq!(zero.evaluate(&[0.3, 0.9]).unwrap(), 0.0);
        let ident = MetaFunction::from_parts(vec![id(1)], vec![1.0], vec![], vec![], 0).unwrap();
        assert_eq!(ident.evaluate(&[0.37]).unwrap(), 0.37);
        assert!(matches!(ident.evaluate(&[0.1, 0.2]), Err(Error::Shape { .. })));
    }

    #[test]
    fn additive_model_is_sum_of_terms() {
        let f = MetaFunction::from_parts(
            vec![id(5), id(8), id(12)],
            vec![1.5, -0.5, 2.0],
            vec![],
            vec![],
            0,
        )
        .unwrap();
        let x = [0.2, 0.0, 0.8];
        let expected = 1.5 * (0.2f64.exp() - 1.0) / (E - 1.0) + -0.5 * 1.0 + 2.0 * (1.0 + 7.2f64).ln() / 10f64.ln();
        assert!((f.evaluate(&x).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn interactions_contribute_products() {
        let f = MetaFunction::from_parts(
            vec![id(1), id(2), id(1)],
            vec![0.0; 3],
            vec![PairTerm { i: 0, j: 1, beta: 2.0 }],
            vec![TripleTerm { i: 0, j: 1, k: 2, gamma: -1.0 }],
            0,
        )
        .unwrap();
        let x = [0.5, 0.5, 0.4];
        let expected = 2.0 * 0.5 * 0.25 - 0.5 * 0.25 * 0.4;
        assert!((f.evaluate(&x).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn invalid_parts_rejected() {
        let bad = MetaFunction::from_parts(vec![id(1), id(1)], vec![1.0, 1.0], vec![PairTerm { i: 1, j: 1, beta: 1.0 }], vec![], 0);
        assert!(bad.is_err());
        assert!(BasisFunctionId::new(0).is_err() && BasisFunctionId::new(14).is_err());
    }

    #[test]
    fn basis_functions_are_finite_on_unit_interval() {
        for b in 1..=BASIS_COUNT {
            for i in 0..=100 {
                let v = id(b).eval(i as f64 / 100.0);
                assert!(v.is_finite());
            }
        }
        assert_eq!(id(6).eval(0.0), 1.0);
        assert!(id(6).eval(1.0).abs() < 1e-15);
        assert_eq!(id(8).eval(0.0), 1.0);
    }

    #[test]
    fn matrix_evaluation_properties() {
        let f = build_metafunction(4, 9).unwrap();
        assert!(f.evaluate_matrix(&Matrix::zeros(0, 4)).unwrap().is_empty());
        let m = generate(SamplerKind::random(1), 5, 4).unwrap();
        let y = f.evaluate_matrix(&m).unwrap();
        let mut rows: Vec<Vec<f64>> = m.iter_rows().map(|r| r.to_vec()).collect();
        rows.push(rows[0].clone());
        rows.reverse();
        let y2 = f.evaluate_matrix(&Matrix::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(y2[0], y[0]);
        assert_eq!(y2[5], y[0]);
        assert_eq!(y2[1], y[4]);
        assert!(matches!(f.evaluate_matrix(&Matrix::zeros(2, 3)), Err(Error::Shape { .. })));
    }

    #[test]
    fn additive_variance_decomposes() {
        let f = MetaFunction::from_parts(vec![id(1), id(7), id(11)], vec![1.0, 0.5, -2.0], vec![], vec![], 0).unwrap();
        let m = generate(SamplerKind::sobol(3, true), 1 << 14, 3).unwrap();
        let y = f.evaluate_matrix(&m).unwrap();
        let var = |v: &[f64]| {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64
        };
        let per_term: f64 = (0..3)
            .map(|k| {
                let t: Vec<f64> = m.column(k).iter().map(|&x| f.alpha()[k] * f.assignment()[k].eval(x)).collect();
                var(&t)
            })
            .sum();
        let total = var(&y);
        assert!((total - per_term).abs() / total < 0.02, "{total} vs {per_term}");
    }
}
