//! Random and Sobol' designs on the unit hypercube.

mod joe_kuo;
pub mod rng;
mod sobol;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use sobol::{Sobol, MAX_DIM as SOBOL_MAX_DIM};

use crate::{Error, Matrix, Result, SampleMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplerTag {
    Random,
    SobolQmc,
}

/// How to draw points: the generator, its seed, and (Sobol' only) whether to
/// Owen-scramble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplerKind {
    pub tag: SamplerTag,
    pub seed: u64,
    pub scrambling: bool,
}

impl SamplerKind {
    pub fn random(seed: u64) -> Self {
        SamplerKind {
            tag: SamplerTag::Random,
            seed,
            scrambling: false,
        }
    }

    pub fn sobol(seed: u64, scrambling: bool) -> Self {
        SamplerKind {
            tag: SamplerTag::SobolQmc,
            seed,
            scrambling,
        }
    }

    fn reseeded(self, path: &[u64]) -> Self {
        SamplerKind {
            seed: rng::derive_seed(self.seed, path),
            ..self
        }
    }
}

/// Draws an `n x d` design. Identical `(kind, n, d)` gives bit-identical output.
///
/// Unscrambled Sobol' output keeps the initial all-zeros point, so the first
/// `2^m` rows are a balanced net; `seed` is then irrelevant.
pub fn generate(kind: SamplerKind, n: usize, d: usize) -> Result<SampleMatrix> {
    if n == 0 || d == 0 {
        return Err(Error::Domain(format!("need n >= 1 and d >= 1, got n={n}, d={d}")));
    }
    let data = match kind.tag {
        SamplerTag::Random => {
            let mut rng = rng::stream(kind.seed, &[]);
            (0..n * d).map(|_| rng.random::<f64>()).collect()
        }
        SamplerTag::SobolQmc => {
            let scramble = kind.scrambling.then_some(kind.seed);
            Sobol::new(d)?.points(n, scramble)?
        }
    };
    Ok(SampleMatrix::new_unchecked(Matrix::new(n, d, data)?))
}

/// The Jansen design (`A` stacked over `A_B1..A_Bd`) and an independent plain
/// design with the same number of runs.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPair {
    pub jansen: SampleMatrix,
    pub discrepancy: SampleMatrix,
    pub n_base: usize,
    pub dim: usize,
}

impl DesignPair {
    pub fn total_rows(&self) -> usize {
        self.n_base * (self.dim + 1)
    }
}

/// Builds the Jansen matrix from `A` and `B` blocks drawn as one
/// `n_base x 2d` design (first `d` columns to `A`, last `d` to `B`), plus a
/// plain design of `n_base * (d + 1)` rows from an independent stream.
pub fn build_design_pair(kind: SamplerKind, n_base: usize, d: usize) -> Result<DesignPair> {
    if n_base < 2 || d == 0 {
        return Err(Error::Domain(format!(
            "need n_base >= 2 and d >= 1, got n_base={n_base}, d={d}"
        )));
    }
    let ab = generate(kind.reseeded(&[0]), n_base, 2 * d)?;
    let total = n_base * (d + 1);
    let mut jansen = Matrix::zeros(total, d);
    for block in 0..=d {
        for v in 0..n_base {
            let src = ab.row(v);
            let dst = jansen.row_mut(block * n_base + v);
            dst.copy_from_slice(&src[..d]);
            if block > 0 {
                dst[block - 1] = src[d + block - 1];
            }
        }
    }
    let discrepancy = generate(kind.reseeded(&[1]), total, d)?;
    Ok(DesignPair {
        jansen: SampleMatrix::new_unchecked(jansen),
        discrepancy,
        n_base,
        dim: d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::star_l2;

    #[test]
    fn random_single_row_in_range() {
        let m = generate(SamplerKind::random(3), 1, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 3));
        assert!(m.as_slice().iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn zero_sizes_rejected() {
        assert!(generate(SamplerKind::random(1), 0, 2).is_err());
        assert!(generate(SamplerKind::sobol(1, false), 4, 0).is_err());
    }

    #[test]
    fn sobol_dimension_limit() {
        let err = generate(SamplerKind::sobol(1, true), 4, SOBOL_MAX_DIM + 1).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
        assert!(generate(SamplerKind::sobol(1, true), 4, 100).is_ok());
    }

    #[test]
    fn unscrambled_sobol_first_column() {
        let m = generate(SamplerKind::sobol(9, false), 4, 1).unwrap();
        assert_eq!(m.column(0), vec![0.0, 0.5, 0.75, 0.25]);
    }

    #[test]
    fn sobol_beats_mean_random_star_l2() {
        let qmc = star_l2(&generate(SamplerKind::sobol(0, false), 64, 2).unwrap()).unwrap();
        let mean_random: f64 = (0..50)
            .map(|s| star_l2(&generate(SamplerKind::random(s), 64, 2).unwrap()).unwrap())
            .sum::<f64>()
            / 50.0;
        assert!(qmc < mean_random, "{qmc} vs {mean_random}");
    }

    #[test]
    fn dyadic_balance_of_unscrambled_sobol() {
        for m in 0..=8u32 {
            let n = 1usize << m;
            let pts = generate(SamplerKind::sobol(0, false), n, 12).unwrap();
            for k in 0..12 {
                let mut hits = vec![0u32; n];
                for v in pts.column(k) {
                    hits[(v * n as f64) as usize] += 1;
                }
                assert!(hits.iter().all(|&h| h == 1), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn scrambled_sobol_keeps_balance_and_depends_on_seed() {
        let a = generate(SamplerKind::sobol(1, true), 64, 3).unwrap();
        let b = generate(SamplerKind::sobol(2, true), 64, 3).unwrap();
        assert_ne!(a, b);
        for k in 0..3 {
            let mut hits = [0u32; 64];
            for v in a.column(k) {
                hits[(v * 64.0) as usize] += 1;
            }
            assert!(hits.iter().all(|&h| h == 1));
        }
    }

    #[test]
    fn design_pair_block_structure() {
        for kind in [SamplerKind::random(11), SamplerKind::sobol(11, true)] {
            let pair = build_design_pair(kind, 10, 3).unwrap();
            assert_eq!((pair.jansen.rows(), pair.jansen.cols()), (40, 3));
            assert_eq!(pair.discrepancy.rows(), 40);
            for block in 1..=3 {
                let k = block - 1;
                for v in 0..10 {
                    let a = pair.jansen.row(v);
                    let abk = pair.jansen.row(block * 10 + v);
                    for c in 0..3 {
                        if c != k {
                            assert_eq!(a[c], abk[c]);
                        }
                    }
                }
                // column k of block `block` is column k of B: it must differ from A
                assert_ne!(pair.jansen.get(block * 10, k), pair.jansen.get(0, k));
            }
        }
    }

    #[test]
    fn design_pair_is_deterministic() {
        let a = build_design_pair(SamplerKind::random(5), 5, 2).unwrap();
        let b = build_design_pair(SamplerKind::random(5), 5, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn design_pair_matrices_differ() {
        let pair = build_design_pair(SamplerKind::sobol(3, true), 8, 4).unwrap();
        assert_eq!(pair.discrepancy.rows(), 40);
        assert_ne!(pair.discrepancy.as_slice(), pair.jansen.as_slice());
    }

    #[test]
    fn design_pair_rejects_tiny_base() {
        assert!(build_design_pair(SamplerKind::random(1), 1, 2).is_err());
    }
}
