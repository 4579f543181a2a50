//! Sobol' sequence in Gray-code order with optional Owen scrambling.
//!
//! Points are produced as 32-bit integers and mapped to `x / 2^32`, so every
//! coordinate lies in `[0, 1)`. The sequence starts at the all-zeros point;
//! for `n = 2^m` unscrambled points every coordinate hits each dyadic interval
//! `[j/n, (j+1)/n)` exactly once.

use super::joe_kuo::PARAMS;
use super::rng::{derive_seed, splitmix64};
use crate::{Error, Result};

/// Highest dimension covered by the shipped direction numbers.
pub const MAX_DIM: usize = PARAMS.len() + 1;

const BITS: usize = 32;
const SCALE: f64 = 1.0 / 4_294_967_296.0;

#[derive(Debug, Clone)]
pub struct Sobol {
    directions: Vec<[u32; BITS]>,
}

impl Sobol {
    pub fn new(dims: usize) -> Result<Self> {
        if dims == 0 {
            return Err(Error::Domain("Sobol' dimension must be at least 1".into()));
        }
        if dims > MAX_DIM {
            return Err(Error::Capacity {
                what: "Sobol' direction-number table",
                limit: MAX_DIM,
                requested: dims,
            });
        }
        Ok(Sobol {
            directions: (0..dims).map(direction_numbers).collect(),
        })
    }

    pub fn dims(&self) -> usize {
        self.directions.len()
    }

    /// First `n` points as raw 32-bit integers, row-major `n x dims`.
    pub fn raw_points(&self, n: usize) -> Result<Vec<u32>> {
        if n as u64 > 1u64 << BITS {
            return Err(Error::Capacity {
                what: "32-bit Sobol' sequence length",
                limit: 1usize << BITS,
                requested: n,
            });
        }
        let dims = self.dims();
        let mut out = Vec::with_capacity(n * dims);
        let mut state = vec![0u32; dims];
        for i in 0..n {
            if i > 0 {
                // Gray code: point i differs from point i-1 by the direction
                // number indexed by the lowest zero bit of i-1.
                let c = (i - 1).trailing_ones() as usize;
                for (s, dir) in state.iter_mut().zip(&self.directions) {
                    *s ^= dir[c];
                }
            }
            out.extend_from_slice(&state);
        }
        Ok(out)
    }

    /// First `n` points in `[0,1)`, optionally Owen-scrambled with a
    /// per-dimension seed derived from `seed`.
    pub fn points(&self, n: usize, scramble: Option<u64>) -> Result<Vec<f64>> {
        let dims = self.dims();
        let raw = self.raw_points(n)?;
        Ok(match scramble {
            None => raw.into_iter().map(|x| x as f64 * SCALE).collect(),
            Some(seed) => {
                let dim_seeds: Vec<u64> = (0..dims as u64).map(|k| derive_seed(seed, &[k])).collect();
                raw.into_iter()
                    .enumerate()
                    .map(|(idx, x)| owen_scramble(x, dim_seeds[idx % dims]) as f64 * SCALE)
                    .collect()
            }
        })
    }
}

/// Direction numbers `v_1..v_32` of a zero-based dimension, left-aligned in 32 bits.
fn direction_numbers(dim: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if dim == 0 {
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = 1u32 << (BITS - 1 - j);
        }
        return v;
    }
    let (s, a, m) = PARAMS[dim - 1];
    let s = s as usize;
    for j in 0..s.min(BITS) {
        v[j] = m[j] << (BITS - 1 - j);
    }
    for j in s..BITS {
        let mut next = v[j - s] ^ (v[j - s] >> s);
        for k in 1..s {
            if (a >> (s - 1 - k)) & 1 == 1 {
                next ^= v[j - k];
            }
        }
        v[j] = next;
    }
    v
}

/// Nested uniform (Owen) scramble of a 32-bit fixed-point coordinate.
///
/// Each output bit is the input bit XOR a hash of the seed, the bit depth and
/// all higher input bits, so points sharing a dyadic prefix share the flips.
pub(crate) fn owen_scramble(x: u32, seed: u64) -> u32 {
    let mut out = 0u32;
    for depth in 0..BITS {
        let bit = BITS - 1 - depth;
        let prefix = if depth == 0 { 0 } else { (x >> (bit + 1)) as u64 };
        let h = splitmix64(seed ^ splitmix64(((depth as u64) << 32) | prefix));
        let flip = (h >> 63) as u32;
        out |= (((x >> bit) & 1) ^ flip) << bit;
    }
    out
}
