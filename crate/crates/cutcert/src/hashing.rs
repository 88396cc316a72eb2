//! t-wise independent polynomial hashing over the prime field, and the
//! geometric level assignment derived from it.
//!
//! A `PolyHash` is a random degree-(t-1) polynomial evaluated at the
//! coordinate index; with distinct evaluation points this is a t-wise
//! independent family. `GeometricLevels` folds the uniform output into the
//! floor-log map so that level j receives a 2^-j fraction of coordinates,
//! with the residual 1/m mass absorbed by the bottom level. The level
//! computation is integer-only so sketches are bit-exact across platforms.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldElement, MODULUS};
use crate::{Error, Result};

/// SplitMix64 step, used to derive per-instance seeds from a master seed.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Random polynomial of degree `t - 1` over the field, reduced to `[1, m]`.
/// Fully reproducible from `(seed, t, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyHash {
    coeffs: Vec<FieldElement>,
    m: u64,
    seed: u64,
}

fn sample_field(rng: &mut ChaCha8Rng) -> FieldElement {
    // 61-bit rejection sampling; acceptance probability ~1.
    loop {
        let v = rng.next_u64() >> 3;
        if v < MODULUS {
            return FieldElement::new(v);
        }
    }
}

impl PolyHash {
    pub fn new(seed: u64, t: usize, m: u64) -> Result<Self> {
        if t == 0 || m == 0 {
            return Err(Error::InvalidParams("t and m must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..t).map(|_| sample_field(&mut rng)).collect();
        Ok(PolyHash { coeffs, m, seed })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn independence(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluates at point `i` (1-based) and reduces into `[1, m]`.
    ///
    /// With m a power of two far below the modulus, the reduction bias is
    /// below 2^-40 and is ignored by the error accounting.
    pub fn eval(&self, i: u64) -> u64 {
        let x = FieldElement::new(i);
        let mut acc = FieldElement::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc.value() % self.m + 1
    }
}

/// Level assignment with Pr[level(i) = j] = 2^-j for j < L and the residual
/// mass on level L. Domain size must be a power of two, at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricLevels {
    inner: PolyHash,
    levels: u32,
}

impl GeometricLevels {
    pub fn new(seed: u64, t: usize, m: u64) -> Result<Self> {
        if m < 2 || !m.is_power_of_two() {
            return Err(Error::InvalidParams(format!(
                "domain size {m} must be a power of two >= 2"
            )));
        }
        Ok(GeometricLevels {
            inner: PolyHash::new(seed, t, m)?,
            levels: m.trailing_zeros(),
        })
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn hash(&self) -> &PolyHash {
        &self.inner
    }

    /// floor(log2(m / u)) + 1 clamped to [1, L], computed on integers.
    pub fn level_of(&self, i: u64) -> u32 {
        let u = self.inner.eval(i);
        level_from_draw(u, self.levels)
    }

    /// Precomputes the level of every coordinate in `[1, m]`.
    pub fn assign_all(&self, m: u64) -> Vec<u8> {
        (1..=m).map(|i| self.level_of(i) as u8).collect()
    }
}

/// The floor-log map from a uniform draw `u` in `[1, 2^levels]` to a level.
pub fn level_from_draw(u: u64, levels: u32) -> u32 {
    debug_assert!(u >= 1 && u <= 1u64 << levels);
    // ceil(log2(u)): bit length of u - 1.
    let clog = 64 - (u - 1).leading_zeros();
    (levels - clog + 1).min(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_wise_family_is_constant() {
        let h = PolyHash::new(3, 1, 16).unwrap();
        let v = h.eval(1);
        assert!((1..=64).all(|i| h.eval(i) == v));
    }

    #[test]
    fn deterministic_from_seed() {
        let a = PolyHash::new(42, 8, 16).unwrap();
        let b = PolyHash::new(42, 8, 16).unwrap();
        assert!((1..=100).all(|i| a.eval(i) == b.eval(i)));
        let c = PolyHash::new(43, 8, 16).unwrap();
        assert!((1..=100).any(|i| a.eval(i) != c.eval(i)));
    }

    #[test]
    fn chi_square_uniformity() {
        // 1e5 draws into 16 buckets; statistic within 3 sigma of df = 15.
        let h = PolyHash::new(7, 8, 16).unwrap();
        let mut counts = [0u64; 16];
        let n = 100_000u64;
        for i in 1..=n {
            counts[(h.eval(i) - 1) as usize] += 1;
        }
        let expected = n as f64 / 16.0;
        let stat: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let bound = 15.0 + 3.0 * (2.0 * 15.0f64).sqrt();
        assert!(stat < bound, "chi-square statistic {stat} exceeds {bound}");
    }

    #[test]
    fn floor_log_map_m8() {
        // m = 8: u in {5..8} -> 1, {3,4} -> 2, {2} -> 3, {1} -> 3 (clamped).
        let expect = [(8, 1), (7, 1), (6, 1), (5, 1), (4, 2), (3, 2), (2, 3), (1, 3)];
        for (u, lvl) in expect {
            assert_eq!(level_from_draw(u, 3), lvl, "u = {u}");
        }
    }

    #[test]
    fn top_and_bottom_draws() {
        assert_eq!(level_from_draw(16, 4), 1);
        // u = 1 absorbs the residual 1/m mass on the bottom level.
        assert_eq!(level_from_draw(1, 4), 4);
    }

    #[test]
    fn exact_marginal_counts_power_of_two() {
        // For uniform u over [1, m], level j has exactly m/2^j preimages
        // (j < L) and level L has 2.
        for levels in 2..=8u32 {
            let m = 1u64 << levels;
            let mut counts = vec![0u64; levels as usize + 1];
            for u in 1..=m {
                counts[level_from_draw(u, levels) as usize] += 1;
            }
            for j in 1..levels {
                assert_eq!(counts[j as usize], m >> j, "level {j} of m = {m}");
            }
            assert_eq!(counts[levels as usize], 2);
        }
    }

    #[test]
    fn level_assignment_reproducible() {
        let g1 = GeometricLevels::new(99, 12, 64).unwrap();
        let g2 = GeometricLevels::new(99, 12, 64).unwrap();
        assert_eq!(g1.assign_all(64), g2.assign_all(64));
        assert_eq!(g1.levels(), 6);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(GeometricLevels::new(0, 4, 48).is_err());
        assert!(GeometricLevels::new(0, 4, 1).is_err());
    }
}
