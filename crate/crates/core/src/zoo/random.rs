//! Random bounded set functions stored as full value tables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::Subset;

/// Largest `d` for which a full table is built.
pub const TABLE_LIMIT: usize = 20;

/// `H(∅) = 0` and every other value drawn uniformly from `[-bound, bound]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomTable {
    d: usize,
    values: Vec<f64>,
}

impl RandomTable {
    pub fn new(d: usize, bound: f64, seed: u64) -> Result<Self> {
        if d == 0 || d > TABLE_LIMIT {
            return Err(Error::DimensionTooLarge { dim: d, limit: TABLE_LIMIT });
        }
        if !(bound > 0.0) {
            return Err(Error::Domain("bound must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<f64> = (0..1usize << d)
            .map(|_| rng.random_range(-bound..=bound))
            .collect();
        values[0] = 0.0;
        Ok(RandomTable { d, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl SetFunction for RandomTable {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.values[s.mask() as usize])
    }
}
