//! A hidden-partition instance on which value queries reveal almost nothing.
//!
//! The ground set is split at random into halves `C` and `D`. With
//! `k(S) = |S ∩ C|` and `ℓ(S) = |S ∩ D|`,
//!
//! ```text
//! H(S) = 0                  if |k(S) − ℓ(S)| ≤ εd
//!        2αδ / (2 − d)      otherwise
//! ```
//!
//! Random queries are balanced with high probability, so they return 0,
//! while `C` and `D` attain the negative optimum.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::Subset;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardnessInstance {
    d: usize,
    c: Subset,
    eps: f64,
    alpha: f64,
    delta: f64,
}

impl HardnessInstance {
    /// `eps = None` uses `max(1/d, 0.25)`.
    pub fn new(d: usize, eps: Option<f64>, alpha: f64, delta: f64, seed: u64) -> Result<Self> {
        if d <= 2 || d % 2 != 0 {
            return Err(Error::Domain(format!("hardness instance needs an even d > 2, got {d}")));
        }
        let mut idx: Vec<usize> = (0..d).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let c = Subset::from_indices(d, idx[..d / 2].iter().copied())?;
        Self::with_partition(c, eps, alpha, delta)
    }

    pub fn with_partition(c: Subset, eps: Option<f64>, alpha: f64, delta: f64) -> Result<Self> {
        let d = c.dim();
        if d <= 2 || d % 2 != 0 || c.len() != d / 2 {
            return Err(Error::Domain("partition must split an even d > 2 in halves".into()));
        }
        let eps = eps.unwrap_or_else(|| (1.0 / d as f64).max(0.25));
        if !(eps >= 1.0 / d as f64 - 1e-15 && eps < 0.5) {
            return Err(Error::Domain(format!("eps must lie in [1/d, 1/2), got {eps}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) || !(delta > 0.0) {
            return Err(Error::Domain("need alpha in (0, 1] and delta > 0".into()));
        }
        Ok(HardnessInstance { d, c, eps, alpha, delta })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn part_c(&self) -> Subset {
        self.c
    }

    pub fn part_d(&self) -> Subset {
        self.c.complement()
    }

    /// `(k(S), ℓ(S))`.
    pub fn counts(&self, s: Subset) -> (usize, usize) {
        let k = s.intersection(self.c).len();
        (k, s.len() - k)
    }

    pub fn is_balanced(&self, s: Subset) -> bool {
        let (k, l) = self.counts(s);
        (k as f64 - l as f64).abs() <= self.eps * self.d as f64
    }

    /// `2αδ/(2 − d)`.
    pub fn optimal_value(&self) -> f64 {
        2.0 * self.alpha * self.delta / (2.0 - self.d as f64)
    }

    pub fn hardness_value(&self, s: Subset) -> f64 {
        if self.is_balanced(s) {
            0.0
        } else {
            self.optimal_value()
        }
    }
}

impl SetFunction for HardnessInstance {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.hardness_value(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        let h = HardnessInstance::new(10, Some(0.2), 0.5, 1.0, 4).unwrap();
        assert_eq!(h.value(Subset::empty(10)).unwrap(), 0.0);
        assert_eq!(h.value(h.part_c()).unwrap(), 2.0 * 0.5 / (2.0 - 10.0));
        assert_eq!(h.value(h.part_d()).unwrap(), h.optimal_value());
        let c: Vec<usize> = h.part_c().iter().collect();
        let d: Vec<usize> = h.part_d().iter().collect();
        let s = Subset::from_indices(10, [c[0], c[1], c[2], d[0], d[1]]).unwrap();
        assert_eq!(h.counts(s), (3, 2));
        assert_eq!(h.value(s).unwrap(), 0.0);
    }

    #[test]
    fn default_eps_and_validation() {
        assert_eq!(HardnessInstance::new(12, None, 1.0, 1.0, 0).unwrap().eps(), 0.25);
        assert!(HardnessInstance::new(2, None, 1.0, 1.0, 0).is_err());
        assert!(HardnessInstance::new(7, None, 1.0, 1.0, 0).is_err());
        assert!(HardnessInstance::new(12, Some(0.5), 1.0, 1.0, 0).is_err());
    }
}
