//! Concave functions of cardinality, `G′(S) = g(|S|)`.

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::Subset;

/// `g(x) = ½ a x² + (1 − ½ a) x` with `a = (β − 1)/(d − 1)`.
///
/// Non-decreasing, submodular and β-weakly DR-supermodular. Every
/// marginal drop `G′(i|A) − G′(i|B)` over `A ⊂ B` is at least `−a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcaveCardinality {
    d: usize,
    beta_target: f64,
    a: f64,
}

impl ConcaveCardinality {
    pub fn new(d: usize, beta_target: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain("concave cardinality needs d >= 2".into()));
        }
        if !(beta_target > 0.0 && beta_target < 1.0) {
            return Err(Error::Domain(format!(
                "beta_target must lie in (0, 1), got {beta_target}"
            )));
        }
        let a = (beta_target - 1.0) / (d as f64 - 1.0);
        Ok(ConcaveCardinality { d, beta_target, a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn beta_target(&self) -> f64 {
        self.beta_target
    }

    /// `ε_{G′} = −a`.
    pub fn eps(&self) -> f64 {
        -self.a
    }

    pub fn g(&self, x: f64) -> f64 {
        0.5 * self.a * x * x + (1.0 - 0.5 * self.a) * x
    }
}

impl SetFunction for ConcaveCardinality {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.g(s.len() as f64))
    }
}
