//! An instance on which the approximate subgradient method stalls at the
//! worst value its guarantee allows.
//!
//! With a designated bad element `b`,
//!
//! ```text
//! F(S) = |S| + d/β − 1   if b ∈ S,   α|S|   otherwise
//! G(S) = |S| + d/β − 1   if b ∈ S,   |S|/β  otherwise
//! ```
//!
//! so `H = F − G` vanishes on every set containing `b` and equals
//! `(α − 1/β)|S|` elsewhere. Started from a point whose largest coordinate is
//! `b`, every chain marginal of `H` is zero and the iterate never moves.

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::Subset;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessInstance {
    d: usize,
    alpha: f64,
    beta: f64,
    bad: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightnessPart {
    F,
    G,
    H,
}

/// One of `F`, `G`, `H` of a [`TightnessInstance`] as a set function.
#[derive(Debug, Clone, Copy)]
pub struct TightnessFunction {
    inst: TightnessInstance,
    part: TightnessPart,
}

impl TightnessInstance {
    pub fn new(d: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::with_bad_element(d, alpha, beta, 0)
    }

    pub fn with_bad_element(d: usize, alpha: f64, beta: f64, bad: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain("tightness instance needs d >= 2".into()));
        }
        if bad >= d {
            return Err(Error::ElementOutOfRange { element: bad, dim: d });
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1], got {v}")));
            }
        }
        Ok(TightnessInstance { d, alpha, beta, bad })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn bad_element(&self) -> usize {
        self.bad
    }

    pub fn f_value(&self, s: Subset) -> f64 {
        let k = s.len() as f64;
        if s.contains(self.bad) {
            k + self.d as f64 / self.beta - 1.0
        } else {
            self.alpha * k
        }
    }

    pub fn g_value(&self, s: Subset) -> f64 {
        let k = s.len() as f64;
        if s.contains(self.bad) {
            k + self.d as f64 / self.beta - 1.0
        } else {
            k / self.beta
        }
    }

    /// Computed in closed form rather than as `F − G`, so that values are
    /// exact multiples of `α − 1/β`.
    pub fn h_value(&self, s: Subset) -> f64 {
        if s.contains(self.bad) || s.is_empty() {
            0.0
        } else {
            (self.alpha - 1.0 / self.beta) * s.len() as f64
        }
    }

    pub fn values(&self, s: Subset) -> (f64, f64, f64) {
        (self.f_value(s), self.g_value(s), self.h_value(s))
    }

    /// `V ∖ {b}`.
    pub fn optimal_set(&self) -> Subset {
        Subset::full(self.d).without(self.bad)
    }

    /// `(α − 1/β)(d − 1)`.
    pub fn optimal_value(&self) -> f64 {
        self.h_value(self.optimal_set())
    }

    /// Start point whose unique largest coordinate is the bad element.
    pub fn adversarial_start(&self) -> Vec<f64> {
        let mut s = vec![0.5; self.d];
        s[self.bad] = 0.9;
        s
    }

    pub fn part(&self, part: TightnessPart) -> TightnessFunction {
        TightnessFunction { inst: *self, part }
    }

    pub fn objective(&self) -> TightnessFunction {
        self.part(TightnessPart::H)
    }

    pub fn f(&self) -> TightnessFunction {
        self.part(TightnessPart::F)
    }

    pub fn g(&self) -> TightnessFunction {
        self.part(TightnessPart::G)
    }
}

impl SetFunction for TightnessFunction {
    fn dim(&self) -> usize {
        self.inst.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(match self.part {
            TightnessPart::F => self.inst.f_value(s),
            TightnessPart::G => self.inst.g_value(s),
            TightnessPart::H => self.inst.h_value(s),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::{estimate_dr_parameters, Monotonicity};
    use crate::oracle::Counted;

    #[test]
    fn values() {
        let t = TightnessInstance::new(5, 0.5, 0.5).unwrap();
        assert_eq!(t.values(Subset::empty(5)), (0.0, 0.0, 0.0));
        assert_eq!(t.h_value(Subset::from_indices(5, [0, 3]).unwrap()), 0.0);
        assert_eq!(t.h_value(t.optimal_set()), -6.0);
        assert_eq!(t.optimal_value(), -6.0);
    }

    #[test]
    fn parts_have_stated_parameters() {
        let grid = [0.25, 0.5, 1.0];
        for d in 3..=8 {
            for &a in &grid {
                for &b in &grid {
                    let t = TightnessInstance::new(d, a, b).unwrap();
                    let pf = estimate_dr_parameters(&Counted::new(t.f()), Monotonicity::NonDecreasing).unwrap();
                    let pg = estimate_dr_parameters(&Counted::new(t.g()), Monotonicity::NonDecreasing).unwrap();
                    assert!(pf.alpha >= a - 1e-12 && pf.beta >= 1.0 - 1e-12, "F d={d} a={a} b={b}: {pf:?}");
                    assert!(pg.alpha >= 1.0 - 1e-12 && pg.beta >= b - 1e-12, "G d={d} a={a} b={b}: {pg:?}");
                    for s in crate::set::GroundSet::new(d).unwrap().subsets() {
                        let (f, g, h) = t.values(s);
                        assert!((f - g - h).abs() <= 1e-12 * f.abs().max(1.0));
                    }
                }
            }
        }
    }
}
