//! Modular functions `w(S) = Σ_{i∈S} w_i`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::SetFunction;
use crate::set::Subset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modular {
    weights: Vec<f64>,
}

impl Modular {
    pub fn new(weights: Vec<f64>) -> Self {
        Modular { weights }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl SetFunction for Modular {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(s.iter().map(|i| self.weights[i]).sum())
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(perm.len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        for &j in perm {
            acc += self.weights[j];
            out.push(acc);
        }
        Ok(out)
    }
}

/// `S ↦ |S|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinality {
    pub d: usize,
}

impl SetFunction for Cardinality {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(s.len() as f64)
    }
}
