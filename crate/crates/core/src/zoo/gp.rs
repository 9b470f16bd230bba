//! Gaussian-process variance reduction for active learning.
//!
//! Observing the points in `S` with noise variance `σ²` reduces the
//! posterior variance at every point; summed over `V` this gives
//!
//! ```text
//! G(S) = tr(K_{V,S} (K_S + σ²I)⁻¹ K_{S,V}) = ‖L⁻¹ K_{S,V}‖²_F
//! ```
//!
//! with `L Lᵀ = K_S + σ²I`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{chol_factor, eigen_extremes, CholChain, SymmetricMatrix};
use crate::oracle::{Difference, SetFunction};
use crate::set::Subset;

/// Cost of querying a set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ItemCost {
    /// `λ|S|`.
    Linear { lambda: f64 },
    /// `λ Σ_g √|S ∩ g|` over disjoint groups.
    ConcavePerGroup { lambda: f64, groups: Vec<Vec<usize>> },
}

impl ItemCost {
    pub fn value(&self, s: Subset) -> f64 {
        match self {
            ItemCost::Linear { lambda } => lambda * s.len() as f64,
            ItemCost::ConcavePerGroup { lambda, groups } => {
                lambda
                    * groups
                        .iter()
                        .map(|g| (g.iter().filter(|&&i| s.contains(i)).count() as f64).sqrt())
                        .sum::<f64>()
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct GpInstance {
    k: SymmetricMatrix,
    sigma2: f64,
    cost: ItemCost,
}

impl GpInstance {
    pub fn new(k: SymmetricMatrix, sigma2: f64, cost: ItemCost) -> Result<Self> {
        if k.n() == 0 || k.n() > crate::set::MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: k.n(),
                limit: crate::set::MAX_DIM,
            });
        }
        if !(sigma2 > 0.0) {
            return Err(Error::Domain(format!("sigma2 must be positive, got {sigma2}")));
        }
        chol_factor(&k)?;
        if let ItemCost::ConcavePerGroup { groups, .. } = &cost {
            if let Some(&i) = groups.iter().flatten().find(|&&i| i >= k.n()) {
                return Err(Error::ElementOutOfRange { element: i, dim: k.n() });
            }
        }
        Ok(GpInstance { k, sigma2, cost })
    }

    /// Squared-exponential kernel on 1-d inputs.
    pub fn rbf_1d(xs: &[f64], lengthscale: f64, sigma2: f64, cost: ItemCost) -> Result<Self> {
        let k = SymmetricMatrix::from_fn(xs.len(), |i, j| {
            (-(xs[i] - xs[j]).powi(2) / (2.0 * lengthscale * lengthscale)).exp()
        });
        // a small jitter keeps near-duplicate inputs positive definite
        let jitter = SymmetricMatrix::from_fn(xs.len(), |i, j| {
            k.get(i, j) + if i == j { 1e-8 } else { 0.0 }
        });
        GpInstance::new(jitter, sigma2, cost)
    }

    pub fn dim(&self) -> usize {
        self.k.n()
    }

    pub fn kernel(&self) -> &SymmetricMatrix {
        &self.k
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn cost(&self) -> &ItemCost {
        &self.cost
    }

    pub fn variance_reduction_value(&self, s: Subset) -> Result<f64> {
        if s.is_empty() {
            return Ok(0.0);
        }
        let idx: Vec<usize> = s.iter().collect();
        let l = chol_factor(&self.k.principal(&idx, self.sigma2))?;
        let mut total = 0.0;
        let mut col = vec![0.0; idx.len()];
        for c in 0..self.dim() {
            for (a, &i) in idx.iter().enumerate() {
                col[a] = self.k.get(i, c);
            }
            total += l.forward(&col).iter().map(|v| v * v).sum::<f64>();
        }
        Ok(total)
    }

    /// Variance reduction on every prefix of `perm`, growing one factor and
    /// the rows of `L⁻¹ K_{S,V}` alongside it.
    pub fn variance_reduction_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        let d = self.dim();
        let mut chain = CholChain::with_capacity(perm.len());
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(perm.len());
        let mut out = Vec::with_capacity(perm.len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        let mut border = Vec::with_capacity(perm.len());
        for &j in perm {
            border.clear();
            border.extend(chain.members().iter().map(|&m| self.k.get(m, j)));
            let row = chain.extend(j, &border, self.k.get(j, j) + self.sigma2)?;
            let k = row.len() - 1;
            let mut w: Vec<f64> = (0..d).map(|c| self.k.get(j, c)).collect();
            for (r, l) in rows.iter().zip(&row[..k]) {
                for (wc, rc) in w.iter_mut().zip(r) {
                    *wc -= l * rc;
                }
            }
            let diag = row[k];
            w.iter_mut().for_each(|v| *v /= diag);
            acc += w.iter().map(|v| v * v).sum::<f64>();
            rows.push(w);
            out.push(acc);
        }
        Ok(out)
    }

    /// `λ_min² / (λ_max (λ_min + σ²))`.
    pub fn variance_reduction_beta(&self) -> Result<f64> {
        let (lo, hi) = eigen_extremes(&self.k)?;
        if !(lo > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: 0, value: lo });
        }
        Ok(lo * lo / (hi * (lo + self.sigma2)))
    }

    pub fn variance_reduction(&self) -> VarianceReduction {
        VarianceReduction { inst: self.clone() }
    }

    pub fn item_cost(&self) -> CostFunction {
        CostFunction {
            d: self.dim(),
            cost: self.cost.clone(),
        }
    }

    /// Query cost minus variance reduction.
    pub fn objective(&self) -> Difference<CostFunction, VarianceReduction> {
        Difference {
            f: self.item_cost(),
            g: self.variance_reduction(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VarianceReduction {
    inst: GpInstance,
}

impl SetFunction for VarianceReduction {
    fn dim(&self) -> usize {
        self.inst.dim()
    }

    fn value(&self, s: Subset) -> Result<f64> {
        self.inst.variance_reduction_value(s)
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        self.inst.variance_reduction_chain(perm)
    }
}

#[derive(Debug, Clone)]
pub struct CostFunction {
    d: usize,
    cost: ItemCost,
}

impl SetFunction for CostFunction {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.cost.value(s))
    }
}
