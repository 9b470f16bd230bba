//! Structured-sparsity regression: a support-penalizing regularizer `F`
//! minus the least-squares support function
//!
//! ```text
//! G(S) = ℓ(0) − min_{supp(x) ⊆ S} ℓ(x),   ℓ(x) = ½‖y − Ax‖² + (σ²/2)‖x‖²
//! ```
//!
//! With `M = AᵀA + σ²I` and `b = Aᵀy` this is `G(S) = ½ b_Sᵀ M_S⁻¹ b_S`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{chol_factor, CholChain, SymmetricMatrix};
use crate::oracle::{Difference, SetFunction};
use crate::set::Subset;

/// Support penalties. Values are multiplied by the instance's `λ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularizer {
    /// `max(S) − min(S) + 1`, and 0 on `∅`.
    Range,
    /// `d − 1 + range(S)` for `S ≠ ∅`.
    ModifiedRange,
    /// `|S| + C(S)` where `C(S)` is `b` if `S` meets both groups, `a` if it
    /// meets exactly one, and 0 otherwise.
    ExpensiveFeature {
        group1: Vec<usize>,
        group2: Vec<usize>,
        a: f64,
        b: f64,
    },
    Modular { weights: Vec<f64> },
}

impl Regularizer {
    /// Unscaled penalty of `S` on a ground set of size `d`.
    pub fn base_value(&self, d: usize, s: Subset) -> f64 {
        match self {
            Regularizer::Range => match (s.min_element(), s.max_element()) {
                (Some(lo), Some(hi)) => (hi - lo + 1) as f64,
                _ => 0.0,
            },
            Regularizer::ModifiedRange => match (s.min_element(), s.max_element()) {
                (Some(lo), Some(hi)) => (d - 1 + hi - lo + 1) as f64,
                _ => 0.0,
            },
            Regularizer::ExpensiveFeature { group1, group2, a, b } => {
                let hit1 = group1.iter().any(|&i| s.contains(i));
                let hit2 = group2.iter().any(|&i| s.contains(i));
                let c = match (hit1, hit2) {
                    (true, true) => *b,
                    (true, false) | (false, true) => *a,
                    (false, false) => 0.0,
                };
                s.len() as f64 + c
            }
            Regularizer::Modular { weights } => s.iter().map(|i| weights[i]).sum(),
        }
    }

    fn validate(&self, d: usize) -> Result<()> {
        match self {
            Regularizer::ExpensiveFeature { group1, group2, .. } => {
                if let Some(&i) = group1.iter().chain(group2).find(|&&i| i >= d) {
                    return Err(Error::ElementOutOfRange { element: i, dim: d });
                }
            }
            Regularizer::Modular { weights } if weights.len() != d => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: weights.len(),
                })
            }
            _ => {}
        }
        Ok(())
    }
}

/// How `G` is evaluated along a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Grow one bordered Cholesky factor along the chain.
    #[default]
    Chain,
    /// Refactor `M_S` from scratch for every prefix.
    Direct,
}

#[derive(Debug)]
struct Data {
    n: usize,
    d: usize,
    columns: Vec<Vec<f64>>,
    y: Vec<f64>,
    sigma2: f64,
    gram: SymmetricMatrix,
    aty: Vec<f64>,
}

/// A ridge-regularized least-squares problem with a support penalty.
///
/// Cloning is cheap: the design matrix is shared.
#[derive(Debug, Clone)]
pub struct RegressionInstance {
    data: Arc<Data>,
    lambda: f64,
    regularizer: Regularizer,
}

impl RegressionInstance {
    /// `rows` is the `n × d` design matrix, row by row.
    pub fn new(
        rows: &[Vec<f64>],
        y: Vec<f64>,
        sigma2: f64,
        lambda: f64,
        regularizer: Regularizer,
    ) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows[0].is_empty() {
            return Err(Error::Domain("design matrix must be non-empty".into()));
        }
        let d = rows[0].len();
        if d > crate::set::MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: d,
                limit: crate::set::MAX_DIM,
            });
        }
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Domain("design matrix rows differ in length".into()));
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        if !(sigma2 >= 0.0) || !(lambda >= 0.0) {
            return Err(Error::Domain("sigma2 and lambda must be >= 0".into()));
        }
        regularizer.validate(d)?;
        let columns: Vec<Vec<f64>> = (0..d).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        let gram = SymmetricMatrix::from_fn(d, |i, j| {
            dot(&columns[i], &columns[j]) + if i == j { sigma2 } else { 0.0 }
        });
        let aty = columns.iter().map(|c| dot(c, &y)).collect();
        Ok(RegressionInstance {
            data: Arc::new(Data {
                n,
                d,
                columns,
                y,
                sigma2,
                gram,
                aty,
            }),
            lambda,
            regularizer,
        })
    }

    /// Same data with another `λ`.
    pub fn with_lambda(&self, lambda: f64) -> Self {
        RegressionInstance {
            data: Arc::clone(&self.data),
            lambda,
            regularizer: self.regularizer.clone(),
        }
    }

    /// Same data with another regularizer.
    pub fn with_regularizer(&self, regularizer: Regularizer) -> Result<Self> {
        regularizer.validate(self.dim())?;
        Ok(RegressionInstance {
            data: Arc::clone(&self.data),
            lambda: self.lambda,
            regularizer,
        })
    }

    pub fn dim(&self) -> usize {
        self.data.d
    }

    pub fn n(&self) -> usize {
        self.data.n
    }

    pub fn sigma2(&self) -> f64 {
        self.data.sigma2
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn regularizer(&self) -> &Regularizer {
        &self.regularizer
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.data.columns[i]
    }

    pub fn y(&self) -> &[f64] {
        &self.data.y
    }

    /// `AᵀA + σ²I`.
    pub fn gram(&self) -> &SymmetricMatrix {
        &self.data.gram
    }

    /// `Aᵀy`.
    pub fn aty(&self) -> &[f64] {
        &self.data.aty
    }

    /// `ℓ(0) = ½‖y‖²`.
    pub fn loss_at_zero(&self) -> f64 {
        0.5 * self.data.y.iter().map(|v| v * v).sum::<f64>()
    }

    /// `G(S)` by a fresh factorization of `M_S`.
    pub fn gl_value(&self, s: Subset) -> Result<f64> {
        if s.is_empty() {
            return Ok(0.0);
        }
        let idx: Vec<usize> = s.iter().collect();
        let l = chol_factor(&self.data.gram.principal(&idx, 0.0))?;
        let b: Vec<f64> = idx.iter().map(|&i| self.data.aty[i]).collect();
        let z = l.forward(&b);
        Ok(0.5 * z.iter().map(|v| v * v).sum::<f64>())
    }

    /// `G` on every prefix of `perm`, growing one factor.
    pub fn gl_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        let mut chain = CholChain::with_capacity(perm.len());
        let mut z: Vec<f64> = Vec::with_capacity(perm.len());
        let mut out = Vec::with_capacity(perm.len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        let mut border = Vec::with_capacity(perm.len());
        for &j in perm {
            border.clear();
            border.extend(chain.members().iter().map(|&m| self.data.gram.get(m, j)));
            let row = chain.extend(j, &border, self.data.gram.get(j, j))?;
            let k = row.len() - 1;
            let s: f64 = row[..k].iter().zip(&z).map(|(l, v)| l * v).sum();
            let znew = (self.data.aty[j] - s) / row[k];
            z.push(znew);
            acc += 0.5 * znew * znew;
            out.push(acc);
        }
        Ok(out)
    }

    /// Ridge coefficients `argmin_{supp(x) ⊆ S} ℓ(x)`, as a length-`d` vector.
    pub fn ridge_solution(&self, s: Subset) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.dim()];
        if s.is_empty() {
            return Ok(x);
        }
        let idx: Vec<usize> = s.iter().collect();
        let l = chol_factor(&self.data.gram.principal(&idx, 0.0))?;
        let b: Vec<f64> = idx.iter().map(|&i| self.data.aty[i]).collect();
        for (&i, v) in idx.iter().zip(l.solve(&b)) {
            x[i] = v;
        }
        Ok(x)
    }

    /// `λ · F(S)`.
    pub fn regularizer_value(&self, s: Subset) -> f64 {
        self.lambda * self.regularizer.base_value(self.dim(), s)
    }

    pub fn loss_reduction(&self, mode: SolveMode) -> LossReduction {
        LossReduction {
            inst: self.clone(),
            mode,
        }
    }

    pub fn penalty(&self) -> Penalty {
        Penalty { inst: self.clone() }
    }

    /// `H = λF − G`.
    pub fn objective(&self, mode: SolveMode) -> Difference<Penalty, LossReduction> {
        Difference {
            f: self.penalty(),
            g: self.loss_reduction(mode),
        }
    }

    /// Minimizes `H` over the `d(d+1)/2 + 1` intervals (including `∅`).
    /// With a range-type penalty the optimum over intervals is the global one,
    /// since replacing `S` by its hull keeps `F` and can only raise `G`.
    pub fn best_interval(&self) -> Result<(Subset, f64)> {
        let d = self.dim();
        let mut best = (Subset::empty(d), 0.0);
        for lo in 0..d {
            let perm: Vec<usize> = (lo..d).collect();
            let g = self.gl_chain(&perm)?;
            for hi in lo..d {
                let s = Subset::interval(d, lo, hi);
                let v = self.regularizer_value(s) - g[hi - lo + 1];
                if v < best.1 {
                    best = (s, v);
                }
            }
        }
        Ok(best)
    }
}

/// `G` as a set function.
#[derive(Debug, Clone)]
pub struct LossReduction {
    inst: RegressionInstance,
    mode: SolveMode,
}

impl LossReduction {
    pub fn instance(&self) -> &RegressionInstance {
        &self.inst
    }
}

impl SetFunction for LossReduction {
    fn dim(&self) -> usize {
        self.inst.dim()
    }

    fn value(&self, s: Subset) -> Result<f64> {
        self.inst.gl_value(s)
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        match self.mode {
            SolveMode::Chain => self.inst.gl_chain(perm),
            SolveMode::Direct => {
                crate::oracle::default_chain(self.dim(), perm, |s| self.inst.gl_value(s))
            }
        }
    }
}

/// `λF` as a set function.
#[derive(Debug, Clone)]
pub struct Penalty {
    inst: RegressionInstance,
}

impl SetFunction for Penalty {
    fn dim(&self) -> usize {
        self.inst.dim()
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.inst.regularizer_value(s))
    }
}

/// Synthetic instance with a planted block of `k` consecutive ones.
#[derive(Debug, Clone)]
pub struct PlantedRegression {
    pub instance: RegressionInstance,
    pub x_true: Vec<f64>,
    pub support: Subset,
}

/// Gaussian `n × d` design with unit-norm columns, `x♮` equal to one on a
/// randomly placed run of `k` indices, and `y = Ax♮ + noise_sigma · N(0, I)`.
pub fn generate_regression(
    d: usize,
    n: usize,
    k: usize,
    noise_sigma: f64,
    sigma2: f64,
    regularizer: Regularizer,
    seed: u64,
) -> Result<PlantedRegression> {
    if k == 0 || k > d || n == 0 {
        return Err(Error::Domain(format!(
            "need 1 <= k <= d and n >= 1 (d = {d}, n = {n}, k = {k})"
        )));
    }
    if !(noise_sigma >= 0.0) {
        return Err(Error::Domain("noise_sigma must be >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    for c in cols.iter_mut() {
        let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= norm);
    }
    let offset = rng.random_range(0..=d - k);
    let support = Subset::interval(d, offset, offset + k - 1);
    let x_true = support.indicator();
    let y: Vec<f64> = (0..n)
        .map(|r| {
            let clean: f64 = support.iter().map(|j| cols[j][r]).sum();
            clean + noise_sigma * rng.sample::<f64, _>(StandardNormal)
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let instance = RegressionInstance::new(&rows, y, sigma2, 1.0, regularizer)?;
    Ok(PlantedRegression {
        instance,
        x_true,
        support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::{estimate_dr_parameters, Monotonicity};
    use crate::oracle::{Counted, FnSetFunction};

    fn identity_instance() -> RegressionInstance {
        RegressionInstance::new(
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![3.0, 4.0],
            0.0,
            1.0,
            Regularizer::Range,
        )
        .unwrap()
    }

    #[test]
    fn gl_examples() {
        let r = identity_instance();
        assert_eq!(r.gl_value(Subset::empty(2)).unwrap(), 0.0);
        assert_eq!(r.gl_value(Subset::singleton(2, 0)).unwrap(), 4.5);
        assert_eq!(r.gl_value(Subset::full(2)).unwrap(), 12.5);
        assert_eq!(r.gl_chain(&[1, 0]).unwrap(), vec![0.0, 8.0, 12.5]);
    }

    #[test]
    fn singular_design_is_reported() {
        let r = RegressionInstance::new(
            &[vec![1.0, 1.0], vec![1.0, 1.0]],
            vec![1.0, 0.0],
            0.0,
            1.0,
            Regularizer::Range,
        )
        .unwrap();
        assert!(matches!(
            r.gl_value(Subset::full(2)),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn regularizer_examples() {
        let d = 6;
        let s = Subset::from_indices(d, [3, 5]).unwrap();
        assert_eq!(Regularizer::Range.base_value(d, s), 3.0);
        assert_eq!(Regularizer::Range.base_value(d, Subset::empty(d)), 0.0);
        assert_eq!(Regularizer::ModifiedRange.base_value(d, s), 8.0);
        let ef = Regularizer::ExpensiveFeature {
            group1: vec![0],
            group2: vec![1],
            a: 1.0,
            b: 3.0,
        };
        assert_eq!(ef.base_value(2, Subset::full(2)), 5.0);
        assert_eq!(ef.base_value(2, Subset::singleton(2, 1)), 2.0);
    }

    #[test]
    fn range_parameters() {
        let d = 5;
        let f = FnSetFunction::new(d, move |s| Regularizer::Range.base_value(d, s));
        let p = estimate_dr_parameters(&Counted::new(f), Monotonicity::NonDecreasing).unwrap();
        assert!((p.alpha - 0.25).abs() < 1e-15);
    }

    #[test]
    fn planted_instance_properties() {
        let p = generate_regression(8, 12, 3, 0.0, 0.0, Regularizer::Range, 5).unwrap();
        for j in 0..8 {
            let n: f64 = p.instance.column(j).iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        let g = p.instance.gl_value(p.support).unwrap();
        let full = p.instance.loss_at_zero();
        assert!((g - full).abs() <= 1e-10 * full);
        let again = generate_regression(8, 12, 3, 0.0, 0.0, Regularizer::Range, 5).unwrap();
        assert_eq!(again.instance.y(), p.instance.y());
    }

    #[test]
    fn ridge_solution_zeroes_gradient() {
        let p = generate_regression(6, 10, 2, 0.1, 0.5, Regularizer::Range, 9).unwrap();
        let r = &p.instance;
        let s = Subset::from_indices(6, [0, 2, 3]).unwrap();
        let x = r.ridge_solution(s).unwrap();
        // (Mx)_i = b_i for i in S
        let mx = r.gram().mul_vec(&x);
        for i in s.iter() {
            assert!((mx[i] - r.aty()[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn best_interval_beats_every_interval() {
        let p = generate_regression(8, 16, 3, 0.05, 1e-3, Regularizer::ModifiedRange, 2).unwrap();
        let r = p.instance.with_lambda(0.05);
        let (_, v) = r.best_interval().unwrap();
        for lo in 0..8 {
            for hi in lo..8 {
                let s = Subset::interval(8, lo, hi);
                let h = r.regularizer_value(s) - r.gl_value(s).unwrap();
                assert!(v <= h + 1e-12);
            }
        }
    }
}
