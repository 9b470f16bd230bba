//! Projected subgradient method on the Lovász extension.
//!
//! Each iteration sorts the current point, queries `H` along the induced
//! chain (`d + 1` calls) to get the greedy vector `κ`, and moves to
//! `Π_{[0,1]^d}(s − η κ)`. The best iterate by Lovász value is rounded to its
//! best superlevel set.
//!
//! For `H = F − G` with `F` α-weakly DR-submodular and `G` β-weakly
//! DR-supermodular, the rounded set satisfies
//! `H(Ŝ) ≤ F(S*)/α − β G(S*) + RL/√T` with `L = F(V) + G(V)`.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lovasz::{argmin_first, greedy_along, order_coordinates, FractionalPoint, Ordering};
use crate::oracle::{Complement, ValueOracle, NORMALIZATION_TOL};
use crate::set::Subset;

/// Step-size rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    /// `η = R / (L √T)`.
    FixedTheorem,
    /// `η_t = c / √t`.
    FixedSqrt { c: f64 },
    /// `η_t = (h_L(s^t) − h_best + γ_t) / ‖κ^t‖²` with `γ_t = γ_0/√t` and
    /// `γ_0 = 0.1 |h_L(s¹)| + 1e-3`.
    Polyak,
}

/// Lipschitz constant used by [`StepRule::FixedTheorem`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lipschitz {
    Given(f64),
    /// Running maximum of the observed `‖κ^t‖₂`. The result is then flagged
    /// as not certified.
    Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PgmConfig {
    pub iterations: usize,
    pub step_rule: StepRule,
    pub lipschitz: Lipschitz,
    /// Domain radius, default `2√d`.
    pub radius: Option<f64>,
    /// Initial iterate, default all `0.5`.
    pub start: Option<Vec<f64>>,
}

impl Default for PgmConfig {
    fn default() -> Self {
        PgmConfig {
            iterations: 1000,
            step_rule: StepRule::FixedTheorem,
            lipschitz: Lipschitz::Estimate,
            radius: None,
            start: None,
        }
    }
}

impl PgmConfig {
    pub fn new(iterations: usize) -> Self {
        PgmConfig {
            iterations,
            ..Default::default()
        }
    }

    pub fn with_lipschitz(mut self, l: f64) -> Self {
        self.lipschitz = Lipschitz::Given(l);
        self
    }

    pub fn with_step_rule(mut self, rule: StepRule) -> Self {
        self.step_rule = rule;
        self
    }

    pub fn with_start(mut self, start: Vec<f64>) -> Self {
        self.start = Some(start);
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn radius_for(&self, d: usize) -> f64 {
        self.radius.unwrap_or(2.0 * (d as f64).sqrt())
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidConfig("iterations must be >= 1".into()));
        }
        if let Lipschitz::Given(l) = self.lipschitz {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::InvalidConfig(format!("Lipschitz constant must be positive, got {l}")));
            }
        }
        if let Some(r) = self.radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidConfig(format!("radius must be positive, got {r}")));
            }
        }
        if let StepRule::FixedSqrt { c } = self.step_rule {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidConfig(format!("step constant must be positive, got {c}")));
            }
        }
        if let Some(s) = &self.start {
            if s.len() != d {
                return Err(Error::InvalidConfig(format!(
                    "start point has {} coordinates, expected {d}",
                    s.len()
                )));
            }
            FractionalPoint::new(s.clone()).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub lovasz: f64,
    pub kappa_norm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PgmResult {
    pub best_point: FractionalPoint,
    pub best_lovasz: f64,
    /// 1-based iteration of the best iterate.
    pub best_iteration: usize,
    pub rounded_set: Subset,
    /// Value of the rounded set, as reported by the oracle during rounding
    /// and shifted by `-offset`.
    pub rounded_value: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    /// Sorting permutation of every iterate.
    pub orderings: Vec<Ordering>,
    pub oracle_calls: u64,
    /// `H(∅)` subtracted from every value; 0 for stochastic oracles.
    pub offset: f64,
    /// The Lipschitz constant in force at the end of the run.
    pub lipschitz: f64,
    pub estimated_lipschitz: bool,
    pub alpha_t: Option<f64>,
    pub beta_t: Option<f64>,
}

impl PgmResult {
    /// Attaches the trajectory averages `α_T`, `β_T` for a decomposition
    /// `H = F − G` and a reference set `S*`.
    pub fn certify<F, G>(&mut self, f: &F, g: &G, s_star: Subset) -> Result<EmpiricalRatios>
    where
        F: ValueOracle + ?Sized,
        G: ValueOracle + ?Sized,
    {
        let r = empirical_alpha_beta(f, g, &self.orderings, s_star)?;
        self.alpha_t = r.alpha_t;
        self.beta_t = r.beta_t;
        Ok(r)
    }
}

/// Coordinate-wise clamp to `[0,1]`. NaN coordinates map to 0.
pub fn project_box(x: &[f64]) -> FractionalPoint {
    FractionalPoint::from_clamped(
        x.iter()
            .map(|&v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) })
            .collect(),
    )
}

/// Runs `T` iterations and rounds the best iterate.
///
/// Deterministic oracles cost `T(d+1) + (d+1) + 1` calls: one to read
/// `H(∅)`, which is subtracted from all values if non-zero.
pub fn minimize<O: ValueOracle + ?Sized>(oracle: &O, config: &PgmConfig) -> Result<PgmResult> {
    let d = oracle.dim();
    config.validate(d)?;
    let start_calls = oracle.call_count();

    let offset = if oracle.is_deterministic() {
        let h0 = oracle.evaluate(Subset::empty(d))?;
        if h0.abs() > NORMALIZATION_TOL {
            warn!("objective is not normalized (H(empty) = {h0}); subtracting it");
            h0
        } else {
            0.0
        }
    } else {
        0.0
    };
    let chain = |perm: &[usize]| -> Result<Vec<f64>> {
        let mut v = oracle.evaluate_chain(perm)?;
        if offset != 0.0 {
            v.iter_mut().for_each(|x| *x -= offset);
        }
        Ok(v)
    };

    let t_total = config.iterations;
    let radius = config.radius_for(d);
    let sqrt_t = (t_total as f64).sqrt();
    let mut s = match &config.start {
        Some(v) => FractionalPoint::new(v.clone())?,
        None => FractionalPoint::constant(d, 0.5)?,
    };
    let (mut lipschitz, estimated) = match config.lipschitz {
        Lipschitz::Given(l) => (l, false),
        Lipschitz::Estimate => (0.0, true),
    };

    let mut trajectory = Vec::with_capacity(t_total);
    let mut orderings = Vec::with_capacity(t_total);
    let mut best: Option<(FractionalPoint, f64, usize)> = None;
    let mut gamma0 = 0.0;

    for t in 1..=t_total {
        let ordering = order_coordinates(&s);
        let values = chain(ordering.perm())?;
        let mut kappa = vec![0.0; d];
        for (k, &j) in ordering.perm().iter().enumerate() {
            kappa[j] = values[k + 1] - values[k];
        }
        let h: f64 = kappa.iter().zip(s.coords()).map(|(k, x)| k * x).sum();
        let norm2: f64 = kappa.iter().map(|k| k * k).sum();
        let norm = norm2.sqrt();
        trajectory.push(TrajectoryPoint {
            lovasz: h,
            kappa_norm: norm,
        });
        orderings.push(ordering);
        if best.as_ref().is_none_or(|b| h < b.1) {
            best = Some((s.clone(), h, t));
        }
        if t == 1 {
            gamma0 = 0.1 * h.abs() + 1e-3;
        }
        if estimated {
            lipschitz = lipschitz.max(norm);
        }

        let eta = match config.step_rule {
            StepRule::FixedTheorem => {
                if lipschitz > 0.0 {
                    radius / (lipschitz * sqrt_t)
                } else {
                    0.0
                }
            }
            StepRule::FixedSqrt { c } => c / (t as f64).sqrt(),
            StepRule::Polyak => {
                if norm2 > 0.0 {
                    let h_best = best.as_ref().map_or(h, |b| b.1);
                    (h - h_best + gamma0 / (t as f64).sqrt()) / norm2
                } else {
                    0.0
                }
            }
        };
        if t < t_total && eta > 0.0 && norm2 > 0.0 {
            let next: Vec<f64> = s
                .coords()
                .iter()
                .zip(&kappa)
                .map(|(x, k)| x - eta * k)
                .collect();
            s = project_box(&next);
        }
    }

    let (best_point, best_lovasz, best_iteration) = best.expect("at least one iteration");
    let ordering = order_coordinates(&best_point);
    let values = chain(ordering.perm())?;
    let (k, rounded_value) = argmin_first(&values);
    let rounded_set = ordering.prefix(k);

    Ok(PgmResult {
        best_point,
        best_lovasz,
        best_iteration,
        rounded_set,
        rounded_value,
        trajectory,
        orderings,
        oracle_calls: oracle.call_count() - start_calls,
        offset,
        lipschitz,
        estimated_lipschitz: estimated,
        alpha_t: None,
        beta_t: None,
    })
}

/// Minimizes a non-increasing objective by running [`minimize`] on
/// `S ↦ H(V ∖ S)` and complementing the answer.
///
/// `rounded_set` and `best_point` are mapped back (`V ∖ S̃` and `1 − s`);
/// `rounded_value` is `H(rounded_set)` minus the offset `H(V)`. The
/// trajectory and orderings stay in the complemented coordinates.
pub fn minimize_nonincreasing<O: ValueOracle + ?Sized>(
    oracle: &O,
    config: &PgmConfig,
) -> Result<PgmResult> {
    let wrapped = Complement::new(oracle);
    let mut r = minimize(&wrapped, config)?;
    r.rounded_set = r.rounded_set.complement();
    r.best_point = project_box(&r.best_point.coords().iter().map(|x| 1.0 - x).collect::<Vec<_>>());
    Ok(r)
}

/// `F(S*)/α − β G(S*) + RL/√T`.
pub fn certificate_bound(
    f_opt: f64,
    g_opt: f64,
    alpha: f64,
    beta: f64,
    lipschitz: f64,
    radius: f64,
    iterations: usize,
) -> Result<f64> {
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::Domain(format!(
            "alpha and beta must be positive, got ({alpha}, {beta})"
        )));
    }
    if iterations == 0 {
        return Err(Error::Domain("iterations must be >= 1".into()));
    }
    Ok(f_opt / alpha - beta * g_opt + radius * lipschitz / (iterations as f64).sqrt())
}

/// Trajectory averages of the weak-DR ratios at a reference set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRatios {
    /// Mean of `F(S*)/κ_F^t(S*)` over terms with `κ_F^t(S*) ≠ 0`.
    pub alpha_t: Option<f64>,
    /// Mean of `κ_G^t(S*)/G(S*)`; absent when `G(S*) = 0`.
    pub beta_t: Option<f64>,
    pub alpha_terms: usize,
    pub skipped_alpha_terms: usize,
    pub beta_terms: usize,
    pub skipped_beta_terms: usize,
}

/// `α_T = mean_t F(S*)/κ_F^t(S*)` and `β_T = mean_t κ_G^t(S*)/G(S*)`, where
/// `κ_F^t`, `κ_G^t` are the greedy vectors of `F` and `G` along the `t`-th
/// ordering. Costs `T(d+1) + 1` calls on each oracle.
pub fn empirical_alpha_beta<F, G>(
    f: &F,
    g: &G,
    orderings: &[Ordering],
    s_star: Subset,
) -> Result<EmpiricalRatios>
where
    F: ValueOracle + ?Sized,
    G: ValueOracle + ?Sized,
{
    if f.dim() != g.dim() || s_star.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: if g.dim() != f.dim() { g.dim() } else { s_star.dim() },
        });
    }
    let f_star = f.evaluate(s_star)?;
    let g_star = g.evaluate(s_star)?;
    let mut out = EmpiricalRatios {
        alpha_t: None,
        beta_t: None,
        alpha_terms: 0,
        skipped_alpha_terms: 0,
        beta_terms: 0,
        skipped_beta_terms: 0,
    };
    let (mut sum_a, mut sum_b) = (0.0, 0.0);
    for o in orderings {
        let kf = greedy_along(f, o.clone())?.set_sum(s_star);
        let kg = greedy_along(g, o.clone())?.set_sum(s_star);
        if kf != 0.0 {
            sum_a += f_star / kf;
            out.alpha_terms += 1;
        } else {
            out.skipped_alpha_terms += 1;
        }
        if g_star != 0.0 {
            sum_b += kg / g_star;
            out.beta_terms += 1;
        } else {
            out.skipped_beta_terms += 1;
        }
    }
    if out.alpha_terms == 0 && out.beta_terms == 0 {
        return Err(Error::AllTermsDegenerate);
    }
    if out.alpha_terms > 0 {
        out.alpha_t = Some(sum_a / out.alpha_terms as f64);
    }
    if out.beta_terms > 0 {
        out.beta_t = Some(sum_b / out.beta_terms as f64);
    }
    Ok(out)
}
