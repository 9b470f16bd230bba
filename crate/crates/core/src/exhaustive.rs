//! Exhaustive computations for small ground sets: brute-force minimization,
//! weak-DR parameter estimation and the pair scans they rely on.
//!
//! Pair scans over all `(i, A ⊆ B ⊆ V∖i)` are done with subset-minimum
//! dynamic programs over a table of all `2^d` values, so the cost is
//! `O(d² 2^d)` arithmetic after `2^d` oracle calls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::ValueOracle;
use crate::set::Subset;

/// Default ground-set limit for [`brute_force_min`].
pub const BRUTE_FORCE_LIMIT: usize = 20;
/// Limit when the caller explicitly opts into larger enumerations.
pub const BRUTE_FORCE_HARD_LIMIT: usize = 25;
/// Ground-set limit for [`estimate_dr_parameters`].
pub const DR_SCAN_LIMIT: usize = 16;

/// Global minimizer by enumeration of all `2^d` subsets (`d <= 20`).
///
/// Ties go to the smallest cardinality, then the smallest mask.
pub fn brute_force_min<O: ValueOracle + ?Sized>(oracle: &O) -> Result<(Subset, f64)> {
    brute_force_min_with(oracle, false)
}

/// As [`brute_force_min`]; `allow_large` raises the limit to `d <= 25`.
pub fn brute_force_min_with<O: ValueOracle + ?Sized>(
    oracle: &O,
    allow_large: bool,
) -> Result<(Subset, f64)> {
    let d = oracle.dim();
    let limit = if allow_large {
        BRUTE_FORCE_HARD_LIMIT
    } else {
        BRUTE_FORCE_LIMIT
    };
    if d > limit {
        return Err(Error::DimensionTooLarge { dim: d, limit });
    }
    if !oracle.is_deterministic() {
        return Err(Error::StochasticOracle);
    }
    let mut best = (Subset::empty(d), f64::INFINITY);
    for mask in 0..(1u64 << d) {
        let s = Subset::from_mask(d, mask)?;
        let v = oracle.evaluate(s)?;
        if v < best.1 || (v == best.1 && s.tie_key() < best.0.tie_key()) {
            best = (s, v);
        }
    }
    Ok(best)
}

/// All `2^d` values of a deterministic oracle, indexed by mask.
#[derive(Debug, Clone)]
pub struct ValueTable {
    d: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn from_oracle<O: ValueOracle + ?Sized>(oracle: &O, limit: usize) -> Result<Self> {
        let d = oracle.dim();
        if d > limit {
            return Err(Error::DimensionTooLarge { dim: d, limit });
        }
        if !oracle.is_deterministic() {
            return Err(Error::StochasticOracle);
        }
        let values = (0..(1u64 << d))
            .map(|mask| oracle.evaluate(Subset::from_mask(d, mask)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ValueTable { d, values })
    }

    pub fn from_values(d: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 1usize << d {
            return Err(Error::Domain(format!(
                "expected {} values, got {}",
                1usize << d,
                values.len()
            )));
        }
        Ok(ValueTable { d, values })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, s: Subset) -> f64 {
        self.values[s.mask() as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `H(i | A)` for every `A` not containing `i`, indexed by mask
    /// (entries for masks containing `i` are unused and set to zero).
    pub fn marginals(&self, i: usize) -> Vec<f64> {
        let bit = 1usize << i;
        let mut m = vec![0.0; self.values.len()];
        for (mask, slot) in m.iter_mut().enumerate() {
            if mask & bit == 0 {
                *slot = self.values[mask | bit] - self.values[mask];
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }
}

/// `out[B] = (min_{A ⊆ B, i ∉ A} m[A], argmin)` for masks `B` without bit `skip`.
/// Ties go to the smallest `(|A|, mask)`.
pub(crate) fn subset_min(d: usize, skip: usize, m: &[f64]) -> Vec<(f64, u64)> {
    let mut out: Vec<(f64, u64)> = m
        .iter()
        .enumerate()
        .map(|(mask, &v)| (v, mask as u64))
        .collect();
    for j in (0..d).filter(|&j| j != skip) {
        let bit = 1usize << j;
        for mask in 0..out.len() {
            if mask & bit != 0 && mask & (1 << skip) == 0 {
                let cand = out[mask ^ bit];
                if better(cand, out[mask]) {
                    out[mask] = cand;
                }
            }
        }
    }
    out
}

/// `out[A] = (min_{B ⊇ A, i ∉ B} m[B], argmin)` for masks `A` without bit `skip`.
pub(crate) fn superset_min(d: usize, skip: usize, m: &[f64]) -> Vec<(f64, u64)> {
    let mut out: Vec<(f64, u64)> = m
        .iter()
        .enumerate()
        .map(|(mask, &v)| (v, mask as u64))
        .collect();
    for j in (0..d).filter(|&j| j != skip) {
        let bit = 1usize << j;
        for mask in (0..out.len()).rev() {
            if mask & bit == 0 && mask & (1 << skip) == 0 {
                let cand = out[mask | bit];
                if better(cand, out[mask]) {
                    out[mask] = cand;
                }
            }
        }
    }
    out
}

#[inline]
fn better(a: (f64, u64), b: (f64, u64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && (a.1.count_ones(), a.1) < (b.1.count_ones(), b.1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
}

impl Monotonicity {
    fn label(self) -> &'static str {
        match self {
            Monotonicity::NonDecreasing => "non-decreasing",
            Monotonicity::NonIncreasing => "non-increasing",
        }
    }
}

/// A pair `(i, A ⊆ B ⊆ V∖i)` attaining an extremal marginal ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DrWitness {
    pub element: usize,
    pub a: Subset,
    pub b: Subset,
    pub ratio: f64,
}

/// Tightest weak-DR parameters of a monotone set function.
///
/// For non-decreasing functions `alpha = min F(i|A)/F(i|B)` and
/// `beta = min F(i|B)/F(i|A)`; for non-increasing functions the inequalities
/// flip sign when dividing, so the tightest parameters are the maxima of the
/// same ratios (and are `>= 1`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrParameters {
    pub alpha: f64,
    pub beta: f64,
    pub witness_alpha: DrWitness,
    pub witness_beta: DrWitness,
    pub direction: Monotonicity,
    /// Pairs skipped because the α-ratio denominator `F(i|B)` is zero.
    pub skipped_alpha_pairs: u64,
    /// Pairs skipped because the β-ratio denominator `F(i|A)` is zero.
    pub skipped_beta_pairs: u64,
}

/// Marginals with magnitude at most `ZERO_TOL * max(1, max|H|)` count as zero.
pub const ZERO_TOL: f64 = 1e-10;

/// Exhaustive weak-DR parameters (`d <= 16`, deterministic oracle).
pub fn estimate_dr_parameters<O: ValueOracle + ?Sized>(
    oracle: &O,
    direction: Monotonicity,
) -> Result<DrParameters> {
    let table = ValueTable::from_oracle(oracle, DR_SCAN_LIMIT)?;
    dr_parameters_from_table(&table, direction)
}

pub fn dr_parameters_from_table(table: &ValueTable, direction: Monotonicity) -> Result<DrParameters> {
    let d = table.dim();
    let tol = ZERO_TOL * table.max_abs().max(1.0);
    let sign = match direction {
        Monotonicity::NonDecreasing => 1.0,
        Monotonicity::NonIncreasing => -1.0,
    };

    let mut marginals = Vec::with_capacity(d);
    let mut any_nonzero = false;
    for i in 0..d {
        let mut m = table.marginals(i);
        for (mask, v) in m.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                continue;
            }
            if sign * *v < -tol {
                return Err(Error::NotMonotone {
                    direction: direction.label(),
                    element: i,
                    set: Subset::from_mask(d, mask as u64)?,
                    marginal: *v,
                });
            }
            if v.abs() <= tol {
                *v = 0.0;
            } else {
                any_nonzero = true;
            }
        }
        marginals.push(m);
    }
    if !any_nonzero {
        return Err(Error::Degenerate);
    }

    // Best (tightest) ratio found so far: min for non-decreasing, max otherwise.
    let improves = |cand: f64, cur: f64| match direction {
        Monotonicity::NonDecreasing => cand < cur,
        Monotonicity::NonIncreasing => cand > cur,
    };
    let mut alpha: Option<DrWitness> = None;
    let mut beta: Option<DrWitness> = None;
    let mut skipped_alpha = 0u64;
    let mut skipped_beta = 0u64;

    for (i, m) in marginals.iter().enumerate() {
        let sub = subset_min(d, i, m);
        let sup = superset_min(d, i, m);
        for mask in 0..m.len() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let here = Subset::from_mask(d, mask as u64)?;
            let free = d - 1 - here.len();
            // α: B = here, A ranges over subsets of B.
            if m[mask] == 0.0 {
                skipped_alpha += 1u64 << here.len();
                skipped_beta += 1u64 << free;
                continue;
            }
            let (num, a_mask) = sub[mask];
            let ratio = num / m[mask];
            if alpha.is_none_or(|w| improves(ratio, w.ratio)) {
                alpha = Some(DrWitness {
                    element: i,
                    a: Subset::from_mask(d, a_mask)?,
                    b: here,
                    ratio,
                });
            }
            // β: A = here, B ranges over supersets of A.
            let (num, b_mask) = sup[mask];
            let ratio = num / m[mask];
            if beta.is_none_or(|w| improves(ratio, w.ratio)) {
                beta = Some(DrWitness {
                    element: i,
                    a: here,
                    b: Subset::from_mask(d, b_mask)?,
                    ratio,
                });
            }
        }
    }

    let (wa, wb) = (alpha.ok_or(Error::Degenerate)?, beta.ok_or(Error::Degenerate)?);
    Ok(DrParameters {
        alpha: wa.ratio,
        beta: wb.ratio,
        witness_alpha: wa,
        witness_beta: wb,
        direction,
        skipped_alpha_pairs: skipped_alpha,
        skipped_beta_pairs: skipped_beta,
    })
}

/// `min_{i, A ⊆ B ⊆ V∖i} H(i|A) - alpha * H(i|B)` together with its witness.
pub fn violation_from_table(table: &ValueTable, alpha: f64) -> (f64, DrWitness) {
    let d = table.dim();
    let mut best: Option<(f64, DrWitness)> = None;
    for i in 0..d {
        let m = table.marginals(i);
        let sub = subset_min(d, i, &m);
        for mask in 0..m.len() {
            if mask & (1 << i) != 0 {
                continue;
            }
            let (ma, a_mask) = sub[mask];
            let v = ma - alpha * m[mask];
            if best.as_ref().is_none_or(|(cur, _)| v < *cur) {
                let w = DrWitness {
                    element: i,
                    a: Subset::from_mask(d, a_mask).expect("mask within d"),
                    b: Subset::from_mask(d, mask as u64).expect("mask within d"),
                    ratio: v,
                };
                best = Some((v, w));
            }
        }
    }
    best.expect("d >= 1")
}
