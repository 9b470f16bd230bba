//! Lovász extension, greedy subgradients and superlevel-set rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{ValueOracle, NORMALIZATION_TOL};
use crate::set::Subset;

/// Coordinates may sit this far outside `[0,1]` before being clamped.
const BOX_TOL: f64 = 1e-12;

/// A point of the unit cube `[0,1]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalPoint(Vec<f64>);

impl FractionalPoint {
    /// Clamps every coordinate into `[0,1]`. Coordinates more than `1e-12`
    /// outside the box, or NaN, are rejected; use
    /// [`crate::pgm::project_box`] to project arbitrary vectors.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Domain("point must have at least one coordinate".into()));
        }
        let mut coords = coords;
        for (i, c) in coords.iter_mut().enumerate() {
            if c.is_nan() || *c < -BOX_TOL || *c > 1.0 + BOX_TOL {
                return Err(Error::Domain(format!(
                    "coordinate {i} = {c} is outside [0,1]"
                )));
            }
            *c = c.clamp(0.0, 1.0);
        }
        Ok(FractionalPoint(coords))
    }

    pub(crate) fn from_clamped(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| (0.0..=1.0).contains(c)));
        FractionalPoint(coords)
    }

    pub fn constant(d: usize, value: f64) -> Result<Self> {
        FractionalPoint::new(vec![value; d])
    }

    pub fn indicator(s: Subset) -> Self {
        FractionalPoint(s.indicator())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

/// Decreasing order of the coordinates of a point and its prefix chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ordering {
    perm: Vec<usize>,
}

impl Ordering {
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `S_k = {j_1, .., j_k}` for `k = 0..=d`.
    pub fn prefix_sets(&self) -> Vec<Subset> {
        let d = self.perm.len();
        let mut s = Subset::empty(d);
        let mut out = Vec::with_capacity(d + 1);
        out.push(s);
        for &j in &self.perm {
            s.insert(j);
            out.push(s);
        }
        out
    }

    pub fn prefix(&self, k: usize) -> Subset {
        Subset::from_indices(self.perm.len(), self.perm[..k].iter().copied())
            .expect("permutation entries are in range")
    }
}

/// Sorts coordinates in decreasing order; ties go to the smaller index.
pub fn order_coordinates(s: &FractionalPoint) -> Ordering {
    let mut perm: Vec<usize> = (0..s.dim()).collect();
    let c = s.coords();
    // stable sort keeps ascending index among equal coordinates
    perm.sort_by(|&a, &b| c[b].total_cmp(&c[a]));
    Ordering { perm }
}

/// Chained marginal gains `kappa[j_k] = H(S_k) - H(S_{k-1})`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GreedyVector {
    pub kappa: Vec<f64>,
    pub ordering: Ordering,
    /// `H(S_0), .., H(S_d)`.
    pub chain_values: Vec<f64>,
}

impl GreedyVector {
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.kappa.iter().zip(x).map(|(k, v)| k * v).sum()
    }

    /// `kappa(A) = sum_{i in A} kappa_i`.
    pub fn set_sum(&self, a: Subset) -> f64 {
        a.iter().map(|i| self.kappa[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.kappa.iter().map(|k| k * k).sum::<f64>().sqrt()
    }
}

/// Greedy subgradient at `s`: `d + 1` oracle calls along the chain.
pub fn greedy_subgradient<O: ValueOracle + ?Sized>(
    oracle: &O,
    s: &FractionalPoint,
) -> Result<GreedyVector> {
    check_point(oracle, s)?;
    let ordering = order_coordinates(s);
    greedy_along(oracle, ordering)
}

pub(crate) fn greedy_along<O: ValueOracle + ?Sized>(
    oracle: &O,
    ordering: Ordering,
) -> Result<GreedyVector> {
    let chain_values = oracle.evaluate_chain(ordering.perm())?;
    let mut kappa = vec![0.0; ordering.perm.len()];
    for (k, &j) in ordering.perm.iter().enumerate() {
        kappa[j] = chain_values[k + 1] - chain_values[k];
    }
    Ok(GreedyVector {
        kappa,
        ordering,
        chain_values,
    })
}

fn check_point<O: ValueOracle + ?Sized>(oracle: &O, s: &FractionalPoint) -> Result<()> {
    if s.dim() != oracle.dim() {
        return Err(Error::DimensionMismatch {
            expected: oracle.dim(),
            got: s.dim(),
        });
    }
    Ok(())
}

/// Lovász extension `h_L(s) = kappa · s` of a normalized oracle.
pub fn lovasz_value<O: ValueOracle + ?Sized>(oracle: &O, s: &FractionalPoint) -> Result<f64> {
    let g = greedy_subgradient(oracle, s)?;
    if g.chain_values[0].abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(g.chain_values[0]));
    }
    Ok(g.dot(s.coords()))
}

/// Best superlevel set of `s`: evaluates the `d + 1` chain sets and returns
/// the minimizer, ties to the smallest prefix length.
pub fn round_by_superlevel<O: ValueOracle + ?Sized>(
    oracle: &O,
    s: &FractionalPoint,
) -> Result<(Subset, f64)> {
    check_point(oracle, s)?;
    let ordering = order_coordinates(s);
    let values = oracle.evaluate_chain(ordering.perm())?;
    let (k, v) = argmin_first(&values);
    Ok((ordering.prefix(k), v))
}

pub(crate) fn argmin_first(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v < best.1 {
            best = (k, v);
        }
    }
    best
}
