//! Set functions and counted value oracles.
//!
//! A [`SetFunction`] is the pure mathematical object. A [`ValueOracle`] is
//! what solvers talk to: every query is counted, and an oracle may be
//! stochastic. [`Counted`] turns any set function into a deterministic
//! oracle.
//!
//! Both traits expose chain evaluation: the values on `∅ ⊂ {j_1} ⊂ .. ⊂ V`
//! for a permutation `j`. Greedy subgradients and superlevel rounding only
//! ever ask for chains, so functions with incremental structure (least
//! squares, GP variance) override it to share work between prefixes. A
//! chain over `d` elements always counts as `d + 1` oracle calls.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::set::Subset;

pub trait SetFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, s: Subset) -> Result<f64>;

    /// Values on the chain `S_0 = ∅, S_k = {perm[0], .., perm[k-1]}`.
    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        default_chain(self.dim(), perm, |s| self.value(s))
    }
}

pub trait ValueOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn evaluate(&self, s: Subset) -> Result<f64>;

    /// Chain values, counted as `perm.len() + 1` calls.
    fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        default_chain(self.dim(), perm, |s| self.evaluate(s))
    }

    fn call_count(&self) -> u64;

    fn is_deterministic(&self) -> bool {
        true
    }

    /// Seed of the noise stream, for stochastic oracles.
    fn seed(&self) -> Option<u64> {
        None
    }
}

pub(crate) fn default_chain(
    d: usize,
    perm: &[usize],
    mut eval: impl FnMut(Subset) -> Result<f64>,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(perm.len() + 1);
    let mut s = Subset::empty(d);
    out.push(eval(s)?);
    for &j in perm {
        s.insert(j);
        out.push(eval(s)?);
    }
    Ok(out)
}

macro_rules! forward_set_function {
    ($($ty:ty),*) => {$(
        impl<F: SetFunction + ?Sized> SetFunction for $ty {
            fn dim(&self) -> usize {
                (**self).dim()
            }
            fn value(&self, s: Subset) -> Result<f64> {
                (**self).value(s)
            }
            fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
                (**self).chain_values(perm)
            }
        }
    )*};
}

forward_set_function!(&F, Box<F>, Arc<F>);

macro_rules! forward_oracle {
    ($($ty:ty),*) => {$(
        impl<O: ValueOracle + ?Sized> ValueOracle for $ty {
            fn dim(&self) -> usize {
                (**self).dim()
            }
            fn evaluate(&self, s: Subset) -> Result<f64> {
                (**self).evaluate(s)
            }
            fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
                (**self).evaluate_chain(perm)
            }
            fn call_count(&self) -> u64 {
                (**self).call_count()
            }
            fn is_deterministic(&self) -> bool {
                (**self).is_deterministic()
            }
            fn seed(&self) -> Option<u64> {
                (**self).seed()
            }
        }
    )*};
}

forward_oracle!(&O, Box<O>, Arc<O>);

/// Deterministic oracle over a set function, with a per-instance call counter.
#[derive(Debug)]
pub struct Counted<F> {
    function: F,
    calls: AtomicU64,
}

impl<F: SetFunction> Counted<F> {
    pub fn new(function: F) -> Self {
        Counted {
            function,
            calls: AtomicU64::new(0),
        }
    }

    pub fn function(&self) -> &F {
        &self.function
    }

    pub fn into_inner(self) -> F {
        self.function
    }

    pub fn reset_count(&self) {
        self.calls.store(0, AtomicOrdering::Relaxed);
    }
}

impl<F: SetFunction> ValueOracle for Counted<F> {
    fn dim(&self) -> usize {
        self.function.dim()
    }

    fn evaluate(&self, s: Subset) -> Result<f64> {
        check_dim(self.dim(), s)?;
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        self.function.value(s)
    }

    fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        check_perm(self.dim(), perm)?;
        self.calls
            .fetch_add(perm.len() as u64 + 1, AtomicOrdering::Relaxed);
        self.function.chain_values(perm)
    }

    fn call_count(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }
}

pub(crate) fn check_dim(d: usize, s: Subset) -> Result<()> {
    if s.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: s.dim(),
        });
    }
    Ok(())
}

fn check_perm(d: usize, perm: &[usize]) -> Result<()> {
    let mut seen = 0u64;
    for &j in perm {
        if j >= d {
            return Err(Error::ElementOutOfRange { element: j, dim: d });
        }
        if seen & (1 << j) != 0 {
            return Err(Error::Domain(format!("element {j} repeated in chain order")));
        }
        seen |= 1 << j;
    }
    Ok(())
}

/// `H(A ∪ {i}) - H(A)`, two oracle calls.
pub fn marginal_gain<O: ValueOracle + ?Sized>(oracle: &O, i: usize, a: Subset) -> Result<f64> {
    if i >= oracle.dim() {
        return Err(Error::ElementOutOfRange {
            element: i,
            dim: oracle.dim(),
        });
    }
    if a.contains(i) {
        return Err(Error::ElementPresent { element: i, set: a });
    }
    let with = oracle.evaluate(a.with(i))?;
    let without = oracle.evaluate(a)?;
    Ok(with - without)
}

/// A set function given by a closure.
pub struct FnSetFunction<C> {
    d: usize,
    f: C,
}

impl<C> FnSetFunction<C>
where
    C: Fn(Subset) -> f64 + Send + Sync,
{
    pub fn new(d: usize, f: C) -> Self {
        FnSetFunction { d, f }
    }
}

impl<C> SetFunction for FnSetFunction<C>
where
    C: Fn(Subset) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok((self.f)(s))
    }
}

/// `F - G` for two set functions on the same ground set.
#[derive(Debug, Clone)]
pub struct Difference<F, G> {
    pub f: F,
    pub g: G,
}

impl<F: SetFunction, G: SetFunction> Difference<F, G> {
    pub fn new(f: F, g: G) -> Result<Self> {
        if f.dim() != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: f.dim(),
                got: g.dim(),
            });
        }
        Ok(Difference { f, g })
    }
}

impl<F: SetFunction, G: SetFunction> SetFunction for Difference<F, G> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.f.value(s)? - self.g.value(s)?)
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        let f = self.f.chain_values(perm)?;
        let g = self.g.chain_values(perm)?;
        Ok(f.iter().zip(&g).map(|(a, b)| a - b).collect())
    }
}

/// `c * F`.
#[derive(Debug, Clone)]
pub struct Scaled<F> {
    pub scale: f64,
    pub inner: F,
}

impl<F: SetFunction> SetFunction for Scaled<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.scale * self.inner.value(s)?)
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        Ok(self
            .inner
            .chain_values(perm)?
            .into_iter()
            .map(|v| self.scale * v)
            .collect())
    }
}

/// The oracle `S ↦ H(V ∖ S)`.
pub struct Complement<O> {
    inner: O,
    calls: AtomicU64,
}

impl<O: ValueOracle> Complement<O> {
    pub fn new(inner: O) -> Self {
        Complement {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: ValueOracle> ValueOracle for Complement<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, s: Subset) -> Result<f64> {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        self.inner.evaluate(s.complement())
    }

    fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        if perm.len() != self.dim() {
            return default_chain(self.dim(), perm, |s| self.evaluate(s));
        }
        // V ∖ {j_1..j_k} is the prefix of length d - k of the reversed order.
        self.calls
            .fetch_add(perm.len() as u64 + 1, AtomicOrdering::Relaxed);
        let reversed: Vec<usize> = perm.iter().rev().copied().collect();
        let mut values = self.inner.evaluate_chain(&reversed)?;
        values.reverse();
        Ok(values)
    }

    fn call_count(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }

    fn is_deterministic(&self) -> bool {
        self.inner.is_deterministic()
    }

    fn seed(&self) -> Option<u64> {
        self.inner.seed()
    }
}

/// Subtracts a cached `H(∅)` from every query.
pub struct Normalized<O> {
    inner: O,
    offset: f64,
    calls: AtomicU64,
}

/// Absolute tolerance on `|H(∅)|` below which a function counts as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-9;

impl<O: ValueOracle> Normalized<O> {
    /// Evaluates `H(∅)` once (one call on the inner oracle).
    pub fn new(inner: O) -> Result<Self> {
        let offset = inner.evaluate(Subset::empty(inner.dim()))?;
        if offset.abs() > NORMALIZATION_TOL {
            warn!("objective is not normalized (H(empty) = {offset}); subtracting it");
        }
        Ok(Normalized {
            inner,
            offset,
            calls: AtomicU64::new(0),
        })
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: ValueOracle> ValueOracle for Normalized<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, s: Subset) -> Result<f64> {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        Ok(self.inner.evaluate(s)? - self.offset)
    }

    fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        self.calls
            .fetch_add(perm.len() as u64 + 1, AtomicOrdering::Relaxed);
        let mut v = self.inner.evaluate_chain(perm)?;
        if self.offset != 0.0 {
            v.iter_mut().for_each(|x| *x -= self.offset);
        }
        Ok(v)
    }

    fn call_count(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }

    fn is_deterministic(&self) -> bool {
        self.inner.is_deterministic()
    }

    fn seed(&self) -> Option<u64> {
        self.inner.seed()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::cut::CutInstance;
    use crate::zoo::modular::Modular;

    #[test]
    fn marginal_of_modular_is_weight() {
        let o = Counted::new(Modular::new(vec![1.0, 2.0, 3.0]));
        let a = Subset::singleton(3, 0);
        assert_eq!(marginal_gain(&o, 2, a).unwrap(), 3.0);
        assert_eq!(o.call_count(), 2);
    }

    #[test]
    fn marginal_on_two_node_cut() {
        let o = Counted::new(CutInstance::undirected(2, &[(0, 1, 1.0)]).unwrap());
        // F({0}) = 1, F({0,1}) = 0
        assert_eq!(
            marginal_gain(&o, 1, Subset::singleton(2, 0)).unwrap(),
            -1.0
        );
    }

    #[test]
    fn marginal_rejects_present_element() {
        let o = Counted::new(Modular::new(vec![1.0, 2.0]));
        let err = marginal_gain(&o, 0, Subset::singleton(2, 0)).unwrap_err();
        assert!(matches!(err, Error::ElementPresent { element: 0, .. }));
        assert_eq!(o.call_count(), 0);
    }

    #[test]
    fn counted_chain_counts_d_plus_one() {
        let o = Counted::new(Modular::new(vec![1.0, -2.0, 0.5]));
        let v = o.evaluate_chain(&[2, 0, 1]).unwrap();
        assert_eq!(v, vec![0.0, 0.5, 1.5, -0.5]);
        assert_eq!(o.call_count(), 4);
        assert!(o.evaluate_chain(&[0, 0, 1]).is_err());
    }

    #[test]
    fn deterministic_oracle_is_bitwise_repeatable() {
        let o = Counted::new(CutInstance::undirected(3, &[(0, 1, 0.3), (1, 2, 0.7)]).unwrap());
        let s = Subset::singleton(3, 1);
        assert_eq!(
            o.evaluate(s).unwrap().to_bits(),
            o.evaluate(s).unwrap().to_bits()
        );
    }

    #[test]
    fn complement_chain_matches_pointwise() {
        let base = Counted::new(
            CutInstance::undirected(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)]).unwrap(),
        );
        let c = Complement::new(&base);
        let perm = [3, 1, 0, 2];
        let chain = c.evaluate_chain(&perm).unwrap();
        let pointwise = default_chain(4, &perm, |s| base.evaluate(s.complement())).unwrap();
        assert_eq!(chain, pointwise);
        assert_eq!(c.evaluate(Subset::empty(4)).unwrap(), base.evaluate(Subset::full(4)).unwrap());
    }

    #[test]
    fn normalized_subtracts_offset() {
        let f = FnSetFunction::new(2, |s: Subset| 5.0 + s.len() as f64);
        let n = Normalized::new(Counted::new(f)).unwrap();
        assert_eq!(n.offset(), 5.0);
        assert_eq!(n.evaluate(Subset::empty(2)).unwrap(), 0.0);
        assert_eq!(n.evaluate_chain(&[1, 0]).unwrap(), vec![0.0, 1.0, 2.0]);
    }
}
