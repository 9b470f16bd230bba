//! Noisy value oracles, mean-of-`m` estimators and budget planning.
//!
//! Noise draws are counter-based: draw `n` of a stream comes from a ChaCha8
//! generator keyed by `(seed, n)`, so a stream does not depend on how calls
//! to other oracles are interleaved with it.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::ValueOracle;
use crate::pgm::{minimize, PgmConfig, PgmResult};
use crate::set::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// `ξ · H(S)`.
    Multiplicative,
    /// `H(S) + ξ`.
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NoiseDistribution {
    Gaussian { mu: f64, sigma: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl NoiseDistribution {
    pub fn mean(&self) -> f64 {
        match *self {
            NoiseDistribution::Gaussian { mu, .. } => mu,
            NoiseDistribution::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub distribution: NoiseDistribution,
    /// Truncation bound `ω` on `|ξ|`; `None` means `|μ| + 6σ` for Gaussian
    /// noise and `max(|lo|, |hi|)` for uniform noise. May be infinite.
    #[serde(default)]
    pub bound: Option<f64>,
    pub seed: u64,
    /// Memoize one draw per set instead of drawing afresh on every query.
    #[serde(default)]
    pub consistent: bool,
}

/// Draws rejected in a row before sampling gives up.
const MAX_REJECTIONS: usize = 10_000;

impl NoiseSpec {
    pub fn multiplicative_gaussian(mu: f64, sigma: f64, seed: u64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Multiplicative,
            distribution: NoiseDistribution::Gaussian { mu, sigma },
            bound: None,
            seed,
            consistent: false,
        }
    }

    pub fn additive_gaussian(mu: f64, sigma: f64, seed: u64) -> Self {
        NoiseSpec {
            kind: NoiseKind::Additive,
            ..Self::multiplicative_gaussian(mu, sigma, seed)
        }
    }

    pub fn with_bound(mut self, omega: f64) -> Self {
        self.bound = Some(omega);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn consistent(mut self) -> Self {
        self.consistent = true;
        self
    }

    /// `ω`.
    pub fn omega(&self) -> f64 {
        self.bound.unwrap_or(match self.distribution {
            NoiseDistribution::Gaussian { mu, sigma } => mu.abs() + 6.0 * sigma,
            NoiseDistribution::Uniform { lo, hi } => lo.abs().max(hi.abs()),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let omega = self.omega();
        if omega.is_nan() || omega < 0.0 {
            return Err(Error::InvalidConfig(format!("noise bound must be >= 0, got {omega}")));
        }
        match self.distribution {
            NoiseDistribution::Gaussian { mu, sigma } => {
                if !(sigma >= 0.0) || !mu.is_finite() || !sigma.is_finite() {
                    return Err(Error::InvalidConfig("gaussian noise needs finite mu and sigma >= 0".into()));
                }
                if self.kind == NoiseKind::Multiplicative && !(mu > 0.0) {
                    return Err(Error::InvalidConfig("multiplicative gaussian noise needs mu > 0".into()));
                }
                if omega < mu.abs() {
                    return Err(Error::InvalidConfig(format!(
                        "noise bound {omega} is below |mu| = {}",
                        mu.abs()
                    )));
                }
            }
            NoiseDistribution::Uniform { lo, hi } => {
                if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                    return Err(Error::InvalidConfig("uniform noise needs finite lo <= hi".into()));
                }
                if omega < lo.abs().max(hi.abs()) {
                    return Err(Error::InvalidConfig(
                        "uniform noise bound must cover the whole interval".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// The `n`-th draw of the stream.
    pub fn draw(&self, n: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(n);
        let omega = self.omega();
        for _ in 0..MAX_REJECTIONS {
            let xi = match self.distribution {
                NoiseDistribution::Gaussian { mu, sigma } => {
                    if sigma == 0.0 {
                        return Ok(mu);
                    }
                    mu + sigma * rng.sample::<f64, _>(StandardNormal)
                }
                NoiseDistribution::Uniform { lo, hi } => {
                    if lo == hi {
                        return Ok(lo);
                    }
                    rng.random_range(lo..hi)
                }
            };
            if xi.abs() <= omega {
                return Ok(xi);
            }
        }
        Err(Error::Domain(format!(
            "noise draw rejected {MAX_REJECTIONS} times in a row at bound {omega}"
        )))
    }

    fn apply(&self, h: f64, xi: f64) -> f64 {
        match self.kind {
            NoiseKind::Multiplicative => xi * h,
            NoiseKind::Additive => h + xi,
        }
    }

    fn is_trivial(&self) -> bool {
        match self.distribution {
            NoiseDistribution::Gaussian { mu, sigma } => {
                sigma == 0.0
                    && match self.kind {
                        NoiseKind::Multiplicative => mu == 1.0,
                        NoiseKind::Additive => mu == 0.0,
                    }
            }
            NoiseDistribution::Uniform { .. } => false,
        }
    }
}

/// A base oracle observed through noise.
pub struct NoisyOracle<O> {
    inner: O,
    spec: NoiseSpec,
    draws: AtomicU64,
    calls: AtomicU64,
}

impl<O: ValueOracle> NoisyOracle<O> {
    pub fn spec(&self) -> &NoiseSpec {
        &self.spec
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    fn stream_index(&self, s: Subset) -> u64 {
        if self.spec.consistent {
            s.mask()
        } else {
            self.draws.fetch_add(1, AtomicOrdering::Relaxed)
        }
    }
}

/// Wraps a deterministic oracle with the noise described by `spec`.
pub fn wrap_noisy<O: ValueOracle>(oracle: O, spec: NoiseSpec) -> Result<NoisyOracle<O>> {
    if !oracle.is_deterministic() {
        return Err(Error::StochasticOracle);
    }
    spec.validate()?;
    Ok(NoisyOracle {
        inner: oracle,
        spec,
        draws: AtomicU64::new(0),
        calls: AtomicU64::new(0),
    })
}

impl<O: ValueOracle> ValueOracle for NoisyOracle<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, s: Subset) -> Result<f64> {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        let h = self.inner.evaluate(s)?;
        let xi = self.spec.draw(self.stream_index(s))?;
        Ok(self.spec.apply(h, xi))
    }

    fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        self.calls
            .fetch_add(perm.len() as u64 + 1, AtomicOrdering::Relaxed);
        let mut values = self.inner.evaluate_chain(perm)?;
        let mut s = Subset::empty(self.dim());
        for (k, v) in values.iter_mut().enumerate() {
            if k > 0 {
                s.insert(perm[k - 1]);
            }
            let xi = self.spec.draw(self.stream_index(s))?;
            *v = self.spec.apply(*v, xi);
        }
        Ok(values)
    }

    fn call_count(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }

    fn is_deterministic(&self) -> bool {
        self.spec.consistent || self.spec.is_trivial()
    }

    fn seed(&self) -> Option<u64> {
        Some(self.spec.seed)
    }
}

/// Averages `m` queries of a noisy oracle.
pub struct MeanOf<O> {
    inner: O,
    m: usize,
    calls: AtomicU64,
}

impl<O: ValueOracle> MeanOf<O> {
    pub fn samples(&self) -> usize {
        self.m
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

pub fn mean_estimator<O: ValueOracle>(noisy: O, m: usize) -> Result<MeanOf<O>> {
    if m == 0 {
        return Err(Error::InvalidConfig("sample count m must be >= 1".into()));
    }
    Ok(MeanOf {
        inner: noisy,
        m,
        calls: AtomicU64::new(0),
    })
}

impl<O: ValueOracle> ValueOracle for MeanOf<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn evaluate(&self, s: Subset) -> Result<f64> {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        let mut sum = 0.0;
        for _ in 0..self.m {
            sum += self.inner.evaluate(s)?;
        }
        Ok(sum / self.m as f64)
    }

    fn evaluate_chain(&self, perm: &[usize]) -> Result<Vec<f64>> {
        self.calls
            .fetch_add(perm.len() as u64 + 1, AtomicOrdering::Relaxed);
        let mut sum = self.inner.evaluate_chain(perm)?;
        for _ in 1..self.m {
            for (acc, v) in sum.iter_mut().zip(self.inner.evaluate_chain(perm)?) {
                *acc += v;
            }
        }
        sum.iter_mut().for_each(|v| *v /= self.m as f64);
        Ok(sum)
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

/// Iterations and samples needed for an `(ε′, δ′)` guarantee with noisy
/// queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxOracleBudget {
    pub eps_prime: f64,
    pub delta_prime: f64,
    pub d: usize,
    pub lipschitz: f64,
    /// `ε′ / 8d`.
    pub eps: f64,
    /// `δ′ ε′² / 32d²`.
    pub delta: f64,
    /// `⌈(4√d L / ε′)²⌉`.
    pub iterations: u64,
    /// `⌈(ω H_max / ε)² ln(1/δ)⌉`, when a noise model is given.
    pub samples: Option<u64>,
}

/// `⌈x⌉`, ignoring a relative excess of `1e-12` over an integer caused by
/// rounding in the formula.
fn ceil_guarded(x: f64) -> u64 {
    (x * (1.0 - 1e-12)).ceil() as u64
}

/// `⌈(ω H_max / ε)² ln(1/δ)⌉`.
pub fn sample_count(omega: f64, h_max: f64, eps: f64, delta: f64) -> Result<u64> {
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::Domain(format!(
            "sample count needs a finite noise bound, got {omega}; set m explicitly"
        )));
    }
    if !(eps > 0.0) || !(delta > 0.0 && delta < 1.0) || !(h_max >= 0.0) {
        return Err(Error::Domain("need eps > 0, delta in (0,1), H_max >= 0".into()));
    }
    Ok(ceil_guarded((omega * h_max / eps).powi(2) * (1.0 / delta).ln()).max(1))
}

pub fn plan_budget(
    eps_prime: f64,
    delta_prime: f64,
    d: usize,
    lipschitz: f64,
    spec: Option<&NoiseSpec>,
    h_max: Option<f64>,
) -> Result<ApproxOracleBudget> {
    if !(eps_prime > 0.0 && eps_prime < 1.0) || !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(Error::Domain(format!(
            "eps' and delta' must lie in (0,1), got ({eps_prime}, {delta_prime})"
        )));
    }
    if d == 0 || !(lipschitz > 0.0) {
        return Err(Error::Domain("need d >= 1 and L > 0".into()));
    }
    let df = d as f64;
    let eps = eps_prime / (8.0 * df);
    let delta = delta_prime * eps_prime * eps_prime / (32.0 * df * df);
    let iterations = ceil_guarded(16.0 * df * lipschitz * lipschitz / (eps_prime * eps_prime));
    let samples = match (spec, h_max) {
        (Some(s), Some(h)) => Some(sample_count(s.omega(), h, eps, delta)?),
        _ => None,
    };
    Ok(ApproxOracleBudget {
        eps_prime,
        delta_prime,
        d,
        lipschitz,
        eps,
        delta,
        iterations,
        samples,
    })
}

/// A noisy run together with an audit of its answer on the exact oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoisyResult {
    /// Solver output; every value in it comes from the noisy oracle.
    pub result: PgmResult,
    /// `H(Ŝ)` on the base oracle, evaluated after the run.
    pub true_value: f64,
    /// Queries made to the noisy oracle (each one averages `m` draws).
    pub noisy_calls: u64,
    pub samples: usize,
}

/// Runs PGM against the mean of `m` noisy queries. Rounding picks the chain
/// set with the smallest noisy value; the base oracle is consulted once,
/// afterwards, to report the true value of that set.
pub fn minimize_noisy<O: ValueOracle + ?Sized>(
    base: &O,
    spec: NoiseSpec,
    m: usize,
    config: &PgmConfig,
) -> Result<NoisyResult> {
    let noisy = mean_estimator(wrap_noisy(base, spec)?, m)?;
    let result = minimize(&noisy, config)?;
    let true_value = base.evaluate(result.rounded_set)?;
    Ok(NoisyResult {
        noisy_calls: noisy.call_count(),
        result,
        true_value,
        samples: m,
    })
}

/// [`minimize_noisy`] with `T` and `m` taken from a budget.
pub fn minimize_with_budget<O: ValueOracle + ?Sized>(
    base: &O,
    spec: NoiseSpec,
    budget: &ApproxOracleBudget,
    config: &PgmConfig,
) -> Result<NoisyResult> {
    let m = budget
        .samples
        .ok_or_else(|| Error::InvalidConfig("budget has no sample count".into()))?;
    let config = PgmConfig {
        iterations: budget.iterations as usize,
        ..config.clone()
    };
    minimize_noisy(base, spec, m as usize, &config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Counted, FnSetFunction};
    use crate::zoo::cut::CutInstance;
    use crate::zoo::modular::Modular;

    fn ten() -> Counted<FnSetFunction<impl Fn(Subset) -> f64 + Send + Sync>> {
        Counted::new(FnSetFunction::new(2, |s: Subset| if s.is_empty() { 0.0 } else { 10.0 }))
    }

    #[test]
    fn identity_noise_is_exact() {
        let base = Counted::new(Modular::new(vec![1.5, -2.0]));
        let s = Subset::full(2);
        for spec in [
            NoiseSpec::multiplicative_gaussian(1.0, 0.0, 3),
            NoiseSpec::additive_gaussian(0.0, 0.0, 3),
        ] {
            let n = wrap_noisy(&base, spec).unwrap();
            assert_eq!(n.evaluate(s).unwrap(), -0.5);
            assert!(n.is_deterministic());
        }
    }

    #[test]
    fn fresh_draws_differ_and_streams_reproduce() {
        let base = ten();
        let spec = NoiseSpec::multiplicative_gaussian(1.0, 0.1, 42);
        let a = wrap_noisy(&base, spec).unwrap();
        let s = Subset::full(2);
        let (x, y) = (a.evaluate(s).unwrap(), a.evaluate(s).unwrap());
        assert_ne!(x, y);
        assert!(!a.is_deterministic());
        assert_eq!(a.seed(), Some(42));

        let b = wrap_noisy(&base, spec).unwrap();
        let other = wrap_noisy(&base, spec.with_seed(7)).unwrap();
        other.evaluate(s).unwrap();
        assert_eq!(b.evaluate(s).unwrap(), x);
        other.evaluate(s).unwrap();
        assert_eq!(b.evaluate(s).unwrap(), y);
    }

    #[test]
    fn chain_draws_follow_the_counter() {
        let base = ten();
        let spec = NoiseSpec::multiplicative_gaussian(1.0, 0.1, 5);
        let a = wrap_noisy(&base, spec).unwrap();
        let chain = a.evaluate_chain(&[1, 0]).unwrap();
        assert_eq!(chain[1], 10.0 * spec.draw(1).unwrap());
        assert_eq!(chain[2], 10.0 * spec.draw(2).unwrap());
        assert_eq!(a.call_count(), 3);
    }

    #[test]
    fn consistent_mode_memoizes() {
        let base = ten();
        let a = wrap_noisy(&base, NoiseSpec::multiplicative_gaussian(1.0, 0.1, 5).consistent()).unwrap();
        let s = Subset::full(2);
        assert_eq!(a.evaluate(s).unwrap(), a.evaluate(s).unwrap());
    }

    #[test]
    fn truncation_holds() {
        let spec = NoiseSpec::additive_gaussian(0.0, 1.0, 9).with_bound(0.5);
        for n in 0..2000 {
            assert!(spec.draw(n).unwrap().abs() <= 0.5);
        }
        assert_eq!(NoiseSpec::multiplicative_gaussian(1.0, 0.1, 0).omega(), 1.0 + 6.0 * 0.1);
        assert!(NoiseSpec::multiplicative_gaussian(-1.0, 0.1, 0).validate().is_err());
    }

    #[test]
    fn mean_counts_m_inner_calls() {
        let base = ten();
        let noisy = wrap_noisy(&base, NoiseSpec::multiplicative_gaussian(1.0, 0.1, 1)).unwrap();
        let mean = mean_estimator(&noisy, 10).unwrap();
        mean.evaluate(Subset::full(2)).unwrap();
        assert_eq!(noisy.call_count(), 10);
        assert_eq!(mean.call_count(), 1);
        mean.evaluate_chain(&[0, 1]).unwrap();
        assert_eq!(noisy.call_count(), 40);

        let one = mean_estimator(wrap_noisy(&base, NoiseSpec::multiplicative_gaussian(1.0, 0.1, 1)).unwrap(), 1).unwrap();
        let raw = wrap_noisy(&base, NoiseSpec::multiplicative_gaussian(1.0, 0.1, 1)).unwrap();
        for _ in 0..5 {
            assert_eq!(one.evaluate(Subset::full(2)).unwrap(), raw.evaluate(Subset::full(2)).unwrap());
        }
        assert!(mean_estimator(&noisy, 0).is_err());
    }

    #[test]
    fn mean_concentrates() {
        let base = ten();
        let mut ok = 0;
        for seed in 0..100 {
            let noisy = wrap_noisy(&base, NoiseSpec::multiplicative_gaussian(1.0, 0.1, seed)).unwrap();
            let v = mean_estimator(noisy, 10_000).unwrap().evaluate(Subset::full(2)).unwrap();
            if (v - 10.0).abs() <= 0.05 {
                ok += 1;
            }
        }
        assert!(ok >= 99, "{ok}/100");
    }

    #[test]
    fn budget_examples() {
        let b = plan_budget(0.8, 0.1, 10, 5.0, None, None).unwrap();
        assert_eq!(b.eps, 0.01);
        assert!((b.delta - 2e-5).abs() < 1e-20);
        assert_eq!(b.iterations, 6250);
        assert_eq!(b.samples, None);
        let half = plan_budget(0.4, 0.1, 10, 5.0, None, None).unwrap();
        assert_eq!(half.iterations, 4 * b.iterations);
        assert_eq!(plan_budget(0.8, 0.1, 1, 5.0, None, None).unwrap().eps, 0.1);
        assert_eq!(sample_count(2.0, 10.0, 1.0, 0.1).unwrap(), 922);
        let inf = NoiseSpec::multiplicative_gaussian(1.0, 0.1, 0).with_bound(f64::INFINITY);
        assert!(plan_budget(0.8, 0.1, 10, 5.0, Some(&inf), Some(1.0)).is_err());
        assert!(plan_budget(1.2, 0.1, 10, 5.0, None, None).is_err());
    }

    #[test]
    fn zero_noise_matches_noiseless_run() {
        let base = Counted::new(CutInstance::layered(2, 3, 1).unwrap());
        let cfg = PgmConfig::new(100);
        let exact = minimize(&base, &cfg).unwrap();
        let noisy = minimize_noisy(&base, NoiseSpec::multiplicative_gaussian(1.0, 0.0, 0), 1, &cfg).unwrap();
        assert_eq!(noisy.result.rounded_set, exact.rounded_set);
        assert_eq!(noisy.true_value, base.evaluate(exact.rounded_set).unwrap());
    }

    #[test]
    fn noisy_modular_finds_optimum() {
        let base = Counted::new(Modular::new(vec![-1.0, 2.0, -3.0]));
        let mut hits = 0;
        for seed in 0..20 {
            let spec = NoiseSpec::multiplicative_gaussian(1.0, 0.1, seed);
            let r = minimize_noisy(&base, spec, 100, &PgmConfig::new(400)).unwrap();
            if r.true_value == -4.0 {
                hits += 1;
            }
        }
        assert!(hits >= 18, "{hits}/20");
    }

    #[test]
    fn noisy_path_cut_finds_trivial_cut() {
        let edges: Vec<_> = (0..5).map(|i| (i, i + 1, 1.0)).collect();
        let base = Counted::new(CutInstance::undirected(6, &edges).unwrap());
        let mut hits = 0;
        for seed in 0..20 {
            let spec = NoiseSpec::multiplicative_gaussian(1.0, 0.1, seed);
            let r = minimize_noisy(&base, spec, 50, &PgmConfig::new(400)).unwrap();
            if r.true_value == 0.0 {
                hits += 1;
            }
        }
        assert!(hits >= 19, "{hits}/20");
    }
}
