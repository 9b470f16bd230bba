//! Writing an arbitrary normalized set function as `H = F − G` with `F`
//! non-decreasing α-weakly DR-submodular and `G` non-decreasing
//! (α, β)-weakly DR-modular.
//!
//! Given a lower bound `ε′_H ≤ 0` on the violation
//! `ε_H = min_{i, A ⊆ B ⊆ V∖i} H(i|A) − α H(i|B)` and a witness `G′` whose
//! violation `ε_{G′}` is positive, the function
//! `F′ = H + (|ε′_H|/ε_{G′}) G′` is α-weakly DR-submodular. Subtracting the
//! negative last marginals `c_i = F′(i|V∖i)`, `i ∈ V⁻`, makes it monotone:
//!
//! ```text
//! F(S) = F′(S) − Σ_{i∈S∩V⁻} c_i        G(S) = scale·G′(S) − Σ_{i∈S∩V⁻} c_i
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exhaustive::{violation_from_table, DrWitness, ValueTable};
use crate::oracle::{SetFunction, ValueOracle};
use crate::set::Subset;
use crate::zoo::concave::ConcaveCardinality;

/// Ground-set limit for the exhaustive violation scan.
pub const VIOLATION_LIMIT: usize = 14;

/// `min_{i, A ⊆ B ⊆ V∖i} H(i|A) − α H(i|B)`; `d <= 14`.
pub fn violation_eps<O: ValueOracle + ?Sized>(oracle: &O, alpha: f64) -> Result<f64> {
    Ok(violation_with_witness(oracle, alpha)?.0)
}

pub fn violation_with_witness<O: ValueOracle + ?Sized>(
    oracle: &O,
    alpha: f64,
) -> Result<(f64, DrWitness)> {
    let table = ValueTable::from_oracle(oracle, VIOLATION_LIMIT)?;
    Ok(violation_from_table(&table, alpha))
}

/// The witness `G′` used by the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `G′(S) = |S|`, with `ε_{G′} = 1 − α`; used when `α < 1`.
    Cardinality,
    /// `g(|S|)` concave with `ε_{G′} = −a`; used when `α = 1`.
    Concave { beta_target: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSpec {
    pub d: usize,
    pub alpha: f64,
    pub beta: f64,
    pub eps_h_lower: f64,
    pub witness: Witness,
    pub eps_gprime: f64,
    /// `|ε′_H| / ε_{G′}`.
    pub scale: f64,
    pub v_minus: Subset,
    /// `F′(i|V∖i)` for `i ∈ V⁻`, zero elsewhere.
    pub corrections: Vec<f64>,
}

impl DecompositionSpec {
    pub fn gprime(&self, s: Subset) -> f64 {
        match self.witness {
            Witness::Cardinality => s.len() as f64,
            Witness::Concave { beta_target } => ConcaveCardinality::new(self.d, beta_target)
                .expect("validated at construction")
                .g(s.len() as f64),
        }
    }

    /// `Σ_{i∈S∩V⁻} c_i`.
    pub fn correction_sum(&self, s: Subset) -> f64 {
        s.intersection(self.v_minus)
            .iter()
            .map(|i| self.corrections[i])
            .sum()
    }

    /// `G(S) = scale·G′(S) − Σ_{i∈S∩V⁻} c_i`.
    pub fn g_value(&self, s: Subset) -> f64 {
        self.scale * self.gprime(s) - self.correction_sum(s)
    }

    /// `H(S*)/α + (1/α − β)·G(S*) + ε`.
    pub fn bound(&self, h_star: f64, s_star: Subset, eps: f64) -> f64 {
        h_star / self.alpha + (1.0 / self.alpha - self.beta) * self.g_value(s_star) + eps
    }
}

/// Upper bound on `H(Ŝ)` implied by the decomposition, given `H(S*)`.
pub fn decomposition_bound(spec: &DecompositionSpec, h_star: f64, s_star: Subset, eps: f64) -> f64 {
    spec.bound(h_star, s_star, eps)
}

/// `H` together with the constructed `F` and `G`.
pub struct Decomposition<O> {
    h: O,
    spec: DecompositionSpec,
}

impl<O: ValueOracle> Decomposition<O> {
    pub fn spec(&self) -> &DecompositionSpec {
        &self.spec
    }

    pub fn objective(&self) -> &O {
        &self.h
    }

    pub fn into_parts(self) -> (O, DecompositionSpec) {
        (self.h, self.spec)
    }

    /// `F = H + G`; each value costs one call on `H`.
    pub fn f(&self) -> DecomposedF<'_, O> {
        DecomposedF { dec: self }
    }

    pub fn g(&self) -> DecomposedG {
        DecomposedG {
            spec: self.spec.clone(),
        }
    }

    pub fn f_value(&self, s: Subset) -> Result<f64> {
        Ok(self.h.evaluate(s)? + self.spec.g_value(s))
    }
}

pub struct DecomposedF<'a, O> {
    dec: &'a Decomposition<O>,
}

impl<O: ValueOracle> SetFunction for DecomposedF<'_, O> {
    fn dim(&self) -> usize {
        self.dec.spec.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        self.dec.f_value(s)
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        let h = self.dec.h.evaluate_chain(perm)?;
        let mut s = Subset::empty(self.dim());
        let mut out = Vec::with_capacity(h.len());
        for (k, v) in h.into_iter().enumerate() {
            if k > 0 {
                s.insert(perm[k - 1]);
            }
            out.push(v + self.dec.spec.g_value(s));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct DecomposedG {
    spec: DecompositionSpec,
}

impl DecomposedG {
    pub fn spec(&self) -> &DecompositionSpec {
        &self.spec
    }
}

impl SetFunction for DecomposedG {
    fn dim(&self) -> usize {
        self.spec.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.spec.g_value(s))
    }
}

fn check_parameters(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha and beta must lie in (0, 1], got ({alpha}, {beta})"
        )));
    }
    if alpha * beta >= 1.0 {
        return Err(Error::InvalidConfig("decomposition needs alpha * beta < 1".into()));
    }
    Ok(())
}

/// Builds `F` and `G` from a violation bound `eps_h_lower <= 0`.
///
/// Costs `d + 1` calls on `H` for the last marginals. When `d <= 14` and
/// `H` is deterministic, the bound is also checked against the exact `ε_H`
/// (`2^d` further calls).
pub fn decompose<O: ValueOracle>(oracle: O, alpha: f64, beta: f64, eps_h_lower: f64) -> Result<Decomposition<O>> {
    check_parameters(alpha, beta)?;
    if !(eps_h_lower <= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "eps_h_lower must be <= 0, got {eps_h_lower}; use 0 when H is already alpha-weakly DR-submodular"
        )));
    }
    let d = oracle.dim();
    if d >= 2 && d <= VIOLATION_LIMIT && oracle.is_deterministic() {
        let exact = violation_eps(&oracle, alpha)?;
        let tol = 1e-9 * exact.abs().max(1.0);
        if eps_h_lower > exact + tol {
            return Err(Error::InvalidConfig(format!(
                "eps_h_lower = {eps_h_lower} exceeds the exact violation {exact}"
            )));
        }
    }
    build(oracle, alpha, beta, eps_h_lower)
}

/// [`decompose`] with `ε′_H = min(ε_H, 0)` computed exhaustively (`d <= 14`).
pub fn decompose_exhaustive<O: ValueOracle>(oracle: O, alpha: f64, beta: f64) -> Result<Decomposition<O>> {
    check_parameters(alpha, beta)?;
    let eps = violation_eps(&oracle, alpha)?.min(0.0);
    build(oracle, alpha, beta, eps)
}

fn build<O: ValueOracle>(oracle: O, alpha: f64, beta: f64, eps_h_lower: f64) -> Result<Decomposition<O>> {
    let d = oracle.dim();
    let (witness, eps_gprime) = if alpha < 1.0 {
        (Witness::Cardinality, 1.0 - alpha)
    } else {
        if d < 2 {
            return Err(Error::Domain("the concave witness needs d >= 2".into()));
        }
        let g = ConcaveCardinality::new(d, beta)?;
        (Witness::Concave { beta_target: beta }, g.eps())
    };
    let scale = eps_h_lower.abs() / eps_gprime;
    let mut spec = DecompositionSpec {
        d,
        alpha,
        beta,
        eps_h_lower,
        witness,
        eps_gprime,
        scale,
        v_minus: Subset::empty(d),
        corrections: vec![0.0; d],
    };

    let full = Subset::full(d);
    let h_full = oracle.evaluate(full)?;
    let g_full = spec.gprime(full);
    for i in 0..d {
        let rest = full.without(i);
        let c = h_full - oracle.evaluate(rest)? + scale * (g_full - spec.gprime(rest));
        if c < 0.0 {
            spec.v_minus.insert(i);
            spec.corrections[i] = c;
        }
    }
    Ok(Decomposition { h: oracle, spec })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::{estimate_dr_parameters, Monotonicity};
    use crate::oracle::Counted;
    use crate::zoo::cut::CutInstance;
    use crate::zoo::hardness::HardnessInstance;
    use crate::zoo::modular::Modular;
    use crate::zoo::random::RandomTable;

    #[test]
    fn violation_examples() {
        let cut = Counted::new(CutInstance::undirected(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)]).unwrap());
        assert!(violation_eps(&cut, 1.0).unwrap() >= 0.0);

        let w = vec![2.0, 0.5, 3.0];
        let m = Counted::new(Modular::new(w));
        assert!((violation_eps(&m, 0.5).unwrap() - 0.25).abs() < 1e-15);

        // With a threshold of one, A = {c} and B = A + three elements of D
        // flip balance in opposite directions, so the violation is (1 + α)H*.
        let h = HardnessInstance::new(8, Some(1.0 / 8.0), 0.5, 1.0, 2).unwrap();
        let eps = violation_eps(&Counted::new(h), 0.5).unwrap();
        assert_eq!(eps, 1.5 * h.optimal_value());
        // A wider threshold needs more of D than exists, and the violation is milder.
        let wide = HardnessInstance::new(8, Some(0.25), 0.5, 1.0, 2).unwrap();
        assert_eq!(violation_eps(&Counted::new(wide), 0.5).unwrap(), wide.optimal_value());
    }

    #[test]
    fn modular_needs_no_correction() {
        let m = Counted::new(Modular::new(vec![1.0, 2.0, 0.5]));
        let dec = decompose(&m, 0.5, 0.5, 0.0).unwrap();
        assert_eq!(dec.spec().scale, 0.0);
        assert!(dec.spec().v_minus.is_empty());
        let g = Counted::new(dec.g());
        for s in crate::set::GroundSet::new(3).unwrap().subsets() {
            assert_eq!(g.evaluate(s).unwrap(), 0.0);
            assert_eq!(dec.f_value(s).unwrap(), m.evaluate(s).unwrap());
        }
    }

    #[test]
    fn hardness_witness_has_one_minus_alpha() {
        let h = Counted::new(HardnessInstance::new(8, None, 0.5, 1.0, 2).unwrap());
        let dec = decompose_exhaustive(&h, 0.5, 0.5).unwrap();
        assert_eq!(dec.spec().witness, Witness::Cardinality);
        assert_eq!(dec.spec().eps_gprime, 0.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        let m = Counted::new(Modular::new(vec![1.0, 2.0]));
        assert!(decompose(&m, 1.0, 1.0, 0.0).is_err());
        assert!(decompose(&m, 0.5, 0.5, 0.1).is_err());
        // bound tighter than the true violation
        let t = Counted::new(RandomTable::new(4, 1.0, 0).unwrap());
        let eps = violation_eps(&t, 0.5).unwrap();
        assert!(decompose(&t, 0.5, 0.5, eps / 2.0).is_err());
        assert!(decompose(&t, 0.5, 0.5, eps).is_ok());
    }

    #[test]
    fn random_functions_decompose() {
        for seed in 0..5 {
            for &(alpha, beta) in &[(1.0, 0.5), (0.5, 0.5)] {
                let h = Counted::new(RandomTable::new(6, 1.0, seed).unwrap());
                let dec = decompose_exhaustive(&h, alpha, beta).unwrap();
                let f = Counted::new(dec.f());
                let g = Counted::new(dec.g());
                let pf = estimate_dr_parameters(&f, Monotonicity::NonDecreasing).unwrap();
                assert!(pf.alpha >= alpha - 1e-9, "{pf:?}");
                let pg = estimate_dr_parameters(&g, Monotonicity::NonDecreasing).unwrap();
                assert!(pg.alpha >= alpha - 1e-9 && pg.beta >= beta - 1e-9, "{pg:?}");
                for s in crate::set::GroundSet::new(6).unwrap().subsets() {
                    let diff = f.evaluate(s).unwrap() - g.evaluate(s).unwrap() - h.evaluate(s).unwrap();
                    assert!(diff.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bound_arithmetic() {
        let spec = DecompositionSpec {
            d: 4,
            alpha: 0.5,
            beta: 1.0,
            eps_h_lower: -4.0,
            witness: Witness::Cardinality,
            eps_gprime: 0.5,
            scale: 1.0,
            v_minus: Subset::empty(4),
            corrections: vec![0.0; 4],
        };
        let s = Subset::full(4);
        assert_eq!(spec.g_value(s), 4.0);
        // -6/0.5 + (2 - 1) * 4
        assert_eq!(decomposition_bound(&spec, -6.0, s, 0.0), -8.0);
    }
}
