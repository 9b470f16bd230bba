//! Graph cut functions with terminal (unary) terms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::set::{Subset, MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub weight: f64,
}

/// `F(S) = Σ_{u∈S, v∉S} w(u→v) + Σ_{i∈S} (sink_i − source_i)`.
///
/// With source and sink capacities this is the `s`–`t` cut with source side
/// `S ∪ {s}` minus the constant `offset = Σ_i source_i`, so `F(∅) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutInstance {
    d: usize,
    arcs: Vec<Arc>,
    unary: Vec<f64>,
    offset: f64,
    out_adj: Vec<Vec<(usize, f64)>>,
    in_adj: Vec<Vec<(usize, f64)>>,
}

impl CutInstance {
    /// Directed graph without terminals.
    pub fn directed(d: usize, arcs: &[(usize, usize, f64)]) -> Result<Self> {
        let arcs = arcs
            .iter()
            .map(|&(from, to, weight)| Arc { from, to, weight })
            .collect();
        Self::build(d, arcs, vec![0.0; d], 0.0)
    }

    /// Undirected graph: each edge is stored as two opposite arcs.
    pub fn undirected(d: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut arcs = Vec::with_capacity(2 * edges.len());
        for &(u, v, w) in edges {
            arcs.push(Arc { from: u, to: v, weight: w });
            arcs.push(Arc { from: v, to: u, weight: w });
        }
        Self::build(d, arcs, vec![0.0; d], 0.0)
    }

    /// Adds terminal arcs `s → i` of capacity `source[i]` and `i → t` of
    /// capacity `sink[i]`.
    pub fn with_terminals(mut self, source: &[f64], sink: &[f64]) -> Result<Self> {
        if source.len() != self.d || sink.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: source.len().min(sink.len()),
            });
        }
        for i in 0..self.d {
            if source[i] < 0.0 || sink[i] < 0.0 || !source[i].is_finite() || !sink[i].is_finite()
            {
                return Err(Error::Domain(format!("terminal capacities of node {i} must be finite and >= 0")));
            }
            self.unary[i] += sink[i] - source[i];
            self.offset += source[i];
        }
        Ok(self)
    }

    /// Adds a constant to the raw cut, e.g. for direct source-to-sink arcs.
    pub fn with_offset(mut self, c: f64) -> Self {
        self.offset += c;
        self
    }

    /// Adds arbitrary modular terms.
    pub fn with_unary(mut self, unary: &[f64]) -> Result<Self> {
        if unary.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: unary.len(),
            });
        }
        for (u, x) in self.unary.iter_mut().zip(unary) {
            *u += x;
        }
        Ok(self)
    }

    fn build(d: usize, arcs: Vec<Arc>, unary: Vec<f64>, offset: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::NoFreeNodes);
        }
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: d, limit: MAX_DIM });
        }
        let mut out_adj = vec![Vec::new(); d];
        let mut in_adj = vec![Vec::new(); d];
        for a in &arcs {
            if a.from >= d || a.to >= d {
                return Err(Error::ElementOutOfRange {
                    element: a.from.max(a.to),
                    dim: d,
                });
            }
            if !(a.weight >= 0.0) || !a.weight.is_finite() {
                return Err(Error::Domain(format!(
                    "arc {} -> {} has invalid weight {}",
                    a.from, a.to, a.weight
                )));
            }
            if a.from != a.to {
                out_adj[a.from].push((a.to, a.weight));
                in_adj[a.to].push((a.from, a.weight));
            }
        }
        Ok(CutInstance {
            d,
            arcs,
            unary,
            offset,
            out_adj,
            in_adj,
        })
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn unary(&self) -> &[f64] {
        &self.unary
    }

    /// `Σ_i source_i`; the `s`–`t` cut capacity is `F(S) + offset`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn raw_cut_value(&self, s: Subset) -> f64 {
        self.cut_value(s) + self.offset
    }

    pub fn cut_value(&self, s: Subset) -> f64 {
        let mut v = 0.0;
        for a in &self.arcs {
            if s.contains(a.from) && !s.contains(a.to) {
                v += a.weight;
            }
        }
        v + s.iter().map(|i| self.unary[i]).sum::<f64>()
    }

    fn marginal(&self, j: usize, s: Subset) -> f64 {
        let mut g = self.unary[j];
        for &(v, w) in &self.out_adj[j] {
            if !s.contains(v) {
                g += w;
            }
        }
        for &(u, w) in &self.in_adj[j] {
            if s.contains(u) {
                g -= w;
            }
        }
        g
    }

    fn degrees(&self) -> Vec<(f64, f64)> {
        (0..self.d)
            .map(|i| {
                let out: f64 = self.out_adj[i].iter().map(|p| p.1).sum();
                let inn: f64 = self.in_adj[i].iter().map(|p| p.1).sum();
                (out, inn)
            })
            .collect()
    }

    /// Bound on `‖κ‖₂` for any chain: `|F(i|A)| ≤ |unary_i| + out_i + in_i`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.degrees()
            .iter()
            .zip(&self.unary)
            .map(|(&(o, i), u)| (u.abs() + o + i).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Writes `F = F₁ − G₁` with both parts non-decreasing: `G₁` is the
    /// modular function `c_i = in_i + max(0, −unary_i)` and `F₁ = F + G₁`.
    /// `F₁` is submodular and `G₁` modular, so `(α, β) = (1, 1)`.
    pub fn monotone_split(&self) -> (CutInstance, crate::zoo::Modular) {
        let c: Vec<f64> = self
            .degrees()
            .iter()
            .zip(&self.unary)
            .map(|(&(_, inn), &u)| inn + (-u).max(0.0))
            .collect();
        let f = self.clone().with_unary(&c).expect("same dimension");
        (f, crate::zoo::Modular::new(c))
    }

    /// Layered network: `layers × width` nodes, source feeding the first
    /// layer and the last layer draining into the sink. Inside a layer nodes
    /// form a ring of strong arcs; consecutive layers are joined by a random
    /// matching of weak arcs, plus a few extra random forward arcs.
    pub fn layered(layers: usize, width: usize, seed: u64) -> Result<Self> {
        if layers < 2 || width < 1 {
            return Err(Error::Domain("layered graph needs >= 2 layers and width >= 1".into()));
        }
        let d = layers * width;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let node = |l: usize, k: usize| l * width + k;
        let mut arcs = Vec::new();
        for l in 0..layers {
            if width > 1 {
                for k in 0..width {
                    let w = rng.random_range(1.0..3.0);
                    arcs.push((node(l, k), node(l, (k + 1) % width), w));
                    arcs.push((node(l, (k + 1) % width), node(l, k), w));
                }
            }
            if l + 1 < layers {
                let mut targets: Vec<usize> = (0..width).collect();
                targets.shuffle(&mut rng);
                for (k, &t) in targets.iter().enumerate() {
                    arcs.push((node(l, k), node(l + 1, t), rng.random_range(0.2..1.2)));
                }
                for k in 0..width {
                    if rng.random_bool(0.3) {
                        let t = rng.random_range(0..width);
                        arcs.push((node(l, k), node(l + 1, t), rng.random_range(0.1..0.6)));
                    }
                }
            }
        }
        let mut source = vec![0.0; d];
        let mut sink = vec![0.0; d];
        for k in 0..width {
            source[node(0, k)] = rng.random_range(0.5..2.0);
            sink[node(layers - 1, k)] = rng.random_range(0.5..2.0);
        }
        CutInstance::directed(d, &arcs)?.with_terminals(&source, &sink)
    }

    /// Semi-supervised two-moons clustering: a k-nearest-neighbour Gaussian
    /// similarity graph on `n` points, with `labeled` points per class pulled
    /// toward their class by unary terms of size `label_weight`. Points of
    /// the first moon should end up in `S`.
    pub fn two_moons(n: usize, labeled: usize, noise: f64, label_weight: f64, seed: u64) -> Result<(Self, Vec<bool>)> {
        if n < 4 || 2 * labeled > n {
            return Err(Error::Domain("two moons needs n >= 4 and 2*labeled <= n".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let jitter = Normal::new(0.0, noise.max(0.0)).map_err(|e| Error::Domain(e.to_string()))?;
        let mut pts = Vec::with_capacity(n);
        let mut first = Vec::with_capacity(n);
        for i in 0..n {
            let upper = i % 2 == 0;
            let t = rng.random_range(0.0..std::f64::consts::PI);
            let (x, y) = if upper {
                (t.cos(), t.sin())
            } else {
                (1.0 - t.cos(), 0.5 - t.sin())
            };
            pts.push((x + jitter.sample(&mut rng), y + jitter.sample(&mut rng)));
            first.push(upper);
        }
        let k = 5.min(n - 1);
        let dist2 = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
        let h2 = 2.0 * 0.25f64.powi(2);
        let mut weight = std::collections::BTreeMap::new();
        for i in 0..n {
            let mut nb: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (dist2(pts[i], pts[j]), j))
                .collect();
            nb.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(dd, j) in nb.iter().take(k) {
                weight.insert((i.min(j), i.max(j)), (-dd / h2).exp());
            }
        }
        let edges: Vec<(usize, usize, f64)> = weight.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let mut unary = vec![0.0; n];
        // even indices are the first moon, odd the second
        for c in 0..labeled {
            unary[2 * c] = -label_weight;
            unary[2 * c + 1] = label_weight;
        }
        let inst = CutInstance::undirected(n, &edges)?.with_unary(&unary)?;
        Ok((inst, first))
    }
}

impl SetFunction for CutInstance {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.cut_value(s))
    }

    fn chain_values(&self, perm: &[usize]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(perm.len() + 1);
        let mut s = Subset::empty(self.d);
        let mut acc = 0.0;
        out.push(acc);
        for &j in perm {
            acc += self.marginal(j, s);
            s.insert(j);
            out.push(acc);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::{estimate_dr_parameters, Monotonicity};
    use crate::oracle::{default_chain, Counted};

    #[test]
    fn cut_examples() {
        let e = CutInstance::undirected(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(e.value(Subset::singleton(2, 0)).unwrap(), 1.0);
        assert_eq!(e.value(Subset::empty(2)).unwrap(), 0.0);
        let tri = CutInstance::undirected(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(tri.value(Subset::singleton(3, 0)).unwrap(), 2.0);
    }

    #[test]
    fn chain_matches_pointwise() {
        let g = CutInstance::layered(3, 4, 7).unwrap();
        let perm = [5, 0, 11, 3, 2, 8, 1, 4, 6, 9, 10, 7];
        let fast = g.chain_values(&perm).unwrap();
        let slow = default_chain(12, &perm, |s| g.value(s)).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn terminals_fold_into_offset() {
        // s -> 0 (2), 0 -> 1 (1), 1 -> t (3)
        let g = CutInstance::directed(2, &[(0, 1, 1.0)])
            .unwrap()
            .with_terminals(&[2.0, 0.0], &[0.0, 3.0])
            .unwrap();
        assert_eq!(g.offset(), 2.0);
        assert_eq!(g.raw_cut_value(Subset::empty(2)), 2.0);
        assert_eq!(g.raw_cut_value(Subset::singleton(2, 0)), 1.0);
        assert_eq!(g.raw_cut_value(Subset::full(2)), 3.0);
    }

    #[test]
    fn cuts_are_submodular() {
        let g = CutInstance::layered(2, 4, 3).unwrap();
        let (f, m) = g.monotone_split();
        let p = estimate_dr_parameters(&Counted::new(f.clone()), Monotonicity::NonDecreasing).unwrap();
        assert!((p.alpha - 1.0).abs() < 1e-12);
        for s in crate::set::GroundSet::new(8).unwrap().subsets() {
            let diff = f.value(s).unwrap() - m.value(s).unwrap() - g.value(s).unwrap();
            assert!(diff.abs() < 1e-12);
        }
    }

    #[test]
    fn lipschitz_bounds_every_chain() {
        let g = CutInstance::layered(3, 3, 11).unwrap();
        let l = g.lipschitz_bound();
        let perm: Vec<usize> = (0..9).rev().collect();
        let c = g.chain_values(&perm).unwrap();
        let norm: f64 = c.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>().sqrt();
        assert!(norm <= l);
    }

    #[test]
    fn two_moons_is_deterministic() {
        let (a, la) = CutInstance::two_moons(20, 2, 0.05, 2.0, 1).unwrap();
        let (b, lb) = CutInstance::two_moons(20, 2, 0.05, 2.0, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CutInstance::undirected(2, &[(0, 2, 1.0)]).is_err());
        assert!(CutInstance::undirected(2, &[(0, 1, -1.0)]).is_err());
    }
}
