//! Self-checks over the instance zoo.
//!
//! Each check enumerates small ground sets exhaustively and compares the
//! solver's building blocks against independent formulas. Failures become
//! report entries with a counterexample; nothing here panics or returns an
//! error.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::decompose_exhaustive;
use crate::error::Result;
use crate::exhaustive::{brute_force_min, estimate_dr_parameters, Monotonicity, ValueTable};
use crate::lovasz::{greedy_subgradient, lovasz_value, FractionalPoint};
use crate::noise::{wrap_noisy, NoiseSpec};
use crate::oracle::{default_chain, Counted, SetFunction, ValueOracle};
use crate::pgm::{certificate_bound, minimize, PgmConfig};
use crate::set::{GroundSet, Subset};
use crate::zoo::{
    ConcaveCardinality, CutInstance, GpInstance, ItemCost, Modular, RandomTable, Regularizer,
    TightnessInstance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Ground sets up to 8 elements.
    Fast,
    /// Ground sets up to 12 elements.
    Full,
}

impl Level {
    pub fn max_dim(self) -> usize {
        match self {
            Level::Fast => 8,
            Level::Full => 12,
        }
    }
}

impl std::str::FromStr for Level {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(crate::Error::InvalidConfig(format!("unknown verify level '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub cases: u64,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: Level,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["check", "level", "passed", "cases", "counterexample"])?;
        let level = match self.level {
            Level::Fast => "fast",
            Level::Full => "full",
        };
        for c in &self.checks {
            out.write_record([
                c.name.as_str(),
                level,
                if c.passed { "true" } else { "false" },
                &c.cases.to_string(),
                c.counterexample.as_deref().unwrap_or(""),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Hook applied to every greedy vector before the upper-bound comparison. The
/// identity in normal runs; tests inject faults through it.
pub type KappaMutation = fn(&mut [f64]);

pub fn verify_suite(level: Level) -> VerifyReport {
    verify_suite_with(level, |_| {})
}

pub fn verify_suite_with(level: Level, mutate: KappaMutation) -> VerifyReport {
    let max_d = level.max_dim();
    let checks = vec![
        run("lovasz_vertices", || lovasz_vertices(max_d.min(10))),
        run("lovasz_thresholds", || lovasz_thresholds(max_d)),
        run("kappa_bound", || kappa_bound_suite(max_d.min(10), mutate)),
        run("tightness_identities", || tightness_identities(max_d)),
        run("decomposition", || decomposition(max_d.min(10))),
        run("chain_consistency", || chain_consistency(max_d)),
        run("cut_certificate", || cut_certificate(max_d)),
        run("noise_streams", noise_streams),
    ];
    VerifyReport { level, checks }
}

/// Running tally for one check: stops recording at the first counterexample.
#[derive(Default)]
struct Tally {
    cases: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }
}

fn run(name: &str, check: impl FnOnce() -> Result<Tally>) -> CheckResult {
    match check() {
        Ok(t) => CheckResult {
            name: name.into(),
            passed: t.counterexample.is_none(),
            cases: t.cases,
            counterexample: t.counterexample,
        },
        Err(e) => CheckResult {
            name: name.into(),
            passed: false,
            cases: 0,
            counterexample: Some(format!("error: {e}")),
        },
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

pub(crate) fn random_cut(d: usize, seed: u64) -> Result<CutInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..d {
        for v in u + 1..d {
            if rng.random_bool(0.5) {
                edges.push((u, v, rng.random_range(0.1..1.0)));
            }
        }
    }
    let source: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
    let sink: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
    CutInstance::undirected(d, &edges)?.with_terminals(&source, &sink)
}

fn random_point(d: usize, rng: &mut ChaCha8Rng) -> Result<FractionalPoint> {
    FractionalPoint::new((0..d).map(|_| rng.random_range(0.0..=1.0)).collect())
}

/// Normalized zoo members of size `d`, with a label.
fn zoo(d: usize, seed: u64) -> Result<Vec<(String, Box<dyn SetFunction>)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    let mut out: Vec<(String, Box<dyn SetFunction>)> = vec![
        (format!("cut d={d}"), Box::new(random_cut(d, seed)?)),
        (format!("modular d={d}"), Box::new(Modular::new(weights))),
        (format!("random table d={d}"), Box::new(RandomTable::new(d, 1.0, seed)?)),
        (
            format!("tightness d={d}"),
            Box::new(TightnessInstance::new(d, 0.5, 0.5)?.objective()),
        ),
    ];
    if d >= 2 {
        out.push((format!("concave d={d}"), Box::new(ConcaveCardinality::new(d, 0.5)?)));
    }
    Ok(out)
}

fn lovasz_vertices(max_d: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for d in 2..=max_d {
        for (name, f) in zoo(d, d as u64)? {
            let o = Counted::new(f);
            for s in GroundSet::new(d)?.subsets() {
                let lv = lovasz_value(&o, &FractionalPoint::indicator(s))?;
                let sv = o.evaluate(s)?;
                t.expect(close(lv, sv, 1e-9), || format!("{name}: h_L(1_S) = {lv}, H(S) = {sv} at S = {s}"));
            }
        }
    }
    Ok(t)
}

/// `κ·s` against the threshold form `Σ_k (s_(k) − s_(k+1)) H(S_k)`.
fn lovasz_thresholds(max_d: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in 2..=max_d {
        for (name, f) in zoo(d, 100 + d as u64)? {
            let o = Counted::new(f);
            for _ in 0..20 {
                let s = random_point(d, &mut rng)?;
                let g = greedy_subgradient(&o, &s)?;
                let c = s.coords();
                let perm = g.ordering.perm();
                let mut threshold = 0.0;
                let mut set = Subset::empty(d);
                for (k, &j) in perm.iter().enumerate() {
                    set.insert(j);
                    let next = perm.get(k + 1).map_or(0.0, |&n| c[n]);
                    threshold += (c[j] - next) * o.evaluate(set)?;
                }
                let lv = g.dot(c);
                t.expect(close(lv, threshold, 1e-9), || {
                    format!("{name}: κ·s = {lv}, threshold form = {threshold} at s = {c:?}")
                });
                let total: f64 = g.kappa.iter().sum();
                let span = g.chain_values[d] - g.chain_values[0];
                t.expect(close(total, span, 1e-9), || format!("{name}: κ(V) = {total}, H(V) − H(∅) = {span}"));
            }
        }
    }
    Ok(t)
}

/// `κ(A) <= F(A)/α − βG(A) + 1e-9` for all `A`, with `κ` the greedy vector of
/// `H = F − G` at 20 random points.
fn kappa_bound_check<F, G>(
    t: &mut Tally,
    name: &str,
    f: &F,
    g: &G,
    alpha: f64,
    beta: f64,
    seed: u64,
    mutate: KappaMutation,
) -> Result<()>
where
    F: ValueOracle,
    G: ValueOracle,
{
    let d = f.dim();
    let ft = ValueTable::from_oracle(f, d)?;
    let gt = ValueTable::from_oracle(g, d)?;
    let h: Vec<f64> = ft.values().iter().zip(gt.values()).map(|(a, b)| a - b).collect();
    let h = Counted::new(TableFunction { d, values: h });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let s = random_point(d, &mut rng)?;
        let mut kappa = greedy_subgradient(&h, &s)?.kappa;
        mutate(&mut kappa);
        for a in GroundSet::new(d)?.subsets() {
            let lhs: f64 = a.iter().map(|i| kappa[i]).sum();
            let rhs = ft.get(a) / alpha - beta * gt.get(a);
            t.expect(lhs <= rhs + 1e-9, || {
                format!("{name}: κ(A) = {lhs} > F(A)/α − βG(A) = {rhs} at A = {a}, s = {:?}", s.coords())
            });
        }
    }
    Ok(())
}

struct TableFunction {
    d: usize,
    values: Vec<f64>,
}

impl SetFunction for TableFunction {
    fn dim(&self) -> usize {
        self.d
    }

    fn value(&self, s: Subset) -> Result<f64> {
        Ok(self.values[s.mask() as usize])
    }
}

const TIGHTNESS_GRID: [f64; 3] = [0.25, 0.5, 1.0];

fn kappa_bound_suite(max_d: usize, mutate: KappaMutation) -> Result<Tally> {
    let mut t = Tally::default();
    for d in 3..=max_d {
        for &alpha in &TIGHTNESS_GRID {
            for &beta in &TIGHTNESS_GRID {
                if alpha * beta >= 1.0 {
                    continue;
                }
                let inst = TightnessInstance::new(d, alpha, beta)?;
                let name = format!("tightness d={d} α={alpha} β={beta}");
                kappa_bound_check(&mut t, &name, &Counted::new(inst.f()), &Counted::new(inst.g()), alpha, beta, d as u64, mutate)?;
            }
        }
        // a cut minus a (1, β) concave witness
        let (f, _) = random_cut(d, 40 + d as u64)?.monotone_split();
        let g = ConcaveCardinality::new(d, 0.5)?;
        kappa_bound_check(&mut t, &format!("cut - concave d={d}"), &Counted::new(f), &Counted::new(g), 1.0, 0.5, d as u64, mutate)?;
        // decompositions of random functions
        for (alpha, beta) in [(1.0, 0.5), (0.5, 0.5)] {
            let dec = decompose_exhaustive(Counted::new(RandomTable::new(d, 1.0, 7 * d as u64)?), alpha, beta)?;
            let name = format!("decomposed random d={d} α={alpha} β={beta}");
            kappa_bound_check(&mut t, &name, &Counted::new(dec.f()), &Counted::new(dec.g()), alpha, beta, d as u64, mutate)?;
        }
    }
    Ok(t)
}

fn tightness_identities(max_d: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for d in 3..=max_d {
        for &alpha in &TIGHTNESS_GRID {
            for &beta in &TIGHTNESS_GRID {
                if alpha * beta >= 1.0 {
                    continue;
                }
                let inst = TightnessInstance::new(d, alpha, beta)?;
                let tag = format!("d={d} α={alpha} β={beta}");
                let pf = estimate_dr_parameters(&Counted::new(inst.f()), Monotonicity::NonDecreasing)?;
                t.expect(pf.alpha >= alpha - 1e-12, || format!("{tag}: F has α = {}", pf.alpha));
                let pg = estimate_dr_parameters(&Counted::new(inst.g()), Monotonicity::NonDecreasing)?;
                t.expect(pg.alpha >= alpha - 1e-12 && pg.beta >= beta - 1e-12, || {
                    format!("{tag}: G has (α, β) = ({}, {})", pg.alpha, pg.beta)
                });
                let (s, v) = brute_force_min(&Counted::new(inst.objective()))?;
                let expected = (alpha - 1.0 / beta) * (d - 1) as f64;
                t.expect(v == expected && s == inst.optimal_set(), || {
                    format!("{tag}: optimum {v} at {s}, expected {expected}")
                });
                let cfg = PgmConfig::new(50).with_start(inst.adversarial_start());
                let r = minimize(&Counted::new(inst.objective()), &cfg)?;
                t.expect(r.rounded_value == 0.0, || format!("{tag}: PGM returned {}", r.rounded_value));
            }
        }
    }
    Ok(t)
}

fn decomposition(max_d: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for d in 2..=max_d.min(8) {
        for seed in 0..5 {
            for (alpha, beta) in [(1.0, 0.5), (0.5, 0.5)] {
                let h = Counted::new(RandomTable::new(d, 1.0, 1000 * d as u64 + seed)?);
                let dec = decompose_exhaustive(&h, alpha, beta)?;
                let tag = format!("d={d} seed={seed} α={alpha} β={beta}");
                let pf = estimate_dr_parameters(&Counted::new(dec.f()), Monotonicity::NonDecreasing)?;
                t.expect(pf.alpha >= alpha - 1e-9, || format!("{tag}: F has α = {}", pf.alpha));
                match estimate_dr_parameters(&Counted::new(dec.g()), Monotonicity::NonDecreasing) {
                    Ok(pg) => t.expect(pg.alpha >= alpha - 1e-9 && pg.beta >= beta - 1e-9, || {
                        format!("{tag}: G has (α, β) = ({}, {})", pg.alpha, pg.beta)
                    }),
                    // G = 0 is trivially modular
                    Err(crate::Error::Degenerate) => t.expect(true, String::new),
                    Err(e) => return Err(e),
                }
                for s in GroundSet::new(d)?.subsets() {
                    let diff = dec.f_value(s)? - dec.spec().g_value(s) - h.evaluate(s)?;
                    t.expect(diff.abs() <= 1e-12, || format!("{tag}: F − G − H = {diff} at {s}"));
                }
            }
        }
    }
    Ok(t)
}

fn chain_consistency(max_d: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 2..=max_d {
        let planted = crate::zoo::regression::generate_regression(d, 2 * d, 1, 0.05, 1e-3, Regularizer::Range, d as u64)?;
        let inst = planted.instance;
        let xs: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..3.0)).collect();
        let gp = GpInstance::rbf_1d(&xs, 0.7, 0.1, ItemCost::Linear { lambda: 0.1 })?;
        let cut = random_cut(d, d as u64)?;
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..d).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            let pairs = [
                ("least squares", inst.gl_chain(&perm)?, default_chain(d, &perm, |s| inst.gl_value(s))?),
                ("gp variance", gp.variance_reduction_chain(&perm)?, default_chain(d, &perm, |s| gp.variance_reduction_value(s))?),
                ("cut", cut.chain_values(&perm)?, default_chain(d, &perm, |s| cut.value(s))?),
            ];
            for (name, fast, slow) in pairs {
                for (k, (a, b)) in fast.iter().zip(&slow).enumerate() {
                    t.expect(close(*a, *b, 1e-10), || format!("{name} d={d}: prefix {k} of {perm:?}: chain {a}, direct {b}"));
                }
            }
        }
    }
    Ok(t)
}

/// Submodular case of the PGM guarantee: `H(Ŝ) <= H* + RL/√T`.
fn cut_certificate(max_d: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for d in 2..=max_d.min(10) {
        for seed in 0..3 {
            let cut = random_cut(d, 500 + seed)?;
            let (f, g) = cut.monotone_split();
            let o = Counted::new(cut.clone());
            let (s_star, _) = brute_force_min(&o)?;
            let l = f.value(Subset::full(d))? + g.value(Subset::full(d))?;
            let cfg = PgmConfig::new(2000).with_lipschitz(l);
            let r = minimize(&o, &cfg)?;
            let bound = certificate_bound(f.value(s_star)?, g.value(s_star)?, 1.0, 1.0, l, cfg.radius_for(d), cfg.iterations)?;
            t.expect(r.rounded_value <= bound + 1e-6, || {
                format!("d={d} seed={seed}: value {} above bound {bound}", r.rounded_value)
            });
        }
    }
    Ok(t)
}

fn noise_streams() -> Result<Tally> {
    let mut t = Tally::default();
    let base = Counted::new(Modular::new(vec![1.0, -2.0, 0.5, 3.0]));
    let spec = NoiseSpec::multiplicative_gaussian(1.0, 0.1, 99);
    let a = wrap_noisy(&base, spec.clone())?;
    let b = wrap_noisy(&base, spec.clone())?;
    let c = wrap_noisy(&base, spec.consistent())?;
    let s = Subset::full(4);
    let first_c = c.evaluate(s)?;
    for k in 0..200 {
        let (x, y) = (a.evaluate(s)?, b.evaluate(s)?);
        t.expect(x.to_bits() == y.to_bits(), || format!("draw {k}: {x} vs {y} under the same seed"));
        let z = c.evaluate(s)?;
        t.expect(z.to_bits() == first_c.to_bits(), || format!("consistent draw {k}: {z} vs {first_c}"));
    }
    Ok(t)
}
