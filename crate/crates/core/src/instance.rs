//! JSON descriptions of single objectives, for the command-line tools.
//!
//! ```json
//! { "kind": "layered_cut", "layers": 3, "width": 4, "seed": 1 }
//! { "kind": "tightness", "d": 6, "alpha": 0.5, "beta": 0.5 }
//! { "kind": "dimacs", "path": "graph.max" }
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dimacs::read_dimacs;
use crate::error::{Error, Result};
use crate::oracle::SetFunction;
use crate::zoo::gp::ItemCost;
use crate::zoo::regression::generate_regression;
use crate::zoo::{
    CutInstance, GpInstance, HardnessInstance, Modular, RandomTable, Regularizer, SolveMode,
    TightnessInstance,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSpec {
    Dimacs {
        path: PathBuf,
    },
    Cut {
        d: usize,
        /// `[u, v, w]` triples.
        edges: Vec<(usize, usize, f64)>,
        #[serde(default)]
        directed: bool,
        #[serde(default)]
        unary: Option<Vec<f64>>,
    },
    LayeredCut {
        layers: usize,
        width: usize,
        #[serde(default)]
        seed: u64,
    },
    TwoMoons {
        points: usize,
        labeled: usize,
        #[serde(default = "moon_noise")]
        noise: f64,
        #[serde(default = "one")]
        label_weight: f64,
        #[serde(default)]
        seed: u64,
    },
    Modular {
        weights: Vec<f64>,
    },
    RandomTable {
        d: usize,
        #[serde(default = "one")]
        bound: f64,
        #[serde(default)]
        seed: u64,
    },
    Tightness {
        d: usize,
        alpha: f64,
        beta: f64,
    },
    Hardness {
        d: usize,
        #[serde(default)]
        eps: Option<f64>,
        alpha: f64,
        delta: f64,
        #[serde(default)]
        seed: u64,
    },
    Regression {
        d: usize,
        n: usize,
        k: usize,
        lambda: f64,
        regularizer: Regularizer,
        #[serde(default = "noise_sigma")]
        noise_sigma: f64,
        #[serde(default = "ridge")]
        ridge: f64,
        #[serde(default)]
        seed: u64,
        #[serde(default)]
        solve_mode: SolveMode,
    },
    GpRbf {
        xs: Vec<f64>,
        lengthscale: f64,
        sigma2: f64,
        cost: ItemCost,
    },
}

fn moon_noise() -> f64 {
    0.1
}

fn one() -> f64 {
    1.0
}

fn noise_sigma() -> f64 {
    0.01
}

fn ridge() -> f64 {
    1e-3
}

impl InstanceSpec {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("instance: {e}")))
    }

    /// Builds the objective `H`.
    pub fn build(&self) -> Result<Box<dyn SetFunction>> {
        Ok(match self {
            InstanceSpec::Dimacs { path } => Box::new(read_dimacs(path)?.instance),
            InstanceSpec::Cut { d, edges, directed, unary } => {
                let c = if *directed {
                    CutInstance::directed(*d, edges)?
                } else {
                    CutInstance::undirected(*d, edges)?
                };
                match unary {
                    Some(u) => Box::new(c.with_unary(u)?),
                    None => Box::new(c),
                }
            }
            InstanceSpec::LayeredCut { layers, width, seed } => {
                Box::new(CutInstance::layered(*layers, *width, *seed)?)
            }
            InstanceSpec::TwoMoons { points, labeled, noise, label_weight, seed } => {
                Box::new(CutInstance::two_moons(*points, *labeled, *noise, *label_weight, *seed)?.0)
            }
            InstanceSpec::Modular { weights } => Box::new(Modular::new(weights.clone())),
            InstanceSpec::RandomTable { d, bound, seed } => Box::new(RandomTable::new(*d, *bound, *seed)?),
            InstanceSpec::Tightness { d, alpha, beta } => {
                Box::new(TightnessInstance::new(*d, *alpha, *beta)?.objective())
            }
            InstanceSpec::Hardness { d, eps, alpha, delta, seed } => {
                Box::new(HardnessInstance::new(*d, *eps, *alpha, *delta, *seed)?)
            }
            InstanceSpec::Regression {
                d,
                n,
                k,
                lambda,
                regularizer,
                noise_sigma,
                ridge,
                seed,
                solve_mode,
            } => {
                let p = generate_regression(*d, *n, *k, *noise_sigma, *ridge, regularizer.clone(), *seed)?;
                Box::new(p.instance.with_lambda(*lambda).objective(*solve_mode))
            }
            InstanceSpec::GpRbf { xs, lengthscale, sigma2, cost } => {
                Box::new(GpInstance::rbf_1d(xs, *lengthscale, *sigma2, cost.clone())?.objective())
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::Subset;

    #[test]
    fn parses_and_builds() {
        let spec: InstanceSpec =
            serde_json::from_str(r#"{"kind": "tightness", "d": 5, "alpha": 0.5, "beta": 0.5}"#).unwrap();
        let h = spec.build().unwrap();
        assert_eq!(h.dim(), 5);
        assert_eq!(h.value(Subset::from_indices(5, 1..5).unwrap()).unwrap(), -6.0);

        let spec: InstanceSpec = serde_json::from_str(
            r#"{"kind": "cut", "d": 2, "edges": [[0, 1, 1.0]]}"#,
        )
        .unwrap();
        assert_eq!(spec.build().unwrap().value(Subset::singleton(2, 0)).unwrap(), 1.0);

        let spec: InstanceSpec = serde_json::from_str(
            r#"{"kind": "regression", "d": 6, "n": 10, "k": 2, "lambda": 0.1,
                "regularizer": {"kind": "modified_range"}}"#,
        )
        .unwrap();
        assert_eq!(spec.build().unwrap().dim(), 6);
    }
}
