//! Minimization of approximately submodular set functions.
//!
//! Objectives are written as `H = F - G` over a ground set `V = {0, .., d-1}`,
//! where `F` is α-weakly DR-submodular and `G` is β-weakly DR-supermodular,
//! both normalized and non-decreasing. The solver only needs a value oracle
//! for `H`; the decomposition is used to certify the result.
//!
//! The main pieces:
//!
//! - [`set`] and [`oracle`]: bitmask subsets and counted value oracles.
//! - [`exhaustive`]: brute-force minimization and weak-DR parameter scans
//!   for small ground sets.
//! - [`lovasz`]: the Lovász extension, greedy (Edmonds) subgradients and
//!   superlevel-set rounding.
//! - [`pgm`]: the projected subgradient method over `[0,1]^d` with
//!   certificates.
//! - [`noise`]: noisy oracles, mean-of-m estimators and budget planning.
//! - [`zoo`]: cut functions, tightness and hardness constructions,
//!   structured-sparsity and Gaussian-process objectives.
//! - [`decomp`]: turning an arbitrary set function into `F - G`.
//! - [`numerics`]: small dense Cholesky and Jacobi eigen routines.
//! - [`experiment`], [`instance`], [`dimacs`], [`verify`]: the experiment driver behind the
//!   `submin` binary.
//!
//! ```
//! use submin::prelude::*;
//!
//! let cut = CutInstance::undirected(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
//! let oracle = Counted::new(cut);
//! let (set, value) = brute_force_min(&oracle).unwrap();
//! assert_eq!(value, 0.0);
//! assert!(set.is_empty());
//! ```

pub mod decomp;
pub mod dimacs;
pub mod error;
pub mod exhaustive;
pub mod instance;
pub mod experiment;
pub mod lovasz;
pub mod noise;
pub mod numerics;
pub mod oracle;
pub mod pgm;
pub mod set;
pub mod verify;
pub mod zoo;

pub use error::{Error, Result};

/// Commonly used items.
pub mod prelude {
    pub use crate::decomp::{decompose, decompose_exhaustive, violation_eps, Decomposition};
    pub use crate::error::{Error, Result};
    pub use crate::exhaustive::{
        brute_force_min, estimate_dr_parameters, DrParameters, Monotonicity,
    };
    pub use crate::lovasz::{
        greedy_subgradient, lovasz_value, order_coordinates, round_by_superlevel,
        FractionalPoint, GreedyVector, Ordering,
    };
    pub use crate::noise::{
        mean_estimator, minimize_noisy, plan_budget, wrap_noisy, NoiseDistribution, NoiseKind,
        NoiseSpec,
    };
    pub use crate::oracle::{marginal_gain, Counted, FnSetFunction, SetFunction, ValueOracle};
    pub use crate::pgm::{
        certificate_bound, empirical_alpha_beta, minimize, minimize_nonincreasing, project_box,
        Lipschitz, PgmConfig, PgmResult, StepRule,
    };
    pub use crate::set::{GroundSet, Subset};
    pub use crate::zoo::cut::CutInstance;
    pub use crate::zoo::modular::Modular;
}
