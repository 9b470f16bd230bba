//! Objective instances: graph cuts, concave-of-cardinality witnesses, the
//! tightness and hardness constructions, structured-sparsity regression and
//! Gaussian-process variance reduction.

pub mod concave;
pub mod cut;
pub mod gp;
pub mod hardness;
pub mod modular;
pub mod random;
pub mod regression;
pub mod tightness;

pub use concave::ConcaveCardinality;
pub use cut::CutInstance;
pub use gp::{GpInstance, ItemCost};
pub use hardness::HardnessInstance;
pub use modular::{Cardinality, Modular};
pub use random::RandomTable;
pub use regression::{Regularizer, RegressionInstance, SolveMode};
pub use tightness::TightnessInstance;
