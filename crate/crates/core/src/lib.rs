//! Discrete-time Hadamard-coined quantum walk on even cycles.
//!
//! - [`walk`]: state vectors, the one-step evolution, node distributions,
//!   running time averages and the distance from uniform.
//! - [`spectral`]: the closed-form eigensystem, degenerate classes and the
//!   limiting distribution by eigenspace projection.
//! - [`initial`]: single-node, degenerate-pair and quad initial states.
//! - [`analytic`]: closed-form limits and distances for those families.
//! - [`verify`]: the invariant suite run by the command-line `verify`.

pub mod analytic;
pub mod error;
pub mod initial;
pub mod spectral;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};
pub use initial::{InitialStateSpec, PairBranch};
pub use spectral::{EigenIndex, EigenPair, SpectralBasis};
pub use walk::{CycleParams, Distribution, TvdPoint, TvdSeries, WalkState};
