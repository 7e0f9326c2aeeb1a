//! Numerical laboratory for the weighted one-dimensional p-Laplacian:
//! first eigenvalues, the first nontrivial curve of the asymmetric (Fučík)
//! spectrum, and homogenization experiments for rapidly oscillating
//! periodic weights, with the explicit convergence-rate bounds of the
//! underlying theory wired in as executable checks.
//!
//! The pieces fit together as follows:
//!
//! * [`weights`] models the coefficient families m, n (periodic cells,
//!   x/eps scalings, affine drifts) with exact averages and bounds;
//! * [`oracles`] holds the constant-weight closed forms that every other
//!   solver is tested against;
//! * [`shoot`] is the high-accuracy reference solver (RK4 on the flux
//!   system plus bisection on monotone residuals);
//! * [`varfem`] solves the same problems variationally on P1 elements:
//!   Rayleigh minimization, a discrete mountain pass for the min-max
//!   value, and 1D node matching;
//! * [`bounds`] evaluates the theory's constants and inequalities;
//! * [`homog`] runs eps-sweeps against the averaged limit problem and fits
//!   empirical convergence rates;
//! * [`config`], [`report`], [`cli`] are the experiment front end.
//!
//! Start with the runnable examples (`cargo run --example eigenvalues`,
//! `--example fucik_curve`, `--example homog_sweep`, ...) or the `fucik1d`
//! binary driven by a TOML config.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod homog;
pub mod oracles;
pub mod problem;
pub mod report;
pub mod shoot;
pub mod varfem;
pub mod weights;

pub use error::{Error, Result};
pub use problem::{BoundaryCondition, FucikPoint, Interval, MethodTag, ProblemSpec};
pub use weights::{Weight, WeightKind};
