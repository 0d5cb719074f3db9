//! Lower and upper posterior expectations of common-cause failure rates.
//!
//! Reliability models for systems of `k` redundant components track the
//! rates `q_j` at which groups of exactly `j` components fail together.
//! This crate estimates those rates from two data channels (counts of
//! failure events by multiplicity, and a component's failure count over an
//! exposure time) under the alpha-factor parametrization, using sets of
//! conjugate priors rather than single priors. The result of every
//! inference is an interval: the lower and upper posterior expectation over
//! the prior set.
//!
//! The pieces:
//!
//! - [`model`]: exact conversions between basic event rates, alpha factors,
//!   and the marginal rate.
//! - [`conjugate`]: Dirichlet-multinomial and Gamma-Poisson updating with
//!   closed-form moments.
//! - [`imprecise`]: hyperparameter boxes, closed-form posterior expectation
//!   bounds, and hypothetical-data elicitation tables.
//! - [`taylor`]: series approximation of the rate map `g_j` with a
//!   one-sided, certified remainder.
//! - [`optimize`]: deterministic box-constrained search for the extreme
//!   posterior expectations over a Dirichlet box.
//! - [`rate`]: the end-to-end report combining everything into failure-rate
//!   intervals.

pub mod conjugate;
pub mod error;
pub mod imprecise;
pub mod interval;
pub mod model;
pub mod optimize;
pub mod poly;
pub mod rate;
pub mod taylor;

pub use error::{Error, Result};
pub use interval::Interval;
pub use model::{
    AlphaFactors, BasicParams, MarginalRate, SystemSize, MAX_COMPONENTS, SIMPLEX_TOLERANCE,
};
