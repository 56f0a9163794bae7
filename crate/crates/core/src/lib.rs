//! Expectile-based measures of skewness and dispersion, numerical checkers
//! for stochastic orders, and asymptotic variances of scale estimators.

pub mod asymptotics;
pub mod distributions;
pub mod error;
pub mod expectiles;
pub mod quad;
pub mod orders;
pub mod roots;
pub mod simulation;
pub mod skewness;
pub mod special;

pub use distributions::{ContinuousModel, Level, Sample, ScaledBernoulli};
pub use error::{Error, Result};
