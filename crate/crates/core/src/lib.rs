//! Exact lattice distributions of weighted Bernoulli sums, Gaussian
//! local-limit approximants with explicit error functionals, and a set of
//! number-theoretic experiments built on them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod asllt;
pub mod cli;
pub mod dickman;
pub mod diophantine;
pub mod error;
pub mod fourier;
pub mod gaussian;
pub mod model;
pub mod partition;
pub mod progressions;
pub mod pmf;
pub mod quad;
pub mod reduction;
pub mod report;

pub use arith::{ArithmeticMode, ExtFloat, Mass};
pub use error::{Error, Result};
pub use fourier::{char_fn, invert, FourierInverter, QuadratureSpec};
pub use model::WeightedBernoulliModel;
pub use pmf::{exact_pmf, maximal_span, LatticePmf, Pmf};
pub use reduction::{decompose_bernoulli, DecompositionSpec};
