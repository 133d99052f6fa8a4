//! Fractional reaction and diffusion kinetics: Mittag-Leffler special
//! functions, product-integration fractional operators, series and direct
//! solvers for fractional reaction equations, fundamental solutions of the
//! time-fractional diffusion equation, and numerical Laplace transforms.

// `!(x > 0.0)` is used throughout to reject NaN along with nonpositive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diffusion;
pub mod error;
pub mod frac_ops;
pub mod laplace_lab;
pub mod quad;
pub mod reaction;
pub mod special_fn;
pub mod summation;
pub mod verify;

pub use error::{Error, Result};
