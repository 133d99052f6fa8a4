//! Fractional integrals and derivatives of sampled data, and the weakly
//! singular convolution engine shared by the solvers.

mod convolution;
mod grid;
mod kernel;
mod operators;

pub use convolution::ConvolutionWeights;
pub use grid::{SampledFunction, TimeGrid, GRADED_DEPTH, GRADED_RATIO};
pub use kernel::{DerivativeKernel, FnKernel, MittagLefflerKernel, PowerKernel, SingularKernel};
pub use operators::{
    caputo_derivative_sampled, rl_integral_power, rl_integral_sampled, singular_convolve, CaputoOperator,
};
