//! Real-argument special functions.

mod gamma;
mod mittag_leffler;
mod series;

pub use gamma::{gamma, is_gamma_pole, ln_gamma, ln_gamma_signed, pochhammer, recip_gamma, sin_pi};
pub use mittag_leffler::{
    ml_classical, ml_deriv_kernel, ml_deriv_kernel_regular, ml_generalized, ml_generalized_with,
    ml_two_param, MLParams, PrabhakarSeries,
};
pub use series::{sum_series, SeriesConfig, SeriesValue};
