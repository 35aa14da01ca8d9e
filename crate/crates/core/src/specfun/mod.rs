//! Special functions and combinatorial kernels.

mod combinatorics;
mod gamma;
mod meijer;

pub use combinatorics::{
    fuss_catalan, hankel_cofactor, hankel_cofactor_direct, hankel_gamma_det, hankel_gamma_det_direct,
    log_hankel_gamma_det, permanent, MAX_HANKEL_N, MAX_PERMANENT_N,
};
pub use gamma::{log_gamma, polygamma, theta0, EULER_GAMMA};
pub use meijer::{log_meijer_g_t0, log_meijer_g_t0_with_error, meijer_g_t0, MeijerParams, MeijerValue};

pub(crate) use combinatorics::hankel_inverse_entry;
pub(crate) use gamma::{digamma, ln_gamma};
