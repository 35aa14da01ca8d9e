//! Finite-t densities of the Lyapunov exponents.

mod exact;
mod joint;
mod model;
mod onepoint;
mod peaks;

pub use exact::{
    eigen_peak_exact, f_ab_exact, log_f_ab_exact, log_gamma_product_density, log_saddle_h_ab, saddle_h_ab,
    SaddlePeak,
};
pub use joint::{joint_density, JointKind, MAX_EXACT_JOINT_N, MAX_PERMANENT_JOINT_N};
pub use model::{DensityModel, ModelKind};
pub use onepoint::{
    density_beta4_radial, density_ev_exact, density_incremental_sv, density_sv_lyapunov, SvMethod, SvOnePoint,
};
pub use peaks::{
    cumulants_ab, deterministic_positions, eigen_cumulants_ab, eigen_prefactor, gaussian_peak, peak_index, PeakParams,
};
