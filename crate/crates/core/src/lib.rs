//! Finite-t Lyapunov exponents of products of Ginibre random matrices.
//!
//! The crate is organised as
//!
//! * [`rng`]: reproducible per-sample random streams and matrix ensembles;
//! * [`linalg`]: dense complex kernels, in particular log singular values and
//!   log eigenvalue moduli of long products without forming the product;
//! * [`specfun`]: log-gamma, polygamma, the Meijer G-function `G^{t,0}_{0,t}`
//!   and a few combinatorial kernels;
//! * [`laws`]: exact, Gaussian and saddle-point densities at finite `t`;
//! * [`montecarlo`]: experiment drivers, histograms and KS distances;
//! * [`asymptotic`]: the large-N laws.

pub mod asymptotic;
pub mod error;
pub mod laws;
pub mod linalg;
pub mod montecarlo;
pub mod quad;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, LogSpectrum, SpectrumKind};
pub use num_complex::Complex64;
