//! Scalar Gaussian kernel, log-space arithmetic and the random-stream contract
//! shared by every sampler in the workspace.

mod error;
mod kernel;
mod logspace;
mod rng;

pub use error::{Error, Result};
pub use kernel::{gauss_logpdf, gauss_pdf, ln_kernel, GaussParams, LN_SQRT_2PI};
pub use logspace::{log_sum_exp, LogAccumulator, SignedLogSum};
pub use rng::{rng_stream, standard_normal, PathRng, SourceRng};
