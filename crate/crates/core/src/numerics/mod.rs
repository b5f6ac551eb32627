//! Shared numerical kernel: splittable seeded RNG streams, adaptive
//! Gauss–Kronrod quadrature with infinite-range mappings, log-gamma and
//! binomial helpers, Gaussian-tail (Mills ratio) bounds and the
//! Kolmogorov–Smirnov test.

mod ks;
mod quad;
mod rng;
mod special;

pub use ks::{ks_test, ks_two_sample, KsResult};
pub use quad::{integrate, Domain, Quadrature, QuadratureSpec};
pub use rng::RngStream;
pub use special::{chi2_quantile, log_choose, log_gamma, mills_bounds, standard_normal_cdf, MillsBounds};
