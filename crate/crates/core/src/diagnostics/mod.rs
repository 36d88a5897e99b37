//! The convergence theory as executable checks. Every check is deterministic
//! given its seed and returns a [`CheckReport`].
//!
//! Each inequality check has a companion "broken" configuration (wrong
//! constant, wrong exponent, corrupted gradient) that must violate it; those
//! controls are reports built with [`CheckReport::expecting_violation`].

mod descent;
mod gti;
mod oracles;
mod rates;
mod report;
mod sampling;
mod stationary;
mod suite;

pub use descent::{check_descent_lemma, check_expectation_identities, check_sufficient_decrease, ExpectationReports};
pub use gti::{check_gti, estimate_gti_exponent, sample_gti, GtiSample};
pub use oracles::{check_gradient_fd, check_gradient_fd_with, check_prox_oracle, check_three_point, random_interior_points};
pub use rates::{
    check_rate_bounds, estimate_mu_sigma, reference_optimum, run_seeds, RateKind, RateReference, StrongConvexityInfo,
    MIN_RATE_SEEDS,
};
pub use report::{CheckReport, CheckStatus};
pub use stationary::check_stationarity_certificate;
pub use suite::{random_states, run_suite, SuiteOptions, CHECK_NAMES};
