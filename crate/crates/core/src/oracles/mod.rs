//! Independent brute-force computations used to cross-check the formula modules.

pub mod continuum;
pub mod dedekind;
pub mod green;
pub mod twisted;
pub mod vinf;

pub use continuum::{
    continuum_space_dim, negative_divisor_equality_experiment, riemann_roch_experiment, rrl_gap_experiment,
    ContinuumBasisFunction, ContinuumGrowth, NegativeDivisorReport, RiemannRochReport, RrlGapReport,
};
pub use dedekind::{dedekind_shifts, verify_certificate, DedekindCertificate};
pub use green::{green_function, truncated_l_dim_estimate, DecayFit, GreenFunction, TruncatedEstimate};
pub use twisted::{iterated_twisted_difference, twisted_difference, SampledFunction};
pub use vinf::{vinf_dim_oracle, FloquetPolynomialBasis, VinfOracle};
