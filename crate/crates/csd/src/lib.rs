//! # csd — Copula-Stein discrepancy
//!
//! Dependence-aware goodness-of-fit testing on the unit hypercube. Given a
//! target copula C₀ with score s(u) = ∇ log c₀(u) and a separable base
//! kernel k, the Stein kernel
//!
//! ```text
//! k_{C₀}(u,v) = s(u)ᵀs(v)·k + s(u)ᵀ∇_v k + s(v)ᵀ∇_u k + tr(∇_u∇_vᵀk)
//! ```
//!
//! has zero mean under C₀ in each argument, so the V-statistic
//! (1/n²)ΣΣ k_{C₀}(U_i,U_j) measures how far a sample's dependence structure
//! is from the target — and it is sensitive to features such as tail
//! dependence that plain two-sample statistics wash out.
//!
//! The crate provides:
//!
//! * [`generators`] — Archimedean generator families (Clayton, Gumbel,
//!   Frank, Independence) with high-order derivative ratios via Taylor jets
//!   in sign–log arithmetic;
//! * [`models`] — Archimedean, Gaussian and mixture copulas exposing
//!   `log_density` and `score`;
//! * [`kernel`] / [`stein`] — the RBF base kernel bundle and the O(d)
//!   Stein kernel evaluator;
//! * [`estimator`] — exact, streaming and wild-bootstrap inference;
//! * [`rf`] — a near-linear random-feature approximation;
//! * [`sampling`] — exact frailty/Cholesky samplers for every supported
//!   model, plus [`tau`] for rank correlation;
//! * [`bench`] — reproducible scaling and power studies;
//! * [`oracle`] — finite-difference and brute-force verification paths used
//!   by the test suites and the `csd self-check` command.
//!
//! ## Quick start
//!
//! ```
//! use csd::generators::GeneratorSpec;
//! use csd::models::CopulaModel;
//! use csd::kernel::BaseKernelSpec;
//! use csd::stein::SteinKernelEvaluator;
//! use csd::estimator::{csd_v_statistic, wild_bootstrap_test, BootstrapOptions};
//! use csd::sampling::{sample, SamplerConfig};
//!
//! // Target: bivariate Clayton with theta = 2.
//! let target = CopulaModel::archimedean(GeneratorSpec::clayton(2.0)?, 2)?;
//! let eval = SteinKernelEvaluator::new(target.clone(), BaseKernelSpec::rbf(0.5)?);
//!
//! // Data actually drawn from the target: small discrepancy, test accepts.
//! let data = sample(&SamplerConfig { model: target.clone(), n: 200, seed: 7 })?;
//! let estimate = csd_v_statistic(&data, &eval)?;
//! assert!(estimate.csd_sq < 1.0);
//!
//! let report = wild_bootstrap_test(
//!     &data,
//!     &eval,
//!     &BootstrapOptions { draws: 200, alpha: 0.05, seed: 1, ..Default::default() },
//! )?;
//! assert!(!report.reject);
//! # Ok::<(), csd::error::CsdError>(())
//! ```

pub mod bench;
pub mod error;
pub mod guide;
pub mod estimator;
pub mod generators;
pub mod jet;
pub mod kahan;
pub mod kernel;
pub mod linalg;
pub mod logsign;
pub mod models;
pub mod normal;
pub mod oracle;
pub mod rf;
pub mod rng;
pub mod sampling;
pub mod stein;
pub mod tau;

pub use error::{CsdError, Result};
pub use estimator::{
    csd_streaming, csd_v_statistic, pseudo_observations, wild_bootstrap_test, BootstrapOptions,
    CsdEstimate, EstimateMethod, PseudoSample, TestReport,
};
pub use generators::{Family, GeneratorSpec};
pub use kernel::{median_bandwidth, BaseKernelSpec, KernelKind};
pub use models::{CopulaModel, ScoreVector};
pub use rf::{draw_basis, draw_basis_for, rf_csd, FeatureBasis};
pub use sampling::{sample, SamplerConfig};
pub use stein::SteinKernelEvaluator;
pub use tau::kendall_tau;
