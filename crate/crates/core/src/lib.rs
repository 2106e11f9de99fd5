//! Sparse recovery with Orthogonal Matching Pursuit under general
//! perturbations: both the measurement vector and the sensing matrix may be
//! contaminated, and either the perturbed or the ideal matrix may be the one
//! the recoverer sees.
//!
//! The crate provides:
//!
//! - the pursuit itself with full per-iteration tracing ([`omp`]);
//! - exact restricted-isometry constants by subset enumeration, coherence,
//!   and randomized cross-checks ([`rip`]);
//! - checkers for the closed-form support-recovery conditions (joint
//!   perturbation, noise-only specializations, strong-decaying relaxations,
//!   and ordered-recovery conditions) together with predicted error bounds
//!   ([`guarantees`]);
//! - an adversarial construction on which the pursuit provably picks a wrong
//!   column, demonstrating how tight the thresholds are
//!   ([`counterexample`]);
//! - brute-force oracles that validate the library against exhaustive search
//!   and grid minimization ([`oracle`]);
//! - a seeded, parallel Monte-Carlo harness with bit-deterministic CSV/JSON
//!   output ([`cli`]), exposed through the `omp-perturb` binary.
//!
//! Every runnable capability also ships as an example; see `examples/`.

pub mod cli;
pub mod counterexample;
pub mod error;
pub mod guarantees;
pub mod linalg;
pub mod omp;
pub mod oracle;
pub mod rip;
pub mod sensing;
pub mod signals;
mod subsets;

pub use error::{Error, Result};
pub use guarantees::{Guarantee, GuaranteeReport};
pub use linalg::SupportSet;
pub use omp::{omp_run, OmpTrace};
pub use rip::RipReport;
pub use sensing::{PerturbedProblem, Scenario};
pub use signals::SignalProfile;
