//! Benchmarks for self-adjusting mutation rates in (1+1)-type evolutionary
//! algorithms on OneMax and LeadingOnes.
//!
//! - [`bitstring`], [`problem`], [`mutation`], [`step_size`]: search points,
//!   benchmark functions, the `mut_ℓ` operator and `Bin_{>0}(n, p)`.
//! - [`algorithms`]: RLS, the drift-maximizing RLS variants, the resampling
//!   (1+1) EA and the self-adjusting (1+1) EA.
//! - [`theory`]: exact drift, improvement probabilities, optimal step sizes
//!   and expected fixed-target times.
//! - [`experiments`]: seeded, thread-count independent batch experiments.

pub mod algorithms;
pub mod bitstring;
pub mod error;
pub mod experiments;
pub mod mutation;
pub mod problem;
pub mod rng;
pub mod step_size;
pub mod theory;

pub use algorithms::{
    run, Algorithm, AlgorithmConfig, Outcome, PreparedAlgorithm, Rate, RunRecord, TraceStep,
};
pub use bitstring::BitString;
pub use error::{Error, Result};
pub use problem::{ProblemInstance, ProblemKind};
pub use rng::{Purpose, RunRng, StreamKey};
