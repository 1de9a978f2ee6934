//! Exact likelihood analysis of selective disclosure games.
//!
//! An informed party (a game-show host, a prison guard, a news report)
//! discloses part of what it knows under fixed rules. Each such game is a
//! [`DiscreteModel`]: a table `P(y | θ)` of exact rationals with one column
//! per hidden parameter and one row per observation. Reading a row gives the
//! likelihood of θ; its argmax drives the switch/stay decision.
//!
//! - [`rational`]: exact arithmetic.
//! - [`rng`]: seeded ChaCha8 streams and exact categorical sampling.
//! - [`model`]: tables, likelihood, MLE, decisions.
//! - [`scenarios`]: the built-in games.
//! - [`dsl`]: the `.sdg` text format.
//! - [`analysis`]: priors, posteriors, win probabilities, consent analysis.
//! - [`simulate`]: Monte Carlo checks against the exact numbers.

pub mod analysis;
pub mod dsl;
pub mod model;
pub mod rational;
pub mod rng;
pub mod scenarios;
pub mod simulate;

pub use analysis::{
    compare_evidence, consent_table, mutual_consent, posterior, win_probability, AnalysisError,
    Policy, Prior, Willingness,
};
pub use model::{Decision, DiscreteModel, LikelihoodVector, ModelError, RawModel, Verdict};
pub use rational::{ratio, Rational, RationalError};
pub use rng::{sample_categorical, SampleError, SeededRng, WeightedSampler};
pub use scenarios::{HostBias, Prisoner, PromiseSet, ScenarioRef};
pub use simulate::{simulate, simulate_joint, SimulationError, SimulationReport};
