//! Set Cover with Pairs through Ising ground states.
//!
//! The crate covers the whole pipeline:
//!
//! * [`scp`]: instances, exhaustive solving, cover checking and uniform
//!   random generation of dummy-free instances;
//! * [`ising`]: penalty gadgets and the reduction to an Ising Hamiltonian
//!   with exact rational coefficients, plus an exhaustive ground-state oracle;
//! * [`qa`]: state-vector simulation of the transverse-field anneal and the
//!   minimum anneal time search;
//! * [`sa`]: Metropolis simulated annealing and the sweeps/repetitions
//!   runtime model;
//! * [`chimera`]: Chimera hardware graphs, constructive minor embeddings and
//!   an embedding verifier;
//! * [`scaling`]: ensembles, medians and exponent fits for runtime scaling.
//!
//! Numerics are generic over the scalar type. Exact work uses [`Rational`];
//! simulation uses `f64` (or `f32`). The aliases below name the common
//! instantiations.

pub mod chimera;
pub mod error;
pub mod ising;
pub mod qa;
pub mod rng;
pub mod sa;
pub mod scalar;
pub mod scaling;
pub mod scp;

pub use error::{Error, Result};
pub use ising::{IsingModel, ReductionConfig, VariableLayout};
pub use scalar::Scalar;
pub use scp::{CoverSolution, ScpInstance};

/// Exact coefficient type.
pub type Rational = num_rational::Ratio<i64>;

/// Ising model with exact rational coefficients.
pub type ExactIsing = IsingModel<Rational>;
/// Ising model in double precision.
pub type IsingF64 = IsingModel<f64>;
/// Ising model in single precision.
pub type IsingF32 = IsingModel<f32>;

pub type WaveStateF64 = qa::WaveState<f64>;
pub type WaveStateF32 = qa::WaveState<f32>;
pub type AnnealScheduleF64 = qa::AnnealSchedule<f64>;
pub type SaConfigF64 = sa::SaConfig<f64>;
