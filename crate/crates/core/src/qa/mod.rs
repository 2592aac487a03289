//! State-vector simulation of the transverse-field anneal
//! `H(s) = (1 − s) H_B + s H_P` with `s = t/T`.

pub mod hamiltonian;
pub mod integrate;
pub mod search;
pub mod state;
pub mod success;

pub use hamiltonian::{apply_hamiltonian, AnnealHamiltonian};
pub use integrate::{evolve, evolve_with, AnnealSchedule, EvolveStats, DEFAULT_TOLERANCE};
pub use search::{find_min_anneal_time, search_min_time, AnnealSearch, DEFAULT_TARGET};
pub use state::{Real, WaveState, MAX_SIMULATED_SPINS};
pub use success::{success_probability, ProbabilityConvention, SuccessSpec};
