//! Ising models, penalty gadgets, the SCP reduction and exhaustive oracles.

pub mod gadgets;
pub mod model;
pub mod oracle;
pub mod reduce;

pub use gadgets::{gadget_and, gadget_leq, gadget_or, projector_one, projector_zero, GadgetTerms};
pub use model::{parse_rational, IsingModel};
pub use oracle::{exact_ground_states, ground_states_exhaustive, state_bits, GroundStates, MAX_EXHAUSTIVE_SPINS};
pub use reduce::{reduce, spin_count, ReductionConfig, SpinLabel, VariableLayout};
