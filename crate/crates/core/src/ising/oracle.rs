//! Exhaustive ground-state search.

use num_integer::lcm;

use crate::error::{Error, Result};
#[cfg(test)]
use crate::scalar::spin;
use crate::scalar::Scalar;
use crate::{IsingModel, Rational};

/// Largest model the exhaustive oracle will enumerate.
pub const MAX_EXHAUSTIVE_SPINS: usize = 24;

/// Minimum energy and every basis state attaining it (bit `i` = spin `i`).
#[derive(Clone, Debug, PartialEq)]
pub struct GroundStates<T> {
    pub energy: T,
    pub states: Vec<u64>,
}

/// Expands a basis-state index into per-spin bits.
pub fn state_bits(state: u64, num_spins: usize) -> Vec<bool> {
    (0..num_spins).map(|i| state >> i & 1 == 1).collect()
}

/// Walks all `2^M` states in Gray-code order, updating the energy with the
/// single-flip difference. Exact for exact scalars; float scalars accumulate
/// rounding, so prefer [`exact_ground_states`] for certification.
pub fn ground_states_exhaustive<T: Scalar>(model: &IsingModel<T>) -> Result<GroundStates<T>> {
    let m = model.num_spins();
    if m > MAX_EXHAUSTIVE_SPINS {
        return Err(Error::Capacity {
            what: "spin count M",
            value: m,
            limit: MAX_EXHAUSTIVE_SPINS,
        });
    }
    let adj = model.adjacency();
    let mut p: Vec<T> = vec![T::one(); m];
    // local field f_i = h_i + Σ_j J_ij p_j
    let mut field: Vec<T> = (0..m)
        .map(|i| adj[i].iter().fold(model.h()[i].clone(), |acc, (_, j)| acc + j.clone()))
        .collect();
    let mut energy = model.energy_of_state(0);
    let mut state = 0u64;
    let mut best = GroundStates {
        energy: energy.clone(),
        states: vec![0],
    };
    let two = T::one() + T::one();
    for step in 1u64..(1u64 << m) {
        let i = step.trailing_zeros() as usize;
        energy = energy - two.clone() * p[i].clone() * field[i].clone();
        p[i] = -p[i].clone();
        let dp = two.clone() * p[i].clone();
        for (j, jij) in &adj[i] {
            field[*j] = field[*j].clone() + jij.clone() * dp.clone();
        }
        state ^= 1 << i;
        if energy < best.energy {
            best.energy = energy.clone();
            best.states.clear();
            best.states.push(state);
        } else if energy == best.energy {
            best.states.push(state);
        }
    }
    best.states.sort_unstable();
    Ok(best)
}

/// Exact oracle for rational models: clears denominators and enumerates in
/// `i64`.
pub fn exact_ground_states(model: &IsingModel<Rational>) -> Result<GroundStates<Rational>> {
    let denom = model
        .h()
        .iter()
        .chain(model.couplings().map(|(_, _, v)| v))
        .chain(std::iter::once(model.offset()))
        .fold(1i64, |acc, q| lcm(acc, *q.denom()));
    let scaled = model.map(|q| (q * Rational::from_integer(denom)).to_integer());
    let found = ground_states_exhaustive(&scaled)?;
    Ok(GroundStates {
        energy: Rational::new(found.energy, denom),
        states: found.states,
    })
}

/// `ΔE` for flipping spin `i` in an assignment with spin values `p`.
#[cfg(test)]
pub(crate) fn flip_delta<T: Scalar>(model: &IsingModel<T>, adj: &[Vec<(usize, T)>], bits: &[bool], i: usize) -> T {
    let field = adj[i]
        .iter()
        .fold(model.h()[i].clone(), |acc, (j, jij)| acc + jij.clone() * spin::<T>(bits[*j]));
    let two = T::one() + T::one();
    -(two * spin::<T>(bits[i]) * field)
}
