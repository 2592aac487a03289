use num_complex::Complex;

use crate::error::{Error, Result};
pub use crate::scalar::Real;

/// Largest register the state-vector simulator will allocate.
pub const MAX_SIMULATED_SPINS: usize = 20;

/// Amplitudes over the `2^M` computational basis states; bit `i` of a basis
/// index is spin `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveState<F> {
    num_spins: usize,
    amps: Vec<Complex<F>>,
}

impl<F: Real> WaveState<F> {
    fn check(num_spins: usize) -> Result<()> {
        if num_spins > MAX_SIMULATED_SPINS {
            return Err(Error::Capacity {
                what: "simulated spin count M",
                value: num_spins,
                limit: MAX_SIMULATED_SPINS,
            });
        }
        Ok(())
    }

    /// The uniform superposition `2^{-M/2} Σ_b |b⟩`.
    pub fn uniform(num_spins: usize) -> Result<Self> {
        Self::check(num_spins)?;
        let dim = 1usize << num_spins;
        let a = F::one() / F::from_usize(dim).expect("dimension fits").sqrt();
        Ok(Self {
            num_spins,
            amps: vec![Complex::new(a, F::zero()); dim],
        })
    }

    pub fn basis(num_spins: usize, state: usize) -> Result<Self> {
        Self::check(num_spins)?;
        let dim = 1usize << num_spins;
        if state >= dim {
            return Err(Error::invalid(format!("basis state {state} outside 0..{dim}")));
        }
        let mut amps = vec![Complex::new(F::zero(), F::zero()); dim];
        amps[state] = Complex::new(F::one(), F::zero());
        Ok(Self { num_spins, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex<F>>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(Error::invalid(format!("{dim} amplitudes is not a power of two")));
        }
        let num_spins = dim.trailing_zeros() as usize;
        Self::check(num_spins)?;
        Ok(Self { num_spins, amps })
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<F>] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex<F>] {
        &mut self.amps
    }

    pub fn norm(&self) -> F {
        self.amps.iter().fold(F::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }

    pub fn probability(&self, state: usize) -> F {
        self.amps[state].norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<F> {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(F::zero(), F::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> F {
        self.inner(other).norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_normalized() {
        let psi = WaveState::<f64>::uniform(5).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        assert!((psi.probability(7) - 1.0 / 32.0).abs() < 1e-15);
        let psi32 = WaveState::<f32>::uniform(3).unwrap();
        assert!((psi32.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn capacity_and_bounds() {
        assert!(matches!(WaveState::<f64>::uniform(21), Err(Error::Capacity { .. })));
        assert!(WaveState::<f64>::basis(2, 4).is_err());
        assert!(WaveState::<f64>::from_amplitudes(vec![Complex::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn fidelity_of_orthogonal_states() {
        let a = WaveState::<f64>::basis(2, 1).unwrap();
        let b = WaveState::<f64>::basis(2, 2).unwrap();
        assert_eq!(a.fidelity(&b), 0.0);
        assert_eq!(a.fidelity(&a), 1.0);
    }
}
