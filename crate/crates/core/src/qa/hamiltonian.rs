use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::qa::state::{Real, WaveState, MAX_SIMULATED_SPINS};
use crate::scalar::Scalar;

/// Matrix-free `H(s) = (1 − s) Σ_i Δ_i σ^x_i + s H_P`.
///
/// `H_P` is held as its diagonal (the energy of every basis state), computed
/// once from the exact model. The transverse part gathers the `M`
/// single-bit-flip neighbors of each amplitude.
#[derive(Clone, Debug)]
pub struct AnnealHamiltonian<F> {
    num_spins: usize,
    diag: Vec<F>,
    delta: Vec<F>,
}

impl<F: Real> AnnealHamiltonian<F> {
    pub fn new<T: Scalar>(model: &IsingModel<T>, delta: &[F]) -> Result<Self> {
        let m = model.num_spins();
        if m > MAX_SIMULATED_SPINS {
            return Err(Error::Capacity {
                what: "simulated spin count M",
                value: m,
                limit: MAX_SIMULATED_SPINS,
            });
        }
        if delta.len() != m {
            return Err(Error::invalid(format!(
                "{} transverse weights for {m} spins",
                delta.len()
            )));
        }
        let float = model.cast::<f64>();
        let diag = (0..1u64 << m)
            .map(|b| F::from_f64(float.energy_of_state(b)).expect("energy representable"))
            .collect();
        Ok(Self {
            num_spins: m,
            diag,
            delta: delta.to_vec(),
        })
    }

    pub fn num_spins(&self) -> usize {
        self.num_spins
    }

    /// Energy of every basis state.
    pub fn diagonal(&self) -> &[F] {
        &self.diag
    }

    pub fn delta(&self) -> &[F] {
        &self.delta
    }

    /// Upper bound on the spectral radius of `H(s)` for any `s ∈ [0, 1]`.
    pub fn norm_bound(&self) -> F {
        let x = self.delta.iter().fold(F::zero(), |acc, d| acc + d.abs());
        let z = self.diag.iter().fold(F::zero(), |acc, e| acc.max(e.abs()));
        x.max(z)
    }

    /// `out = scale · H(s) ψ`.
    pub(crate) fn apply_into(&self, s: F, scale: Complex<F>, psi: &[Complex<F>], out: &mut [Complex<F>]) {
        self.apply_offset_into(s, F::zero(), scale, psi, out);
    }

    /// `out = scale · (H(s) − offset·I) ψ`.
    pub(crate) fn apply_offset_into(
        &self,
        s: F,
        offset: F,
        scale: Complex<F>,
        psi: &[Complex<F>],
        out: &mut [Complex<F>],
    ) {
        for ((o, p), e) in out.iter_mut().zip(psi).zip(&self.diag) {
            *o = *p * (*e * s - offset);
        }
        // σ^x_i pairs amplitudes differing in bit i: blocks of 2·2^i
        let driver = F::one() - s;
        for (i, d) in self.delta.iter().enumerate() {
            let w = *d * driver;
            if w == F::zero() {
                continue;
            }
            let stride = 1usize << i;
            for (oc, pc) in out.chunks_exact_mut(2 * stride).zip(psi.chunks_exact(2 * stride)) {
                let (o_lo, o_hi) = oc.split_at_mut(stride);
                let (p_lo, p_hi) = pc.split_at(stride);
                for (o, p) in o_lo.iter_mut().zip(p_hi) {
                    *o = *o + *p * w;
                }
                for (o, p) in o_hi.iter_mut().zip(p_lo) {
                    *o = *o + *p * w;
                }
            }
        }
        if scale != Complex::new(F::one(), F::zero()) {
            for o in out.iter_mut() {
                *o = *o * scale;
            }
        }
    }

    pub fn apply(&self, s: F, psi: &WaveState<F>) -> Result<WaveState<F>> {
        if psi.num_spins() != self.num_spins {
            return Err(Error::invalid(format!(
                "state has {} spins, Hamiltonian has {}",
                psi.num_spins(),
                self.num_spins
            )));
        }
        let mut out = psi.clone();
        self.apply_into(s, Complex::new(F::one(), F::zero()), psi.amplitudes(), out.amplitudes_mut());
        Ok(out)
    }

    /// `⟨ψ|H_P|ψ⟩` from the energy table.
    pub fn problem_energy(&self, psi: &WaveState<F>) -> F {
        psi.amplitudes()
            .iter()
            .zip(&self.diag)
            .fold(F::zero(), |acc, (a, e)| acc + a.norm_sqr() * *e)
    }
}

/// `H(s) ψ` for a model and transverse weights `delta`.
pub fn apply_hamiltonian<T: Scalar, F: Real>(
    model: &IsingModel<T>,
    delta: &[F],
    s: F,
    psi: &WaveState<F>,
) -> Result<WaveState<F>> {
    AnnealHamiltonian::new(model, delta)?.apply(s, psi)
}
