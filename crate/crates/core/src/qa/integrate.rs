//! Time evolution under `i dψ/dt = H(t/T) ψ`.
//!
//! The anneal is integrated one unit of time at a time; inside each unit
//! segment an adaptive Dormand–Prince 5(4) pair controls the 2-norm of the
//! local error against the tolerance. The state is never renormalized: the
//! norm change across a segment is checked instead.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::qa::hamiltonian::AnnealHamiltonian;
use crate::qa::state::{Real, WaveState};
use crate::scalar::Scalar;

/// Default local error tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Linear schedule `s(t) = t/T` over an integer anneal time.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnealSchedule<F> {
    pub total_time: u64,
    /// Transverse weights `Δ_i` of the driver `Σ Δ_i σ^x_i`.
    pub delta: Vec<F>,
}

impl<F: Real> AnnealSchedule<F> {
    /// Driver `−Σ σ^x_i`, whose ground state is the uniform superposition.
    pub fn new(total_time: u64, num_spins: usize) -> Self {
        Self {
            total_time,
            delta: vec![-F::one(); num_spins],
        }
    }

    pub fn with_delta(total_time: u64, delta: Vec<F>) -> Self {
        Self { total_time, delta }
    }

    pub fn s_at(&self, t: F) -> F {
        t / F::from_u64(self.total_time).expect("time fits")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EvolveStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest `|‖ψ‖ − 1|` seen at a segment boundary.
    pub max_norm_drift: f64,
}

// Dormand–Prince coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

struct Stepper<'a, F> {
    ham: &'a AnnealHamiltonian<F>,
    inv_total: F,
    /// Energy subtracted from `H` during the current segment.
    offset: F,
    k: [Vec<Complex<F>>; 7],
    scratch: Vec<Complex<F>>,
    a: [[F; 6]; 7],
    c: [F; 7],
    e: [F; 7],
}

impl<'a, F: Real> Stepper<'a, F> {
    fn new(ham: &'a AnnealHamiltonian<F>, total_time: u64) -> Self {
        let dim = 1usize << ham.num_spins();
        let zero = Complex::new(F::zero(), F::zero());
        let f = |x: f64| F::from_f64(x).expect("coefficient fits");
        Self {
            ham,
            inv_total: F::one() / F::from_u64(total_time).expect("time fits"),
            offset: F::zero(),
            k: std::array::from_fn(|_| vec![zero; dim]),
            scratch: vec![zero; dim],
            a: A.map(|row| row.map(f)),
            c: C.map(f),
            e: E.map(f),
        }
    }

    fn rhs(&self, t: F, y: &[Complex<F>], out: &mut [Complex<F>]) {
        let s = (t * self.inv_total).min(F::one());
        self.ham
            .apply_offset_into(s, self.offset, Complex::new(F::zero(), -F::one()), y, out);
    }

    /// One trial step from `(t, y)` with `k[0] = f(t, y)` already filled.
    /// Leaves the candidate in `scratch` and `f(t+h, candidate)` in `k[6]`;
    /// returns the 2-norm of the error estimate.
    fn trial(&mut self, t: F, h: F, y: &[Complex<F>]) -> F {
        for stage in 1..7 {
            let (done, rest) = self.k.split_at_mut(stage);
            self.scratch.copy_from_slice(y);
            for (j, kj) in done.iter().enumerate() {
                let a = self.a[stage][j] * h;
                if a != F::zero() {
                    for (acc, k) in self.scratch.iter_mut().zip(kj) {
                        *acc = *acc + *k * a;
                    }
                }
            }
            let t_stage = t + self.c[stage] * h;
            let s = (t_stage * self.inv_total).min(F::one());
            self.ham
                .apply_offset_into(s, self.offset, Complex::new(F::zero(), -F::one()), &self.scratch, &mut rest[0]);
        }
        // stage 7 was evaluated at the fifth-order solution, which is what
        // `scratch` holds after the last loop iteration
        let e: Vec<(usize, F)> = (0..7).filter(|&j| self.e[j] != F::zero()).map(|j| (j, self.e[j] * h)).collect();
        let mut err = F::zero();
        for idx in 0..self.scratch.len() {
            let acc = e
                .iter()
                .fold(Complex::new(F::zero(), F::zero()), |acc, &(j, w)| acc + self.k[j][idx] * w);
            err = err + acc.norm_sqr();
        }
        err.sqrt()
    }
}

/// Integrates from the uniform superposition over `[0, T]`.
pub fn evolve<T: Scalar, F: Real>(model: &IsingModel<T>, sched: &AnnealSchedule<F>, tol: F) -> Result<WaveState<F>> {
    let ham = AnnealHamiltonian::new(model, &sched.delta)?;
    evolve_with(&ham, sched.total_time, tol).map(|(psi, _)| psi)
}

/// As [`evolve`] for a prebuilt Hamiltonian, also returning step statistics.
pub fn evolve_with<F: Real>(ham: &AnnealHamiltonian<F>, total_time: u64, tol: F) -> Result<(WaveState<F>, EvolveStats)> {
    if total_time == 0 {
        return Err(Error::invalid("anneal time T must be at least 1"));
    }
    if tol.partial_cmp(&F::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut psi = WaveState::<F>::uniform(ham.num_spins())?;
    let mut stats = EvolveStats::default();
    let mut stepper = Stepper::new(ham, total_time);
    let f = |x: f64| F::from_f64(x).expect("constant fits");
    let to_f64 = |x: F| x.to_f64().unwrap_or(f64::NAN);

    let mut h = (f(0.1) / (F::one() + ham.norm_bound())).min(F::one());
    let h_min = f(1e-12);
    let drift_bound = tol * f(10.0);
    let mut t = F::zero();
    let mut phase = 0.0f64;

    for segment in 0..total_time {
        let start_norm = psi.norm();
        // Integrate `H − ⟨H⟩` over the segment: the current state then
        // oscillates slowly, which lets the step size grow. The removed
        // term is a pure global phase, accumulated in `phase`.
        let mut k0 = std::mem::take(&mut stepper.k[0]);
        stepper.offset = F::zero();
        stepper.rhs(t, psi.amplitudes(), &mut k0);
        let energy = psi
            .amplitudes()
            .iter()
            .zip(&k0)
            .fold(F::zero(), |acc, (p, k)| acc - (p.conj() * k).im);
        let energy = energy / (start_norm * start_norm);
        for (k, p) in k0.iter_mut().zip(psi.amplitudes()) {
            *k = *k + *p * Complex::new(F::zero(), energy);
        }
        stepper.offset = energy;
        stepper.k[0] = k0;
        phase += to_f64(energy);
        let end = F::from_u64(segment + 1).expect("time fits");
        while t < end {
            let remaining = end - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            let err = stepper.trial(t, step, psi.amplitudes());
            if err <= tol {
                psi.amplitudes_mut().copy_from_slice(&stepper.scratch);
                stepper.k.swap(0, 6);
                t = if last { end } else { t + step };
                stats.accepted_steps += 1;
            } else {
                stats.rejected_steps += 1;
            }
            let factor = if err == F::zero() {
                f(5.0)
            } else {
                (f(0.9) * (tol / err).powf(f(0.2))).max(f(0.2)).min(f(5.0))
            };
            // a clipped final step says nothing about the natural step size
            if !(last && err <= tol) || factor < F::one() {
                h = step * factor;
            }
            if h < h_min {
                return Err(Error::IntegrationFailure {
                    time: to_f64(t),
                    drift: to_f64(err),
                    bound: to_f64(tol),
                });
            }
        }
        let drift = (psi.norm() - start_norm).abs();
        let total_drift = to_f64((psi.norm() - F::one()).abs());
        stats.max_norm_drift = stats.max_norm_drift.max(total_drift);
        if drift > drift_bound {
            return Err(Error::IntegrationFailure {
                time: to_f64(end),
                drift: to_f64(drift),
                bound: to_f64(drift_bound),
            });
        }
    }
    // restore the global phase of the subtracted offsets
    let phase = Complex::new(f(phase.cos()), f(-phase.sin()));
    for a in psi.amplitudes_mut() {
        *a = *a * phase;
    }
    Ok((psi, stats))
}
