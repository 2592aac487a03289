//! Metropolis simulated annealing on Ising models.
//!
//! A run starts from a uniformly random assignment and performs `S` sweeps,
//! sweep `i` at inverse temperature `β_i` from the schedule. A sweep is `M`
//! single-spin proposals at uniformly random sites, each accepted when
//! `ΔE ≤ 0` and otherwise with probability `exp(−β ΔE)`. `R` independent
//! runs use streams derived from the configured seed.
//!
//! The runtime model: with per-run success probability `w(S)`, reaching an
//! overall success probability `p` needs `R = ⌈ln(1 − p) / ln(1 − w)⌉`
//! repetitions, for a total time `T(S) = R · S`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::rng;
use crate::scalar::{spin, Real, Scalar};

/// Inverse-temperature schedule over the sweeps of one run.
#[derive(Clone, Debug, PartialEq)]
pub enum BetaSchedule<F> {
    /// `β` linear from `init` (first sweep) to `end` (last sweep).
    Linear { init: F, end: F },
    /// `β` geometric from `init` to `end`.
    Geometric { init: F, end: F },
    /// Explicit per-sweep values; the last value repeats if the run is longer.
    Custom(Vec<F>),
}

impl<F: Real> BetaSchedule<F> {
    /// `β_i` for sweep `i` of `sweeps`. A single-sweep run uses the final value.
    pub fn beta(&self, i: usize, sweeps: usize) -> F {
        let frac = if sweeps <= 1 {
            F::one()
        } else {
            F::from_usize(i).unwrap() / F::from_usize(sweeps - 1).unwrap()
        };
        match self {
            BetaSchedule::Linear { init, end } => *init + (*end - *init) * frac,
            BetaSchedule::Geometric { init, end } => *init * (*end / *init).powf(frac),
            BetaSchedule::Custom(values) => values[i.min(values.len() - 1)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            BetaSchedule::Linear { init, end } => *init >= F::zero() && end >= init,
            BetaSchedule::Geometric { init, end } => *init > F::zero() && end >= init,
            BetaSchedule::Custom(values) => {
                !values.is_empty() && values[0] >= F::zero() && values.windows(2).all(|w| w[1] >= w[0])
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("inverse temperature schedule must be non-negative and non-decreasing"))
        }
    }
}

/// Default schedule endpoints.
pub const DEFAULT_BETA_INIT: f64 = 0.05;
pub const DEFAULT_BETA_FINAL: f64 = 10.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SaConfig<F> {
    pub sweeps: usize,
    pub repetitions: usize,
    pub schedule: BetaSchedule<F>,
    pub seed: u64,
}

impl<F: Real> SaConfig<F> {
    pub fn new(sweeps: usize, repetitions: usize, seed: u64) -> Self {
        Self {
            sweeps,
            repetitions,
            schedule: BetaSchedule::Linear {
                init: F::from_f64(DEFAULT_BETA_INIT).unwrap(),
                end: F::from_f64(DEFAULT_BETA_FINAL).unwrap(),
            },
            seed,
        }
    }

    pub fn with_schedule(mut self, schedule: BetaSchedule<F>) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.repetitions == 0 {
            return Err(Error::invalid("sweeps and repetitions must be at least 1"));
        }
        self.schedule.validate()
    }
}

/// Float copy of a model with adjacency lists for `O(degree)` flip costs.
#[derive(Clone, Debug)]
pub struct SaModel<F> {
    h: Vec<F>,
    adj: Vec<Vec<(usize, F)>>,
    offset: F,
}

impl<F: Real> SaModel<F> {
    pub fn new<T: Scalar>(model: &IsingModel<T>) -> Self {
        let float = model.cast::<F>();
        Self {
            h: float.h().to_vec(),
            adj: float.adjacency(),
            offset: *float.offset(),
        }
    }

    pub fn num_spins(&self) -> usize {
        self.h.len()
    }

    pub fn energy(&self, bits: &[bool]) -> F {
        let mut e = self.offset;
        for (i, hi) in self.h.iter().enumerate() {
            e = e + *hi * spin::<F>(bits[i]);
            for &(j, jij) in &self.adj[i] {
                if j > i {
                    e = e + jij * spin::<F>(bits[i]) * spin::<F>(bits[j]);
                }
            }
        }
        e
    }

    /// Energy change from flipping spin `i`.
    #[inline]
    pub fn flip_delta(&self, bits: &[bool], i: usize) -> F {
        let field = self.adj[i]
            .iter()
            .fold(self.h[i], |acc, &(j, jij)| acc + jij * spin::<F>(bits[j]));
        let two = F::one() + F::one();
        -(two * spin::<F>(bits[i]) * field)
    }
}

/// One sweep of `M` Metropolis proposals at inverse temperature `beta`.
/// Returns the number of accepted flips.
pub fn sweep<F: Real, R: Rng + ?Sized>(model: &SaModel<F>, bits: &mut [bool], beta: F, rng: &mut R) -> usize {
    let m = model.num_spins();
    let mut accepted = 0;
    for _ in 0..m {
        let i = rng.gen_range(0..m);
        let delta = model.flip_delta(bits, i);
        let accept = delta <= F::zero() || {
            let u = F::from_f64(rng.gen::<f64>()).unwrap();
            u < (-beta * delta).exp()
        };
        if accept {
            bits[i] = !bits[i];
            accepted += 1;
        }
    }
    accepted
}

/// Final assignment and energy of one run, seeded by `stream`.
pub fn single_run<F: Real>(model: &SaModel<F>, cfg: &SaConfig<F>, stream: u64) -> (Vec<bool>, F) {
    let mut rng = rng::stream(cfg.seed, stream);
    let mut bits: Vec<bool> = (0..model.num_spins()).map(|_| rng.gen()).collect();
    for i in 0..cfg.sweeps {
        sweep(model, &mut bits, cfg.schedule.beta(i, cfg.sweeps), &mut rng);
    }
    let e = model.energy(&bits);
    (bits, e)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaOutcome<F> {
    pub bits: Vec<bool>,
    pub energy: F,
    /// Final energy of every run, in run order.
    pub run_energies: Vec<F>,
}

/// Best of `R` independent runs of `S` sweeps.
pub fn anneal<T: Scalar, F: Real>(model: &IsingModel<T>, cfg: &SaConfig<F>) -> Result<SaOutcome<F>> {
    cfg.validate()?;
    let sa = SaModel::new(model);
    let mut best: Option<(Vec<bool>, F)> = None;
    let mut run_energies = Vec::with_capacity(cfg.repetitions);
    for run in 0..cfg.repetitions {
        let (bits, e) = single_run(&sa, cfg, run as u64);
        run_energies.push(e);
        if best.as_ref().is_none_or(|(_, b)| e < *b) {
            best = Some((bits, e));
        }
    }
    let (bits, energy) = best.expect("at least one run");
    Ok(SaOutcome {
        bits,
        energy,
        run_energies,
    })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let w = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (w + z2 / (2.0 * n)) / denom;
    let half = z / denom * (w * (1.0 - w) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// 95% two-sided normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq)]
pub struct SaStats<F> {
    pub runs: usize,
    pub successes: usize,
    /// Success fraction `w`.
    pub w: f64,
    /// Wilson 95% interval for `w`.
    pub ci: (f64, f64),
    pub best_energy: F,
    pub run_energies: Vec<F>,
}

/// Estimates `w(S)` as the fraction of `runs` independent runs whose final
/// state satisfies `is_success(bits, energy)`.
pub fn estimate_success_with<T: Scalar, F: Real>(
    model: &IsingModel<T>,
    cfg: &SaConfig<F>,
    runs: usize,
    mut is_success: impl FnMut(&[bool], F) -> bool,
) -> Result<SaStats<F>> {
    if runs == 0 {
        return Err(Error::invalid("runs must be at least 1"));
    }
    cfg.validate()?;
    let sa = SaModel::new(model);
    let mut successes = 0;
    let mut run_energies = Vec::with_capacity(runs);
    for run in 0..runs {
        let (bits, e) = single_run(&sa, cfg, run as u64);
        if is_success(&bits, e) {
            successes += 1;
        }
        run_energies.push(e);
    }
    let best_energy = run_energies.iter().copied().fold(F::infinity(), F::min);
    Ok(SaStats {
        runs,
        successes,
        w: successes as f64 / runs as f64,
        ci: wilson_interval(successes, runs, Z_95),
        best_energy,
        run_energies,
    })
}

/// Tolerance for comparing float run energies with the exact optimum.
pub const ENERGY_MATCH_TOLERANCE: f64 = 1e-9;

/// `w(S)` with "satisfactory" meaning the run ended at `optimal_energy`.
pub fn estimate_success<T: Scalar, F: Real>(
    model: &IsingModel<T>,
    cfg: &SaConfig<F>,
    runs: usize,
    optimal_energy: F,
) -> Result<SaStats<F>> {
    let tol = F::from_f64(ENERGY_MATCH_TOLERANCE).unwrap();
    estimate_success_with(model, cfg, runs, |_, e| (e - optimal_energy).abs() <= tol)
}

/// Repetitions and total time to reach overall success probability `p`.
pub fn total_time(sweeps: usize, w: f64, p: f64) -> Result<(u64, u64)> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("target probability must lie in (0, 1), got {p}")));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::invalid(format!("success probability must lie in [0, 1], got {w}")));
    }
    if w == 0.0 {
        return Err(Error::Unreachable("per-run success probability is zero".into()));
    }
    let reps = if w == 1.0 {
        1
    } else {
        ((1.0 - p).ln() / (1.0 - w).ln()).ceil().max(1.0) as u64
    };
    Ok((reps, reps * sweeps as u64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub sweeps: usize,
    pub w: f64,
    pub ci: (f64, f64),
    /// `(R, T)`, absent when `w = 0`.
    pub time: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOptimum {
    pub s_star: usize,
    pub t_star: u64,
    pub curve: Vec<SweepPoint>,
}

/// Picks the sweep count minimizing `T(S)` from pre-estimated `w(S)` values.
/// Ties go to the smaller `S`.
pub fn optimize_from_curve(points: &[(usize, f64, (f64, f64))], p: f64) -> Result<SweepOptimum> {
    if points.is_empty() {
        return Err(Error::invalid("sweep grid is empty"));
    }
    let mut curve = Vec::with_capacity(points.len());
    let mut best: Option<(usize, u64)> = None;
    for &(sweeps, w, ci) in points {
        let time = match total_time(sweeps, w, p) {
            Ok(rt) => Some(rt),
            Err(Error::Unreachable(_)) => None,
            Err(e) => return Err(e),
        };
        if let Some((_, t)) = time {
            let better = match best {
                None => true,
                Some((bs, bt)) => t < bt || (t == bt && sweeps < bs),
            };
            if better {
                best = Some((sweeps, t));
            }
        }
        curve.push(SweepPoint { sweeps, w, ci, time });
    }
    let (s_star, t_star) = best.ok_or_else(|| Error::Unreachable("w(S) = 0 at every grid point".into()))?;
    Ok(SweepOptimum { s_star, t_star, curve })
}

/// Estimates `w(S)` over `grid` with `runs` runs each and minimizes `T(S)`.
/// The schedule and seed come from `base`; its sweeps/repetitions are ignored.
pub fn optimize_sweeps<T: Scalar, F: Real>(
    model: &IsingModel<T>,
    grid: &[usize],
    runs: usize,
    optimal_energy: F,
    p: f64,
    base: &SaConfig<F>,
) -> Result<SweepOptimum> {
    let mut points = Vec::with_capacity(grid.len());
    for (n, &sweeps) in grid.iter().enumerate() {
        let cfg = SaConfig {
            sweeps,
            repetitions: 1,
            schedule: base.schedule.clone(),
            seed: rng::derive_seed(base.seed, n as u64),
        };
        let stats = estimate_success(model, &cfg, runs, optimal_energy)?;
        points.push((sweeps, stats.w, stats.ci));
    }
    optimize_from_curve(&points, p)
}
