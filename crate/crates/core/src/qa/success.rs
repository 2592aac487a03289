use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ising::VariableLayout;
use crate::qa::state::{Real, WaveState};
use crate::scp::{all_minimum_covers, ScpInstance};

/// How the projected amplitude becomes a probability.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProbabilityConvention {
    /// `‖Πψ‖²` (Born rule).
    #[default]
    SquaredNorm,
    /// `‖Πψ‖`.
    Norm,
}

/// Projector onto basis states whose selection bits form a minimum cover.
/// Auxiliary bits are unconstrained.
#[derive(Clone, Debug, PartialEq)]
pub struct SuccessSpec {
    num_spins: usize,
    select_spins: Vec<usize>,
    /// Accepted selection patterns; bit `i-1` is `s_i`.
    patterns: BTreeSet<u64>,
    pub convention: ProbabilityConvention,
}

impl SuccessSpec {
    /// Accepts every minimum-size cover of `inst`.
    pub fn minimum_covers(inst: &ScpInstance, layout: &VariableLayout) -> Result<Self> {
        let covers = all_minimum_covers(inst)?;
        let patterns = covers.iter().map(|c| layout.select_mask(c)).collect();
        Ok(Self {
            num_spins: layout.num_spins(),
            select_spins: (1..=layout.m()).map(|i| layout.select_spin(i)).collect(),
            patterns,
            convention: ProbabilityConvention::default(),
        })
    }

    /// Accepts exactly the given basis-state patterns over `select_spins`.
    pub fn from_patterns(num_spins: usize, select_spins: Vec<usize>, patterns: impl IntoIterator<Item = u64>) -> Self {
        Self {
            num_spins,
            select_spins,
            patterns: patterns.into_iter().collect(),
            convention: ProbabilityConvention::default(),
        }
    }

    pub fn with_convention(mut self, convention: ProbabilityConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn patterns(&self) -> impl Iterator<Item = u64> + '_ {
        self.patterns.iter().copied()
    }

    fn pattern_of(&self, state: usize) -> u64 {
        self.select_spins
            .iter()
            .enumerate()
            .fold(0, |acc, (bit, &spin)| acc | ((state >> spin & 1) as u64) << bit)
    }

    pub fn contains(&self, state: usize) -> bool {
        self.patterns.contains(&self.pattern_of(state))
    }

    /// Number of supported basis states.
    pub fn support_size(&self) -> u64 {
        (self.patterns.len() as u64) << (self.num_spins - self.select_spins.len())
    }
}

pub fn success_probability<F: Real>(psi: &WaveState<F>, spec: &SuccessSpec) -> Result<F> {
    if spec.patterns.is_empty() {
        return Err(Error::Infeasible("success projector has empty support".into()));
    }
    if psi.num_spins() != spec.num_spins {
        return Err(Error::invalid(format!(
            "state has {} spins, success projector expects {}",
            psi.num_spins(),
            spec.num_spins
        )));
    }
    let width = spec.select_spins.len();
    let accepted: Vec<bool> = (0..1u64 << width).map(|p| spec.patterns.contains(&p)).collect();
    let contiguous = spec.select_spins.iter().enumerate().all(|(b, &s)| b == s);
    let mask = (1usize << width) - 1;
    let mut sum = F::zero();
    for (state, a) in psi.amplitudes().iter().enumerate() {
        let pattern = if contiguous { state & mask } else { spec.pattern_of(state) as usize };
        if accepted[pattern] {
            sum = sum + a.norm_sqr();
        }
    }
    Ok(match spec.convention {
        ProbabilityConvention::SquaredNorm => sum,
        ProbabilityConvention::Norm => sum.sqrt(),
    })
}
