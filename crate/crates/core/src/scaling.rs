//! Runtime scaling experiments: random ensembles bucketed by spin count,
//! per-instance optimal times for both solvers, medians and exponent fits.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::ising::{exact_ground_states, reduce, spin_count, ReductionConfig};
use crate::qa::{find_min_anneal_time, AnnealSchedule, AnnealSearch, SuccessSpec};
use crate::rng::derive_seed;
use crate::sa::{optimize_sweeps, SaConfig, SweepOptimum};
use crate::scp::{gen_random_dummy_free, pair_cover_map, ScpInstance};
use crate::Rational;

/// Instance of an ensemble; `id` is the generator draw that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub id: u64,
    pub instance: ScpInstance,
}

/// Feasible dummy-free instances grouped by spin count `M`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ensemble {
    pub buckets: BTreeMap<usize, Vec<Member>>,
}

impl Ensemble {
    /// Spin counts in `spins` holding fewer than `per_size` instances.
    pub fn short_sizes(&self, spins: &RangeInclusive<usize>, per_size: usize) -> Vec<usize> {
        spins
            .clone()
            .filter(|m| self.buckets.get(m).map_or(0, Vec::len) < per_size)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Member)> {
        self.buckets.iter().flat_map(|(&m, v)| v.iter().map(move |mem| (m, mem)))
    }
}

/// Default `(n, m)` shapes cycled through while drawing instances.
pub fn default_shapes() -> Vec<(usize, usize)> {
    (1..=4).flat_map(|n| (2..=6).map(move |m| (n, m))).collect()
}

/// Draws instances round-robin over `shapes` (draw `d` uses seed stream `d`)
/// and keeps feasible ones whose spin count lies in `spins`, until every
/// bucket holds `per_size` instances or `max_draws` draws are spent.
pub fn build_ensemble(
    spins: RangeInclusive<usize>,
    per_size: usize,
    shapes: &[(usize, usize)],
    seed: u64,
    max_draws: u64,
) -> Result<Ensemble> {
    if shapes.is_empty() {
        return Err(Error::invalid("no instance shapes given"));
    }
    let mut ens = Ensemble::default();
    if per_size == 0 {
        return Ok(ens);
    }
    let mut remaining: usize = spins.clone().count();
    for draw in 0..max_draws {
        if remaining == 0 {
            break;
        }
        let (n, m) = shapes[(draw % shapes.len() as u64) as usize];
        let inst = gen_random_dummy_free(n, m, derive_seed(seed, draw))?;
        if pair_cover_map(&inst).r_all().contains(&0) {
            continue;
        }
        let size = spin_count(&inst);
        if !spins.contains(&size) {
            continue;
        }
        let bucket = ens.buckets.entry(size).or_default();
        if bucket.len() < per_size {
            bucket.push(Member { id: draw, instance: inst });
            if bucket.len() == per_size {
                remaining -= 1;
            }
        }
    }
    Ok(ens)
}

/// Key shared exactly by instances that differ only by relabeling cover
/// objects and ground elements. Such instances reduce to permutation-equivalent
/// Hamiltonians, so every solver time is a function of the key.
///
/// Ground permutations are enumerated, so this is meant for small `n`.
pub fn isomorphism_key(inst: &ScpInstance) -> (usize, usize, Vec<u64>) {
    let (n, m) = (inst.n(), inst.m());
    let mut rows = vec![0u64; m];
    for (i, k) in inst.edges() {
        rows[i - 1] |= 1 << (k - 1);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    loop {
        let mut mapped: Vec<u64> = rows
            .iter()
            .map(|&r| (0..n).filter(|&k| r >> k & 1 == 1).fold(0, |acc, k| acc | 1 << perm[k]))
            .collect();
        mapped.sort_unstable();
        if best.as_ref().is_none_or(|b| mapped < *b) {
            best = Some(mapped);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (n, m, best.unwrap_or_default())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Minimum anneal time of one instance under the default driver.
pub fn qa_anneal_time(inst: &ScpInstance, target: f64, t_max: u64, tol: f64) -> Result<AnnealSearch> {
    let (model, layout) = reduce::<Rational>(inst, &ReductionConfig::default())?;
    let spec = SuccessSpec::minimum_covers(inst, &layout)?;
    let delta = AnnealSchedule::<f64>::new(1, model.num_spins()).delta;
    find_min_anneal_time(&model, &delta, &spec, target, t_max, tol)
}

/// Optimized simulated-annealing time of one instance; success means
/// reaching the exhaustive-oracle ground energy.
pub fn sa_anneal_time(
    inst: &ScpInstance,
    grid: &[usize],
    runs: usize,
    target: f64,
    base: &SaConfig<f64>,
) -> Result<SweepOptimum> {
    let (model, _) = reduce::<Rational>(inst, &ReductionConfig::default())?;
    let ground = exact_ground_states(&model)?.energy;
    let optimum = *ground.numer() as f64 / *ground.denom() as f64;
    optimize_sweeps(&model, grid, runs, optimum, target, base)
}

/// Median of a non-empty sample (mean of the middle two for even sizes).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() || values.iter().any(|v| v.is_nan()) {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

/// Per-size medians of `(M, T*)` samples, ordered by `M`.
pub fn medians_by_size(samples: impl IntoIterator<Item = (usize, f64)>) -> Vec<(usize, f64)> {
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (m, t) in samples {
        groups.entry(m).or_default().push(t);
    }
    groups
        .into_iter()
        .filter_map(|(m, ts)| median(&ts).map(|med| (m, med)))
        .collect()
}

/// Median of a sample in which `None` marks a value only known to exceed
/// some cap (e.g. an anneal time search that hit `t_max`). Censored values
/// sort above every observed one, so the result is exact whenever the middle
/// order statistics are observed; otherwise it is `None`.
pub fn censored_median(values: &[Option<f64>]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let observed: Vec<f64> = values.iter().flatten().copied().collect();
    let n = values.len();
    if observed.len() <= n / 2 {
        return None;
    }
    let mut v = observed;
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let mid = n / 2;
    Some(if n % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}

/// Per-size [`censored_median`]s, ordered by `M`.
pub fn censored_medians_by_size(samples: impl IntoIterator<Item = (usize, Option<f64>)>) -> Vec<(usize, Option<f64>)> {
    let mut groups: BTreeMap<usize, Vec<Option<f64>>> = BTreeMap::new();
    for (m, t) in samples {
        groups.entry(m).or_default().push(t);
    }
    groups.into_iter().map(|(m, ts)| (m, censored_median(&ts))).collect()
}

/// Least-squares line `log2 T = slope · M + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fits `log2(T)` against `M` by ordinary least squares.
pub fn fit_exponent(points: &[(usize, f64)]) -> Result<ExponentFit> {
    if points.iter().any(|&(_, t)| t.is_nan() || t <= 0.0) {
        return Err(Error::invalid("times must be positive to take logarithms"));
    }
    let xs: Vec<f64> = points.iter().map(|&(m, _)| m as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, t)| t.log2()).collect();
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return Err(Error::invalid("an exponent fit needs at least two sizes"));
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("an exponent fit needs at least two distinct sizes"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(ExponentFit {
        slope,
        intercept,
        r_squared,
        points: xs.len(),
    })
}
