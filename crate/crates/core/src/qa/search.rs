//! Minimum anneal time search.
//!
//! Doubling `T = 1, 2, 4, …` brackets the first time reaching the target,
//! then integer bisection narrows it. `p(T)` need not be monotone; the result
//! only guarantees `p(T*) ≥ target` and `p(T* − 1) < target` for the times
//! actually probed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::qa::hamiltonian::AnnealHamiltonian;
use crate::qa::integrate::evolve_with;
use crate::qa::state::Real;
use crate::qa::success::{success_probability, SuccessSpec};
use crate::scalar::Scalar;

/// Default target success probability.
pub const DEFAULT_TARGET: f64 = 0.25;

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealSearch {
    pub t_star: u64,
    pub p_at_t_star: f64,
    /// Every `(T, p(T))` evaluated, in probe order.
    pub probes: Vec<(u64, f64)>,
}

/// Runs the search against an arbitrary probability oracle.
pub fn search_min_time(target: f64, t_max: u64, mut p: impl FnMut(u64) -> Result<f64>) -> Result<AnnealSearch> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::invalid(format!("target probability must lie in (0, 1), got {target}")));
    }
    if t_max == 0 {
        return Err(Error::invalid("t_max must be at least 1"));
    }
    let mut probes = Vec::new();
    let mut cache = BTreeMap::new();
    let mut eval = |t: u64, probes: &mut Vec<(u64, f64)>| -> Result<f64> {
        if let Some(&v) = cache.get(&t) {
            return Ok(v);
        }
        let v = p(t)?;
        cache.insert(t, v);
        probes.push((t, v));
        Ok(v)
    };

    let mut lo = 0u64; // largest probed time known to miss (0 = none)
    let mut hi = None;
    let mut t = 1u64;
    loop {
        let v = eval(t, &mut probes)?;
        if v >= target {
            hi = Some(t);
            break;
        }
        lo = t;
        if t == t_max {
            break;
        }
        t = t.saturating_mul(2).min(t_max);
    }
    let Some(mut hi) = hi else {
        let (best_t, best_p) = probes
            .iter()
            .copied()
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
        return Err(Error::NotFound {
            target,
            t_max,
            best_t,
            best_p,
        });
    };
    while hi - lo > 1 && lo > 0 {
        let mid = lo + (hi - lo) / 2;
        if eval(mid, &mut probes)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p_at_t_star = cache[&hi];
    Ok(AnnealSearch {
        t_star: hi,
        p_at_t_star,
        probes,
    })
}

/// Smallest anneal time whose final state meets `target` under `spec`.
pub fn find_min_anneal_time<T: Scalar, F: Real>(
    model: &IsingModel<T>,
    delta: &[F],
    spec: &SuccessSpec,
    target: f64,
    t_max: u64,
    tol: F,
) -> Result<AnnealSearch> {
    let ham = AnnealHamiltonian::new(model, delta)?;
    search_min_time(target, t_max, |t| {
        let (psi, _) = evolve_with(&ham, t, tol)?;
        Ok(success_probability(&psi, spec)?.to_f64().unwrap_or(f64::NAN))
    })
}
