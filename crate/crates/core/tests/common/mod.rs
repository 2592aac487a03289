//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use scp_anneal::{IsingModel, Rational, ScpInstance};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Random model with small rational fields and couplings.
pub fn random_model<R: Rng>(m: usize, rng: &mut R) -> IsingModel<Rational> {
    let mut small = || q(rng.gen_range(-8..=8), rng.gen_range(1..=4));
    let h = (0..m).map(|_| small()).collect();
    let mut couplings = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            couplings.push((i, j, small()));
        }
    }
    IsingModel::from_parts(h, couplings, small()).unwrap()
}

/// Energy straight from the definition, bit `i` of `state` being spin `i`.
pub fn brute_energy(model: &IsingModel<Rational>, state: u64) -> f64 {
    let p = |i: usize| if state >> i & 1 == 1 { -1.0 } else { 1.0 };
    let mut e = to_f64(model.offset());
    for (i, h) in model.h().iter().enumerate() {
        e += to_f64(h) * p(i);
    }
    for (i, j, v) in model.couplings() {
        e += to_f64(v) * p(i) * p(j);
    }
    e
}

/// Dense real-symmetric `H(s) = (1 − s) Σ Δ_i σ^x_i + s H_P`.
pub fn dense_hamiltonian(model: &IsingModel<Rational>, delta: &[f64], s: f64) -> DMatrix<f64> {
    let m = model.num_spins();
    let dim = 1usize << m;
    let mut h = DMatrix::zeros(dim, dim);
    for b in 0..dim {
        h[(b, b)] = s * brute_energy(model, b as u64);
        for (i, d) in delta.iter().enumerate() {
            h[(b ^ (1 << i), b)] += (1.0 - s) * d;
        }
    }
    h
}

/// Exponential-midpoint stepping `ψ ← exp(−i H(t + dt/2) dt) ψ`, each
/// exponential taken through a symmetric eigendecomposition.
pub fn dense_evolve(model: &IsingModel<Rational>, delta: &[f64], total: f64, steps: usize) -> Vec<Complex64> {
    let dim = 1usize << model.num_spins();
    let amp = 1.0 / (dim as f64).sqrt();
    let mut psi = DVector::from_element(dim, Complex64::new(amp, 0.0));
    let dt = total / steps as f64;
    for n in 0..steps {
        let s = (n as f64 + 0.5) * dt / total;
        let eig = SymmetricEigen::new(dense_hamiltonian(model, delta, s));
        let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let phases = DVector::from_iterator(dim, eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l * dt)));
        let coeffs = v.adjoint() * &psi;
        psi = &v * coeffs.component_mul(&phases);
    }
    psi.iter().copied().collect()
}

pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    inner.norm_sqr()
}

/// Edge sets of the dummy-free bipartite graphs on `n` ground and `m` cover
/// vertices: every cover vertex picks a non-empty neighborhood.
pub fn all_dummy_free(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    let masks: Vec<u32> = (1..1u32 << n).collect();
    let mut out = vec![Vec::new()];
    for i in 1..=m {
        let mut next = Vec::new();
        for edges in &out {
            for &mask in &masks {
                let mut e: Vec<(usize, usize)> = edges.clone();
                e.extend((1..=n).filter(|k| mask >> (k - 1) & 1 == 1).map(|k| (i, k)));
                next.push(e);
            }
        }
        out = next;
    }
    out
}

/// Pearson statistic of generator draws against the uniform distribution
/// over all dummy-free graphs; returns `(statistic, degrees of freedom)`.
pub fn generator_chi_square(n: usize, m: usize, draws: u64, seed: u64) -> (f64, usize) {
    let graphs = all_dummy_free(n, m);
    let index: BTreeMap<Vec<(usize, usize)>, usize> = graphs.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let mut counts = vec![0u64; graphs.len()];
    for d in 0..draws {
        let inst = scp_anneal::scp::gen_random_dummy_free(n, m, scp_anneal::rng::derive_seed(seed, d)).unwrap();
        let edges: Vec<_> = inst.edges().collect();
        counts[index[&edges]] += 1;
    }
    let expected = draws as f64 / graphs.len() as f64;
    let stat = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    (stat, graphs.len() - 1)
}

/// Upper 0.001 critical value of chi-square with 8 degrees of freedom.
pub const CHI2_8_P001: f64 = 26.124;

/// Minimum cover size by plain enumeration of subsets, or `None`.
pub fn brute_min_cover(inst: &ScpInstance) -> Option<usize> {
    let m = inst.m();
    (0u32..1 << m)
        .filter(|mask| {
            (1..=inst.n()).all(|k| {
                let chosen: Vec<usize> = (1..=m).filter(|&i| mask >> (i - 1) & 1 == 1 && inst.has_edge(i, k)).collect();
                chosen.len() >= 2
            })
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
}
