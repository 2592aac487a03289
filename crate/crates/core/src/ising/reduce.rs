//! SCP → Ising reduction.
//!
//! Spins are laid out as all selection spins `s_1..s_m`, then the pair spins
//! `t_ij^(k)` grouped by ground element (pairs in lexicographic order), then
//! the OR-chain auxiliaries `x_1^(k)..x_{r_k-1}^(k)` grouped by ground element.
//!
//! The Hamiltonian is `α Σ_i |1⟩⟨1|_{s_i} + Σ_k H_k + Σ LEQ(t, s)`, where
//! `H_k` chains OR gadgets `x_1 = t_1 ∨ t_2`, `x_j = x_{j-1} ∨ t_{j+1}` and
//! penalizes `x_{r_k-1} = 0`. With a single covering pair the penalty sits on
//! that pair's `t` directly.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::ising::gadgets::{gadget_leq, gadget_or, projector_one, projector_zero};
use crate::scalar::Scalar;
use crate::scp::{pair_cover_map, CoverSolution, ScpInstance};
use crate::{IsingModel, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionConfig<T = Rational> {
    /// Weight of the objective term, strictly between 0 and 1.
    pub alpha: T,
    /// Penalize the top of each OR chain being 0.
    pub enforce_top: bool,
}

impl<T: Scalar> Default for ReductionConfig<T> {
    fn default() -> Self {
        Self {
            alpha: T::ratio(1, 4),
            enforce_top: true,
        }
    }
}

/// Logical meaning of one spin. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpinLabel {
    /// `s_i`: cover object `f_i` is chosen.
    Select { i: usize },
    /// `t_ij^(k)`: the pair `{f_i, f_j}` is used for ground element `c_k`.
    Pair { i: usize, j: usize, k: usize },
    /// `x_j^(k)`: OR-chain auxiliary `j` of ground element `c_k`.
    Chain { j: usize, k: usize },
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinLabel::Select { i } => write!(f, "s{i}"),
            SpinLabel::Pair { i, j, k } => write!(f, "t{i}_{j}^{k}"),
            SpinLabel::Chain { j, k } => write!(f, "x{j}^{k}"),
        }
    }
}

/// Bijection between spin indices and logical variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableLayout {
    m: usize,
    pair_ranges: Vec<Range<usize>>,
    chain_ranges: Vec<Range<usize>>,
    labels: Vec<SpinLabel>,
}

impl VariableLayout {
    pub fn num_spins(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.pair_ranges.len()
    }

    pub fn labels(&self) -> &[SpinLabel] {
        &self.labels
    }

    pub fn label(&self, spin: usize) -> SpinLabel {
        self.labels[spin]
    }

    pub fn spin_of(&self, label: SpinLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Spin of `s_i` (1-based `i`).
    pub fn select_spin(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.m, "cover index {i} outside 1..={}", self.m);
        i - 1
    }

    /// Spins `t^(k)_1..t^(k)_{r_k}` of ground element `k`.
    pub fn pair_spins(&self, k: usize) -> Range<usize> {
        self.pair_ranges[k - 1].clone()
    }

    /// Spins `x^(k)_1..x^(k)_{r_k-1}` of ground element `k`.
    pub fn chain_spins(&self, k: usize) -> Range<usize> {
        self.chain_ranges[k - 1].clone()
    }

    /// `r_k` for every ground element.
    pub fn r_all(&self) -> Vec<usize> {
        self.pair_ranges.iter().map(|r| r.len()).collect()
    }

    /// The cover selected by an assignment.
    pub fn decode(&self, bits: &[bool]) -> Result<CoverSolution> {
        if bits.len() != self.num_spins() {
            return Err(Error::invalid(format!(
                "assignment has {} bits, layout has {} spins",
                bits.len(),
                self.num_spins()
            )));
        }
        Ok(CoverSolution::new((1..=self.m).filter(|&i| bits[i - 1])))
    }

    /// As [`decode`](Self::decode) for a basis-state index.
    pub fn decode_state(&self, state: u64) -> CoverSolution {
        CoverSolution::new((1..=self.m).filter(|&i| state >> (i - 1) & 1 == 1))
    }

    /// The selection bits of a cover as a mask over spins `0..m`.
    pub fn select_mask(&self, cover: &CoverSolution) -> u64 {
        cover.chosen().iter().fold(0, |acc, &i| acc | 1 << (i - 1))
    }

    /// Lifts a cover to a full zero-penalty assignment: `t` on exactly the
    /// pairs inside the cover, `x` as the running OR.
    pub fn lift(&self, cover: &CoverSolution) -> Vec<bool> {
        let mut bits = vec![false; self.num_spins()];
        for &i in cover.chosen() {
            bits[i - 1] = true;
        }
        for k in 1..=self.n() {
            let ts = self.pair_spins(k);
            for t in ts.clone() {
                if let SpinLabel::Pair { i, j, .. } = self.labels[t] {
                    bits[t] = cover.contains(i) && cover.contains(j);
                }
            }
            let mut acc = ts.len() >= 2 && (bits[ts.start] || bits[ts.start + 1]);
            for (n, x) in self.chain_spins(k).enumerate() {
                if n > 0 {
                    acc = acc || bits[ts.start + n + 1];
                }
                bits[x] = acc;
            }
        }
        bits
    }
}

/// Builds `H_SCP` and its variable layout.
pub fn reduce<T: Scalar>(inst: &ScpInstance, cfg: &ReductionConfig<T>) -> Result<(IsingModel<T>, VariableLayout)> {
    if !(cfg.alpha > T::zero() && cfg.alpha < T::one()) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {:?}", cfg.alpha)));
    }
    let map = pair_cover_map(inst);
    let r = map.r_all();
    if let Some(k) = r.iter().position(|&rk| rk == 0) {
        return Err(Error::Infeasible(format!("ground element c{} is covered by no pair", k + 1)));
    }

    let m = inst.m();
    let mut labels: Vec<SpinLabel> = (1..=m).map(|i| SpinLabel::Select { i }).collect();
    let mut pair_ranges = Vec::with_capacity(inst.n());
    for k in 1..=inst.n() {
        let start = labels.len();
        labels.extend(map.covering(k).iter().map(|&(i, j)| SpinLabel::Pair { i, j, k }));
        pair_ranges.push(start..labels.len());
    }
    let mut chain_ranges = Vec::with_capacity(inst.n());
    for (k, &rk) in (1..=inst.n()).zip(&r) {
        let start = labels.len();
        labels.extend((1..rk).map(|j| SpinLabel::Chain { j, k }));
        chain_ranges.push(start..labels.len());
    }
    let layout = VariableLayout {
        m,
        pair_ranges,
        chain_ranges,
        labels,
    };

    let mut model = IsingModel::new(layout.num_spins());
    for i in 1..=m {
        projector_one::<T>(layout.select_spin(i))
            .scaled(&cfg.alpha)
            .add_to(&mut model)?;
    }
    for k in 1..=inst.n() {
        let ts: Vec<usize> = layout.pair_spins(k).collect();
        let xs: Vec<usize> = layout.chain_spins(k).collect();
        if ts.len() >= 2 {
            gadget_or::<T>(ts[0], ts[1], xs[0])?.add_to(&mut model)?;
            for j in 1..xs.len() {
                gadget_or::<T>(xs[j - 1], ts[j + 1], xs[j])?.add_to(&mut model)?;
            }
        }
        if cfg.enforce_top {
            let top = xs.last().copied().unwrap_or(ts[0]);
            projector_zero::<T>(top).add_to(&mut model)?;
        }
    }
    for k in 1..=inst.n() {
        for t in layout.pair_spins(k) {
            let SpinLabel::Pair { i, j, .. } = layout.label(t) else {
                unreachable!("pair range holds pair spins")
            };
            gadget_leq::<T>(t, layout.select_spin(i))?.add_to(&mut model)?;
            gadget_leq::<T>(t, layout.select_spin(j))?.add_to(&mut model)?;
        }
    }
    Ok((model, layout))
}

/// Spin count of the reduction without building it: `m + Σ r_k + Σ max(r_k − 1, 0)`.
pub fn spin_count(inst: &ScpInstance) -> usize {
    let r = pair_cover_map(inst).r_all();
    inst.m() + r.iter().sum::<usize>() + r.iter().map(|&x| x.saturating_sub(1)).sum::<usize>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn worked_layout() {
        let (model, layout) = reduce::<Rational>(&ScpInstance::worked_example(), &ReductionConfig::default()).unwrap();
        assert_eq!(model.num_spins(), 14);
        let labels: Vec<String> = layout.labels().iter().map(ToString::to_string).collect();
        assert_eq!(
            labels,
            [
                "s1", "s2", "s3", "s4", "t1_2^1", "t1_4^1", "t2_4^1", "t1_3^2", "t1_4^2", "t3_4^2", "x1^1", "x2^1",
                "x1^2", "x2^2"
            ]
        );
        assert_eq!(layout.spin_of(SpinLabel::Chain { j: 2, k: 2 }), Some(13));
    }

    #[test]
    fn worked_energies() {
        let inst = ScpInstance::worked_example();
        let (model, layout) = reduce::<Rational>(&inst, &ReductionConfig::default()).unwrap();
        assert_eq!(model.energy(&[false; 14]).unwrap(), q(2, 1));
        let solution = CoverSolution::new([1, 4]);
        let bits = layout.lift(&solution);
        // t14^1, t14^2 on, all x on
        let on: Vec<usize> = (0..14).filter(|&s| bits[s]).collect();
        assert_eq!(on, vec![0, 3, 5, 8, 10, 11, 12, 13]);
        assert_eq!(model.energy(&bits).unwrap(), q(1, 2));
        assert_eq!(layout.decode(&bits).unwrap(), solution);
    }

    #[test]
    fn decode_examples() {
        let (_, layout) = reduce::<Rational>(&ScpInstance::worked_example(), &ReductionConfig::default()).unwrap();
        assert_eq!(layout.decode(&[false; 14]).unwrap().size(), 0);
        let mut bits = [false; 14];
        bits[..4].fill(true);
        assert_eq!(layout.decode(&bits).unwrap().chosen(), &[1, 2, 3, 4]);
        assert!(layout.decode(&[false; 3]).is_err());
        assert_eq!(layout.decode_state(0b1001).chosen(), &[1, 4]);
    }

    #[test]
    fn single_pair_penalizes_t_directly() {
        let inst = ScpInstance::new(1, 2, [(1, 1), (2, 1)]).unwrap();
        let (model, layout) = reduce::<Rational>(&inst, &ReductionConfig::default()).unwrap();
        assert_eq!(layout.num_spins(), 3);
        assert!(layout.chain_spins(1).is_empty());
        // |0><0| on t plus the two LEQ terms
        assert_eq!(model.energy(&[false, false, false]).unwrap(), q(1, 1));
        assert_eq!(model.energy(&[true, true, true]).unwrap(), q(1, 2));
        assert_eq!(model.energy(&[true, false, true]).unwrap(), q(1, 1) + q(1, 4));
    }

    #[test]
    fn infeasible_and_bad_alpha() {
        let inst = ScpInstance::new(2, 2, [(1, 1), (2, 1), (1, 2)]).unwrap();
        assert!(matches!(
            reduce::<Rational>(&inst, &ReductionConfig::default()),
            Err(Error::Infeasible(_))
        ));
        let cfg = ReductionConfig {
            alpha: q(1, 1),
            enforce_top: true,
        };
        assert!(matches!(
            reduce(&ScpInstance::worked_example(), &cfg),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn spin_count_matches_layout() {
        for seed in 0..40 {
            let inst = crate::scp::gen_random_dummy_free(3, 4, seed).unwrap();
            if !inst.is_feasible() {
                continue;
            }
            let (_, layout) = reduce::<Rational>(&inst, &ReductionConfig::default()).unwrap();
            assert_eq!(layout.num_spins(), spin_count(&inst));
            assert!(layout.num_spins() <= inst.m() + inst.n() * inst.m() * (inst.m() - 1));
        }
    }
}
