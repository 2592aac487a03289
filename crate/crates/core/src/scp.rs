//! Set Cover with Pairs instances.
//!
//! An instance is a bipartite graph between a ground set `U = {c_1..c_n}` and
//! a cover set `S = {f_1..f_m}`. A subset `A` of `S` is a cover when every
//! ground element is adjacent to at least two members of `A`. All indices
//! in the public API are 1-based, matching the instance file format.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Largest cover set the exhaustive solver will enumerate.
pub const MAX_EXACT_COVER_SET: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScpInstance {
    n: usize,
    m: usize,
    /// `(cover i, ground k)`, 1-based, sorted.
    edges: BTreeSet<(usize, usize)>,
}

impl ScpInstance {
    /// Builds an instance, rejecting out-of-range and duplicate edges.
    pub fn new(n: usize, m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, k) in edges {
            if i == 0 || i > m {
                return Err(Error::invalid(format!("cover index {i} outside 1..={m}")));
            }
            if k == 0 || k > n {
                return Err(Error::invalid(format!("ground index {k} outside 1..={n}")));
            }
            if !set.insert((i, k)) {
                return Err(Error::invalid(format!("duplicate edge ({i}, {k})")));
            }
        }
        Ok(Self { n, m, edges: set })
    }

    /// The four-object, two-element instance used throughout the docs:
    /// `c_1` is adjacent to `f_1, f_2, f_4` and `c_2` to `f_1, f_3, f_4`.
    pub fn worked_example() -> Self {
        Self::new(2, 4, [(1, 1), (2, 1), (4, 1), (1, 2), (3, 2), (4, 2)]).expect("valid literal")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, cover: usize, ground: usize) -> bool {
        self.edges.contains(&(cover, ground))
    }

    /// Every cover object touches at least one ground element.
    pub fn is_dummy_free(&self) -> bool {
        (1..=self.m).all(|i| self.edges.range((i, 0)..=(i, usize::MAX)).next().is_some())
    }

    /// Cover objects adjacent to ground element `k`, ascending.
    pub fn neighbors_of_ground(&self, k: usize) -> Vec<usize> {
        (1..=self.m).filter(|&i| self.has_edge(i, k)).collect()
    }

    /// A cover exists iff every ground element has at least two neighbors.
    pub fn is_feasible(&self) -> bool {
        (1..=self.n).all(|k| self.neighbors_of_ground(k).len() >= 2)
    }

    /// Per ground element, the bitmask of adjacent cover objects (bit `i-1`).
    fn ground_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n];
        for &(i, k) in &self.edges {
            masks[k - 1] |= 1 << (i - 1);
        }
        masks
    }
}

/// Subset of the cover set, 1-based indices kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverSolution {
    chosen: Vec<usize>,
}

impl CoverSolution {
    pub fn new(chosen: impl IntoIterator<Item = usize>) -> Self {
        let mut chosen: Vec<usize> = chosen.into_iter().collect();
        chosen.sort_unstable();
        chosen.dedup();
        Self { chosen }
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        Self {
            chosen: (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect(),
        }
    }

    pub fn chosen(&self) -> &[usize] {
        &self.chosen
    }

    pub fn size(&self) -> usize {
        self.chosen.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.chosen.binary_search(&i).is_ok()
    }
}

impl std::fmt::Display for CoverSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.chosen.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "f{i}")?;
        }
        write!(f, "}}")
    }
}

/// True iff every ground element is adjacent to two distinct chosen objects.
pub fn verify_cover(inst: &ScpInstance, cover: &CoverSolution) -> Result<bool> {
    if let Some(&bad) = cover.chosen.iter().find(|&&i| i == 0 || i > inst.m) {
        return Err(Error::invalid(format!("cover index {bad} outside 1..={}", inst.m)));
    }
    Ok((1..=inst.n).all(|k| cover.chosen.iter().filter(|&&i| inst.has_edge(i, k)).count() >= 2))
}

fn check_exact_capacity(inst: &ScpInstance) -> Result<()> {
    if inst.m > MAX_EXACT_COVER_SET {
        return Err(Error::Capacity {
            what: "cover set size m",
            value: inst.m,
            limit: MAX_EXACT_COVER_SET,
        });
    }
    if !inst.is_feasible() {
        return Err(Error::Infeasible("some ground element has fewer than two neighbors".into()));
    }
    Ok(())
}

/// Calls `visit` with each `size`-subset of `0..m` as a bitmask, in
/// lexicographic order of the sorted index lists. Stops when `visit` returns
/// false.
fn for_each_combination(m: usize, size: usize, mut visit: impl FnMut(u64) -> bool) {
    if size > m {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let mask = idx.iter().fold(0u64, |acc, &b| acc | 1 << b);
        if !visit(mask) {
            return;
        }
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < m - size + p) else {
            return;
        };
        idx[pos] += 1;
        for later in pos + 1..size {
            idx[later] = idx[later - 1] + 1;
        }
    }
}

fn mask_covers(masks: &[u64], chosen: u64) -> bool {
    masks.iter().all(|&g| (g & chosen).count_ones() >= 2)
}

/// Minimum-size cover, lexicographically smallest among ties.
pub fn solve_exact(inst: &ScpInstance) -> Result<CoverSolution> {
    check_exact_capacity(inst)?;
    let masks = inst.ground_masks();
    for size in 0..=inst.m {
        let mut found = None;
        for_each_combination(inst.m, size, |mask| {
            if mask_covers(&masks, mask) {
                found = Some(mask);
                false
            } else {
                true
            }
        });
        if let Some(mask) = found {
            return Ok(CoverSolution::from_mask(mask));
        }
    }
    unreachable!("feasible instance always has the full cover set as a cover")
}

/// Every minimum-size cover, in lexicographic order.
pub fn all_minimum_covers(inst: &ScpInstance) -> Result<Vec<CoverSolution>> {
    check_exact_capacity(inst)?;
    let masks = inst.ground_masks();
    for size in 0..=inst.m {
        let mut found = Vec::new();
        for_each_combination(inst.m, size, |mask| {
            if mask_covers(&masks, mask) {
                found.push(CoverSolution::from_mask(mask));
            }
            true
        });
        if !found.is_empty() {
            return Ok(found);
        }
    }
    unreachable!("feasible instance always has the full cover set as a cover")
}

/// Uniform sample from the `(2^n - 1)^m` dummy-free bipartite graphs.
///
/// Each cover object flips one fair coin per ground element; a row with no
/// heads is redrawn on its own until it attaches.
pub fn gen_random_dummy_free(n: usize, m: usize, seed: u64) -> Result<ScpInstance> {
    gen_random_dummy_free_with(n, m, &mut rng::rng(seed))
}

pub fn gen_random_dummy_free_with<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<ScpInstance> {
    if n == 0 || m == 0 {
        return Err(Error::invalid(format!(
            "dummy-free generation needs n >= 1 and m >= 1 (got n = {n}, m = {m})"
        )));
    }
    let mut edges = BTreeSet::new();
    for i in 1..=m {
        loop {
            let row: Vec<usize> = (1..=n).filter(|_| rng.gen::<bool>()).collect();
            if !row.is_empty() {
                edges.extend(row.into_iter().map(|k| (i, k)));
                break;
            }
        }
    }
    Ok(ScpInstance { n, m, edges })
}

/// Pairs of cover objects and the ground elements each pair covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCoverMap {
    m: usize,
    /// All pairs `(i, j)`, `i < j`, lexicographic.
    pairs: Vec<(usize, usize)>,
    /// `q[p]` = ground elements adjacent to both members of `pairs[p]`.
    q: Vec<Vec<usize>>,
    /// `covering[k-1]` = pairs covering `c_k`, canonical order.
    covering: Vec<Vec<(usize, usize)>>,
}

impl PairCoverMap {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// `Q_ij` for `i < j`.
    pub fn q(&self, i: usize, j: usize) -> &[usize] {
        assert!(i < j && j <= self.m, "pair ({i}, {j}) out of range");
        let pos = self.pairs.binary_search(&(i, j)).expect("pair listed");
        &self.q[pos]
    }

    /// Pairs covering ground element `k` (1-based).
    pub fn covering(&self, k: usize) -> &[(usize, usize)] {
        &self.covering[k - 1]
    }

    /// `r_k`, the number of pairs covering `c_k`.
    pub fn r(&self, k: usize) -> usize {
        self.covering[k - 1].len()
    }

    pub fn r_all(&self) -> Vec<usize> {
        self.covering.iter().map(Vec::len).collect()
    }
}

pub fn pair_cover_map(inst: &ScpInstance) -> PairCoverMap {
    let mut pairs = Vec::with_capacity(inst.m * inst.m.saturating_sub(1) / 2);
    let mut q = Vec::with_capacity(pairs.capacity());
    let mut covering = vec![Vec::new(); inst.n];
    for i in 1..=inst.m {
        for j in i + 1..=inst.m {
            let both: Vec<usize> = (1..=inst.n)
                .filter(|&k| inst.has_edge(i, k) && inst.has_edge(j, k))
                .collect();
            for &k in &both {
                covering[k - 1].push((i, j));
            }
            pairs.push((i, j));
            q.push(both);
        }
    }
    PairCoverMap { m: inst.m, pairs, q, covering }
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    m: usize,
    edges: Vec<[usize; 2]>,
}

impl Serialize for ScpInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InstanceFile {
            n: self.n,
            m: self.m,
            edges: self.edges.iter().map(|&(i, k)| [i, k]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScpInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = InstanceFile::deserialize(d)?;
        ScpInstance::new(raw.n, raw.m, raw.edges.into_iter().map(|[i, k]| (i, k))).map_err(serde::de::Error::custom)
    }
}

impl ScpInstance {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
