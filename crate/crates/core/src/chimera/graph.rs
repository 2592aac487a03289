use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::scalar::Scalar;

/// Hardware qubit `v_k^{(a,b)}`: cell row `a`, cell column `b`, node `k`, all 1-based.
///
/// Nodes `1..=c` form the vertical shore of a cell, `c+1..=2c` the horizontal one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qubit {
    pub a: usize,
    pub b: usize,
    pub k: usize,
}

impl Qubit {
    pub const fn new(a: usize, b: usize, k: usize) -> Self {
        Self { a, b, k }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.k)
    }
}

impl From<[usize; 3]> for Qubit {
    fn from([a, b, k]: [usize; 3]) -> Self {
        Self { a, b, k }
    }
}

impl From<Qubit> for [usize; 3] {
    fn from(v: Qubit) -> Self {
        [v.a, v.b, v.k]
    }
}

/// Chimera graph `F(p, q, c)`: a `p × q` grid of `K_{c,c}` cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChimeraGraph {
    rows: usize,
    cols: usize,
    shore: usize,
}

impl ChimeraGraph {
    pub fn new(rows: usize, cols: usize, shore: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || shore == 0 {
            return Err(Error::invalid(format!("chimera dimensions must be positive, got F({rows},{cols},{shore})")));
        }
        Ok(Self { rows, cols, shore })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shore(&self) -> usize {
        self.shore
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.shore * self.rows * self.cols
    }

    pub fn num_edges(&self) -> usize {
        let (p, q, c) = (self.rows, self.cols, self.shore);
        p * q * c * c + c * q * (p - 1) + c * p * (q - 1)
    }

    pub fn contains(&self, v: Qubit) -> bool {
        (1..=self.rows).contains(&v.a) && (1..=self.cols).contains(&v.b) && (1..=2 * self.shore).contains(&v.k)
    }

    fn vertical(&self, k: usize) -> bool {
        k <= self.shore
    }

    /// Vertices in `(a, b, k)` order.
    pub fn vertices(&self) -> impl Iterator<Item = Qubit> + '_ {
        (1..=self.rows).flat_map(move |a| {
            (1..=self.cols).flat_map(move |b| (1..=2 * self.shore).map(move |k| Qubit::new(a, b, k)))
        })
    }

    pub fn has_edge(&self, u: Qubit, v: Qubit) -> bool {
        if !self.contains(u) || !self.contains(v) || u == v {
            return false;
        }
        if (u.a, u.b) == (v.a, v.b) {
            return self.vertical(u.k) != self.vertical(v.k);
        }
        if u.k != v.k {
            return false;
        }
        if self.vertical(u.k) {
            u.b == v.b && u.a.abs_diff(v.a) == 1
        } else {
            u.a == v.a && u.b.abs_diff(v.b) == 1
        }
    }

    /// Neighbors in `(a, b, k)` order.
    pub fn neighbors(&self, v: Qubit) -> Vec<Qubit> {
        let mut out = Vec::new();
        if !self.contains(v) {
            return out;
        }
        let c = self.shore;
        let (lo, hi) = if self.vertical(v.k) { (c + 1, 2 * c) } else { (1, c) };
        if self.vertical(v.k) {
            if v.a > 1 {
                out.push(Qubit::new(v.a - 1, v.b, v.k));
            }
        } else if v.b > 1 {
            out.push(Qubit::new(v.a, v.b - 1, v.k));
        }
        out.extend((lo..=hi).map(|k| Qubit::new(v.a, v.b, k)));
        if self.vertical(v.k) {
            if v.a < self.rows {
                out.push(Qubit::new(v.a + 1, v.b, v.k));
            }
        } else if v.b < self.cols {
            out.push(Qubit::new(v.a, v.b + 1, v.k));
        }
        out.sort();
        out
    }

    /// All edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Qubit, Qubit)> {
        let mut out: Vec<_> = self
            .vertices()
            .flat_map(|u| self.neighbors(u).into_iter().filter(move |&v| u < v).map(move |v| (u, v)))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for ChimeraGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{},{})", self.rows, self.cols, self.shore)
    }
}

/// Simple undirected graph with labelled vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalGraph {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl LogicalGraph {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex label {l}")));
            }
        }
        Ok(Self {
            labels,
            index,
            edges: BTreeSet::new(),
        })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.labels.len();
        if u == v || u >= n || v >= n {
            return Err(Error::invalid(format!("bad edge ({u}, {v}) in graph on {n} vertices")));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn add_edge_by_label(&mut self, u: &str, v: &str) -> Result<()> {
        let lookup = |l: &str| self.index_of(l).ok_or_else(|| Error::invalid(format!("unknown vertex {l}")));
        let (u, v) = (lookup(u)?, lookup(v)?);
        self.add_edge(u, v)
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Replaces vertex labels, keeping edges.
    pub fn relabel<S: Into<String>>(self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut out = LogicalGraph::new(labels)?;
        if out.num_vertices() != self.num_vertices() {
            return Err(Error::invalid("relabel must keep the vertex count"));
        }
        out.edges = self.edges;
        Ok(out)
    }

    /// `K_{p,q}` with left vertices `a1..ap` and right vertices `b1..bq`.
    pub fn complete_bipartite(p: usize, q: usize) -> Self {
        let labels = (1..=p).map(|i| format!("a{i}")).chain((1..=q).map(|j| format!("b{j}")));
        let mut g = LogicalGraph::new(labels).expect("distinct labels");
        for i in 0..p {
            for j in 0..q {
                g.add_edge(i, p + j).expect("valid edge");
            }
        }
        g
    }

    /// The OR-chain graph `L_n` on `t1..tn` and `x1..x(n-1)`:
    /// triangles `(t1, t2, x1)` and `(x(i-1), t(i+1), xi)`.
    pub fn chain_or(n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("t{i}")).chain((1..n).map(|i| format!("x{i}")));
        let mut g = LogicalGraph::new(labels).expect("distinct labels");
        let t = |i: usize| i - 1;
        let x = |i: usize| n + i - 1;
        for i in 1..n {
            let prev = if i == 1 { t(1) } else { x(i - 1) };
            let next = t(i + 1);
            for (u, v) in [(prev, next), (prev, x(i)), (next, x(i))] {
                g.add_edge(u, v).expect("valid edge");
            }
        }
        g
    }
}

/// One vertex per spin (labelled by index), one edge per nonzero coupling.
pub fn interaction_graph<T: Scalar>(model: &IsingModel<T>) -> LogicalGraph {
    let mut g = LogicalGraph::new((0..model.num_spins()).map(|i| i.to_string())).expect("distinct labels");
    for (i, j, _) in model.couplings() {
        g.add_edge(i, j).expect("couplings are off-diagonal");
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{reduce, ReductionConfig};
    use crate::scp::ScpInstance;
    use crate::Rational;

    fn brute_edges(g: &ChimeraGraph) -> usize {
        let vs: Vec<_> = g.vertices().collect();
        let mut count = 0;
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                count += g.has_edge(u, v) as usize;
            }
        }
        count
    }

    #[test]
    fn counts() {
        let g = ChimeraGraph::new(1, 1, 4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (8, 16));
        let g = ChimeraGraph::new(3, 3, 4).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (72, 192));
        assert_eq!(ChimeraGraph::new(3, 4, 4).unwrap().num_vertices(), 96);
        for (p, q, c) in [(1, 1, 1), (2, 3, 2), (4, 2, 4), (3, 5, 3)] {
            let g = ChimeraGraph::new(p, q, c).unwrap();
            assert_eq!(g.vertices().count(), g.num_vertices());
            assert_eq!(g.edges().len(), g.num_edges());
            assert_eq!(brute_edges(&g), g.num_edges());
        }
        assert!(ChimeraGraph::new(0, 1, 4).is_err());
    }

    #[test]
    fn coupler_orientation() {
        let g = ChimeraGraph::new(2, 2, 4).unwrap();
        assert!(g.has_edge(Qubit::new(1, 1, 2), Qubit::new(2, 1, 2)));
        assert!(!g.has_edge(Qubit::new(1, 1, 2), Qubit::new(1, 2, 2)));
        assert!(g.has_edge(Qubit::new(1, 1, 6), Qubit::new(1, 2, 6)));
        assert!(!g.has_edge(Qubit::new(1, 1, 6), Qubit::new(2, 1, 6)));
        assert!(g.has_edge(Qubit::new(1, 1, 1), Qubit::new(1, 1, 8)));
        assert!(!g.has_edge(Qubit::new(1, 1, 1), Qubit::new(1, 1, 2)));
        for v in g.vertices() {
            for u in g.neighbors(v) {
                assert!(g.has_edge(v, u) && g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn chain_or_shape() {
        let g = LogicalGraph::chain_or(2);
        assert_eq!((g.num_vertices(), g.num_edges()), (3, 3));
        let g = LogicalGraph::chain_or(10);
        assert_eq!((g.num_vertices(), g.num_edges()), (19, 27));
        assert!(g.has_edge(g.index_of("x8").unwrap(), g.index_of("t10").unwrap()));
    }

    #[test]
    fn interaction_graphs() {
        let empty = IsingModel::<Rational>::new(3);
        assert_eq!(interaction_graph(&empty).num_edges(), 0);
        let pair = IsingModel::from_parts(vec![Rational::from(0); 2], [(0, 1, Rational::from(1))], Rational::from(0)).unwrap();
        assert_eq!(interaction_graph(&pair).edges().collect::<Vec<_>>(), vec![(0, 1)]);

        // worked model: per band, s–t bipartite layer plus an L_3 on the t/x spins
        let (model, layout) = reduce::<Rational>(&ScpInstance::worked_example(), &ReductionConfig::default()).unwrap();
        let g = interaction_graph(&model);
        assert_eq!(g.num_edges(), 2 * (2 * 3 + 6));
        for k in 1..=2 {
            let ts: Vec<_> = layout.pair_spins(k).collect();
            let xs: Vec<_> = layout.chain_spins(k).collect();
            let sub = LogicalGraph::chain_or(3);
            let map = |label: &str| {
                let idx: usize = label[1..].parse().unwrap();
                if label.starts_with('t') { ts[idx - 1] } else { xs[idx - 1] }
            };
            for (u, v) in sub.edges() {
                assert!(g.has_edge(map(sub.label(u)), map(sub.label(v))));
            }
        }
    }
}
