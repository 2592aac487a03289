use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::graph::{interaction_graph, ChimeraGraph, LogicalGraph, Qubit};
use crate::error::{Error, Result};
use crate::ising::{reduce, ReductionConfig};
use crate::scp::{pair_cover_map, ScpInstance};
use crate::Rational;

/// Minor embedding: a chain of hardware qubits per logical vertex and one
/// realizing hardware edge per logical edge, both keyed by vertex label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Embedding {
    chains: BTreeMap<String, BTreeSet<Qubit>>,
    edges: BTreeMap<(String, String), (Qubit, Qubit)>,
}

impl Embedding {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds qubits to the chain of `label`.
    pub fn extend_chain(&mut self, label: impl Into<String>, qubits: impl IntoIterator<Item = Qubit>) {
        self.chains.entry(label.into()).or_default().extend(qubits);
    }

    pub fn chain(&self, label: &str) -> Option<&BTreeSet<Qubit>> {
        self.chains.get(label)
    }

    pub fn chain_mut(&mut self, label: &str) -> Option<&mut BTreeSet<Qubit>> {
        self.chains.get_mut(label)
    }

    pub fn chains(&self) -> impl Iterator<Item = (&str, &BTreeSet<Qubit>)> {
        self.chains.iter().map(|(l, c)| (l.as_str(), c))
    }

    pub fn num_chains(&self) -> usize {
        self.chains.len()
    }

    /// Realizing edge for `u–v`, oriented `(qubit in u, qubit in v)`.
    pub fn realized_edge(&self, u: &str, v: &str) -> Option<(Qubit, Qubit)> {
        if let Some(&e) = self.edges.get(&(u.to_string(), v.to_string())) {
            return Some(e);
        }
        self.edges.get(&(v.to_string(), u.to_string())).map(|&(a, b)| (b, a))
    }

    pub fn set_edge(&mut self, u: impl Into<String>, v: impl Into<String>, edge: (Qubit, Qubit)) {
        let (u, v) = (u.into(), v.into());
        self.edges.remove(&(v.clone(), u.clone()));
        self.edges.insert((u, v), edge);
    }

    pub fn remove_edge(&mut self, u: &str, v: &str) {
        self.edges.remove(&(u.to_string(), v.to_string()));
        self.edges.remove(&(v.to_string(), u.to_string()));
    }

    pub fn realized_edges(&self) -> impl Iterator<Item = (&str, &str, (Qubit, Qubit))> {
        self.edges.iter().map(|((u, v), &e)| (u.as_str(), v.as_str(), e))
    }

    /// Total number of hardware qubits over all chains.
    pub fn qubits_used(&self) -> usize {
        self.chains.values().map(BTreeSet::len).sum()
    }

    /// For every logical edge, records the lowest `(a, b, k)` hardware edge
    /// between the two chains. Edges with no such coupler are left unset.
    pub fn realize_edges(&mut self, logical: &LogicalGraph, hw: &ChimeraGraph) {
        for (u, v) in logical.edges() {
            let (lu, lv) = (logical.label(u), logical.label(v));
            if let Some(e) = find_coupler(self, hw, lu, lv) {
                self.set_edge(lu, lv, e);
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EmbeddingFile::from(self)).expect("embedding serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: EmbeddingFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

pub(crate) fn find_coupler(emb: &Embedding, hw: &ChimeraGraph, u: &str, v: &str) -> Option<(Qubit, Qubit)> {
    let (cu, cv) = (emb.chain(u)?, emb.chain(v)?);
    cu.iter()
        .find_map(|&a| hw.neighbors(a).into_iter().find(|b| cv.contains(b)).map(|b| (a, b)))
}

#[derive(Serialize, Deserialize)]
struct EmbeddingFile {
    chains: BTreeMap<String, Vec<[usize; 3]>>,
    edges: BTreeMap<String, [[usize; 3]; 2]>,
}

impl From<&Embedding> for EmbeddingFile {
    fn from(emb: &Embedding) -> Self {
        Self {
            chains: emb
                .chains
                .iter()
                .map(|(l, c)| (l.clone(), c.iter().map(|&q| q.into()).collect()))
                .collect(),
            edges: emb
                .edges
                .iter()
                .map(|((u, v), &(a, b))| (format!("{u}--{v}"), [a.into(), b.into()]))
                .collect(),
        }
    }
}

impl TryFrom<EmbeddingFile> for Embedding {
    type Error = Error;

    fn try_from(file: EmbeddingFile) -> Result<Self> {
        let mut emb = Embedding::new();
        for (label, qubits) in file.chains {
            emb.extend_chain(label, qubits.into_iter().map(Qubit::from));
        }
        for (key, [a, b]) in file.edges {
            let (u, v) = key
                .split_once("--")
                .ok_or_else(|| Error::Parse(format!("edge key {key:?} is not of the form u--v")))?;
            emb.set_edge(u, v, (a.into(), b.into()));
        }
        Ok(emb)
    }
}

/// A logical graph, the hardware graph it was embedded into, and the embedding.
#[derive(Clone, Debug)]
pub struct Construction {
    pub logical: LogicalGraph,
    pub hardware: ChimeraGraph,
    pub embedding: Embedding,
}

/// Wrapped 1-based residue `((x − 1) mod c) + 1`.
fn wrap(x: usize, c: usize) -> usize {
    (x - 1) % c + 1
}

fn ceil_div(x: usize, c: usize) -> usize {
    x.div_ceil(c)
}

/// Embeds `K_{p,q}` into `F(⌈q/c⌉, ⌈p/c⌉, c)`.
///
/// Left vertex `i` becomes the vertical-shore chain `(t, ⌈i/c⌉, w(i))` down
/// every cell row `t`; right vertex `j` the horizontal-shore chain
/// `(⌈j/c⌉, t, c + w(j))` across every cell column. The two meet in cell
/// `(⌈j/c⌉, ⌈i/c⌉)`, where the in-cell coupler realizes the edge.
pub fn embed_complete_bipartite(p: usize, q: usize, c: usize) -> Result<Construction> {
    if p == 0 || q == 0 || c == 0 {
        return Err(Error::invalid("K_{p,q} embedding needs p, q, c >= 1"));
    }
    let (rows, cols) = (ceil_div(q, c), ceil_div(p, c));
    let hardware = ChimeraGraph::new(rows, cols, c)?;
    let logical = LogicalGraph::complete_bipartite(p, q);
    let mut embedding = Embedding::new();
    for i in 1..=p {
        embedding.extend_chain(format!("a{i}"), (1..=rows).map(|t| Qubit::new(t, ceil_div(i, c), wrap(i, c))));
    }
    for j in 1..=q {
        embedding.extend_chain(format!("b{j}"), (1..=cols).map(|t| Qubit::new(ceil_div(j, c), t, c + wrap(j, c))));
    }
    for i in 1..=p {
        for j in 1..=q {
            let cell = (ceil_div(j, c), ceil_div(i, c));
            let edge = (Qubit::new(cell.0, cell.1, wrap(i, c)), Qubit::new(cell.0, cell.1, c + wrap(j, c)));
            embedding.set_edge(format!("a{i}"), format!("b{j}"), edge);
        }
    }
    Ok(Construction {
        logical,
        hardware,
        embedding,
    })
}

const CELL: usize = 4;

/// When `x_i` needs the two-cell extension down column 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum XiRule {
    /// Extend exactly when a later chain partner of `x_i` sits in the next cell row.
    NextRow,
    /// The condition `2i + 4 < 2n − 1` as printed; leaves gaps (e.g. `L_10`).
    #[cfg_attr(not(test), allow(dead_code))]
    Printed,
}

impl XiRule {
    fn extends(self, i: usize, n: usize) -> bool {
        match self {
            XiRule::NextRow => (i.is_multiple_of(2) && i < n) || (!i.is_multiple_of(2) && i + 2 <= n),
            XiRule::Printed => 2 * i + 4 + 1 < 2 * n,
        }
    }
}

/// Chains of `L_n` (`t1..tn`, `x1..x(n−1)`), shifted by `row0` cell rows and
/// `col0` cell columns. Uses two cell columns and `⌈2n/4⌉` cell rows.
fn chain_or_chains(n: usize, row0: usize, col0: usize, rule: XiRule) -> Vec<(String, Vec<Qubit>)> {
    let c = CELL;
    let mut out = Vec::with_capacity(2 * n - 1);
    for i in 1..=n {
        let a = row0 + ceil_div(2 * i - 1, c);
        let k = wrap(2 * i - 1, c);
        let mut chain = vec![Qubit::new(a, col0 + 1, k), Qubit::new(a, col0 + 1, c + k)];
        if i >= 3 {
            chain.push(Qubit::new(a, col0 + 2, c + k));
        }
        out.push((format!("t{i}"), chain));
    }
    for i in 1..n {
        let a = row0 + ceil_div(2 * i, c);
        let k = wrap(2 * i, c);
        let mut chain = vec![
            Qubit::new(a, col0 + 1, k),
            Qubit::new(a, col0 + 1, c + k),
            Qubit::new(a, col0 + 2, c + k),
        ];
        if rule.extends(i, n) {
            let kk = if ceil_div(i, 2) % 2 == 1 { k } else { wrap(k + c - 1, c) };
            chain.push(Qubit::new(a, col0 + 2, kk));
            chain.push(Qubit::new(a + 1, col0 + 2, kk));
        }
        out.push((format!("x{i}"), chain));
    }
    out
}

fn check_cell(c: usize) -> Result<()> {
    if c != CELL {
        return Err(Error::Unsupported(format!("OR-chain embedding is constructed for c = 4 only, got c = {c}")));
    }
    Ok(())
}

pub(crate) fn embed_chain_or_with(n: usize, c: usize, rule: XiRule) -> Result<Construction> {
    check_cell(c)?;
    if n < 2 {
        return Err(Error::invalid("L_n needs n >= 2"));
    }
    let hardware = ChimeraGraph::new(ceil_div(2 * n, c), 2, c)?;
    let logical = LogicalGraph::chain_or(n);
    let mut embedding = Embedding::new();
    for (label, chain) in chain_or_chains(n, 0, 0, rule) {
        embedding.extend_chain(label, chain);
    }
    embedding.realize_edges(&logical, &hardware);
    Ok(Construction {
        logical,
        hardware,
        embedding,
    })
}

/// Embeds the OR-chain graph `L_n` into `F(⌈2n/4⌉, 2, 4)`.
pub fn embed_chain_or(n: usize, c: usize) -> Result<Construction> {
    embed_chain_or_with(n, c, XiRule::NextRow)
}

/// Embeds the interaction graph of the reduced instance into `F(f1, f2, 4)`
/// with `f1 = Σ_k ⌈2r_k/4⌉` and `f2 = ⌈2m/4⌉ + 2`.
///
/// Each ground element `k` gets a band of `⌈2r_k/4⌉` cell rows starting
/// after `d_k = Σ_{l<k} ⌈2r_l/4⌉`. Select spin `s_i` runs down column
/// `⌈(2i−1)/4⌉` through every band. The `j`-th pair spin of band `k` runs
/// across the first `⌈2m/4⌉` columns in row `d_k + ⌈(2j−1)/4⌉` and continues
/// into that band's copy of the `L_{r_k}` embedding in the last two columns.
/// Logical labels are the reduction's spin labels.
pub fn embed_instance(inst: &ScpInstance, c: usize) -> Result<Construction> {
    check_cell(c)?;
    let cover = pair_cover_map(inst);
    if let Some(k) = (1..=inst.n()).find(|&k| cover.r(k) == 0) {
        return Err(Error::Infeasible(format!("ground element c{k} is not covered by any pair")));
    }
    let (model, layout) = reduce::<Rational>(inst, &ReductionConfig::default())?;
    let labels: Vec<String> = layout.labels().iter().map(ToString::to_string).collect();
    let logical = interaction_graph(&model).relabel(labels.iter().cloned())?;

    let m = inst.m();
    let theta_cols = ceil_div(2 * m, c);
    let bands: Vec<usize> = (1..=inst.n()).map(|k| ceil_div(2 * cover.r(k), c)).collect();
    let f1: usize = bands.iter().sum();
    let f2 = theta_cols + 2;
    let hardware = ChimeraGraph::new(f1, f2, c)?;

    let mut embedding = Embedding::new();
    for i in 1..=m {
        let (b, k) = (ceil_div(2 * i - 1, c), wrap(2 * i - 1, c));
        embedding.extend_chain(&labels[layout.select_spin(i)], (1..=f1).map(|a| Qubit::new(a, b, k)));
    }
    let mut d = 0;
    for (k, &rows) in (1..=inst.n()).zip(&bands) {
        let pairs: Vec<usize> = layout.pair_spins(k).collect();
        let chains: Vec<usize> = layout.chain_spins(k).collect();
        for (j, &spin) in pairs.iter().enumerate() {
            let j = j + 1;
            let (a, kk) = (d + ceil_div(2 * j - 1, c), c + wrap(2 * j - 1, c));
            embedding.extend_chain(&labels[spin], (1..=theta_cols).map(|b| Qubit::new(a, b, kk)));
        }
        for (local, chain) in chain_or_chains(pairs.len(), d, theta_cols, XiRule::NextRow) {
            let idx: usize = local[1..].parse().expect("numeric suffix");
            let spin = if local.starts_with('t') { pairs[idx - 1] } else { chains[idx - 1] };
            embedding.extend_chain(&labels[spin], chain);
        }
        d += rows;
    }
    embedding.realize_edges(&logical, &hardware);
    Ok(Construction {
        logical,
        hardware,
        embedding,
    })
}

/// Graphviz rendering of the hardware graph with qubits colored by chain.
pub fn to_dot(hw: &ChimeraGraph, emb: &Embedding) -> String {
    const PALETTE: [&str; 12] = [
        "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#008080",
        "#9a6324", "#800000", "#000075",
    ];
    let mut owner = BTreeMap::new();
    for (n, (label, chain)) in emb.chains().enumerate() {
        for &q in chain {
            owner.insert(q, (label, PALETTE[n % PALETTE.len()]));
        }
    }
    let name = |q: Qubit| format!("q{}_{}_{}", q.a, q.b, q.k);
    let c = hw.shore();
    let mut out = format!("graph \"{hw}\" {{\n  node [shape=circle, width=0.25, fixedsize=true, fontsize=6];\n");
    for q in hw.vertices() {
        // vertical shore drawn as a column, horizontal shore as a row, per cell
        let (x, y) = if q.k <= c {
            ((q.b - 1) * (c + 2) + q.k, (q.a - 1) * (c + 2))
        } else {
            ((q.b - 1) * (c + 2), (q.a - 1) * (c + 2) + q.k - c)
        };
        match owner.get(&q) {
            Some((label, color)) => out.push_str(&format!(
                "  {} [pos=\"{x},{}!\", style=filled, fillcolor=\"{color}\", tooltip=\"{label}\", label=\"\"];\n",
                name(q),
                -(y as isize)
            )),
            None => out.push_str(&format!(
                "  {} [pos=\"{x},{}!\", color=gray, label=\"\"];\n",
                name(q),
                -(y as isize)
            )),
        }
    }
    let used: BTreeSet<(Qubit, Qubit)> = emb
        .realized_edges()
        .map(|(_, _, (a, b))| (a.min(b), a.max(b)))
        .collect();
    for (u, v) in hw.edges() {
        let style = match (owner.get(&u), owner.get(&v)) {
            (Some((lu, color)), Some((lv, _))) if lu == lv => format!(" [color=\"{color}\", penwidth=3]"),
            _ if used.contains(&(u, v)) => " [color=black, penwidth=2]".to_string(),
            _ => " [color=gray80]".to_string(),
        };
        out.push_str(&format!("  {} -- {}{style};\n", name(u), name(v)));
    }
    out.push_str("}\n");
    out
}
