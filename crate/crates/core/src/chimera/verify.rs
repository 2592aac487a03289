use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use super::embed::{find_coupler, Embedding};
use super::graph::{ChimeraGraph, LogicalGraph, Qubit};

/// A violated minor-embedding condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingChain { vertex: String },
    UnknownChain { label: String },
    EmptyChain { vertex: String },
    OffHardware { vertex: String, qubit: Qubit },
    Overlap { first: String, second: String, qubit: Qubit },
    Disconnected { vertex: String },
    BadRealizedEdge { u: String, v: String },
    MissingEdge { u: String, v: String },
}

impl Violation {
    /// Short name of the violated condition.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::MissingChain { .. } => "missing-chain",
            Violation::UnknownChain { .. } => "unknown-chain",
            Violation::EmptyChain { .. } => "empty-chain",
            Violation::OffHardware { .. } => "off-hardware",
            Violation::Overlap { .. } => "chain-overlap",
            Violation::Disconnected { .. } => "chain-connectivity",
            Violation::BadRealizedEdge { .. } => "bad-realized-edge",
            Violation::MissingEdge { .. } => "missing-edge",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.kind())?;
        match self {
            Violation::MissingChain { vertex } => write!(f, "no chain for logical vertex {vertex}"),
            Violation::UnknownChain { label } => write!(f, "chain {label} names no logical vertex"),
            Violation::EmptyChain { vertex } => write!(f, "chain of {vertex} is empty"),
            Violation::OffHardware { vertex, qubit } => write!(f, "chain of {vertex} uses {qubit} outside the hardware"),
            Violation::Overlap { first, second, qubit } => write!(f, "chains of {first} and {second} share {qubit}"),
            Violation::Disconnected { vertex } => write!(f, "chain of {vertex} is not connected"),
            Violation::BadRealizedEdge { u, v } => {
                write!(f, "recorded edge for {u}--{v} is not a coupler between the two chains")
            }
            Violation::MissingEdge { u, v } => write!(f, "no coupler between the chains of {u} and {v}"),
        }
    }
}

/// Outcome of [`verify_minor_embedding`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => write!(f, "valid"),
            Some(v) => write!(f, "invalid ({} violations), first {v}", self.violations.len()),
        }
    }
}

fn connected(hw: &ChimeraGraph, chain: &BTreeSet<Qubit>) -> bool {
    let Some(&start) = chain.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for nb in hw.neighbors(q) {
            if chain.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen.len() == chain.len()
}

/// Checks every chain exists, lies on the hardware, is connected and disjoint
/// from the others, and that every logical edge has a coupler between its
/// chains. Recorded realizing edges must themselves be such couplers.
/// Chains need only be connected; a spanning tree then gives the subtree.
pub fn verify_minor_embedding(logical: &LogicalGraph, hw: &ChimeraGraph, emb: &Embedding) -> VerifyReport {
    let mut violations = Vec::new();
    for label in logical.labels() {
        match emb.chain(label) {
            None => violations.push(Violation::MissingChain { vertex: label.clone() }),
            Some(c) if c.is_empty() => violations.push(Violation::EmptyChain { vertex: label.clone() }),
            Some(c) => {
                if let Some(&qubit) = c.iter().find(|q| !hw.contains(**q)) {
                    violations.push(Violation::OffHardware {
                        vertex: label.clone(),
                        qubit,
                    });
                }
            }
        }
    }
    for (label, _) in emb.chains() {
        if logical.index_of(label).is_none() {
            violations.push(Violation::UnknownChain { label: label.to_string() });
        }
    }
    let mut owner: BTreeMap<Qubit, &str> = BTreeMap::new();
    for (label, chain) in emb.chains() {
        for &q in chain {
            if let Some(prev) = owner.insert(q, label) {
                violations.push(Violation::Overlap {
                    first: prev.to_string(),
                    second: label.to_string(),
                    qubit: q,
                });
            }
        }
    }
    for label in logical.labels() {
        if let Some(chain) = emb.chain(label) {
            if !chain.is_empty() && !connected(hw, chain) {
                violations.push(Violation::Disconnected { vertex: label.clone() });
            }
        }
    }
    for (u, v) in logical.edges() {
        let (lu, lv) = (logical.label(u), logical.label(v));
        let (Some(cu), Some(cv)) = (emb.chain(lu), emb.chain(lv)) else {
            continue;
        };
        match emb.realized_edge(lu, lv) {
            Some((a, b)) => {
                if !(cu.contains(&a) && cv.contains(&b) && hw.has_edge(a, b)) {
                    violations.push(Violation::BadRealizedEdge {
                        u: lu.to_string(),
                        v: lv.to_string(),
                    });
                }
            }
            None => {
                if find_coupler(emb, hw, lu, lv).is_none() {
                    violations.push(Violation::MissingEdge {
                        u: lu.to_string(),
                        v: lv.to_string(),
                    });
                }
            }
        }
    }
    VerifyReport { violations }
}
