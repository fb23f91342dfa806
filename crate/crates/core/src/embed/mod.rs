//! Minor embedding of logical Ising models onto Chimera hardware.

mod chimera;
mod grouped;
mod heuristic;
mod params;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};
use thiserror::Error;

use crate::ising::IsingModel;

pub use chimera::{build_chimera, ChimeraGraph};
pub use grouped::{embed_grouped, GROUP_CHAIN_LENGTH};
pub use heuristic::{embed_heuristic, embed_heuristic_with, HeuristicOptions};
pub use params::{
    set_parameters, set_parameters_with, unembed, ChainStrength, CouplerSplit, PhysicalModel,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("{n} variables do not fit the grouped layout (capacity {capacity})")]
    TooLarge { n: usize, capacity: usize },
    #[error("no embedding found after {attempts} attempts")]
    NoEmbeddingFound { attempts: usize },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
}

/// Chain of physical qubits for each logical spin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// `chains[i]` holds the sorted qubits of logical spin `i`.
    pub chains: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn new(chains: Vec<Vec<usize>>) -> Self {
        let chains = chains
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        Embedding { chains }
    }

    pub fn qubit_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    pub fn max_chain_length(&self) -> usize {
        self.chains.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// All qubits in use, ascending.
    pub fn used_qubits(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.chains.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Hardware edges inside chain `i`.
    pub fn chain_edges(&self, hw: &ChimeraGraph, i: usize) -> Vec<(usize, usize)> {
        let chain = &self.chains[i];
        let mut out = Vec::new();
        for (x, &a) in chain.iter().enumerate() {
            for &b in &chain[x + 1..] {
                if hw.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Hardware edges between chains `i` and `j`, as `(qubit of i, qubit of j)`
    /// ordered by `(min, max)` id.
    pub fn coupler_edges(&self, hw: &ChimeraGraph, i: usize, j: usize) -> Vec<(usize, usize)> {
        let other: BTreeSet<usize> = self.chains[j].iter().copied().collect();
        let mut out: Vec<(usize, usize)> = self.chains[i]
            .iter()
            .flat_map(|&a| {
                hw.neighbors(a)
                    .iter()
                    .filter(|b| other.contains(b))
                    .map(move |&b| (a, b))
            })
            .collect();
        out.sort_by_key(|&(a, b)| (a.min(b), a.max(b)));
        out
    }

    /// Checks that chains are non-empty, connected, disjoint, lie on the
    /// hardware, and that every coupled logical pair shares a hardware edge.
    pub fn validate(&self, model: &IsingModel, hw: &ChimeraGraph) -> Result<(), EmbedError> {
        let bad = |m: String| Err(EmbedError::InvalidEmbedding(m));
        if self.chains.len() != model.n_spins() {
            return bad(format!(
                "{} chains for {} spins",
                self.chains.len(),
                model.n_spins()
            ));
        }
        let mut owner = BTreeMap::new();
        for (i, chain) in self.chains.iter().enumerate() {
            if chain.is_empty() {
                return bad(format!("chain {i} is empty"));
            }
            for &q in chain {
                if q >= hw.num_qubits() {
                    return bad(format!("qubit {q} is not on the hardware"));
                }
                if let Some(j) = owner.insert(q, i) {
                    return bad(format!("qubit {q} is shared by chains {j} and {i}"));
                }
            }
            if !connected(chain, hw) {
                return bad(format!("chain {i} is not connected"));
            }
        }
        for (&(a, b), _) in model.j_numerators() {
            if self.coupler_edges(hw, a, b).is_empty() {
                return bad(format!("no coupler between chains {a} and {b}"));
            }
        }
        Ok(())
    }

    /// `{"0": [q, ...], "1": [...], ...}`.
    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .chains
            .iter()
            .enumerate()
            .map(|(i, c)| (i.to_string(), json!(c)))
            .collect();
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Self, EmbedError> {
        let bad = || EmbedError::InvalidEmbedding("expected an object of integer arrays".into());
        let obj = value.as_object().ok_or_else(bad)?;
        let mut chains = vec![Vec::new(); obj.len()];
        for (k, v) in obj {
            let i: usize = k.parse().map_err(|_| bad())?;
            let slot = chains.get_mut(i).ok_or_else(bad)?;
            for q in v.as_array().ok_or_else(bad)? {
                slot.push(q.as_u64().ok_or_else(bad)? as usize);
            }
        }
        Ok(Embedding::new(chains))
    }
}

pub(crate) fn connected(chain: &[usize], hw: &ChimeraGraph) -> bool {
    let Some(&start) = chain.first() else {
        return false;
    };
    let members: BTreeSet<usize> = chain.iter().copied().collect();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        for &r in hw.neighbors(q) {
            if members.contains(&r) && seen.insert(r) {
                queue.push_back(r);
            }
        }
    }
    seen.len() == members.len()
}
