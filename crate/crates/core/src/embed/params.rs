use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{ChimeraGraph, EmbedError, Embedding};
use crate::ising::IsingModel;

/// Where a logical coupling goes when several hardware edges join two chains.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CouplerSplit {
    /// All of `J_ij` on the edge with the lowest `(min, max)` ids.
    #[default]
    Canonical,
    /// `J_ij / k` on each of the `k` edges.
    Equal,
}

/// Coupling placed on the internal edges of a chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChainStrength {
    /// `−max(|h|, |J|)` over the whole model, on every chain.
    #[default]
    MaxParam,
    /// `−max(|h_i| + Σ_j |J_ij|, 1)` on chain `i`. Re-aligning a broken chain
    /// gains at least twice this per cut edge and loses at most
    /// `|h_i| + Σ_j |J_ij|`, so every physical ground state has intact chains.
    Bounded,
}

/// A model over every hardware qubit, with the embedding it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhysicalModel {
    pub model: IsingModel,
    /// The strongest intra-chain coupling; `−max(|h|, |J|)` by default.
    pub chain_strength: BigRational,
    /// Intra-chain coupling of each chain.
    pub chain_strengths: Vec<BigRational>,
    pub embedding: Embedding,
}

impl PhysicalModel {
    /// The model on the qubits in use, and the hardware id of each of its spins.
    pub fn restricted(&self) -> (IsingModel, Vec<usize>) {
        let used = self.embedding.used_qubits();
        (self.model.restrict(&used), used)
    }
}

/// Spreads each field evenly over its chain, ties each chain together with
/// the chain strength on all its internal edges, and places each coupling on
/// hardware edges between the two chains. The offset absorbs the chain
/// couplings so that intact chains reproduce the logical energy exactly.
pub fn set_parameters(
    model: &IsingModel,
    emb: &Embedding,
    hw: &ChimeraGraph,
    split: CouplerSplit,
) -> Result<PhysicalModel, EmbedError> {
    set_parameters_with(model, emb, hw, split, ChainStrength::MaxParam)
}

pub fn set_parameters_with(
    model: &IsingModel,
    emb: &Embedding,
    hw: &ChimeraGraph,
    split: CouplerSplit,
    rule: ChainStrength,
) -> Result<PhysicalModel, EmbedError> {
    emb.validate(model, hw)?;
    let strengths: Vec<BigRational> = match rule {
        ChainStrength::MaxParam => vec![-model.max_abs_param(); emb.chains.len()],
        ChainStrength::Bounded => {
            let mut load: Vec<BigRational> = model.h_values().iter().map(|v| v.abs()).collect();
            for (a, b, v) in model.couplings() {
                load[a] += v.abs();
                load[b] += v.abs();
            }
            let one = BigRational::from_integer(BigInt::from(1));
            load.into_iter().map(|l| -l.max(one.clone())).collect()
        }
    };
    let mut h = vec![BigRational::zero(); hw.num_qubits()];
    let mut j = Vec::new();
    let mut offset = model.offset();
    for (i, chain) in emb.chains.iter().enumerate() {
        let share = model.h(i) / BigRational::from_integer(BigInt::from(chain.len()));
        for &q in chain {
            h[q] = share.clone();
        }
        for edge in emb.chain_edges(hw, i) {
            j.push((edge, strengths[i].clone()));
            offset -= &strengths[i];
        }
    }
    for (a, b, value) in model.couplings() {
        let edges = emb.coupler_edges(hw, a, b);
        match split {
            CouplerSplit::Canonical => j.push((edges[0], value)),
            CouplerSplit::Equal => {
                let part = value / BigRational::from_integer(BigInt::from(edges.len()));
                j.extend(edges.into_iter().map(|e| (e, part.clone())));
            }
        }
    }
    let physical = IsingModel::from_values(h, j, offset)
        .map_err(|e| EmbedError::InvalidEmbedding(e.to_string()))?;
    let chain_strength = strengths
        .iter()
        .min()
        .cloned()
        .unwrap_or_else(|| -model.max_abs_param());
    Ok(PhysicalModel {
        model: physical,
        chain_strength,
        chain_strengths: strengths,
        embedding: emb.clone(),
    })
}

/// Majority vote per chain, ties to `+1`. Returns the logical spins and the
/// number of chains whose qubits disagree.
pub fn unembed(sample: &[i8], emb: &Embedding) -> (Vec<i8>, usize) {
    let mut breaks = 0;
    let spins = emb
        .chains
        .iter()
        .map(|chain| {
            let sum: i64 = chain.iter().map(|&q| sample[q] as i64).sum();
            if sum.unsigned_abs() as usize != chain.len() {
                breaks += 1;
            }
            if sum >= 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    (spins, breaks)
}
