use super::{ChimeraGraph, EmbedError, Embedding};
use crate::ising::IsingModel;

/// Cells per side of the grouped layout, which is also the chain length minus one.
const SPAN: usize = 3;

pub const GROUP_CHAIN_LENGTH: usize = SPAN + 1;

/// Clique embedding in the top-left `3 × 3` cells, four qubits per chain.
///
/// Spins are split into groups of `t`. Spin `k` of group `g` takes the
/// vertical qubit `k` in column `g`, rows `0..=g`, and the horizontal qubit
/// `k` in row `g`, columns `g..3`. Two groups `g < h` meet in cell `(g, h)`
/// and two spins of one group meet in cell `(g, g)`, so every pair of chains
/// is coupled.
pub fn embed_grouped(model: &IsingModel, hw: &ChimeraGraph) -> Result<Embedding, EmbedError> {
    let n = model.n_spins();
    let capacity = if hw.m >= SPAN && hw.n >= SPAN {
        SPAN * hw.t
    } else {
        0
    };
    if n > capacity {
        return Err(EmbedError::TooLarge { n, capacity });
    }
    Ok(Embedding::new(clique_chains(hw, SPAN, n)))
}

/// The same layout over `span × span` cells: up to `span·t` chains of
/// `span + 1` qubits, pairwise coupled.
pub(crate) fn clique_chains(hw: &ChimeraGraph, span: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| {
            let (g, k) = (i / hw.t, i % hw.t);
            let vertical = (0..=g).map(move |row| hw.qubit(row, g, 0, k));
            let horizontal = (g..span).map(move |col| hw.qubit(g, col, 1, k));
            vertical.chain(horizontal).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::build_chimera;
    use num_rational::BigRational;

    fn complete(n: usize) -> IsingModel {
        let one = || BigRational::from_integer(1.into());
        let j = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| ((a, b), BigRational::from_integer(1.into()))));
        IsingModel::from_values(vec![one(); n], j, one()).unwrap()
    }

    #[test]
    fn twelve_spin_clique() {
        let hw = build_chimera(16, 16, 4);
        let m = complete(12);
        let emb = embed_grouped(&m, &hw).unwrap();
        emb.validate(&m, &hw).unwrap();
        assert!(emb.chains.iter().all(|c| c.len() == 4));
        assert_eq!(m.edge_count(), 66);
    }

    #[test]
    fn small_models() {
        let hw = build_chimera(16, 16, 4);
        for n in [1, 4] {
            let m = complete(n);
            let emb = embed_grouped(&m, &hw).unwrap();
            emb.validate(&m, &hw).unwrap();
            assert_eq!(emb.chains.len(), n);
            assert!(emb.chains.iter().all(|c| c.len() == 4));
        }
    }

    #[test]
    fn too_large() {
        let hw = build_chimera(16, 16, 4);
        assert_eq!(
            embed_grouped(&complete(13), &hw),
            Err(EmbedError::TooLarge {
                n: 13,
                capacity: 12
            })
        );
        let small = build_chimera(2, 2, 4);
        assert!(matches!(
            embed_grouped(&complete(1), &small),
            Err(EmbedError::TooLarge { .. })
        ));
    }
}
