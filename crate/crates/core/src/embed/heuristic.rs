use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grouped::clique_chains;
use super::{connected, ChimeraGraph, EmbedError, Embedding};
use crate::ising::IsingModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicOptions {
    /// Independent attempts, each from its own random stream.
    pub restarts: usize,
    /// Rip-up-and-reroute passes per attempt.
    pub rounds: usize,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        HeuristicOptions {
            restarts: 4,
            rounds: 40,
        }
    }
}

/// Randomized chain routing with default options.
pub fn embed_heuristic(
    model: &IsingModel,
    hw: &ChimeraGraph,
    seed: u64,
) -> Result<Embedding, EmbedError> {
    embed_heuristic_with(model, hw, seed, &HeuristicOptions::default())
}

/// Routes each spin's chain as a cheapest tree reaching the chains of its
/// already placed neighbours, where a qubit costs `α^(chains using it)`.
/// Spins are ripped up and rerouted in random order with growing `α` until
/// no qubit is shared; the chains are then trimmed of removable qubits.
///
/// Dense models are hard to route from scratch. When the model fits a native
/// clique layout, that layout is the starting point and the reroute passes
/// shorten its chains instead.
pub fn embed_heuristic_with(
    model: &IsingModel,
    hw: &ChimeraGraph,
    seed: u64,
    opts: &HeuristicOptions,
) -> Result<Embedding, EmbedError> {
    let n = model.n_spins();
    let mut logical = vec![Vec::new(); n];
    for &(a, b) in model.j_numerators().keys() {
        logical[a].push(b);
        logical[b].push(a);
    }
    let span = n.div_ceil(hw.t.max(1)).max(1);
    let clique = (n > 0 && span <= hw.m.min(hw.n)).then(|| clique_chains(hw, span, n));
    if n <= hw.num_qubits() {
        for attempt in 0..opts.restarts {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(attempt as u64);
            if let Some(chains) =
                Router::new(hw, &logical).run(&mut rng, opts.rounds, clique.clone())
            {
                let emb = Embedding::new(chains);
                if emb.validate(model, hw).is_ok() {
                    return Ok(emb);
                }
            }
        }
    }
    Err(EmbedError::NoEmbeddingFound {
        attempts: opts.restarts,
    })
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

struct Router<'a> {
    hw: &'a ChimeraGraph,
    logical: &'a [Vec<usize>],
    chains: Vec<Vec<usize>>,
    usage: Vec<u32>,
    alpha: f64,
}

impl<'a> Router<'a> {
    fn new(hw: &'a ChimeraGraph, logical: &'a [Vec<usize>]) -> Self {
        Router {
            hw,
            logical,
            chains: vec![Vec::new(); logical.len()],
            usage: vec![0; hw.num_qubits()],
            alpha: 2.0,
        }
    }

    fn weight(&self, q: usize) -> f64 {
        self.alpha.powi(self.usage[q] as i32)
    }

    fn occupy(&mut self, v: usize, chain: Vec<usize>) {
        for &q in &self.chains[v] {
            self.usage[q] -= 1;
        }
        for &q in &chain {
            self.usage[q] += 1;
        }
        self.chains[v] = chain;
    }

    /// Without a seed, returns the first overlap-free state. With one, keeps
    /// rerouting and returns the valid state that uses the fewest qubits.
    fn run(
        mut self,
        rng: &mut ChaCha8Rng,
        rounds: usize,
        seed: Option<Vec<Vec<usize>>>,
    ) -> Option<Vec<Vec<usize>>> {
        let mut order: Vec<usize> = (0..self.logical.len()).collect();
        let cap = self.hw.num_qubits().max(4) as f64;
        let seeded = seed.is_some();
        let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
        if let Some(chains) = seed {
            for (v, chain) in chains.into_iter().enumerate() {
                self.occupy(v, chain);
            }
            self.alpha = cap;
            best = Some((self.total(), self.chains.clone()));
        }
        for _ in 0..rounds {
            order.shuffle(rng);
            for &v in &order {
                self.occupy(v, Vec::new());
                let chain = self.route(v, rng);
                self.occupy(v, chain);
            }
            if self.usage.iter().all(|&u| u <= 1) {
                self.prune();
                if !seeded {
                    return Some(self.chains);
                }
                if best.as_ref().is_none_or(|(t, _)| self.total() < *t) {
                    best = Some((self.total(), self.chains.clone()));
                }
            } else {
                self.alpha = (self.alpha * 1.5).min(cap);
            }
        }
        best.map(|(_, chains)| chains)
    }

    fn total(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    fn route(&self, v: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let placed: Vec<usize> = self.logical[v]
            .iter()
            .copied()
            .filter(|&u| !self.chains[u].is_empty())
            .collect();
        let nq = self.hw.num_qubits();
        if placed.is_empty() {
            let least = *self.usage.iter().min().expect("hardware is not empty");
            let free: Vec<usize> = (0..nq).filter(|&q| self.usage[q] == least).collect();
            return vec![free[rng.random_range(0..free.len())]];
        }
        let trees: Vec<(Vec<f64>, Vec<usize>)> = placed.iter().map(|&u| self.dijkstra(u)).collect();
        let mut best = f64::INFINITY;
        let mut roots = Vec::new();
        for q in 0..nq {
            let total: f64 = trees.iter().map(|(d, _)| d[q]).sum::<f64>()
                - (trees.len() - 1) as f64 * self.weight(q);
            if total < best - 1e-9 {
                best = total;
                roots.clear();
            }
            if (total - best).abs() <= 1e-9 {
                roots.push(q);
            }
        }
        if !best.is_finite() {
            return vec![rng.random_range(0..nq)];
        }
        let root = roots[rng.random_range(0..roots.len())];
        // Connect the nearest neighbours first, each by a cheapest path from
        // the tree built so far.
        let mut targets: Vec<(f64, usize)> = placed
            .iter()
            .enumerate()
            .map(|(k, &u)| (trees[k].0[root], u))
            .collect();
        targets.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut chain = BTreeSet::from([root]);
        for (_, u) in targets {
            if self.touches_set(&chain, u) {
                continue;
            }
            for q in self.path_to_chain(&chain, u) {
                chain.insert(q);
            }
        }
        let mut chain: Vec<usize> = chain.into_iter().collect();
        self.trim(&mut chain, v);
        chain
    }

    /// Cheapest path of new qubits from `tree` to a qubit adjacent to chain `u`.
    fn path_to_chain(&self, tree: &BTreeSet<usize>, u: usize) -> Vec<usize> {
        let nq = self.hw.num_qubits();
        let goal: BTreeSet<usize> = self.chains[u].iter().copied().collect();
        let mut dist = vec![f64::INFINITY; nq];
        let mut parent = vec![usize::MAX; nq];
        let mut heap = BinaryHeap::new();
        for &a in tree {
            dist[a] = 0.0;
            heap.push(Entry(0.0, a));
        }
        while let Some(Entry(d, q)) = heap.pop() {
            if d > dist[q] {
                continue;
            }
            if self.hw.neighbors(q).iter().any(|r| goal.contains(r)) {
                let mut path = Vec::new();
                let mut x = q;
                while !tree.contains(&x) {
                    path.push(x);
                    x = parent[x];
                }
                return path;
            }
            for &r in self.hw.neighbors(q) {
                if goal.contains(&r) || tree.contains(&r) {
                    continue;
                }
                let nd = d + self.weight(r);
                if nd < dist[r] {
                    dist[r] = nd;
                    parent[r] = q;
                    heap.push(Entry(nd, r));
                }
            }
        }
        Vec::new()
    }

    fn touches_set(&self, chain: &BTreeSet<usize>, u: usize) -> bool {
        chain.iter().any(|&a| {
            self.hw
                .neighbors(a)
                .iter()
                .any(|b| self.chains[u].contains(b))
        })
    }

    /// Removes qubits from `chain` while it stays connected and keeps
    /// touching every placed neighbour of `v`.
    fn trim(&self, chain: &mut Vec<usize>, v: usize) {
        let placed: Vec<usize> = self.logical[v]
            .iter()
            .copied()
            .filter(|&u| !self.chains[u].is_empty() && u != v)
            .collect();
        let mut changed = true;
        while changed && chain.len() > 1 {
            changed = false;
            for idx in (0..chain.len()).rev() {
                let mut trial = chain.clone();
                trial.remove(idx);
                if connected(&trial, self.hw) && placed.iter().all(|&u| self.touches(&trial, u)) {
                    *chain = trial;
                    changed = true;
                    break;
                }
            }
        }
    }

    /// Cheapest node-weighted paths from chain `u` to every other qubit.
    fn dijkstra(&self, u: usize) -> (Vec<f64>, Vec<usize>) {
        let nq = self.hw.num_qubits();
        let source: BTreeSet<usize> = self.chains[u].iter().copied().collect();
        let mut dist = vec![f64::INFINITY; nq];
        let mut parent = vec![usize::MAX; nq];
        let mut heap = BinaryHeap::new();
        for &a in &source {
            for &b in self.hw.neighbors(a) {
                let d = self.weight(b);
                if !source.contains(&b) && d < dist[b] {
                    dist[b] = d;
                    parent[b] = a;
                    heap.push(Entry(d, b));
                }
            }
        }
        while let Some(Entry(d, q)) = heap.pop() {
            if d > dist[q] {
                continue;
            }
            for &r in self.hw.neighbors(q) {
                if source.contains(&r) {
                    continue;
                }
                let nd = d + self.weight(r);
                if nd < dist[r] {
                    dist[r] = nd;
                    parent[r] = q;
                    heap.push(Entry(nd, r));
                }
            }
        }
        (dist, parent)
    }

    /// Drops qubits whose removal keeps the chain connected and every
    /// logical coupling realized.
    fn prune(&mut self) {
        for v in 0..self.chains.len() {
            let mut changed = true;
            while changed && self.chains[v].len() > 1 {
                changed = false;
                for idx in (0..self.chains[v].len()).rev() {
                    let mut trial = self.chains[v].clone();
                    trial.remove(idx);
                    if connected(&trial, self.hw)
                        && self.logical[v].iter().all(|&u| self.touches(&trial, u))
                    {
                        self.chains[v] = trial;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    fn touches(&self, chain: &[usize], u: usize) -> bool {
        chain.iter().any(|&a| {
            self.hw
                .neighbors(a)
                .iter()
                .any(|b| self.chains[u].contains(b))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::build_chimera;
    use crate::golden::{direct_15_model, table_143_model};

    #[test]
    fn fifteen_on_one_cell() {
        let hw = build_chimera(1, 1, 4);
        let m = direct_15_model();
        let emb = embed_heuristic(&m, &hw, 0).unwrap();
        emb.validate(&m, &hw).unwrap();
        assert!(emb.max_chain_length() <= 2, "{:?}", emb.chains);
    }

    #[test]
    fn empty_hardware() {
        let hw = build_chimera(0, 0, 4);
        assert!(matches!(
            embed_heuristic(&direct_15_model(), &hw, 1),
            Err(EmbedError::NoEmbeddingFound { .. })
        ));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let hw = build_chimera(4, 4, 4);
        let m = table_143_model();
        let a = embed_heuristic(&m, &hw, 9).unwrap();
        let b = embed_heuristic(&m, &hw, 9).unwrap();
        assert_eq!(a, b);
        a.validate(&m, &hw).unwrap();
    }
}
