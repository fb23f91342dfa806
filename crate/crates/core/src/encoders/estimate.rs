//! Variable counts without expanding the cost polynomial.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::{build_block_system, check_input, BlockLayout, EncodeError, FactorLayout, Method};
use crate::pbp::{Monomial, Var, VariableRegistry};
use crate::quadratize::{factor_product_pairs, greedy_plan};

/// Factor bits + carries + ancillas of the quadratic cost for this layout.
///
/// The higher-order support of a sum of squares is the set of pairwise unions
/// of the squared expressions' monomials, so the ancilla count follows from
/// the term structure alone. Agrees with running the encoder and
/// [`quadratize`](crate::quadratize::quadratize).
pub fn estimate_qubits(
    n: &BigUint,
    method: Method,
    l1: u32,
    l2: u32,
    layout: &BlockLayout,
) -> Result<usize, EncodeError> {
    check_input(n, l1, l2)?;
    match method {
        Method::Direct => {
            let fl = FactorLayout {
                l1,
                l2,
                fixed_leading: false,
            };
            let ps: Vec<Var> = (1..=fl.p_positions().len() as u32).map(Var).collect();
            let qs: Vec<Var> = (ps.len() as u32 + 1..=fl.factor_bit_count() as u32)
                .map(Var)
                .collect();
            // Monomials of p·q: p bits, q bits and their products.
            let mut terms: Vec<Monomial> = Vec::new();
            terms.extend(ps.iter().map(|&p| Monomial::new([p])));
            terms.extend(qs.iter().map(|&q| Monomial::new([q])));
            for &p in &ps {
                terms.extend(qs.iter().map(|&q| Monomial::new([p, q])));
            }
            let support = square_support(&[terms]);
            let vars = fl.factor_bit_count();
            Ok(vars + greedy_plan(support, vars as u32 + 1).len())
        }
        Method::Table => {
            let bs = build_block_system(n, l1, l2, layout)?;
            let groups: Vec<Vec<Monomial>> = bs
                .blocks
                .iter()
                .map(|b| {
                    bs.block_residual(b)
                        .terms()
                        .map(|(m, _)| m.clone())
                        .filter(|m| m.degree() > 0)
                        .collect()
                })
                .collect();
            let support = square_support(&groups);
            let vars = bs.registry.len();
            Ok(vars + table_ancillas(support, &bs.registry, vars as u32 + 1))
        }
    }
}

fn square_support(groups: &[Vec<Monomial>]) -> BTreeSet<Monomial> {
    let mut out = BTreeSet::new();
    for terms in groups {
        for (i, a) in terms.iter().enumerate() {
            for b in &terms[i..] {
                let m = a.union(b);
                if m.degree() >= 3 {
                    out.insert(m);
                }
            }
        }
    }
    out
}

fn table_ancillas(support: BTreeSet<Monomial>, registry: &VariableRegistry, next: u32) -> usize {
    let mut pairs: BTreeSet<(Var, Var)> = BTreeSet::new();
    let mut rest = BTreeSet::new();
    for m in &support {
        let designated = factor_product_pairs(m, registry);
        pairs.extend(designated.iter().copied());
        let reduced = designated
            .iter()
            .enumerate()
            .fold(m.clone(), |acc, (k, &(p, q))| {
                // Placeholder ids only need to be distinct and unused.
                acc.substitute_pair(p, q, Var(u32::MAX - k as u32))
            });
        if reduced.degree() >= 3 {
            rest.insert(reduced);
        }
    }
    let fallback = if rest.is_empty() {
        0
    } else {
        greedy_plan(rest, next + pairs.len() as u32).len()
    };
    pairs.len() + fallback
}

/// `⌈log₂(n)² / 4⌉`, the asymptotic size of the table encoding.
pub fn rough_qubit_estimate(n: &BigUint) -> u64 {
    let bits = n.bits();
    (bits * bits).div_ceil(4)
}

/// `(l + 2)(l − 1)`: the direct-method count with one ancilla per pair
/// `p_i·q_j`. Greedy pair selection never needs more.
pub fn direct_qubit_bound(l: u32) -> u64 {
    (l as u64 + 2) * (l as u64 - 1)
}

/// Factor lengths to try when none are given: `l1 + l2` is `bits(n)` or
/// `bits(n) + 1`, `l1 ≥ l2 ≥ 2`, most balanced first.
pub fn candidate_lengths(n: &BigUint) -> Vec<(u32, u32)> {
    let bits = n.bits() as u32;
    let mut out = Vec::new();
    for sum in [bits, bits + 1] {
        for l2 in 2..=sum / 2 {
            out.push((sum - l2, l2));
        }
    }
    out.sort_by_key(|&(a, b)| (a - b, a + b));
    out
}
