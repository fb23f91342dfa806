//! Degree reduction to quadratic form.
//!
//! A higher-order term `a·x·y·m` is rewritten as `a·t·m` with a fresh ancilla
//! `t`, and the penalty `2|a|·(xy − 2xt − 2yt + 3t)` is added. The gadget is 0
//! exactly when `t = xy` and at least 1 otherwise, so the weight `2|a|`
//! strictly dominates the at most `|a|` the substituted term can gain. The
//! same gadget serves positive and negative coefficients. When one ancilla
//! serves several terms the weights accumulate.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoders::{CostFunction, Method};
use crate::pbp::{Half, Monomial, PbpError, PseudoBooleanPolynomial, Role, Var, VariableRegistry};

/// Largest variable count [`verify_reduction`] will enumerate.
pub const VERIFY_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadratizeError {
    #[error("degree {0} exceeds the supported maximum of 4")]
    DegreeTooHigh(usize),
    #[error("{0} variables is too many to enumerate (limit {VERIFY_LIMIT})")]
    TooManyVariables(usize),
    #[error("reduction broken ({reason}) at assignment {assignment:?}")]
    ReductionBroken {
        reason: String,
        assignment: Vec<bool>,
    },
    #[error(transparent)]
    Polynomial(#[from] PbpError),
}

/// How to pick the pair replaced by an ancilla.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRule {
    /// Repeatedly replace the pair occurring in the most higher-order terms;
    /// ties go to the lexicographically smallest pair.
    Greedy,
    /// Replace factor-bit products `p_i·q_j`: a term's lowest `p` pairs with
    /// its lowest `q`, and a second `p` with a second `q`. Ancillas are
    /// numbered in snake order over `(i, j)`.
    FactorProducts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub left: Var,
    pub right: Var,
    pub ancilla: Var,
    /// Accumulated penalty weight, `Σ 2|a|` over the reduced terms.
    pub weight: Half,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionLedger {
    pub pairs: Vec<Substitution>,
}

impl SubstitutionLedger {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn weight_of(&self, ancilla: Var) -> Option<&Half> {
        self.pairs
            .iter()
            .find(|s| s.ancilla == ancilla)
            .map(|s| &s.weight)
    }
}

/// Quadratizes with the rule that matches the encoding method.
pub fn quadratize(
    cf: &CostFunction,
) -> Result<(CostFunction, SubstitutionLedger), QuadratizeError> {
    let rule = match cf.method {
        Method::Direct => PairRule::Greedy,
        Method::Table => PairRule::FactorProducts,
    };
    quadratize_with(cf, rule)
}

pub fn quadratize_with(
    cf: &CostFunction,
    rule: PairRule,
) -> Result<(CostFunction, SubstitutionLedger), QuadratizeError> {
    let naming = match cf.method {
        Method::Direct => AncillaNames::ById,
        Method::Table => AncillaNames::Sequential,
    };
    let (polynomial, registry, ledger) =
        quadratize_polynomial_named(&cf.polynomial, &cf.registry, rule, naming)?;
    let reduced = CostFunction {
        polynomial,
        registry,
        ..cf.clone()
    };
    Ok((reduced, ledger))
}

/// Quadratizes a bare polynomial whose variables are described by `registry`.
pub fn quadratize_polynomial(
    poly: &PseudoBooleanPolynomial,
    registry: &VariableRegistry,
    rule: PairRule,
) -> Result<
    (
        PseudoBooleanPolynomial,
        VariableRegistry,
        SubstitutionLedger,
    ),
    QuadratizeError,
> {
    quadratize_polynomial_named(poly, registry, rule, AncillaNames::Sequential)
}

#[derive(Clone, Copy)]
enum AncillaNames {
    ById,
    Sequential,
}

fn quadratize_polynomial_named(
    poly: &PseudoBooleanPolynomial,
    registry: &VariableRegistry,
    rule: PairRule,
    naming: AncillaNames,
) -> Result<
    (
        PseudoBooleanPolynomial,
        VariableRegistry,
        SubstitutionLedger,
    ),
    QuadratizeError,
> {
    let degree = poly.degree();
    if degree > 4 {
        return Err(QuadratizeError::DegreeTooHigh(degree));
    }
    let mut reducer = Reducer {
        poly: poly.clone(),
        registry: registry.clone(),
        ledger: SubstitutionLedger::default(),
        naming,
    };
    if rule == PairRule::FactorProducts {
        reducer.reduce_factor_products()?;
    }
    let support = higher_order_support(&reducer.poly);
    let next = reducer.registry.len() as u32 + 1;
    for (a, b, t) in greedy_plan(support, next) {
        let id = reducer.add_ancilla(a, b)?;
        debug_assert_eq!(id, t);
        reducer.substitute_everywhere(a, b, id);
    }
    reducer.finish()
}

/// Monomials of degree three or more.
pub(crate) fn higher_order_support(poly: &PseudoBooleanPolynomial) -> BTreeSet<Monomial> {
    poly.terms()
        .filter(|(m, _)| m.degree() >= 3)
        .map(|(m, _)| m.clone())
        .collect()
}

/// Simulates greedy most-frequent-pair reduction on a term support. The
/// choice of pair never depends on coefficients, so planning on the support
/// alone gives the exact ancilla sequence. Returns `(a, b, ancilla)` triples.
pub(crate) fn greedy_plan(mut support: BTreeSet<Monomial>, mut next: u32) -> Vec<(Var, Var, Var)> {
    let mut plan = Vec::new();
    while !support.is_empty() {
        let mut counts: BTreeMap<(Var, Var), usize> = BTreeMap::new();
        for m in &support {
            let vars = m.vars();
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    *counts.entry((vars[i], vars[j])).or_default() += 1;
                }
            }
        }
        let mut best: Option<((Var, Var), usize)> = None;
        for (&pair, &count) in &counts {
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((pair, count));
            }
        }
        let ((a, b), _) = best.expect("non-empty support has pairs");
        let t = Var(next);
        next += 1;
        support = support
            .into_iter()
            .filter_map(|m| {
                let m = if m.contains(a) && m.contains(b) {
                    m.substitute_pair(a, b, t)
                } else {
                    m
                };
                (m.degree() >= 3).then_some(m)
            })
            .collect();
        plan.push((a, b, t));
    }
    plan
}

/// Pairs designated for one term under [`PairRule::FactorProducts`].
pub(crate) fn factor_product_pairs(m: &Monomial, registry: &VariableRegistry) -> Vec<(Var, Var)> {
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for &v in m.vars() {
        match registry.get(v).map(|e| e.role) {
            Some(Role::FactorP { index }) => ps.push((index, v)),
            Some(Role::FactorQ { index }) => qs.push((index, v)),
            _ => {}
        }
    }
    ps.sort_unstable();
    qs.sort_unstable();
    ps.iter()
        .zip(&qs)
        .map(|(&(_, p), &(_, q))| (p, q))
        .collect()
}

/// Snake order: ascending `q` index for odd `p` index, descending for even.
pub(crate) fn snake_key(registry: &VariableRegistry, p: Var, q: Var) -> (i64, i64) {
    let index = |v: Var| match registry.get(v).map(|e| e.role) {
        Some(Role::FactorP { index }) | Some(Role::FactorQ { index }) => index as i64,
        _ => v.0 as i64,
    };
    let (i, j) = (index(p), index(q));
    (i, if i % 2 == 1 { j } else { -j })
}

struct Reducer {
    poly: PseudoBooleanPolynomial,
    registry: VariableRegistry,
    ledger: SubstitutionLedger,
    naming: AncillaNames,
}

impl Reducer {
    fn add_ancilla(&mut self, a: Var, b: Var) -> Result<Var, QuadratizeError> {
        let id = self.registry.len() as u32 + 1;
        let description = match self.naming {
            AncillaNames::ById => format!("x{id}"),
            AncillaNames::Sequential => format!("t{}", self.ledger.len() + 1),
        };
        let t = self
            .registry
            .push(Role::Ancilla { left: a, right: b }, description)?;
        self.ledger.pairs.push(Substitution {
            left: a,
            right: b,
            ancilla: t,
            weight: Half::zero(),
        });
        Ok(t)
    }

    fn add_weight(&mut self, ancilla: Var, coeff: &Half) {
        let entry = self
            .ledger
            .pairs
            .iter_mut()
            .find(|s| s.ancilla == ancilla)
            .expect("known ancilla");
        entry.weight += &coeff.abs().mul_int(&BigInt::from(2));
    }

    fn substitute_everywhere(&mut self, a: Var, b: Var, t: Var) {
        let hits: Vec<(Monomial, Half)> = self
            .poly
            .terms()
            .filter(|(m, _)| m.degree() >= 3 && m.contains(a) && m.contains(b))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        for (m, c) in hits {
            self.poly.add_term(m.clone(), &-&c);
            self.poly.add_term(m.substitute_pair(a, b, t), &c);
            self.add_weight(t, &c);
        }
    }

    fn reduce_factor_products(&mut self) -> Result<(), QuadratizeError> {
        let terms: Vec<(Monomial, Half)> = self
            .poly
            .terms()
            .filter(|(m, _)| m.degree() >= 3)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut needed: BTreeSet<(Var, Var)> = BTreeSet::new();
        for (m, _) in &terms {
            needed.extend(factor_product_pairs(m, &self.registry));
        }
        let mut order: Vec<(Var, Var)> = needed.into_iter().collect();
        order.sort_by_key(|&(p, q)| snake_key(&self.registry, p, q));
        let mut ancilla_of = BTreeMap::new();
        for (p, q) in order {
            ancilla_of.insert((p, q), self.add_ancilla(p, q)?);
        }
        for (m, c) in terms {
            let pairs = factor_product_pairs(&m, &self.registry);
            if pairs.is_empty() {
                continue;
            }
            let mut reduced = m.clone();
            for (p, q) in pairs {
                let t = ancilla_of[&(p, q)];
                reduced = reduced.substitute_pair(p, q, t);
                self.add_weight(t, &c);
            }
            self.poly.add_term(m, &-&c);
            self.poly.add_term(reduced, &c);
        }
        Ok(())
    }

    fn finish(
        mut self,
    ) -> Result<
        (
            PseudoBooleanPolynomial,
            VariableRegistry,
            SubstitutionLedger,
        ),
        QuadratizeError,
    > {
        for s in &self.ledger.pairs {
            let w = &s.weight;
            self.poly.add_term(Monomial::new([s.left, s.right]), w);
            self.poly.add_term(
                Monomial::new([s.left, s.ancilla]),
                &-w.mul_int(&BigInt::from(2)),
            );
            self.poly.add_term(
                Monomial::new([s.right, s.ancilla]),
                &-w.mul_int(&BigInt::from(2)),
            );
            self.poly
                .add_term(Monomial::new([s.ancilla]), &w.mul_int(&BigInt::from(3)));
        }
        debug_assert!(self.poly.degree() <= 2);
        Ok((self.poly, self.registry, self.ledger))
    }
}

/// Extends an assignment of the original variables with every ancilla set to
/// its pair product, in registry order.
pub fn extend_assignment(bits: &[bool], registry: &VariableRegistry) -> Vec<bool> {
    let mut out = bits.to_vec();
    out.resize(registry.len(), false);
    for (t, left, right) in registry.ancillas() {
        out[t.index()] = out[left.index()] && out[right.index()];
    }
    out
}

/// Outcome of an exhaustive reduction check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub minimum: Half,
    pub original_minimizers: usize,
    pub reduced_minimizers: usize,
    /// Inconsistent assignments whose reduced value does not exceed the
    /// original value at their projection. Not needed for correctness.
    pub dominance_violations: usize,
}

/// Exhaustively confirms that `reduced` has the same minimum as `original`,
/// that every reduced minimizer sets each ancilla to its pair product, that
/// those minimizers project onto original minimizers, and that the penalties
/// vanish on consistent assignments.
pub fn verify_reduction(
    original: &CostFunction,
    reduced: &CostFunction,
    ledger: &SubstitutionLedger,
) -> Result<ReductionReport, QuadratizeError> {
    verify_polynomials(
        &original.polynomial,
        original.registry.len(),
        &reduced.polynomial,
        reduced.registry.len(),
        ledger,
    )
}

/// As [`verify_reduction`], with variables `1..=original_vars` shared and the
/// remaining ids up to `reduced_vars` being ancillas.
pub fn verify_polynomials(
    original: &PseudoBooleanPolynomial,
    original_vars: usize,
    reduced: &PseudoBooleanPolynomial,
    reduced_vars: usize,
    ledger: &SubstitutionLedger,
) -> Result<ReductionReport, QuadratizeError> {
    if reduced_vars > VERIFY_LIMIT || original_vars > reduced_vars {
        return Err(QuadratizeError::TooManyVariables(reduced_vars));
    }
    let f = MaskPoly::compile(original)?;
    let g = MaskPoly::compile(reduced)?;
    let orig_values: Vec<i128> = (0..1u32 << original_vars).map(|m| f.eval(m)).collect();
    let min_f = *orig_values.iter().min().expect("at least one assignment");
    let original_minimizers = orig_values.iter().filter(|&&v| v == min_f).count();
    let proj_mask = (1u32 << original_vars) - 1;
    let bit = |mask: u32, v: Var| mask >> v.index() & 1 == 1;
    let consistent = |mask: u32| {
        ledger
            .pairs
            .iter()
            .all(|s| bit(mask, s.ancilla) == (bit(mask, s.left) && bit(mask, s.right)))
    };
    let unpack = |mask: u32| {
        (0..reduced_vars)
            .map(|i| mask >> i & 1 == 1)
            .collect::<Vec<_>>()
    };

    let mut min_g = i128::MAX;
    let mut dominance_violations = 0;
    for mask in 0..1u32 << reduced_vars {
        let value = g.eval(mask);
        let projected = orig_values[(mask & proj_mask) as usize];
        if consistent(mask) {
            if value != projected {
                return Err(QuadratizeError::ReductionBroken {
                    reason: format!("penalty active on a consistent assignment ({value} vs {projected}, halves)"),
                    assignment: unpack(mask),
                });
            }
        } else if value <= projected {
            dominance_violations += 1;
        }
        min_g = min_g.min(value);
    }
    if min_g != min_f {
        let witness = (0..1u32 << reduced_vars)
            .find(|&m| g.eval(m) == min_g)
            .unwrap_or(0);
        return Err(QuadratizeError::ReductionBroken {
            reason: format!("minimum changed from {min_f} to {min_g} (halves)"),
            assignment: unpack(witness),
        });
    }
    let mut reduced_minimizers = 0;
    for mask in 0..1u32 << reduced_vars {
        if g.eval(mask) == min_g {
            if !consistent(mask) {
                return Err(QuadratizeError::ReductionBroken {
                    reason: "minimizer with an ancilla that differs from its pair product".into(),
                    assignment: unpack(mask),
                });
            }
            reduced_minimizers += 1;
        }
    }
    Ok(ReductionReport {
        minimum: Half::from_twice(min_f),
        original_minimizers,
        reduced_minimizers,
        dominance_violations,
    })
}

/// A polynomial flattened to `(variable mask, doubled coefficient)` pairs.
struct MaskPoly {
    terms: Vec<(u32, i128)>,
}

impl MaskPoly {
    fn compile(p: &PseudoBooleanPolynomial) -> Result<Self, QuadratizeError> {
        let mut terms = Vec::with_capacity(p.term_count());
        for (m, c) in p.terms() {
            let mut mask = 0u32;
            for v in m.vars() {
                if v.index() >= VERIFY_LIMIT {
                    return Err(QuadratizeError::TooManyVariables(v.index() + 1));
                }
                mask |= 1 << v.index();
            }
            let c = c
                .twice()
                .to_i128()
                .ok_or_else(|| PbpError::OffLattice("coefficient overflow".into()))?;
            terms.push((mask, c));
        }
        Ok(MaskPoly { terms })
    }

    fn eval(&self, assignment: u32) -> i128 {
        self.terms
            .iter()
            .filter(|(m, _)| assignment & m == *m)
            .map(|(_, c)| c)
            .sum()
    }
}
