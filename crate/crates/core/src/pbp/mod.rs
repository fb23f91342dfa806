//! Multilinear pseudo-Boolean polynomials with exact half-integer coefficients.
//!
//! Every encoder and transformer in the crate works on [`PseudoBooleanPolynomial`].
//! Variables are binary, so `x·x = x` is applied whenever terms are merged and a
//! monomial is just a sorted set of distinct variable ids.

mod half;
mod registry;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use half::Half;
pub use registry::{RegistryEntry, Role, VariableRegistry};

/// Binary variable id. Ids start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(pub u32);

impl Var {
    /// Zero-based position, used as the spin index of the matching Ising variable.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(index: usize) -> Var {
        Var(index as u32 + 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A sorted set of distinct variables; the empty monomial is the constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn constant() -> Self {
        Monomial(Vec::new())
    }

    /// Sorts and deduplicates, which is exactly the `x² = x` reduction.
    pub fn new(vars: impl IntoIterator<Item = Var>) -> Self {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Product of two monomials (set union).
    pub fn union(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes `a` and `b` and inserts `t`.
    pub fn substitute_pair(&self, a: Var, b: Var, t: Var) -> Monomial {
        Monomial::new(
            self.0
                .iter()
                .copied()
                .filter(|&v| v != a && v != b)
                .chain([t]),
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", names.join("·"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbpError {
    #[error("assignment does not cover variable {0}")]
    MissingVariable(Var),
    #[error("coefficient product {0} is not a multiple of 1/2")]
    OffLattice(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("role {0} is already registered")]
    DuplicateRole(String),
}

/// Summary used by the coefficient-range analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyStats {
    pub degree: usize,
    /// Largest absolute coefficient, ignoring the constant term.
    pub max_abs_coeff: Half,
    pub term_count: usize,
}

/// Exact multilinear polynomial over binary variables.
///
/// Invariants: no stored coefficient is zero, and every key is a [`Monomial`]
/// (sorted, duplicate-free). The constant term lives under the empty monomial.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PseudoBooleanPolynomial {
    terms: BTreeMap<Monomial, Half>,
}

impl PseudoBooleanPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: impl Into<Half>) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::constant(), &value.into());
        p
    }

    /// The polynomial `x`.
    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new([v]), &Half::from_int(1));
        p
    }

    /// Builds a polynomial from `(coefficient, variables)` pairs with integer coefficients.
    pub fn from_terms<I, V>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, V)>,
        V: IntoIterator<Item = u32>,
    {
        let mut p = Self::zero();
        for (coeff, vars) in terms {
            p.add_term(
                Monomial::new(vars.into_iter().map(Var)),
                &Half::from_int(coeff),
            );
        }
        p
    }

    /// Adds `coeff · monomial`, merging with any existing term.
    pub fn add_term(&mut self, monomial: Monomial, coeff: &Half) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(monomial) {
            Entry::Vacant(slot) => {
                slot.insert(coeff.clone());
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Half)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, vars: &[u32]) -> Half {
        let key = Monomial::new(vars.iter().copied().map(Var));
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Half {
        self.terms
            .get(&Monomial::constant())
            .cloned()
            .unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().iter().copied())
            .collect()
    }

    /// Number of distinct variables that appear in some term.
    pub fn var_count(&self) -> usize {
        self.variables().len()
    }

    /// Exact product with `x² = x` applied while merging.
    pub fn multiply(&self, other: &Self) -> Result<Self, PbpError> {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let coeff = ca
                    .checked_mul(cb)
                    .ok_or_else(|| PbpError::OffLattice(format!("{ca}·{cb}")))?;
                out.add_term(ma.union(mb), &coeff);
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Result<Self, PbpError> {
        self.multiply(self)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.mul_int(k));
        }
        out
    }

    /// Evaluates at an assignment given as a map from variable to bit.
    pub fn evaluate(&self, assignment: &BTreeMap<Var, bool>) -> Result<Half, PbpError> {
        self.evaluate_with(|v| assignment.get(&v).copied())
    }

    /// Evaluates with bits indexed by [`Var::index`].
    pub fn evaluate_bits(&self, bits: &[bool]) -> Result<Half, PbpError> {
        self.evaluate_with(|v| bits.get(v.index()).copied())
    }

    pub fn evaluate_with(&self, lookup: impl Fn(Var) -> Option<bool>) -> Result<Half, PbpError> {
        let mut total = Half::zero();
        for (m, c) in &self.terms {
            let mut on = true;
            for &v in m.vars() {
                if !lookup(v).ok_or(PbpError::MissingVariable(v))? {
                    on = false;
                }
            }
            if on {
                total += c;
            }
        }
        Ok(total)
    }

    pub fn stats(&self) -> PolyStats {
        let max_abs_coeff = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() > 0)
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_default();
        PolyStats {
            degree: self.degree(),
            max_abs_coeff,
            term_count: self.terms.len(),
        }
    }

    /// Rebuilds the term map from scratch. Construction already keeps the
    /// invariants, so this is a fixed point on every value the API produces.
    pub fn normalize(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.vars().iter().copied()), c);
        }
        out
    }

    /// Renames variables; `map` must be injective on the variables present.
    pub fn relabel(&self, map: impl Fn(Var) -> Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(Monomial::new(m.vars().iter().map(|&v| map(v))), c);
        }
        out
    }
}

impl Add for &PseudoBooleanPolynomial {
    type Output = PseudoBooleanPolynomial;
    fn add(self, rhs: &PseudoBooleanPolynomial) -> PseudoBooleanPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &PseudoBooleanPolynomial {
    type Output = PseudoBooleanPolynomial;
    fn sub(self, rhs: &PseudoBooleanPolynomial) -> PseudoBooleanPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Neg for &PseudoBooleanPolynomial {
    type Output = PseudoBooleanPolynomial;
    fn neg(self) -> PseudoBooleanPolynomial {
        PseudoBooleanPolynomial::zero().sub(self)
    }
}

impl fmt::Display for PseudoBooleanPolynomial {
    /// Human-readable form, highest degree first: `128x1x2x3 - 56x1x2 + ... + 196`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(a.cmp(b)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let negative = c.twice() < &BigInt::from(0);
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else {
                if mag != Half::from_int(1) {
                    write!(f, "{mag}")?;
                }
                for v in m.vars() {
                    write!(f, "{v}")?;
                }
            }
        }
        Ok(())
    }
}
