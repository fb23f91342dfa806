use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::SampleSet;
use crate::encoders::CostFunction;
use crate::ising::{format_exact, spins_to_bits};
use crate::pbp::Role;

/// Factors read off one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReading {
    pub p: BigUint,
    pub q: BigUint,
    pub carries: Vec<bool>,
    /// Every ancilla equals the product it stands for.
    pub ancilla_consistent: bool,
    /// `p·q = n` with both factors above 1.
    pub valid: bool,
}

impl FactorReading {
    /// `"(p,q)"` for a valid reading, otherwise `"invalid"`.
    pub fn label(&self) -> String {
        if self.valid {
            format!("({},{})", self.p, self.q)
        } else {
            "invalid".to_string()
        }
    }
}

/// Decodes spins (spin `−1` is bit 1) over the cost function's variables.
/// Extra trailing spins are ignored.
pub fn decode(spins: &[i8], cf: &CostFunction) -> FactorReading {
    decode_bits(&spins_to_bits(spins), cf)
}

pub fn decode_bits(bits: &[bool], cf: &CostFunction) -> FactorReading {
    let bit = |v: crate::pbp::Var| bits.get(v.index()).copied().unwrap_or(false);
    let one = BigUint::from(1u32);
    let mut p = one.clone();
    let mut q = one.clone();
    if cf.layout.fixed_leading {
        p += &one << (cf.layout.l1 - 1);
        q += &one << (cf.layout.l2 - 1);
    }
    let mut carries = Vec::new();
    let mut ancilla_consistent = true;
    for e in cf.registry.entries() {
        match e.role {
            Role::FactorP { index } if bit(e.var) => p += &one << index,
            Role::FactorQ { index } if bit(e.var) => q += &one << index,
            Role::Carry { .. } => carries.push(bit(e.var)),
            Role::Ancilla { left, right } => {
                ancilla_consistent &= bit(e.var) == (bit(left) && bit(right));
            }
            _ => {}
        }
    }
    let valid = &p * &q == cf.n && p > one && q > one;
    FactorReading {
        p,
        q,
        carries,
        ancilla_consistent,
        valid,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistogramEntry {
    pub label: String,
    pub p: BigUint,
    pub q: BigUint,
    pub energy: BigRational,
    pub count: u64,
    /// `count / total`, exact.
    pub rate: BigRational,
}

impl HistogramEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "p": self.p.to_string(),
            "q": self.q.to_string(),
            "energy": format_exact(&self.energy),
            "count": self.count,
            "rate": format!("{}/{}", self.rate.numer(), self.rate.denom()),
            "rate_float": self.rate.to_f64(),
        })
    }
}

/// Groups samples by `(energy, label)`, lowest energy first. The same label
/// can appear at several energies.
pub fn make_histogram(ss: &SampleSet, cf: &CostFunction) -> Vec<HistogramEntry> {
    let mut groups: BTreeMap<(BigRational, String), (BigUint, BigUint, u64)> = BTreeMap::new();
    for r in &ss.records {
        let reading = decode(&r.spins, cf);
        let slot = groups
            .entry((r.energy.clone(), reading.label()))
            .or_insert((reading.p, reading.q, 0));
        slot.2 += r.count;
    }
    let total = ss.total.max(1);
    groups
        .into_iter()
        .map(|((energy, label), (p, q, count))| HistogramEntry {
            label,
            p,
            q,
            energy,
            count,
            rate: BigRational::new(count.into(), total.into()),
        })
        .collect()
}

/// Sum of the rates; exactly 1 for a non-empty sample set.
pub fn total_rate(entries: &[HistogramEntry]) -> BigRational {
    entries
        .iter()
        .fold(BigRational::zero(), |acc, e| acc + &e.rate)
}
