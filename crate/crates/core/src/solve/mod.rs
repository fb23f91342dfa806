//! Ground-state search and sampling for Ising models, and decoding of spin
//! states back to factors.

mod decode;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ising::{format_exact, IsingModel};

pub use decode::{decode, decode_bits, make_histogram, total_rate, FactorReading, HistogramEntry};

/// Default cap on exhaustive enumeration.
pub const EXACT_LIMIT: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("{n} spins exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("model parameters do not fit in 64-bit arithmetic")]
    Overflow,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Integer form of a model: every value is a numerator over `denominator`.
#[derive(Clone, Debug)]
pub struct CompiledIsing {
    pub n: usize,
    pub h: Vec<i64>,
    pub adjacency: Vec<Vec<(usize, i64)>>,
    pub offset: i64,
    pub denominator: i64,
}

impl CompiledIsing {
    pub fn new(model: &IsingModel) -> Result<Self, SolveError> {
        let small = |v: &BigInt| {
            v.to_i64()
                .filter(|x| x.unsigned_abs() < 1 << 40)
                .ok_or(SolveError::Overflow)
        };
        let n = model.n_spins();
        let h = model
            .h_numerators()
            .iter()
            .map(small)
            .collect::<Result<Vec<_>, _>>()?;
        let mut adjacency = vec![Vec::new(); n];
        for (&(a, b), v) in model.j_numerators() {
            let v = small(v)?;
            adjacency[a].push((b, v));
            adjacency[b].push((a, v));
        }
        Ok(CompiledIsing {
            n,
            h,
            adjacency,
            offset: small(model.offset_numerator())?,
            denominator: small(model.denominator())?,
        })
    }

    /// Energy numerator including the offset.
    pub fn energy(&self, spins: &[i8]) -> i64 {
        let mut e = self.offset;
        for i in 0..self.n {
            let s = spins[i] as i64;
            e += self.h[i] * s;
            for &(j, v) in &self.adjacency[i] {
                if j > i {
                    e += v * s * spins[j] as i64;
                }
            }
        }
        e
    }

    /// `h_i + Σ_j J_ij s_j`.
    fn local_field(&self, spins: &[i8], i: usize) -> i64 {
        self.h[i]
            + self.adjacency[i]
                .iter()
                .map(|&(j, v)| v * spins[j] as i64)
                .sum::<i64>()
    }

    pub fn value(&self, numerator: i64) -> BigRational {
        BigRational::new(numerator.into(), self.denominator.into())
    }
}

fn spins_of_mask(mask: u64, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSolution {
    /// Minimum energy including the offset.
    pub ground_energy: BigRational,
    /// Every minimizing spin vector, in increasing order of the bit mask
    /// with bit `i` set for spin `−1`.
    pub ground_states: Vec<Vec<i8>>,
}

/// Exhaustive minimization by Gray-code enumeration.
pub fn solve_exact(model: &IsingModel, limit: usize) -> Result<ExactSolution, SolveError> {
    let c = CompiledIsing::new(model)?;
    if c.n > limit || c.n > 40 {
        return Err(SolveError::TooLarge { n: c.n, limit });
    }
    let n = c.n;
    let high = n.min(6);
    let low = n - high;
    let chunks: Vec<(i64, Vec<u64>)> = (0..1u64 << high)
        .into_par_iter()
        .map(|prefix| {
            let mut spins = spins_of_mask(prefix << low, n);
            let mut energy = c.energy(&spins);
            let mut best = energy;
            let mut states = vec![prefix << low];
            let mut mask = prefix << low;
            for step in 1..1u64 << low {
                let i = step.trailing_zeros() as usize;
                energy -= 2 * spins[i] as i64 * c.local_field(&spins, i);
                spins[i] = -spins[i];
                mask ^= 1 << i;
                if energy < best {
                    best = energy;
                    states.clear();
                }
                if energy == best {
                    states.push(mask);
                }
            }
            (best, states)
        })
        .collect();
    let best = chunks
        .iter()
        .map(|(e, _)| *e)
        .min()
        .expect("at least one chunk");
    let mut masks: Vec<u64> = chunks
        .into_iter()
        .filter(|(e, _)| *e == best)
        .flat_map(|(_, s)| s)
        .collect();
    masks.sort_unstable();
    Ok(ExactSolution {
        ground_energy: c.value(best),
        ground_states: masks.into_iter().map(|m| spins_of_mask(m, n)).collect(),
    })
}

/// Simulated-annealing settings. Temperatures are in the model's energy units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub sweeps: usize,
    pub samples: usize,
    /// Starting temperature; defaults to the largest absolute parameter.
    pub t_hot: Option<f64>,
    pub t_cold: f64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            sweeps: 1000,
            samples: 1000,
            t_hot: None,
            t_cold: 0.1,
            seed: 0,
            threads: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRecord {
    pub spins: Vec<i8>,
    pub energy: BigRational,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    /// Distinct states, ascending by energy, then by spin vector.
    pub records: Vec<SampleRecord>,
    pub total: u64,
    pub params: SaParams,
    /// Geometric schedule actually used, `(t_hot, t_cold)`.
    pub schedule: (f64, f64),
}

impl SampleSet {
    /// Aggregates individual states into records.
    pub fn from_states(
        states: impl IntoIterator<Item = (Vec<i8>, BigRational)>,
        params: SaParams,
        schedule: (f64, f64),
    ) -> SampleSet {
        let mut agg: BTreeMap<Vec<i8>, (BigRational, u64)> = BTreeMap::new();
        let mut total = 0;
        for (spins, energy) in states {
            agg.entry(spins).or_insert((energy, 0)).1 += 1;
            total += 1;
        }
        let mut records: Vec<SampleRecord> = agg
            .into_iter()
            .map(|(spins, (energy, count))| SampleRecord {
                spins,
                energy,
                count,
            })
            .collect();
        records.sort_by(|a, b| a.energy.cmp(&b.energy).then_with(|| a.spins.cmp(&b.spins)));
        SampleSet {
            records,
            total,
            params,
            schedule,
        }
    }

    pub fn lowest(&self) -> Option<&SampleRecord> {
        self.records.first()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total": self.total,
            "params": self.params,
            "schedule": {"t_hot": self.schedule.0, "t_cold": self.schedule.1},
            "records": self.records.iter().map(|r| serde_json::json!({
                "spins": r.spins,
                "energy": format_exact(&r.energy),
                "count": r.count,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Temperature at sweep `k` of a geometric schedule.
fn temperature(t_hot: f64, t_cold: f64, k: usize, sweeps: usize) -> f64 {
    if sweeps <= 1 {
        return t_cold;
    }
    t_hot * (t_cold / t_hot).powf(k as f64 / (sweeps - 1) as f64)
}

/// Independent single-spin-flip Metropolis restarts. Restart `r` draws from
/// stream `r` of a generator seeded with `params.seed`, so results do not
/// depend on the thread count.
pub fn sample_sa(model: &IsingModel, params: &SaParams) -> Result<SampleSet, SolveError> {
    if params.samples == 0 {
        return Err(SolveError::InvalidParameter(
            "samples must be at least 1".into(),
        ));
    }
    if !(params.t_cold > 0.0) {
        return Err(SolveError::InvalidParameter(
            "t_cold must be positive".into(),
        ));
    }
    let c = CompiledIsing::new(model)?;
    let t_hot = params
        .t_hot
        .unwrap_or_else(|| model.max_abs_param().to_f64().unwrap_or(1.0))
        .max(params.t_cold);
    let den = c.denominator as f64;
    let run = |r: usize| -> (Vec<i8>, i64) {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(r as u64);
        let mut spins: Vec<i8> = (0..c.n)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        let mut field: Vec<i64> = (0..c.n).map(|i| c.local_field(&spins, i)).collect();
        for k in 0..params.sweeps {
            let beta = 1.0 / (temperature(t_hot, params.t_cold, k, params.sweeps) * den);
            for i in 0..c.n {
                let delta = -2 * spins[i] as i64 * field[i];
                let accept = delta <= 0 || {
                    let x = delta as f64 * beta;
                    // exp(-40) is far below the generator's resolution
                    x < 40.0 && rng.random::<f64>() < (-x).exp()
                };
                if accept {
                    spins[i] = -spins[i];
                    let s = 2 * spins[i] as i64;
                    for &(j, v) in &c.adjacency[i] {
                        field[j] += v * s;
                    }
                }
            }
        }
        let e = c.energy(&spins);
        (spins, e)
    };
    let go = || {
        (0..params.samples)
            .into_par_iter()
            .map(run)
            .collect::<Vec<_>>()
    };
    let results = match params.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| SolveError::InvalidParameter(e.to_string()))?
            .install(go),
        None => go(),
    };
    Ok(SampleSet::from_states(
        results.into_iter().map(|(s, e)| (s, c.value(e))),
        params.clone(),
        (t_hot, params.t_cold),
    ))
}
