use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use qfactor::adiabatic::{self, AdiabaticError};
use qfactor::embed::{
    build_chimera, embed_grouped, embed_heuristic, set_parameters_with, unembed, ChainStrength,
    CouplerSplit, EmbedError, Embedding,
};
use qfactor::encoders::{
    build_block_system, candidate_lengths, encode_direct, encode_table, BlockLayout, BlockSystem,
    CostFunction, EncodeError,
};
use qfactor::ising::{format_exact, to_ising, IsingModel};
use qfactor::quadratize::quadratize;
use qfactor::solve::{
    decode, make_histogram, sample_sa, solve_exact, HistogramEntry, SaParams, SampleSet,
    SolveError, EXACT_LIMIT,
};

use crate::{ChainArg, EmbedArg, EmitArg, MethodArg, RunArgs, SolverArg};

/// Exit statuses: 2 bad input, 3 no embedding, 4 nothing found, 5 internal.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    NoEmbedding(String),
    NotFound(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::NoEmbedding(_) => 3,
            Failure::NotFound(_) => 4,
            Failure::Internal(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m)
            | Failure::NoEmbedding(m)
            | Failure::NotFound(m)
            | Failure::Internal(m) => m,
        }
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        match e {
            EncodeError::Polynomial(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::InvalidEmbedding(_) => Failure::Internal(e.to_string()),
            _ => Failure::NoEmbedding(e.to_string()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::TooLarge { .. } | SolveError::InvalidParameter(_) => {
                Failure::Input(e.to_string())
            }
            SolveError::Overflow => Failure::Internal(e.to_string()),
        }
    }
}

impl From<AdiabaticError> for Failure {
    fn from(e: AdiabaticError) -> Self {
        match e {
            AdiabaticError::TooLarge { .. } | AdiabaticError::InvalidSchedule(_) => {
                Failure::Input(e.to_string())
            }
            AdiabaticError::Solve(s) => s.into(),
            AdiabaticError::NonUnitaryDrift(_) => Failure::Internal(e.to_string()),
        }
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

struct Attempt {
    blocks: Option<BlockSystem>,
    reduced: CostFunction,
    model: IsingModel,
    embedding: Option<Embedding>,
    histogram: Option<Vec<HistogramEntry>>,
}

pub fn run(n: &BigUint, args: &RunArgs) -> Result<(), Failure> {
    let lengths = lengths(n, args);
    let wanted = emit_set(&args.emit);
    let mut last = None;
    for (l1, l2) in lengths {
        let mut attempt = encode(n, l1, l2, args)?;
        println!(
            "n={n} method={} l1={l1} l2={l2} qubits={} couplers={}",
            attempt.reduced.method,
            attempt.model.n_spins(),
            attempt.model.edge_count()
        );
        if args.emit_only {
            emit(&attempt, &wanted, &args.out_dir)?;
            return Ok(());
        }
        let found = solve(&mut attempt, args)?;
        if !found.is_empty() {
            for (p, q) in &found {
                println!("p={p} q={q}");
            }
            emit(&attempt, &wanted, &args.out_dir)?;
            return Ok(());
        }
        println!("no valid factorization with l1={l1} l2={l2}");
        last = Some(attempt);
    }
    if let Some(attempt) = last {
        emit(&attempt, &wanted, &args.out_dir)?;
    }
    Err(Failure::NotFound(format!(
        "no valid factorization of {n} found within the budget"
    )))
}

/// Given lengths, the preset for the number, then the balanced candidates.
/// The direct method takes the shorter length for `p`.
fn lengths(n: &BigUint, args: &RunArgs) -> Vec<(u32, u32)> {
    if let (Some(l1), Some(l2)) = (args.l1, args.l2) {
        return vec![(l1, l2)];
    }
    let mut out = Vec::new();
    if args.method == MethodArg::Table {
        if let Some((l1, l2, _)) = BlockLayout::preset(n) {
            out.push((l1, l2));
        }
    }
    for (a, b) in candidate_lengths(n) {
        let pair = if args.method == MethodArg::Direct {
            (b, a)
        } else {
            (a, b)
        };
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    out
}

fn layout(n: &BigUint, l1: u32, l2: u32, args: &RunArgs) -> BlockLayout {
    let base = match (&args.widths, args.block_width) {
        (Some(w), _) => BlockLayout::explicit(w.clone()),
        (None, Some(w)) => BlockLayout::uniform(w),
        (None, None) => BlockLayout::default_for(n, l1, l2),
    };
    match &args.carry_widths {
        Some(c) => BlockLayout {
            carry_widths: Some(c.clone()),
            ..base
        },
        None => base,
    }
}

fn encode(n: &BigUint, l1: u32, l2: u32, args: &RunArgs) -> Result<Attempt, Failure> {
    let (cf, blocks) = match args.method {
        MethodArg::Direct => (encode_direct(n, l1, l2)?, None),
        MethodArg::Table => {
            let bs = build_block_system(n, l1, l2, &layout(n, l1, l2, args))?;
            (encode_table(&bs)?, Some(bs))
        }
    };
    let (reduced, _) = quadratize(&cf).map_err(internal)?;
    let model = to_ising(&reduced).map_err(internal)?;
    Ok(Attempt {
        blocks,
        reduced,
        model,
        embedding: None,
        histogram: None,
    })
}

/// Solves the attempt in place and returns every distinct valid reading.
fn solve(attempt: &mut Attempt, args: &RunArgs) -> Result<Vec<(BigUint, BigUint)>, Failure> {
    let logical = &attempt.model;
    let samples = match args.embed {
        EmbedArg::None => solve_model(logical, args)?,
        kind => {
            let [m, cols, t] = args.chimera[..] else {
                return Err(Failure::Input(
                    "--chimera takes three values rows,cols,shore".into(),
                ));
            };
            let hw = build_chimera(m, cols, t);
            let emb = match kind {
                EmbedArg::Grouped => embed_grouped(logical, &hw)?,
                _ => embed_heuristic(logical, &hw, args.seed)?,
            };
            println!(
                "embedding: {} physical qubits, longest chain {}",
                emb.qubit_count(),
                emb.max_chain_length()
            );
            let rule = match args.chain_strength {
                ChainArg::MaxParam => ChainStrength::MaxParam,
                ChainArg::Bounded => ChainStrength::Bounded,
            };
            let physical = set_parameters_with(logical, &emb, &hw, CouplerSplit::Canonical, rule)?;
            let (restricted, ids) = physical.restricted();
            let raw = solve_model(&restricted, args)?;
            let mut states = Vec::new();
            let mut broken = 0;
            for r in &raw.records {
                let mut full = vec![1i8; hw.num_qubits()];
                for (k, &q) in ids.iter().enumerate() {
                    full[q] = r.spins[k];
                }
                let (spins, b) = unembed(&full, &emb);
                let energy = logical.energy(&spins, true).map_err(internal)?;
                broken += b as u64 * r.count;
                for _ in 0..r.count {
                    states.push((spins.clone(), energy.clone()));
                }
            }
            println!("broken chains across samples: {broken}");
            attempt.embedding = Some(emb);
            SampleSet::from_states(states, raw.params.clone(), raw.schedule)
        }
    };
    if let Some(best) = samples.lowest() {
        println!("lowest energy {}", format_exact(&best.energy));
    }
    let mut found = Vec::new();
    for r in &samples.records {
        let reading = decode(&r.spins, &attempt.reduced);
        if reading.valid
            && r.energy.is_zero()
            && !found.contains(&(reading.p.clone(), reading.q.clone()))
        {
            found.push((reading.p, reading.q));
        }
    }
    attempt.histogram = Some(make_histogram(&samples, &attempt.reduced));
    Ok(found)
}

fn solve_model(model: &IsingModel, args: &RunArgs) -> Result<SampleSet, Failure> {
    let params = SaParams {
        sweeps: args.sweeps,
        samples: args.samples,
        seed: args.seed,
        threads: args.threads,
        ..SaParams::default()
    };
    let solver = args.solver.unwrap_or(if model.n_spins() <= EXACT_LIMIT {
        SolverArg::Exact
    } else {
        SolverArg::Sa
    });
    match solver {
        SolverArg::Exact => {
            let exact = solve_exact(model, EXACT_LIMIT)?;
            println!("solver exact: {} ground states", exact.ground_states.len());
            let states = exact
                .ground_states
                .into_iter()
                .map(|s| (s, exact.ground_energy.clone()));
            Ok(SampleSet::from_states(states, params, (0.0, 0.0)))
        }
        SolverArg::Sa => {
            println!(
                "solver sa: {} samples of {} sweeps, seed {}",
                args.samples, args.sweeps, args.seed
            );
            Ok(sample_sa(model, &params)?)
        }
        SolverArg::Adiabatic => {
            let (evo, steps) = adiabatic::evolve_converged(model, args.anneal_time, 64, 1e-6)?;
            println!(
                "solver adiabatic: T={} steps={steps} success probability {:.6}",
                args.anneal_time, evo.success_probability
            );
            Ok(adiabatic::sample_state(
                model,
                &evo,
                args.samples,
                args.seed,
            )?)
        }
    }
}

fn emit_set(list: &[EmitArg]) -> Vec<EmitArg> {
    if list.contains(&EmitArg::All) {
        vec![
            EmitArg::Qubo,
            EmitArg::Ising,
            EmitArg::Blocks,
            EmitArg::Embedding,
            EmitArg::Histogram,
        ]
    } else {
        let mut v = list.to_vec();
        v.sort();
        v.dedup();
        v
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(attempt: &Attempt, wanted: &[EmitArg], dir: &Path) -> Result<(), Failure> {
    if wanted.is_empty() {
        return Ok(());
    }
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    for kind in wanted {
        match kind {
            EmitArg::Qubo => write(
                dir,
                "qubo.txt",
                &format!("{}\n", attempt.reduced.polynomial.to_canonical_text()),
            )?,
            EmitArg::Ising => {
                write(dir, "ising.json", &pretty(&attempt.model.to_json()))?;
                write(dir, "ising.txt", &attempt.model.to_coupler_text())?;
            }
            EmitArg::Blocks => match &attempt.blocks {
                Some(bs) => write(dir, "blocks.json", &pretty(&bs.to_document()))?,
                None => eprintln!("note: no block system for the direct method"),
            },
            EmitArg::Embedding => match &attempt.embedding {
                Some(emb) => write(dir, "embedding.json", &pretty(&emb.to_json()))?,
                None => eprintln!("note: no embedding was computed"),
            },
            EmitArg::Histogram => match &attempt.histogram {
                Some(h) => {
                    write(dir, "histogram.csv", &histogram_csv(h)?)?;
                    let doc =
                        serde_json::Value::Array(h.iter().map(HistogramEntry::to_json).collect());
                    write(dir, "histogram.json", &pretty(&doc))?;
                }
                None => eprintln!("note: nothing was sampled"),
            },
            EmitArg::All => unreachable!("expanded by emit_set"),
        }
    }
    Ok(())
}

fn histogram_csv(entries: &[HistogramEntry]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["energy", "p", "q", "count", "rate"])
        .map_err(internal)?;
    for e in entries {
        let (p, q) = if e.label == "invalid" {
            (String::new(), String::new())
        } else {
            (e.p.to_string(), e.q.to_string())
        };
        let rate = format!("{}", e.rate.to_f64().unwrap_or(f64::NAN));
        w.write_record([format_exact(&e.energy), p, q, e.count.to_string(), rate])
            .map_err(internal)?;
    }
    String::from_utf8(w.into_inner().map_err(internal)?).map_err(internal)
}
