//! State-vector simulation of `H(s) = (1 − s)·H_B + s·H_P`, `s = t/T`, with
//! `H_B = −Σ σ_x` and `H_P` the Ising model (offset dropped).
//!
//! Basis state `k` has spin `i` equal to `−1` exactly when bit `i` of `k` is set.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::ising::IsingModel;
use crate::solve::{solve_exact, CompiledIsing, SaParams, SampleSet, SolveError};

pub const EVOLVE_LIMIT: usize = 14;
pub const GAP_LIMIT: usize = 12;
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Largest dimension handled by dense diagonalization in [`min_gap`].
const DENSE_DIM: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdiabaticError {
    #[error("{n} spins exceeds the simulator limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("state norm drifted to {0}")]
    NonUnitaryDrift(f64),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Linear interpolation over `total_time`, integrated in `steps` equal steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnealSchedule {
    pub total_time: f64,
    pub steps: usize,
}

impl AnnealSchedule {
    pub fn new(total_time: f64, steps: usize) -> Self {
        AnnealSchedule { total_time, steps }
    }

    pub fn s(&self, t: f64) -> f64 {
        if self.total_time == 0.0 {
            1.0
        } else {
            (t / self.total_time).clamp(0.0, 1.0)
        }
    }
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub state: Vec<Complex64>,
    /// Total probability on the ground states of `H_P`.
    pub success_probability: f64,
    pub norm_error: f64,
}

impl Evolution {
    /// `|ψ_k|²` for every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.state.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Diagonal of `H_P` without the offset, in model units.
pub fn problem_diagonal(model: &IsingModel) -> Result<Vec<f64>, AdiabaticError> {
    let n = model.n_spins();
    if n > EVOLVE_LIMIT {
        return Err(AdiabaticError::TooLarge {
            n,
            limit: EVOLVE_LIMIT,
        });
    }
    let c = CompiledIsing::new(model)?;
    let den = c.denominator as f64;
    Ok((0..1usize << n)
        .map(|k| {
            let spins: Vec<i8> = (0..n)
                .map(|i| if k >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            (c.energy(&spins) - c.offset) as f64 / den
        })
        .collect())
}

fn ground_indices(model: &IsingModel) -> Result<Vec<usize>, AdiabaticError> {
    let sol = solve_exact(model, EVOLVE_LIMIT)?;
    Ok(sol
        .ground_states
        .iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .filter(|(_, &v)| v < 0)
                .map(|(i, _)| 1usize << i)
                .sum()
        })
        .collect())
}

/// `exp(iθ σ_x)` on every qubit.
fn rotate_x(state: &mut [Complex64], n: usize, theta: f64) {
    let (c, s) = (theta.cos(), theta.sin());
    let is = Complex64::new(0.0, s);
    for i in 0..n {
        let bit = 1usize << i;
        for k in 0..state.len() {
            if k & bit == 0 {
                let (a, b) = (state[k], state[k | bit]);
                state[k] = a * c + b * is;
                state[k | bit] = b * c + a * is;
            }
        }
    }
}

/// `exp(−iτ·diag)`.
fn phase(state: &mut [Complex64], diag: &[f64], tau: f64) {
    for (a, &e) in state.iter_mut().zip(diag) {
        *a *= Complex64::from_polar(1.0, -e * tau);
    }
}

/// Second-order split step of `exp(−i·dt·H(s))`.
fn strang(state: &mut [Complex64], n: usize, diag: &[f64], s: f64, dt: f64) {
    phase(state, diag, s * dt / 2.0);
    // −(1 − s)·H_B = (1 − s)·Σσ_x, so the step is a rotation by +(1 − s)·dt
    rotate_x(state, n, (1.0 - s) * dt);
    phase(state, diag, s * dt / 2.0);
}

/// Evolves the uniform superposition under the schedule. Each step applies
/// a fourth-order composition of unitary split steps with `H` frozen at the
/// step midpoint, so the norm is preserved up to rounding.
pub fn evolve(model: &IsingModel, sched: &AnnealSchedule) -> Result<Evolution, AdiabaticError> {
    if sched.steps == 0 || !(sched.total_time >= 0.0) || !sched.total_time.is_finite() {
        return Err(AdiabaticError::InvalidSchedule(format!("{sched:?}")));
    }
    let n = model.n_spins();
    let diag = problem_diagonal(model)?;
    let dim = 1usize << n;
    let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut state = vec![amp; dim];
    let dt = sched.total_time / sched.steps as f64;
    let cbrt2 = 2f64.powf(1.0 / 3.0);
    let w1 = 1.0 / (2.0 - cbrt2);
    let w0 = -cbrt2 / (2.0 - cbrt2);
    if dt > 0.0 {
        for k in 0..sched.steps {
            let s = sched.s((k as f64 + 0.5) * dt);
            strang(&mut state, n, &diag, s, w1 * dt);
            strang(&mut state, n, &diag, s, w0 * dt);
            strang(&mut state, n, &diag, s, w1 * dt);
        }
    }
    let norm: f64 = state.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let norm_error = (norm - 1.0).abs();
    if norm_error > NORM_TOLERANCE {
        return Err(AdiabaticError::NonUnitaryDrift(norm));
    }
    let success_probability = ground_indices(model)?
        .iter()
        .map(|&k| state[k].norm_sqr())
        .sum();
    Ok(Evolution {
        state,
        success_probability,
        norm_error,
    })
}

/// Doubles the step count from `initial_steps` until the success
/// probability changes by less than `tolerance`.
pub fn evolve_converged(
    model: &IsingModel,
    total_time: f64,
    initial_steps: usize,
    tolerance: f64,
) -> Result<(Evolution, usize), AdiabaticError> {
    let mut steps = initial_steps.max(1);
    let mut prev = evolve(model, &AnnealSchedule::new(total_time, steps))?;
    loop {
        let next = evolve(model, &AnnealSchedule::new(total_time, steps * 2))?;
        let change = (next.success_probability - prev.success_probability).abs();
        steps *= 2;
        if change < tolerance || steps >= 1 << 22 {
            return Ok((next, steps));
        }
        prev = next;
    }
}

/// `(T, success probability)` for each total time, evaluated in parallel.
pub fn success_series(
    model: &IsingModel,
    times: &[f64],
    tolerance: f64,
) -> Result<Vec<(f64, f64)>, AdiabaticError> {
    times
        .par_iter()
        .map(|&t| {
            Ok((
                t,
                evolve_converged(model, t, 64, tolerance)?
                    .0
                    .success_probability,
            ))
        })
        .collect()
}

/// Draws `samples` measurement outcomes from the final state.
pub fn sample_state(
    model: &IsingModel,
    evo: &Evolution,
    samples: usize,
    seed: u64,
) -> Result<SampleSet, AdiabaticError> {
    let n = model.n_spins();
    let probs = evo.probabilities();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(samples);
    for _ in 0..samples {
        let x = rng.random::<f64>() * acc;
        let k = cumulative.partition_point(|&c| c <= x).min(probs.len() - 1);
        let spins: Vec<i8> = (0..n)
            .map(|i| if k >> i & 1 == 1 { -1 } else { 1 })
            .collect();
        let e = model.energy(&spins, true).expect("length matches");
        states.push((spins, e));
    }
    let params = SaParams {
        sweeps: 0,
        samples,
        t_hot: None,
        t_cold: 0.0,
        seed,
        threads: None,
    };
    Ok(SampleSet::from_states(states, params, (0.0, 0.0)))
}

/// `y = H(s)·x`.
fn apply(n: usize, diag: &[f64], s: f64, x: &[f64], y: &mut [f64]) {
    for k in 0..x.len() {
        let mut v = s * diag[k] * x[k];
        for i in 0..n {
            v -= (1.0 - s) * x[k ^ (1 << i)];
        }
        y[k] = v;
    }
}

fn dense_hamiltonian(n: usize, diag: &[f64], s: f64) -> DMatrix<f64> {
    let dim = diag.len();
    DMatrix::from_fn(dim, dim, |a, b| {
        if a == b {
            s * diag[a]
        } else if (a ^ b).count_ones() == 1 && (a ^ b) < 1 << n {
            -(1.0 - s)
        } else {
            0.0
        }
    })
}

/// Lowest eigenpair of `H(s)` restricted to the complement of `deflate`, by
/// Lanczos with full reorthogonalization.
fn lanczos_lowest(
    n: usize,
    diag: &[f64],
    s: f64,
    deflate: &[Vec<f64>],
    seed: u64,
) -> (f64, Vec<f64>) {
    let dim = diag.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let project = |v: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for _ in 0..2 {
            for b in basis {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
    };
    let normalize = |v: &mut Vec<f64>| {
        let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nrm);
        nrm
    };
    let mut q: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    project(&mut q, deflate);
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let max_iter = (dim - deflate.len()).min(300);
    let mut last = f64::INFINITY;
    loop {
        let k = basis.len() - 1;
        apply(n, diag, s, &basis[k], &mut w);
        let a: f64 = w.iter().zip(&basis[k]).map(|(x, y)| x * y).sum();
        alphas.push(a);
        let mut r = w.clone();
        project(&mut r, deflate);
        project(&mut r, &basis);
        let (theta, vecs) = tridiagonal_lowest(&alphas, &betas);
        let done = basis.len() >= max_iter
            || (basis.len() % 5 == 0 && (theta - last).abs() < 1e-12 * theta.abs().max(1.0));
        last = theta;
        let beta = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if done || beta < 1e-12 {
            let mut v = vec![0.0; dim];
            for (c, b) in vecs.iter().zip(&basis) {
                v.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
            }
            normalize(&mut v);
            return (theta, v);
        }
        betas.push(beta);
        r.iter_mut().for_each(|x| *x /= beta);
        basis.push(r);
    }
}

fn tridiagonal_lowest(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |a, b| {
        if a == b {
            alphas[a]
        } else if a.abs_diff(b) == 1 {
            betas[a.min(b)]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    (val, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// `E₁(s) − E₀(s)` counted with multiplicity, so a degenerate ground level has gap 0.
pub fn gap_at(model: &IsingModel, s: f64) -> Result<f64, AdiabaticError> {
    let n = model.n_spins();
    if n > GAP_LIMIT {
        return Err(AdiabaticError::TooLarge {
            n,
            limit: GAP_LIMIT,
        });
    }
    let diag = problem_diagonal(model)?;
    Ok(gap_with(n, &diag, s))
}

fn gap_with(n: usize, diag: &[f64], s: f64) -> f64 {
    let dim = diag.len();
    if dim == 1 {
        return 0.0;
    }
    if dim <= DENSE_DIM {
        let mut ev: Vec<f64> = SymmetricEigen::new(dense_hamiltonian(n, diag, s))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        return ev[1] - ev[0];
    }
    let (e0, v0) = lanczos_lowest(n, diag, s, &[], 1);
    let (e1, _) = lanczos_lowest(n, diag, s, &[v0], 2);
    e1 - e0
}

/// Smallest gap over `resolution` evenly spaced points of `s ∈ [0, 1]`, and where it occurs.
pub fn min_gap(model: &IsingModel, resolution: usize) -> Result<(f64, f64), AdiabaticError> {
    let series = gap_series(model, resolution)?;
    Ok(series
        .into_iter()
        .map(|(s, g)| (g, s))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("resolution ≥ 2"))
}

/// `(s, gap)` at `resolution` evenly spaced points, evaluated in parallel.
pub fn gap_series(
    model: &IsingModel,
    resolution: usize,
) -> Result<Vec<(f64, f64)>, AdiabaticError> {
    let n = model.n_spins();
    if n > GAP_LIMIT {
        return Err(AdiabaticError::TooLarge {
            n,
            limit: GAP_LIMIT,
        });
    }
    if resolution < 2 {
        return Err(AdiabaticError::InvalidSchedule(
            "resolution must be at least 2".into(),
        ));
    }
    let diag = problem_diagonal(model)?;
    Ok((0..resolution)
        .into_par_iter()
        .map(|k| {
            let s = k as f64 / (resolution - 1) as f64;
            (s, gap_with(n, &diag, s))
        })
        .collect())
}

/// The model's parameters as floats, for reporting.
pub fn max_param(model: &IsingModel) -> f64 {
    model.max_abs_param().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::golden::direct_15_model;
    use num_rational::BigRational;

    #[test]
    fn sudden_limit_is_uniform_overlap() {
        let evo = evolve(&direct_15_model(), &AnnealSchedule::new(0.0, 1)).unwrap();
        assert!((evo.success_probability - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn gap_of_the_transverse_field_alone() {
        assert!((gap_at(&direct_15_model(), 0.0).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn gap_at_one_scales_with_the_model() {
        let m = direct_15_model();
        let g = gap_at(&m, 1.0).unwrap();
        let scaled = m.scaled(&BigRational::from_integer(3.into()));
        assert!((gap_at(&scaled, 1.0).unwrap() - 3.0 * g).abs() < 1e-9);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let m = direct_15_model();
        let diag = problem_diagonal(&m).unwrap();
        for s in [0.0, 0.3, 0.7, 1.0] {
            let mut ev: Vec<f64> = SymmetricEigen::new(dense_hamiltonian(4, &diag, s))
                .eigenvalues
                .iter()
                .copied()
                .collect();
            ev.sort_by(f64::total_cmp);
            let (e0, v0) = lanczos_lowest(4, &diag, s, &[], 1);
            let (e1, _) = lanczos_lowest(4, &diag, s, &[v0], 2);
            assert!(
                (e0 - ev[0]).abs() < 1e-8 && (e1 - ev[1]).abs() < 1e-8,
                "s = {s}"
            );
        }
    }
}
