use num_traits::ToPrimitive;
use qfactor::adiabatic::{
    evolve, evolve_converged, min_gap, problem_diagonal, success_series, AnnealSchedule,
};
use qfactor::golden::{direct_15, table_143};
use qfactor::solve::{solve_exact, EXACT_LIMIT};

fn spins(mask: usize, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
        .collect()
}

#[test]
fn success_grows_along_a_doubling_ladder() {
    let (_, _, model) = direct_15();
    let times: Vec<f64> = (0..8).map(|k| (1u32 << k) as f64).collect();
    let series = success_series(&model, &times, 1e-6).unwrap();
    for w in series.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-6, "{series:?}");
    }
    assert!(series.last().unwrap().1 >= 0.9);
}

#[test]
fn diagonal_matches_ising_energies_for_143() {
    let (_, _, model) = table_143();
    let diag = problem_diagonal(&model).unwrap();
    let n = model.n_spins();
    assert_eq!(diag.len(), 1 << n);
    for (k, d) in diag.iter().enumerate() {
        let e = model.energy(&spins(k, n), false).unwrap().to_f64().unwrap();
        assert_eq!(*d, e);
    }
}

#[test]
fn success_counts_both_ground_states_of_143() {
    let (_, _, model) = table_143();
    let evo = evolve(&model, &AnnealSchedule::new(2.0, 40)).unwrap();
    let ground = solve_exact(&model, EXACT_LIMIT).unwrap().ground_states;
    assert_eq!(ground.len(), 2);
    let probs = evo.probabilities();
    let index = |s: &Vec<i8>| {
        s.iter()
            .enumerate()
            .filter(|(_, &v)| v == -1)
            .map(|(i, _)| 1usize << i)
            .sum::<usize>()
    };
    let both: f64 = ground.iter().map(|s| probs[index(s)]).sum();
    assert!((evo.success_probability - both).abs() < 1e-15);
    assert!(evo.norm_error < 1e-9);
}

#[test]
fn fifteen_gap_is_positive_inside_the_interval() {
    let (_, _, model) = direct_15();
    let (gap, s) = min_gap(&model, 101).unwrap();
    assert!(gap > 0.0);
    assert!(s > 0.0 && s < 1.0);
}

#[test]
fn converged_evolution_is_step_stable() {
    let (_, _, model) = direct_15();
    let (evo, steps) = evolve_converged(&model, 10.0, 16, 1e-6).unwrap();
    let finer = evolve(&model, &AnnealSchedule::new(10.0, steps * 2)).unwrap();
    assert!((evo.success_probability - finer.success_probability).abs() < 1e-6);
}
