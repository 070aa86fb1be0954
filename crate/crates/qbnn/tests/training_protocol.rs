//! End-to-end protocol checks: the full circuit against the diagonal
//! model, amplitude-amplification limits, and the classical baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qbnn::bnn::{
    exhaustive_argmax, BinaryValue, CallCounter, Edge, NetworkTopology, NodeId, TrainingExample,
    TrainingSet, WeightString,
};
use qbnn::trainer::{
    default_delta_theta, default_rounds, diagonal_model, grover_success_probability, train,
    PhaseProfile, QuantumTrainingRun, TrainMode, TrainingConfig,
};

const M: BinaryValue = BinaryValue::Minus;

fn random_training_set(rng: &mut ChaCha8Rng, arity: usize, examples: usize) -> TrainingSet {
    let examples = (0..examples)
        .map(|_| {
            let inputs = (0..arity)
                .map(|_| BinaryValue::from_bool(rng.gen()))
                .collect();
            TrainingExample::new(inputs, BinaryValue::from_bool(rng.gen()))
        })
        .collect();
    TrainingSet::new(examples).unwrap()
}

/// Four inputs, two hidden neurons on disjoint input pairs, one output.
fn four_two_one() -> NetworkTopology {
    let e = |fl, fi, tl, ti, slot| Edge {
        from: NodeId::new(fl, fi),
        to: NodeId::new(tl, ti),
        slot,
    };
    NetworkTopology::new(
        vec![4, 2, 1],
        vec![
            e(0, 0, 1, 0, 0),
            e(0, 1, 1, 0, 1),
            e(0, 2, 1, 1, 2),
            e(0, 3, 1, 1, 3),
            e(1, 0, 2, 0, 4),
            e(1, 1, 2, 0, 5),
        ],
    )
    .unwrap()
}

fn assert_full_matches_diagonal(
    topology: &NetworkTopology,
    ts: &TrainingSet,
    rounds: usize,
    tol: f64,
) {
    let full = train(
        topology,
        ts,
        &TrainingConfig {
            mode: TrainMode::FullCircuit,
            rounds: Some(rounds),
            delta_theta: None,
        },
    )
    .unwrap();
    let diag = train(
        topology,
        ts,
        &TrainingConfig {
            mode: TrainMode::DiagonalModel,
            rounds: Some(rounds),
            delta_theta: None,
        },
    )
    .unwrap();
    let gap = full.distribution.linf_distance(&diag.distribution);
    assert!(gap <= tol, "full vs diagonal gap {} exceeds {}", gap, tol);
}

#[test]
fn full_circuit_matches_diagonal_model_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let n = rng.gen_range(1..=6);
        let ts = random_training_set(&mut rng, 2, n);
        assert_full_matches_diagonal(&NetworkTopology::single_neuron(), &ts, 1, 1e-9);
        let deep_rounds = rng.gen_range(1..=6);
        assert_full_matches_diagonal(&NetworkTopology::two_two_one(), &ts, deep_rounds, 1e-9);
    }
}

#[test]
fn full_circuit_matches_diagonal_model_on_wide_inputs() {
    let topology = four_two_one();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..5 {
        let ts = random_training_set(&mut rng, 4, 4);
        assert_full_matches_diagonal(&topology, &ts, default_rounds(6), 1e-9);
    }
}

#[test]
fn planted_single_example_set_is_solved_exactly_in_one_round() {
    // n copies of the example (inputs = -w*, target = -1) are classified
    // correctly only by w*, so the run is textbook amplitude amplification
    // with one marked string out of four: certainty after one round.
    let topology = NetworkTopology::single_neuron();
    for (w_star, n) in [(0b10usize, 4usize), (0b01, 3), (0b11, 1)] {
        let star = WeightString::from_index(w_star, 2).unwrap();
        let inputs: Vec<BinaryValue> = star.values().iter().map(|v| -*v).collect();
        let examples = vec![TrainingExample::new(inputs, M); n];
        let ts = TrainingSet::new(examples).unwrap();

        let outcome = train(
            &topology,
            &ts,
            &TrainingConfig {
                mode: TrainMode::FullCircuit,
                rounds: Some(1),
                delta_theta: None,
            },
        )
        .unwrap();
        let p_star = outcome.distribution.probability(w_star);
        assert!(
            (p_star - 1.0).abs() < 1e-9,
            "w*={:02b}: probability {}",
            w_star,
            p_star
        );
        assert_eq!(outcome.distribution.argmax(), w_star);

        let analytic = grover_success_probability(4, 1, 1);
        assert!((p_star - analytic).abs() < 1e-9);
    }
}

#[test]
fn deep_task_classical_baseline_has_two_perfect_strings() {
    let topology = NetworkTopology::two_two_one();
    let ts = TrainingSet::select_second_input();
    let mut counter = CallCounter::new();
    let result = exhaustive_argmax(&topology, &ts, &mut counter).unwrap();
    assert_eq!(result.best_score, 4);
    assert_eq!(result.num_best, 2);
    assert_eq!(result.best.index(), 59);
    assert_eq!(counter.network_calls, 4 * 64);

    let profile = PhaseProfile::from_instance(&topology, &ts).unwrap();
    assert_eq!(profile.argmax_set(), vec![59, 62]);
}

#[test]
fn deep_task_full_circuit_agrees_with_diagonal_at_default_and_next_rounds() {
    let topology = NetworkTopology::two_two_one();
    let ts = TrainingSet::select_second_input();
    assert_eq!(default_rounds(6), 6);
    for rounds in [6usize, 7] {
        assert_full_matches_diagonal(&topology, &ts, rounds, 1e-9);
    }
}

#[test]
fn overcrowded_maxima_are_not_amplified_above_twice_uniform() {
    // With at least half the strings at the top score, no single string
    // should end above 2/N, and the top set keeps at most its Grover mass.
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let n = 8u32;
    for t in [4usize, 6] {
        let dim = 1usize << t;
        for num_top in [dim / 2, 3 * dim / 4, dim] {
            let mut scores: Vec<u32> = (0..dim)
                .map(|_| rng.gen_range(0..n)) // strictly below the max
                .collect();
            for s in scores.iter_mut().take(num_top) {
                *s = n;
            }
            let profile = PhaseProfile::from_scores(scores).unwrap();
            let rounds = default_rounds(t);
            let dist = diagonal_model(&profile, default_delta_theta(n as usize), rounds).unwrap();
            let top_mass = dist.mass_on(&profile.argmax_set());
            let bound = 2.0 * num_top as f64 / dim as f64;
            assert!(
                top_mass <= bound.min(1.0) + 1e-6,
                "t={} top={}: mass {}",
                t,
                num_top,
                top_mass
            );
            for &i in &profile.argmax_set() {
                assert!(
                    dist.probability(i) <= 2.0 / dim as f64 + 1e-6,
                    "t={} top={}: string {} at {}",
                    t,
                    num_top,
                    i,
                    dist.probability(i)
                );
            }
        }
    }
}

#[test]
fn non_weight_wires_stay_clean_across_rounds() {
    let topology = NetworkTopology::two_two_one();
    let ts = TrainingSet::select_second_input();
    let mut run = QuantumTrainingRun::new(&topology).unwrap();
    let delta = default_delta_theta(ts.len());
    for round in 0..3 {
        run.marking_cycle(&ts, delta).unwrap();
        run.diffusion_on_weights().unwrap();
        let rest = run
            .state()
            .marginal_distribution(&run.layout().non_weight_wires())
            .unwrap();
        let max = rest.iter().cloned().fold(0.0, f64::max);
        assert!(
            (max - 1.0).abs() < 1e-10,
            "round {}: non-weight register leaked, max prob {}",
            round,
            max
        );
    }
}

#[test]
fn default_training_on_the_small_task_matches_the_classical_winner() {
    let topology = NetworkTopology::single_neuron();
    let ts = TrainingSet::select_second_input();
    let outcome = train(&topology, &ts, &TrainingConfig::default()).unwrap();
    let mut counter = CallCounter::new();
    let classical = exhaustive_argmax(&topology, &ts, &mut counter).unwrap();
    assert_eq!(outcome.distribution.argmax(), classical.best.index());
    // Two strings tie at score 3 and the distribution is exactly uniform;
    // both argmaxes resolve to the smallest encoding.
    assert_eq!(outcome.distribution.argmax(), 0);
}

#[test]
fn score_profile_counts_every_example_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(83);
    let topology = NetworkTopology::single_neuron();
    for _ in 0..20 {
        let n = rng.gen_range(1..=8);
        let ts = random_training_set(&mut rng, 2, n);
        let profile = PhaseProfile::from_instance(&topology, &ts).unwrap();
        assert!(profile.scores().iter().all(|&k| k <= n as u32));
        // Every example is correct for at least one string and wrong for
        // at least one, so the total over strings is strictly inside the
        // extremes unless every string scores identically.
        let total: u32 = profile.scores().iter().sum();
        assert!(total >= n as u32, "profile ignores examples");
    }
}
