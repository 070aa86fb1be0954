//! Acceptance suite: every release gate in one target, one test per
//! criterion, each printing a single PASS or FAIL line (visible with
//! `cargo test -p qbnn-cli --test acceptance -- --nocapture`).

use std::time::Instant;

use qbnn::bnn::{
    exhaustive_argmax, network_eval, BinaryValue, CallCounter, NetworkTopology, TrainingSet,
    WeightString,
};
use qbnn::compiler::compile_network;
use qbnn::statevector::StateVector;
use qbnn::trainer::{
    default_delta_theta, default_rounds, diagonal_model, grover_success_probability, train,
    PhaseProfile, TrainMode, TrainingConfig,
};
use qbnn::Complex64;
use qbnn_cli::experiments::{
    run_callcount_table, run_conjecture_sweep, run_grover_special, run_reproduce_appendix,
    run_reproduce_fig5, Fig5Options, GROVER_SPACES,
};
use qbnn_cli::gen::{random_training_set, LabelRule};
use qbnn_cli::report::to_json;

fn criterion(name: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] {name}: {detail}");
    assert!(passed, "[{tag}] {name}: {detail}");
}

/// Runs the compiled circuit on one basis setting and returns the output
/// wire's value, insisting the result is a single exact basis state.
fn forward_output(
    compiled: &qbnn::compiler::CompiledNetwork,
    weights: &WeightString,
    inputs: &[BinaryValue],
) -> BinaryValue {
    let layout = &compiled.layout;
    let mut index = 0usize;
    for (slot, value) in weights.values().iter().enumerate() {
        index |= (value.to_bit() as usize) << layout.weight_wire(slot).0;
    }
    for (input, value) in inputs.iter().enumerate() {
        for wire in layout.input_copy_wires(input) {
            index |= (value.to_bit() as usize) << wire.0;
        }
    }
    let mut state = StateVector::basis_state(layout.num_qubits(), index).unwrap();
    compiled.circuit.run(&mut state).unwrap();

    let exactly_one = Complex64::new(1.0, 0.0);
    let mut landed = None;
    for (i, &amp) in state.amplitudes().iter().enumerate() {
        if amp != Complex64::new(0.0, 0.0) {
            assert_eq!(amp, exactly_one, "basis state must stay exact");
            assert!(landed.is_none(), "more than one basis state populated");
            landed = Some(i);
        }
    }
    let landed = landed.expect("one basis state populated");
    BinaryValue::from_bit(((landed >> layout.output_wire().0) & 1) as u8).unwrap()
}

#[test]
fn criterion_reversible_embedding() {
    let start = Instant::now();
    let mut cases = 0usize;

    let neuron = NetworkTopology::single_neuron();
    let compiled = compile_network(&neuron).unwrap();
    let mut counter = CallCounter::new();
    for setting in 0..1usize << 4 {
        let weights = WeightString::from_index(setting & 0b11, 2).unwrap();
        let inputs = [
            BinaryValue::from_bit(((setting >> 2) & 1) as u8).unwrap(),
            BinaryValue::from_bit(((setting >> 3) & 1) as u8).unwrap(),
        ];
        let expected = network_eval(&neuron, &weights, &inputs, &mut counter).unwrap();
        assert_eq!(forward_output(&compiled, &weights, &inputs), expected);
        cases += 1;
    }

    let deep = NetworkTopology::two_two_one();
    let deep_compiled = compile_network(&deep).unwrap();
    for setting in 0..1usize << 8 {
        let weights = WeightString::from_index(setting & 0x3f, 6).unwrap();
        let inputs = [
            BinaryValue::from_bit(((setting >> 6) & 1) as u8).unwrap(),
            BinaryValue::from_bit(((setting >> 7) & 1) as u8).unwrap(),
        ];
        let expected = network_eval(&deep, &weights, &inputs, &mut counter).unwrap();
        assert_eq!(forward_output(&deep_compiled, &weights, &inputs), expected);
        cases += 1;
    }

    let ms = start.elapsed().as_millis();
    criterion(
        "reversible embedding",
        cases == 16 + 256 && ms < 1000,
        &format!("{cases} basis settings exact in {ms} ms (budget 1000 ms)"),
    );
}

fn equivalence_gap(topology: &NetworkTopology, ts: &TrainingSet, rounds: usize) -> f64 {
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
    let profile = PhaseProfile::from_instance(topology, ts).unwrap();
    let diag = diagonal_model(&profile, default_delta_theta(ts.len()), rounds).unwrap();
    full.distribution.linf_distance(&diag)
}

#[test]
fn criterion_oracle_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;

    let neuron = NetworkTopology::single_neuron();
    let deep = NetworkTopology::two_two_one();
    let task = TrainingSet::select_second_input();
    worst = worst.max(equivalence_gap(&neuron, &task, 1));
    worst = worst.max(equivalence_gap(&deep, &task, 6));

    for seed in 0..50u64 {
        let small = random_training_set(&neuron, 4, &LabelRule::Random, seed).unwrap();
        worst = worst.max(equivalence_gap(&neuron, &small, default_rounds(2)));
        let wide = random_training_set(&deep, 4, &LabelRule::Random, 1000 + seed).unwrap();
        worst = worst.max(equivalence_gap(&deep, &wide, default_rounds(6)));
    }

    let ms = start.elapsed().as_millis();
    criterion(
        "oracle equivalence",
        worst <= 1e-9 && ms < 30_000,
        &format!(
            "worst L-infinity gap {worst:.3e} over 2 canonical + 100 random instances in {ms} ms (budget 30000 ms)"
        ),
    );
}

#[test]
fn criterion_planted_optimum_amplification() {
    let start = Instant::now();
    let report = run_grover_special(&GROVER_SPACES, 11, None).unwrap();

    let mut worst_gap = 0.0f64;
    for row in &report.rows {
        worst_gap = worst_gap.max((row.diagonal_probability - row.analytic_probability).abs());
        if let Some(full) = row.full_probability {
            worst_gap = worst_gap.max((full - row.analytic_probability).abs());
        }
    }
    let four = &report.rows[0];
    let certainty = four.num_strings == 4
        && four.rounds == 1
        && four.analytic_probability == 1.0
        && (four.full_probability.unwrap() - 1.0).abs() <= 1e-6;

    let ms = start.elapsed().as_millis();
    criterion(
        "planted-optimum amplification",
        report.checks.iter().all(|c| c.passed)
            && worst_gap <= 1e-6
            && certainty
            && ms < 10_000,
        &format!(
            "worst gap to closed form {worst_gap:.3e} over spaces {GROVER_SPACES:?}; 4-string single round at probability {} in {ms} ms (budget 10000 ms)",
            four.full_probability.unwrap()
        ),
    );
}

#[test]
fn criterion_failure_regime() {
    let start = Instant::now();
    let mut worst_topset_excess = f64::NEG_INFINITY;
    let mut worst_single_excess = f64::NEG_INFINITY;

    for num_slots in [4usize, 6, 8, 10] {
        let dim = 1usize << num_slots;
        let num_examples = 8;
        for num_top in [dim / 2, dim / 2 + dim / 4, dim] {
            // Top scorers first, everything else one point below.
            let mut scores = vec![(num_examples - 1) as u32; dim];
            for s in scores.iter_mut().take(num_top) {
                *s = num_examples as u32;
            }
            let profile = PhaseProfile::from_scores(scores).unwrap();
            let dist = diagonal_model(
                &profile,
                default_delta_theta(num_examples),
                default_rounds(num_slots),
            )
            .unwrap();
            let topset_bound = 2.0 / dim as f64 * num_top as f64;
            worst_topset_excess = worst_topset_excess.max(dist.max_probability() - topset_bound);
            worst_single_excess =
                worst_single_excess.max(dist.max_probability() - 2.0 / dim as f64);
        }
    }

    let ms = start.elapsed().as_millis();
    criterion(
        "failure regime",
        worst_topset_excess <= 1e-6 && worst_single_excess <= 1e-6 && ms < 5000,
        &format!(
            "with at least half the strings at the top score, the argmax stays below the top-set bound (excess {worst_topset_excess:.3e}) and even below twice uniform (excess {worst_single_excess:.3e}) in {ms} ms (budget 5000 ms)"
        ),
    );
}

#[test]
fn criterion_call_count_scaling() {
    let start = Instant::now();
    let report = run_callcount_table(2, 10, 4, None).unwrap();
    let slope = report.slope.unwrap();
    let ms = start.elapsed().as_millis();
    criterion(
        "call-count scaling",
        (slope - 1.0).abs() <= 0.1 && ms < 1000,
        &format!("log-log slope {slope:.4} within 1.0 +- 0.1 in {ms} ms (budget 1000 ms)"),
    );
}

#[test]
fn criterion_single_neuron_task() {
    let start = Instant::now();
    let report = run_reproduce_fig5(&Fig5Options::default()).unwrap();
    let mut counter = CallCounter::new();
    let brute = exhaustive_argmax(
        &NetworkTopology::single_neuron(),
        &TrainingSet::select_second_input(),
        &mut counter,
    )
    .unwrap();
    let ms = start.elapsed().as_millis();
    criterion(
        "single-neuron task reproduction",
        report.checks.iter().all(|c| c.passed)
            && report.argmax_index == brute.best.index()
            && report.full_vs_diagonal_linf <= 1e-9
            && ms < 1000,
        &format!(
            "argmax {} equals brute-force winner {} ({}); equivalence gap {:.3e}; {ms} ms (budget 1000 ms)",
            report.argmax_index,
            brute.best.index(),
            brute.best,
            report.full_vs_diagonal_linf
        ),
    );
}

#[test]
fn criterion_deep_network_task() {
    let start = Instant::now();
    let report = run_reproduce_appendix().unwrap();
    let ms = start.elapsed().as_millis();
    let agreement = report
        .compared
        .iter()
        .all(|c| c.full_vs_diagonal_linf <= 1e-9);
    criterion(
        "deep-network task reproduction",
        report.checks.iter().all(|c| c.passed)
            && agreement
            && report.compared.iter().map(|c| c.rounds).collect::<Vec<_>>() == vec![6, 7]
            && ms < 5000,
        &format!(
            "14-qubit run agrees with the diagonal model at 6 and 7 rounds; {} rounds scored higher (argmax probability {:.4} vs {:.4}); {ms} ms (budget 5000 ms)",
            report.better_rounds,
            report.compared[0].argmax_probability,
            report.compared[1].argmax_probability
        ),
    );
}

#[test]
fn criterion_threshold_sweep() {
    let start = Instant::now();
    let first = run_conjecture_sweep(4, 8, 500, 2024).unwrap();
    let second = run_conjecture_sweep(4, 8, 500, 2024).unwrap();

    let deterministic = first == second && to_json(&first).unwrap() == to_json(&second).unwrap();
    let classified = first.rows.len() == 500
        && first.rows.iter().enumerate().all(|(i, r)| r.trial == i)
        && {
            let t = &first.strings_reading;
            t.holds_and_succeeds + t.holds_and_fails + t.fails_and_succeeds + t.fails_and_fails
                == 500
        }
        && {
            let t = &first.examples_reading;
            t.holds_and_succeeds + t.holds_and_fails + t.fails_and_succeeds + t.fails_and_fails
                == 500
        };
    let reference_trials_exact = first.checks.iter().all(|c| c.passed)
        && (first.rows[0].argmax_probability - grover_success_probability(16, 1, first.rounds))
            .abs()
            <= 1e-6
        && (first.rows[1].argmax_probability - 1.0 / 16.0).abs() <= 1e-6;

    let ms = start.elapsed().as_millis();
    criterion(
        "threshold sweep",
        deterministic && classified && reference_trials_exact,
        &format!(
            "500 seeded trials reproduced byte-identically; both threshold readings tallied; reference trials within 1e-6; {ms} ms"
        ),
    );
}
