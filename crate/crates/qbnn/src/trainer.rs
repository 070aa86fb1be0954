//! Training by amplitude amplification over a superposed weight register.
//!
//! One marking cycle walks the training set in order: load the example
//! (as a delta from the previous one), run the compiled forward pass, give
//! the basis states whose output wire matches the target wire a phase of
//! `e^{i delta_theta}`, and uncompute the forward pass. After a full cycle
//! a weight string that classifies `k` of the `n` examples correctly
//! carries the phase `e^{i delta_theta k}`; with the default
//! `delta_theta = pi/n`, fully correct strings sit at phase -1. Each cycle
//! is followed by inversion about the mean on the weight wires, and the
//! cycle pair is repeated `rounds` times (default `floor(pi sqrt(2^t)/4)`
//! for `t` weight slots, the amplification sweet spot when few strings are
//! marked).
//!
//! Because the marking phase depends only on the per-string correct-count
//! profile, the whole evolution restricted to the weight register is
//! reproduced by a `2^t`-dimensional model: multiply each entry by its
//! profile phase, invert about the mean, repeat. `diagonal_model` runs
//! that model and is the cheap cross-check for the full circuit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bnn::{
    score, CallCounter, NetworkTopology, TrainingExample, TrainingSet, MAX_EXHAUSTIVE_SLOTS,
};
use crate::circuit::{Circuit, Gate};
use crate::compiler::{compile_network, input_load_delta, CompiledNetwork, QubitLayout};
use crate::error::{Error, Result};
use crate::statevector::{hadamard, StateVector};

/// Which evolution `train` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainMode {
    /// Full statevector over every wire of the compiled circuit.
    FullCircuit,
    /// Weight-register-only model driven by the classical score profile.
    DiagonalModel,
}

/// Knobs for `train`. `None` picks the defaults described on the module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingConfig {
    pub mode: TrainMode,
    pub rounds: Option<usize>,
    pub delta_theta: Option<f64>,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            mode: TrainMode::FullCircuit,
            rounds: None,
            delta_theta: None,
        }
    }
}

/// `floor(pi * sqrt(2^num_slots) / 4)` amplification rounds.
pub fn default_rounds(num_slots: usize) -> usize {
    let n = (1u64 << num_slots) as f64;
    (std::f64::consts::PI * n.sqrt() / 4.0).floor() as usize
}

/// `pi / num_examples`, so a fully correct string accumulates phase -1.
pub fn default_delta_theta(num_examples: usize) -> f64 {
    std::f64::consts::PI / num_examples as f64
}

/// Correct-count per weight string, indexed by integer encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseProfile {
    scores: Vec<u32>,
}

impl PhaseProfile {
    /// Scores every weight string classically.
    pub fn from_instance(topology: &NetworkTopology, training_set: &TrainingSet) -> Result<Self> {
        let slots = topology.num_weights();
        if slots > MAX_EXHAUSTIVE_SLOTS {
            return Err(Error::SearchTooLarge {
                got: slots,
                max: MAX_EXHAUSTIVE_SLOTS,
            });
        }
        let mut scores = Vec::with_capacity(1 << slots);
        for index in 0..1usize << slots {
            let weights = crate::bnn::WeightString::from_index(index, slots)?;
            scores.push(score(topology, &weights, training_set)? as u32);
        }
        Ok(PhaseProfile { scores })
    }

    /// Wraps an explicit profile; the length must be a nonzero power of two.
    pub fn from_scores(scores: Vec<u32>) -> Result<Self> {
        if scores.is_empty() || !scores.len().is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "profile length must be a power of two, got {}",
                scores.len()
            )));
        }
        Ok(PhaseProfile { scores })
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn scores(&self) -> &[u32] {
        &self.scores
    }

    pub fn max_score(&self) -> u32 {
        *self.scores.iter().max().expect("profile is non-empty")
    }

    /// How many strings sit at the maximum score.
    pub fn num_at_max(&self) -> usize {
        let max = self.max_score();
        self.scores.iter().filter(|&&s| s == max).count()
    }

    /// Indices of the strings at the maximum score, ascending.
    pub fn argmax_set(&self) -> Vec<usize> {
        let max = self.max_score();
        self.scores
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == max)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Probability distribution over weight strings, as measured on the weight
/// register or produced by the diagonal model.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    probabilities: Vec<f64>,
    argmax: usize,
    entropy_bits: f64,
}

impl WeightDistribution {
    /// Validates and summarizes a probability vector. The entries must be
    /// finite, nonnegative, and sum to 1 within 1e-9.
    pub fn from_probabilities(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if probabilities.iter().any(|p| !p.is_finite() || *p < -1e-12) {
            return Err(Error::InvalidDistribution(
                "entries must be finite and nonnegative".into(),
            ));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "sums to {} instead of 1",
                sum
            )));
        }
        let mut argmax = 0usize;
        let mut best = probabilities[0];
        for (i, &p) in probabilities.iter().enumerate().skip(1) {
            if p > best {
                best = p;
                argmax = i;
            }
        }
        let entropy_bits = probabilities
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum();
        Ok(WeightDistribution {
            probabilities,
            argmax,
            entropy_bits,
        })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    /// First index attaining the maximum probability.
    pub fn argmax(&self) -> usize {
        self.argmax
    }

    pub fn max_probability(&self) -> f64 {
        self.probabilities[self.argmax]
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entropy_bits
    }

    /// Largest absolute difference to another distribution of equal length.
    pub fn linf_distance(&self, other: &WeightDistribution) -> f64 {
        assert_eq!(
            self.len(),
            other.len(),
            "distributions must match in length"
        );
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Total probability over a set of indices.
    pub fn mass_on(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.probabilities[i]).sum()
    }

    /// Draws `shots` samples with a seeded generator and returns counts per
    /// index. Same seed, same counts.
    pub fn sample_counts(&self, shots: u64, seed: u64) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = vec![0u64; self.probabilities.len()];
        for _ in 0..shots {
            let mut u: f64 = rng.gen();
            let mut drawn = self.probabilities.len() - 1;
            for (i, &p) in self.probabilities.iter().enumerate() {
                if u < p {
                    drawn = i;
                    break;
                }
                u -= p;
            }
            counts[drawn] += 1;
        }
        counts
    }
}

/// Weight-register-only evolution: phases from the score profile, then
/// inversion about the mean, repeated `rounds` times from the uniform
/// state.
pub fn diagonal_model(
    profile: &PhaseProfile,
    delta_theta: f64,
    rounds: usize,
) -> Result<WeightDistribution> {
    if !delta_theta.is_finite() {
        return Err(Error::InvalidConfig("delta_theta must be finite".into()));
    }
    let dim = profile.len();
    let mut v = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
    let phases: Vec<Complex64> = profile
        .scores()
        .iter()
        .map(|&k| Complex64::from_polar(1.0, delta_theta * k as f64))
        .collect();
    for _ in 0..rounds {
        for (a, phase) in v.iter_mut().zip(&phases) {
            *a *= phase;
        }
        let twice_mean: Complex64 = v.iter().sum::<Complex64>() * (2.0 / dim as f64);
        for a in v.iter_mut() {
            *a = twice_mean - *a;
        }
    }
    WeightDistribution::from_probabilities(v.iter().map(|a| a.norm_sqr()).collect())
}

/// Full-circuit protocol state: superposed weight register plus the
/// compiled network wires.
pub struct QuantumTrainingRun {
    compiled: CompiledNetwork,
    inverse: Circuit,
    state: StateVector,
    loaded: Option<TrainingExample>,
    counter: CallCounter,
}

impl QuantumTrainingRun {
    /// Compiles the topology and prepares the uniform superposition over
    /// weight strings; all other wires start at |0> (logical +1).
    pub fn new(topology: &NetworkTopology) -> Result<Self> {
        let compiled = compile_network(topology)?;
        let inverse = compiled.circuit.inverse();
        let mut state = StateVector::basis_state(compiled.layout.num_qubits(), 0)?;
        for wire in compiled.layout.weight_wires() {
            state.apply_single_qubit(*wire, &hadamard())?;
        }
        Ok(QuantumTrainingRun {
            compiled,
            inverse,
            state,
            loaded: None,
            counter: CallCounter::new(),
        })
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.compiled.layout
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn counter(&self) -> CallCounter {
        self.counter
    }

    /// One pass over the training set: for each example, load it, run the
    /// forward pass, phase-mark agreement between output and target, and
    /// uncompute. Adds `2 * examples` network calls and `examples` oracle
    /// calls.
    pub fn marking_cycle(&mut self, training_set: &TrainingSet, delta_theta: f64) -> Result<()> {
        let mut oracle = Circuit::new(self.compiled.layout.num_qubits());
        oracle.push(Gate::EqualityPhase {
            a: self.compiled.layout.output_wire(),
            b: self.compiled.layout.target_wire(),
            phase: delta_theta,
        })?;
        for example in training_set.examples() {
            let load = input_load_delta(self.loaded.as_ref(), example, &self.compiled.layout)?;
            load.run(&mut self.state)?;
            self.compiled.circuit.run(&mut self.state)?;
            self.counter.network_calls += 1;
            oracle.run(&mut self.state)?;
            self.counter.oracle_calls += 1;
            self.inverse.run(&mut self.state)?;
            self.counter.network_calls += 1;
            self.loaded = Some(example.clone());
        }
        Ok(())
    }

    /// Inversion about the mean on the weight wires only.
    pub fn diffusion_on_weights(&mut self) -> Result<()> {
        let wires = self.compiled.layout.weight_wires().to_vec();
        self.state.invert_about_mean(&wires)
    }

    /// Marginal over the weight wires, slot order.
    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        let probs = self
            .state
            .marginal_distribution(self.compiled.layout.weight_wires())?;
        WeightDistribution::from_probabilities(probs)
    }
}

/// What `train` hands back.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub distribution: WeightDistribution,
    pub counter: CallCounter,
    /// Amplification rounds actually used.
    pub rounds: usize,
    /// Marking phase step actually used.
    pub delta_theta: f64,
}

/// Runs the whole protocol: uniform weight superposition, `rounds` times
/// (marking cycle, diffusion), then the weight-register distribution.
/// In `DiagonalModel` mode the same evolution is computed from the
/// classical score profile, and the counter reports the call counts the
/// full protocol would have spent.
pub fn train(
    topology: &NetworkTopology,
    training_set: &TrainingSet,
    config: &TrainingConfig,
) -> Result<TrainOutcome> {
    if training_set.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if training_set.input_arity() != topology.num_inputs() {
        return Err(Error::InputArityMismatch {
            expected: topology.num_inputs(),
            got: training_set.input_arity(),
        });
    }
    let rounds = config
        .rounds
        .unwrap_or_else(|| default_rounds(topology.num_weights()));
    let delta_theta = config
        .delta_theta
        .unwrap_or_else(|| default_delta_theta(training_set.len()));
    if !delta_theta.is_finite() {
        return Err(Error::InvalidConfig("delta_theta must be finite".into()));
    }
    let distribution;
    let counter;
    match config.mode {
        TrainMode::FullCircuit => {
            let mut run = QuantumTrainingRun::new(topology)?;
            for _ in 0..rounds {
                run.marking_cycle(training_set, delta_theta)?;
                run.diffusion_on_weights()?;
            }
            distribution = run.weight_distribution()?;
            counter = run.counter();
        }
        TrainMode::DiagonalModel => {
            let profile = PhaseProfile::from_instance(topology, training_set)?;
            distribution = diagonal_model(&profile, delta_theta, rounds)?;
            let modeled = quantum_call_count(training_set.len(), rounds);
            counter = CallCounter {
                network_calls: modeled.network_calls,
                oracle_calls: modeled.oracle_calls,
            };
        }
    }
    Ok(TrainOutcome {
        distribution,
        counter,
        rounds,
        delta_theta,
    })
}

/// Closed-form call counts of the quantum protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumCallCount {
    /// Forward plus uncompute passes: `2 * examples * rounds`.
    pub network_calls: u64,
    /// Forward passes only: `examples * rounds`.
    pub forward_network_calls: u64,
    /// Phase markings: `examples * rounds`.
    pub oracle_calls: u64,
}

pub fn quantum_call_count(num_examples: usize, rounds: usize) -> QuantumCallCount {
    let per_round = num_examples as u64;
    QuantumCallCount {
        network_calls: 2 * per_round * rounds as u64,
        forward_network_calls: per_round * rounds as u64,
        oracle_calls: per_round * rounds as u64,
    }
}

/// Network calls of the exhaustive baseline: `examples * 2^num_slots`.
pub fn classical_call_count(num_examples: usize, num_slots: usize) -> u64 {
    num_examples as u64 * (1u64 << num_slots)
}

/// Success probability of textbook amplitude amplification: probability of
/// landing in the marked set after `rounds` iterations from uniform, with
/// `num_marked` of `num_strings` marked.
pub fn grover_success_probability(num_strings: usize, num_marked: usize, rounds: usize) -> f64 {
    if num_marked == 0 {
        return 0.0;
    }
    let theta = (num_marked as f64 / num_strings as f64).sqrt().asin();
    ((2 * rounds + 1) as f64 * theta).sin().powi(2)
}
