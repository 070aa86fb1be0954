//! Simulation and training of binary neural networks whose weights live in
//! a quantum register.
//!
//! The pieces, bottom up:
//!
//! - [`statevector`]: dense little-endian statevector with in-place gate
//!   kernels, phase marking, sub-register mean inversion, and marginals.
//! - [`circuit`]: gate-list IR with composition, inversion, dense matrix
//!   extraction for small registers, and a line-oriented text form.
//! - [`bnn`]: classical binary networks (weights and activations in
//!   {+1, -1}, fan-in 2, sign activation with sign(0) = +1), training sets,
//!   scoring, and exhaustive search with call accounting.
//! - [`compiler`]: lowers a network topology to a reversible circuit over
//!   weight, input-copy, activation, and target wires, with the encoding
//!   +1 -> |0>, -1 -> |1>.
//! - [`trainer`]: the amplitude-amplification training protocol (phase
//!   marking across the training set, then diffusion over the weight
//!   register) plus a cheap diagonal model of the same evolution, weight
//!   distributions, and call-count formulas.

pub mod bnn;
pub mod circuit;
pub mod compiler;
pub mod error;
pub mod statevector;
pub mod trainer;

pub use bnn::{
    exhaustive_argmax, network_eval, neuron_eval, score, BinaryValue, CallCounter, Edge,
    ExhaustiveSearch, NetworkTopology, NodeId, TrainingExample, TrainingSet, WeightString,
};
pub use circuit::{Circuit, Gate};
pub use compiler::{
    compile_network, compile_neuron, input_load_delta, CompiledNetwork, QubitLayout,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use statevector::{Qubit, StateVector};
pub use trainer::{
    classical_call_count, default_delta_theta, default_rounds, diagonal_model,
    grover_success_probability, quantum_call_count, train, PhaseProfile, QuantumTrainingRun,
    TrainMode, TrainOutcome, TrainingConfig, WeightDistribution,
};
