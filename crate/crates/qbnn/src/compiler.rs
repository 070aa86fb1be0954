//! Lowering of a network topology to a reversible circuit.
//!
//! Encoding: logical +1 is |0>, logical -1 is |1>. Under it a CNOT from a
//! weight wire into a value wire turns the value into the product
//! weight * value, and a Toffoli from two product wires into a fresh
//! ancilla computes the fan-in-2 sign activation: the ancilla flips
//! exactly when both products are -1, the only case where the sum is
//! negative (a zero sum signs to +1).
//!
//! Wire plan, in assignment order: for each neuron (layer-major), each
//! in-edge contributes its weight wire and, when the source is an input
//! node, a private copy wire for that input; the neuron's activation
//! ancilla follows its in-edge wires. One target wire for the wanted label
//! comes last. Inputs feeding several neurons get one copy wire per
//! consumer; hidden activations are consumed in place, so hidden fan-out
//! above one is refused rather than silently miscompiled.

use crate::bnn::{BinaryValue, NetworkTopology, NodeId, TrainingExample};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::statevector::Qubit;

/// Deepest network the compiler accepts (input, hidden, output).
pub const MAX_COMPILE_LAYERS: usize = 3;

/// One loaded copy of an input value, private to a consuming neuron.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputCopy {
    /// Index of the input node in layer 0.
    pub input: usize,
    /// Neuron whose product computation consumes this copy.
    pub consumer: NodeId,
    pub wire: Qubit,
}

/// Wire assignment produced by `compile_network`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLayout {
    num_qubits: usize,
    num_inputs: usize,
    weight_wires: Vec<Qubit>,
    input_copies: Vec<InputCopy>,
    activation_wires: Vec<(NodeId, Qubit)>,
    target_wire: Qubit,
}

impl QubitLayout {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    /// Weight wires by slot.
    pub fn weight_wires(&self) -> &[Qubit] {
        &self.weight_wires
    }

    pub fn weight_wire(&self, slot: usize) -> Qubit {
        self.weight_wires[slot]
    }

    pub fn input_copies(&self) -> &[InputCopy] {
        &self.input_copies
    }

    /// Copy wires holding input `input`, in wire order.
    pub fn input_copy_wires(&self, input: usize) -> Vec<Qubit> {
        self.input_copies
            .iter()
            .filter(|c| c.input == input)
            .map(|c| c.wire)
            .collect()
    }

    /// Activation ancilla of a neuron, if it exists in the layout.
    pub fn activation_wire(&self, neuron: NodeId) -> Option<Qubit> {
        self.activation_wires
            .iter()
            .find(|(n, _)| *n == neuron)
            .map(|(_, w)| *w)
    }

    /// Activation wire of the output neuron; the phase oracle reads it.
    pub fn output_wire(&self) -> Qubit {
        self.activation_wires
            .last()
            .expect("layout always holds at least one neuron")
            .1
    }

    /// Wire holding the wanted label.
    pub fn target_wire(&self) -> Qubit {
        self.target_wire
    }

    /// Every wire that is not a weight wire, ascending.
    pub fn non_weight_wires(&self) -> Vec<Qubit> {
        (0..self.num_qubits)
            .map(Qubit)
            .filter(|q| !self.weight_wires.contains(q))
            .collect()
    }

    /// Structured text form for debugging and golden tests.
    pub fn dump(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for (slot, wire) in self.weight_wires.iter().enumerate() {
            out.push_str(&format!("weight {} -> {}\n", slot, wire));
        }
        for copy in &self.input_copies {
            out.push_str(&format!(
                "input {} for {} -> {}\n",
                copy.input, copy.consumer, copy.wire
            ));
        }
        for (neuron, wire) in &self.activation_wires {
            out.push_str(&format!("activation {} -> {}\n", neuron, wire));
        }
        out.push_str(&format!("target -> {}\n", self.target_wire));
        out.push_str(&format!("output -> {}\n", self.output_wire()));
        out
    }
}

/// A compiled forward pass and the wire assignment it runs on.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledNetwork {
    pub circuit: Circuit,
    pub layout: QubitLayout,
}

/// Circuit for one fan-in-2 neuron: products in place on the source wires,
/// then the activation into `ancilla`. All five wires must be distinct.
pub fn compile_neuron(
    num_qubits: usize,
    weights: (Qubit, Qubit),
    sources: (Qubit, Qubit),
    ancilla: Qubit,
) -> Result<Circuit> {
    let wires = [weights.0, weights.1, sources.0, sources.1, ancilla];
    for (i, w) in wires.iter().enumerate() {
        if wires[i + 1..].contains(w) {
            return Err(Error::DuplicateWire { wire: w.0 });
        }
    }
    let mut circuit = Circuit::new(num_qubits);
    circuit.push(Gate::Cnot {
        control: weights.0,
        target: sources.0,
    })?;
    circuit.push(Gate::Cnot {
        control: weights.1,
        target: sources.1,
    })?;
    circuit.push(Gate::Toffoli {
        controls: [sources.0, sources.1],
        target: ancilla,
    })?;
    Ok(circuit)
}

/// Lowers the topology to a forward-pass circuit and its wire layout.
/// Refuses networks deeper than `MAX_COMPILE_LAYERS` and hidden neurons
/// with fan-out other than one.
pub fn compile_network(topology: &NetworkTopology) -> Result<CompiledNetwork> {
    if topology.num_layers() > MAX_COMPILE_LAYERS {
        return Err(Error::UnsupportedTopology(format!(
            "{} layers, the compiler handles at most {}",
            topology.num_layers(),
            MAX_COMPILE_LAYERS
        )));
    }
    for neuron in topology.neurons() {
        if neuron.layer == topology.num_layers() - 1 {
            continue;
        }
        let fan_out = topology.fan_out(neuron);
        if fan_out != 1 {
            return Err(Error::UnsupportedTopology(format!(
                "hidden neuron {} has fan-out {}, activations are consumed in place",
                neuron, fan_out
            )));
        }
    }

    // Wire assignment pass.
    let mut next = 0usize;
    let mut take = || {
        let w = Qubit(next);
        next += 1;
        w
    };
    let mut weight_wires = vec![Qubit(0); topology.num_weights()];
    let mut input_copies = Vec::new();
    let mut activation_wires = Vec::new();
    for neuron in topology.neurons() {
        for edge in topology.in_edges(neuron) {
            weight_wires[edge.slot] = take();
            if edge.from.layer == 0 {
                input_copies.push(InputCopy {
                    input: edge.from.index,
                    consumer: neuron,
                    wire: take(),
                });
            }
        }
        activation_wires.push((neuron, take()));
    }
    let target_wire = take();
    let layout = QubitLayout {
        num_qubits: next,
        num_inputs: topology.num_inputs(),
        weight_wires,
        input_copies,
        activation_wires,
        target_wire,
    };

    // Gate emission pass, same neuron order.
    let mut circuit = Circuit::new(layout.num_qubits);
    for neuron in topology.neurons() {
        let mut sources = Vec::with_capacity(2);
        let mut weights = Vec::with_capacity(2);
        for edge in topology.in_edges(neuron) {
            weights.push(layout.weight_wire(edge.slot));
            let source = if edge.from.layer == 0 {
                layout
                    .input_copies
                    .iter()
                    .find(|c| c.consumer == neuron && c.input == edge.from.index)
                    .expect("copy assigned above")
                    .wire
            } else {
                layout
                    .activation_wire(edge.from)
                    .expect("earlier layer already assigned")
            };
            sources.push(source);
        }
        let ancilla = layout.activation_wire(neuron).unwrap();
        let neuron_gates = compile_neuron(
            layout.num_qubits,
            (weights[0], weights[1]),
            (sources[0], sources[1]),
            ancilla,
        )?;
        for gate in neuron_gates.gates() {
            circuit.push(gate.clone())?;
        }
    }
    Ok(CompiledNetwork { circuit, layout })
}

/// X gates flipping the loaded example to `next`. `prev = None` means the
/// register is in the all +1 state (inputs and target). Each input copy
/// wire of a changed input is flipped, then the target wire if the label
/// changed.
pub fn input_load_delta(
    prev: Option<&TrainingExample>,
    next: &TrainingExample,
    layout: &QubitLayout,
) -> Result<Circuit> {
    let all_plus;
    let prev = match prev {
        Some(p) => p,
        None => {
            all_plus = TrainingExample::new(
                vec![BinaryValue::Plus; layout.num_inputs],
                BinaryValue::Plus,
            );
            &all_plus
        }
    };
    for example in [prev, next] {
        if example.inputs.len() != layout.num_inputs {
            return Err(Error::InputArityMismatch {
                expected: layout.num_inputs,
                got: example.inputs.len(),
            });
        }
    }
    let mut circuit = Circuit::new(layout.num_qubits);
    for copy in &layout.input_copies {
        if prev.inputs[copy.input] != next.inputs[copy.input] {
            circuit.push(Gate::X(copy.wire))?;
        }
    }
    if prev.target != next.target {
        circuit.push(Gate::X(layout.target_wire))?;
    }
    Ok(circuit)
}
