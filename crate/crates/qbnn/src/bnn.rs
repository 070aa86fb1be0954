//! Classical binary networks: the ground truth the quantum protocol is
//! checked against.
//!
//! Weights and activations take values in {+1, -1}. Every neuron has
//! fan-in exactly 2 and computes `sign(w1*a1 + w2*a2)` with `sign(0) = +1`.
//! Weight slots index a flat weight string; bit `s` of a weight string's
//! integer encoding is the bit encoding of slot `s` (+1 -> 0, -1 -> 1).

use crate::error::{Error, Result};

/// Largest weight-slot count accepted by `exhaustive_argmax`.
pub const MAX_EXHAUSTIVE_SLOTS: usize = 24;

/// A value in {+1, -1}. The bit encoding used everywhere (files, basis
/// states, weight indices) is +1 -> 0, -1 -> 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryValue {
    Plus,
    Minus,
}

impl BinaryValue {
    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(BinaryValue::Plus),
            1 => Ok(BinaryValue::Minus),
            other => Err(Error::InvalidConfig(format!(
                "binary values are encoded as bits 0 or 1, got {}",
                other
            ))),
        }
    }

    pub fn from_bool(bit_set: bool) -> Self {
        if bit_set {
            BinaryValue::Minus
        } else {
            BinaryValue::Plus
        }
    }

    pub fn to_bit(self) -> u8 {
        match self {
            BinaryValue::Plus => 0,
            BinaryValue::Minus => 1,
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            BinaryValue::Plus => 1,
            BinaryValue::Minus => -1,
        }
    }

    /// Sign activation. Zero maps to +1.
    pub fn sign(sum: i32) -> Self {
        if sum >= 0 {
            BinaryValue::Plus
        } else {
            BinaryValue::Minus
        }
    }
}

impl std::ops::Mul for BinaryValue {
    type Output = BinaryValue;

    fn mul(self, rhs: BinaryValue) -> BinaryValue {
        if self == rhs {
            BinaryValue::Plus
        } else {
            BinaryValue::Minus
        }
    }
}

impl std::ops::Neg for BinaryValue {
    type Output = BinaryValue;

    fn neg(self) -> BinaryValue {
        match self {
            BinaryValue::Plus => BinaryValue::Minus,
            BinaryValue::Minus => BinaryValue::Plus,
        }
    }
}

impl std::fmt::Display for BinaryValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BinaryValue::Plus => write!(f, "+"),
            BinaryValue::Minus => write!(f, "-"),
        }
    }
}

/// A node in the layered graph: `layer` 0 holds the inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub layer: usize,
    pub index: usize,
}

impl NodeId {
    pub fn new(layer: usize, index: usize) -> Self {
        NodeId { layer, index }
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.layer, self.index)
    }
}

/// A weighted connection. `slot` is the position of this connection's
/// weight in the flat weight string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub slot: usize,
}

/// Layered feed-forward graph with fan-in 2 and a single output node.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    layer_sizes: Vec<usize>,
    edges: Vec<Edge>,
    // In-edges per non-input node in layer-major order, sorted by slot.
    // Redundant with `edges`; kept so evaluation does no searching.
    incoming: Vec<Vec<Edge>>,
}

impl NetworkTopology {
    pub fn new(layer_sizes: Vec<usize>, edges: Vec<Edge>) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::InvalidTopology(
                "need at least an input layer and an output layer".into(),
            ));
        }
        if layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::InvalidTopology("empty layer".into()));
        }
        if *layer_sizes.last().unwrap() != 1 {
            return Err(Error::InvalidTopology(format!(
                "output layer must hold exactly one node, has {}",
                layer_sizes.last().unwrap()
            )));
        }
        for e in &edges {
            if e.to.layer != e.from.layer + 1 {
                return Err(Error::InvalidTopology(format!(
                    "edge {} -> {} does not span adjacent layers",
                    e.from, e.to
                )));
            }
            for node in [e.from, e.to] {
                if node.layer >= layer_sizes.len() || node.index >= layer_sizes[node.layer] {
                    return Err(Error::InvalidTopology(format!(
                        "node {} out of range",
                        node
                    )));
                }
            }
        }
        let mut slots_seen = vec![false; edges.len()];
        for e in &edges {
            if e.slot >= edges.len() || slots_seen[e.slot] {
                return Err(Error::InvalidTopology(format!(
                    "weight slots must form a permutation of 0..{}, slot {} is repeated or out of range",
                    edges.len(),
                    e.slot
                )));
            }
            slots_seen[e.slot] = true;
        }

        let mut incoming: Vec<Vec<Edge>> = Vec::new();
        for layer in 1..layer_sizes.len() {
            for index in 0..layer_sizes[layer] {
                let node = NodeId::new(layer, index);
                let mut ins: Vec<Edge> = edges.iter().filter(|e| e.to == node).copied().collect();
                ins.sort_by_key(|e| e.slot);
                if ins.len() != 2 {
                    return Err(Error::InvalidTopology(format!(
                        "node {} has fan-in {}, every neuron needs exactly 2",
                        node,
                        ins.len()
                    )));
                }
                if ins[0].from == ins[1].from {
                    return Err(Error::InvalidTopology(format!(
                        "node {} is fed twice by {}",
                        node, ins[0].from
                    )));
                }
                incoming.push(ins);
            }
        }

        Ok(NetworkTopology {
            layer_sizes,
            edges,
            incoming,
        })
    }

    /// Two inputs feeding one output neuron; weight slots 0 and 1.
    pub fn single_neuron() -> Self {
        NetworkTopology::new(
            vec![2, 1],
            vec![
                Edge {
                    from: NodeId::new(0, 0),
                    to: NodeId::new(1, 0),
                    slot: 0,
                },
                Edge {
                    from: NodeId::new(0, 1),
                    to: NodeId::new(1, 0),
                    slot: 1,
                },
            ],
        )
        .expect("built-in topology is valid")
    }

    /// Two inputs, two hidden neurons (each reading both inputs), one
    /// output neuron reading both hidden activations. Slots 0..3 are the
    /// hidden weights, 4..5 the output weights.
    pub fn two_two_one() -> Self {
        let e = |fl, fi, tl, ti, slot| Edge {
            from: NodeId::new(fl, fi),
            to: NodeId::new(tl, ti),
            slot,
        };
        NetworkTopology::new(
            vec![2, 2, 1],
            vec![
                e(0, 0, 1, 0, 0),
                e(0, 1, 1, 0, 1),
                e(0, 0, 1, 1, 2),
                e(0, 1, 1, 1, 3),
                e(1, 0, 2, 0, 4),
                e(1, 1, 2, 0, 5),
            ],
        )
        .expect("built-in topology is valid")
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn num_layers(&self) -> usize {
        self.layer_sizes.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.layer_sizes[0]
    }

    /// Number of weight slots; one per edge.
    pub fn num_weights(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Non-input nodes in layer-major order.
    pub fn neurons(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        for layer in 1..self.layer_sizes.len() {
            for index in 0..self.layer_sizes[layer] {
                out.push(NodeId::new(layer, index));
            }
        }
        out
    }

    /// In-edges of a neuron sorted by slot. Panics on input-layer nodes.
    pub fn in_edges(&self, node: NodeId) -> &[Edge] {
        assert!(node.layer >= 1, "input nodes have no in-edges");
        let ordinal: usize = self.layer_sizes[1..node.layer].iter().sum::<usize>() + node.index;
        &self.incoming[ordinal]
    }

    pub fn output_node(&self) -> NodeId {
        NodeId::new(self.layer_sizes.len() - 1, 0)
    }

    /// Nodes that feed at least one neuron of layer 1, i.e. used inputs.
    pub fn fan_out(&self, node: NodeId) -> usize {
        self.edges.iter().filter(|e| e.from == node).count()
    }

    /// Text form: a `layers` line then one `edge FROM TO SLOT` line per
    /// connection (nodes as `layer.index`), sorted by slot.
    pub fn to_text(&self) -> String {
        let mut out = String::from("layers");
        for s in &self.layer_sizes {
            out.push_str(&format!(" {}", s));
        }
        out.push('\n');
        let mut edges = self.edges.clone();
        edges.sort_by_key(|e| e.slot);
        for e in edges {
            out.push_str(&format!("edge {} {} {}\n", e.from, e.to, e.slot));
        }
        out
    }

    /// Parses the `to_text` form. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer_sizes: Option<Vec<usize>> = None;
        let mut edges = Vec::new();
        let parse_node = |line_no: usize, s: &str| -> Result<NodeId> {
            let (layer, index) = s
                .split_once('.')
                .ok_or_else(|| Error::parse(line_no, format!("node '{}' is not layer.index", s)))?;
            let bad = |_| Error::parse(line_no, format!("node '{}' is not layer.index", s));
            Ok(NodeId::new(
                layer.parse().map_err(bad)?,
                index.parse().map_err(bad)?,
            ))
        };
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next().unwrap() {
                "layers" => {
                    if layer_sizes.is_some() {
                        return Err(Error::parse(line_no, "repeated layers line"));
                    }
                    let sizes: Vec<usize> = parts
                        .map(|s| {
                            s.parse().map_err(|_| {
                                Error::parse(line_no, format!("bad layer size '{}'", s))
                            })
                        })
                        .collect::<Result<_>>()?;
                    layer_sizes = Some(sizes);
                }
                "edge" => {
                    let fields: Vec<&str> = parts.collect();
                    if fields.len() != 3 {
                        return Err(Error::parse(line_no, "edge expects FROM TO SLOT"));
                    }
                    edges.push(Edge {
                        from: parse_node(line_no, fields[0])?,
                        to: parse_node(line_no, fields[1])?,
                        slot: fields[2].parse().map_err(|_| {
                            Error::parse(line_no, format!("bad slot '{}'", fields[2]))
                        })?,
                    });
                }
                other => {
                    return Err(Error::parse(
                        line_no,
                        format!("unknown directive '{}'", other),
                    ))
                }
            }
        }
        let layer_sizes = layer_sizes.ok_or_else(|| Error::parse(0, "missing layers line"))?;
        NetworkTopology::new(layer_sizes, edges)
    }
}

/// Assignment of one binary value per weight slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightString {
    values: Vec<BinaryValue>,
}

impl WeightString {
    pub fn new(values: Vec<BinaryValue>) -> Self {
        WeightString { values }
    }

    /// Decodes an integer: bit `s` of `index` is the encoding of slot `s`.
    pub fn from_index(index: usize, num_slots: usize) -> Result<Self> {
        let count = 1usize
            .checked_shl(num_slots as u32)
            .filter(|_| num_slots < usize::BITS as usize)
            .ok_or_else(|| Error::InvalidConfig(format!("{} weight slots overflow", num_slots)))?;
        if index >= count {
            return Err(Error::BasisIndexOutOfRange { index, dim: count });
        }
        let values = (0..num_slots)
            .map(|s| BinaryValue::from_bool(index >> s & 1 == 1))
            .collect();
        Ok(WeightString { values })
    }

    pub fn index(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .map(|(s, v)| (v.to_bit() as usize) << s)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[BinaryValue] {
        &self.values
    }

    pub fn get(&self, slot: usize) -> BinaryValue {
        self.values[slot]
    }
}

impl std::fmt::Display for WeightString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.values {
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// One labeled example: input values and the wanted output.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrainingExample {
    pub inputs: Vec<BinaryValue>,
    pub target: BinaryValue,
}

impl TrainingExample {
    pub fn new(inputs: Vec<BinaryValue>, target: BinaryValue) -> Self {
        TrainingExample { inputs, target }
    }
}

/// Ordered list of examples with a common input arity. Duplicates are
/// allowed and counted separately by scoring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSet {
    examples: Vec<TrainingExample>,
}

impl TrainingSet {
    pub fn new(examples: Vec<TrainingExample>) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        let arity = examples[0].inputs.len();
        if examples.iter().any(|e| e.inputs.len() != arity) {
            return Err(Error::InvalidConfig(
                "examples disagree on input arity".into(),
            ));
        }
        Ok(TrainingSet { examples })
    }

    /// The four-example task over two inputs whose target is always the
    /// second input value.
    pub fn select_second_input() -> Self {
        let p = BinaryValue::Plus;
        let m = BinaryValue::Minus;
        TrainingSet::new(vec![
            TrainingExample::new(vec![p, p], p),
            TrainingExample::new(vec![m, p], p),
            TrainingExample::new(vec![p, m], m),
            TrainingExample::new(vec![m, m], m),
        ])
        .expect("built-in set is valid")
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn examples(&self) -> &[TrainingExample] {
        &self.examples
    }

    pub fn input_arity(&self) -> usize {
        self.examples[0].inputs.len()
    }

    /// Text form: one example per line, comma-separated bits, inputs first
    /// and the target bit last (+1 -> 0, -1 -> 1).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.examples {
            let mut bits: Vec<String> = e.inputs.iter().map(|v| v.to_bit().to_string()).collect();
            bits.push(e.target.to_bit().to_string());
            out.push_str(&bits.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the `to_text` form. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut examples = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut bits = Vec::new();
            for token in line.split(',') {
                let bit: u8 = token
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad bit '{}'", token.trim())))?;
                bits.push(
                    BinaryValue::from_bit(bit).map_err(|e| Error::parse(line_no, e.to_string()))?,
                );
            }
            if bits.len() < 2 {
                return Err(Error::parse(
                    line_no,
                    "an example needs at least one input and a target",
                ));
            }
            let target = bits.pop().unwrap();
            examples.push(TrainingExample::new(bits, target));
        }
        TrainingSet::new(examples)
    }
}

/// Running totals of oracle work. Both counts only ever grow.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CallCounter {
    /// Forward or inverse evaluations of the whole network.
    pub network_calls: u64,
    /// Phase-marking (label comparison) invocations.
    pub oracle_calls: u64,
}

impl CallCounter {
    pub fn new() -> Self {
        CallCounter::default()
    }
}

/// Sign of `w1*a1 + w2*a2`; ties (sum zero) give +1.
pub fn neuron_eval(
    a1: BinaryValue,
    a2: BinaryValue,
    w1: BinaryValue,
    w2: BinaryValue,
) -> BinaryValue {
    BinaryValue::sign((w1 * a1).to_i32() + (w2 * a2).to_i32())
}

/// Feed-forward evaluation of the whole network; counts one network call.
pub fn network_eval(
    topology: &NetworkTopology,
    weights: &WeightString,
    inputs: &[BinaryValue],
    counter: &mut CallCounter,
) -> Result<BinaryValue> {
    if inputs.len() != topology.num_inputs() {
        return Err(Error::InputArityMismatch {
            expected: topology.num_inputs(),
            got: inputs.len(),
        });
    }
    if weights.len() != topology.num_weights() {
        return Err(Error::WeightArityMismatch {
            expected: topology.num_weights(),
            got: weights.len(),
        });
    }
    let mut values: Vec<Vec<BinaryValue>> = vec![inputs.to_vec()];
    for layer in 1..topology.num_layers() {
        let mut layer_values = Vec::with_capacity(topology.layer_sizes()[layer]);
        for index in 0..topology.layer_sizes()[layer] {
            let ins = topology.in_edges(NodeId::new(layer, index));
            let sum: i32 = ins
                .iter()
                .map(|e| (weights.get(e.slot) * values[e.from.layer][e.from.index]).to_i32())
                .sum();
            layer_values.push(BinaryValue::sign(sum));
        }
        values.push(layer_values);
    }
    counter.network_calls += 1;
    Ok(values.last().unwrap()[0])
}

/// Number of examples the weight string classifies correctly.
pub fn score(
    topology: &NetworkTopology,
    weights: &WeightString,
    training_set: &TrainingSet,
) -> Result<usize> {
    let mut scratch = CallCounter::new();
    let mut correct = 0;
    for example in training_set.examples() {
        if network_eval(topology, weights, &example.inputs, &mut scratch)? == example.target {
            correct += 1;
        }
    }
    Ok(correct)
}

/// Result of brute-force search over all weight strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveSearch {
    pub best: WeightString,
    pub best_score: usize,
    /// How many strings share the best score.
    pub num_best: usize,
}

/// Scores every weight string and returns the first maximum (ties break
/// toward the smallest integer encoding). Adds `examples * 2^slots`
/// network calls to `counter`. Refused above `MAX_EXHAUSTIVE_SLOTS` slots.
pub fn exhaustive_argmax(
    topology: &NetworkTopology,
    training_set: &TrainingSet,
    counter: &mut CallCounter,
) -> Result<ExhaustiveSearch> {
    let slots = topology.num_weights();
    if slots > MAX_EXHAUSTIVE_SLOTS {
        return Err(Error::SearchTooLarge {
            got: slots,
            max: MAX_EXHAUSTIVE_SLOTS,
        });
    }
    let mut best_index = 0usize;
    let mut best_score = 0usize;
    let mut num_best = 0usize;
    let mut first = true;
    for index in 0..1usize << slots {
        let weights = WeightString::from_index(index, slots)?;
        let mut correct = 0usize;
        for example in training_set.examples() {
            if network_eval(topology, &weights, &example.inputs, counter)? == example.target {
                correct += 1;
            }
        }
        if first || correct > best_score {
            best_index = index;
            best_score = correct;
            num_best = 1;
            first = false;
        } else if correct == best_score {
            num_best += 1;
        }
    }
    Ok(ExhaustiveSearch {
        best: WeightString::from_index(best_index, slots)?,
        best_score,
        num_best,
    })
}
