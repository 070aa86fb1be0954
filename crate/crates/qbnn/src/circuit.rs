//! Gate-list circuit representation.
//!
//! A circuit is an ordered list of gates over a fixed-width register. Gates
//! are executed through the statevector primitives; nothing here builds an
//! operator matrix except `unitary_matrix`, which is capped at 6 qubits and
//! exists for tests and debugging.
//!
//! The text form is one gate per line, `KIND wire...` with an optional
//! trailing phase parameter, e.g. `EQPHASE 4 5 0.7853981633974483`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::{hadamard, pauli_x, pauli_z, Qubit, StateVector};

/// Widest register for which `unitary_matrix` will build a dense matrix.
pub const MAX_DENSE_QUBITS: usize = 6;

/// One gate. All kinds are self-adjoint except `EqualityPhase`, whose
/// inverse negates the phase.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X(Qubit),
    H(Qubit),
    Swap(Qubit, Qubit),
    Cnot {
        control: Qubit,
        target: Qubit,
    },
    Toffoli {
        controls: [Qubit; 2],
        target: Qubit,
    },
    /// Phase -1 on basis states where every listed wire is set. With a
    /// single wire this is plain Z.
    MultiControlledZ(Vec<Qubit>),
    /// Phase `e^{i phase}` on basis states where the two listed wires carry
    /// equal bits, identity elsewhere.
    EqualityPhase {
        a: Qubit,
        b: Qubit,
        phase: f64,
    },
    /// Inversion about the mean over the listed wires (identity on the
    /// rest): diagonal entries `2/2^t - 1`, off-diagonal `2/2^t`.
    Diffusion(Vec<Qubit>),
}

impl Gate {
    /// Wires the gate touches, in declaration order.
    pub fn wires(&self) -> Vec<Qubit> {
        match self {
            Gate::X(q) | Gate::H(q) => vec![*q],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], *target],
            Gate::MultiControlledZ(ws) | Gate::Diffusion(ws) => ws.clone(),
            Gate::EqualityPhase { a, b, .. } => vec![*a, *b],
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::EqualityPhase { a, b, phase } => Gate::EqualityPhase {
                a: *a,
                b: *b,
                phase: -phase,
            },
            other => other.clone(),
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let wires = self.wires();
        if wires.is_empty() {
            return Err(Error::EmptyWireList);
        }
        for (i, w) in wires.iter().enumerate() {
            if w.0 >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: w.0,
                    num_qubits,
                });
            }
            if wires[i + 1..].contains(w) {
                return Err(Error::DuplicateWire { wire: w.0 });
            }
        }
        if let Gate::EqualityPhase { phase, .. } = self {
            if !phase.is_finite() {
                return Err(Error::InvalidConfig("phase must be finite".into()));
            }
        }
        Ok(())
    }

    pub(crate) fn apply(&self, state: &mut StateVector) -> Result<()> {
        match self {
            Gate::X(q) => state.apply_single_qubit(*q, &pauli_x()),
            Gate::H(q) => state.apply_single_qubit(*q, &hadamard()),
            Gate::Swap(a, b) => {
                state.apply_controlled(&[*a], *b, &pauli_x())?;
                state.apply_controlled(&[*b], *a, &pauli_x())?;
                state.apply_controlled(&[*a], *b, &pauli_x())
            }
            Gate::Cnot { control, target } => {
                state.apply_controlled(&[*control], *target, &pauli_x())
            }
            Gate::Toffoli { controls, target } => {
                state.apply_controlled(controls, *target, &pauli_x())
            }
            Gate::MultiControlledZ(ws) => {
                let (target, controls) = ws.split_last().expect("validated non-empty");
                state.apply_controlled(controls, *target, &pauli_z())
            }
            Gate::EqualityPhase { a, b, phase } => {
                let ma = 1usize << a.0;
                let mb = 1usize << b.0;
                state.apply_phase_on_subspace(|i| (i & ma != 0) == (i & mb != 0), *phase);
                Ok(())
            }
            Gate::Diffusion(ws) => state.invert_about_mean(ws),
        }
    }

    /// Lowers a diffusion block over `wires` to elementary gates.
    ///
    /// The textbook block (H on each wire, X on each wire, multi-controlled
    /// Z, X, H) equals the *negative* of the mean-inversion operator, and a
    /// global -1 is visible in the dense matrix. The trailing X,Z,X,Z pair
    /// on the first wire contributes exactly that -1, so the expansion
    /// matches `Gate::Diffusion` entrywise.
    pub fn diffusion_expansion(wires: &[Qubit]) -> Vec<Gate> {
        let mut gates = Vec::with_capacity(4 * wires.len() + 5);
        gates.extend(wires.iter().map(|q| Gate::H(*q)));
        gates.extend(wires.iter().map(|q| Gate::X(*q)));
        gates.push(Gate::MultiControlledZ(wires.to_vec()));
        gates.extend(wires.iter().map(|q| Gate::X(*q)));
        gates.extend(wires.iter().map(|q| Gate::H(*q)));
        if let Some(first) = wires.first() {
            gates.push(Gate::X(*first));
            gates.push(Gate::MultiControlledZ(vec![*first]));
            gates.push(Gate::X(*first));
            gates.push(Gate::MultiControlledZ(vec![*first]));
        }
        gates
    }

    fn to_text(&self) -> String {
        let wires = |ws: &[Qubit]| {
            ws.iter()
                .map(|q| q.0.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        match self {
            Gate::X(q) => format!("X {}", q),
            Gate::H(q) => format!("H {}", q),
            Gate::Swap(a, b) => format!("SWAP {} {}", a, b),
            Gate::Cnot { control, target } => format!("CNOT {} {}", control, target),
            Gate::Toffoli { controls, target } => {
                format!("TOFFOLI {} {} {}", controls[0], controls[1], target)
            }
            Gate::MultiControlledZ(ws) => format!("MCZ {}", wires(ws)),
            Gate::EqualityPhase { a, b, phase } => format!("EQPHASE {} {} {:?}", a, b, phase),
            Gate::Diffusion(ws) => format!("DIFFUSION {}", wires(ws)),
        }
    }

    fn from_text(line_no: usize, line: &str) -> Result<Gate> {
        let mut parts = line.split_whitespace();
        let kind = parts.next().expect("caller skips blank lines");
        let rest: Vec<&str> = parts.collect();
        let wire = |s: &str| -> Result<Qubit> {
            s.parse::<usize>()
                .map(Qubit)
                .map_err(|_| Error::parse(line_no, format!("bad wire index '{}'", s)))
        };
        let expect_arity = |n: usize| -> Result<()> {
            if rest.len() != n {
                return Err(Error::parse(
                    line_no,
                    format!("{} expects {} fields, got {}", kind, n, rest.len()),
                ));
            }
            Ok(())
        };
        match kind {
            "X" => {
                expect_arity(1)?;
                Ok(Gate::X(wire(rest[0])?))
            }
            "H" => {
                expect_arity(1)?;
                Ok(Gate::H(wire(rest[0])?))
            }
            "SWAP" => {
                expect_arity(2)?;
                Ok(Gate::Swap(wire(rest[0])?, wire(rest[1])?))
            }
            "CNOT" => {
                expect_arity(2)?;
                Ok(Gate::Cnot {
                    control: wire(rest[0])?,
                    target: wire(rest[1])?,
                })
            }
            "TOFFOLI" => {
                expect_arity(3)?;
                Ok(Gate::Toffoli {
                    controls: [wire(rest[0])?, wire(rest[1])?],
                    target: wire(rest[2])?,
                })
            }
            "MCZ" => {
                if rest.is_empty() {
                    return Err(Error::parse(line_no, "MCZ needs at least one wire"));
                }
                Ok(Gate::MultiControlledZ(
                    rest.iter().map(|s| wire(s)).collect::<Result<_>>()?,
                ))
            }
            "EQPHASE" => {
                expect_arity(3)?;
                let phase: f64 = rest[2]
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad phase '{}'", rest[2])))?;
                Ok(Gate::EqualityPhase {
                    a: wire(rest[0])?,
                    b: wire(rest[1])?,
                    phase,
                })
            }
            "DIFFUSION" => {
                if rest.is_empty() {
                    return Err(Error::parse(line_no, "DIFFUSION needs at least one wire"));
                }
                Ok(Gate::Diffusion(
                    rest.iter().map(|s| wire(s)).collect::<Result<_>>()?,
                ))
            }
            other => Err(Error::parse(
                line_no,
                format!("unknown gate kind '{}'", other),
            )),
        }
    }
}

/// Ordered gate list over a fixed-width register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after validating its wires against this register.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// `self` followed by `other`. Both must have the same width.
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::WidthMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend(other.gates.iter().cloned());
        Ok(Circuit {
            num_qubits: self.num_qubits,
            gates,
        })
    }

    /// Reversed gate order with each gate inverted, so
    /// `run(inverse) . run(self)` is the identity.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Applies the gates in order to `state`.
    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::WidthMismatch {
                left: self.num_qubits,
                right: state.num_qubits(),
            });
        }
        for gate in &self.gates {
            gate.apply(state)?;
        }
        Ok(())
    }

    /// Dense matrix of the whole circuit, `mat[row][col]`. Column `j` is the
    /// circuit applied to basis state `j`. Refused above
    /// `MAX_DENSE_QUBITS` qubits.
    pub fn unitary_matrix(&self) -> Result<Vec<Vec<Complex64>>> {
        if self.num_qubits > MAX_DENSE_QUBITS {
            return Err(Error::MatrixTooLarge {
                got: self.num_qubits,
                max: MAX_DENSE_QUBITS,
            });
        }
        let dim = 1usize << self.num_qubits;
        let mut mat = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            let mut state = StateVector::basis_state(self.num_qubits, col)?;
            self.run(&mut state)?;
            for (row, amp) in state.amplitudes().iter().enumerate() {
                mat[row][col] = *amp;
            }
        }
        Ok(mat)
    }

    /// One gate per line; empty for an empty circuit.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            out.push_str(&gate.to_text());
            out.push('\n');
        }
        out
    }

    /// Parses the `to_text` form. Blank lines and `#` comments are skipped.
    pub fn from_text(num_qubits: usize, text: &str) -> Result<Circuit> {
        let mut circuit = Circuit::new(num_qubits);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let gate = Gate::from_text(idx + 1, line)?;
            gate.validate(num_qubits)
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            circuit.gates.push(gate);
        }
        Ok(circuit)
    }
}
