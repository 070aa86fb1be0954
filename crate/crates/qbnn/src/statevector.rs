//! Dense statevector simulation.
//!
//! A register of `n` qubits is a vector of `2^n` complex amplitudes indexed
//! by basis state. Qubit ordering is little-endian: qubit `k` corresponds to
//! bit `k` of the basis index, so basis index 1 of a two-qubit register is
//! the state with qubit 0 set and qubit 1 clear.
//!
//! Gates are applied in place by pairing amplitudes whose indices differ in
//! the target bit; no full operator matrix is ever materialized. Every
//! mutation preserves the L2 norm (applied matrices are checked for
//! unitarity, phase factors are unit modulus, mean inversion is unitary by
//! construction).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for the unitarity check on applied 2x2 matrices.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Index of a wire in a register. Bounds are checked against the register
/// width at every use, not at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Qubit(pub usize);

impl std::fmt::Display for Qubit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A 2x2 complex matrix in row-major order: `m[row][col]`.
pub type Mat2 = [[Complex64; 2]; 2];

/// Hadamard matrix.
pub fn hadamard() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Pauli X matrix.
pub fn pauli_x() -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [[zero, one], [one, zero]]
}

/// Pauli Z matrix.
pub fn pauli_z() -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    [[one, zero], [zero, -one]]
}

/// Largest entry of `m_dagger * m - I`, used to reject non-unitary input.
fn unitarity_deviation(m: &Mat2) -> f64 {
    let mut worst: f64 = 0.0;
    for row in 0..2 {
        for col in 0..2 {
            // (m_dagger * m)[row][col] = sum_k conj(m[k][row]) * m[k][col]
            let mut entry = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                entry += m[k][row].conj() * m[k][col];
            }
            let expected = if row == col { 1.0 } else { 0.0 };
            worst = worst.max((entry - expected).norm());
        }
    }
    worst
}

fn check_unitary(m: &Mat2) -> Result<()> {
    let deviation = unitarity_deviation(m);
    if deviation > UNITARITY_TOLERANCE {
        return Err(Error::NonUnitary {
            deviation,
            tolerance: UNITARITY_TOLERANCE,
        });
    }
    Ok(())
}

/// Pure state of a qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|basis_index>` of a register with
    /// `num_qubits` wires.
    pub fn basis_state(num_qubits: usize, basis_index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if basis_index >= dim {
            return Err(Error::BasisIndexOutOfRange {
                index: basis_index,
                dim,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[basis_index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps an explicit amplitude vector. The length must be a power of
    /// two and the norm must already be 1 within `UNITARITY_TOLERANCE`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::BasisIndexOutOfRange {
                index: amps.len(),
                dim: amps.len().next_power_of_two().max(1),
            });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNITARITY_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Amplitudes in basis-index order.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// L2 norm. Stays at 1 (within rounding) under every operation here.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn qubit_mask(&self, qubit: Qubit) -> Result<usize> {
        if qubit.0 >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: qubit.0,
                num_qubits: self.num_qubits,
            });
        }
        Ok(1usize << qubit.0)
    }

    fn check_distinct(wires: &[Qubit]) -> Result<()> {
        for (i, a) in wires.iter().enumerate() {
            if wires[i + 1..].contains(a) {
                return Err(Error::DuplicateWire { wire: a.0 });
            }
        }
        Ok(())
    }

    /// Applies a single-qubit unitary to one wire.
    pub fn apply_single_qubit(&mut self, qubit: Qubit, matrix: &Mat2) -> Result<()> {
        check_unitary(matrix)?;
        let step = self.qubit_mask(qubit)?;
        for base in (0..self.amps.len()).step_by(step << 1) {
            for low in base..base + step {
                let high = low + step;
                let a = self.amps[low];
                let b = self.amps[high];
                self.amps[low] = matrix[0][0] * a + matrix[0][1] * b;
                self.amps[high] = matrix[1][0] * a + matrix[1][1] * b;
            }
        }
        Ok(())
    }

    /// Applies a single-qubit unitary to `target`, controlled on every wire
    /// in `controls` being set. With no controls this is `apply_single_qubit`.
    pub fn apply_controlled(
        &mut self,
        controls: &[Qubit],
        target: Qubit,
        matrix: &Mat2,
    ) -> Result<()> {
        check_unitary(matrix)?;
        let mut wires = controls.to_vec();
        wires.push(target);
        Self::check_distinct(&wires)?;
        let mut control_mask = 0usize;
        for c in controls {
            control_mask |= self.qubit_mask(*c)?;
        }
        let step = self.qubit_mask(target)?;
        for base in (0..self.amps.len()).step_by(step << 1) {
            for low in base..base + step {
                if low & control_mask != control_mask {
                    continue;
                }
                let high = low + step;
                let a = self.amps[low];
                let b = self.amps[high];
                self.amps[low] = matrix[0][0] * a + matrix[0][1] * b;
                self.amps[high] = matrix[1][0] * a + matrix[1][1] * b;
            }
        }
        Ok(())
    }

    /// Multiplies every amplitude whose basis index satisfies `predicate`
    /// by `exp(i * phase)`.
    pub fn apply_phase_on_subspace<P>(&mut self, predicate: P, phase: f64)
    where
        P: Fn(usize) -> bool,
    {
        assert!(phase.is_finite(), "phase must be finite");
        let factor = Complex64::from_polar(1.0, phase);
        for (index, amp) in self.amps.iter_mut().enumerate() {
            if predicate(index) {
                *amp *= factor;
            }
        }
    }

    /// Inversion about the mean on a sub-register: for every setting of the
    /// wires *not* listed, the amplitudes over the listed wires are replaced
    /// by `2 * mean - amplitude`. Acting on the listed wires this is the
    /// operator with diagonal entries `2/2^t - 1` and off-diagonal `2/2^t`,
    /// tensored with the identity on the rest.
    pub fn invert_about_mean(&mut self, qubits: &[Qubit]) -> Result<()> {
        if qubits.is_empty() {
            return Err(Error::EmptyWireList);
        }
        Self::check_distinct(qubits)?;
        let mut sub_masks = Vec::with_capacity(qubits.len());
        for q in qubits {
            sub_masks.push(self.qubit_mask(*q)?);
        }
        let listed: usize = sub_masks.iter().sum();
        let rest_masks: Vec<usize> = (0..self.num_qubits)
            .map(|k| 1usize << k)
            .filter(|m| listed & m == 0)
            .collect();
        let sub_dim = 1usize << sub_masks.len();
        let rest_dim = 1usize << rest_masks.len();
        let scale = 2.0 / sub_dim as f64;
        let mut addrs = vec![0usize; sub_dim];
        for rest in 0..rest_dim {
            let mut base = 0usize;
            for (bit, mask) in rest_masks.iter().enumerate() {
                if rest >> bit & 1 == 1 {
                    base |= mask;
                }
            }
            for (sub, addr) in addrs.iter_mut().enumerate() {
                let mut a = base;
                for (bit, mask) in sub_masks.iter().enumerate() {
                    if sub >> bit & 1 == 1 {
                        a |= mask;
                    }
                }
                *addr = a;
            }
            let sum: Complex64 = addrs.iter().map(|&a| self.amps[a]).sum();
            let twice_mean = sum * scale;
            for &a in &addrs {
                self.amps[a] = twice_mean - self.amps[a];
            }
        }
        Ok(())
    }

    /// Probability distribution over the listed wires, tracing out the rest.
    /// Bit `b` of the returned index is the value of `qubits[b]`, so the
    /// result length is `2^qubits.len()`.
    pub fn marginal_distribution(&self, qubits: &[Qubit]) -> Result<Vec<f64>> {
        Self::check_distinct(qubits)?;
        let mut masks = Vec::with_capacity(qubits.len());
        for q in qubits {
            masks.push(self.qubit_mask(*q)?);
        }
        let mut probs = vec![0.0; 1usize << qubits.len()];
        for (index, amp) in self.amps.iter().enumerate() {
            let mut sub = 0usize;
            for (bit, mask) in masks.iter().enumerate() {
                if index & mask != 0 {
                    sub |= 1 << bit;
                }
            }
            probs[sub] += amp.norm_sqr();
        }
        Ok(probs)
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::WidthMismatch {
                left: self.num_qubits,
                right: other.num_qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}
