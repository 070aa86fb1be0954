//! Randomized structural invariants: norm preservation, unitarity,
//! linearity, inversion round trips, and encoding round trips.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qbnn::circuit::{Circuit, Gate};
use qbnn::statevector::{Qubit, StateVector};
use qbnn::WeightString;

fn distinct_wires(rng: &mut ChaCha8Rng, num_qubits: usize, count: usize) -> Vec<Qubit> {
    let mut all: Vec<usize> = (0..num_qubits).collect();
    all.shuffle(rng);
    all.truncate(count);
    all.into_iter().map(Qubit).collect()
}

fn random_gate(rng: &mut ChaCha8Rng, num_qubits: usize) -> Gate {
    loop {
        let kind = rng.gen_range(0..8);
        let needed = match kind {
            0 | 1 => 1,
            2 | 3 | 6 => 2,
            4 => 3,
            5 | 7 => rng.gen_range(1..=3.min(num_qubits)),
            _ => unreachable!(),
        };
        if needed > num_qubits {
            continue;
        }
        let w = distinct_wires(rng, num_qubits, needed);
        return match kind {
            0 => Gate::X(w[0]),
            1 => Gate::H(w[0]),
            2 => Gate::Swap(w[0], w[1]),
            3 => Gate::Cnot {
                control: w[0],
                target: w[1],
            },
            4 => Gate::Toffoli {
                controls: [w[0], w[1]],
                target: w[2],
            },
            5 => Gate::MultiControlledZ(w),
            6 => Gate::EqualityPhase {
                a: w[0],
                b: w[1],
                phase: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            },
            7 => Gate::Diffusion(w),
            _ => unreachable!(),
        };
    }
}

fn random_circuit(rng: &mut ChaCha8Rng, num_qubits: usize, num_gates: usize) -> Circuit {
    let mut c = Circuit::new(num_qubits);
    for _ in 0..num_gates {
        c.push(random_gate(rng, num_qubits)).unwrap();
    }
    c
}

fn random_state(rng: &mut ChaCha8Rng, num_qubits: usize) -> StateVector {
    let dim = 1usize << num_qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

#[test]
fn thousand_random_circuits_preserve_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..1000 {
        let num_qubits = rng.gen_range(1..=10);
        let num_gates = rng.gen_range(1..=25);
        let circuit = random_circuit(&mut rng, num_qubits, num_gates);
        let basis = rng.gen_range(0..1usize << num_qubits);
        let mut state = StateVector::basis_state(num_qubits, basis).unwrap();
        circuit.run(&mut state).unwrap();
        assert!(
            (state.norm() - 1.0).abs() < 1e-10,
            "trial {}: norm drifted to {}",
            trial,
            state.norm()
        );
    }
}

#[test]
fn circuits_preserve_inner_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let num_qubits = rng.gen_range(1..=7);
        let num_gates = rng.gen_range(1..=20);
        let circuit = random_circuit(&mut rng, num_qubits, num_gates);
        let mut a = random_state(&mut rng, num_qubits);
        let mut b = random_state(&mut rng, num_qubits);
        let before = a.inner_product(&b).unwrap();
        circuit.run(&mut a).unwrap();
        circuit.run(&mut b).unwrap();
        let after = a.inner_product(&b).unwrap();
        assert!(
            (before - after).norm() < 1e-9,
            "inner product moved: {} vs {}",
            before,
            after
        );
    }
}

#[test]
fn circuits_act_linearly_on_superpositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..100 {
        let num_qubits = rng.gen_range(1..=6);
        let num_gates = rng.gen_range(1..=15);
        let circuit = random_circuit(&mut rng, num_qubits, num_gates);
        let a = random_state(&mut rng, num_qubits);
        let b = random_state(&mut rng, num_qubits);
        // Normalized combination alpha a + beta b, built from amplitudes.
        let alpha = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let beta = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let combo: Vec<Complex64> = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        let norm = combo.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        let combo: Vec<Complex64> = combo.into_iter().map(|v| v / norm).collect();
        let mut direct = StateVector::from_amplitudes(combo).unwrap();
        circuit.run(&mut direct).unwrap();

        let mut ca = a.clone();
        let mut cb = b.clone();
        circuit.run(&mut ca).unwrap();
        circuit.run(&mut cb).unwrap();
        for ((d, x), y) in direct
            .amplitudes()
            .iter()
            .zip(ca.amplitudes())
            .zip(cb.amplitudes())
        {
            let expected = (alpha * x + beta * y) / norm;
            assert!(
                (d - expected).norm() < 1e-10,
                "linearity broke: {} vs {}",
                d,
                expected
            );
        }
    }
}

#[test]
fn two_hundred_circuits_round_trip_through_their_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..200 {
        let num_qubits = rng.gen_range(1..=8);
        let num_gates = rng.gen_range(1..=20);
        let circuit = random_circuit(&mut rng, num_qubits, num_gates);
        let original = random_state(&mut rng, num_qubits);
        let mut state = original.clone();
        circuit.run(&mut state).unwrap();
        circuit.inverse().run(&mut state).unwrap();
        for (x, y) in state.amplitudes().iter().zip(original.amplitudes()) {
            assert!((x - y).norm() < 1e-10);
        }
    }
}

#[test]
fn diffusion_primitive_and_expansion_agree_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..50 {
        let num_qubits = rng.gen_range(2..=8);
        let t = rng.gen_range(1..=3.min(num_qubits));
        let wires = distinct_wires(&mut rng, num_qubits, t);
        let state = random_state(&mut rng, num_qubits);

        let mut primitive = state.clone();
        let mut c = Circuit::new(num_qubits);
        c.push(Gate::Diffusion(wires.clone())).unwrap();
        c.run(&mut primitive).unwrap();

        let mut expanded = state.clone();
        let mut e = Circuit::new(num_qubits);
        for g in Gate::diffusion_expansion(&wires) {
            e.push(g).unwrap();
        }
        e.run(&mut expanded).unwrap();

        for (x, y) in primitive.amplitudes().iter().zip(expanded.amplitudes()) {
            assert!((x - y).norm() < 1e-10);
        }
    }
}

#[test]
fn serialized_random_circuits_parse_back_identically() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..100 {
        let num_qubits = rng.gen_range(1..=9);
        let num_gates = rng.gen_range(0..=15);
        let circuit = random_circuit(&mut rng, num_qubits, num_gates);
        let parsed = Circuit::from_text(num_qubits, &circuit.to_text()).unwrap();
        assert_eq!(circuit, parsed);
    }
}

proptest! {
    #[test]
    fn weight_string_index_round_trips(index in 0usize..1 << 12, extra in 0usize..4) {
        let slots = 12 + extra;
        let w = WeightString::from_index(index, slots).unwrap();
        prop_assert_eq!(w.index(), index);
        prop_assert_eq!(w.len(), slots);
    }

    #[test]
    fn marginals_always_sum_to_one(seed in 0u64..500) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let num_qubits = rng.gen_range(1..=6);
        let circuit = random_circuit(&mut rng, num_qubits, 8);
        let mut state = StateVector::basis_state(num_qubits, 0).unwrap();
        circuit.run(&mut state).unwrap();
        let count = rng.gen_range(1..=num_qubits);
        let wires = distinct_wires(&mut rng, num_qubits, count);
        let probs = state.marginal_distribution(&wires).unwrap();
        prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(probs.iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn equality_phase_and_its_inverse_cancel(phase in -6.0f64..6.0, seed in 0u64..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_state(&mut rng, 3);
        let mut c = Circuit::new(3);
        c.push(Gate::EqualityPhase { a: Qubit(0), b: Qubit(2), phase }).unwrap();
        let mut moved = state.clone();
        c.run(&mut moved).unwrap();
        c.inverse().run(&mut moved).unwrap();
        for (x, y) in moved.amplitudes().iter().zip(state.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }
}
