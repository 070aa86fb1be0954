//! Seeded generators for training sets and score profiles.
//!
//! Experiments that need randomness take an explicit seed and draw from a
//! counter-based generator, so every run is reproducible bit for bit.

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qbnn::bnn::{
    network_eval, BinaryValue, CallCounter, NetworkTopology, TrainingExample, TrainingSet,
    WeightString,
};
use qbnn::trainer::PhaseProfile;

/// How targets are assigned to randomly drawn inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelRule {
    /// Targets computed from a fixed weight string, which then scores
    /// perfectly by construction.
    Planted(WeightString),
    /// Independent fair-coin targets.
    Random,
}

/// Maximum regeneration attempts for a degenerate planted set.
pub const MAX_PLANT_ATTEMPTS: usize = 8;

fn draw_examples(rng: &mut ChaCha8Rng, arity: usize, count: usize) -> Vec<Vec<BinaryValue>> {
    (0..count)
        .map(|_| {
            (0..arity)
                .map(|_| BinaryValue::from_bool(rng.gen()))
                .collect()
        })
        .collect()
}

/// Draws `num_examples` input rows uniformly with replacement and labels
/// them by `rule`.
///
/// A planted rule can still be degenerate: some other string may match the
/// plant on every drawn input and tie at the perfect score. Such sets are
/// redrawn (same generator stream) up to [`MAX_PLANT_ATTEMPTS`] times.
pub fn random_training_set(
    topology: &NetworkTopology,
    num_examples: usize,
    rule: &LabelRule,
    seed: u64,
) -> Result<TrainingSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arity = topology.num_inputs();
    match rule {
        LabelRule::Random => {
            let examples = draw_examples(&mut rng, arity, num_examples)
                .into_iter()
                .map(|inputs| {
                    let target = BinaryValue::from_bool(rng.gen());
                    TrainingExample::new(inputs, target)
                })
                .collect();
            TrainingSet::new(examples).context("random training set")
        }
        LabelRule::Planted(star) => {
            let mut scratch = CallCounter::new();
            for _ in 0..MAX_PLANT_ATTEMPTS {
                let examples: Vec<TrainingExample> = draw_examples(&mut rng, arity, num_examples)
                    .into_iter()
                    .map(|inputs| {
                        let target = network_eval(topology, star, &inputs, &mut scratch)?;
                        Ok(TrainingExample::new(inputs, target))
                    })
                    .collect::<qbnn::Result<_>>()?;
                let ts = TrainingSet::new(examples)?;
                let profile = PhaseProfile::from_instance(topology, &ts)?;
                if profile.num_at_max() == 1 {
                    return Ok(ts);
                }
            }
            bail!(
                "planted training set stayed degenerate after {} attempts (seed {})",
                MAX_PLANT_ATTEMPTS,
                seed
            );
        }
    }
}

/// The worst-case set for a planted string: `copies` repetitions of the one
/// example only the plant classifies correctly (its negated inputs with a
/// negative target). Exactly one string scores `copies`; all others score 0.
pub fn hard_training_set(star: &WeightString, copies: usize) -> TrainingSet {
    let inputs: Vec<BinaryValue> = star.values().iter().map(|v| -*v).collect();
    let example = TrainingExample::new(inputs, BinaryValue::Minus);
    TrainingSet::new(vec![example; copies]).expect("copies >= 1")
}

/// Score profile of a synthetic instance: each of `num_examples` examples
/// marks every string independently with probability 1/2, mirroring the
/// shape score(w) = number of examples w satisfies.
pub fn synthetic_profile(num_slots: usize, num_examples: usize, seed: u64) -> PhaseProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scores = vec![0u32; 1 << num_slots];
    for _ in 0..num_examples {
        for s in scores.iter_mut() {
            if rng.gen::<bool>() {
                *s += 1;
            }
        }
    }
    PhaseProfile::from_scores(scores).expect("power-of-two length")
}

/// Profile with a single perfect string and all others at zero.
pub fn grover_profile(num_slots: usize, num_examples: usize, marked: usize) -> PhaseProfile {
    let mut scores = vec![0u32; 1 << num_slots];
    scores[marked] = num_examples as u32;
    PhaseProfile::from_scores(scores).expect("power-of-two length")
}

/// Profile in which every string ties; training cannot distinguish anything.
pub fn uniform_profile(num_slots: usize, num_examples: usize) -> PhaseProfile {
    let scores = vec![num_examples as u32 / 2; 1 << num_slots];
    PhaseProfile::from_scores(scores).expect("power-of-two length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use qbnn::bnn::score;

    #[test]
    fn random_rule_is_reproducible_and_well_formed() {
        let topology = NetworkTopology::two_two_one();
        let a = random_training_set(&topology, 6, &LabelRule::Random, 11).unwrap();
        let b = random_training_set(&topology, 6, &LabelRule::Random, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert_eq!(a.input_arity(), 2);
        let c = random_training_set(&topology, 6, &LabelRule::Random, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn planted_rule_scores_perfectly_and_uniquely() {
        let topology = NetworkTopology::single_neuron();
        let star = WeightString::from_index(2, 2).unwrap();
        let ts = random_training_set(&topology, 6, &LabelRule::Planted(star.clone()), 5).unwrap();
        assert_eq!(score(&topology, &star, &ts).unwrap(), ts.len());
        let profile = PhaseProfile::from_instance(&topology, &ts).unwrap();
        assert_eq!(profile.num_at_max(), 1);
        assert_eq!(profile.argmax_set(), vec![star.index()]);
    }

    #[test]
    fn hard_set_isolates_the_plant() {
        let topology = NetworkTopology::single_neuron();
        for index in 0..4 {
            let star = WeightString::from_index(index, 2).unwrap();
            let ts = hard_training_set(&star, 4);
            let profile = PhaseProfile::from_instance(&topology, &ts).unwrap();
            assert_eq!(profile.scores()[index], 4);
            assert_eq!(profile.scores().iter().sum::<u32>(), 4);
        }
    }

    #[test]
    fn profile_generators_have_the_promised_shapes() {
        let g = grover_profile(4, 8, 13);
        assert_eq!(g.len(), 16);
        assert_eq!(g.max_score(), 8);
        assert_eq!(g.argmax_set(), vec![13]);

        let u = uniform_profile(4, 8);
        assert!(u.scores().iter().all(|&s| s == 4));

        let s1 = synthetic_profile(4, 8, 21);
        let s2 = synthetic_profile(4, 8, 21);
        assert_eq!(s1, s2);
        assert_eq!(s1.len(), 16);
        assert!(s1.scores().iter().all(|&k| k <= 8));
    }
}
