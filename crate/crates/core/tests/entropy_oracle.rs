mod common;

use common::{random_chain, random_hmm, random_map, rel_err, rng, worked_chain};
use proptest::prelude::*;
use rand::Rng;
use renyi_core::entropy::log2_collision_probability;
use renyi_core::entropy::{
    entropy_rate, finite_length_entropy, markov_rate, noiseless_entropy, noiseless_rate,
};
use renyi_core::format::{parse_model, ModelFile};
use renyi_core::model::{
    deterministic_observation, identity_observation, HiddenMarkovModel, MarkovChain,
};
use renyi_core::oracle::{brute_force_collision, brute_force_entropy};
use renyi_core::tensor::collision_system;
use renyi_core::ObservationMap;

fn small_hmm(seed: u64) -> HiddenMarkovModel {
    let mut r = rng(seed);
    let nx = r.gen_range(1..=3);
    let nz = r.gen_range(1..=3);
    let sparsity = r.gen_range(0.0..0.6);
    random_hmm(&mut r, nx, nz, sparsity)
}

fn full_support_chain(seed: u64) -> MarkovChain {
    let mut r = rng(seed);
    let n = r.gen_range(1..=4);
    let c = random_chain(&mut r, n, 0.4);
    let pi = common::random_distribution(&mut r, n, 0.0);
    MarkovChain::new(c.states().to_vec(), &c.transition().to_dense(), &pi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn formula_matches_enumeration(seed in any::<u64>(), order in 2u32..4, length in 1u64..8) {
        let hmm = small_hmm(seed);
        let sys = collision_system(&hmm, order).unwrap();
        let formula = log2_collision_probability(&sys, length).exp2();
        let brute = brute_force_collision(&hmm, order, length).unwrap();
        prop_assert!(rel_err(formula, brute) <= 1e-10, "{} vs {}", formula, brute);
        let h = finite_length_entropy(&hmm, order, length).unwrap().value;
        let hb = brute_force_entropy(&hmm, order, length).unwrap();
        prop_assert!((h - hb).abs() <= 1e-9 * (1.0 + hb.abs()));
    }

    #[test]
    fn entropies_are_nonnegative_and_nonincreasing_in_order(seed in any::<u64>(), length in 1u64..10) {
        let hmm = small_hmm(seed);
        let h2 = finite_length_entropy(&hmm, 2, length).unwrap().value;
        let h3 = finite_length_entropy(&hmm, 3, length).unwrap().value;
        let h4 = finite_length_entropy(&hmm, 4, length).unwrap().value;
        prop_assert!(h2 >= 0.0 && h3 >= 0.0 && h4 >= 0.0);
        prop_assert!(h3 <= h2 + 1e-9 && h4 <= h3 + 1e-9);
        let r2 = entropy_rate(&hmm, 2).unwrap().value;
        let r3 = entropy_rate(&hmm, 3).unwrap().value;
        prop_assert!(r2 >= 0.0 && r3 >= 0.0 && r3 <= r2 + 1e-9);
    }

    #[test]
    fn markov_rate_agrees_with_visible_hmm(seed in any::<u64>(), order in 2u32..4) {
        let chain = full_support_chain(seed);
        let direct = markov_rate(&chain, order as f64).unwrap().value;
        let via_hmm = entropy_rate(&identity_observation(&chain), order).unwrap().value;
        prop_assert!((direct - via_hmm).abs() <= 1e-9, "{} vs {}", direct, via_hmm);
    }

    #[test]
    fn noiseless_rate_agrees_with_general_pipeline(seed in any::<u64>(), order in 2u32..4) {
        let mut r = rng(seed);
        let nx = r.gen_range(1..=4);
        let nz = r.gen_range(1..=3);
        let chain = random_chain(&mut r, nx, 0.4);
        let map = random_map(&mut r, nx, nz);
        let a = noiseless_rate(&chain, &map, order).unwrap().value;
        let b = entropy_rate(&deterministic_observation(&chain, &map).unwrap(), order).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 || (a.is_infinite() && b.is_infinite()));
        let fa = noiseless_entropy(&chain, &map, order, 6).unwrap().value;
        let fb = brute_force_entropy(&deterministic_observation(&chain, &map).unwrap(), order, 6).unwrap();
        prop_assert!((fa - fb).abs() <= 1e-9 * (1.0 + fb));
    }

    #[test]
    fn markov_rate_is_nonincreasing_in_real_order(seed in any::<u64>(), a in 0.2f64..0.9, b in 1.1f64..4.0) {
        let chain = full_support_chain(seed);
        let low = markov_rate(&chain, a).unwrap().value;
        let high = markov_rate(&chain, b).unwrap().value;
        prop_assert!(high <= low + 1e-9);
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>()) {
        let hmm = small_hmm(seed);
        let file = ModelFile {
            format: 1,
            kind: renyi_core::format::ModelKind::Hmm,
            states: hmm.chain().states().to_vec(),
            transition: hmm.chain().transition().to_dense(),
            initial: hmm.chain().initial().to_vec(),
            observations: Some(hmm.observations().to_vec()),
            emission: Some(hmm.emission().to_dense()),
            observation_map: None,
        };
        let text = file.to_json();
        let reparsed = ModelFile::from_model(&parse_model(&text).unwrap());
        prop_assert_eq!(reparsed.to_json(), text);
    }
}

#[test]
fn finite_length_slope_tracks_rate_on_worked_example() {
    let map = ObservationMap::from_labels(&["a", "b", "a"]);
    let hmm = deterministic_observation(&worked_chain(), &map).unwrap();
    for order in [2u32, 3] {
        let rate = entropy_rate(&hmm, order).unwrap().value;
        let h = |n| finite_length_entropy(&hmm, order, n).unwrap().value;
        let slope = (h(800) - h(400)) / 400.0;
        assert!(
            (slope - rate).abs() < 1e-3,
            "order {order}: slope {slope} rate {rate}"
        );

        let ladder: Vec<f64> = [50u64, 100, 200, 400, 800, 1600]
            .iter()
            .map(|&n| h(n) / n as f64)
            .collect();
        let gaps: Vec<f64> = ladder.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(gaps.windows(2).all(|g| g[1] < g[0]), "gaps {gaps:?}");
    }
}

#[test]
fn collision_probability_lies_in_unit_interval() {
    for seed in 0..30 {
        let hmm = small_hmm(seed);
        for n in 1..=5 {
            let cp = brute_force_collision(&hmm, 2, n).unwrap();
            assert!(cp > 0.0 && cp <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn iid_uniform_symbols_give_log_alphabet_size() {
    for k in 2..=4usize {
        let chain = MarkovChain::new(vec!["s".into()], &[vec![1.0]], &[1.0]).unwrap();
        let hmm = HiddenMarkovModel::new(chain, common::labels("z", k), &[vec![1.0 / k as f64; k]])
            .unwrap();
        for order in 2..=4 {
            let h = finite_length_entropy(&hmm, order, 7).unwrap().value;
            assert!((h - 7.0 * (k as f64).log2()).abs() < 1e-10);
            assert!((entropy_rate(&hmm, order).unwrap().value - (k as f64).log2()).abs() < 1e-10);
        }
    }
}
