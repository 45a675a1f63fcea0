mod common;

use common::{random_chain, random_hmm, random_map, rel_err, rng};
use proptest::prelude::*;
use renyi_core::model::{deterministic_observation, joint_chain, JointChain};
use renyi_core::tensor::{
    collision_system, collision_system_with, hadamard_power, kronecker_power,
    noiseless_collision_system, DEFAULT_MAX_DIM,
};
use renyi_core::{CollisionIndex, NonnegMatrix, TensorOptions};

/// Position of the collision index `(x⃗, z)` inside the full Kronecker power
/// of the joint chain, where pairs are numbered `x·|Z| + z`.
fn full_position(index: &CollisionIndex, nz: usize, pairs: usize) -> usize {
    index.hidden.iter().fold(0, |acc, &x| {
        acc * pairs + JointChain::pair_index(nz, x, index.symbol)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn joint_chain_is_stochastic_and_ignores_current_symbol(seed in any::<u64>(), nx in 1usize..5, nz in 1usize..4) {
        let hmm = random_hmm(&mut rng(seed), nx, nz, 0.3);
        let j = joint_chain(&hmm);
        for r in 0..j.matrix.dim() {
            prop_assert!((j.matrix.row_sum(r) - 1.0).abs() < 1e-12);
        }
        prop_assert!((j.initial.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for x in 0..nx {
            let base: Vec<_> = j.matrix.row(JointChain::pair_index(nz, x, 0)).collect();
            for z in 1..nz {
                let other: Vec<_> = j.matrix.row(JointChain::pair_index(nz, x, z)).collect();
                prop_assert_eq!(&base, &other);
            }
        }
    }

    #[test]
    fn collision_system_is_restricted_kronecker_power(seed in any::<u64>(), nx in 1usize..4, nz in 1usize..4, order in 2u32..4) {
        let hmm = random_hmm(&mut rng(seed), nx, nz, 0.3);
        let j = joint_chain(&hmm);
        let full = kronecker_power(&j.matrix, order, DEFAULT_MAX_DIM).unwrap();
        let full_init: Vec<f64> = {
            let mut v = vec![1.0];
            for _ in 0..order {
                v = v.iter().flat_map(|a| j.initial.iter().map(move |b| a * b)).collect();
            }
            v
        };
        let sys = collision_system(&hmm, order).unwrap();
        prop_assert_eq!(sys.dim(), nx.pow(order) * nz);
        let pos: Vec<usize> = sys.indices.iter().map(|i| full_position(i, nz, nx * nz)).collect();
        for (r, &fr) in pos.iter().enumerate() {
            prop_assert!((sys.initial[r] - full_init[fr]).abs() < 1e-15);
            for (c, &fc) in pos.iter().enumerate() {
                prop_assert!((sys.matrix.get(r, c) - full.get(fr, fc)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn collision_system_is_substochastic(seed in any::<u64>(), nx in 1usize..5, nz in 1usize..4, order in 2u32..4) {
        let hmm = random_hmm(&mut rng(seed), nx, nz, 0.3);
        let sys = collision_system(&hmm, order).unwrap();
        for r in 0..sys.dim() {
            prop_assert!(sys.matrix.row_sum(r) <= 1.0 + 1e-12);
        }
        for (_, _, v) in sys.matrix.entries() {
            prop_assert!(v > 0.0);
        }
    }

    #[test]
    fn initial_mass_is_first_symbol_collision(seed in any::<u64>(), nx in 1usize..5, nz in 1usize..4, order in 2u32..4) {
        let hmm = random_hmm(&mut rng(seed), nx, nz, 0.3);
        let sys = collision_system(&hmm, order).unwrap();
        let expected: f64 = hmm.first_symbol_distribution().iter().map(|p| p.powi(order as i32)).sum();
        prop_assert!(rel_err(sys.initial.iter().sum(), expected) < 1e-12);
    }

    #[test]
    fn pruning_keeps_live_indices_only(seed in any::<u64>(), nx in 1usize..5, nz in 1usize..4, order in 2u32..4) {
        let hmm = random_hmm(&mut rng(seed), nx, nz, 0.5);
        let full = collision_system(&hmm, order).unwrap();
        let opts = TensorOptions { prune_dead: true, ..TensorOptions::default() };
        let pruned = collision_system_with(&hmm, order, &opts).unwrap();
        for (r, idx) in pruned.indices.iter().enumerate() {
            let fr = full.position(idx).unwrap();
            prop_assert_eq!(pruned.initial[r], full.initial[fr]);
            for (c, idx2) in pruned.indices.iter().enumerate() {
                let fc = full.position(idx2).unwrap();
                prop_assert_eq!(pruned.matrix.get(r, c), full.matrix.get(fr, fc));
            }
        }
        // every dropped index has an empty column and no initial weight
        for (fr, idx) in full.indices.iter().enumerate() {
            if pruned.position(idx).is_none() {
                prop_assert_eq!(full.initial[fr], 0.0);
                prop_assert!(full.matrix.entries().all(|(_, c, _)| c != fr));
            }
        }
    }

    #[test]
    fn kronecker_row_sums_are_powers(seed in any::<u64>(), n in 1usize..5, order in 1u32..4) {
        let a = common::random_matrix(&mut rng(seed), n, 0.6);
        let k = kronecker_power(&a, order, DEFAULT_MAX_DIM).unwrap();
        prop_assert_eq!(k.dim(), n.pow(order));
        let sums = a.row_sums();
        for r in 0..k.dim() {
            let mut t = r;
            let mut expected = 1.0;
            for _ in 0..order {
                expected *= sums[t % n];
                t /= n;
            }
            prop_assert!(rel_err(k.row_sum(r), expected) < 1e-12);
        }
    }

    #[test]
    fn noiseless_matches_pruned_general_system(seed in any::<u64>(), nx in 1usize..5, nz in 1usize..4, order in 2u32..4) {
        let mut r = rng(seed);
        let chain = random_chain(&mut r, nx, 0.3);
        let map = random_map(&mut r, nx, nz);
        let noiseless = noiseless_collision_system(&chain, &map, order).unwrap();
        let hmm = deterministic_observation(&chain, &map).unwrap();
        let opts = TensorOptions { prune_dead: true, ..TensorOptions::default() };
        let pruned = collision_system_with(&hmm, order, &opts).unwrap();
        prop_assert_eq!(&noiseless.indices, &pruned.indices);
        prop_assert_eq!(&noiseless.matrix, &pruned.matrix);
        prop_assert_eq!(&noiseless.initial, &pruned.initial);
    }

    #[test]
    fn hadamard_power_is_entrywise(seed in any::<u64>(), n in 1usize..6, alpha in 0.1f64..5.0) {
        let a = common::random_matrix(&mut rng(seed), n, 0.5);
        let h = hadamard_power(&a, alpha);
        prop_assert_eq!(h.nnz(), a.nnz());
        for (i, j, v) in a.entries() {
            prop_assert!(rel_err(h.get(i, j), v.powf(alpha)) < 1e-14);
        }
    }
}

#[test]
fn triple_kronecker_entries_of_random_two_by_two() {
    for seed in 0..20 {
        let a = common::random_matrix(&mut rng(seed), 2, 0.8);
        let k = kronecker_power(&a, 3, DEFAULT_MAX_DIM).unwrap();
        for r in 0..8 {
            for c in 0..8 {
                let (i, j) = ([r >> 2, (r >> 1) & 1, r & 1], [c >> 2, (c >> 1) & 1, c & 1]);
                let expected = a.get(i[0], j[0]) * a.get(i[1], j[1]) * a.get(i[2], j[2]);
                assert_eq!(k.get(r, c), expected);
            }
        }
    }
}

#[test]
fn hadamard_fractional_order_scalar_check() {
    let a = NonnegMatrix::from_dense(&[vec![0.3, 0.7], vec![1.0, 0.0]]).unwrap();
    let h = hadamard_power(&a, 2.5);
    assert!((h.get(0, 0) - 0.3f64.powf(2.5)).abs() < 1e-15);
    assert!((h.get(0, 1) - 0.7f64.powf(2.5)).abs() < 1e-15);
    assert_eq!(h.get(1, 0), 1.0);
    assert_eq!(h.get(1, 1), 0.0);
}

#[test]
fn dimension_guard_reports_requested_size() {
    let mut r = rng(7);
    let hmm = common::random_hmm(&mut r, 10, 2, 0.0);
    let opts = TensorOptions {
        max_dim: 1000,
        ..TensorOptions::default()
    };
    let err = collision_system_with(&hmm, 3, &opts).unwrap_err();
    assert!(err.is_dimension_guard());
    assert!(collision_system_with(&hmm, 2, &opts).is_ok());
}
