//! Inputs shared by the criterion benchmarks in `benches/`.

use renyi_core::model::{
    deterministic_observation, HiddenMarkovModel, MarkovChain, ObservationMap,
};

/// The three-state chain whose states 1 and 3 emit the same colour.
pub fn worked_example() -> (MarkovChain, ObservationMap) {
    let chain = MarkovChain::new(
        vec!["1".into(), "2".into(), "3".into()],
        &[
            vec![0.9, 0.1, 0.0],
            vec![0.0, 0.4, 0.6],
            vec![0.0, 0.6, 0.4],
        ],
        &[1.0 / 3.0; 3],
    )
    .expect("valid chain");
    (chain, ObservationMap::from_labels(&["a", "b", "a"]))
}

/// Dense `n`-state chain with deterministic, unequal weights.
pub fn dense_chain(n: usize) -> MarkovChain {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let w: Vec<f64> = (0..n).map(|j| 1.0 + ((i * 7 + j * 3) % 5) as f64).collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|v| v / s).collect()
        })
        .collect();
    let states = (0..n).map(|i| format!("s{i}")).collect();
    MarkovChain::new(states, &rows, &vec![1.0 / n as f64; n]).expect("valid chain")
}

/// `dense_chain(n)` observed through `num_symbols` colours assigned
/// round-robin.
pub fn colored_chain(n: usize, num_symbols: usize) -> HiddenMarkovModel {
    let map = ObservationMap::from_indices((0..n).map(|i| i % num_symbols).collect(), num_symbols)
        .expect("valid map");
    deterministic_observation(&dense_chain(n), &map).expect("valid observation")
}
