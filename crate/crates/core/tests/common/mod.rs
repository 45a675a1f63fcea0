#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renyi_core::model::{HiddenMarkovModel, MarkovChain, ObservationMap};
use renyi_core::NonnegMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random probability vector of length `n`; each entry is zeroed with
/// probability `sparsity`, but at least one entry stays positive.
pub fn random_distribution(rng: &mut impl Rng, n: usize, sparsity: f64) -> Vec<f64> {
    let keep = rng.gen_range(0..n);
    let mut v: Vec<f64> = (0..n)
        .map(|i| {
            if i != keep && rng.gen_bool(sparsity) {
                0.0
            } else {
                rng.gen_range(0.05..1.0)
            }
        })
        .collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn random_chain(rng: &mut impl Rng, n: usize, sparsity: f64) -> MarkovChain {
    let p: Vec<Vec<f64>> = (0..n)
        .map(|_| random_distribution(rng, n, sparsity))
        .collect();
    let pi = random_distribution(rng, n, sparsity);
    MarkovChain::new(labels("s", n), &p, &pi).unwrap()
}

pub fn random_hmm(rng: &mut impl Rng, nx: usize, nz: usize, sparsity: f64) -> HiddenMarkovModel {
    let chain = random_chain(rng, nx, sparsity);
    let e: Vec<Vec<f64>> = (0..nx)
        .map(|_| random_distribution(rng, nz, sparsity))
        .collect();
    HiddenMarkovModel::new(chain, labels("z", nz), &e).unwrap()
}

pub fn random_map(rng: &mut impl Rng, nx: usize, nz: usize) -> ObservationMap {
    let image = (0..nx).map(|_| rng.gen_range(0..nz)).collect();
    ObservationMap::from_indices(image, nz).unwrap()
}

/// Random non-negative matrix with roughly `density` of its entries positive.
pub fn random_matrix(rng: &mut impl Rng, n: usize, density: f64) -> NonnegMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(density) {
                        rng.gen_range(0.01..1.0)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    NonnegMatrix::from_dense(&rows).unwrap()
}

pub fn dense_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k] == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn worked_chain() -> MarkovChain {
    MarkovChain::new(
        vec!["1".into(), "2".into(), "3".into()],
        &[
            vec![0.9, 0.1, 0.0],
            vec![0.0, 0.4, 0.6],
            vec![0.0, 0.6, 0.4],
        ],
        &[1.0 / 3.0; 3],
    )
    .unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}
