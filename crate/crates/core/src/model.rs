//! Markov chains, hidden Markov models and the joint (hidden, observed)
//! chain that feeds the tensoring step.
//!
//! Labels are strings at the boundary and dense indices inside. Pair
//! indices of the joint chain are lexicographic with the hidden state as
//! the outer key: `(x, z) -> x * |Z| + z`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matrix::{Kernel, NonnegMatrix};

/// Row sums further than this from 1 are rejected; closer ones are
/// renormalized.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// Sums this close to 1 are left untouched, so normalizing twice is a
/// no-op.
const RENORMALIZE_SLACK: f64 = 1e-13;

fn check_unique(labels: &[String]) -> Result<()> {
    let mut seen = HashMap::with_capacity(labels.len());
    for l in labels {
        if seen.insert(l.as_str(), ()).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn check_row_sum(row: usize, sum: f64) -> Result<()> {
    if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
        return Err(Error::NonStochasticRow { row, sum });
    }
    Ok(())
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChain {
    states: Vec<String>,
    transition: NonnegMatrix,
    initial: Vec<f64>,
}

impl MarkovChain {
    pub fn new(states: Vec<String>, transition: &[Vec<f64>], initial: &[f64]) -> Result<Self> {
        let n = states.len();
        if transition.len() != n {
            return Err(Error::DimensionMismatch {
                what: "transition rows",
                expected: n,
                found: transition.len(),
            });
        }
        if initial.len() != n {
            return Err(Error::DimensionMismatch {
                what: "initial distribution",
                expected: n,
                found: initial.len(),
            });
        }
        check_unique(&states)?;
        let mut p = NonnegMatrix::from_dense(transition)?;
        for (i, s) in p.row_sums().into_iter().enumerate() {
            check_row_sum(i, s)?;
        }
        p.normalize_rows(RENORMALIZE_SLACK);

        let mut pi = initial.to_vec();
        for (i, &v) in pi.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: 0, col: i });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry {
                    row: 0,
                    col: i,
                    value: v,
                });
            }
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(Error::NonStochasticInitial { sum: total });
        }
        if (total - 1.0).abs() > RENORMALIZE_SLACK {
            pi.iter_mut().for_each(|v| *v /= total);
        }

        Ok(MarkovChain {
            states,
            transition: p,
            initial: pi,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn transition(&self) -> &NonnegMatrix {
        &self.transition
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }
}

/// Validates a transition matrix and initial distribution, labelling states
/// `"0"`, `"1"`, ...
pub fn validate_chain(transition: &[Vec<f64>], initial: &[f64]) -> Result<MarkovChain> {
    MarkovChain::new(default_labels(transition.len()), transition, initial)
}

/// Hidden chain plus a memoryless emission kernel `E[x, z] = p(z | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenMarkovModel {
    chain: MarkovChain,
    observations: Vec<String>,
    emission: Kernel,
}

impl HiddenMarkovModel {
    pub fn new(
        chain: MarkovChain,
        observations: Vec<String>,
        emission: &[Vec<f64>],
    ) -> Result<Self> {
        if emission.len() != chain.num_states() {
            return Err(Error::DimensionMismatch {
                what: "emission rows",
                expected: chain.num_states(),
                found: emission.len(),
            });
        }
        check_unique(&observations)?;
        let mut e = Kernel::from_dense(emission, observations.len())?;
        for x in 0..e.rows() {
            let s: f64 = e.row(x).iter().sum();
            check_row_sum(x, s)?;
            if (s - 1.0).abs() > RENORMALIZE_SLACK {
                e.row_mut(x).iter_mut().for_each(|v| *v /= s);
            }
        }
        Ok(HiddenMarkovModel {
            chain,
            observations,
            emission: e,
        })
    }

    pub fn chain(&self) -> &MarkovChain {
        &self.chain
    }

    pub fn num_states(&self) -> usize {
        self.chain.num_states()
    }

    pub fn num_symbols(&self) -> usize {
        self.observations.len()
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn emission(&self) -> &Kernel {
        &self.emission
    }

    pub fn symbol_index(&self, label: &str) -> Result<usize> {
        self.observations
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::UnknownSymbol(label.to_string()))
    }

    /// Distribution of the first observed symbol, `Σ_x π[x] E[x, z]`.
    pub fn first_symbol_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.num_symbols()];
        for (x, &p) in self.chain.initial().iter().enumerate() {
            for (z, o) in out.iter_mut().enumerate() {
                *o += p * self.emission.get(x, z);
            }
        }
        out
    }
}

/// Deterministic observation map `T: X -> Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationMap {
    labels: Vec<String>,
    image: Vec<usize>,
}

impl ObservationMap {
    /// One symbol label per hidden state; symbol order is order of first
    /// appearance.
    pub fn from_labels<S: AsRef<str>>(per_state: &[S]) -> Self {
        let mut labels: Vec<String> = Vec::new();
        let image = per_state
            .iter()
            .map(|s| {
                let s = s.as_ref();
                match labels.iter().position(|l| l == s) {
                    Some(k) => k,
                    None => {
                        labels.push(s.to_string());
                        labels.len() - 1
                    }
                }
            })
            .collect();
        ObservationMap { labels, image }
    }

    /// Map with an explicit symbol alphabet (which may contain symbols that
    /// no state emits).
    pub fn with_alphabet<S: AsRef<str>>(alphabet: Vec<String>, per_state: &[S]) -> Result<Self> {
        check_unique(&alphabet)?;
        let image = per_state
            .iter()
            .map(|s| {
                let s = s.as_ref();
                alphabet
                    .iter()
                    .position(|l| l == s)
                    .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(ObservationMap {
            labels: alphabet,
            image,
        })
    }

    pub fn from_indices(image: Vec<usize>, num_symbols: usize) -> Result<Self> {
        if let Some(&bad) = image.iter().find(|&&z| z >= num_symbols) {
            return Err(Error::DimensionMismatch {
                what: "observation map image",
                expected: num_symbols,
                found: bad,
            });
        }
        Ok(ObservationMap {
            labels: default_labels(num_symbols),
            image,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_symbols(&self) -> usize {
        self.labels.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, state: usize) -> usize {
        self.image[state]
    }
}

/// HMM observing the chain itself (`Z = X`, identity emission).
pub fn identity_observation(chain: &MarkovChain) -> HiddenMarkovModel {
    let n = chain.num_states();
    let emission: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    HiddenMarkovModel::new(chain.clone(), chain.states().to_vec(), &emission)
        .expect("identity emission is stochastic")
}

/// HMM with noiseless observations `Z = T(X)`.
pub fn deterministic_observation(
    chain: &MarkovChain,
    map: &ObservationMap,
) -> Result<HiddenMarkovModel> {
    if map.image().len() != chain.num_states() {
        return Err(Error::DimensionMismatch {
            what: "observation map domain",
            expected: chain.num_states(),
            found: map.image().len(),
        });
    }
    let emission: Vec<Vec<f64>> = map
        .image()
        .iter()
        .map(|&t| {
            (0..map.num_symbols())
                .map(|z| if z == t { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    HiddenMarkovModel::new(chain.clone(), map.labels().to_vec(), &emission)
}

/// The pair process `(X_i, Z_i)`, which is Markov with transition
/// `p(x', z' | x, z) = P[x, x'] E[x', z']`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointChain {
    pub pairs: Vec<(usize, usize)>,
    pub matrix: NonnegMatrix,
    pub initial: Vec<f64>,
}

impl JointChain {
    #[inline]
    pub fn pair_index(num_symbols: usize, x: usize, z: usize) -> usize {
        x * num_symbols + z
    }
}

pub fn joint_chain(hmm: &HiddenMarkovModel) -> JointChain {
    let nx = hmm.num_states();
    let nz = hmm.num_symbols();
    let p = hmm.chain().transition();
    let e = hmm.emission();
    let pairs: Vec<(usize, usize)> = (0..nx).flat_map(|x| (0..nz).map(move |z| (x, z))).collect();

    // rows depend only on x
    let rows_by_state: Vec<Vec<(usize, f64)>> = (0..nx)
        .map(|x| {
            p.row(x)
                .flat_map(|(x2, pv)| {
                    (0..nz).filter_map(move |z2| {
                        let v = pv * e.get(x2, z2);
                        (v > 0.0).then_some((JointChain::pair_index(nz, x2, z2), v))
                    })
                })
                .collect()
        })
        .collect();
    let rows = pairs
        .iter()
        .map(|&(x, _)| rows_by_state[x].clone())
        .collect();
    let matrix = NonnegMatrix::from_rows(nx * nz, rows).expect("joint chain entries are valid");
    let initial = pairs
        .iter()
        .map(|&(x, z)| hmm.chain().initial()[x] * e.get(x, z))
        .collect();
    JointChain {
        pairs,
        matrix,
        initial,
    }
}
