//! Finite-length Rényi entropies and Rényi entropy rates.
//!
//! For integer order α ≥ 2 and `n` observed symbols the collision
//! probability is `CP = ν^T A^(n-1) 1` on the collision system, and
//! `H_α(Z_1..Z_n) = log2(CP) / (1 − α)`. The rate is
//! `log2(ρ⁺) / (1 − α)` where `ρ⁺` is the largest Perron root among
//! components of `A` reachable from the support of `ν`.

use crate::error::{Error, Result};
use crate::model::{deterministic_observation, HiddenMarkovModel, MarkovChain, ObservationMap};
use crate::spectral::{growth_rate, log_weighted_power_sum, GrowthAnalysis, SpectralOptions};
use crate::tensor::{
    collision_system_with, hadamard_power, noiseless_collision_system_with, CollisionSystem,
    TensorOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyKind {
    /// Entropy of the first `length` symbols, in bits.
    FiniteLength { length: u64 },
    /// Entropy rate, in bits per symbol.
    Rate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub order: f64,
    pub kind: EntropyKind,
    /// Non-negative; `f64::INFINITY` when the collision probability (or
    /// `ρ⁺`) is exactly zero.
    pub value: f64,
    /// `log2 CP` for finite lengths, `log2 ρ⁺` for rates.
    pub log2_collision: f64,
    /// Component analysis behind a rate.
    pub growth: Option<GrowthAnalysis>,
}

impl EntropyReport {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// Per-symbol value of a finite-length report.
    pub fn per_symbol(&self) -> f64 {
        match self.kind {
            EntropyKind::FiniteLength { length } => self.value / length as f64,
            EntropyKind::Rate => self.value,
        }
    }
}

/// Knobs shared by every entry point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EntropyOptions {
    pub tensor: TensorOptions,
    pub spectral: SpectralOptions,
}

/// Magnitude below which a negative entropy is treated as rounding noise.
pub const ROUNDING_FLOOR: f64 = 1e-12;

fn renyi_from_log2(order: f64, log2_value: f64) -> f64 {
    if log2_value == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let h = log2_value / (1.0 - order);
    // A Rényi entropy is never negative; values just below zero come from
    // rounding in CP (or ρ⁺) at exactly one. This also maps -0 to +0.
    if h <= 0.0 && h > -ROUNDING_FLOOR {
        0.0
    } else {
        h
    }
}

fn check_integer_order(order: u32) -> Result<()> {
    if order < 2 {
        return Err(Error::InvalidOrder(order as f64));
    }
    Ok(())
}

/// `log2(ν^T A^(n-1) 1)` for a built collision system.
pub fn log2_collision_probability(system: &CollisionSystem, length: u64) -> f64 {
    assert!(length >= 1, "length must be at least one symbol");
    log_weighted_power_sum(&system.matrix, &system.initial, length - 1) / std::f64::consts::LN_2
}

/// Finite-length entropy of `length` symbols from an already built system.
pub fn system_entropy(system: &CollisionSystem, length: u64) -> EntropyReport {
    let log2_cp = log2_collision_probability(system, length);
    EntropyReport {
        order: system.order as f64,
        kind: EntropyKind::FiniteLength { length },
        value: renyi_from_log2(system.order as f64, log2_cp),
        log2_collision: log2_cp,
        growth: None,
    }
}

/// Entropy rate from an already built system.
pub fn system_rate(system: &CollisionSystem, opts: &SpectralOptions) -> Result<EntropyReport> {
    rate_from(system.order as f64, &system.matrix, &system.initial, opts)
}

fn rate_from(
    order: f64,
    matrix: &crate::matrix::NonnegMatrix,
    initial: &[f64],
    opts: &SpectralOptions,
) -> Result<EntropyReport> {
    let growth = growth_rate(matrix, initial, opts)?;
    let log2_rho = if growth.degenerate {
        f64::NEG_INFINITY
    } else {
        growth.rho_plus.log2()
    };
    Ok(EntropyReport {
        order,
        kind: EntropyKind::Rate,
        value: renyi_from_log2(order, log2_rho),
        log2_collision: log2_rho,
        growth: Some(growth),
    })
}

/// Rényi entropy of order `order` of the first `length` observed symbols.
pub fn finite_length_entropy(
    hmm: &HiddenMarkovModel,
    order: u32,
    length: u64,
) -> Result<EntropyReport> {
    finite_length_entropy_with(hmm, order, length, &EntropyOptions::default())
}

pub fn finite_length_entropy_with(
    hmm: &HiddenMarkovModel,
    order: u32,
    length: u64,
    opts: &EntropyOptions,
) -> Result<EntropyReport> {
    check_integer_order(order)?;
    if length == 0 {
        return Err(Error::InvalidLength);
    }
    let system = collision_system_with(hmm, order, &opts.tensor)?;
    Ok(system_entropy(&system, length))
}

/// Rényi entropy rate of the observed process of an HMM.
pub fn entropy_rate(hmm: &HiddenMarkovModel, order: u32) -> Result<EntropyReport> {
    entropy_rate_with(hmm, order, &EntropyOptions::default())
}

pub fn entropy_rate_with(
    hmm: &HiddenMarkovModel,
    order: u32,
    opts: &EntropyOptions,
) -> Result<EntropyReport> {
    check_integer_order(order)?;
    let system = collision_system_with(hmm, order, &opts.tensor)?;
    system_rate(&system, &opts.spectral)
}

/// Hadamard-power system `(P^⋄α, π^⋄α)` of a visible Markov chain.
pub fn markov_system(
    chain: &MarkovChain,
    order: f64,
) -> Result<(crate::matrix::NonnegMatrix, Vec<f64>)> {
    if !(order.is_finite() && order > 0.0 && order != 1.0) {
        return Err(Error::InvalidOrder(order));
    }
    let a = hadamard_power(chain.transition(), order);
    let u = chain.initial().iter().map(|p| p.powf(order)).collect();
    Ok((a, u))
}

/// Rényi entropy rate of a visible Markov chain for any real order
/// `α > 0, α ≠ 1`.
pub fn markov_rate(chain: &MarkovChain, order: f64) -> Result<EntropyReport> {
    markov_rate_with(chain, order, &SpectralOptions::default())
}

pub fn markov_rate_with(
    chain: &MarkovChain,
    order: f64,
    opts: &SpectralOptions,
) -> Result<EntropyReport> {
    let (a, u) = markov_system(chain, order)?;
    rate_from(order, &a, &u, opts)
}

/// Finite-length entropy of a visible Markov chain for any real order
/// `α > 0, α ≠ 1`: `CP = (π^⋄α)^T (P^⋄α)^(n-1) 1`.
pub fn markov_entropy(chain: &MarkovChain, order: f64, length: u64) -> Result<EntropyReport> {
    if length == 0 {
        return Err(Error::InvalidLength);
    }
    let (a, u) = markov_system(chain, order)?;
    let log2_cp = log_weighted_power_sum(&a, &u, length - 1) / std::f64::consts::LN_2;
    Ok(EntropyReport {
        order,
        kind: EntropyKind::FiniteLength { length },
        value: renyi_from_log2(order, log2_cp),
        log2_collision: log2_cp,
        growth: None,
    })
}

/// Rényi entropy rate of `T(X)` for a deterministic observation map `T`,
/// using the restricted tensor over hidden tuples only.
pub fn noiseless_rate(
    chain: &MarkovChain,
    map: &ObservationMap,
    order: u32,
) -> Result<EntropyReport> {
    noiseless_rate_with(chain, map, order, &EntropyOptions::default())
}

pub fn noiseless_rate_with(
    chain: &MarkovChain,
    map: &ObservationMap,
    order: u32,
    opts: &EntropyOptions,
) -> Result<EntropyReport> {
    let system = noiseless_collision_system_with(chain, map, order, &opts.tensor)?;
    system_rate(&system, &opts.spectral)
}

/// Finite-length entropy of `T(X)` through the noiseless system.
pub fn noiseless_entropy(
    chain: &MarkovChain,
    map: &ObservationMap,
    order: u32,
    length: u64,
) -> Result<EntropyReport> {
    if length == 0 {
        return Err(Error::InvalidLength);
    }
    let system = noiseless_collision_system_with(chain, map, order, &TensorOptions::default())?;
    Ok(system_entropy(&system, length))
}

/// Two-state chain observed through a binary symmetric channel with flip
/// probability `epsilon`.
pub fn bsc_hmm(chain: &MarkovChain, epsilon: f64) -> Result<HiddenMarkovModel> {
    if chain.num_states() != 2 {
        return Err(Error::WrongAlphabet {
            expected: 2,
            found: chain.num_states(),
        });
    }
    if !(0.0..=0.5).contains(&epsilon) {
        return Err(Error::InvalidNoise(epsilon));
    }
    HiddenMarkovModel::new(
        chain.clone(),
        vec!["0".into(), "1".into()],
        &[vec![1.0 - epsilon, epsilon], vec![epsilon, 1.0 - epsilon]],
    )
}

/// Convenience: entropy rate of `deterministic_observation(chain, map)`
/// through the general HMM pipeline.
pub fn deterministic_rate(
    chain: &MarkovChain,
    map: &ObservationMap,
    order: u32,
) -> Result<EntropyReport> {
    entropy_rate(&deterministic_observation(chain, map)?, order)
}
