//! Brute-force ground truth: enumerate every output string, compute its
//! probability with the forward recursion, and sum the α-th powers.
//!
//! Deliberately slow. Nothing here touches the tensor or spectral code.

use crate::error::{Error, Result};
use crate::model::HiddenMarkovModel;

/// Refuse enumerations of more than this many strings.
pub const MAX_ENUMERATION: u128 = 10_000_000;

/// `weights[x] = p(z_1..z_t, X_t = x)` for the prefix consumed so far.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardState {
    pub weights: Vec<f64>,
}

impl ForwardState {
    pub fn start(hmm: &HiddenMarkovModel, z: usize) -> Self {
        let e = hmm.emission();
        ForwardState {
            weights: hmm
                .chain()
                .initial()
                .iter()
                .enumerate()
                .map(|(x, &p)| p * e.get(x, z))
                .collect(),
        }
    }

    pub fn advance(&self, hmm: &HiddenMarkovModel, z: usize) -> Self {
        let p = hmm.chain().transition();
        let e = hmm.emission();
        let mut next = vec![0.0; self.weights.len()];
        for (x, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for (x2, pv) in p.row(x) {
                next[x2] += w * pv;
            }
        }
        for (x2, v) in next.iter_mut().enumerate() {
            *v *= e.get(x2, z);
        }
        ForwardState { weights: next }
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Marginal probability `p(z_1..z_n)` of a symbol-index sequence.
pub fn sequence_probability(hmm: &HiddenMarkovModel, symbols: &[usize]) -> Result<f64> {
    if let Some(&bad) = symbols.iter().find(|&&z| z >= hmm.num_symbols()) {
        return Err(Error::UnknownSymbol(bad.to_string()));
    }
    let Some((&first, rest)) = symbols.split_first() else {
        return Ok(1.0);
    };
    let mut state = ForwardState::start(hmm, first);
    for &z in rest {
        state = state.advance(hmm, z);
    }
    Ok(state.total())
}

/// Same as [`sequence_probability`] with symbols given by label.
pub fn sequence_probability_labels<S: AsRef<str>>(
    hmm: &HiddenMarkovModel,
    symbols: &[S],
) -> Result<f64> {
    let idx = symbols
        .iter()
        .map(|s| hmm.symbol_index(s.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    sequence_probability(hmm, &idx)
}

/// Kahan–Babuška (Neumaier) compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

fn check_enumeration(hmm: &HiddenMarkovModel, length: u64) -> Result<()> {
    let requested = u32::try_from(length)
        .ok()
        .and_then(|n| (hmm.num_symbols() as u128).checked_pow(n))
        .unwrap_or(u128::MAX);
    if requested > MAX_ENUMERATION {
        return Err(Error::DimensionOverflow {
            requested,
            cap: MAX_ENUMERATION as usize,
        });
    }
    Ok(())
}

/// Visits every string in `Z^n` in lexicographic order.
#[cfg(test)]
fn for_each_string(num_symbols: usize, length: usize, mut f: impl FnMut(&[usize])) {
    if num_symbols == 0 {
        return;
    }
    let mut z = vec![0usize; length];
    loop {
        f(&z);
        if next_string(&mut z, num_symbols).is_none() {
            return;
        }
    }
}

/// Advances `z` to its lexicographic successor and returns the first
/// position that changed, or `None` after the last string.
fn next_string(z: &mut [usize], num_symbols: usize) -> Option<usize> {
    let mut pos = z.len();
    loop {
        if pos == 0 {
            return None;
        }
        pos -= 1;
        z[pos] += 1;
        if z[pos] < num_symbols {
            return Some(pos);
        }
        z[pos] = 0;
    }
}

/// Calls `f(p(z))` for every string of length `length`, in lexicographic
/// order. Forward vectors of shared prefixes are reused.
fn for_each_probability(hmm: &HiddenMarkovModel, length: usize, mut f: impl FnMut(f64)) {
    if hmm.num_symbols() == 0 || length == 0 {
        return;
    }
    let mut z = vec![0usize; length];
    let mut prefix: Vec<ForwardState> = Vec::with_capacity(length);
    prefix.push(ForwardState::start(hmm, 0));
    for t in 1..length {
        let next = prefix[t - 1].advance(hmm, 0);
        prefix.push(next);
    }
    loop {
        f(prefix[length - 1].total());
        let Some(changed) = next_string(&mut z, hmm.num_symbols()) else {
            return;
        };
        prefix[changed] = match changed {
            0 => ForwardState::start(hmm, z[0]),
            t => prefix[t - 1].advance(hmm, z[t]),
        };
        for t in changed + 1..length {
            prefix[t] = prefix[t - 1].advance(hmm, z[t]);
        }
    }
}

/// `Σ_{z ∈ Z^n} p(z)^α` by enumeration.
pub fn brute_force_collision(hmm: &HiddenMarkovModel, order: u32, length: u64) -> Result<f64> {
    if order < 2 {
        return Err(Error::InvalidOrder(order as f64));
    }
    if length == 0 {
        return Err(Error::InvalidLength);
    }
    check_enumeration(hmm, length)?;
    let mut acc = CompensatedSum::default();
    for_each_probability(hmm, length as usize, |p| acc.add(p.powi(order as i32)));
    Ok(acc.value())
}

/// `log2(brute_force_collision) / (1 − α)`, in bits.
pub fn brute_force_entropy(hmm: &HiddenMarkovModel, order: u32, length: u64) -> Result<f64> {
    let cp = brute_force_collision(hmm, order, length)?;
    if cp == 0.0 {
        return Ok(f64::INFINITY);
    }
    let h = cp.log2() / (1.0 - order as f64);
    // CP ≤ 1, so a tiny negative value is rounding at CP = 1
    Ok(if h <= 0.0 && h > -1e-12 { 0.0 } else { h })
}
