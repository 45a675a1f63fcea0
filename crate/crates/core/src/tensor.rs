//! Kronecker tensor powers and the restricted ("collision") system.
//!
//! For an HMM and integer order α, α independent copies of the joint chain
//! are run side by side and only tuples whose observed symbols all agree are
//! kept. A kept tuple `((x1, z), ..., (xα, z))` is stored as a
//! [`CollisionIndex`] `(x⃗, z)`, so membership in the collision set is
//! structural. The unrestricted tensor is never built.
//!
//! Index order is z-major, then lexicographic in `x⃗` (first component most
//! significant).

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::model::{HiddenMarkovModel, MarkovChain, ObservationMap};

pub const DEFAULT_MAX_DIM: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorOptions {
    /// Upper bound on the number of rows of any tensored matrix.
    pub max_dim: usize,
    /// Drop indices whose emission weight `Π_j E[x_j, z]` is zero. Such
    /// indices have a zero column and zero initial weight, so removing them
    /// changes neither collision probabilities nor the reachable set.
    pub prune_dead: bool,
}

impl Default for TensorOptions {
    fn default() -> Self {
        TensorOptions {
            max_dim: DEFAULT_MAX_DIM,
            prune_dead: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CollisionIndex {
    pub hidden: Vec<usize>,
    pub symbol: usize,
}

impl CollisionIndex {
    /// Human-readable label such as `1,3|a`.
    pub fn label(&self, states: &[String], symbols: &[String]) -> String {
        let hidden: Vec<&str> = self.hidden.iter().map(|&x| states[x].as_str()).collect();
        format!("{}|{}", hidden.join(","), symbols[self.symbol])
    }
}

/// Restricted tensored matrix `A`, its initial weights `ν`, and the tuple
/// behind each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionSystem {
    pub order: u32,
    pub indices: Vec<CollisionIndex>,
    pub matrix: NonnegMatrix,
    pub initial: Vec<f64>,
}

impl CollisionSystem {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn position(&self, index: &CollisionIndex) -> Option<usize> {
        self.indices.iter().position(|i| i == index)
    }
}

fn checked_pow(base: usize, exp: u32, times: usize, cap: usize) -> Result<usize> {
    let requested = (base as u128)
        .checked_pow(exp)
        .and_then(|v| v.checked_mul(times as u128))
        .unwrap_or(u128::MAX);
    if requested > cap as u128 {
        return Err(Error::DimensionOverflow { requested, cap });
    }
    Ok(requested as usize)
}

fn check_order(order: u32) -> Result<()> {
    if order < 2 {
        return Err(Error::InvalidOrder(order as f64));
    }
    Ok(())
}

/// Decodes a lexicographic tuple index into its components.
fn decode_tuple(mut t: usize, base: usize, order: u32, out: &mut [usize]) {
    for slot in out.iter_mut().take(order as usize).rev() {
        *slot = t % base;
        t /= base;
    }
}

fn kron(a: &NonnegMatrix, b: &NonnegMatrix) -> NonnegMatrix {
    let db = b.dim();
    let dim = a.dim() * db;
    let mut rows = Vec::with_capacity(dim);
    for i in 0..a.dim() {
        for k in 0..db {
            let mut row = Vec::with_capacity(a.row_len(i) * b.row_len(k));
            for (j, va) in a.row(i) {
                for (l, vb) in b.row(k) {
                    row.push((j * db + l, va * vb));
                }
            }
            rows.push(row);
        }
    }
    NonnegMatrix::from_rows(dim, rows).expect("kronecker product of valid matrices")
}

/// α-fold Kronecker power; entry `(i⃗, j⃗)` is `Π_k A[i_k, j_k]`.
pub fn kronecker_power(a: &NonnegMatrix, order: u32, max_dim: usize) -> Result<NonnegMatrix> {
    if order == 0 {
        return Err(Error::InvalidOrder(0.0));
    }
    checked_pow(a.dim(), order, 1, max_dim)?;
    let mut out = a.clone();
    for _ in 1..order {
        out = kron(&out, a);
    }
    Ok(out)
}

/// Entrywise power `P^⋄α`; zero entries stay zero. `alpha` must be positive.
pub fn hadamard_power(p: &NonnegMatrix, alpha: f64) -> NonnegMatrix {
    debug_assert!(alpha > 0.0);
    if alpha == 1.0 {
        return p.clone();
    }
    p.map_values(|v| v.powf(alpha))
}

/// Expands all successor tuples of `from`. `step(j, prefix, x)` yields the
/// weighted successors of component `j` (currently `x`) given the already
/// chosen successor prefix. Returns `(tuple index, product weight)` pairs.
fn expand_tuple<I, F>(from: &[usize], base: usize, mut step: F) -> Vec<(usize, f64)>
where
    F: FnMut(usize, usize, usize) -> I,
    I: Iterator<Item = (usize, f64)>,
{
    let mut partial: Vec<(usize, f64)> = vec![(0, 1.0)];
    let mut next = Vec::new();
    for (j, &x) in from.iter().enumerate() {
        next.clear();
        for &(prefix, w) in &partial {
            for (x2, v) in step(j, prefix, x) {
                let w2 = w * v;
                if w2 > 0.0 {
                    next.push((prefix * base + x2, w2));
                }
            }
        }
        std::mem::swap(&mut partial, &mut next);
    }
    partial
}

fn prune(system: CollisionSystem, keep: &[bool]) -> CollisionSystem {
    let nodes: Vec<usize> = (0..system.dim()).filter(|&i| keep[i]).collect();
    CollisionSystem {
        order: system.order,
        matrix: system.matrix.principal_submatrix(&nodes),
        initial: nodes.iter().map(|&i| system.initial[i]).collect(),
        indices: nodes.iter().map(|&i| system.indices[i].clone()).collect(),
    }
}

/// Builds `M^⊗α` restricted to the collision set, plus `ν`, for an HMM.
///
/// Entry `A[(x⃗, z), (x⃗', z')] = Π_j P[x_j, x'_j] E[x'_j, z']` and
/// `ν[(x⃗, z)] = Π_j π[x_j] E[x_j, z]`. Dimension is `|X|^α |Z|` unless
/// dead indices are pruned.
pub fn collision_system(hmm: &HiddenMarkovModel, order: u32) -> Result<CollisionSystem> {
    collision_system_with(hmm, order, &TensorOptions::default())
}

pub fn collision_system_with(
    hmm: &HiddenMarkovModel,
    order: u32,
    opts: &TensorOptions,
) -> Result<CollisionSystem> {
    check_order(order)?;
    let nx = hmm.num_states();
    let nz = hmm.num_symbols();
    let tuples = checked_pow(nx, order, 1, opts.max_dim)?;
    let dim = checked_pow(nx, order, nz, opts.max_dim)?;
    let p = hmm.chain().transition();
    let e = hmm.emission();
    let pi = hmm.chain().initial();
    let k = order as usize;

    let mut hidden = vec![0usize; k];
    let mut hidden_rows = Vec::with_capacity(tuples);
    let mut hidden_tuples = Vec::with_capacity(tuples);
    for t in 0..tuples {
        decode_tuple(t, nx, order, &mut hidden);
        let mut row = Vec::new();
        for z2 in 0..nz {
            let succ = expand_tuple(&hidden, nx, |_, _, x| {
                p.row(x).map(move |(x2, pv)| (x2, pv * e.get(x2, z2)))
            });
            row.extend(succ.into_iter().map(|(t2, w)| (z2 * tuples + t2, w)));
        }
        hidden_rows.push(row);
        hidden_tuples.push(hidden.clone());
    }

    let mut indices = Vec::with_capacity(dim);
    let mut rows = Vec::with_capacity(dim);
    let mut initial = Vec::with_capacity(dim);
    let mut keep = Vec::with_capacity(dim);
    for z in 0..nz {
        for (t, xs) in hidden_tuples.iter().enumerate() {
            let emit: f64 = xs.iter().map(|&x| e.get(x, z)).product();
            let start: f64 = xs.iter().map(|&x| pi[x]).product();
            indices.push(CollisionIndex {
                hidden: xs.clone(),
                symbol: z,
            });
            rows.push(hidden_rows[t].clone());
            initial.push(start * emit);
            keep.push(emit > 0.0);
        }
    }
    let system = CollisionSystem {
        order,
        indices,
        matrix: NonnegMatrix::from_rows(dim, rows)?,
        initial,
    };
    Ok(if opts.prune_dead {
        prune(system, &keep)
    } else {
        system
    })
}

/// Collision system for noiseless observations `Z = T(X)`: tuples of hidden
/// states that collide under `T`, entries `Π_j P[s_j, s'_j]`, initial
/// weights `Π_j π[s_j]`. Each index carries the common symbol `T(s_1)`.
pub fn noiseless_collision_system(
    chain: &MarkovChain,
    map: &ObservationMap,
    order: u32,
) -> Result<CollisionSystem> {
    noiseless_collision_system_with(chain, map, order, &TensorOptions::default())
}

pub fn noiseless_collision_system_with(
    chain: &MarkovChain,
    map: &ObservationMap,
    order: u32,
    opts: &TensorOptions,
) -> Result<CollisionSystem> {
    check_order(order)?;
    let nx = chain.num_states();
    if map.image().len() != nx {
        return Err(Error::DimensionMismatch {
            what: "observation map domain",
            expected: nx,
            found: map.image().len(),
        });
    }
    let tuples = checked_pow(nx, order, 1, opts.max_dim)?;
    let p = chain.transition();
    let pi = chain.initial();
    let k = order as usize;

    let mut position = vec![usize::MAX; tuples];
    let mut indices = Vec::new();
    let mut members = Vec::new();
    let mut xs = vec![0usize; k];
    for z in 0..map.num_symbols() {
        for (t, slot) in position.iter_mut().enumerate() {
            decode_tuple(t, nx, order, &mut xs);
            if xs.iter().all(|&x| map.apply(x) == z) {
                *slot = indices.len();
                indices.push(CollisionIndex {
                    hidden: xs.clone(),
                    symbol: z,
                });
                members.push(t);
            }
        }
    }

    let rows = indices
        .iter()
        .map(|idx| {
            // the first component fixes the symbol every later one must hit
            expand_tuple(&idx.hidden, nx, |j, prefix, x| {
                let target = (j > 0).then(|| map.apply(prefix / nx.pow(j as u32 - 1)));
                p.row(x)
                    .filter(move |&(x2, _)| target.is_none_or(|z| map.apply(x2) == z))
            })
            .into_iter()
            .map(|(t2, w)| (position[t2], w))
            .collect()
        })
        .collect();
    let initial = indices
        .iter()
        .map(|idx| idx.hidden.iter().map(|&x| pi[x]).product())
        .collect();
    Ok(CollisionSystem {
        order,
        matrix: NonnegMatrix::from_rows(indices.len(), rows)?,
        indices,
        initial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{deterministic_observation, identity_observation, validate_chain};

    fn worked_p() -> NonnegMatrix {
        NonnegMatrix::from_dense(&[
            vec![0.9, 0.1, 0.0],
            vec![0.0, 0.4, 0.6],
            vec![0.0, 0.6, 0.4],
        ])
        .unwrap()
    }

    #[test]
    fn kronecker_square_of_worked_example() {
        let k = kronecker_power(&worked_p(), 2, DEFAULT_MAX_DIM).unwrap();
        assert_eq!(k.dim(), 9);
        // state (1,1) -> (1,1), (1,2)
        assert!((k.get(0, 0) - 0.81).abs() < 1e-15);
        assert!((k.get(0, 1) - 0.09).abs() < 1e-15);
        assert!((k.get(0, 4) - 0.01).abs() < 1e-15);
        // state (2,3) -> (3,2)
        assert!((k.get(5, 7) - 0.36).abs() < 1e-15);
    }

    #[test]
    fn kronecker_first_power_is_identity_map() {
        let p = worked_p();
        assert_eq!(kronecker_power(&p, 1, DEFAULT_MAX_DIM).unwrap(), p);
    }

    #[test]
    fn kronecker_guard() {
        let p = worked_p();
        let err = kronecker_power(&p, 13, DEFAULT_MAX_DIM).unwrap_err();
        assert!(err.is_dimension_guard());
        assert!(kronecker_power(&p, 2, 8).is_err());
        assert!(kronecker_power(&p, 2, 9).is_ok());
    }

    #[test]
    fn hadamard_square() {
        let h = hadamard_power(&worked_p(), 2.0);
        let expected = [[0.81, 0.01, 0.0], [0.0, 0.16, 0.36], [0.0, 0.36, 0.16]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((h.get(i, j) - v).abs() < 1e-15);
            }
        }
        assert_eq!(hadamard_power(&worked_p(), 1.0), worked_p());
    }

    #[test]
    fn invalid_order() {
        let c = validate_chain(&[vec![1.0]], &[1.0]).unwrap();
        let hmm = identity_observation(&c);
        assert!(matches!(
            collision_system(&hmm, 1),
            Err(Error::InvalidOrder(_))
        ));
        let t = ObservationMap::from_labels(&["a"]);
        assert!(matches!(
            noiseless_collision_system(&c, &t, 0),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn single_state_system() {
        let c = validate_chain(&[vec![1.0]], &[1.0]).unwrap();
        let hmm = identity_observation(&c);
        for order in 2..5 {
            let s = collision_system(&hmm, order).unwrap();
            assert_eq!(s.dim(), 1);
            assert_eq!(s.matrix.to_dense(), vec![vec![1.0]]);
            assert_eq!(s.initial, vec![1.0]);
        }
    }

    #[test]
    fn dimension_is_states_pow_order_times_symbols() {
        let c = validate_chain(&[vec![0.5, 0.5], vec![0.3, 0.7]], &[0.5, 0.5]).unwrap();
        let hmm = identity_observation(&c);
        assert_eq!(collision_system(&hmm, 3).unwrap().dim(), 16);
        let pruned = collision_system_with(
            &hmm,
            3,
            &TensorOptions {
                prune_dead: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(pruned.dim(), 2);
        let guard = TensorOptions {
            max_dim: 15,
            prune_dead: false,
        };
        assert!(collision_system_with(&hmm, 3, &guard)
            .unwrap_err()
            .is_dimension_guard());
    }

    #[test]
    fn noiseless_worked_example_has_five_tuples() {
        let c = validate_chain(
            &[
                vec![0.9, 0.1, 0.0],
                vec![0.0, 0.4, 0.6],
                vec![0.0, 0.6, 0.4],
            ],
            &[1.0 / 3.0; 3],
        )
        .unwrap();
        let t = ObservationMap::from_labels(&["a", "b", "a"]);
        let s = noiseless_collision_system(&c, &t, 2).unwrap();
        let hidden: Vec<Vec<usize>> = s.indices.iter().map(|i| i.hidden.clone()).collect();
        assert_eq!(
            hidden,
            vec![vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2], vec![1, 1]]
        );
        let via_hmm = collision_system_with(
            &deterministic_observation(&c, &t).unwrap(),
            2,
            &TensorOptions {
                prune_dead: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(via_hmm.indices, s.indices);
        for (i, j, v) in s.matrix.entries() {
            assert!((via_hmm.matrix.get(i, j) - v).abs() < 1e-15);
        }
        assert_eq!(via_hmm.matrix.nnz(), s.matrix.nnz());
    }

    #[test]
    fn noiseless_constant_map_is_full_kronecker_power() {
        let p = worked_p();
        let c = MarkovChain::new(
            vec!["1".into(), "2".into(), "3".into()],
            &p.to_dense(),
            &[0.2, 0.3, 0.5],
        )
        .unwrap();
        let t = ObservationMap::from_labels(&["a", "a", "a"]);
        for order in 2..4 {
            let s = noiseless_collision_system(&c, &t, order).unwrap();
            let k = kronecker_power(&p, order, DEFAULT_MAX_DIM).unwrap();
            assert_eq!(s.matrix, k);
        }
    }

    #[test]
    fn noiseless_injective_map_matches_hadamard_on_diagonal() {
        let c = validate_chain(
            &[
                vec![0.9, 0.1, 0.0],
                vec![0.0, 0.4, 0.6],
                vec![0.0, 0.6, 0.4],
            ],
            &[1.0 / 3.0; 3],
        )
        .unwrap();
        let t = ObservationMap::from_labels(c.states());
        let s = noiseless_collision_system(&c, &t, 2).unwrap();
        let h = hadamard_power(c.transition(), 2.0);
        assert_eq!(s.dim(), 3);
        for (i, idx) in s.indices.iter().enumerate() {
            assert_eq!(idx.hidden, vec![i, i]);
        }
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.matrix.get(i, j) - h.get(i, j)).abs() < 1e-15);
            }
        }
    }
}
