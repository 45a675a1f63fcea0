//! Exact Rényi entropies of integer order for hidden Markov models, and
//! Rényi entropy rates for hidden Markov models and plain Markov chains.
//!
//! The pipeline is:
//!
//! 1. lift the HMM to the joint chain over (hidden state, symbol) pairs
//!    ([`model::joint_chain`]);
//! 2. take the α-fold tensor power of that chain and keep only the tuples
//!    whose symbols all agree ([`tensor::collision_system`]);
//! 3. for finite length `n`, the collision probability is
//!    `ν^T A^(n-1) 1` ([`entropy::finite_length_entropy`]);
//! 4. for the rate, decompose `A` into strongly connected components,
//!    keep those reachable from the support of `ν`, and take the largest
//!    Perron root among them ([`spectral::growth_rate`],
//!    [`entropy::entropy_rate`]).
//!
//! The [`oracle`] module recomputes collision probabilities by brute-force
//! enumeration of output strings and exists only to check the above.
//!
//! All logarithms are base 2; values are reported in bits.
//!
//! ```
//! use renyi_core::model::{MarkovChain, ObservationMap};
//! use renyi_core::entropy::noiseless_rate;
//!
//! let chain = MarkovChain::new(
//!     vec!["1".into(), "2".into(), "3".into()],
//!     &[vec![0.9, 0.1, 0.0], vec![0.0, 0.4, 0.6], vec![0.0, 0.6, 0.4]],
//!     &[1.0 / 3.0; 3],
//! )
//! .unwrap();
//! let colour = ObservationMap::from_labels(&["a", "b", "a"]);
//! let report = noiseless_rate(&chain, &colour, 2).unwrap();
//! assert!((report.value - 0.30401).abs() < 1e-4);
//! ```

pub mod entropy;
pub mod error;
pub mod format;
pub mod graph;
pub mod matrix;
pub mod model;
pub mod oracle;
pub mod spectral;
pub mod tensor;

pub use entropy::{EntropyKind, EntropyReport};
pub use error::{Error, Result};
pub use graph::ComponentDecomposition;
pub use matrix::NonnegMatrix;
pub use model::{HiddenMarkovModel, JointChain, MarkovChain, ObservationMap};
pub use spectral::{GrowthAnalysis, SpectralOptions};
pub use tensor::{CollisionIndex, CollisionSystem, TensorOptions};
