//! Nonadditive (Tsallis) entropies for classical distributions and quantum
//! states, the q-indexed conditional entropy built from the q-expectation
//! value, and its use as an entanglement detector.
//!
//! The conditional entropy `S_q[B|A]` is never negative for separable
//! states, so a negative value certifies entanglement. On the two-qubit
//! Werner-Popescu family the detection threshold falls from `x ~ 0.748`
//! at `q = 1` to `x = 1/3` as `q` grows, which is where the
//! partial-transpose criterion places it.
//!
//! Bipartite indices are A-major everywhere: `k = a * dB + b`.

pub mod axiom_suite;
pub mod classical_entropy;
pub mod cli;
pub mod error;
pub mod io;
pub mod output;
pub mod quantum_entropy;
pub mod quantum_state;
pub mod random;
pub mod roots;
pub mod werner_analysis;

pub use classical_entropy::{EntropicIndex, JointDist, ProbDist};
pub use error::{Error, Result};
pub use quantum_state::{BipartiteState, DensityMatrix, SeparableEnsemble, Subsystem};
