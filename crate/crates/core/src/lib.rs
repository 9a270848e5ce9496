//! Simulation and numerical verification toolkit for the Boolean Hidden
//! Matching problem.
//!
//! Alice holds `x ∈ {0,1}^{2n}`; Bob holds a perfect matching `M` on
//! `{1..2n}` and `w ∈ {0,1}^n`. Promised that `w` is close to or far from
//! the edge parities `Mx`, Bob must decide which after one message from
//! Alice. An `O(log n)`-qubit message suffices, while classical messages
//! need `Ω(√n)` bits.
//!
//! Modules:
//! - [`bits`], [`matching`]: bit strings, matchings, `Mx` and `Mᵀs`;
//! - [`instances`]: biased product distributions, the hard distribution,
//!   promise classification;
//! - [`quantum`]: the logarithmic-cost quantum protocol with exact oracles;
//! - [`classical`]: subset baselines and exact brute force at tiny `n`;
//! - [`fourier`]: transform, convolution, Parseval, KKL and lifting checks;
//! - [`combinatorics`]: `N(t)` and the lifting probability `γ_k`;
//! - [`harness`]: separation sweeps, the verification suite, CSV/JSON output.
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod bits;
pub mod classical;
pub mod combinatorics;
pub mod error;
pub mod fourier;
pub mod harness;
pub mod instances;
pub mod matching;
pub mod quantum;
pub mod rng;
pub mod stats;

pub use bits::{hamming_distance, BitString};
pub use error::{Error, Result};
pub use instances::{BhmInstance, PromiseClass};
pub use matching::PerfectMatching;
