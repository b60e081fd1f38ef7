//! Randomized relax-and-round MAP inference for binary pairwise Markov random
//! fields and restricted Boltzmann machines.
//!
//! The pipeline solves a low-rank relaxation of `max xᵀAx` over the hypercube
//! ([`relax::solve_lrp`]), then draws many hyperplane roundings of the relaxed
//! solution ([`rounding::rrr_map_sample`]). At width 2 the distribution of
//! rounded corners is computed exactly ([`rounding::build_px_k2`]), which
//! turns the sampler into an importance-sampling proposal for `log Z`
//! ([`partition::rrr_is`]). Gibbs-family baselines and exact enumeration
//! oracles live alongside for comparison.
//!
//! ```
//! use rrr_core::{generate, relax, rounding, Embedding};
//!
//! let rbm = generate::gen_random_rbm(6, 4, 7).unwrap();
//! let emb = Embedding::of_rbm(&rbm).unwrap();
//! let sol = relax::solve_lrp(&emb.mrf, &relax::LrpOptions::default()).unwrap();
//! let batch = rounding::rrr_map_sample(&emb.mrf, &sol.x, 100, 1).unwrap();
//! let (best, score) = batch.best().unwrap();
//! assert!(score <= sol.objective + 1e-9);
//! assert_eq!(emb.recover(best).len(), 10);
//! ```

pub mod cli;
pub mod error;
pub mod export;
pub mod generate;
pub mod gibbs;
pub mod io;
pub mod matrix;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod partition;
pub mod reduce;
pub mod relax;
pub mod rng;
pub mod rounding;

pub use error::{Error, Result};
pub use io::Instance;
pub use matrix::Matrix;
pub use model::{rbm_score, score, Assignment, Domain, MrfParams, RbmParams};
pub use reduce::Embedding;
