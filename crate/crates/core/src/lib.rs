//! # infoloss
//!
//! Finite measure spaces, measure-preserving maps, and the information lost
//! along them.
//!
//! A map `f : p → q` between finite measure spaces loses
//! `F(f) = c · (H_α(p) − H_α(q))` nats, where `H_α` is Shannon entropy
//! (`α = 1`) or Tsallis entropy of order `α`. Up to the constant `c`, these
//! are the only functionals that add up along composites, respect convex
//! combinations (or direct sums and scaling) and vary continuously. The
//! [`harness`] module checks those laws on random inputs.
//!
//! | Module | Contents |
//! |---|---|
//! | [`weight`], [`space`], [`map`] | exact rational measures and measure-preserving maps |
//! | [`combinators`] | composition, `⊕`, scaling, convex combinations |
//! | [`entropy`] | Shannon/Tsallis entropy, `φ(n)`, reconstruction from `φ` |
//! | [`loss`] | the loss functional, its conditional-entropy form, pipelines |
//! | [`harness`] | seeded generators and law checks |
//! | [`format`], [`cli`] | text file format and the `infoloss` command |
//!
//! ```
//! use infoloss::{FiniteMeasureSpace, LossFunctional, MeasurePreservingMap};
//!
//! let coin = FiniteMeasureSpace::parse(&["heads", "tails"], &["1/2", "1/2"]).unwrap();
//! let forget = MeasurePreservingMap::terminal(&coin);
//! let lost = LossFunctional::shannon().loss(&forget).unwrap();
//! assert!((lost - std::f64::consts::LN_2).abs() < 1e-15);
//! ```

#![forbid(unsafe_code)]

pub mod cli;
pub mod combinators;
pub mod entropy;
pub mod error;
pub mod format;
pub mod harness;
pub mod loss;
pub mod map;
pub mod space;
pub mod sum;
pub mod weight;

pub use combinators::{
    compose, compose_chain, convex_combination_maps, convex_combination_spaces,
    decompose_to_points, direct_sum_maps, direct_sum_spaces, scale_map, scale_space,
    ConvexCoefficients,
};
pub use entropy::{
    faddeev_reconstruct, phi, phi_increments, shannon, tsallis, EntropyOrder, EntropyValue,
};
pub use error::{CombinatorError, EntropyError, LossError, MeasureError};
pub use loss::{LossFunctional, PipelineLoss};
pub use map::MeasurePreservingMap;
pub use space::FiniteMeasureSpace;
pub use weight::Weight;
