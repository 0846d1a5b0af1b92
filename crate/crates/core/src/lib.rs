//! Exact arithmetic for split parabolic bundles on a marked curve and the
//! corresponding split bundles on the `r`-th root stack.
//!
//! Everything is organised around an [`OrbiConfig`]: a curve of genus `g`
//! with `m` distinct marked points and a root index `r`. A parabolic line is
//! an integer degree plus one weight in `[0, 1)` per point with denominator
//! dividing `r`; a line object on the root stack is a pullback degree plus
//! one residue in `0..r` per point. The two sides are related by
//! [`correspondence`], and most invariants (degree, Euler characteristic,
//! tensor product) are computed by more than one route so they can be
//! checked against each other.

pub mod cli;
pub mod correspondence;
pub mod error;
pub mod geometry;
pub mod inertia_rr;
pub mod local_model;
pub mod moduli;
pub mod parabolic;
pub mod rational;
pub mod root_stack;
pub mod sample;
pub mod selftest;
pub mod session;

pub use error::{Error, Result};
pub use geometry::{OrbiConfig, WeightIndex};
pub use parabolic::{FlagData, ParBundle, ParLine};
pub use rational::Q;
pub use root_stack::{LineObject, StackBundle};
