//! Exact subcube statistics in hypercubes.
//!
//! For a vertex set `A` of the hypercube `Q_n`, the quantity `lambda(n, d, s, A)`
//! is the fraction of `d`-dimensional subcubes holding exactly `s` vertices of `A`.
//! This crate enumerates those statistics exactly, builds the known extremal and
//! near-extremal vertex sets together with certificates, and verifies the closed
//! forms and number-theoretic identities that surround them.
//!
//! Module map:
//!
//! * [`cube`], [`gf2`], [`rational`]: vertices, subcubes, vertex sets, GF(2)
//!   matrices and exact arithmetic.
//! * [`stats`]: subcube distributions (direct, folded, layered) and the
//!   exhaustive maximizer for tiny cubes.
//! * [`constructions`]: lower-bound sets, closed-form bound quantities and
//!   [`constructions::best_bounds`].
//! * [`johnson`], [`hadamard`], [`turan`]: generalized Johnson graphs, clique
//!   search and certificates, Hadamard matrices, Turán numbers.
//! * [`arithmetic`]: residue sums of binomial coefficients and the approximate
//!   statistics checker.
//! * [`verify`]: named verification suites used by the CLI.

pub mod arithmetic;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod gf2;
pub mod hadamard;
pub mod johnson;
pub mod rational;
pub mod stats;
pub mod turan;
pub mod verify;

pub use cube::{binomial, enumerate_subcubes, subcube_vertices, Subcube, VertexSet};
pub use error::{Error, Result};
pub use gf2::{gf2_rank, GF2Matrix};
pub use rational::Rational;
pub use stats::{LambdaBounds, LayeredSpec, SubcubeDistribution};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
