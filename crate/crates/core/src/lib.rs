//! Numerical thermodynamic formalism for locally constant matrix cocycles
//! over mixing subshifts of finite type.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbolic`]: adjacency matrices, admissible words, connecting words.
//! * [`matalg`]: singular values, the singular value function, exterior powers,
//!   eigen reports for small dense matrices.
//! * [`cocycle`]: word products, holonomies, holonomy loops, recoding.
//! * [`certify`]: irreducibility, pinching/twisting and quasi-multiplicativity
//!   certificates.
//! * [`pressure`]: certified pressure brackets and Bowen-equation roots.
//! * [`equilibrium`]: Gibbs approximants and multifractal quantities.
//! * [`lyapunov`]: pointwise and periodic Lyapunov exponents, spectrum hulls and
//!   concatenation witnesses.
//! * [`specfile`]: the JSON cocycle description consumed by the CLI.
//!
//! Symbols are 0-based in memory and 1-based in every textual representation.

pub mod certify;
pub mod cocycle;
pub mod equilibrium;
mod error;
pub mod geometry;
pub mod lyapunov;
pub mod matalg;
pub mod pressure;
pub mod specfile;
pub mod symbolic;
mod wordsum;

pub use error::{Error, Result};
pub use matalg::Matrix;
