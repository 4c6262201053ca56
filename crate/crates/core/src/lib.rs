//! Finite quotients, irreducible representations and Fourier analysis for
//! groups of Euclidean isometries that act by `O(d1) ⊕ E(d2)` blocks.

pub mod catalog;
pub mod dual;
pub mod error;
pub mod fourier;
pub mod group;
pub mod isometry;
pub mod quotient;
pub mod rational;
pub mod repr;
pub mod splitting;
pub mod verify;

pub use error::{Error, Result};
pub use group::{GroupSpec, NormalForm};
pub use isometry::{Isometry, OrthoMatrix};
pub use quotient::{FiniteGroup, QuotientGroup, Subgroup};
pub use rational::{IntMatrix, RatVec, Rational};
