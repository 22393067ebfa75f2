//! Exact combinatorics of B-orbits in abelian nilradicals of the classical
//! Lie algebras `sl_N`, `so_{2n+1}`, `sp_{2n}` and `so_{2n}`.
//!
//! Orbits are labeled by strongly orthogonal root sets `S`; the crate computes
//! their involutions `σ_S`, link-pattern statistics, closure order and
//! dimensions, and checks the predicted order `ŵσŵ ≤ ŵσ'ŵ` and dimension
//! `(ℓ(ŵσŵ) + #S) / 2` against brute-force and exact linear-algebra oracles.

pub mod error;
pub mod linkpattern;
pub mod matrixrep;
pub mod orbits;
pub mod poly;
pub mod roots;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use roots::{Family, NilradicalId, Root, RootSystemType};
pub use linkpattern::LinkPattern;
pub use matrixrep::LieMatrix;
pub use orbits::{OrbitLabel, OrbitPoset, OrderKind};
pub use poly::Poly;
pub use weyl::SignedPermutation;
