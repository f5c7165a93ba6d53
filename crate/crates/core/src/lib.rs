//! Exact workbench for formal duality in finite abelian groups.
//!
//! Sets `S, T` in a finite abelian group `G` form a formally dual pair under
//! a nondegenerate pairing when `|χ_g(S)|² = (|S|²/|T|)·ν_T(g)` for every
//! `g`, where `χ_g(x) = ⟨g, x⟩` and `ν_T` counts ordered differences. A set
//! that is formally dual to itself is formally self dual.
//!
//! Everything is exact: character sums live in `Z[ζ_N]`
//! ([`CyclotomicInt`]), group-algebra coefficients are rationals.
//!
//! Modules:
//! - [`abelian`]: groups, subgroups, quotients, pairings, cyclotomic integers
//! - [`duality`]: weight enumerators, character sums, certificates, primitivity
//!   and reduction to primitive sets
//! - [`evenset`]: group algebra, even-set decompositions, canonical coefficients
//! - [`constructions`]: known families and sporadic examples
//! - [`boolfn`]: vectorial Boolean functions and graph self-duality
//! - [`codes`]: enumerators, MacWilliams transform, Gray map, Z4 codes
//! - [`search`]: pruned exhaustive search with certified hits

pub mod abelian;
pub mod boolfn;
pub mod codes;
pub mod constructions;
pub mod duality;
mod error;
pub mod evenset;
pub mod linsolve;
pub mod search;

pub use abelian::{cyclo_as_rational, cyclo_norm, CyclotomicInt, Group, GroupElement, Pairing, QuotientMap, Subgroup};
pub use duality::{DualityCertificate, SetInGroup};
pub use error::{Error, Result};
