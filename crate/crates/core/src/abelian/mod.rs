//! Finite abelian groups, subgroups, quotients, pairings and exact
//! cyclotomic integers.

mod cyclotomic;
mod group;
mod pairing;
mod quotient;
mod subgroup;

pub use cyclotomic::{cyclo_as_rational, cyclo_norm, cyclotomic_poly, totient, CyclotomicInt};
pub use group::{Group, GroupElement};
pub use pairing::{parse_pairing, standard_pairing, GroupAutomorphism, Pairing, PairingSpec};
pub use quotient::{quotient_group, QuotientMap, MAX_QUOTIENT_SOURCE};
pub use subgroup::{
    enumerate_subgroups, enumerate_subgroups_bounded, smallest_containing_coset, Subgroup,
    DEFAULT_SUBGROUP_ORDER_BOUND, MAX_SUBGROUP_COUNT,
};
