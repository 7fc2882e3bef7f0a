//! Bounded machinery for finite-sums (Hindman) witnesses via coded semigroups
//! of ultrafilters: symbolic subsets of ℕ, FIP families, semigroup extension
//! lemmas, Kleene–Brouwer ordered tree search and an exhaustive oracle.

pub mod bits;
pub mod cli;
pub mod driver;
pub mod family;
pub mod oracle;
pub mod search;
pub mod semigroup;
pub mod setexpr;
