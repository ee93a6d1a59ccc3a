//! Combinatorial core of ramification splitting for Brauer classes.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`zmodl`]: exact rank, solving and minors over `Z` and `Z/l`,
//! * [`pirutka`]: checking, searching and constructing `l`-Pirutka matrices,
//! * [`simplicial`]: abstract simplicial complexes, star and barycentric
//!   subdivision, order complexes and the coloring by dimension,
//! * [`dualcomplex`]: naive dual complexes of snc divisors where blowing up a
//!   stratum is a star subdivision,
//! * [`splitting`]: symbolic nicely ramified classes, tame residues, Kummer
//!   pullback and splitting certificates.
//!
//! Index sets that name rows, columns or divisors (`I`, `J`, `I'`, `j0`, the
//! coordinates `x_1..x_d`) are 1-based throughout the public API, matching the
//! way divisors `D_1, ..., D_d` are numbered.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod combin;

pub mod dualcomplex;
pub mod pirutka;
pub mod simplicial;
pub mod splitting;
pub mod zmodl;

pub use combin::{binomial, Combinations};
