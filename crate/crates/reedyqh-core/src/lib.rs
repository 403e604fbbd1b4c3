//! Exact-arithmetic toolkit for finite k-linear Reedy categories.
//!
//! The crate builds finite-dimensional k-linear categories from quiver
//! presentations, verifies Reedy structures (degree function plus raising and
//! lowering subcategories whose composition map is bijective), and derives the
//! associated homological data: standard modules, simple modules, filtration
//! certificates, Ext/Tor tables, quasi-hereditary and exact-Borel checks,
//! latching and matching objects, and special approximation sequences that
//! lift a complete cotorsion pair of coefficient modules to diagram
//! categories.
//!
//! All arithmetic is exact: the rationals or a prime field, never floats.
//! Every derived structure is re-verified from first principles (associativity
//! on basis triples, naturality on basis morphisms, exactness by rank counts),
//! so a silent algebra bug turns into a loud assertion instead of a wrong
//! table.

pub mod exactla;
pub mod exec;
pub mod presentation;
pub mod lincat;
pub mod repmod;
pub mod homalg;
pub mod qh;
pub mod diagrams;
pub mod sample;
