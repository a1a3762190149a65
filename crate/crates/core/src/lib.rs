//! Verification engine for finite higher groupoids.
//!
//! Finite sets stand in for manifolds throughout: surjective submersions are
//! surjections and diffeomorphisms are bijections.
//!
//! - [`simplicial`]: truncated simplicial sets, Δ[m], horns, Kan conditions.
//! - [`two_groupoid`]: three-layer 2-groupoid data, nerve, truncation, bigons.
//! - [`groupoid`]: finite groupoids and Hilsum–Skandalis bibundles.
//! - [`stacky`]: stacky groupoid presentations and the correspondence with 2-groupoids.
//! - [`equivalence`]: PB spaces, equivalences, pull-backs, fiber products, Morita witnesses.
//! - [`document`] and [`cli`]: JSON interchange and the `hgpd` command line.

pub mod cli;
pub mod document;
pub mod equivalence;
pub mod groupoid;
pub mod report;
pub mod two_groupoid;
pub mod simplicial;
pub mod stacky;
pub mod unionfind;

pub use report::{Check, Report, Status};
