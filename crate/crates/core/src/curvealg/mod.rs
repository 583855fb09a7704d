//! Plane curve germs: parsing, embedded resolution and local invariants.

mod germ;
mod intersect;
mod invariants;
mod parse;
mod poly;
mod resolve;
mod upoly;

pub use germ::{multiplicity_at, parse_germ, CurveGerm, GermFactor};
pub use intersect::intersection_multiplicity;
pub use invariants::{local_invariants, LocalInvariants};
pub use parse::parse_poly;
pub use poly::{BivariatePoly, Monomial};
pub use resolve::{
    blow_up_once, embedded_resolution, is_ordinary_double, BlowUp, CurveAtCenter, CurveId,
    ExceptionalCurve, NodeRecord, ResolutionReport, ResolutionStep,
};
pub use upoly::UPoly;
