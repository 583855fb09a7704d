//! Exact invariants of singular fibers of fibered surfaces and of their
//! behaviour under base change.
pub mod basechange;
pub mod checks;
pub mod curvealg;
pub mod error;
pub mod exact;
pub mod fiber;
pub mod quotsing;
pub mod sstable;
pub use error::{Error, Result};
pub use exact::Rational;
