//! Exact invariants of polarized manifolds of sectional genus three.
//!
//! * [`chow`]: intersection numbers on projective bundles over curves.
//! * [`surface`]: intersection lattices of polarized surfaces and their
//!   minimalizations.
//! * [`classify`]: branch map, splitting-type enumeration for hyperquadric
//!   fibrations, the Veronese solver and the blow-up/Delta-genus arithmetic.
//! * [`fixture`], [`verify`], [`report`]: stored classification tables and
//!   their recomputation.
//! * [`oracle`]: a naive polynomial multiplier used to cross-check the ring.

pub mod chow;
pub mod classify;
pub mod error;
pub mod exec;
pub mod fixture;
pub mod oracle;
pub mod report;
pub mod surface;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Execution;
