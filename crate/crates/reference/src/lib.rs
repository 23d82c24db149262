//! Slow reference evaluators for cross-checking `qbounce-core`.
//!
//! Nothing in here shares code with the production kernels. The Airy
//! functions are summed from their Maclaurin series in big-integer fixed
//! point, the zeros come from plain bisection on that series, and the
//! integrals use fixed-order composite Simpson with one Richardson step.
//! Everything is deliberately simple and slow.

pub mod airy;
pub mod quadrature;

pub use airy::{reference_airy, reference_airy_zero, ReferenceAiry};
pub use quadrature::{simpson, simpson_richardson};
