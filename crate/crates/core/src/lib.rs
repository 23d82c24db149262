// `!(a < b)` comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod bouncer;
pub mod ermakov;
pub mod error;
pub mod numerics;
pub mod spectra;
pub mod susy;

pub use error::{Error, Result};
