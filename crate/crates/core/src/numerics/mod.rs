//! Numerical kernels shared by the physics modules: adaptive quadrature,
//! bracketed root refinement, central differences, and lowest eigenvalues
//! of symmetric tridiagonal matrices. All functions are pure.

mod diff;
mod quadrature;
mod roots;
mod tridiagonal;

pub use diff::{derivative, DerivativeOrder};
pub(crate) use quadrature::gauss_kronrod_15;
pub use quadrature::{
    integrate, integrate_to_infinity, integrate_with, QuadratureConfig, QuadratureResult,
    SemiInfiniteResult, HARD_CUTOFF,
};
pub use roots::{refine_root, Bracket};
pub use tridiagonal::{eigenvalues_tridiagonal, TridiagonalSystem};
