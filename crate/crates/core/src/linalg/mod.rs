//! Small numerical kernels shared by the model modules.

pub mod band;
pub mod quad;
pub mod roots;
pub mod spline;
pub mod tridiag;

pub use band::{BandCholesky, HermitianBand};
pub use quad::GaussRule;
pub use spline::{PeriodicQuintic, PeriodicSpline};
pub use tridiag::SymTridiag;
