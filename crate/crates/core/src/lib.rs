//! Exact algebra of translation-invariant spaces of bivariate polynomials.
//!
//! * [`poly`]: coordinate-polynomial arithmetic over Gaussian rationals.
//! * [`module_algebra`]: symbolic modules, derivative closures and membership.
//! * [`l_engine`]: recursion operators `L`, their modules, inference and orders.
//! * [`nonclosed`]: log-space certification of a non-closed submodule.

pub mod cancel;
pub mod error;
pub mod l_engine;
pub mod linalg;
pub mod module_algebra;
pub mod nonclosed;
pub mod poly;
pub mod scalar;

pub use cancel::CancelToken;
pub use error::{Error, Result};
pub use poly::{BiPoly, Degree, Mono, UniPoly};
pub use scalar::CoeffQ;
