//! Exact arithmetic substrate: arbitrary-precision integer polynomials,
//! truncated power series over Z and Z/nZ, integer matrices with Hermite
//! normal form, and Sturm chains for real-root counting.
//!
//! Nothing in this module is approximate. The floating-point spectral work
//! elsewhere always routes its final verdicts back through these types.

mod matrix;
mod poly;
mod series;
mod sturm;

pub use crate::error::Error;
pub use matrix::{hnf, hnf_contains, IntMatrix};
pub use poly::{squarefree_decomp, IntPoly};
pub use series::{series_invert, series_mul, TruncatedSeries, DEFAULT_PRECISION};
pub use sturm::{sturm_count, Bound, SturmChain};

pub(crate) use poly::{clear_denominators, QPoly};
