//! Workbench for classifying the hyperbolic actions of torsion-free
//! abelian-by-cyclic groups defined by an expanding integer matrix.
//!
//! The library is organized bottom-up:
//!
//! * [`exact_kernel`]: integer polynomials, truncated power series, integer
//!   matrices (HNF), Sturm chains. Everything here is exact.
//! * [`series_factor`]: factorization of monic integer polynomials inside the
//!   power series ring, with primality certificates per factor.
//! * [`radix`]: gamma-adic digit expansions, eventually periodic addresses,
//!   and carry arithmetic on them.
//! * [`ideal_lab`]: ideals of the completed ring, membership of digit strings
//!   in confining subsets, saturation, and the ideal preorder.
//! * [`spectral`]: the expanding certificate, eigenvalue structure, norm
//!   bounds for negative powers, invariant-subspace recovery, and the
//!   unitary-times-real one-parameter decomposition.
//! * [`poset`]: divisor posets and assembly of the two-sided Hasse diagram.
//! * [`trees`]: valuation trees, slices, metric, group action, and the
//!   pseudo-valuation / confining-subset correspondence.
//! * [`classify`]: the end-to-end pipeline used by the CLI.

pub mod classify;
pub mod error;
pub mod exact_kernel;
pub mod ideal_lab;
pub mod poset;
pub mod radix;
pub mod series_factor;
pub mod spectral;
pub mod trees;

pub use error::Error;
