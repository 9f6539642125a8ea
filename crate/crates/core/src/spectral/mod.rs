//! Exact Perron–Frobenius eigenvalues of nonnegative integer matrices.

mod pf;
mod poly;

pub use pf::{complex_roots, is_aperiodic, is_irreducible, minimal_factor, pf_eigenvector, row_sums, PfValue, SpectralError};
pub use poly::{count_roots, Dyadic, IntPoly};
