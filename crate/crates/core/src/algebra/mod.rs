//! Exact linear and homological algebra: Laurent polynomials, sparse integer
//! matrices with Smith normal form, bigraded complexes with homology over
//! Q / F_p / Z, and filtered reduction producing spectral-sequence pages.

mod complex;
mod filtered;
mod laurent;
mod matrix;

pub use complex::{homology, BigradedComplex, Coeffs, GradedGenerator, HomologyTable};
pub(crate) use complex::is_prime as is_prime_u64;
pub use filtered::{
    filtered_reduce_p, filtered_reduce_q, spectral_pages, FieldOps, FilteredModel, PrimeField,
    QField, SpectralPages,
};
pub use laurent::Laurent;
pub use matrix::{smith_normal_form, SparseIntMat};
