//! Relative convexity, majorization and weighted majorization of discrete
//! measures, with numerical certificates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod error;
pub mod function;
pub mod geometry;
pub mod inequalities;
mod lp;
pub mod majorization;
pub mod measures;
pub mod polyroots;
pub mod report;
pub mod spectra;
pub mod transport;

pub use convexity::{Boundary, CertifyOptions, CertifyOutcome, Direction, Side};
pub use error::{Error, Result};
pub use function::ScalarFunction;
pub use majorization::DoublyStochasticMatrix;
pub use measures::{Integrand, Interval, Region, WeightedMeasure};
pub use num_complex::Complex64;
pub use polyroots::ComplexPolynomial;
pub use report::{InequalityReport, Relation};
pub use spectra::SymmetricMatrix;
pub use transport::{FeasibilityVerdict, RowStochasticCertificate};
