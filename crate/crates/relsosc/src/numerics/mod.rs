//! Complex special functions and quadrature primitives.
//!
//! Everything here is a pure function of its arguments and safe to call
//! concurrently. All arithmetic is double precision; gamma ratios go through
//! log-gamma differences and power series carry explicit tail cutoffs.

pub mod gamma;
pub mod hyper;
pub mod quad;

pub use gamma::{gamma, generalized_degree, i_pow, log_gamma, pochhammer};
pub use hyper::{cdh_polynomial, gauss_2f1};
pub use quad::{
    semi_infinite_quadrature, CompensatedComplex, CompensatedSum, DomainTag, QuadratureRule,
};
