//! Exact base-B digit sums, carry-tracking addition and correction terms,
//! together with machinery that checks digit-sum generating functions:
//! an exact truncated series engine in `q` with Laurent-polynomial
//! coefficients in `z`, and double-precision zeta and Dirichlet-series
//! numerics with tail bounds.

pub mod analytic;
pub mod cli;
pub mod digit_core;
pub mod exec;
pub mod genfun;
pub mod props;
pub mod series;
