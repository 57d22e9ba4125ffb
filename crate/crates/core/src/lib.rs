//! Bohr-type radii for sense-preserving K-quasiconformal harmonic mappings
//! `f = h + conj(g)` whose analytic part is subordinate to a convex function,
//! a concave univalent function with pole `p`, or a concave univalent
//! function with opening angle `πα`.
//!
//! The crate is layered bottom-up:
//!
//! * [`power_series`]: truncated complex Taylor series with certified tails.
//! * [`functions`]: the extremal targets `c`, `f_a`, `k_p` and `f_α`.
//! * [`radius_equations`]: the nine real functions whose unique zeros are
//!   the radii.
//! * [`rootfind`]: certified bracketing bisection.
//! * [`bohr`]: theorem-level API, extremal mappings, sharpness and randomized
//!   subordination checks.
//! * [`tables`]: reproduction of the published tables and closed forms.
//! * [`cli`]: the `bohr` command-line front end.

// `!(x < y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bohr;
pub mod cli;
mod error;
pub mod functions;
pub mod power_series;
pub mod radius_equations;
pub mod report;
pub mod rootfind;
pub mod tables;

pub use error::{Error, Result};

pub use bohr::{HarmonicMapping, Theorem, TheoremId};
pub use functions::{FunctionKind, ReferenceFunction};
pub use power_series::{PowerSeries, TailBound, C64};
pub use radius_equations::{Equation, Family, Params};
pub use rootfind::RootEnclosure;

/// Every inequality in this crate is only claimed for `r <= 1/3`.
pub const BOHR_CAP: f64 = 1.0 / 3.0;

/// Default absolute width for root enclosures.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default truncation degree for catalog series.
pub const DEFAULT_ORDER: usize = 64;
