//! Complex volumes of hyperbolic alternating knot orbifolds.
//!
//! The complex volume i(vol + i·cs) of the orbifold with cone angle 2π/r
//! along the knot is read off a critical point of a dilogarithm potential
//! attached to a knot diagram. Two pipelines are provided: a closed form for
//! the double twist knots J(2n,−2m), driven by the roots of their
//! Riley–Mednykh polynomial, and a generic Newton/continuation solver for any
//! reduced alternating diagram.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chebyshev;
pub mod cli;
pub mod complexfn;
pub mod cvolume;
pub mod diagram;
pub mod error;
pub mod jknot;
pub mod polyroots;
pub mod potential;
pub mod solver;

pub use complexfn::Cx;
pub use error::{Error, Result};
