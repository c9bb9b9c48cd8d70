//! Explicit maximal plurisubharmonic functions and their verifiers.
//!
//! Four analytic pairs `(V, M)` are modelled, each with its maximal function
//! `u: M → [0, π/4)` vanishing on the center `V` and its pseudo-metric `E`:
//!
//! * the strip `|Im z| < π/4` over ℝ, with `u = |Im z|`;
//! * the unit disc over `(−1, 1)`, with `u = |Im arctanh z|`;
//! * strip tubes `μ(Im z) < π/4` over ℝⁿ for a convex gauge `μ`, with `u = μ(Im z)`;
//! * elliptic tubes over a bounded convex `D ⊂ ℝⁿ`, cut out by
//!   `p(z)p(z̄) < 1` for the centered gauge `p`, with
//!   `u = (arctan p(z) + arctan p(z̄))/2`.
//!
//! Around them sit closed-form and bisection gauges ([`convex`]), geodesic
//! charts and extremal discs ([`geodesics`]), finite-difference Levi forms
//! and Monge-Ampère checks ([`levi`]), competitor comparisons
//! ([`maximality`]), named suites ([`suites`]) and the command line ([`cli`]).
//!
//! ```
//! use pluritube::convex::ConvexBody;
//! use pluritube::models::{ComplexPoint, Model};
//!
//! let tube = Model::EllipticTube(ConvexBody::unit_ball(2));
//! let z = ComplexPoint::from_slices(&[0.0, 0.0], &[0.5, 0.0]).unwrap();
//! assert!((tube.u_max(&z).unwrap() - 0.5f64.atan()).abs() < 1e-15);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod convex;
pub mod error;
pub mod geodesics;
pub mod levi;
pub mod maximality;
pub mod models;
pub mod report;
pub mod sampling;
pub mod suites;

pub use error::{Error, Result};
