//! Numerical machinery for families of monic real-rooted (hyperbolic)
//! polynomials.
//!
//! The crate is organized around a handful of small value types:
//!
//! - [`poly::PolyCoeffs`] / [`poly::RootVector`] — monic polynomials in
//!   coefficient form and their increasingly ordered real roots, connected by
//!   [`poly::vieta`] and [`sturm::ordered_roots`].
//! - [`tschirn::TschirnForm`] — the centered (subleading-coefficient-free)
//!   form, with normalization, gap splitting, and the root-separation
//!   operator [`tschirn::nuij`].
//! - [`curve::SampledCurve`] — functions sampled on uniform grids, with
//!   finite-difference calculus and `C^k` / Hölder / `L^q` / `W^{1,q}`
//!   estimators, plus the pointwise root-derivative bounds in [`bounds`].
//! - [`metric::UnorderedTuple`] — multisets of reals with the sorted
//!   representative metric, metric speed, and q-energy of tuple curves.
//! - [`geom::SampledField`] — root fields over 1- and 2-parameter boxes with
//!   Jacobian-minor norms and graph surface areas.
//! - [`expr::Expr`] — a tiny expression language for defining coefficient or
//!   root functions of a parameter `x` and a sequence index `n`.
//!
//! Everything is `no_std` + `alloc`; all operations are pure functions of
//! their inputs and the value types are plain data, safe to share across
//! threads.

#![no_std]
// `!(x <= y)` guards are deliberate: a NaN must register as a violation,
// which the suggested `partial_cmp` rewrites would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod curve;
pub mod error;
pub mod expr;
pub mod geom;
pub(crate) mod math;
pub mod metric;
pub mod poly;
pub mod sturm;
pub mod tschirn;

pub use error::Error;
pub use poly::{PolyCoeffs, RootVector};
