//! Exact and certified-numeric computations on the Siegel modular threefold
//! `A2(2)` in its classical model inside P^9.
//!
//! The ten coordinates of P^9 are indexed by the even theta characteristics
//! in binary order. The model is cut out by five linear forms and one quartic;
//! the ten coordinate hyperplane sections `D_i = {x_i = 0}` are the boundary
//! divisors whose intersection pattern, symmetry group and height estimates
//! this crate materialises:
//!
//! * [`chars`] — the finite geometry of even theta characteristics
//!   (syzygous/azygous triples, Göpel and azygous quadruples),
//! * [`symplectic`] — `Sp4(F2)` as explicit matrices, the twisted "dot"
//!   action on characteristics and the induced signed coordinate action,
//! * [`scalar`] / [`linalg`] — exact rationals, prime fields and dense row
//!   reduction with kernel bases,
//! * [`variety`] — equation evaluation, exact membership, small-point
//!   enumeration over `Q` and `F_p`, and linear vanishing closures,
//! * [`igraph`] — the graph of intersection of the ten boundary divisors,
//! * [`runge`] — the explicit threshold constants and uniform height bounds
//!   obtained by Runge's method,
//! * [`baker`] — the explicit linear-forms-in-logarithms constants and the
//!   final non-uniform height bound, with an outward-rounded audit mode,
//! * [`search`] — the exhaustive bounded-height point search over `Z[1/2]`,
//! * [`theta`] — floating point theta constants with certified truncation,
//!   used to sample the embedding and certify its identities numerically.

pub mod baker;
pub mod chars;
pub mod igraph;
pub mod interval;
pub mod linalg;
pub mod runge;
pub mod scalar;
pub mod search;
pub mod symplectic;
pub mod theta;
pub mod variety;

pub use scalar::{Domain, Scalar};
