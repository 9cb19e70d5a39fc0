//! Exact invariants of plane-curve singularity germs.
//!
//! Given a bivariate polynomial germ f(x, y) with f(0,0) = 0 and
//! coefficients in Q(i), the engine computes the Puiseux roots of f and of
//! its polar f_x in exact arithmetic over dynamically grown algebraic
//! extension towers, builds the Kuo-Lu contact tree, decorates every polar
//! arc with its invariants (delta, h, bar, tangent line, gradient degree),
//! groups the arcs into polar clusters and gradient canyons, and derives
//! the numeric invariants: polar quotients, Milnor numbers, Lojasiewicz
//! exponents, and the HP pairs.  Canonical signatures built from the
//! invariant data certify that two germs are *not* topologically (or not
//! bi-Lipschitz) right-equivalent.

pub mod error;
pub mod expand;
pub mod gaussian;
pub mod parse;
pub mod poly;
pub mod series;
pub mod tower;

pub use error::{Error, Result};
pub use gaussian::{GaussianRational, Rat};
pub use poly::Germ;
pub use series::{ExtRat, PuiseuxSeries};
pub use tower::{Rep, Tower};
