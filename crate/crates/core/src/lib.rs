//! matchkit: an exact-arithmetic toolkit for power-series identities,
//! Bell-polynomial transforms, matching counts in regular bipartite graphs,
//! and automated desk-scale conjecture checkers.
//!
//! All numeric work is over arbitrary-precision rationals; identity checks
//! mean exact equality of canonical forms, never approximate comparison.
//! Every value is immutable after construction and every operation is a pure
//! function, so the whole kernel is safe to drive from multiple threads.

pub mod bellkit;
pub mod conjlab;
pub mod exactalg;
pub mod ftransform;
pub mod graphlab;
mod numutil;
pub mod pernici;
pub mod stirlconf;

pub use exactalg::{rat, ratio, Monomial, MultiPoly, Rational, RationalFn, TruncSeries, VarId};
