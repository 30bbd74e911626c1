//! The discrete-time Poisson hyperbolic staircase.
//!
//! The chain starts at `X_0 = 1`. From state `x` it jumps, with probability
//! `p x`, to a uniform point of `(0, x)`, and otherwise stays at `x`. This
//! crate provides
//!
//! * a seedable simulator ([`simulate`]);
//! * the exact marginal law, joint survival function and moments of `X_n`
//!   ([`exact_dist`]);
//! * the law of the jump counter `N_n` together with an exact recursion
//!   oracle ([`counting`], built on [`series`]);
//! * the Laplace transform of the partial sums `X_1 + ... + X_n`, by two
//!   independent numerical routes ([`transform`]);
//! * martingale families `f_n(X_n)` ([`martingale`]);
//! * statistical gates and a one-shot verification suite ([`stats`],
//!   [`verify`]).
//!
//! Analytic routines are generic over [`Scalar`], so the same formula runs
//! on exact rationals or on `f64`.
//!
//! ```
//! use staircase::{counting, Rational, Scalar};
//!
//! let p = Rational::from_ratio(1, 2);
//! let table = counting::pmf(&p, 2);
//! assert_eq!(table.entries, vec![
//!     Rational::from_ratio(1, 4),
//!     Rational::from_ratio(5, 8),
//!     Rational::from_ratio(1, 8),
//! ]);
//! ```

// Argument checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counting;
pub mod error;
pub mod exact_dist;
pub mod martingale;
pub mod params;
pub mod quad;
pub mod scalar;
pub mod series;
pub mod simulate;
pub mod stats;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use params::{Config, ModelParams, NumericMode, Tolerances};
pub use scalar::{Rational, Scalar};

// The guide under `book/` is compiled here so its snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/marginal-and-joint.md")]
    mod marginal_and_joint {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/laplace.md")]
    mod laplace {}
    #[doc = include_str!("../../../book/src/martingales.md")]
    mod martingales {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
