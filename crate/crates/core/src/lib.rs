//! Exact-arithmetic toolkit for the (n,2,2) Bell scenario: `n` observers,
//! two settings each, two outcomes per setting.
//!
//! * [`boxspace`]: binary vectors, boxes and correlation coordinates.
//! * [`bellpoly`]: deterministic vertices, ranks, tightness, locality.
//! * [`functional`]: Bell functionals, standard form, the Hardy family.
//! * [`nsbox`]: non-signaling checks and extremality.
//! * [`duality`]: tight inequalities ↔ extremal non-signaling boxes.
//!
//! Every verdict is computed with arbitrary-precision rationals; nothing
//! in a certification path touches floating point.
//!
//! ```
//! use hardybox::prelude::*;
//!
//! let n = Parties::new(2)?;
//! let report = is_tight(&hardy_functional(n))?;
//! assert!(report.tight);
//! assert_eq!(report.rank, 8);
//! # Ok::<(), hardybox::Error>(())
//! ```

pub mod bellpoly;
pub mod boxspace;
pub mod duality;
mod error;
pub mod functional;
pub mod linalg;
pub mod lp;
pub mod nsbox;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::bellpoly::{
        deterministic_box, enumerate_vertices, is_local, is_tight, saturating_vertices,
        span_dimension, Certificate, DeterministicStrategy, Locality,
    };
    pub use crate::boxspace::{
        box_from_correlations, correlations_of_box, integer, marginal, ratio, BinaryVector,
        BoxTable, CorrelationTable, Parties, Rational,
    };
    pub use crate::duality::{
        box_from_functional, corrfunctional_from_nsbox, functional_from_box, hardy_box,
        nscorr_from_functional, pr_box, LocalRelabeling, Relabeling,
    };
    pub use crate::functional::{
        correlation_coeffs, evaluate, hardy_functional, hardy_test, standardize, theta_value,
        BellFunctional, CorrelationFunctional,
    };
    pub use crate::nsbox::{is_extremal, is_nonsignaling, zeros};
}

/// The guide's chapters and the README, compiled so that every snippet runs under
/// `cargo test --doc`.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/box-space.md")]
    pub mod box_space {}
    #[doc = include_str!("../../../book/src/bell-polytope.md")]
    pub mod bell_polytope {}
    #[doc = include_str!("../../../book/src/standard-form.md")]
    pub mod standard_form {}
    #[doc = include_str!("../../../book/src/nonsignaling.md")]
    pub mod nonsignaling {}
    #[doc = include_str!("../../../book/src/duality.md")]
    pub mod duality {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
}
