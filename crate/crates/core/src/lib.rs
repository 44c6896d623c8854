//! Geodesic lengths on Teichmüller spaces of one-holed and punctured
//! surfaces, computed from Fenchel–Nielsen coordinates through holonomy
//! traces, together with finite-family estimators of the Thurston and arc
//! metrics and translation-length experiments for mapping classes.
//!
//! Every routine is generic over the scalar type ([`Real`]); the `…64`
//! aliases below fix it to `f64`, which is what the tolerances in the test
//! suite are calibrated for.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod error;
pub mod hyptrig;
pub mod mcg;
pub mod metrics;
pub mod optim;
pub mod pantsnet;
pub mod pinch;
pub mod scalar;
pub mod torus;
pub mod word;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mat2f64 = hyptrig::Mat2<f64>;
pub type Geodesic64 = hyptrig::Geodesic<f64>;
pub type FnTorus64 = torus::FnTorus<f64>;
pub type Rep64 = torus::Rep<f64>;
pub type PantsRep64 = pantsnet::GluedRep<f64>;
pub type FnPoint64 = pantsnet::FnPoint<f64>;
