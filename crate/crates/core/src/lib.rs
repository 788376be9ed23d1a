//! Frog model on the integer line with discrete Weibull lifetimes and random
//! survival parameters.
//!
//! The crate provides
//!
//! * exact laws and samplers for lifetimes, survival parameters and initial
//!   occupations ([`distributions`]),
//! * exact first-passage computations for the simple symmetric walk
//!   ([`walk`]),
//! * certified and Monte Carlo estimators of the one-particle displacement
//!   tail `P(D→ ≥ n)` ([`one_particle`]),
//! * critical constants and the extinction/survival classifier
//!   ([`asymptotics`]),
//! * the full interacting simulation ([`frog`]),
//! * executable numerical checks of the auxiliary estimates ([`verify`]).
//!
//! Special functions and critical constants are generic over [`Scalar`]
//! (`f32` or `f64`); everything that touches simulation or certified sums
//! works in [`Real`].

// `!(x > 0.0)` is the NaN-rejecting guard throughout; coefficient tables keep full digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotics;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod frog;
pub mod one_particle;
pub mod quad;
pub mod rng;
pub mod special;
pub mod verify;
pub mod walk;

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use error::{Error, Result};

/// Floating-point scalar the generic numerics are written against.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Working precision for simulation and certified sums.
pub type Real = f64;

/// Critical constants in working precision.
pub type Constants = asymptotics::CriticalConstants<f64>;
/// Critical constants in single precision.
pub type Constants32 = asymptotics::CriticalConstants<f32>;
