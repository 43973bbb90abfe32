//! Symbolic comparison of inversion hardness for univariate functions, with
//! a small prime-field laboratory for the matching modular problems.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

pub mod asymptotics;
pub mod catalog;
pub mod empirics;
pub mod coeff;
pub mod error;
pub mod expr;
pub mod field;
pub mod granularity;

/// Floating-point scalar used by numeric evaluation.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub type Bindings64 = expr::Bindings<f64>;
pub type Bindings32 = expr::Bindings<f32>;
