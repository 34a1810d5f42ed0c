//! Numerical toolkit for the wrapping transformation between class-𝓛
//! measures on the real line and Boolean infinitely divisible measures on
//! the unit circle, with the free, Boolean and monotone convolutions on both
//! domains.
//!
//! Conventions used throughout:
//! - wrapping is clockwise, `x ↦ e^{−ix}`;
//! - a circle measure σ has atoms plus a trigonometric density
//!   `c0 + 2 Re Σ c_n e^{inθ}` with respect to `dθ/2π`;
//! - circle profiles are indexed by the angle θ of `e^{iθ}`.

pub mod class_l;
pub mod convolutions;
pub mod error;
pub mod harness;
pub mod levy;
pub mod measures;
pub mod numerics;
pub mod transforms;
pub mod wrapping;

pub use class_l::ClassLDescriptor;
pub use error::{Error, Result};
pub use measures::{CircleMeasure, MeasureProfile, RealAtomicMeasure};
pub use transforms::{TransformHandle, TransformKind};
pub use wrapping::BooleanIDDescriptor;
