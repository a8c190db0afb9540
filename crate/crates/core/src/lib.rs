//! Numerical laboratory for one-dimensional strong-slip thin-film models.
//!
//! The crate discretizes the strong-slip lubrication system and its limit
//! models on a staggered grid over `[0, 1]`, advances them with linearly
//! implicit steppers, evaluates energy and entropy functionals along
//! trajectories, and runs parameter-limit studies.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod banded;
pub mod constitutive;
pub mod diagnostics;
pub mod discretization;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod interface;

pub use constitutive::PhysParams;
pub use discretization::{Field, Grid, Location, State};
pub use dynamics::{ModelKind, StepControl};
pub use error::{Error, Result};
