//! Sharp Kolmogorov-type inequalities for Marchaud fractional derivatives.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod funcmodel;
pub mod marchaud;
pub mod quad;
pub mod solvers;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
